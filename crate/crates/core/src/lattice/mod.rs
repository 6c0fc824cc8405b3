//! Integral lattices given by a symmetric Gram matrix.
//!
//! Houses the hyperbolic plane, `E8`, the Nikulin lattice, the polarized
//! lattices `Zℓ ⊕ E8(−2)` and their index-two even overlattices, plus the
//! sublattice machinery (primitivity, orthogonal complements) used by the
//! Néron–Severi computations.

mod discriminant;
mod enumerate;

pub use discriminant::{overlattice, q_value, DiscriminantGroup, GlueVector, Overlattice};
pub use enumerate::{short_vectors, SearchLimit};

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::matrix::{self, Inertia, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("Gram matrix is not square")]
    NotSquare,
    #[error("Gram matrix is not symmetric")]
    NonSymmetric,
    #[error("Gram matrix is degenerate (determinant 0)")]
    Degenerate,
    #[error("unknown standard lattice `{0}`")]
    UnknownName(alloc::string::String),
    #[error("twist factor must be nonzero")]
    ZeroTwist,
    #[error("glue vector is not in the dual lattice")]
    NotInDual,
    #[error("glue vector is not isotropic: overlattice would not be even")]
    NotIsotropic,
    #[error("d must be positive")]
    NonPositiveD,
    #[error("d must be even")]
    OddDegree,
    #[error("no admissible glue vector found")]
    NoGlueFound,
    #[error("sublattice basis has dependent columns")]
    DependentColumns,
    #[error("sublattice is degenerate for the ambient pairing")]
    DegenerateRestriction,
    #[error("short vector search needs a definite lattice")]
    IndefiniteLattice,
    #[error("short vector search exceeds limit (rank {rank}, |norm| {norm})")]
    SearchLimitExceeded { rank: usize, norm: u64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.positive, self.negative)
    }
}

/// A nondegenerate integral lattice with cached invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralLattice {
    gram: Matrix<BigInt>,
    det: BigInt,
    signature: Signature,
    even: bool,
}

impl IntegralLattice {
    pub fn new(gram: Matrix<BigInt>) -> Result<Self, LatticeError> {
        if !gram.is_square() {
            return Err(LatticeError::NotSquare);
        }
        if !gram.is_symmetric() {
            return Err(LatticeError::NonSymmetric);
        }
        let det = matrix::determinant(&gram);
        if det.is_zero() {
            return Err(LatticeError::Degenerate);
        }
        let Inertia { positive, negative, .. } = matrix::inertia(&matrix::to_rational(&gram));
        let even = (0..gram.rows()).all(|i| gram[(i, i)].is_even());
        Ok(IntegralLattice { gram, det, signature: Signature { positive, negative }, even })
    }

    /// The rank-0 lattice, neutral for [`direct_sum`].
    pub fn zero() -> Self {
        IntegralLattice {
            gram: Matrix::zeros(0, 0),
            det: BigInt::one(),
            signature: Signature { positive: 0, negative: 0 },
            even: true,
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix<BigInt> {
        &self.gram
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.abs().is_one()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature.negative == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature.positive == 0
    }

    pub fn pair(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        matrix::bilinear(&self.gram, u, v)
    }

    pub fn norm(&self, v: &[BigInt]) -> BigInt {
        self.pair(v, v)
    }

    /// Gram matrix of the sublattice spanned by the columns of `basis`.
    pub fn restrict(&self, basis: &Matrix<BigInt>) -> Matrix<BigInt> {
        basis.transpose().mul(&self.gram).mul(basis)
    }

    fn check_dim(&self, rows: usize) -> Result<(), LatticeError> {
        if rows == self.rank() {
            Ok(())
        } else {
            Err(LatticeError::DimensionMismatch { expected: self.rank(), got: rows })
        }
    }
}

/// Validated lattice from a Gram matrix given as rows.
pub fn make_lattice(rows: Vec<Vec<BigInt>>) -> Result<IntegralLattice, LatticeError> {
    let gram = Matrix::from_rows(rows).ok_or(LatticeError::NotSquare)?;
    IntegralLattice::new(gram)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardLattice {
    U,
    E8,
    Nikulin,
}

impl FromStr for StandardLattice {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "U" | "u" => Ok(StandardLattice::U),
            "E8" | "e8" => Ok(StandardLattice::E8),
            "NIKULIN" | "Nikulin" | "nikulin" => Ok(StandardLattice::Nikulin),
            other => Err(LatticeError::UnknownName(other.into())),
        }
    }
}

/// Cartan matrix of E8, Bourbaki labelling (node 2 hangs off node 4).
const E8_EDGES: [(usize, usize); 7] = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];

fn e8_gram() -> Matrix<BigInt> {
    let mut g = Matrix::<BigInt>::identity(8).scale(&BigInt::from(2));
    for (i, j) in E8_EDGES {
        g[(i, j)] = BigInt::from(-1);
        g[(j, i)] = BigInt::from(-1);
    }
    g
}

/// Gram of the Nikulin lattice in the basis `(N_1, …, N_7, N̂)` with
/// `N_i² = −2`, `N̂ = ½ΣN_i` over eight orthogonal classes.
pub(crate) fn nikulin_gram() -> Matrix<BigInt> {
    Matrix::from_fn(8, 8, |i, j| match (i, j) {
        (7, 7) => BigInt::from(-4),
        (7, _) | (_, 7) => BigInt::from(-1),
        _ if i == j => BigInt::from(-2),
        _ => BigInt::zero(),
    })
}

pub fn standard_lattice(name: StandardLattice) -> IntegralLattice {
    let gram = match name {
        StandardLattice::U => matrix::int_matrix(&[&[0, 1], &[1, 0]]),
        StandardLattice::E8 => e8_gram(),
        StandardLattice::Nikulin => nikulin_gram(),
    };
    IntegralLattice::new(gram).expect("standard lattices are nondegenerate")
}

pub fn direct_sum(a: &IntegralLattice, b: &IntegralLattice) -> IntegralLattice {
    IntegralLattice {
        gram: a.gram.block_diag(&b.gram),
        det: &a.det * &b.det,
        signature: Signature {
            positive: a.signature.positive + b.signature.positive,
            negative: a.signature.negative + b.signature.negative,
        },
        even: a.even && b.even,
    }
}

/// `L(n)`: the Gram matrix scaled by `n`.
pub fn twist(l: &IntegralLattice, n: i64) -> Result<IntegralLattice, LatticeError> {
    if n == 0 {
        return Err(LatticeError::ZeroTwist);
    }
    IntegralLattice::new(l.gram.scale(&BigInt::from(n)))
}

/// `Λ_d = Zℓ ⊕ E8(−2)` with `ℓ² = 2d`.
pub fn lambda_d(d: i64) -> Result<IntegralLattice, LatticeError> {
    if d < 1 {
        return Err(LatticeError::NonPositiveD);
    }
    let line = IntegralLattice::new(matrix::int_matrix(&[&[2 * d]]))?;
    let e8m2 = twist(&standard_lattice(StandardLattice::E8), -2)?;
    Ok(direct_sum(&line, &e8m2))
}

/// The even index-two overlattice of `Λ_d` (d even) in which `E8(−2)` stays
/// primitive, together with the embedding of `Λ_d`.
pub fn lambda_tilde_d_overlattice(d: i64) -> Result<Overlattice, LatticeError> {
    if d < 1 {
        return Err(LatticeError::NonPositiveD);
    }
    if d.is_odd() {
        return Err(LatticeError::OddDegree);
    }
    let base = lambda_d(d)?;
    let disc = DiscriminantGroup::new(&base);
    let e8_cols: Vec<usize> = (1..9).collect();
    for glue in disc.two_torsion() {
        let coords = glue.coords();
        let mixes = !coords[0].is_integer() && coords[1..].iter().any(|c| !c.is_integer());
        if !mixes || !disc.is_isotropic(&base, &glue) {
            continue;
        }
        let over = overlattice(&base, &glue)?;
        let e8_in_over = over.embedding.select_columns(&e8_cols);
        if is_primitive(&e8_in_over, &over.lattice)? {
            return Ok(over);
        }
    }
    Err(LatticeError::NoGlueFound)
}

pub fn lambda_tilde_d(d: i64) -> Result<IntegralLattice, LatticeError> {
    lambda_tilde_d_overlattice(d).map(|o| o.lattice)
}

/// Whether the columns of `sub_basis` span a primitive sublattice of `ambient`.
pub fn is_primitive(sub_basis: &Matrix<BigInt>, ambient: &IntegralLattice) -> Result<bool, LatticeError> {
    ambient.check_dim(sub_basis.rows())?;
    let s = matrix::smith(sub_basis);
    if s.rank() < sub_basis.cols() {
        return Err(LatticeError::DependentColumns);
    }
    Ok(s.diagonal.iter().all(One::is_one))
}

/// A sublattice together with its basis in ambient coordinates (columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    pub basis: Matrix<BigInt>,
    pub lattice: IntegralLattice,
}

/// Lattice spanned by the columns of `basis`, with the induced pairing.
pub fn sublattice(basis: Matrix<BigInt>, ambient: &IntegralLattice) -> Result<Sublattice, LatticeError> {
    ambient.check_dim(basis.rows())?;
    let lattice = IntegralLattice::new(ambient.restrict(&basis))?;
    Ok(Sublattice { basis, lattice })
}

/// The saturated orthogonal complement of the span of `sub_basis`.
pub fn orthogonal_complement(
    sub_basis: &Matrix<BigInt>,
    ambient: &IntegralLattice,
) -> Result<Sublattice, LatticeError> {
    ambient.check_dim(sub_basis.rows())?;
    if matrix::determinant(&ambient.restrict(sub_basis)).is_zero() {
        return Err(LatticeError::DegenerateRestriction);
    }
    let pairing = sub_basis.transpose().mul(ambient.gram());
    let kernel = matrix::smith(&pairing).kernel();
    sublattice(kernel, ambient)
}

/// Saturated sublattice of vectors fixed by `action` up to `sign`
/// (`sign = 1` invariant, `sign = −1` anti-invariant).
pub fn eigen_sublattice(
    action: &Matrix<BigInt>,
    sign: i64,
    ambient: &IntegralLattice,
) -> Result<Sublattice, LatticeError> {
    ambient.check_dim(action.rows())?;
    let shifted = Matrix::from_fn(action.rows(), action.cols(), |i, j| {
        let d = if i == j { BigInt::from(sign) } else { BigInt::zero() };
        &action[(i, j)] - d
    });
    sublattice(matrix::smith(&shifted).kernel(), ambient)
}
