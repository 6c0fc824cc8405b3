use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{IntegralLattice, LatticeError};
use crate::matrix::{self, Matrix};

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// Reduces `x` modulo 2 into `[0, 2)`.
fn mod_two(x: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let q = (x / &two).floor();
    x - q * two
}

/// A nontrivial class of `L*/L`, as rational coordinates in the basis of `L`
/// reduced into `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GlueVector {
    coords: Vec<BigRational>,
    order: BigInt,
}

impl GlueVector {
    /// Fails with `NotInDual` when `coords` is integral, i.e. the trivial class.
    pub fn new(coords: Vec<BigRational>) -> Result<Self, LatticeError> {
        let coords: Vec<BigRational> = coords.iter().map(frac).collect();
        let order = matrix::denominator_lcm(&coords);
        if order.is_one() {
            return Err(LatticeError::NotInDual);
        }
        Ok(GlueVector { coords, order })
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    /// Pairs integrally with every basis vector of `lattice`.
    pub fn in_dual(&self, lattice: &IntegralLattice) -> bool {
        lattice.rank() == self.coords.len()
            && matrix::to_rational(lattice.gram()).mul_vec(&self.coords).iter().all(|x| x.is_integer())
    }
}

/// `L*/L` with generator lifts and, for even lattices, the discriminant
/// quadratic form on the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    elementary_divisors: Vec<BigInt>,
    generators: Vec<Vec<BigRational>>,
    qvalues: Option<Vec<BigRational>>,
    // Rows of the left Smith transform matching the nontrivial factors.
    coord_rows: Vec<Vec<BigInt>>,
}

impl DiscriminantGroup {
    pub fn new(lattice: &IntegralLattice) -> Self {
        // U·G·V = D, so L* = G⁻¹Zⁿ has generators V·eᵢ/dᵢ.
        let s = matrix::smith(lattice.gram());
        let mut elementary_divisors = Vec::new();
        let mut generators = Vec::new();
        let mut coord_rows = Vec::new();
        for (i, d) in s.diagonal.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            let dq = BigRational::from_integer(d.clone());
            let g: Vec<BigRational> =
                s.v.column(i).into_iter().map(|x| frac(&(BigRational::from_integer(x) / &dq))).collect();
            elementary_divisors.push(d.clone());
            generators.push(g);
            coord_rows.push(s.u.row(i).to_vec());
        }
        let qvalues = lattice.is_even().then(|| generators.iter().map(|g| q_value(lattice, g)).collect());
        DiscriminantGroup { elementary_divisors, generators, qvalues, coord_rows }
    }

    pub fn elementary_divisors(&self) -> &[BigInt] {
        &self.elementary_divisors
    }

    pub fn generators(&self) -> &[Vec<BigRational>] {
        &self.generators
    }

    /// `q(gᵢ) ∈ [0, 2)`; `None` for odd lattices where `q` is not defined.
    pub fn qvalues(&self) -> Option<&[BigRational]> {
        self.qvalues.as_deref()
    }

    pub fn order(&self) -> BigInt {
        self.elementary_divisors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.elementary_divisors.is_empty()
    }

    /// Coordinates of a dual vector with respect to the generators, each
    /// reduced mod its elementary divisor.
    pub fn coordinates(&self, lattice: &IntegralLattice, x: &[BigRational]) -> Result<Vec<BigInt>, LatticeError> {
        let gx = matrix::to_rational(lattice.gram()).mul_vec(x);
        if !gx.iter().all(|v| v.is_integer()) {
            return Err(LatticeError::NotInDual);
        }
        let gx: Vec<BigInt> = gx.iter().map(|v| v.to_integer()).collect();
        Ok(self
            .coord_rows
            .iter()
            .zip(&self.elementary_divisors)
            .map(|(row, d)| row.iter().zip(&gx).map(|(a, b)| a * b).sum::<BigInt>().mod_floor(d))
            .collect())
    }

    /// Reduced lift of `Σ cᵢ·gᵢ`.
    pub fn element(&self, coords: &[BigInt]) -> Vec<BigRational> {
        let n = self.generators.first().map_or(0, Vec::len);
        let mut out = alloc::vec![BigRational::zero(); n];
        for (c, g) in coords.iter().zip(&self.generators) {
            for (o, x) in out.iter_mut().zip(g) {
                *o += x * c;
            }
        }
        out.iter().map(frac).collect()
    }

    /// All nonzero elements of order two, lexicographic in their coordinates.
    pub fn two_torsion(&self) -> Vec<GlueVector> {
        let halves: Vec<(usize, BigInt)> =
            self.elementary_divisors.iter().enumerate().filter(|(_, d)| d.is_even()).map(|(i, d)| (i, d / 2)).collect();
        let k = halves.len();
        let mut out = Vec::new();
        for mask in 1u64..(1u64 << k) {
            let mut coords = alloc::vec![BigInt::zero(); self.elementary_divisors.len()];
            for (bit, (i, half)) in halves.iter().enumerate() {
                // first coordinate is the most significant
                if mask >> (k - 1 - bit) & 1 == 1 {
                    coords[*i] = half.clone();
                }
            }
            if let Ok(g) = GlueVector::new(self.element(&coords)) {
                out.push(g);
            }
        }
        out
    }

    pub fn is_isotropic(&self, lattice: &IntegralLattice, glue: &GlueVector) -> bool {
        q_value(lattice, glue.coords()).is_zero()
    }
}

/// `x·x` reduced into `[0, 2)`.
pub fn q_value(lattice: &IntegralLattice, x: &[BigRational]) -> BigRational {
    mod_two(&matrix::bilinear(&matrix::to_rational(lattice.gram()), x, x))
}

/// An overlattice `M = L + Z·glue`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlattice {
    pub lattice: IntegralLattice,
    /// Column `j` holds the `j`-th basis vector of `L` in the basis of `M`.
    pub embedding: Matrix<BigInt>,
    /// Basis of `M` in rational `L`-coordinates, as columns.
    pub basis: Matrix<BigRational>,
    pub index: BigInt,
    pub glue: GlueVector,
}

/// Adjoins an isotropic glue class to an even lattice.
pub fn overlattice(l: &IntegralLattice, glue: &GlueVector) -> Result<Overlattice, LatticeError> {
    l.check_dim(glue.coords().len())?;
    if !glue.in_dual(l) {
        return Err(LatticeError::NotInDual);
    }
    let norm = matrix::bilinear(&matrix::to_rational(l.gram()), glue.coords(), glue.coords());
    if !norm.is_integer() || norm.to_integer().is_odd() {
        return Err(LatticeError::NotIsotropic);
    }
    let n = glue.order().clone();
    let r = l.rank();
    let nq = BigRational::from_integer(n.clone());
    let scaled: Vec<BigInt> = glue.coords().iter().map(|c| (c * &nq).to_integer()).collect();
    let gens = Matrix::from_fn(r, r + 1, |i, j| {
        if j == r {
            scaled[i].clone()
        } else if i == j {
            n.clone()
        } else {
            BigInt::zero()
        }
    });
    // columns of `scaled_basis` span n·M in L-coordinates
    let scaled_basis = matrix::hermite_column_basis(&gens).expect("n·I has full rank");
    let basis = matrix::to_rational(&scaled_basis).map(|x| x / &nq);
    let gram_q = basis.transpose().mul(&matrix::to_rational(l.gram())).mul(&basis);
    let gram = matrix::to_integer(&gram_q).ok_or(LatticeError::NotIsotropic)?;
    let lattice = IntegralLattice::new(gram)?;
    if !lattice.is_even() && l.is_even() {
        return Err(LatticeError::NotIsotropic);
    }
    let inv = matrix::inverse(&basis).expect("basis is invertible");
    let embedding = matrix::to_integer(&inv).expect("L ⊂ M");
    Ok(Overlattice { lattice, embedding, basis, index: n, glue: glue.clone() })
}
