//! The elliptic K3 surface `y² = x(x² + a(t)x + b(t))` with `deg a ≤ 4`,
//! `deg b ≤ 8`: its singular fibres and its Néron–Severi lattice.

mod kodaira;
mod ns;

pub use kodaira::{classify_fibers, classify_place, euler_check, shioda_tate_rank, FiberReport, Kodaira, Place};
pub use ns::{
    curve_class_c, default_test_classes, involution_action, ns_involution_split, ns_lattice, positivity_report,
    InvolutionSplit, NsClass, NsLattice, PositivityReport, NS_RANK,
};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::poly::{resultant, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibrationError {
    #[error("coefficient {name} has degree {degree}, exceeding {max}")]
    DegreeExceeded { name: &'static str, degree: usize, max: usize },
    #[error("discriminant vanishes identically")]
    IdenticallySingular,
    #[error("valuations {0} match no Kodaira type")]
    NonMinimalUnresolvable(String),
    #[error("curve class needs e >= 2, got {0}")]
    ETooSmall(i64),
}

pub const A_WEIGHT: usize = 4;
pub const B_WEIGHT: usize = 8;

/// Weierstrass data `(a, b)` with the derived invariants
/// `c4 = 16a² − 48b`, `c6 = −64a³ + 288ab`, `Δ = 16b²(a² − 4b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    a: Poly,
    b: Poly,
    c4: Poly,
    c6: Poly,
    delta: Poly,
}

fn k(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl WeierstrassModel {
    pub fn new(a: Poly, b: Poly) -> Result<Self, FibrationError> {
        for (name, p, max) in [("a", &a, A_WEIGHT), ("b", &b, B_WEIGHT)] {
            if let Some(degree) = p.degree().filter(|&d| d > max) {
                return Err(FibrationError::DegreeExceeded { name, degree, max });
            }
        }
        Self::from_parts(a, b)
    }

    /// No degree bounds; used for the chart at infinity and for local work.
    fn from_parts(a: Poly, b: Poly) -> Result<Self, FibrationError> {
        let a2 = &a * &a;
        let c4 = &a2.scale(&k(16)) - &b.scale(&k(48));
        let c6 = &(&a2 * &a).scale(&k(-64)) + &(&a * &b).scale(&k(288));
        let disc = a_sq_minus_4b(&a, &b);
        let delta = (&(&b * &b) * &disc).scale(&k(16));
        if delta.is_zero() {
            return Err(FibrationError::IdenticallySingular);
        }
        Ok(WeierstrassModel { a, b, c4, c6, delta })
    }

    pub fn from_ints(a: &[i64], b: &[i64]) -> Result<Self, FibrationError> {
        Self::new(Poly::from_ints(a), Poly::from_ints(b))
    }

    pub fn a(&self) -> &Poly {
        &self.a
    }

    pub fn b(&self) -> &Poly {
        &self.b
    }

    pub fn c4(&self) -> &Poly {
        &self.c4
    }

    pub fn c6(&self) -> &Poly {
        &self.c6
    }

    pub fn delta(&self) -> &Poly {
        &self.delta
    }

    /// `a² − 4b`, the discriminant of the quadratic factor.
    pub fn quadratic_discriminant(&self) -> Poly {
        a_sq_minus_4b(&self.a, &self.b)
    }

    /// The model in the coordinate `s = 1/t`, with `a`, `b` as sections of
    /// `O(4)`, `O(8)`.
    pub fn at_infinity(&self) -> WeierstrassModel {
        Self::from_parts(self.a.reversed(A_WEIGHT), self.b.reversed(B_WEIGHT))
            .expect("Δ stays nonzero under the weighted substitution")
    }

    /// `y² − x(x² + ax + b)` evaluated at polynomial coordinates.
    pub fn equation_at(&self, x: &Poly, y: &Poly) -> Poly {
        let inner = &(&(x * x) + &(&self.a * x)) + &self.b;
        &(y * y) - &(x * &inner)
    }
}

fn a_sq_minus_4b(a: &Poly, b: &Poly) -> Poly {
    &(a * a) - &b.scale(&k(4))
}

/// Why a model fails to be general in the sense of the special family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenericityIssue {
    BNotSquarefree,
    DiscNotSquarefree,
    CommonFactor,
    ResultantVanishes,
    SingularAtInfinity,
}

impl fmt::Display for GenericityIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenericityIssue::BNotSquarefree => "b not squarefree",
            GenericityIssue::DiscNotSquarefree => "a^2-4b not squarefree",
            GenericityIssue::CommonFactor => "gcd(b, a^2-4b) not constant",
            GenericityIssue::ResultantVanishes => "resultant(b, a^2-4b) vanishes",
            GenericityIssue::SingularAtInfinity => "fibre at infinity singular",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericityReport {
    pub issues: Vec<GenericityIssue>,
}

impl GenericityReport {
    pub fn is_generic(&self) -> bool {
        self.issues.is_empty()
    }
}

pub fn check_generic(model: &WeierstrassModel) -> GenericityReport {
    let b = model.b();
    let disc = model.quadratic_discriminant();
    let mut issues = Vec::new();
    if !b.is_squarefree() {
        issues.push(GenericityIssue::BNotSquarefree);
    }
    if !disc.is_squarefree() {
        issues.push(GenericityIssue::DiscNotSquarefree);
    }
    if !b.gcd(&disc).is_constant() {
        issues.push(GenericityIssue::CommonFactor);
    }
    if resultant(b, &disc).is_zero() {
        issues.push(GenericityIssue::ResultantVanishes);
    }
    let smooth_at_infinity =
        classify_place(model, &Place::Infinity).map(|r| r.kodaira == Kodaira::Smooth).unwrap_or(false);
    if !smooth_at_infinity {
        issues.push(GenericityIssue::SingularAtInfinity);
    }
    GenericityReport { issues }
}

/// `τ = (0, 0)` lies on the curve and equals its own negative, so it is a
/// 2-torsion section.
pub fn two_torsion_check(model: &WeierstrassModel) -> bool {
    let (x, y) = (Poly::zero(), Poly::zero());
    model.equation_at(&x, &y).is_zero() && (-&y) == y
}

/// Coefficients uniform in `[-9, 9]` for full-degree `a`, `b`.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R) -> Option<WeierstrassModel> {
    let mut draw = |n: usize| -> Vec<i64> { (0..n).map(|_| rng.gen_range(-9..=9)).collect() };
    let a = draw(A_WEIGHT + 1);
    let b = draw(B_WEIGHT + 1);
    WeierstrassModel::from_ints(&a, &b).ok()
}

/// Resamples until [`check_generic`] passes; returns the model and the
/// number of draws used.
pub fn sample_generic_model<R: Rng + ?Sized>(rng: &mut R) -> (WeierstrassModel, u32) {
    let mut draws = 0;
    loop {
        draws += 1;
        if let Some(m) = random_model(rng) {
            if check_generic(&m).is_generic() {
                return (m, draws);
            }
        }
    }
}
