//! Néron–Severi lattice of the general member of the family, in the ordered
//! basis `(σ, F, N_1, …, N_7, N̂)`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::FibrationError;
use crate::lattice::{self, direct_sum, eigen_sublattice, IntegralLattice, LatticeError, Sublattice};
use crate::matrix::{self, Matrix};

pub const NS_RANK: usize = 10;

const SIGMA: usize = 0;
const FIBER: usize = 1;
const N_HAT: usize = 9;

/// A divisor class as rational coordinates in the NS basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NsClass(Vec<BigRational>);

impl NsClass {
    pub fn new(coords: Vec<BigRational>) -> Option<Self> {
        (coords.len() == NS_RANK).then_some(NsClass(coords))
    }

    pub fn from_ints(coords: &[i64]) -> Option<Self> {
        Self::new(coords.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    fn basis(i: usize) -> Self {
        let mut c = vec![BigRational::zero(); NS_RANK];
        c[i] = BigRational::one();
        NsClass(c)
    }

    pub fn zero() -> Self {
        NsClass(vec![BigRational::zero(); NS_RANK])
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = BigRational::from_integer(k.into());
        NsClass(self.0.iter().map(|x| x * &k).collect())
    }

    /// In the Z-span of the basis.
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(BigRational::is_integer)
    }

    /// Integral and not a proper multiple of another integral class.
    pub fn is_primitive(&self) -> bool {
        self.is_integral() && self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(&x.to_integer())).is_one()
    }

    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.is_integral().then(|| self.0.iter().map(BigRational::to_integer).collect())
    }
}

impl Add for &NsClass {
    type Output = NsClass;
    fn add(self, rhs: &NsClass) -> NsClass {
        NsClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &NsClass {
    type Output = NsClass;
    fn sub(self, rhs: &NsClass) -> NsClass {
        NsClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &NsClass {
    type Output = NsClass;
    fn neg(self) -> NsClass {
        NsClass(self.0.iter().map(|a| -a).collect())
    }
}

/// The rank-10 lattice `⟨σ,F⟩ ⊕ ⟨N_1,…,N_8,N̂⟩` with its named classes.
#[derive(Clone, Debug)]
pub struct NsLattice {
    pub lattice: IntegralLattice,
    classes: Vec<(String, NsClass)>,
}

impl NsLattice {
    pub fn intersect(&self, c1: &NsClass, c2: &NsClass) -> BigRational {
        matrix::bilinear(&matrix::to_rational(self.lattice.gram()), c1.coords(), c2.coords())
    }

    /// Named classes: `sigma`, `F`, `N1`…`N8`, `Nhat`, `tau`.
    pub fn classes(&self) -> &[(String, NsClass)] {
        &self.classes
    }

    pub fn class(&self, name: &str) -> Option<&NsClass> {
        self.classes.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn sigma(&self) -> NsClass {
        NsClass::basis(SIGMA)
    }

    pub fn fiber(&self) -> NsClass {
        NsClass::basis(FIBER)
    }

    pub fn n_hat(&self) -> NsClass {
        NsClass::basis(N_HAT)
    }

    /// `N_i` for `i` in `1..=8`; `N_8 = 2N̂ − Σ_{i≤7} N_i`.
    pub fn n(&self, i: usize) -> NsClass {
        assert!((1..=8).contains(&i), "N_i is indexed 1..=8");
        if i < 8 {
            NsClass::basis(i + 1)
        } else {
            let mut c = self.n_hat().scale(2);
            for j in 1..8 {
                c = &c - &NsClass::basis(j + 1);
            }
            c
        }
    }

    /// The 2-torsion section `τ = σ + 2F − N̂`.
    pub fn tau(&self) -> NsClass {
        &(&self.sigma() + &self.fiber().scale(2)) - &self.n_hat()
    }

    pub fn apply(&self, action: &Matrix<BigInt>, c: &NsClass) -> NsClass {
        NsClass(matrix::to_rational(action).mul_vec(c.coords()))
    }
}

pub fn ns_lattice() -> NsLattice {
    let plane = IntegralLattice::new(matrix::int_matrix(&[&[-2, 1], &[1, 0]])).expect("nondegenerate");
    let lattice = direct_sum(&plane, &IntegralLattice::new(lattice::nikulin_gram()).expect("nondegenerate"));
    let mut ns = NsLattice { lattice, classes: Vec::new() };
    let mut classes = vec![("sigma".to_string(), ns.sigma()), ("F".to_string(), ns.fiber())];
    for i in 1..=8 {
        classes.push((format!("N{}", i), ns.n(i)));
    }
    classes.push(("Nhat".to_string(), ns.n_hat()));
    classes.push(("tau".to_string(), ns.tau()));
    ns.classes = classes;
    ns
}

/// `C = eN + F + σ + τ` with `N` a fibre class, i.e. `(e+1)F + σ + τ`.
pub fn curve_class_c(ns: &NsLattice, e: i64) -> Result<NsClass, FibrationError> {
    if e < 2 {
        return Err(FibrationError::ETooSmall(e));
    }
    Ok(&(&ns.fiber().scale(e + 1) + &ns.sigma()) + &ns.tau())
}

/// `σ, τ, F, N_1…N_8` and the complementary fibre components `F − N_i`.
pub fn default_test_classes(ns: &NsLattice) -> Vec<(String, NsClass)> {
    let mut out = vec![("sigma".to_string(), ns.sigma()), ("tau".to_string(), ns.tau()), ("F".to_string(), ns.fiber())];
    for i in 1..=8 {
        out.push((format!("N{}", i), ns.n(i)));
    }
    for i in 1..=8 {
        out.push((format!("F-N{}", i), &ns.fiber() - &ns.n(i)));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityReport {
    pub square: BigRational,
    pub pairings: Vec<(String, BigRational)>,
    /// Names of non-positive entries; `"L^2"` for the self-intersection.
    pub flagged: Vec<String>,
}

impl PositivityReport {
    pub fn all_positive(&self) -> bool {
        self.flagged.is_empty()
    }
}

pub fn positivity_report(ns: &NsLattice, l: &NsClass, tests: &[(String, NsClass)]) -> PositivityReport {
    let square = ns.intersect(l, l);
    let mut flagged = Vec::new();
    if !square.is_positive() {
        flagged.push("L^2".to_string());
    }
    let pairings: Vec<(String, BigRational)> =
        tests.iter().map(|(name, c)| (name.clone(), ns.intersect(l, c))).collect();
    for (name, v) in &pairings {
        if !v.is_positive() {
            flagged.push(name.clone());
        }
    }
    PositivityReport { square, pairings, flagged }
}

/// Action of translation by `τ` on the NS basis (columns are images):
/// `σ ↦ τ`, `F ↦ F`, `N_i ↦ F − N_i`, hence `N̂ ↦ 4F − N̂`.
pub fn involution_action() -> Matrix<BigInt> {
    let mut m = Matrix::<BigInt>::zeros(NS_RANK, NS_RANK);
    let one = BigInt::one;
    // σ ↦ σ + 2F − N̂
    m[(SIGMA, SIGMA)] = one();
    m[(FIBER, SIGMA)] = BigInt::from(2);
    m[(N_HAT, SIGMA)] = -one();
    m[(FIBER, FIBER)] = one();
    for j in 2..N_HAT {
        m[(FIBER, j)] = one();
        m[(j, j)] = -one();
    }
    m[(FIBER, N_HAT)] = BigInt::from(4);
    m[(N_HAT, N_HAT)] = -one();
    m
}

#[derive(Clone, Debug)]
pub struct InvolutionSplit {
    pub invariant: Sublattice,
    pub anti_invariant: Sublattice,
}

pub fn ns_involution_split(ns: &NsLattice) -> Result<InvolutionSplit, LatticeError> {
    let m = involution_action();
    Ok(InvolutionSplit {
        invariant: eigen_sublattice(&m, 1, &ns.lattice)?,
        anti_invariant: eigen_sublattice(&m, -1, &ns.lattice)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Signature;
    use crate::matrix::rat;

    #[test]
    fn lattice_invariants() {
        let ns = ns_lattice();
        assert_eq!(ns.lattice.rank(), 10);
        assert!(ns.lattice.is_even());
        assert_eq!(ns.lattice.signature(), Signature { positive: 1, negative: 9 });
        assert_eq!(ns.lattice.det().abs(), BigInt::from(64));
        assert_eq!(ns.classes().len(), 12);
    }

    #[test]
    fn tau_pairings() {
        let ns = ns_lattice();
        let tau = ns.tau();
        assert_eq!(ns.intersect(&tau, &tau), rat(-2, 1));
        assert_eq!(ns.intersect(&tau, &ns.sigma()), rat(0, 1));
        assert_eq!(ns.intersect(&tau, &ns.fiber()), rat(1, 1));
        for i in 1..=8 {
            assert_eq!(ns.intersect(&tau, &ns.n(i)), rat(1, 1));
        }
        assert_eq!(ns.intersect(&ns.fiber(), &ns.fiber()), rat(0, 1));
        assert_eq!(ns.intersect(&ns.sigma(), &ns.sigma()), rat(-2, 1));
        assert_eq!(ns.intersect(&ns.fiber(), &ns.n_hat()), rat(0, 1));
    }

    #[test]
    fn n8_is_a_root_orthogonal_to_the_others() {
        let ns = ns_lattice();
        let n8 = ns.n(8);
        assert!(n8.is_integral());
        assert_eq!(ns.intersect(&n8, &n8), rat(-2, 1));
        for i in 1..8 {
            assert_eq!(ns.intersect(&n8, &ns.n(i)), rat(0, 1));
        }
        let sum = (1..=8).fold(NsClass::zero(), |acc, i| &acc + &ns.n(i));
        assert_eq!(sum, ns.n_hat().scale(2));
    }

    #[test]
    fn curve_class() {
        let ns = ns_lattice();
        for e in 2..=10 {
            let c = curve_class_c(&ns, e).unwrap();
            assert_eq!(ns.intersect(&c, &c), rat(4 * e, 1));
            assert_eq!(ns.intersect(&c, &ns.sigma()), rat(e - 1, 1));
            assert_eq!(ns.intersect(&c, &ns.tau()), rat(e - 1, 1));
            assert_eq!(ns.intersect(&c, &ns.fiber()), rat(2, 1));
            assert!(c.is_primitive());
        }
        assert_eq!(curve_class_c(&ns, 1), Err(FibrationError::ETooSmall(1)));
    }

    #[test]
    fn positivity() {
        let ns = ns_lattice();
        let c = curve_class_c(&ns, 2).unwrap();
        let r = positivity_report(&ns, &c, &default_test_classes(&ns));
        assert!(r.all_positive());
        assert_eq!(r.square, rat(8, 1));

        let f = ns.fiber();
        let r = positivity_report(&ns, &f, &[("F".to_string(), f.clone())]);
        assert_eq!(r.flagged, vec!["L^2".to_string(), "F".to_string()]);

        let ms = -&ns.sigma();
        let r = positivity_report(&ns, &ms, &[("sigma".to_string(), ns.sigma())]);
        assert_eq!(r.pairings[0].1, rat(2, 1));
        assert_eq!(r.flagged, vec!["L^2".to_string()]);
    }

    #[test]
    fn involution() {
        let ns = ns_lattice();
        let m = involution_action();
        assert_eq!(m.mul(&m), Matrix::identity(NS_RANK));
        assert_eq!(m.transpose().mul(ns.lattice.gram()).mul(&m), ns.lattice.gram().clone());
        assert_eq!(ns.apply(&m, &ns.sigma()), ns.tau());
        assert_eq!(ns.apply(&m, &ns.tau()), ns.sigma());
        assert_eq!(ns.apply(&m, &ns.fiber()), ns.fiber());
        assert_eq!(ns.apply(&m, &ns.n(8)), &ns.fiber() - &ns.n(8));
        for e in 2..=5 {
            let c = curve_class_c(&ns, e).unwrap();
            assert_eq!(ns.apply(&m, &c), c);
        }
    }

    #[test]
    fn split() {
        let ns = ns_lattice();
        let s = ns_involution_split(&ns).unwrap();
        assert_eq!(s.invariant.lattice.rank(), 2);
        let anti = &s.anti_invariant.lattice;
        assert_eq!(anti.rank(), 8);
        assert!(anti.is_even() && anti.is_negative_definite());
        assert_eq!(anti.det().abs(), BigInt::from(256));
        let cross = s.invariant.basis.transpose().mul(ns.lattice.gram()).mul(&s.anti_invariant.basis);
        assert!(cross.to_rows().iter().flatten().all(Zero::is_zero));
    }
}
