use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{IntegralLattice, LatticeError};

/// Bounds on exhaustive short-vector enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimit {
    pub max_rank: usize,
    pub max_norm: u64,
}

impl Default for SearchLimit {
    fn default() -> Self {
        SearchLimit { max_rank: 10, max_norm: 16 }
    }
}

/// Number of nonzero vectors `v` with `v·v = norm` in a definite lattice.
pub fn short_vectors(l: &IntegralLattice, norm: i64, limit: SearchLimit) -> Result<u64, LatticeError> {
    let sig = l.signature();
    if sig.positive > 0 && sig.negative > 0 {
        return Err(LatticeError::IndefiniteLattice);
    }
    if l.rank() > limit.max_rank || norm.unsigned_abs() > limit.max_norm {
        return Err(LatticeError::SearchLimitExceeded { rank: l.rank(), norm: norm.unsigned_abs() });
    }
    let negative = sig.negative > 0;
    if norm == 0 || (norm < 0) != negative || (l.is_even() && norm.is_odd()) {
        return Ok(0);
    }
    let gram = if negative { l.gram().map(|x| -x) } else { l.gram().clone() };
    let target = BigRational::from_integer(BigInt::from(norm.abs()));
    let form = Cholesky::new(&gram);
    let mut count = 0u64;
    let mut x = vec![BigInt::zero(); l.rank()];
    form.enumerate(l.rank(), &target, &mut x, &mut |q| {
        if q == &target {
            count += 1;
        }
    });
    // the zero vector is never reported
    Ok(count)
}

/// `Q(x) = Σ qᵢ (xᵢ + Σ_{j>i} μᵢⱼ xⱼ)²` for a positive definite Gram.
struct Cholesky {
    q: Vec<BigRational>,
    mu: Vec<Vec<BigRational>>,
}

impl Cholesky {
    fn new(gram: &crate::matrix::Matrix<BigInt>) -> Self {
        let n = gram.rows();
        let mut a: Vec<Vec<BigRational>> =
            (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(gram[(i, j)].clone())).collect()).collect();
        let mut q = vec![BigRational::zero(); n];
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            q[i] = a[i][i].clone();
            for j in i + 1..n {
                mu[i][j] = &a[i][j] / &q[i];
            }
            for k in i + 1..n {
                for j in k..n {
                    let v = &mu[i][k] * &mu[i][j] * &q[i];
                    a[k][j] -= v;
                }
            }
        }
        Cholesky { q, mu }
    }

    /// Visits every nonzero `x` with `Q(x) ≤ bound`, calling `visit(Q(x))`.
    /// Coordinates `level..n` of `x` are already fixed.
    fn enumerate(&self, level: usize, bound: &BigRational, x: &mut Vec<BigInt>, visit: &mut impl FnMut(&BigRational)) {
        self.descend(level, bound, &BigRational::zero(), x, visit);
    }

    fn descend(
        &self,
        level: usize,
        bound: &BigRational,
        used: &BigRational,
        x: &mut Vec<BigInt>,
        visit: &mut impl FnMut(&BigRational),
    ) {
        if level == 0 {
            if x.iter().any(|c| !c.is_zero()) {
                visit(used);
            }
            return;
        }
        let i = level - 1;
        let n = x.len();
        let center: BigRational = -(i + 1..n).map(|j| &self.mu[i][j] * &x[j]).sum::<BigRational>();
        let rem = bound - used;
        let room = &rem / &self.q[i];
        if room.is_negative() {
            return;
        }
        let radius = room.floor().to_integer().sqrt() + BigInt::one();
        let lo = center.floor().to_integer() - &radius;
        let hi = center.ceil().to_integer() + &radius;
        let span = (&hi - &lo).to_i64().expect("enumeration box fits in i64");
        for k in 0..=span {
            let xi = &lo + k;
            let t = BigRational::from_integer(xi.clone()) - &center;
            let add = &t * &t * &self.q[i];
            if add > rem {
                continue;
            }
            let next = used + add;
            x[i] = xi;
            self.descend(i, bound, &next, x, visit);
        }
        x[i] = BigInt::zero();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{standard_lattice, twist, StandardLattice};
    use crate::matrix::int_matrix;

    #[test]
    fn e8_roots() {
        let e8m2 = twist(&standard_lattice(StandardLattice::E8), -2).unwrap();
        assert_eq!(short_vectors(&e8m2, -4, SearchLimit::default()).unwrap(), 240);
        assert_eq!(short_vectors(&e8m2, -2, SearchLimit::default()).unwrap(), 0);
        assert_eq!(short_vectors(&e8m2, -3, SearchLimit::default()).unwrap(), 0);
    }

    #[test]
    fn nikulin_roots() {
        let nik = standard_lattice(StandardLattice::Nikulin);
        assert_eq!(short_vectors(&nik, -2, SearchLimit::default()).unwrap(), 16);
    }

    #[test]
    fn limits_and_indefinite() {
        let u = standard_lattice(StandardLattice::U);
        assert_eq!(short_vectors(&u, 2, SearchLimit::default()), Err(LatticeError::IndefiniteLattice));
        let e8 = standard_lattice(StandardLattice::E8);
        assert!(matches!(
            short_vectors(&e8, 18, SearchLimit::default()),
            Err(LatticeError::SearchLimitExceeded { .. })
        ));
        let tight = SearchLimit { max_rank: 4, max_norm: 16 };
        assert!(short_vectors(&e8, 2, tight).is_err());
    }

    #[test]
    fn odd_lattice_counts() {
        // Z² has 4 vectors of norm 1, 4 of norm 2, 0 of norm 3, 4 of norm 4
        let z2 = IntegralLattice::new(int_matrix(&[&[1, 0], &[0, 1]])).unwrap();
        let counts: Vec<u64> = (1..=5).map(|n| short_vectors(&z2, n, SearchLimit::default()).unwrap()).collect();
        assert_eq!(counts, vec![4, 4, 0, 4, 8]);
    }
}
