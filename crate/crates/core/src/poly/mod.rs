//! Univariate polynomials over the rationals.

mod factor;

pub use factor::{factor, factor_squarefree_primitive};

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense polynomial in `t`, coefficients from the constant term upward,
/// never with a zero leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        Poly::new(c.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Poly::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `t^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.leading().recip())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// `(q, r)` with `self = q·d + r`, `deg r < deg d`. Panics if `d` is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        let lead_inv = d.leading().recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Quotient when `d` divides `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, f: &Poly) -> bool {
        f.rem(self).is_zero()
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Squarefree: no repeated irreducible factor.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// `s^k·f(1/s)`, the chart at infinity for a section of `O(k)`.
    /// Panics if `deg f > k`.
    pub fn reversed(&self, k: usize) -> Poly {
        assert!(self.degree().is_none_or(|d| d <= k), "degree exceeds weight");
        let mut c = vec![BigRational::zero(); k + 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[k - i] = x.clone();
        }
        Poly::new(c)
    }

    /// Multiplicity of `place` as a factor; `None` for the zero polynomial.
    pub fn valuation(&self, place: &Poly) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        assert!(!place.is_constant(), "valuation at a unit");
        let mut f = self.clone();
        let mut v = 0;
        while let Some(q) = f.exact_div(place) {
            f = q;
            v += 1;
        }
        Some(v)
    }

    /// Primitive integer polynomial with positive leading coefficient
    /// proportional to `self`.
    pub fn primitive_part(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.iter().map(|c| c / &g * &sign).collect()
    }

    /// Total order used to sort places: by degree, then by coefficients from the
    /// top down.
    pub fn cmp_canonical(&self, other: &Poly) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                if a.is_integer() {
                    write!(f, "{}", a)?;
                } else {
                    write!(f, "({})", a)?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "{}t", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}t^{}", if show_coeff { "*" } else { "" }, i)?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Yun's squarefree decomposition: monic pairwise coprime squarefree `(gᵢ, i)`
/// with `f = lc·∏ gᵢ^i`. Factors equal to 1 are omitted.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.monic().exact_div(&a0).expect("gcd divides");
    let mut c = df.scale(&f.leading().recip()).exact_div(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    loop {
        let a = b.gcd(&d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a).expect("gcd divides");
        if b.is_constant() {
            break;
        }
        c = d.exact_div(&a).expect("gcd divides");
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

/// Resultant over the rationals by the Euclidean remainder sequence.
pub fn resultant(f: &Poly, g: &Poly) -> BigRational {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return BigRational::zero();
    };
    if n == 0 {
        return pow_rat(&g.leading(), m);
    }
    if m == 0 {
        return pow_rat(&f.leading(), n);
    }
    let r = f.rem(g);
    let Some(k) = r.degree() else {
        return BigRational::zero();
    };
    let sign = if (m * n) % 2 == 1 { -BigRational::one() } else { BigRational::one() };
    sign * pow_rat(&g.leading(), m - k) * resultant(g, &r)
}

fn pow_rat(x: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rat;

    #[test]
    fn division_and_gcd() {
        let f = Poly::from_ints(&[-1, 0, 0, 0, 0, 0, 0, 0, 1]);
        let g = Poly::from_ints(&[-1, 0, 1]);
        let (q, r) = f.div_rem(&g);
        assert!(r.is_zero());
        assert_eq!(&q * &g, f);
        assert_eq!(f.gcd(&Poly::from_ints(&[1, 0, 1])), Poly::from_ints(&[1, 0, 1]));
        assert_eq!(f.gcd(&Poly::from_ints(&[2, 1])), Poly::one());
    }

    #[test]
    fn squarefree_parts() {
        // (t-1)^2 (t+2)^3 t
        let f = &(&Poly::from_ints(&[-1, 1]).pow(2) * &Poly::from_ints(&[2, 1]).pow(3)) * &Poly::t();
        let parts = squarefree_decomposition(&f.scale(&rat(3, 1)));
        assert_eq!(parts, vec![(Poly::t(), 1), (Poly::from_ints(&[-1, 1]), 2), (Poly::from_ints(&[2, 1]), 3)]);
        assert!(!f.is_squarefree());
        assert!(Poly::from_ints(&[-1, 0, 0, 0, 0, 0, 0, 0, 1]).is_squarefree());
    }

    #[test]
    fn resultant_matches_root_products() {
        // res(t^2 - 2, t - 3) = (3^2 - 2) up to sign convention: ∏ g(roots of f) = (√2-3)(-√2-3) = 7
        let f = Poly::from_ints(&[-2, 0, 1]);
        let g = Poly::from_ints(&[-3, 1]);
        assert_eq!(resultant(&f, &g), rat(7, 1));
        assert_eq!(resultant(&f, &Poly::from_ints(&[-4, 0, 2])), rat(0, 1));
        // res(t^2+1, t^2-1) = ∏ (r^2-1) over r = ±i = 4
        assert_eq!(resultant(&Poly::from_ints(&[1, 0, 1]), &Poly::from_ints(&[-1, 0, 1])), rat(4, 1));
    }

    #[test]
    fn valuation_and_reversal() {
        let p = Poly::from_ints(&[1, 0, 1]);
        let f = &p.pow(3) * &Poly::from_ints(&[5, 1]);
        assert_eq!(f.valuation(&p), Some(3));
        assert_eq!(Poly::zero().valuation(&p), None);
        assert_eq!(Poly::from_ints(&[1, 2]).reversed(4), Poly::from_ints(&[0, 0, 0, 2, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(alloc::format!("{}", Poly::from_ints(&[-1, 0, 3, 1])), "t^3 + 3*t^2 - 1");
        assert_eq!(alloc::format!("{}", Poly::new(vec![rat(1, 2), rat(-1, 1)])), "-t + (1/2)");
    }
}
