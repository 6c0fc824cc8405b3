//! Factorization over the rationals.
//!
//! A squarefree primitive integer polynomial is factored modulo a prime larger
//! than twice the Mignotte bound, so that true factors appear as symmetric
//! residues of products of modular factors and no Hensel lifting is needed.
//! Modular factors come from distinct-degree and Cantor–Zassenhaus splitting;
//! Zassenhaus subset search recombines them.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{squarefree_decomposition, Poly};

const SPLIT_SEED: u64 = 0x6b33_6b69_7466_6163;
const CANDIDATE_PRIMES: usize = 3;

/// Monic irreducible factors with multiplicities, sorted canonically.
/// The zero and constant polynomials have no factors.
pub fn factor(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for g in factor_squarefree_primitive(&part.primitive_part()) {
            out.push((Poly::from_bigints(&g).monic(), mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp_canonical(&b.0));
    out
}

/// Irreducible factors over `Z` of a squarefree primitive polynomial
/// (coefficients from the constant term up).
pub fn factor_squarefree_primitive(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let f = trim(f.to_vec());
    let n = f.len().saturating_sub(1);
    if n <= 1 {
        return if n == 1 { vec![f] } else { Vec::new() };
    }
    let lc = f[n].abs();
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    // Mignotte: every factor's coefficients are bounded by 2^n·‖f‖₂.
    let bound = (BigInt::one() << n) * (norm2.sqrt() + 1u32);
    let floor = BigUint::try_from(&lc * &bound * 2u32 + 1u32).expect("positive");
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);

    let mut best: Option<(BigUint, Vec<Vec<BigUint>>)> = None;
    let mut candidate = floor | BigUint::one();
    let mut tried = 0;
    while tried < CANDIDATE_PRIMES {
        if is_probable_prime(&candidate) {
            let field = Fp::new(candidate.clone());
            let fp = field.reduce(&f);
            if fp.len() == n + 1 && field.gcd(&fp, &field.derivative(&fp)).len() == 1 {
                tried += 1;
                let factors = field.factor(&fp, &mut rng);
                if best.as_ref().is_none_or(|(_, b)| factors.len() < b.len()) {
                    best = Some((candidate.clone(), factors));
                }
            }
        }
        candidate += 2u32;
    }
    let (p, modular) = best.expect("found a good prime");
    recombine(f, modular, &Fp::new(p))
}

fn trim(mut f: Vec<BigInt>) -> Vec<BigInt> {
    while f.last().is_some_and(Zero::is_zero) {
        f.pop();
    }
    f
}

fn recombine(mut f: Vec<BigInt>, mut modular: Vec<Vec<BigUint>>, field: &Fp) -> Vec<Vec<BigInt>> {
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= modular.len() {
        let mut hit = None;
        for subset in Subsets::new(modular.len(), size) {
            let lc = f.last().unwrap().clone();
            let mut g = vec![field.residue(&lc)];
            for &i in &subset {
                g = field.mul(&g, &modular[i]);
            }
            let cand = primitive(g.iter().map(|c| field.symmetric(c)).collect());
            if let Some(q) = exact_div_int(&f, &cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                f = q;
                for &i in subset.iter().rev() {
                    modular.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if f.len() > 1 {
        found.push(primitive(f));
    }
    found
}

fn primitive(f: Vec<BigInt>) -> Vec<BigInt> {
    let f = trim(f);
    let g = f.iter().fold(BigInt::zero(), |a, c| a.gcd(c));
    let s = if f.last().is_some_and(Signed::is_negative) { -BigInt::one() } else { BigInt::one() };
    f.iter().map(|c| c / &g * &s).collect()
}

/// Exact quotient in `Z[t]`, if `d` divides `f` there.
fn exact_div_int(f: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    let pf = Poly::from_bigints(f);
    let pd = Poly::from_bigints(d);
    let q = pf.exact_div(&pd)?;
    q.coeffs().iter().map(|c| c.is_integer().then(|| c.to_integer())).collect::<Option<Vec<_>>>().map(trim)
}

/// k-subsets of `0..n` in lexicographic order.
struct Subsets {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Subsets {
    fn new(n: usize, k: usize) -> Self {
        Subsets { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

fn is_probable_prime(n: &BigUint) -> bool {
    const BASES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for b in BASES {
        let b = BigUint::from(b);
        if n == &b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for b in BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Arithmetic in `F_p[t]`; polynomials are coefficient vectors without
/// trailing zeros.
struct Fp {
    p: BigUint,
}

type FpPoly = Vec<BigUint>;

impl Fp {
    fn new(p: BigUint) -> Self {
        Fp { p }
    }

    fn residue(&self, x: &BigInt) -> BigUint {
        let m = x.mod_floor(&BigInt::from_biguint(Sign::Plus, self.p.clone()));
        m.to_biguint().expect("nonnegative")
    }

    fn symmetric(&self, x: &BigUint) -> BigInt {
        let half = &self.p >> 1;
        if x > &half {
            BigInt::from(x.clone()) - BigInt::from(self.p.clone())
        } else {
            BigInt::from(x.clone())
        }
    }

    fn reduce(&self, f: &[BigInt]) -> FpPoly {
        self.trim(f.iter().map(|c| self.residue(c)).collect())
    }

    fn trim(&self, mut f: FpPoly) -> FpPoly {
        while f.last().is_some_and(Zero::is_zero) {
            f.pop();
        }
        f
    }

    fn inv(&self, x: &BigUint) -> BigUint {
        x.modpow(&(&self.p - 2u32), &self.p)
    }

    fn sub(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let n = a.len().max(b.len());
        let zero = BigUint::zero();
        self.trim(
            (0..n)
                .map(|i| {
                    let x = a.get(i).unwrap_or(&zero);
                    let y = b.get(i).unwrap_or(&zero);
                    (x + &self.p - y) % &self.p
                })
                .collect(),
        )
    }

    fn mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut c = vec![BigUint::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        self.trim(c.into_iter().map(|x| x % &self.p).collect())
    }

    fn div_rem(&self, a: &FpPoly, d: &FpPoly) -> (FpPoly, FpPoly) {
        let dd = d.len() - 1;
        if a.len() <= dd {
            return (Vec::new(), a.clone());
        }
        let li = self.inv(d.last().unwrap());
        let mut r = a.clone();
        let mut q = vec![BigUint::zero(); a.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &li % &self.p;
            if !c.is_zero() {
                for (j, dc) in d.iter().enumerate() {
                    let s = &c * dc % &self.p;
                    r[k + j] = (&r[k + j] + &self.p - s) % &self.p;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (self.trim(q), self.trim(r))
    }

    fn rem(&self, a: &FpPoly, d: &FpPoly) -> FpPoly {
        self.div_rem(a, d).1
    }

    fn monic(&self, a: &FpPoly) -> FpPoly {
        match a.last() {
            None => Vec::new(),
            Some(l) => {
                let li = self.inv(l);
                a.iter().map(|x| x * &li % &self.p).collect()
            }
        }
    }

    fn gcd(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    fn derivative(&self, a: &FpPoly) -> FpPoly {
        self.trim(a.iter().enumerate().skip(1).map(|(i, c)| c * BigUint::from(i) % &self.p).collect())
    }

    fn powmod(&self, base: &FpPoly, e: &BigUint, m: &FpPoly) -> FpPoly {
        let mut result = vec![BigUint::one()];
        let base = self.rem(base, m);
        for i in (0..e.bits()).rev() {
            result = self.rem(&self.mul(&result, &result), m);
            if e.bit(i) {
                result = self.rem(&self.mul(&result, &base), m);
            }
        }
        result
    }

    fn random_below_degree(&self, deg: usize, rng: &mut ChaCha8Rng) -> FpPoly {
        let bytes = (self.p.bits() as usize).div_ceil(8) + 8;
        let mut buf = vec![0u8; bytes];
        self.trim(
            (0..deg)
                .map(|_| {
                    rng.fill_bytes(&mut buf);
                    BigUint::from_bytes_le(&buf) % &self.p
                })
                .collect(),
        )
    }

    /// Monic irreducible factors of a squarefree polynomial.
    fn factor(&self, f: &FpPoly, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
        let mut f = self.monic(f);
        let x = vec![BigUint::zero(), BigUint::one()];
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut d = 1;
        while f.len() > 1 && 2 * d < f.len() {
            h = self.powmod(&h, &self.p, &f);
            let g = self.gcd(&self.sub(&h, &x), &f);
            if g.len() > 1 {
                f = self.div_rem(&f, &g).0;
                h = self.rem(&h, &f);
                self.split_equal_degree(g, d, rng, &mut out);
            }
            d += 1;
        }
        if f.len() > 1 {
            out.push(f);
        }
        out
    }

    fn split_equal_degree(&self, g: FpPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
        if g.len() - 1 == d {
            out.push(g);
            return;
        }
        let e = (self.p.pow(d as u32) - 1u32) >> 1;
        loop {
            let a = self.random_below_degree(g.len() - 1, rng);
            if a.len() < 2 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &e, &g), &vec![BigUint::one()]);
            let h = self.gcd(&b, &g);
            if h.len() > 1 && h.len() < g.len() {
                let other = self.monic(&self.div_rem(&g, &h).0);
                self.split_equal_degree(h, d, rng, out);
                self.split_equal_degree(other, d, rng, out);
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(fs: &[(Poly, u32)]) -> Poly {
        fs.iter().fold(Poly::one(), |acc, (p, m)| &acc * &p.pow(*m))
    }

    #[test]
    fn cyclotomic_split() {
        let f = Poly::from_ints(&[-1, 0, 0, 0, 0, 0, 0, 0, 1]);
        let fs = factor(&f);
        let expect = vec![
            (Poly::from_ints(&[-1, 1]), 1),
            (Poly::from_ints(&[1, 1]), 1),
            (Poly::from_ints(&[1, 0, 1]), 1),
            (Poly::from_ints(&[1, 0, 0, 0, 1]), 1),
        ];
        assert_eq!(fs, expect);
    }

    #[test]
    fn irreducible_stays_whole() {
        // t^4 + 1 splits mod every prime but is irreducible over Q
        let f = Poly::from_ints(&[1, 0, 0, 0, 1]);
        assert_eq!(factor(&f), vec![(f.clone(), 1)]);
        let g = Poly::from_ints(&[-2, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(factor(&g), vec![(g.clone(), 1)]);
    }

    #[test]
    fn multiplicities_and_rational_content() {
        let a = Poly::from_ints(&[3, 2]); // 2t + 3
        let b = Poly::from_ints(&[1, 1, 1]);
        let f = (&a.pow(2) * &b).scale(&crate::matrix::rat(-5, 7));
        let fs = factor(&f);
        assert_eq!(fs.len(), 2);
        assert_eq!(product(&fs), f.monic());
        assert!(fs.iter().any(|(p, m)| *m == 2 && p == &a.monic()));
    }

    #[test]
    fn swinnerton_dyer_like_recombination() {
        // (t^2-2)(t^2-3)(t^2+t+5): several modular factors must recombine
        let f = &(&Poly::from_ints(&[-2, 0, 1]) * &Poly::from_ints(&[-3, 0, 1])) * &Poly::from_ints(&[5, 1, 1]);
        let fs = factor(&f);
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), f);
    }

    #[test]
    fn primality() {
        let primes = [2u32, 3, 5, 97, 7919];
        for p in primes {
            assert!(is_probable_prime(&BigUint::from(p)));
        }
        for c in [1u32, 4, 91, 561, 7917] {
            assert!(!is_probable_prime(&BigUint::from(c)));
        }
    }
}
