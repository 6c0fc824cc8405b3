//! Numerology of symplectic automorphisms of prime order on a K3 surface.

use alloc::vec::Vec;

use thiserror::Error;

use crate::lattice::{lambda_d, lambda_tilde_d, IntegralLattice, LatticeError};

/// Rank of `H²` of a K3 surface.
pub const H2_RANK: u32 = 22;
/// Topological Euler number of a K3 surface.
pub const K3_EULER: i64 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutNumError {
    #[error("no symplectic automorphism of order {0}; expected 2, 3, 5 or 7")]
    InvalidOrder(u32),
    #[error("only the involution quotient is implemented, got order {0}")]
    UnsupportedOrder(u32),
    #[error("{fixed} fixed points do not give an integral quotient for order {p}")]
    NonIntegralQuotient { p: u32, fixed: i64 },
    #[error("degree must be positive, got {0}")]
    NonPositiveDegree(i64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Rank data of a prime-order symplectic automorphism. The identity is
/// represented by `p = 1` with trivial anti-invariant part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrderPDatum {
    pub p: u32,
    pub omega_rank: u32,
    pub invariant_h2_rank: u32,
}

pub const ORDERS: [u32; 4] = [2, 3, 5, 7];

fn omega_rank(p: u32) -> Option<u32> {
    match p {
        2 => Some(8),
        3 => Some(12),
        5 => Some(16),
        7 => Some(18),
        _ => None,
    }
}

impl OrderPDatum {
    pub fn new(p: u32) -> Result<Self, AutNumError> {
        let omega_rank = omega_rank(p).ok_or(AutNumError::InvalidOrder(p))?;
        debug_assert_eq!(omega_rank % (p - 1), 0);
        Ok(OrderPDatum { p, omega_rank, invariant_h2_rank: H2_RANK - omega_rank })
    }

    pub fn trivial() -> Self {
        OrderPDatum { p: 1, omega_rank: 0, invariant_h2_rank: H2_RANK }
    }

    /// Multiplicity of each primitive `p`-th root of unity on `Ω_p`.
    pub fn multiplicity(&self) -> u32 {
        if self.p <= 1 {
            0
        } else {
            self.omega_rank / (self.p - 1)
        }
    }
}

/// Ramanujan sum `c_p(k)`: the sum of `ζ^k` over primitive `p`-th roots `ζ`.
fn primitive_root_power_sum(p: u32, k: u64) -> i64 {
    if k.is_multiple_of(u64::from(p)) {
        i64::from(p) - 1
    } else {
        -1
    }
}

/// `2 + tr(f* | H²)`; the primitive roots sum to `−1`.
pub fn lefschetz_fixed_points(datum: &OrderPDatum) -> i64 {
    lefschetz_fixed_points_power(datum, 1)
}

/// Lefschetz number of `f^k`. Equals the fixed-point count of `f` whenever
/// `gcd(k, p) = 1`, and `24` when `p | k`.
pub fn lefschetz_fixed_points_power(datum: &OrderPDatum, k: u64) -> i64 {
    let trace = if datum.p <= 1 {
        i64::from(H2_RANK)
    } else {
        i64::from(datum.invariant_h2_rank) + i64::from(datum.multiplicity()) * primitive_root_power_sum(datum.p, k)
    };
    2 + trace
}

/// Dimension of the moduli of K3 surfaces polarized by `ZL ⊕ Ω_p`.
pub fn moduli_dimension(p: u32) -> Result<i64, AutNumError> {
    let d = OrderPDatum::new(p)?;
    Ok(19 - i64::from(d.omega_rank))
}

/// Euler number of the minimal resolution of `X/⟨f⟩` with `fixed` `A_1`
/// points, each replaced by a `(−2)`-curve.
pub fn quotient_euler_check(p: u32, fixed: i64) -> Result<i64, AutNumError> {
    if p != 2 {
        return Err(AutNumError::UnsupportedOrder(p));
    }
    let free = K3_EULER - fixed;
    if fixed < 0 || free % i64::from(p) != 0 {
        return Err(AutNumError::NonIntegralQuotient { p, fixed });
    }
    Ok(free / i64::from(p) + 2 * fixed)
}

/// Rank and admissibility data of `Λ_{p,d} = ZL ⊕ Ω_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaPdData {
    pub p: u32,
    pub d: i64,
    pub rank: u32,
    /// An index-`p` overlattice is possible only for `p | d`.
    pub tilde_admissible: bool,
    /// `Λ_{7,d}` with `7 | d` does not occur.
    pub not_realized: bool,
    /// `Λ_d` and, for even `d`, `Λ̃_d`; only for `p = 2`.
    pub lattices: Option<(IntegralLattice, Option<IntegralLattice>)>,
}

pub fn lambda_pd_rank_data(p: u32, d: i64) -> Result<LambdaPdData, AutNumError> {
    let datum = OrderPDatum::new(p)?;
    if d < 1 {
        return Err(AutNumError::NonPositiveDegree(d));
    }
    let tilde_admissible = d % i64::from(p) == 0;
    let lattices = if p == 2 {
        let tilde = if tilde_admissible { Some(lambda_tilde_d(d)?) } else { None };
        Some((lambda_d(d)?, tilde))
    } else {
        None
    };
    Ok(LambdaPdData {
        p,
        d,
        rank: 1 + datum.omega_rank,
        tilde_admissible,
        not_realized: p == 7 && tilde_admissible,
        lattices,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AutRow {
    pub p: u32,
    pub fixed_points: i64,
    pub moduli_dim: i64,
}

pub fn order_p_table() -> Vec<AutRow> {
    ORDERS
        .iter()
        .map(|&p| {
            let d = OrderPDatum::new(p).expect("table order");
            AutRow { p, fixed_points: lefschetz_fixed_points(&d), moduli_dim: 19 - i64::from(d.omega_rank) }
        })
        .collect()
}
