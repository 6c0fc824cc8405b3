use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::{FibrationError, WeierstrassModel};
use crate::poly::{factor, Poly};

/// A closed point of the base line: a monic irreducible polynomial over `Q`,
/// or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    /// Number of geometric points the place stands for.
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Finite(a), Place::Finite(b)) => a.cmp_canonical(b),
            (Place::Finite(_), Place::Infinity) => Ordering::Less,
            (Place::Infinity, Place::Finite(_)) => Ordering::Greater,
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{}", p),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kodaira {
    Smooth,
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl Kodaira {
    /// Number of irreducible components of the fibre.
    pub fn components(self) -> u32 {
        match self {
            Kodaira::Smooth => 1,
            Kodaira::I(n) => n,
            Kodaira::II => 1,
            Kodaira::III => 2,
            Kodaira::IV => 3,
            Kodaira::IStar(n) => n + 5,
            Kodaira::IVStar => 7,
            Kodaira::IIIStar => 8,
            Kodaira::IIStar => 9,
        }
    }

    /// Topological Euler number of the fibre.
    pub fn euler(self) -> u32 {
        match self {
            Kodaira::Smooth => 0,
            Kodaira::I(n) => n,
            Kodaira::II => 2,
            Kodaira::III => 3,
            Kodaira::IV => 4,
            Kodaira::IStar(n) => n + 6,
            Kodaira::IVStar => 8,
            Kodaira::IIIStar => 9,
            Kodaira::IIStar => 10,
        }
    }

    /// Char-0 Kodaira table on a minimal model; `None` marks identically
    /// vanishing `c4` or `c6`.
    fn from_valuations(v4: Option<u32>, v6: Option<u32>, vd: u32) -> Option<Kodaira> {
        let ge = |v: Option<u32>, n: u32| v.is_none_or(|x| x >= n);
        let eq = |v: Option<u32>, n: u32| v == Some(n);
        let t = match vd {
            0 => Kodaira::Smooth,
            n if eq(v4, 0) => Kodaira::I(n),
            2 if ge(v4, 1) && eq(v6, 1) => Kodaira::II,
            3 if eq(v4, 1) && ge(v6, 2) => Kodaira::III,
            4 if ge(v4, 2) && eq(v6, 2) => Kodaira::IV,
            6 if ge(v4, 2) && ge(v6, 3) => Kodaira::IStar(0),
            n if n > 6 && eq(v4, 2) && eq(v6, 3) => Kodaira::IStar(n - 6),
            8 if ge(v4, 3) && eq(v6, 4) => Kodaira::IVStar,
            9 if eq(v4, 3) && ge(v6, 5) => Kodaira::IIIStar,
            10 if ge(v4, 4) && eq(v6, 5) => Kodaira::IIStar,
            _ => return None,
        };
        Some(t)
    }
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::Smooth => f.write_str("SMOOTH"),
            Kodaira::I(n) => write!(f, "I_{}", n),
            Kodaira::II => f.write_str("II"),
            Kodaira::III => f.write_str("III"),
            Kodaira::IV => f.write_str("IV"),
            Kodaira::IStar(n) => write!(f, "I_{}*", n),
            Kodaira::IVStar => f.write_str("IV*"),
            Kodaira::IIIStar => f.write_str("III*"),
            Kodaira::IIStar => f.write_str("II*"),
        }
    }
}

/// Classification of the fibre over one place. Valuations are of the minimal
/// model; `None` means the invariant vanishes identically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiberReport {
    pub place: Place,
    pub kodaira: Kodaira,
    pub v_c4: Option<u32>,
    pub v_c6: Option<u32>,
    pub v_delta: u32,
    pub components: u32,
    pub euler: u32,
    pub degree_weight: usize,
}

pub fn classify_place(model: &WeierstrassModel, place: &Place) -> Result<FiberReport, FibrationError> {
    let (local, uniformizer) = match place {
        Place::Finite(p) => (model.clone(), p.clone()),
        Place::Infinity => (model.at_infinity(), Poly::t()),
    };
    let mut v4 = local.c4().valuation(&uniformizer);
    let mut v6 = local.c6().valuation(&uniformizer);
    let mut vd = local.delta().valuation(&uniformizer).expect("Δ is nonzero");
    let ge = |v: Option<u32>, n: u32| v.is_none_or(|x| x >= n);
    while ge(v4, 4) && ge(v6, 6) && vd >= 12 {
        v4 = v4.map(|x| x - 4);
        v6 = v6.map(|x| x - 6);
        vd -= 12;
    }
    let kodaira = Kodaira::from_valuations(v4, v6, vd)
        .ok_or_else(|| FibrationError::NonMinimalUnresolvable(format!("({:?}, {:?}, {}) at {}", v4, v6, vd, place)))?;
    Ok(FiberReport {
        place: place.clone(),
        kodaira,
        v_c4: v4,
        v_c6: v6,
        v_delta: vd,
        components: kodaira.components(),
        euler: kodaira.euler(),
        degree_weight: place.degree(),
    })
}

/// All singular fibres, sorted by place (infinity last).
pub fn classify_fibers(model: &WeierstrassModel) -> Result<Vec<FiberReport>, FibrationError> {
    let mut places: Vec<Place> = factor(model.delta()).into_iter().map(|(p, _)| Place::Finite(p)).collect();
    places.push(Place::Infinity);
    let mut out = Vec::new();
    for place in places {
        let r = classify_place(model, &place)?;
        if r.kodaira != Kodaira::Smooth {
            out.push(r);
        }
    }
    out.sort_by(|a, b| a.place.cmp(&b.place));
    Ok(out)
}

/// `Σ deg(place)·e_v`.
pub fn euler_check(reports: &[FiberReport]) -> u64 {
    reports.iter().map(|r| r.degree_weight as u64 * u64::from(r.euler)).sum()
}

/// Shioda–Tate: `2 + Σ deg(place)·(m_v − 1) + rank MW`. Torsion sections do
/// not contribute.
pub fn shioda_tate_rank(reports: &[FiberReport], mw_rank: u32) -> u64 {
    2 + reports.iter().map(|r| r.degree_weight as u64 * u64::from(r.components - 1)).sum::<u64>() + u64::from(mw_rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn weighted(reports: &[FiberReport], k: Kodaira) -> usize {
        reports.iter().filter(|r| r.kodaira == k).map(|r| r.degree_weight).sum()
    }

    #[test]
    fn generic_model_configuration() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (m, _) = super::super::sample_generic_model(&mut rng);
        let reports = classify_fibers(&m).unwrap();
        assert_eq!(weighted(&reports, Kodaira::I(1)), 8);
        assert_eq!(weighted(&reports, Kodaira::I(2)), 8);
        assert_eq!(euler_check(&reports), 24);
        assert_eq!(shioda_tate_rank(&reports, 0), 10);
        let b = m.b();
        for r in &reports {
            let Place::Finite(p) = &r.place else { panic!("singular at infinity") };
            assert_eq!(r.kodaira == Kodaira::I(2), p.divides(b));
        }
    }

    #[test]
    fn isotrivial_type_iii() {
        let m = WeierstrassModel::from_ints(&[], &[-1, 0, 0, 0, 0, 0, 0, 0, 1]).unwrap();
        let reports = classify_fibers(&m).unwrap();
        assert_eq!(reports.len(), 4); // t-1, t+1, t²+1, t⁴+1
        assert!(reports.iter().all(|r| r.kodaira == Kodaira::III
            && r.v_c4 == Some(1)
            && r.v_c6.is_none_or(|v| v >= 2)
            && r.v_delta == 3));
        assert_eq!(weighted(&reports, Kodaira::III), 8);
        assert_eq!(euler_check(&reports), 24);
        assert_eq!(shioda_tate_rank(&reports, 0), 10);
        assert_eq!(classify_place(&m, &Place::Infinity).unwrap().kodaira, Kodaira::Smooth);
    }

    #[test]
    fn minimality_reduction_at_infinity() {
        // a = 0, b = 1: Δ constant, the chart at infinity has v(Δ) = 24 and
        // reduces twice to a smooth fibre
        let m = WeierstrassModel::from_ints(&[], &[1]).unwrap();
        let r = classify_place(&m, &Place::Infinity).unwrap();
        assert_eq!(r.kodaira, Kodaira::Smooth);
        assert_eq!(euler_check(&classify_fibers(&m).unwrap()), 0);
    }

    #[test]
    fn table_entries() {
        assert_eq!(Kodaira::from_valuations(Some(0), Some(0), 5), Some(Kodaira::I(5)));
        assert_eq!(Kodaira::from_valuations(Some(2), Some(3), 8), Some(Kodaira::IStar(2)));
        assert_eq!(Kodaira::from_valuations(Some(4), Some(5), 10), Some(Kodaira::IIStar));
        assert_eq!(Kodaira::from_valuations(Some(3), None, 9), Some(Kodaira::IIIStar));
        assert_eq!(Kodaira::from_valuations(Some(1), Some(1), 5), None);
        for k in [Kodaira::II, Kodaira::IV, Kodaira::IVStar] {
            // potentially good additive types: e = m + 1
            assert_eq!(k.euler(), k.components() + 1);
        }
    }

    #[test]
    fn place_order_puts_infinity_last() {
        let mut v = alloc::vec![Place::Infinity, Place::Finite(Poly::from_ints(&[1, 0, 1])), Place::Finite(Poly::t())];
        v.sort();
        assert_eq!(v[0], Place::Finite(Poly::t()));
        assert_eq!(v[2], Place::Infinity);
    }
}
