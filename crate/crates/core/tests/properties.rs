use k3kit_core::autnum::{lefschetz_fixed_points_power, moduli_dimension, OrderPDatum, ORDERS};
use k3kit_core::fibration::{
    check_generic, classify_fibers, curve_class_c, euler_check, ns_lattice, random_model, shioda_tate_rank, Kodaira,
    Place,
};
use k3kit_core::lattice::{
    direct_sum, lambda_d, lambda_tilde_d, lambda_tilde_d_overlattice, q_value, standard_lattice, twist,
    DiscriminantGroup, IntegralLattice, LatticeError, StandardLattice,
};

use k3kit_core::matrix::{determinant, int_matrix, Matrix};
use k3kit_core::poly::{factor, Poly};
use k3kit_core::stablemap::{arithmetic_genus, compare_with_oracle, Component, ImageKind, StableMapConfig};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_even_lattice() -> impl Strategy<Value = IntegralLattice> {
    (1usize..=4)
        .prop_flat_map(|n| proptest::collection::vec(-4i64..=4, n * n).prop_map(move |v| (n, v)))
        .prop_filter_map("degenerate", |(n, v)| {
            let gram = Matrix::from_fn(n, n, |i, j| {
                let (a, b) = (i.min(j), i.max(j));
                if a == b {
                    BigInt::from(2 * v[a * n + a])
                } else {
                    BigInt::from(v[a * n + b])
                }
            });
            IntegralLattice::new(gram).ok()
        })
}

proptest! {
    #[test]
    fn direct_sum_multiplies_det_and_adds_signature(a in small_even_lattice(), b in small_even_lattice()) {
        let s = direct_sum(&a, &b);
        prop_assert_eq!(s.det(), &(a.det() * b.det()));
        prop_assert_eq!(s.signature().positive, a.signature().positive + b.signature().positive);
        prop_assert_eq!(s.signature().negative, a.signature().negative + b.signature().negative);
        prop_assert!(s.is_even());
    }

    #[test]
    fn twist_scales_det(l in small_even_lattice(), n in prop_oneof![-3i64..=-1, 1i64..=3]) {
        let t = twist(&l, n).unwrap();
        prop_assert_eq!(t.det(), &(l.det() * BigInt::from(n).pow(l.rank() as u32)));
    }

    #[test]
    fn discriminant_order_is_abs_det(l in small_even_lattice()) {
        prop_assert_eq!(DiscriminantGroup::new(&l).order(), l.det().abs());
    }

    #[test]
    fn q_value_independent_of_lift(l in small_even_lattice(), seed in any::<u64>()) {
        let disc = DiscriminantGroup::new(&l);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for g in disc.generators() {
            let base = q_value(&l, g);
            for _ in 0..50 {
                let shift: Vec<BigRational> = (0..l.rank())
                    .map(|_| BigRational::from_integer(BigInt::from(rand::Rng::gen_range(&mut rng, -5i64..=5))))
                    .collect();
                let lifted: Vec<BigRational> = g.iter().zip(&shift).map(|(x, s)| x + s).collect();
                prop_assert_eq!(q_value(&l, &lifted), base.clone());
            }
        }
    }

    #[test]
    fn tree_has_genus_zero_and_one_more_edge_adds_one(
        parents in proptest::collection::vec(any::<prop::sample::Index>(), 0..8),
        extra in any::<(prop::sample::Index, prop::sample::Index)>(),
    ) {
        let n = parents.len() + 1;
        let edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
        let c = Component { genus: 0, kind: ImageKind::NormalizedNodal, ndeg: -1 };
        let mut cfg = StableMapConfig { components: vec![c; n], edges, dim_base: 0 };
        prop_assert_eq!(arithmetic_genus(&cfg), Ok(0));
        cfg.edges.push((extra.0.index(n), extra.1.index(n)));
        prop_assert_eq!(arithmetic_genus(&cfg), Ok(1));
    }

    #[test]
    fn oracle_matches_peeling(degrees in proptest::collection::vec(-3i64..=3, 1..=6), seed in any::<u64>()) {
        let cmp = compare_with_oracle(&degrees, seed).unwrap();
        prop_assert!(cmp.agrees(), "{:?}", cmp);
    }

    #[test]
    fn factorization_reconstructs(coeffs in proptest::collection::vec(-6i64..=6, 1..=7)) {
        let f = Poly::from_ints(&coeffs);
        prop_assume!(f.degree().is_some_and(|d| d >= 1));
        let mut prod = Poly::constant(f.leading());
        for (p, e) in factor(&f) {
            prop_assert!(p.leading().is_one());
            prod = &prod * &p.pow(e);
        }
        prop_assert_eq!(prod, f);
    }
}

#[test]
fn lambda_tilde_family() {
    for d in (2..=20).step_by(2) {
        let base = lambda_d(d).unwrap();
        let over = lambda_tilde_d_overlattice(d).unwrap();
        assert!(over.lattice.is_even());
        assert_eq!(over.index, BigInt::from(2));
        assert_eq!(base.det() / over.lattice.det(), BigInt::from(4));
        assert_eq!(base.det() % over.lattice.det(), BigInt::zero());
    }
    for d in (1..=19).step_by(2) {
        assert_eq!(lambda_tilde_d(d), Err(LatticeError::OddDegree));
    }
}

#[test]
fn e8_is_unimodular_and_u_is_hyperbolic() {
    let e8 = standard_lattice(StandardLattice::E8);
    assert!(e8.is_unimodular() && e8.is_positive_definite() && e8.is_even());
    let u = standard_lattice(StandardLattice::U);
    assert_eq!(determinant(u.gram()), BigInt::from(-1));
    assert_eq!(u.gram(), &int_matrix(&[&[0, 1], &[1, 0]]));
}

#[test]
fn seeded_generic_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut seen = 0;
    while seen < 100 {
        let Some(m) = random_model(&mut rng) else { continue };
        if !check_generic(&m).is_generic() {
            continue;
        }
        seen += 1;
        let lhs = &m.c4().pow(3) - &m.c6().pow(2);
        assert_eq!(lhs, m.delta().scale(&BigRational::from_integer(BigInt::from(1728))));
        let reports = classify_fibers(&m).unwrap();
        let weight = |k| reports.iter().filter(|r| r.kodaira == k).map(|r| r.degree_weight).sum::<usize>();
        assert_eq!((weight(Kodaira::I(1)), weight(Kodaira::I(2))), (8, 8));
        assert_eq!(euler_check(&reports), 24);
        assert_eq!(shioda_tate_rank(&reports, 0), 10);
        assert!(reports.iter().all(|r| r.place != Place::Infinity));
    }
}

#[test]
fn curve_class_family() {
    let ns = ns_lattice();
    for e in 2..=10 {
        let c = curve_class_c(&ns, e).unwrap();
        assert_eq!(ns.intersect(&c, &c), BigRational::from_integer(BigInt::from(4 * e)));
        assert!(c.is_primitive());
        for i in 1..=8 {
            assert!(ns.intersect(&c, &ns.n(i)).is_positive());
        }
    }
}

#[test]
fn automorphism_numerology() {
    for p in ORDERS {
        let d = OrderPDatum::new(p).unwrap();
        assert_eq!(d.omega_rank % (p - 1), 0);
        assert_eq!(moduli_dimension(p).unwrap(), 19 - i64::from(d.omega_rank));
        let fixed = lefschetz_fixed_points_power(&d, 1);
        assert!(fixed >= 1);
        for k in 1..u64::from(p) {
            assert_eq!(lefschetz_fixed_points_power(&d, k), fixed);
        }
    }
    let dims: Vec<i64> = ORDERS.iter().map(|&p| moduli_dimension(p).unwrap()).collect();
    assert!(dims.windows(2).all(|w| w[0] > w[1]));
}
