//! Reproduction harness: every numerical claim about the surface family is
//! recomputed and compared against its expected value.

use std::fmt::{self, Display};
use std::thread;

use k3kit_core::autnum::{lefschetz_fixed_points, moduli_dimension, quotient_euler_check, OrderPDatum, ORDERS};
use k3kit_core::fibration::{
    classify_fibers, curve_class_c, default_test_classes, euler_check, involution_action, ns_involution_split,
    ns_lattice, positivity_report, sample_generic_model, shioda_tate_rank, two_torsion_check, Kodaira, Place,
    WeierstrassModel,
};
use k3kit_core::lattice::{
    is_primitive, lambda_d, lambda_tilde_d, lambda_tilde_d_overlattice, short_vectors, DiscriminantGroup, SearchLimit,
};
use k3kit_core::matrix::Matrix;
use k3kit_core::stablemap::{
    arithmetic_genus, chain_config, chain_normal_cohomology, compare_with_oracle, domination, expected_dim,
    random_chains, validate_chain_conditions, ChainBundle,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    DiscrepancyDocumented,
}

impl Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::DiscrepancyDocumented => "DISCREPANCY_DOCUMENTED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

impl Check {
    /// Passes iff the rendered values coincide.
    fn compare(id: &str, anchor: &str, expected: impl Display, computed: impl Display) -> Check {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let status = if expected == computed { Status::Pass } else { Status::Fail };
        Check { id: id.into(), anchor: anchor.into(), expected, computed, status }
    }

    /// Criterion number encoded in the id prefix `cN.`.
    pub fn criterion(&self) -> Option<u8> {
        self.id.strip_prefix('c')?.split('.').next()?.parse().ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// Plain-text table, one row per check.
    pub fn to_table(&self) -> String {
        let w_id = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(2).max(2);
        let w_st = "DISCREPANCY_DOCUMENTED".len();
        let mut out = format!("seed {}  samples {}\n", self.seed, self.samples);
        out += &format!("{:<w_id$}  {:<w_st$}  computed | expected\n", "id", "status");
        for c in &self.checks {
            out += &format!("{:<w_id$}  {:<w_st$}  {} | {}\n", c.id, c.status.to_string(), c.computed, c.expected);
        }
        out += &format!(
            "{} checks: {} PASS, {} FAIL, {} DISCREPANCY_DOCUMENTED\n",
            self.checks.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::DiscrepancyDocumented)
        );
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub samples: usize,
    pub chains: usize,
    pub limit: SearchLimit,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, samples: 25, chains: 200, limit: SearchLimit::default() }
    }
}

pub const CRITERIA: [u8; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

/// Runs every criterion concurrently; checks are ordered by id.
pub fn verify_all(opts: &VerifyOptions) -> VerificationReport {
    let mut checks: Vec<Check> = thread::scope(|s| {
        let handles: Vec<_> = CRITERIA.iter().map(|&n| s.spawn(move || criterion_checks(n, opts))).collect();
        handles.into_iter().flat_map(|h| h.join().expect("check thread panicked")).collect()
    });
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    VerificationReport { seed: opts.seed, samples: opts.samples, checks }
}

pub fn criterion_checks(n: u8, opts: &VerifyOptions) -> Vec<Check> {
    match n {
        1 => lattice_identities(),
        2 => fiber_configuration(opts),
        3 => ns_table(),
        4 => involution_split(opts),
        5 => automorphism_table(),
        6 => stable_map_chain(),
        7 => oracle_equivalence(opts),
        8 => dimension_bookkeeping(),
        _ => Vec::new(),
    }
}

fn join<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn fraction(ok: usize, total: usize) -> String {
    format!("{}/{}", ok, total)
}

const EVEN_D: std::ops::RangeInclusive<i64> = 1..=10;

fn lattice_identities() -> Vec<Check> {
    let ds: Vec<i64> = EVEN_D.map(|k| 2 * k).collect();
    let mut even = Vec::new();
    let mut ratio = Vec::new();
    let mut primitive = Vec::new();
    for &d in &ds {
        match (lambda_d(d), lambda_tilde_d_overlattice(d)) {
            (Ok(base), Ok(over)) => {
                even.push(over.lattice.is_even().to_string());
                let r = if (base.det() % over.lattice.det()).is_zero() {
                    (base.det() / over.lattice.det()).to_string()
                } else {
                    format!("{}/{}", base.det(), over.lattice.det())
                };
                ratio.push(r);
                let cols: Vec<usize> = (1..9).collect();
                let e8 = over.embedding.select_columns(&cols);
                primitive.push(match is_primitive(&e8, &over.lattice) {
                    Ok(p) => p.to_string(),
                    Err(e) => e.to_string(),
                });
            }
            (Err(e), _) | (_, Err(e)) => {
                for v in [&mut even, &mut ratio, &mut primitive] {
                    v.push(e.to_string());
                }
            }
        }
    }
    let rejected = (0..10)
        .map(|k| 2 * k + 1)
        .filter(|&d| matches!(lambda_tilde_d(d), Err(ref e) if e.to_string() == "d must be even"))
        .count();
    let anchor = "even index-two overlattice of the polarized lattice";
    vec![
        Check::compare("c1.lambda-tilde.even", anchor, join(ds.iter().map(|_| true)), join(even)),
        Check::compare("c1.lambda-tilde.det-ratio", anchor, join(ds.iter().map(|_| 4)), join(ratio)),
        Check::compare(
            "c1.lambda-tilde.e8-primitive",
            "E8(-2) stays primitive in the overlattice",
            join(ds.iter().map(|_| true)),
            join(primitive),
        ),
        Check::compare(
            "c1.lambda-tilde.odd-rejected",
            "overlattice defined for even d only",
            fraction(10, 10),
            fraction(rejected, 10),
        ),
    ]
}

/// Generic models drawn from `seed`.
pub fn sample_models(seed: u64, samples: usize) -> Vec<WeierstrassModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(|_| sample_generic_model(&mut rng).0).collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Placement {
    /// `I_2` over the zeros of `b`, `I_1` over the zeros of `a² − 4b`.
    TwoOverB,
    /// `I_1` over the zeros of `b`, `I_2` over the zeros of `a² − 4b`.
    OneOverB,
    Mixed,
}

fn placement(model: &WeierstrassModel, reports: &[k3kit_core::fibration::FiberReport]) -> Placement {
    let disc = model.quadratic_discriminant();
    let mut two_over_b = true;
    let mut one_over_b = true;
    for r in reports {
        let Place::Finite(p) = &r.place else {
            return Placement::Mixed;
        };
        let (in_b, in_disc) = (p.divides(model.b()), p.divides(&disc));
        two_over_b &= (r.kodaira == Kodaira::I(2) && in_b) || (r.kodaira == Kodaira::I(1) && in_disc);
        one_over_b &= (r.kodaira == Kodaira::I(1) && in_b) || (r.kodaira == Kodaira::I(2) && in_disc);
    }
    match (two_over_b, one_over_b) {
        (true, false) => Placement::TwoOverB,
        (false, true) => Placement::OneOverB,
        _ => Placement::Mixed,
    }
}

fn fiber_configuration(opts: &VerifyOptions) -> Vec<Check> {
    let models = sample_models(opts.seed, opts.samples);
    let total = models.len();
    let (mut counts_ok, mut euler_ok, mut rank_ok, mut torsion_ok) = (0, 0, 0, 0);
    let mut placements = Vec::new();
    for m in &models {
        torsion_ok += usize::from(two_torsion_check(m));
        let Ok(reports) = classify_fibers(m) else {
            placements.push(Placement::Mixed);
            continue;
        };
        let weight = |k| reports.iter().filter(|r| r.kodaira == k).map(|r| r.degree_weight).sum::<usize>();
        let others = reports.iter().any(|r| !matches!(r.kodaira, Kodaira::I(1) | Kodaira::I(2)));
        counts_ok += usize::from(weight(Kodaira::I(1)) == 8 && weight(Kodaira::I(2)) == 8 && !others);
        euler_ok += usize::from(euler_check(&reports) == 24);
        rank_ok += usize::from(shioda_tate_rank(&reports, 0) == 10);
        placements.push(placement(m, &reports));
    }
    let stated = "I_1 over zeros of b, I_2 over zeros of a^2-4b";
    let tate = "I_2 over zeros of b, I_1 over zeros of a^2-4b";
    let placement_check = {
        let computed = if placements.iter().all(|&p| p == Placement::TwoOverB) {
            tate.to_string()
        } else if placements.iter().all(|&p| p == Placement::OneOverB) {
            stated.to_string()
        } else {
            format!("mixed placement on {} models", placements.iter().filter(|&&p| p == Placement::Mixed).count())
        };
        let status = if computed == stated {
            Status::Pass
        } else if computed == tate {
            Status::DiscrepancyDocumented
        } else {
            Status::Fail
        };
        Check {
            id: "c2.fibers.placement".into(),
            anchor: "ordering of I_1 and I_2 fibres against b and a^2-4b".into(),
            expected: stated.into(),
            computed,
            status,
        }
    };
    vec![
        Check::compare(
            "c2.fibers.counts",
            "eight I_1 and eight I_2 fibres",
            fraction(total, total),
            fraction(counts_ok, total),
        ),
        Check::compare(
            "c2.fibers.euler",
            "Euler numbers of singular fibres sum to 24",
            fraction(total, total),
            fraction(euler_ok, total),
        ),
        placement_check,
        Check::compare(
            "c2.fibers.shioda-tate",
            "Picard rank 10 of the general member",
            fraction(total, total),
            fraction(rank_ok, total),
        ),
        Check::compare(
            "c2.fibers.torsion-section",
            "(0,0) is a 2-torsion section",
            fraction(total, total),
            fraction(torsion_ok, total),
        ),
    ]
}

fn ns_table() -> Vec<Check> {
    let ns = ns_lattice();
    let tau = ns.tau();
    let es: Vec<i64> = (2..=10).collect();
    let cs: Vec<_> = es.iter().map(|&e| curve_class_c(&ns, e).expect("e >= 2")).collect();
    let tests = default_test_classes(&ns);
    let tau_anchor = "translation section tau = sigma + 2F - Nhat";
    let c_anchor = "curve class C = eN + F + sigma + tau";
    vec![
        Check::compare("c3.ns.det", "Neron-Severi discriminant", 64, ns.lattice.det().abs()),
        Check::compare("c3.ns.signature", "hyperbolic signature", "(1,9)", ns.lattice.signature()),
        Check::compare("c3.tau.square", tau_anchor, -2, ns.intersect(&tau, &tau)),
        Check::compare("c3.tau.sigma", tau_anchor, 0, ns.intersect(&tau, &ns.sigma())),
        Check::compare("c3.tau.fiber", tau_anchor, 1, ns.intersect(&tau, &ns.fiber())),
        Check::compare(
            "c3.tau.n",
            tau_anchor,
            join((1..=8).map(|_| 1)),
            join((1..=8).map(|i| ns.intersect(&tau, &ns.n(i)))),
        ),
        Check::compare(
            "c3.curve.square",
            c_anchor,
            join(es.iter().map(|e| 4 * e)),
            join(cs.iter().map(|c| ns.intersect(c, c))),
        ),
        Check::compare(
            "c3.curve.sigma",
            c_anchor,
            join(es.iter().map(|e| e - 1)),
            join(cs.iter().map(|c| ns.intersect(c, &ns.sigma()))),
        ),
        Check::compare(
            "c3.curve.n",
            "C meets every N_i once",
            join(cs.iter().map(|_| 1)),
            join(cs.iter().map(|c| {
                let v: Vec<_> = (1..=8).map(|i| ns.intersect(c, &ns.n(i))).collect();
                if v.iter().all(|x| x == &v[0]) {
                    v[0].to_string()
                } else {
                    format!("{:?}", v)
                }
            })),
        ),
        Check::compare(
            "c3.curve.primitive",
            "C is primitive",
            join(cs.iter().map(|_| true)),
            join(cs.iter().map(|c| c.is_primitive())),
        ),
        Check::compare(
            "c3.curve.positivity",
            "C is positive on the test curves",
            join(cs.iter().map(|_| "all-positive")),
            join(cs.iter().map(|c| {
                let r = positivity_report(&ns, c, &tests);
                if r.all_positive() {
                    "all-positive".to_string()
                } else {
                    r.flagged.join("+")
                }
            })),
        ),
    ]
}

fn involution_split(opts: &VerifyOptions) -> Vec<Check> {
    let ns = ns_lattice();
    let m = involution_action();
    let n = m.rows();
    let gram = ns.lattice.gram();
    let fixes: Vec<bool> = (2..=10)
        .map(|e| curve_class_c(&ns, e).expect("e >= 2"))
        .chain([ns.fiber()])
        .map(|c| ns.apply(&m, &c) == c)
        .collect();
    let anchor = "E8(-2) as the anti-invariant part of NS";
    let mut checks = vec![
        Check::compare("c4.involution.order", "the action is an involution", true, m.mul(&m) == Matrix::identity(n)),
        Check::compare(
            "c4.involution.isometry",
            "the action preserves the pairing",
            true,
            &m.transpose().mul(gram).mul(&m) == gram,
        ),
        Check::compare(
            "c4.involution.fixes",
            "C(e) and F are invariant",
            fraction(fixes.len(), fixes.len()),
            fraction(fixes.iter().filter(|&&b| b).count(), fixes.len()),
        ),
    ];
    match ns_involution_split(&ns) {
        Ok(split) => {
            let anti = &split.anti_invariant.lattice;
            let disc = DiscriminantGroup::new(anti);
            let divisors =
                disc.elementary_divisors().iter().filter(|d| *d != &BigInt::from(1)).cloned().collect::<Vec<_>>();
            let disc_str = if !divisors.is_empty() && divisors.iter().all(|d| d == &divisors[0]) {
                format!("(Z/{})^{}", divisors[0], divisors.len())
            } else {
                format!("{:?}", divisors)
            };
            let roots = match short_vectors(anti, -4, opts.limit) {
                Ok(c) => c.to_string(),
                Err(e) => e.to_string(),
            };
            checks.extend([
                Check::compare("c4.split.invariant-rank", anchor, 2, split.invariant.lattice.rank()),
                Check::compare("c4.split.anti-rank", anchor, 8, anti.rank()),
                Check::compare("c4.split.anti-det", anchor, 256, anti.det().abs()),
                Check::compare(
                    "c4.split.anti-even-negative-definite",
                    anchor,
                    true,
                    anti.is_even() && anti.is_negative_definite(),
                ),
                Check::compare("c4.split.anti-discriminant", anchor, "(Z/2)^8", disc_str),
                Check::compare("c4.split.anti-norm-minus-4", anchor, 240, roots),
            ]);
        }
        Err(e) => checks.push(Check::compare("c4.split", anchor, "split", e)),
    }
    checks
}

fn automorphism_table() -> Vec<Check> {
    let fixed = join(ORDERS.iter().map(|&p| match OrderPDatum::new(p) {
        Ok(d) => lefschetz_fixed_points(&d).to_string(),
        Err(e) => e.to_string(),
    }));
    let dims = join(ORDERS.iter().map(|&p| match moduli_dimension(p) {
        Ok(d) => d.to_string(),
        Err(e) => e.to_string(),
    }));
    let k = lefschetz_fixed_points(&OrderPDatum::new(2).expect("order 2"));
    let quotient = match quotient_euler_check(2, k) {
        Ok(v) => v.to_string(),
        Err(e) => e.to_string(),
    };
    vec![
        Check::compare("c5.autnum.fixed-points", "Lefschetz count for orders 2,3,5,7", "8,6,4,3", fixed),
        Check::compare("c5.autnum.moduli-dimension", "moduli dimensions for orders 2,3,5,7", "11,7,3,1", dims),
        Check::compare("c5.autnum.quotient-euler", "resolved quotient by the involution", 24, quotient),
        Check::compare(
            "c5.autnum.identity",
            "Lefschetz number of the identity",
            24,
            lefschetz_fixed_points(&OrderPDatum::trivial()),
        ),
    ]
}

fn stable_map_chain() -> Vec<Check> {
    let es: Vec<i64> = (2..=10).collect();
    let configs: Vec<_> = es.iter().map(|&e| chain_config(e).expect("e >= 2")).collect();
    let genus = join(configs.iter().map(|c| match arithmetic_genus(c) {
        Ok(g) => g.to_string(),
        Err(e) => e.to_string(),
    }));
    let conditions = join(configs.iter().map(|c| {
        let r = validate_chain_conditions(c);
        if r.holds() {
            "i+ii+iii+iv".to_string()
        } else {
            format!("failed {:?}", r.failed())
        }
    }));
    let cohomology: Vec<String> = configs
        .iter()
        .map(|c| match ChainBundle::from_config(c).and_then(|b| chain_normal_cohomology(&b)) {
            Ok((h0, h1)) => format!("({};{})", h0, h1),
            Err(e) => e.to_string(),
        })
        .collect();
    let dims = join(cohomology.iter().map(|s| if s == "(1;0)" { "1".to_string() } else { s.clone() }));
    let anchor = "genus-one stable map onto C";
    vec![
        Check::compare("c6.chain.genus", anchor, join(es.iter().map(|_| 1)), genus),
        Check::compare(
            "c6.chain.conditions",
            "chain conditions i-iv hold",
            join(es.iter().map(|_| "i+ii+iii+iv")),
            conditions,
        ),
        Check::compare(
            "c6.chain.cohomology",
            "normal sheaf cohomology of the chain",
            join(es.iter().map(|_| "(1;0)")),
            join(cohomology),
        ),
        Check::compare(
            "c6.chain.dimension",
            "moduli of genus-one maps is one-dimensional",
            join(es.iter().map(|_| expected_dim(1, 0, true))),
            dims,
        ),
    ]
}

fn oracle_equivalence(opts: &VerifyOptions) -> Vec<Check> {
    let chains = random_chains(opts.seed, opts.chains, 6, -3, 3);
    let total = chains.len();
    let (mut shaped, mut agree, mut chi_ok, mut errors) = (0, 0, 0, 0);
    for (i, degrees) in chains.iter().enumerate() {
        match compare_with_oracle(degrees, opts.seed.wrapping_add(i as u64)) {
            Ok(cmp) => {
                chi_ok += usize::from(cmp.oracle.0 as i64 - cmp.oracle.1 as i64 == cmp.chi);
                if let Some(p) = cmp.peeling {
                    shaped += 1;
                    agree += usize::from(p == cmp.oracle);
                }
            }
            Err(_) => errors += 1,
        }
    }
    let anchor = "peeling induction against brute-force gluing";
    vec![
        Check::compare("c7.oracle.agreement", anchor, fraction(shaped, shaped), fraction(agree, shaped)),
        Check::compare(
            "c7.oracle.euler-characteristic",
            "h0 - h1 equals the degree count",
            fraction(total, total),
            fraction(chi_ok, total),
        ),
        Check::compare("c7.oracle.errors", anchor, 0, errors),
    ]
}

fn dimension_bookkeeping() -> Vec<Check> {
    let grid: Vec<(u32, u32)> = (0..=2).flat_map(|g| (0..=11).map(move |s| (g, s))).collect();
    let total = grid.len();
    let free = grid.iter().filter(|&&(g, s)| expected_dim(g, s, false) == i64::from(g) - 1 + i64::from(s)).count();
    let fixed = grid.iter().filter(|&&(g, s)| expected_dim(g, s, true) == i64::from(g) + i64::from(s)).count();
    let cases: Vec<(u32, u32, u32)> = grid.iter().flat_map(|&(g, s)| (0..=g + 3).map(move |f| (g, s, f))).collect();
    let flag = cases.iter().filter(|&&(g, s, f)| domination(g, s, f).dominates == (f <= g)).count();
    vec![
        Check::compare(
            "c8.dims.free-class",
            "expected dimension g-1+dim S",
            fraction(total, total),
            fraction(free, total),
        ),
        Check::compare("c8.dims.fixed-class", "lower bound g+dim S", fraction(total, total), fraction(fixed, total)),
        Check::compare(
            "c8.dims.domination",
            "domination iff fibre dimension at most g",
            fraction(cases.len(), cases.len()),
            fraction(flag, cases.len()),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criterion_prefix() {
        let c = Check::compare("c7.oracle.errors", "", 0, 0);
        assert_eq!(c.criterion(), Some(7));
        assert_eq!(c.status, Status::Pass);
        assert_eq!(Check::compare("x", "", 1, 2).status, Status::Fail);
    }

    #[test]
    fn status_serializes_in_caps() {
        assert_eq!(serde_json::to_string(&Status::DiscrepancyDocumented).unwrap(), "\"DISCREPANCY_DOCUMENTED\"");
    }

    #[test]
    fn placement_is_tate_consistent() {
        let checks = fiber_configuration(&VerifyOptions { samples: 3, ..VerifyOptions::default() });
        let p = checks.iter().find(|c| c.id == "c2.fibers.placement").unwrap();
        assert_eq!(p.status, Status::DiscrepancyDocumented);
        assert!(checks.iter().filter(|c| c.id != p.id).all(|c| c.status == Status::Pass));
    }
}
