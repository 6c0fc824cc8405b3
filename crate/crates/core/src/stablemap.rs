//! Combinatorics of stable maps from nodal curves: arithmetic genus of the
//! domain, the chain conditions under which deformations come only from the
//! head component, and the cohomology of the normal sheaf along a chain.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::matrix::{self, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StableMapError {
    #[error("domain has no components")]
    Empty,
    #[error("dual graph is disconnected")]
    Disconnected,
    #[error("edge ({0}, {1}) refers to a missing component")]
    InvalidEdge(usize, usize),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("oracle handles rational heads only, got genus {0}")]
    UnsupportedHeadGenus(u32),
    #[error("chain length {len} exceeds oracle bound {max}")]
    LengthExceeded { len: usize, max: usize },
    #[error("chain needs e >= 2, got {0}")]
    ETooSmall(i64),
    #[error("unknown image kind {0:?}")]
    UnknownKind(String),
}

/// How a domain component maps to the surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ImageKind {
    EmbeddedSmooth,
    NormalizedNodal,
    Section,
    Fiber,
}

impl ImageKind {
    pub const ALL: [ImageKind; 4] =
        [ImageKind::EmbeddedSmooth, ImageKind::NormalizedNodal, ImageKind::Section, ImageKind::Fiber];

    pub fn as_str(self) -> &'static str {
        match self {
            ImageKind::EmbeddedSmooth => "EMBEDDED_SMOOTH",
            ImageKind::NormalizedNodal => "NORMALIZED_NODAL",
            ImageKind::Section => "SECTION",
            ImageKind::Fiber => "FIBER",
        }
    }

    /// The map is a closed embedding of the component. A smooth fibre of
    /// positive genus is embedded; a rational fibre is singular.
    pub fn is_embedding(self, genus: u32) -> bool {
        match self {
            ImageKind::EmbeddedSmooth | ImageKind::Section => true,
            ImageKind::Fiber => genus >= 1,
            ImageKind::NormalizedNodal => false,
        }
    }

    /// The map has injective differential on the component.
    pub fn is_unramified(self, genus: u32) -> bool {
        match self {
            ImageKind::EmbeddedSmooth | ImageKind::Section | ImageKind::NormalizedNodal => true,
            ImageKind::Fiber => genus >= 1,
        }
    }
}

impl fmt::Display for ImageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ImageKind {
    type Err = StableMapError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ImageKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| StableMapError::UnknownKind(s.into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub genus: u32,
    pub kind: ImageKind,
    /// Degree of the normal bundle before the component is twisted at its
    /// outgoing node.
    pub ndeg: i64,
}

/// Dual graph of the domain with per-component data.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StableMapConfig {
    pub components: Vec<Component>,
    pub edges: Vec<(usize, usize)>,
    pub dim_base: u32,
}

impl StableMapConfig {
    fn check_edges(&self) -> Result<(), StableMapError> {
        let n = self.components.len();
        match self.edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            Some(&(a, b)) => Err(StableMapError::InvalidEdge(a, b)),
            None => Ok(()),
        }
    }

    pub fn is_connected(&self) -> Result<bool, StableMapError> {
        let n = self.components.len();
        if n == 0 {
            return Err(StableMapError::Empty);
        }
        self.check_edges()?;
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        Ok(seen.into_iter().all(|s| s))
    }

    /// Edges exactly `{(i, i+1)}`, each once.
    pub fn is_chain(&self) -> bool {
        let n = self.components.len();
        if n == 0 || self.edges.len() != n - 1 {
            return false;
        }
        let mut seen = vec![false; n.saturating_sub(1)];
        for &(a, b) in &self.edges {
            let lo = a.min(b);
            if a.max(b) != lo + 1 || lo + 1 >= n || seen[lo] {
                return false;
            }
            seen[lo] = true;
        }
        true
    }
}

/// `Σ g_i + #edges − #components + 1`.
pub fn arithmetic_genus(config: &StableMapConfig) -> Result<i64, StableMapError> {
    if !config.is_connected()? {
        return Err(StableMapError::Disconnected);
    }
    let genera: i64 = config.components.iter().map(|c| i64::from(c.genus)).sum();
    Ok(genera + config.edges.len() as i64 - config.components.len() as i64 + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainCondition {
    /// Tail components are smooth rational curves.
    RationalTails,
    /// The head is a smooth curve embedded in the surface.
    EmbeddedHead,
    /// The map is unramified on every component.
    Unramified,
    /// Consecutive components meet transversally in one point, no others meet.
    ChainNodes,
}

impl ChainCondition {
    pub const ALL: [ChainCondition; 4] = [
        ChainCondition::RationalTails,
        ChainCondition::EmbeddedHead,
        ChainCondition::Unramified,
        ChainCondition::ChainNodes,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ChainCondition::RationalTails => "i",
            ChainCondition::EmbeddedHead => "ii",
            ChainCondition::Unramified => "iii",
            ChainCondition::ChainNodes => "iv",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionResult {
    pub condition: ChainCondition,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub conditions: Vec<ConditionResult>,
}

impl ChainReport {
    pub fn holds(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<ChainCondition> {
        self.conditions.iter().filter(|c| !c.passed).map(|c| c.condition).collect()
    }
}

fn list(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(|i| format!("{}", i)).collect();
    items.join(", ")
}

/// Checks the four chain conditions, each with a diagnostic.
pub fn validate_chain_conditions(config: &StableMapConfig) -> ChainReport {
    let comps = &config.components;
    let check = |condition, bad: Vec<usize>, what: &str| ConditionResult {
        condition,
        passed: bad.is_empty(),
        detail: if bad.is_empty() { String::from("ok") } else { format!("{} at components [{}]", what, list(&bad)) },
    };
    let tails: Vec<usize> = (1..comps.len()).filter(|&i| comps[i].genus != 0).collect();
    let head: Vec<usize> = match comps.first() {
        Some(h) if h.kind.is_embedding(h.genus) => vec![],
        _ => vec![0],
    };
    let ramified: Vec<usize> = (0..comps.len()).filter(|&i| !comps[i].kind.is_unramified(comps[i].genus)).collect();
    let nodes = ConditionResult {
        condition: ChainCondition::ChainNodes,
        passed: config.is_chain(),
        detail: if config.is_chain() {
            String::from("ok")
        } else {
            format!("edges {:?} are not the chain (i, i+1)", config.edges)
        },
    };
    ChainReport {
        conditions: vec![
            check(ChainCondition::RationalTails, tails, "positive genus"),
            check(ChainCondition::EmbeddedHead, head, "head not embedded"),
            check(ChainCondition::Unramified, ramified, "ramified image"),
            nodes,
        ],
    }
}

/// `g + dim S` for a fixed class, `g − 1 + dim S` for a class that may move
/// out of the Néron–Severi group.
pub fn expected_dim(g: u32, dim_base: u32, fixed_class: bool) -> i64 {
    i64::from(g) + i64::from(dim_base) - if fixed_class { 0 } else { 1 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Domination {
    pub lower_bound: i64,
    /// `lower_bound − fiber_dim`: forced dimension of the image in `S`.
    pub horizontal_bound: i64,
    pub dominates: bool,
}

/// With every component of dimension `≥ g + dim S` and fibres over `S` of
/// dimension `fiber_dim`, the image in `S` has dimension
/// `≥ g + dim S − fiber_dim`; it is all of `S` iff `fiber_dim ≤ g`.
pub fn domination(g: u32, dim_base: u32, fiber_dim: u32) -> Domination {
    let lower_bound = expected_dim(g, dim_base, true);
    let horizontal_bound = lower_bound - i64::from(fiber_dim);
    Domination { lower_bound, horizontal_bound, dominates: horizontal_bound >= i64::from(dim_base) }
}

/// Line bundle on a chain: `degrees[i]` is the degree on component `i`;
/// component 0 is the head.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainBundle {
    pub degrees: Vec<i64>,
    pub head_genus: u32,
    pub seed: u64,
}

impl ChainBundle {
    pub fn new(degrees: Vec<i64>, head_genus: u32) -> Self {
        ChainBundle { degrees, head_genus, seed: 0 }
    }

    /// Normal sheaf of a chain map: every component with a successor gains
    /// the node to the next component.
    pub fn from_config(config: &StableMapConfig) -> Result<Self, StableMapError> {
        if !config.is_chain() {
            return Err(StableMapError::UnsupportedShape(String::from("dual graph is not a chain")));
        }
        if config.components[1..].iter().any(|c| c.genus != 0) {
            return Err(StableMapError::UnsupportedShape(String::from("tail of positive genus")));
        }
        let n = config.components.len();
        let degrees = config.components.iter().enumerate().map(|(i, c)| c.ndeg + i64::from(i + 1 < n)).collect();
        Ok(ChainBundle::new(degrees, config.components[0].genus))
    }

    fn nodes(&self) -> usize {
        self.degrees.len().saturating_sub(1)
    }

    /// `Σ (d_i + 1 − g_i) − #nodes`.
    pub fn euler_characteristic(&self) -> i64 {
        let sum: i64 = self.degrees.iter().map(|d| d + 1).sum();
        sum - i64::from(self.head_genus) - self.nodes() as i64
    }
}

/// `(h⁰, h¹)` by peeling: a trailing degree `−1` component carries no
/// sections and only forces the previous one to vanish at the node. The
/// remaining head contributes `h^i(O(d))` when rational and `h⁰(ω) = g` when
/// of genus `g ≥ 1` with canonical degree.
pub fn chain_normal_cohomology(chain: &ChainBundle) -> Result<(u64, u64), StableMapError> {
    let mut degrees = chain.degrees.clone();
    if degrees.is_empty() {
        return Err(StableMapError::Empty);
    }
    while degrees.len() > 1 {
        let last = degrees.pop().expect("nonempty");
        if last != -1 {
            return Err(StableMapError::UnsupportedShape(format!(
                "tail component {} has degree {}, expected -1",
                degrees.len(),
                last
            )));
        }
        *degrees.last_mut().expect("nonempty") -= 1;
    }
    let d = degrees[0];
    match chain.head_genus {
        0 => Ok(((d + 1).max(0) as u64, (-d - 1).max(0) as u64)),
        g if d == 2 * i64::from(g) - 2 => Ok((u64::from(g), 0)),
        g => Err(StableMapError::UnsupportedShape(format!("genus {} head of degree {} is not canonical", g, d))),
    }
}

pub const ORACLE_MAX_LENGTH: usize = 12;

/// `(h⁰, h¹)` of a rational chain by linear algebra: a section on component
/// `i` is a polynomial of degree `≤ d_i`, with value `c_0` at `0` and `c_{d_i}`
/// at `∞`; the node joins `∞` on `i` to `0` on `i + 1` through a nonzero
/// gluing constant drawn from `seed`.
pub fn chain_cohomology_oracle(degrees: &[i64], head_genus: u32, seed: u64) -> Result<(u64, u64), StableMapError> {
    if head_genus != 0 {
        return Err(StableMapError::UnsupportedHeadGenus(head_genus));
    }
    if degrees.is_empty() {
        return Err(StableMapError::Empty);
    }
    if degrees.len() > ORACLE_MAX_LENGTH {
        return Err(StableMapError::LengthExceeded { len: degrees.len(), max: ORACLE_MAX_LENGTH });
    }
    let mut offsets = Vec::with_capacity(degrees.len());
    let mut unknowns = 0usize;
    for &d in degrees {
        offsets.push(unknowns);
        unknowns += (d + 1).max(0) as usize;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = degrees.len() - 1;
    let mut m = Matrix::<BigRational>::zeros(nodes, unknowns);
    for i in 0..nodes {
        let lambda: i64 = loop {
            let x = rng.gen_range(-1000..=1000);
            if x != 0 {
                break x;
            }
        };
        if degrees[i] >= 0 {
            m[(i, offsets[i] + degrees[i] as usize)] = BigRational::from_integer(BigInt::from(1));
        }
        if degrees[i + 1] >= 0 {
            m[(i, offsets[i + 1])] = BigRational::from_integer(BigInt::from(-lambda));
        }
    }
    let rank = if nodes == 0 || unknowns == 0 { 0 } else { matrix::rank(&m) };
    let h0 = (unknowns - rank) as i64;
    let chi = ChainBundle::new(degrees.to_vec(), 0).euler_characteristic();
    let h1 = h0 - chi;
    debug_assert!(h1 >= 0);
    Ok((h0 as u64, h1 as u64))
}

/// Seeded rational chains of length `1..=max_len` with degrees in `[lo, hi]`.
pub fn random_chains(seed: u64, count: usize, max_len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len).map(|_| rng.gen_range(lo..=hi)).collect()
        })
        .collect()
}

/// Outcome of comparing the oracle with peeling on one chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleComparison {
    pub degrees: Vec<i64>,
    pub oracle: (u64, u64),
    /// `None` when the chain is not of peeling shape.
    pub peeling: Option<(u64, u64)>,
    pub chi: i64,
}

impl OracleComparison {
    pub fn agrees(&self) -> bool {
        let chi_ok = self.oracle.0 as i64 - self.oracle.1 as i64 == self.chi;
        chi_ok && self.peeling.is_none_or(|p| p == self.oracle)
    }
}

pub fn compare_with_oracle(degrees: &[i64], seed: u64) -> Result<OracleComparison, StableMapError> {
    let chain = ChainBundle { degrees: degrees.to_vec(), head_genus: 0, seed };
    let oracle = chain_cohomology_oracle(degrees, 0, seed)?;
    Ok(OracleComparison {
        degrees: degrees.to_vec(),
        oracle,
        peeling: chain_normal_cohomology(&chain).ok(),
        chi: chain.euler_characteristic(),
    })
}

/// Chain `F̄, σ̄, N̄_1, …, N̄_e` of length `e + 2` mapping onto the curve
/// `C = eN + F + σ + τ`.
pub fn chain_config(e: i64) -> Result<StableMapConfig, StableMapError> {
    if e < 2 {
        return Err(StableMapError::ETooSmall(e));
    }
    let mut components = vec![
        Component { genus: 1, kind: ImageKind::Fiber, ndeg: 0 },
        Component { genus: 0, kind: ImageKind::Section, ndeg: -1 },
    ];
    components.extend((0..e).map(|_| Component { genus: 0, kind: ImageKind::NormalizedNodal, ndeg: -1 }));
    let edges = (0..components.len() - 1).map(|i| (i, i + 1)).collect();
    Ok(StableMapConfig { components, edges, dim_base: 0 })
}

/// Component counts by image kind.
pub fn kind_census(config: &StableMapConfig) -> BTreeMap<ImageKind, usize> {
    let mut m = BTreeMap::new();
    for c in &config.components {
        *m.entry(c.kind).or_insert(0) += 1;
    }
    m
}
