//! `k3kit` command line. Exit codes: 0 success, 1 failed check, 2 usage or
//! input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use k3kit_core::autnum::order_p_table;
use k3kit_core::fibration::{
    check_generic, classify_fibers, curve_class_c, default_test_classes, euler_check, involution_action,
    ns_involution_split, ns_lattice, positivity_report, shioda_tate_rank,
};
use k3kit_core::lattice::{
    lambda_d, lambda_tilde_d, orthogonal_complement, overlattice, short_vectors, standard_lattice, twist,
    DiscriminantGroup, GlueVector, IntegralLattice, SearchLimit, StandardLattice,
};
use k3kit_core::matrix::Matrix;
use k3kit_core::stablemap::{
    arithmetic_genus, chain_config, chain_normal_cohomology, validate_chain_conditions, ChainBundle, StableMapConfig,
};
use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;
use serde_json::json;

use crate::formats::{
    parse_rational, read_config, read_lattice, read_model, to_json, ConfigFile, FiberJson, JsonInt, LatticeFile,
    ModelFile,
};
use crate::verify::{sample_models, verify_all, VerifyOptions};

pub const SEARCH_LIMIT_ENV: &str = "K3KIT_SEARCH_LIMIT";

#[derive(Parser, Debug)]
#[command(
    name = "k3kit",
    version,
    about = "Exact lattice, fibration and stable-map computations for an elliptic K3 family"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integral lattices and their discriminant forms.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Weierstrass models and the Néron–Severi lattice.
    #[command(subcommand)]
    Fibration(FibrationCmd),
    /// Prime-order symplectic automorphisms.
    #[command(subcommand)]
    Autnum(AutnumCmd),
    /// Dual graphs of stable maps and chain cohomology.
    #[command(subcommand)]
    Stablemap(StablemapCmd),
    /// Recompute every claim and report PASS/FAIL per check.
    #[command(name = "verify-paper")]
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct LatticeInput {
    /// Lattice JSON file.
    #[arg(long, conflicts_with = "name")]
    input: Option<PathBuf>,
    /// Built-in lattice: U, E8 or Nikulin.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// Emit a lattice as JSON, optionally twisted.
    Build {
        #[command(flatten)]
        src: LatticeInput,
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<i64>,
    },
    /// Rank, determinant, signature, parity.
    Invariants {
        #[command(flatten)]
        src: LatticeInput,
    },
    /// Discriminant group and its quadratic form.
    Disc {
        #[command(flatten)]
        src: LatticeInput,
    },
    /// Overlattice generated by one glue vector, e.g. `--glue 1/2,0`.
    Overlattice {
        #[command(flatten)]
        src: LatticeInput,
        #[arg(long, allow_hyphen_values = true)]
        glue: String,
    },
    /// Orthogonal complement of vectors given as `1,0,0;0,1,0`.
    Complement {
        #[command(flatten)]
        src: LatticeInput,
        #[arg(long, allow_hyphen_values = true)]
        vectors: String,
    },
    /// Number of nonzero vectors of a given norm in a definite lattice.
    ShortVectors {
        #[command(flatten)]
        src: LatticeInput,
        #[arg(long, allow_hyphen_values = true)]
        norm: i64,
    },
    /// `Zℓ ⊕ E8(−2)` with `ℓ² = 2d`.
    Lambda {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Even index-two overlattice of `Zℓ ⊕ E8(−2)`.
    LambdaTilde {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
}

#[derive(Args, Debug)]
struct ModelInput {
    /// Model JSON file `{"a": [...], "b": [...]}`.
    #[arg(long, conflicts_with = "seed")]
    input: Option<PathBuf>,
    /// Draw a generic model from this seed instead.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum FibrationCmd {
    /// Singular fibres, genericity and rank of a model.
    Analyze {
        #[command(flatten)]
        src: ModelInput,
    },
    /// Gram matrix and named classes of NS.
    Ns,
    /// Intersection numbers of the curve class `C(e)` with the test curves.
    Classes {
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        e: i64,
    },
    /// Invariant and anti-invariant parts under the torsion translation.
    Split,
}

#[derive(Subcommand, Debug)]
enum AutnumCmd {
    /// Fixed points and moduli dimension for p = 2, 3, 5, 7.
    Table,
}

#[derive(Args, Debug)]
struct ConfigInput {
    /// Configuration JSON file.
    #[arg(long, conflicts_with = "chain")]
    input: Option<PathBuf>,
    /// Use the chain of length e + 2 for the curve class C(e).
    #[arg(long = "paper-config", allow_hyphen_values = true)]
    chain: Option<i64>,
}

#[derive(Subcommand, Debug)]
enum StablemapCmd {
    /// Arithmetic genus of the domain.
    Genus {
        #[command(flatten)]
        src: ConfigInput,
    },
    /// Chain conditions with per-condition diagnostics.
    Validate {
        #[command(flatten)]
        src: ConfigInput,
    },
    /// `(h0, h1)` of the normal sheaf along a chain.
    Cohomology {
        #[command(flatten)]
        src: ConfigInput,
    },
    /// Emit the chain configuration for `C(e)`.
    #[command(name = "paper-config")]
    ChainConfig {
        #[arg(long, allow_hyphen_values = true)]
        e: i64,
    },
}

/// Error that maps to an exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Check(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

/// Parses the search limit override: `max_norm` or `max_rank,max_norm`.
pub fn parse_search_limit(s: &str) -> Result<SearchLimit, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| x.parse::<u64>().map_err(|e| format!("{}: {:?}: {}", SEARCH_LIMIT_ENV, s, e));
    match parts.as_slice() {
        [norm] => Ok(SearchLimit { max_norm: num(norm)?, ..SearchLimit::default() }),
        [rank, norm] => Ok(SearchLimit { max_rank: num(rank)? as usize, max_norm: num(norm)? }),
        _ => Err(format!("{}: expected `max_norm` or `max_rank,max_norm`, got {:?}", SEARCH_LIMIT_ENV, s)),
    }
}

fn search_limit() -> Result<SearchLimit, Failure> {
    match std::env::var(SEARCH_LIMIT_ENV) {
        Ok(v) => parse_search_limit(&v).map_err(Failure::Usage),
        Err(_) => Ok(SearchLimit::default()),
    }
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {}", path.display(), e)))
}

fn load_lattice(src: &LatticeInput) -> Result<(IntegralLattice, Option<String>), Failure> {
    match (&src.input, &src.name) {
        (Some(path), _) => Ok(read_lattice(&read_file(path)?)?),
        (None, Some(name)) => {
            let which: StandardLattice = name.parse()?;
            Ok((standard_lattice(which), Some(name.clone())))
        }
        (None, None) => Err(Failure::Usage("one of --input or --name is required".into())),
    }
}

fn parse_vector(s: &str) -> Result<Vec<BigInt>, Failure> {
    s.split(',')
        .map(|x| x.trim().parse::<BigInt>().map_err(|e| Failure::Usage(format!("bad integer {:?}: {}", x, e))))
        .collect()
}

fn lattice_cmd(cmd: LatticeCmd) -> Outcome {
    match cmd {
        LatticeCmd::Build { src, twist: n } => {
            let (l, name) = load_lattice(&src)?;
            let l = match n {
                Some(n) => twist(&l, n)?,
                None => l,
            };
            let name = match (name, n) {
                (Some(s), Some(n)) => Some(format!("{}({})", s, n)),
                (s, _) => s,
            };
            Ok(to_json(&LatticeFile::from_lattice(&l, name.as_deref())))
        }
        LatticeCmd::Invariants { src } => {
            let (l, _) = load_lattice(&src)?;
            Ok(to_json(&invariants_json(&l)))
        }
        LatticeCmd::Disc { src } => {
            let (l, _) = load_lattice(&src)?;
            let d = DiscriminantGroup::new(&l);
            let divisors: Vec<JsonInt> = d.elementary_divisors().iter().cloned().map(JsonInt).collect();
            let gens: Vec<Vec<String>> =
                d.generators().iter().map(|g| g.iter().map(|x| x.to_string()).collect()).collect();
            let q: Option<Vec<String>> = d.qvalues().map(|q| q.iter().map(|x| x.to_string()).collect());
            Ok(to_json(&json!({
                "order": JsonInt(d.order()),
                "elementary_divisors": divisors,
                "generators": gens,
                "qvalues": q,
            })))
        }
        LatticeCmd::Overlattice { src, glue } => {
            let (l, _) = load_lattice(&src)?;
            let coords = glue.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>().map_err(Failure::Usage)?;
            let o = overlattice(&l, &GlueVector::new(coords)?)?;
            Ok(to_json(&json!({
                "index": JsonInt(o.index.clone()),
                "lattice": LatticeFile::from_lattice(&o.lattice, None),
                "invariants": invariants_json(&o.lattice),
            })))
        }
        LatticeCmd::Complement { src, vectors } => {
            let (l, _) = load_lattice(&src)?;
            let cols = vectors.split(';').map(parse_vector).collect::<Result<Vec<_>, _>>()?;
            if cols.iter().any(|c| c.len() != l.rank()) {
                return Err(Failure::Usage(format!("vectors must have {} entries", l.rank())));
            }
            let s = orthogonal_complement(&Matrix::from_columns(l.rank(), &cols), &l)?;
            let basis: Vec<Vec<JsonInt>> =
                (0..s.basis.cols()).map(|j| s.basis.column(j).into_iter().map(JsonInt).collect()).collect();
            Ok(to_json(&json!({
                "basis": basis,
                "lattice": LatticeFile::from_lattice(&s.lattice, None),
                "invariants": invariants_json(&s.lattice),
            })))
        }
        LatticeCmd::ShortVectors { src, norm } => {
            let (l, _) = load_lattice(&src)?;
            let limit = search_limit()?;
            let count = short_vectors(&l, norm, limit)?;
            Ok(to_json(&json!({ "norm": norm, "count": count })))
        }
        LatticeCmd::Lambda { d } => {
            Ok(to_json(&LatticeFile::from_lattice(&lambda_d(d)?, Some(&format!("Lambda_{}", d)))))
        }
        LatticeCmd::LambdaTilde { d } => {
            Ok(to_json(&LatticeFile::from_lattice(&lambda_tilde_d(d)?, Some(&format!("LambdaTilde_{}", d)))))
        }
    }
}

#[derive(Serialize)]
struct Invariants {
    rank: usize,
    det: JsonInt,
    signature: (usize, usize),
    even: bool,
    unimodular: bool,
    discriminant_order: JsonInt,
}

fn invariants_json(l: &IntegralLattice) -> Invariants {
    let s = l.signature();
    Invariants {
        rank: l.rank(),
        det: JsonInt(l.det().clone()),
        signature: (s.positive, s.negative),
        even: l.is_even(),
        unimodular: l.is_unimodular(),
        discriminant_order: JsonInt(l.det().abs()),
    }
}

fn fibration_cmd(cmd: FibrationCmd) -> Outcome {
    match cmd {
        FibrationCmd::Analyze { src } => {
            let model = match (&src.input, src.seed) {
                (Some(path), _) => read_model(&read_file(path)?)?,
                (None, Some(seed)) => sample_models(seed, 1).remove(0),
                (None, None) => return Err(Failure::Usage("one of --input or --seed is required".into())),
            };
            let fibers = classify_fibers(&model)?;
            let issues: Vec<String> = check_generic(&model).issues.iter().map(|i| i.to_string()).collect();
            Ok(to_json(&json!({
                "model": ModelFile::from_model(&model),
                "generic": issues.is_empty(),
                "issues": issues,
                "fibers": fibers.iter().map(FiberJson::from).collect::<Vec<_>>(),
                "euler_sum": euler_check(&fibers),
                "shioda_tate_rank": shioda_tate_rank(&fibers, 0),
            })))
        }
        FibrationCmd::Ns => {
            let ns = ns_lattice();
            let classes: Vec<_> = ns
                .classes()
                .iter()
                .map(|(n, c)| json!({ "name": n, "coords": c.coords().iter().map(|x| x.to_string()).collect::<Vec<_>>() }))
                .collect();
            Ok(to_json(&json!({
                "basis": ["sigma", "F", "N1", "N2", "N3", "N4", "N5", "N6", "N7", "Nhat"],
                "lattice": LatticeFile::from_lattice(&ns.lattice, Some("NS")),
                "invariants": invariants_json(&ns.lattice),
                "classes": classes,
            })))
        }
        FibrationCmd::Classes { e } => {
            let ns = ns_lattice();
            let c = curve_class_c(&ns, e)?;
            let r = positivity_report(&ns, &c, &default_test_classes(&ns));
            let pairings: Vec<_> =
                r.pairings.iter().map(|(n, v)| json!({ "class": n, "pairing": v.to_string() })).collect();
            Ok(to_json(&json!({
                "e": e,
                "coords": c.coords().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "square": r.square.to_string(),
                "primitive": c.is_primitive(),
                "pairings": pairings,
                "flagged": r.flagged,
                "all_positive": r.all_positive(),
            })))
        }
        FibrationCmd::Split => {
            let ns = ns_lattice();
            let split = ns_involution_split(&ns)?;
            let anti = &split.anti_invariant.lattice;
            let disc = DiscriminantGroup::new(anti);
            let limit = search_limit()?;
            let action: Vec<Vec<JsonInt>> =
                involution_action().to_rows().into_iter().map(|r| r.into_iter().map(JsonInt).collect()).collect();
            Ok(to_json(&json!({
                "action": action,
                "invariant": invariants_json(&split.invariant.lattice),
                "anti_invariant": invariants_json(anti),
                "anti_invariant_elementary_divisors": disc.elementary_divisors().iter().cloned().map(JsonInt).collect::<Vec<_>>(),
                "anti_invariant_norm_minus_4": short_vectors(anti, -4, limit)?,
            })))
        }
    }
}

fn load_config(src: &ConfigInput) -> Result<StableMapConfig, Failure> {
    match (&src.input, src.chain) {
        (Some(path), _) => Ok(read_config(&read_file(path)?)?),
        (None, Some(e)) => Ok(chain_config(e)?),
        (None, None) => Err(Failure::Usage("one of --input or --paper-config is required".into())),
    }
}

fn stablemap_cmd(cmd: StablemapCmd) -> Outcome {
    match cmd {
        StablemapCmd::Genus { src } => {
            let cfg = load_config(&src)?;
            Ok(to_json(&json!({ "arithmetic_genus": arithmetic_genus(&cfg)? })))
        }
        StablemapCmd::Validate { src } => {
            let cfg = load_config(&src)?;
            let r = validate_chain_conditions(&cfg);
            let conditions: Vec<_> = r
                .conditions
                .iter()
                .map(|c| json!({ "condition": c.condition.label(), "passed": c.passed, "detail": c.detail }))
                .collect();
            let out = to_json(&json!({ "holds": r.holds(), "conditions": conditions }));
            if r.holds() {
                Ok(out)
            } else {
                Err(Failure::Check(out))
            }
        }
        StablemapCmd::Cohomology { src } => {
            let cfg = load_config(&src)?;
            let chain = ChainBundle::from_config(&cfg)?;
            let (h0, h1) = chain_normal_cohomology(&chain)?;
            Ok(to_json(&json!({ "degrees": chain.degrees, "head_genus": chain.head_genus, "h0": h0, "h1": h1 })))
        }
        StablemapCmd::ChainConfig { e } => Ok(to_json(&ConfigFile::from(&chain_config(e)?))),
    }
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.command {
        Command::Lattice(c) => lattice_cmd(c),
        Command::Fibration(c) => fibration_cmd(c),
        Command::Autnum(AutnumCmd::Table) => {
            let rows: Vec<_> = order_p_table()
                .iter()
                .map(|r| json!({ "p": r.p, "fixed_points": r.fixed_points, "moduli_dim": r.moduli_dim }))
                .collect();
            Ok(to_json(&rows))
        }
        Command::Stablemap(c) => stablemap_cmd(c),
        Command::Verify { seed, samples, json } => {
            let opts = VerifyOptions { seed, samples, limit: search_limit()?, ..VerifyOptions::default() };
            let report = verify_all(&opts);
            let out = if json { to_json(&report) } else { report.to_table() };
            if report.has_failures() {
                Err(Failure::Check(out))
            } else {
                Ok(out)
            }
        }
    }
}

/// Runs the CLI, writing to the given streams; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match dispatch(cli) {
        Ok(s) => {
            let _ = out.write_all(s.as_bytes());
            0
        }
        Err(Failure::Check(s)) => {
            let _ = out.write_all(s.as_bytes());
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {}", msg);
            2
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn search_limit_parsing() {
        assert_eq!(parse_search_limit("8").unwrap(), SearchLimit { max_rank: 10, max_norm: 8 });
        assert_eq!(parse_search_limit("8, 4").unwrap(), SearchLimit { max_rank: 8, max_norm: 4 });
        assert!(parse_search_limit("a,b,c").is_err());
    }
}
