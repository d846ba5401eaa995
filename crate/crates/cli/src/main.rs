//! Command-line surface for lattice reduction, root invariants, and the
//! brute-force cross-checks.
//!
//! Exit codes: 0 success or equivalent, 1 not equivalent / check failed,
//! 2 parse or input error, 3 reduction iteration cap, 4 invariant not
//! realizable, 5 search window exhausted.

mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rootform::invariant::{
    classify, isometric, root_invariant_with, similar, snap_zeros, RootInvariant, VoronoiType,
};
use rootform::oracle::{
    auto_window, dc7, dc7_via_classes, enumerate_obtuse_superbases, quad_length_signature,
    strict_count,
};
use rootform::reconstruct::{coform_from_invariant, superbase_from_coform};
use rootform::reduction::{reduce_to_obtuse, DEFAULT_MAX_ITERS};
use rootform::Error;

use input::{parse_lattice_file, parse_single_lattice, LatticeInput};
use report::{
    fmt_coform, fmt_slots, fmt_vec, fmt_voform, print_json, sig12, superbase_rows, CompareJson,
    InvariantJson, OracleJson, ReconstructJson, ReduceJson, StepJson,
};

#[derive(Parser)]
#[command(
    name = "rootform",
    version,
    about = "Reduce 3D lattice bases to obtuse superbases, compute complete isometry invariants, and verify them by brute force"
)]
struct Cli {
    /// Relative tolerance for zero snapping and invariant comparison.
    #[arg(long, global = true, default_value_t = 1e-9, env = "ROOTFORM_TOL")]
    tol: f64,

    /// Seed for randomized checks (reserved; the built-in checks are
    /// deterministic).
    #[arg(long, global = true, env = "ROOTFORM_SEED")]
    seed: Option<u64>,

    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true, env = "ROOTFORM_JSON")]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a basis to an obtuse superbase; print vectors, coform,
    /// vonorms, and the reduction trace.
    Reduce { input: PathBuf },
    /// Compute the root invariant (accepts a CSV batch, one lattice per row).
    Invariant { input: PathBuf },
    /// Decide whether two lattices are isometric (or similar).
    Compare {
        input1: PathBuf,
        input2: PathBuf,
        /// Test for similarity (isometry up to uniform scaling).
        #[arg(long)]
        similarity: bool,
    },
    /// Rebuild an explicit superbase from an invariant JSON file.
    Reconstruct { invariant: PathBuf },
    /// Run a brute-force check against the expected structure counts.
    Oracle {
        input: PathBuf,
        #[arg(long, value_enum)]
        check: OracleCheck,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum OracleCheck {
    /// Enumerate all obtuse superbases and compare against the per-type census.
    Superbases,
    /// Count strict Voronoi classes and compare against the per-type count.
    Voronoi,
    /// Compare the seven-neighbour distances from vonorms and from 2L-class minima.
    Dc7,
}

/// Obtuse superbases per Voronoi type (enumeration-validated census).
fn expected_superbases(vtype: VoronoiType) -> usize {
    match vtype {
        VoronoiType::V1 => 2,
        VoronoiType::V2 => 4,
        VoronoiType::V3 => 6,
        VoronoiType::V4 => 12,
        VoronoiType::V5 => 32,
    }
}

/// Strict 2L-classes (antipodal Voronoi face pairs) per Voronoi type.
fn expected_strict(vtype: VoronoiType) -> usize {
    match vtype {
        VoronoiType::V1 => 7,
        VoronoiType::V2 | VoronoiType::V3 => 6,
        VoronoiType::V4 => 4,
        VoronoiType::V5 => 3,
    }
}

enum CliError {
    Input(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

fn exit_code(e: &CliError) -> u8 {
    match e {
        CliError::Input(_) => 2,
        CliError::Core(Error::NonTermination { .. }) => 3,
        CliError::Core(Error::NotRealizable) => 4,
        CliError::Core(Error::WindowTooSmall { .. }) => 5,
        CliError::Core(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Reduce { input } => cmd_reduce(cli, input),
        Command::Invariant { input } => cmd_invariant(cli, input),
        Command::Compare {
            input1,
            input2,
            similarity,
        } => cmd_compare(cli, input1, input2, *similarity),
        Command::Reconstruct { invariant } => cmd_reconstruct(cli, invariant),
        Command::Oracle { input, check } => cmd_oracle(cli, input, *check),
    }
}

fn cmd_reduce(cli: &Cli, input: &Path) -> Result<u8, CliError> {
    let basis = parse_single_lattice(input).map_err(CliError::Input)?;
    let (sb, trace) = reduce_to_obtuse(&basis, DEFAULT_MAX_ITERS)?;
    let cf = snap_zeros(&sb.conorms(), cli.tol)?;
    let vf = sb.vonorms();
    if cli.json {
        print_json(&ReduceJson {
            superbase: superbase_rows(&sb),
            coform: cf.slots(),
            vonorms: vf.slots(),
            steps: trace
                .steps
                .iter()
                .map(|s| StepJson {
                    i: s.i,
                    j: s.j,
                    epsilon: s.epsilon,
                })
                .collect(),
        });
    } else {
        println!("steps: {}", trace.iterations());
        for (n, s) in trace.steps.iter().enumerate() {
            println!(
                "  {}: ({}, {}) epsilon = {}",
                n + 1,
                s.i,
                s.j,
                sig12(s.epsilon)
            );
        }
        for (name, v) in ["v0", "v1", "v2", "v3"].iter().zip(sb.vectors()) {
            println!("{name} = {}", fmt_vec(v));
        }
        println!("coform:  {}", fmt_coform(&cf));
        println!("vonorms: {}", fmt_voform(&vf));
    }
    Ok(0)
}

fn cmd_invariant(cli: &Cli, input: &Path) -> Result<u8, CliError> {
    match parse_lattice_file(input).map_err(CliError::Input)? {
        LatticeInput::Single(basis) => {
            let ri = root_invariant_with(&basis, cli.tol, DEFAULT_MAX_ITERS)?;
            if cli.json {
                print_json(&InvariantJson::new(&ri, cli.tol));
            } else {
                println!("vtype:  {}", ri.vtype());
                println!("values: {}", fmt_slots(&ri.values()));
            }
        }
        LatticeInput::Batch(bases) => {
            let results: Result<Vec<RootInvariant>, Error> = bases
                .iter()
                .map(|b| root_invariant_with(b, cli.tol, DEFAULT_MAX_ITERS))
                .collect();
            let results = results?;
            if cli.json {
                let rows: Vec<InvariantJson> = results
                    .iter()
                    .map(|ri| InvariantJson::new(ri, cli.tol))
                    .collect();
                print_json(&rows);
            } else {
                for (k, ri) in results.iter().enumerate() {
                    println!(
                        "row {}: {} [{}]",
                        k + 1,
                        ri.vtype(),
                        fmt_slots(&ri.values())
                    );
                }
            }
        }
    }
    Ok(0)
}

fn cmd_compare(cli: &Cli, input1: &Path, input2: &Path, similarity: bool) -> Result<u8, CliError> {
    let b1 = parse_single_lattice(input1).map_err(CliError::Input)?;
    let b2 = parse_single_lattice(input2).map_err(CliError::Input)?;
    let r1 = root_invariant_with(&b1, cli.tol, DEFAULT_MAX_ITERS)?;
    let r2 = root_invariant_with(&b2, cli.tol, DEFAULT_MAX_ITERS)?;

    let (equivalent, relation, scale) = if similarity {
        match similar(&b1, &b2, cli.tol)? {
            Some(s) => (true, "similar".to_string(), Some(s)),
            None => (false, "none".to_string(), None),
        }
    } else if isometric(&b1, &b2, cli.tol)? {
        (true, "isometric".to_string(), None)
    } else {
        (false, "none".to_string(), None)
    };

    if cli.json {
        print_json(&CompareJson {
            equivalent,
            relation: relation.clone(),
            scale,
            lhs: InvariantJson::new(&r1, cli.tol),
            rhs: InvariantJson::new(&r2, cli.tol),
        });
    } else {
        println!("lhs: {} [{}]", r1.vtype(), fmt_slots(&r1.values()));
        println!("rhs: {} [{}]", r2.vtype(), fmt_slots(&r2.values()));
        match (&relation[..], scale) {
            ("similar", Some(s)) => println!("verdict: similar, s = {}", sig12(s)),
            ("isometric", _) => println!("verdict: isometric"),
            _ if similarity => println!("verdict: not similar"),
            _ => println!("verdict: not isometric"),
        }
    }
    Ok(if equivalent { 0 } else { 1 })
}

fn parse_vtype(s: &str) -> Result<VoronoiType, CliError> {
    Ok(match s {
        "V1" => VoronoiType::V1,
        "V2" => VoronoiType::V2,
        "V3" => VoronoiType::V3,
        "V4" => VoronoiType::V4,
        "V5" => VoronoiType::V5,
        other => {
            return Err(CliError::Input(format!(
                "unknown Voronoi type {other:?} (expected V1..V5)"
            )))
        }
    })
}

fn cmd_reconstruct(cli: &Cli, invariant: &Path) -> Result<u8, CliError> {
    let raw = std::fs::read_to_string(invariant)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", invariant.display())))?;
    let parsed: InvariantJson = serde_json::from_str(&raw)
        .map_err(|e| CliError::Input(format!("invalid invariant JSON: {e}")))?;
    let vtype = parse_vtype(&parsed.vtype)?;
    let ri = RootInvariant::from_values(vtype, &parsed.values)?;

    let cf = coform_from_invariant(&ri)?;
    let sb = superbase_from_coform(&cf)?;
    let round = root_invariant_with(&sb.basis(), cli.tol, DEFAULT_MAX_ITERS)?;
    let matches = round.approx_eq(&ri, cli.tol);

    if cli.json {
        print_json(&ReconstructJson {
            superbase: superbase_rows(&sb),
            coform: cf.slots(),
            round_trip: InvariantJson::new(&round, cli.tol),
            round_trip_matches: matches,
        });
    } else {
        for (name, v) in ["v0", "v1", "v2", "v3"].iter().zip(sb.vectors()) {
            println!("{name} = {}", fmt_vec(v));
        }
        println!("coform: {}", fmt_coform(&cf));
        println!(
            "round trip: {} [{}] ({})",
            round.vtype(),
            fmt_slots(&round.values()),
            if matches { "matches" } else { "MISMATCH" }
        );
    }
    Ok(if matches { 0 } else { 1 })
}

fn cmd_oracle(cli: &Cli, input: &Path, check: OracleCheck) -> Result<u8, CliError> {
    let basis = parse_single_lattice(input).map_err(CliError::Input)?;
    let (sb, _) = reduce_to_obtuse(&basis, DEFAULT_MAX_ITERS)?;
    let reduced = sb.basis();
    let cf = snap_zeros(&sb.conorms(), cli.tol)?;
    let vtype = classify(&cf)?;

    let (name, found, expected, pass) = match check {
        OracleCheck::Superbases => {
            let quads = auto_window(|b| enumerate_obtuse_superbases(&reduced, b))?;
            // Cluster by length signature at relative tolerance.
            let mut signatures: Vec<[f64; 4]> = quads
                .iter()
                .map(|q| quad_length_signature(&reduced, q))
                .collect();
            signatures.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let scale = signatures.last().map(|s| s[3]).unwrap_or(1.0);
            let mut classes = 0;
            let mut prev: Option<[f64; 4]> = None;
            for sig in &signatures {
                let same = prev.is_some_and(|p| {
                    p.iter()
                        .zip(sig)
                        .all(|(a, b)| (a - b).abs() <= 1e-9 * scale)
                });
                if !same {
                    classes += 1;
                }
                prev = Some(*sig);
            }
            let want = expected_superbases(vtype);
            let pass = quads.len() == want;
            if !cli.json {
                println!(
                    "{} superbases, {} length classes, {}",
                    quads.len(),
                    classes,
                    if pass { "PASS" } else { "FAIL" }
                );
            }
            (
                "superbases",
                serde_json::json!({"count": quads.len(), "length_classes": classes}),
                serde_json::json!({"count": want}),
                pass,
            )
        }
        OracleCheck::Voronoi => {
            let strict = strict_count(&basis)?;
            let want = expected_strict(vtype);
            let pass = strict == want;
            if !cli.json {
                println!(
                    "{strict} strict, {vtype}, {}",
                    if pass { "PASS" } else { "FAIL" }
                );
            }
            (
                "voronoi",
                serde_json::json!({"strict": strict}),
                serde_json::json!({"strict": want}),
                pass,
            )
        }
        OracleCheck::Dc7 => {
            let algebra = dc7(&basis)?;
            let search = dc7_via_classes(&basis)?;
            let scale = algebra.0[6].max(f64::MIN_POSITIVE);
            let pass = algebra.dist(&search) <= cli.tol * scale;
            if !cli.json {
                println!("dc7: {}", fmt_slots(&algebra.0));
                println!("class minima agree: {}", if pass { "PASS" } else { "FAIL" });
            }
            (
                "dc7",
                serde_json::json!({"dc7": algebra.0.to_vec()}),
                serde_json::json!({"dc7": search.0.to_vec()}),
                pass,
            )
        }
    };

    if cli.json {
        print_json(&OracleJson {
            check: name.to_string(),
            vtype: vtype.to_string(),
            found,
            expected,
            pass,
        });
    }
    Ok(if pass { 0 } else { 1 })
}
