//! JSON-in, JSON-out command line for the representation-space toolkit.
//!
//! Every subcommand reads one JSON file, computes, and prints one JSON
//! document. Exit codes: 0 on success, 1 when the input is well-formed but
//! mathematically inadmissible, 2 on I/O or schema failures. Schema errors
//! carry a JSON pointer to the offending field.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use repspace::bridge::euler_cross_check;
use repspace::components::{describe_component, dualize, euler_set, BoundaryClass, Signature};
use repspace::higgs::{
    enumerate_strata, stratum_dims, stratum_topology, HiggsError, Residue, StratumEntry, Weight,
};
use repspace::psl2::{
    classify, milnor_wood, IsometryClass, Mat2, Representation, CLASS_TOL, RELATION_TOL,
};
use repspace::rat;
use repspace::sample::{rep_invariants, sample_rep, SampleConfig, SampleError};
use repspace::uniform::{length_to_class, uniformization_component, BoundaryGeometry};

#[derive(Parser)]
#[command(
    name = "repspace",
    version,
    about = "Invariants of representation spaces of punctured-surface groups"
)]
struct Cli {
    /// Tolerance for deciding conjugacy classes near |tr| = 2.
    #[arg(long, global = true, default_value_t = CLASS_TOL)]
    tol: f64,

    /// Base RNG seed for the sampling subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the result to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Pretty-print the result.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Conjugacy class of one matrix.
    Classify { matrix: PathBuf },

    /// Euler number and Milnor-Wood slack of a representation.
    Euler { rep: PathBuf },

    /// Connected components of the representation space of a signature.
    Components {
        sig: PathBuf,
        /// Describe closures instead of the open components.
        #[arg(long)]
        closure: bool,
    },

    /// Sigma-fixed strata of parabolic Higgs moduli data.
    Strata {
        moduli: PathBuf,
        /// Describe strata of the involution quotient.
        #[arg(long)]
        quotient: bool,
    },

    /// Component containing the uniformizing representations of a geometry.
    Uniformize { geom: PathBuf },

    /// Seeded random representations with prescribed boundary classes.
    Sample {
        sig: PathBuf,
        /// Number of representations to draw (seeds seed, seed+1, ...).
        #[arg(long, default_value_t = 1)]
        count: u32,
        /// Rejection budget per representation.
        #[arg(long, default_value_t = 1000)]
        max_tries: u32,
        /// Scale of the random conjugators and translation lengths.
        #[arg(long, default_value_t = 1.0)]
        spread: f64,
    },

    /// Agreement suite: classifier vs Higgs strata and vs random samples.
    Crosscheck {
        sig: PathBuf,
        /// Number of random representations to test against the Euler set.
        #[arg(long, default_value_t = 20)]
        samples: u32,
    },
}

enum CliError {
    /// Well-formed input that the mathematics rejects.
    Domain(String),
    /// Input that does not match the expected JSON shape.
    Schema {
        pointer: String,
        message: String,
    },
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Schema { .. } | CliError::Io(_) => 2,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            CliError::Domain(message) => json!({ "error": "domain", "message": message }),
            CliError::Schema { pointer, message } => {
                json!({ "error": "schema", "pointer": pointer, "message": message })
            }
            CliError::Io(message) => json!({ "error": "io", "message": message }),
        }
    }
}

fn domain(err: impl Display) -> CliError {
    CliError::Domain(err.to_string())
}

/// RFC 6901 pointer to the field where deserialization stopped.
fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for segment in path.iter() {
        out.push('/');
        match segment {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } | Segment::Enum { variant: key } => {
                out.push_str(&key.replace('~', "~0").replace('/', "~1"));
            }
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| CliError::Schema {
        pointer: json_pointer(e.path()),
        message: e.inner().to_string(),
    })
}

fn class_json(class: &IsometryClass) -> Value {
    match class {
        IsometryClass::Identity => json!({ "class": "identity" }),
        IsometryClass::Elliptic { frac_rot } => {
            json!({ "class": "elliptic", "frac_rot": frac_rot })
        }
        IsometryClass::PositiveUnipotent => json!({ "class": "positive_unipotent" }),
        IsometryClass::NegativeUnipotent => json!({ "class": "negative_unipotent" }),
        IsometryClass::Hyperbolic { length } => {
            json!({ "class": "hyperbolic", "length": length })
        }
    }
}

fn run_classify(path: &Path, tol: f64) -> Result<Value, CliError> {
    let matrix: Mat2 = load(path)?;
    let class = classify(&matrix, tol).map_err(domain)?;
    Ok(class_json(&class))
}

fn run_euler(path: &Path, tol: f64) -> Result<Value, CliError> {
    let rep: Representation = load(path)?;
    rep.validate(RELATION_TOL).map_err(domain)?;
    let mw = milnor_wood(&rep).map_err(domain)?;
    let boundary: Vec<Value> = rep
        .boundaries
        .iter()
        .map(|c| classify(c, tol).map(|cl| class_json(&cl)))
        .collect::<Result<_, _>>()
        .map_err(domain)?;
    Ok(json!({
        "euler": mw.euler,
        "bound": mw.bound,
        "slack": mw.slack,
        "boundary": boundary,
    }))
}

fn run_components(path: &Path, closure: bool) -> Result<Value, CliError> {
    let sig: Signature = load(path)?;
    let eulers = euler_set(&sig).map_err(domain)?;
    let mut out = Vec::new();
    for e in eulers {
        let d = describe_component(&sig, e, closure).map_err(domain)?;
        out.push(json!({
            "euler": rat::format_rat(d.euler),
            "m": d.m,
            "rank": d.bundle_rank,
            "base": { "sym": d.base_sym_degree, "removed": d.base_removed },
            "removed_subbundles": d.removed_subbundles,
            "smooth": d.smooth,
        }));
    }
    Ok(Value::Array(out))
}

#[derive(Deserialize)]
struct ModuliInput {
    g: u32,
    d0: i64,
    weights: Vec<Weight>,
    residues: Vec<Residue>,
}

fn run_strata(path: &Path, quotient: bool) -> Result<Value, CliError> {
    let input: ModuliInput = load(path)?;
    let entries =
        enumerate_strata(&input.weights, &input.residues, input.d0, input.g).map_err(domain)?;
    let mut out = Vec::new();
    for entry in entries {
        match entry {
            StratumEntry::Stratum(st) => {
                let (m, m_prime) = stratum_dims(&st).map_err(domain)?;
                let stratum = serde_json::to_value(&st).map_err(|e| CliError::Io(e.to_string()))?;
                match stratum_topology(&st, quotient, false) {
                    Ok(t) => out.push(json!({
                        "kind": "stratum",
                        "stratum": stratum,
                        "e": rat::format_rat(st.e()),
                        "sections": { "m": m, "m_prime": m_prime },
                        "base": { "sym": t.base_sym_degree, "removed": t.base_removed },
                        "rank": t.fiber_rank,
                        "removed_subbundles": t.removed_subbundles,
                        "compact": t.compact,
                        "quotient": t.quotient,
                    })),
                    Err(HiggsError::EmptyStratum(reason)) => out.push(json!({
                        "kind": "empty",
                        "stratum": stratum,
                        "e": rat::format_rat(st.e()),
                        "reason": reason,
                    })),
                    Err(e) => return Err(domain(e)),
                }
            }
            StratumEntry::ZeroEuler(st) => {
                let stratum = serde_json::to_value(&st).map_err(|e| CliError::Io(e.to_string()))?;
                out.push(json!({ "kind": "zero_euler", "stratum": stratum }));
            }
            StratumEntry::ZeroHiggsLocus => {
                out.push(json!({ "kind": "zero_higgs_locus" }));
            }
        }
    }
    Ok(Value::Array(out))
}

#[derive(Deserialize)]
struct GeometryInput {
    genus: u32,
    boundary: Vec<BoundaryGeometry>,
}

fn run_uniformize(path: &Path) -> Result<Value, CliError> {
    let input: GeometryInput = load(path)?;
    let component = uniformization_component(input.genus, &input.boundary).map_err(domain)?;
    let classes: Vec<BoundaryClass> = input.boundary.iter().map(length_to_class).collect();
    let mut out = serde_json::to_value(&component).map_err(|e| CliError::Io(e.to_string()))?;
    out["boundary_classes"] =
        serde_json::to_value(&classes).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(out)
}

fn run_sample(
    path: &Path,
    base_seed: u64,
    count: u32,
    max_tries: u32,
    spread: f64,
    tol: f64,
) -> Result<Value, CliError> {
    let sig: Signature = load(path)?;
    let mut out = Vec::new();
    let mut found = 0u32;
    for k in 0..count {
        let cfg = SampleConfig {
            seed: base_seed.wrapping_add(k as u64),
            max_tries,
            spread,
            ..SampleConfig::default()
        };
        match sample_rep(&sig, &cfg) {
            Ok(rep) => {
                found += 1;
                let mw = milnor_wood(&rep).map_err(domain)?;
                let boundary: Vec<Value> = rep
                    .boundaries
                    .iter()
                    .map(|c| classify(c, tol).map(|cl| class_json(&cl)))
                    .collect::<Result<_, _>>()
                    .map_err(domain)?;
                out.push(json!({
                    "seed": cfg.seed,
                    "euler": mw.euler,
                    "slack": mw.slack,
                    "relation_defect": rep.relation_defect(),
                    "boundary": boundary,
                }));
            }
            Err(SampleError::NotFound(tries)) => {
                out.push(json!({ "seed": cfg.seed, "error": "not_found", "tries": tries }));
            }
            Err(e) => return Err(domain(e)),
        }
    }
    if count > 0 && found == 0 {
        return Err(domain(format!(
            "no representation matched the boundary classes for any of {count} seeds"
        )));
    }
    Ok(Value::Array(out))
}

fn near_set(x: f64, set: &[rat::Rat], tol: f64) -> bool {
    set.iter().any(|v| (x - rat::to_f64(*v)).abs() <= tol)
}

fn run_crosscheck(path: &Path, base_seed: u64, samples: u32, tol: f64) -> Result<Value, CliError> {
    let sig: Signature = load(path)?;
    let check = euler_cross_check(&sig).map_err(domain)?;
    let dual_eulers = euler_set(&dualize(&sig)).map_err(domain)?;
    let n = sig.punctures();

    let mut not_found = 0u32;
    let mut angle_mismatch = 0u32;
    let mut membership_checked = 0u32;
    let mut violations: Vec<String> = Vec::new();
    for k in 0..samples {
        let cfg = SampleConfig {
            seed: base_seed.wrapping_add(k as u64),
            ..SampleConfig::default()
        };
        let rep = match sample_rep(&sig, &cfg) {
            Ok(rep) => rep,
            Err(SampleError::NotFound(_)) => {
                not_found += 1;
                continue;
            }
            Err(e) => return Err(domain(e)),
        };
        let inv = rep_invariants(&rep).map_err(domain)?;
        let mw = milnor_wood(&rep).map_err(domain)?;

        let frac_sum: f64 = rep
            .boundaries
            .iter()
            .map(|c| match classify(c, tol) {
                Ok(IsometryClass::Elliptic { frac_rot }) => frac_rot,
                _ => 0.0,
            })
            .sum();
        let total = inv.euler + frac_sum;
        if (total - total.round()).abs() > 1e-6 {
            violations.push(format!(
                "seed {}: Euler number {} plus rotation numbers {} is not an integer",
                cfg.seed, inv.euler, frac_sum
            ));
        }
        if mw.slack < -1e-6 {
            violations.push(format!(
                "seed {}: Euler number {} exceeds the Milnor-Wood bound {}",
                cfg.seed, inv.euler, mw.bound
            ));
        }

        // The last boundary slot is only matched by conjugacy type, so an
        // elliptic slot can land at a different angle than prescribed; the
        // Euler number then belongs to a different signature's set.
        let last_matches = match (&sig.boundary[n - 1], classify(&rep.boundaries[n - 1], tol)) {
            (
                BoundaryClass::Elliptic { frac_rot: want },
                Ok(IsometryClass::Elliptic { frac_rot }),
            ) => (frac_rot - rat::to_f64(*want)).abs() <= 1e-6,
            _ => true,
        };
        if !last_matches {
            angle_mismatch += 1;
            continue;
        }
        membership_checked += 1;
        if inv.euler > 1e-6 && !near_set(inv.euler, &check.components, 1e-6) {
            violations.push(format!(
                "seed {}: positive Euler number {} is outside the component set",
                cfg.seed, inv.euler
            ));
        }
        if inv.euler < -1e-6 && !near_set(-inv.euler, &dual_eulers, 1e-6) {
            violations.push(format!(
                "seed {}: negative Euler number {} is outside the dual component set",
                cfg.seed, inv.euler
            ));
        }
    }

    let fmt =
        |set: &[rat::Rat]| -> Vec<String> { set.iter().map(|e| rat::format_rat(*e)).collect() };
    Ok(json!({
        "euler_set": fmt(&check.components),
        "strata_values": fmt(&check.strata),
        "sets_agree": check.agree,
        "samples": {
            "requested": samples,
            "not_found": not_found,
            "angle_mismatch": angle_mismatch,
            "membership_checked": membership_checked,
        },
        "violations": violations,
        "sampler_agrees": violations.is_empty(),
    }))
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    match &cli.cmd {
        Cmd::Classify { matrix } => run_classify(matrix, cli.tol),
        Cmd::Euler { rep } => run_euler(rep, cli.tol),
        Cmd::Components { sig, closure } => run_components(sig, *closure),
        Cmd::Strata { moduli, quotient } => run_strata(moduli, *quotient),
        Cmd::Uniformize { geom } => run_uniformize(geom),
        Cmd::Sample {
            sig,
            count,
            max_tries,
            spread,
        } => run_sample(sig, cli.seed, *count, *max_tries, *spread, cli.tol),
        Cmd::Crosscheck { sig, samples } => run_crosscheck(sig, cli.seed, *samples, cli.tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(value) => {
            let mut text = if cli.pretty {
                serde_json::to_string_pretty(&value)
            } else {
                serde_json::to_string(&value)
            }
            .expect("JSON values serialize");
            text.push('\n');
            match &cli.output {
                Some(path) => {
                    if let Err(e) = fs::write(path, text) {
                        let err = CliError::Io(format!("{}: {e}", path.display()));
                        eprintln!("{}", err.to_json());
                        return ExitCode::from(err.exit_code());
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code())
        }
    }
}
