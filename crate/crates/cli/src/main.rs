//! `toricflip`: batch front end over the exact toric pipeline.
//!
//! Every verb reads a fan from a JSON file, runs one pipeline stage, and
//! prints canonical JSON on standard output. Exit codes: 0 on success,
//! 1 on domain errors, 2 on I/O or schema errors. Human-readable summary
//! lines go to standard error and use 1-based ray labels.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use toricflip_core::json as tfjson;
use toricflip_core::{flip, gkz, Error, Fan, PipelineOptions, WeightMatrix};

mod section;

#[derive(Parser)]
#[command(
    name = "toricflip",
    version,
    about = "Exact toric fans: subdivisions, GKZ chambers, nef cones, and certified D-flips"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Fan description (JSON: dim, rays, max_cones)
    input: PathBuf,

    /// Weight matrix JSON to use instead of the computed Gale dual;
    /// validated against the fan matrix
    #[arg(long)]
    weights: Option<PathBuf>,

    /// Also write the result into this directory
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fan and report completeness and simpliciality
    Check(CommonArgs),
    /// Enumerate all simplicial subdivisions on the same rays
    Subdivide(CommonArgs),
    /// Compute the Gale dual weight matrix (or validate a supplied one)
    Gale(CommonArgs),
    /// Enumerate the full-dimensional GKZ chambers inside the moving cone
    Chambers(CommonArgs),
    /// Intersect the bunch of cones: the nef cone of a complete simplicial fan
    Nef(CommonArgs),
    /// Report whether the associated variety is projective
    Projective(CommonArgs),
    /// Construct and verify a D-flip for a non-projective fan
    Flip(CommonArgs),
    /// Full pipeline: simplicial resolution, then a flip when needed
    Projectivize {
        #[command(flatten)]
        common: CommonArgs,
        /// Scan subdivisions for a projective one before falling back to the first
        #[arg(long)]
        prefer_projective_subdivision: bool,
    },
    /// Slice chambers with the plane sum(x) = 1 (rank 3 only) for plotting
    Section(CommonArgs),
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Check(c)
            | Command::Subdivide(c)
            | Command::Gale(c)
            | Command::Chambers(c)
            | Command::Nef(c)
            | Command::Projective(c)
            | Command::Flip(c)
            | Command::Section(c) => c,
            Command::Projectivize { common, .. } => common,
        }
    }

    fn verb(&self) -> &'static str {
        match self {
            Command::Check(_) => "check",
            Command::Subdivide(_) => "subdivide",
            Command::Gale(_) => "gale",
            Command::Chambers(_) => "chambers",
            Command::Nef(_) => "nef",
            Command::Projective(_) => "projective",
            Command::Flip(_) => "flip",
            Command::Projectivize { .. } => "projectivize",
            Command::Section(_) => "section",
        }
    }
}

struct CliError {
    code: String,
    message: String,
    exit: u8,
}

impl CliError {
    fn io(message: String) -> CliError {
        CliError {
            code: "io".into(),
            message,
            exit: 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let exit = match e {
            Error::Schema(_) => 2,
            _ => 1,
        };
        CliError {
            code: e.code().into(),
            message: e.to_string(),
            exit,
        }
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::from(Error::Schema(format!(
            "{} is not valid JSON: {e}",
            path.display()
        )))
    })
}

fn load_fan(path: &Path) -> Result<Fan, CliError> {
    Ok(tfjson::fan_from_value(&read_json(path)?)?)
}

/// Weight matrix for a fan: the supplied one (validated) or the Gale dual.
fn weights_for(common: &CommonArgs, fan: &Fan) -> Result<WeightMatrix, CliError> {
    match &common.weights {
        Some(path) => {
            let rows = tfjson::weight_rows_from_value(&read_json(path)?)?;
            Ok(WeightMatrix::from_supplied(fan.fan_matrix(), rows)?)
        }
        None => Ok(WeightMatrix::gale_dual(fan.fan_matrix())?),
    }
}

/// 1-based cone labels for log lines, e.g. `<1,2,4,6>`.
fn cone_label(indices: &[usize]) -> String {
    let inner: Vec<String> = indices.iter().map(|i| (i + 1).to_string()).collect();
    format!("<{}>", inner.join(","))
}

fn run(command: &Command) -> Result<(Value, Vec<String>), CliError> {
    let common = command.common();
    let fan = load_fan(&common.input)?;
    let mut extra_files: Vec<(String, Value)> = Vec::new();

    let (value, log) = match command {
        Command::Check(_) => {
            let report = fan.validate();
            let mut value = tfjson::validation_to_value(report);
            let (complete, simplicial) = if report.is_valid() {
                (json!(fan.is_complete()?), json!(fan.is_simplicial()?))
            } else {
                (Value::Null, Value::Null)
            };
            value["complete"] = complete.clone();
            value["simplicial"] = simplicial.clone();
            let log = format!(
                "fan with {} rays, {} maximal cones: valid={} complete={} simplicial={}",
                fan.ray_count(),
                fan.max_cones().len(),
                report.is_valid(),
                complete,
                simplicial,
            );
            (value, vec![log])
        }
        Command::Subdivide(_) => {
            let subs = fan.simplicial_subdivisions()?;
            let fans: Vec<Value> = subs
                .iter()
                .map(tfjson::fan_to_value)
                .collect::<toricflip_core::Result<_>>()?;
            for (i, f) in fans.iter().enumerate() {
                extra_files.push((format!("subdivision_{:02}.json", i + 1), f.clone()));
            }
            let value = json!({ "count": subs.len(), "subdivisions": fans });
            (
                value,
                vec![format!("{} simplicial subdivisions", subs.len())],
            )
        }
        Command::Gale(_) => {
            let q = weights_for(common, &fan)?;
            let value = tfjson::weights_to_value(&q)?;
            (
                value,
                vec![format!(
                    "weight matrix: rank {}, {} columns",
                    q.rank(),
                    q.cols()
                )],
            )
        }
        Command::Chambers(_) => {
            let q = weights_for(common, &fan)?;
            let sf = gkz::secondary_fan(&q)?;
            let value = tfjson::secondary_fan_to_value(&sf)?;
            (
                value,
                vec![format!(
                    "{} full-dimensional chambers, {} walls",
                    sf.chambers.len(),
                    sf.walls.len()
                )],
            )
        }
        Command::Nef(_) => {
            let q = weights_for(common, &fan)?;
            let nef = gkz::nef_cone(&fan, &q)?;
            let value = tfjson::cone_to_value(&nef)?;
            (
                value,
                vec![format!(
                    "nef cone of dimension {} (rank {})",
                    nef.dim(),
                    q.rank()
                )],
            )
        }
        Command::Projective(_) => {
            let q = weights_for(common, &fan)?;
            let nef = gkz::nef_cone(&fan, &q)?;
            let projective = nef.dim() == q.rank();
            let value = json!({
                "projective": projective,
                "nef_dimension": nef.dim(),
                "rank": q.rank(),
            });
            (value, vec![format!("projective: {projective}")])
        }
        Command::Flip(_) => {
            let q = weights_for(common, &fan)?;
            let cert = flip::find_flip(&fan, &q)?;
            let value = tfjson::certificate_to_value(&cert)?;
            let all_green = cert.checks.values().all(|&ok| ok);
            let targets: Vec<String> = cert
                .target
                .max_cones()
                .iter()
                .map(|c| cone_label(c))
                .collect();
            (
                value,
                vec![
                    format!("flip target cones: {}", targets.join(" ")),
                    format!("certificate checks all green: {all_green}"),
                ],
            )
        }
        Command::Projectivize {
            prefer_projective_subdivision,
            ..
        } => {
            let opts = PipelineOptions {
                prefer_projective_subdivision: *prefer_projective_subdivision,
                weights: match &common.weights {
                    Some(path) => {
                        let rows = tfjson::weight_rows_from_value(&read_json(path)?)?;
                        Some(WeightMatrix::from_supplied(fan.fan_matrix(), rows)?)
                    }
                    None => None,
                },
            };
            let result = flip::projectivize(&fan, &opts)?;
            let value = tfjson::pipeline_to_value(&result)?;
            let log = format!(
                "resolution: {}, flip: {}, final fan: {} maximal cones",
                if result.resolution.is_some() {
                    "yes"
                } else {
                    "not needed"
                },
                if result.flip.is_some() {
                    "yes"
                } else {
                    "not needed"
                },
                result.final_fan.max_cones().len()
            );
            (value, vec![log])
        }
        Command::Section(_) => {
            let q = weights_for(common, &fan)?;
            if q.rank() != 3 {
                let sf = gkz::secondary_fan(&q)?;
                let chambers: Vec<Value> = sf
                    .chambers
                    .iter()
                    .map(|c| tfjson::cone_to_value(&c.cone))
                    .collect::<toricflip_core::Result<_>>()?;
                let value = json!({
                    "warning": format!(
                        "section needs rank 3, got rank {}; emitting raw chamber cones",
                        q.rank()
                    ),
                    "chambers": chambers,
                });
                return Ok((value, vec!["section unsupported at this rank".into()]));
            }
            let sf = gkz::secondary_fan(&q)?;
            let data = section::emit_section(&q, &sf)?;
            let value = section::section_to_value(&data);
            (
                value,
                vec![format!(
                    "{} polygons on the plane sum=1",
                    data.polygons.len()
                )],
            )
        }
    };

    if let Some(dir) = &common.out {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::io(format!("cannot create {}: {e}", dir.display())))?;
        let main_path = dir.join(format!("{}.json", command.verb()));
        fs::write(&main_path, tfjson::to_canonical_string(&value))
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", main_path.display())))?;
        for (name, v) in &extra_files {
            let path = dir.join(name);
            fs::write(&path, tfjson::to_canonical_string(v))
                .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
        }
    }

    Ok((value, log))
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("TORICFLIP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.parse().ok().filter(|&t| t >= 1).ok_or_else(|| {
        CliError::io(format!(
            "TORICFLIP_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::io(format!("cannot configure thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!(
            "{}",
            tfjson::to_canonical_string(&json!({
                "error": { "code": e.code, "message": e.message }
            }))
        );
        return ExitCode::from(e.exit);
    }
    match run(&cli.command) {
        Ok((value, log)) => {
            print!("{}", tfjson::to_canonical_string(&value));
            for line in log {
                eprintln!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!(
                "{}",
                tfjson::to_canonical_string(&json!({
                    "error": { "code": e.code, "message": e.message }
                }))
            );
            ExitCode::from(e.exit)
        }
    }
}
