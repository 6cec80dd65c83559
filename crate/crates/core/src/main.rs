//! Batch front door: runs scenario files and one-off classifications,
//! sweeps and oracle checks, emitting machine-readable JSON reports.

use clap::{Parser, Subcommand};
use distframe::distmap::{auto_grid, builtin_map, BuiltinKind, DistributionMap};
use distframe::frameops::{classify, unboundedness_sweep, ClassifyTolerances};
use distframe::quadrature::{make_grid, GridKind, QuadratureGrid};
use distframe::report::JsonValue;
use distframe::scenario::{oracle_check, run_scenario};
use distframe::testspace::hermite_space;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "distframe",
    version,
    about = "Distribution-frame calculus over a truncated Hermite test space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its report and side files
    Run {
        /// Path to the scenario JSON file
        scenario: PathBuf,
        /// Output directory for the report and CSV side files
        #[arg(long, default_value = "reports")]
        out: PathBuf,
    },
    /// Classify a single map and print its report as JSON
    Classify {
        /// Builtin kernel (fourier | delta | weighted_fourier) or a path to
        /// a pairing CSV file
        #[arg(long)]
        map: String,
        /// Test space dimension
        #[arg(long)]
        n: usize,
        /// Grid as kind,m[,a,b]; defaults to the kernel's auto grid
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        parseval_tol: Option<f64>,
        #[arg(long)]
        rank_tol: Option<f64>,
        #[arg(long)]
        frame_floor: Option<f64>,
    },
    /// Frame bounds of a builtin kernel across truncation dimensions
    Sweep {
        /// Builtin kernel name
        #[arg(long)]
        map: String,
        /// Comma-separated ascending dimensions, e.g. 4,8,16,32
        #[arg(long)]
        sizes: String,
    },
    /// Cross-validate the frame operator against its double-sum oracle on
    /// random maps
    OracleCheck {
        /// Largest random dimension
        #[arg(long, default_value_t = 32)]
        n: usize,
        /// RNG seed
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Number of random maps
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

fn parse_builtin(name: &str) -> Result<BuiltinKind, String> {
    match name {
        "fourier" => Ok(BuiltinKind::Fourier),
        "delta" => Ok(BuiltinKind::Delta),
        "weighted_fourier" => Ok(BuiltinKind::WeightedFourier),
        other => Err(format!(
            "unknown builtin '{other}' (expected fourier, delta or weighted_fourier)"
        )),
    }
}

fn parse_grid_arg(arg: &str) -> Result<QuadratureGrid, String> {
    let parts: Vec<&str> = arg.split(',').collect();
    if parts.len() != 2 && parts.len() != 4 {
        return Err("grid must be kind,m or kind,m,a,b".into());
    }
    let kind = match parts[0] {
        "gauss_legendre" => GridKind::GaussLegendre,
        "trapezoid" => GridKind::Trapezoid,
        "gauss_hermite_lebesgue" => GridKind::GaussHermiteLebesgue,
        other => return Err(format!("unknown grid kind '{other}'")),
    };
    let m: usize = parts[1]
        .parse()
        .map_err(|_| format!("bad node count '{}'", parts[1]))?;
    let (a, b) = if parts.len() == 4 {
        (
            parts[2]
                .parse()
                .map_err(|_| format!("bad bound '{}'", parts[2]))?,
            parts[3]
                .parse()
                .map_err(|_| format!("bad bound '{}'", parts[3]))?,
        )
    } else {
        (0.0, 0.0)
    };
    make_grid(kind, m, a, b).map_err(|e| e.to_string())
}

fn classify_command(
    map_arg: &str,
    n: usize,
    grid_arg: Option<String>,
    parseval_tol: Option<f64>,
    rank_tol: Option<f64>,
    frame_floor: Option<f64>,
) -> Result<String, String> {
    let space = hermite_space(n).map_err(|e| e.to_string())?;
    let mut tolerances = ClassifyTolerances::default();
    if let Some(t) = parseval_tol {
        tolerances.parseval_tol = t;
    }
    if let Some(t) = rank_tol {
        tolerances.rank_tol = t;
    }
    if let Some(t) = frame_floor {
        tolerances.frame_floor = t;
    }
    let map = if map_arg.ends_with(".csv") {
        let grid = match grid_arg {
            Some(g) => parse_grid_arg(&g)?,
            None => return Err("classifying a CSV map needs an explicit --grid".into()),
        };
        let text = std::fs::read_to_string(map_arg)
            .map_err(|e| format!("cannot read {map_arg}: {e}"))?;
        DistributionMap::from_csv(&space, &grid, &text).map_err(|e| e.to_string())?
    } else {
        let kind = parse_builtin(map_arg)?;
        let grid = match grid_arg {
            Some(g) => parse_grid_arg(&g)?,
            None => auto_grid(&space, kind).map_err(|e| e.to_string())?,
        };
        builtin_map(kind, &space, &grid).map_err(|e| e.to_string())?
    };
    let report = classify(&map, &tolerances).map_err(|e| e.to_string())?;
    Ok(report.to_json().render())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { scenario, out } => match run_scenario(&scenario, &out) {
            Ok(report) => {
                for task in &report.tasks {
                    println!(
                        "task {} ({}): ok, {} ms",
                        task.index, task.kind, task.timing_ms
                    );
                }
                println!("report written to {}", report.report_path.display());
                Ok(())
            }
            Err(e) => Err(e.to_string()),
        },
        Command::Classify {
            map,
            n,
            grid,
            parseval_tol,
            rank_tol,
            frame_floor,
        } => classify_command(&map, n, grid, parseval_tol, rank_tol, frame_floor).map(|json| {
            print!("{json}");
        }),
        Command::Sweep { map, sizes } => (|| {
            let kind = parse_builtin(&map)?;
            let sizes: Vec<usize> = sizes
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| format!("bad size '{s}'")))
                .collect::<Result<_, String>>()?;
            let report = unboundedness_sweep(kind, &sizes).map_err(|e| e.to_string())?;
            print!("{}", report.to_json().render());
            Ok(())
        })(),
        Command::OracleCheck { n, seed, count } => {
            oracle_check(count, seed, n).map(|(frame_dev, adjoint_dev)| {
                let json = JsonValue::object(vec![
                    ("count", JsonValue::Int(count as i64)),
                    ("seed", JsonValue::Int(seed as i64)),
                    ("max_dim", JsonValue::Int(n as i64)),
                    ("max_frame_operator_deviation", JsonValue::Float(frame_dev)),
                    ("max_adjoint_identity_error", JsonValue::Float(adjoint_dev)),
                ]);
                print!("{}", json.render());
            })
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
