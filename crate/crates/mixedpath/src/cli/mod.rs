//! The `mixedpath` command line: wires the pipeline stages into reproducible
//! experiments that emit JSON/CSV artifacts.
//!
//! Subcommands: `enumerate`, `matrix`, `solve`, `amplitudes`, `propagate`,
//! `compare`, `grassmann-check`. Exit codes: 0 success, 1 domain errors,
//! 2 numerical failures, 3 I/O errors. Errors print a JSON diagnostic on
//! stderr. Identical configs produce byte-identical artifacts; every
//! artifact embeds the config hash and tool version.

pub mod config;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use crate::action::{build_action_matrix, ActionMatrix, ActionMatrixJson, HamiltonianModel};
use crate::amplitude::{
    assign_paper_phases, balance_rotation, build_amplitudes, probability, sum_propagator,
    AmplitudeSet, AmplitudeSetJson, Endpoints, Propagator,
};
use crate::error::{Error, Result};
use crate::game::{
    bordered_hessian_inertia, generalized_action, solve_equal_component, solve_minimax,
    solve_stationary, stationarity_residual, total_probability, NormMode,
};
use crate::grassmann::{odd_monomials, GrassmannElement};
use crate::lattice::{enumerate_paths, time_reverse, PathSet, PathSetJson};
use crate::pipeline::{compare, TimeSlicedSpec};
use config::{AmplitudeConfigMode, ExperimentConfig, SolverMode};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "mixedpath", version, about = "mixed-path lattice experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate admissible paths and write paths.json
    Enumerate(ConfigArgs),
    /// Build the action matrix over the enumerated paths
    Matrix(ConfigArgs),
    /// Solve for an optimal mixed-path pair (equal | stationary | minimax)
    Solve(ConfigArgs),
    /// Construct per-path complex amplitudes
    Amplitudes(ConfigArgs),
    /// Sum the amplitudes into a propagator
    Propagate(ConfigArgs),
    /// Run the amplitude pipeline against the reference oracles
    Compare(CompareArgs),
    /// Check the fermionic anticommutation identities exhaustively
    GrassmannCheck(GrassmannArgs),
}

#[derive(clap::Args)]
struct ConfigArgs {
    /// Experiment config file (key = value sections)
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to the config's [output] directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CompareArgs {
    /// Model with a closed form: free | harmonic
    #[arg(long)]
    model: String,
    /// Total propagation time
    #[arg(long = "T", alias = "t", default_value_t = 1.0)]
    total_time: f64,
    #[arg(long, default_value_t = 16)]
    slices: usize,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    /// Angular frequency (harmonic only)
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Window half width; derived from the model when omitted
    #[arg(long)]
    half_width: Option<f64>,
    /// Grid spacing; derived from the model when omitted
    #[arg(long)]
    spacing: Option<f64>,
    /// Contour tilt regularizing the grid sum (0 disables)
    #[arg(long, default_value_t = 0.035)]
    damping: f64,
    #[arg(long, default_value_t = 0.0)]
    x_a: f64,
    #[arg(long, default_value_t = 0.0)]
    x_b: f64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(clap::Args)]
struct GrassmannArgs {
    /// Check all odd monomial pairs for algebras up to this many generators
    #[arg(long, default_value_t = 4)]
    generators: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return 0;
            }
            eprintln!(
                "{}",
                json!({"error": "Usage", "detail": err.to_string(), "exit_code": 1})
            );
            return 1;
        }
    };
    let outcome = match cli.command {
        Command::Enumerate(args) => cmd_enumerate(&args),
        Command::Matrix(args) => cmd_matrix(&args),
        Command::Solve(args) => cmd_solve(&args),
        Command::Amplitudes(args) => cmd_amplitudes(&args),
        Command::Propagate(args) => cmd_propagate(&args),
        Command::Compare(args) => cmd_compare(&args),
        Command::GrassmannCheck(args) => cmd_grassmann(&args),
    };
    match outcome {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(err) => {
            let code = err.exit_code();
            eprintln!(
                "{}",
                json!({"error": err.tag(), "detail": err.to_string(), "exit_code": code})
            );
            code
        }
    }
}

fn out_dir(args: &ConfigArgs, config: &ExperimentConfig) -> PathBuf {
    args.out
        .clone()
        .unwrap_or_else(|| config.output.directory.clone())
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, text)?;
    Ok(path)
}

fn write_json(dir: &Path, name: &str, value: &serde_json::Value) -> Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable artifact");
    text.push('\n');
    write_text(dir, name, &text)
}

fn provenance(hash: &str) -> serde_json::Value {
    json!({"tool_version": VERSION, "config_hash": hash})
}

fn csv_provenance(hash: &str) -> String {
    format!("# mixedpath {VERSION} config {hash}\n")
}

fn load(args: &ConfigArgs) -> Result<ExperimentConfig> {
    ExperimentConfig::from_path(&args.config)
}

fn cmd_enumerate(args: &ConfigArgs) -> Result<String> {
    let config = load(args)?;
    let paths = enumerate_paths(&config.lattice)?;
    let dir = out_dir(args, &config);
    let artifact = json!({
        "provenance": provenance(&config.hash()),
        "path_set": serde_json::to_value(PathSetJson::from(&paths)).expect("serializable"),
    });
    let path = write_json(&dir, "paths.json", &artifact)?;
    Ok(format!(
        "enumerated {} forward paths -> {}",
        paths.len(),
        path.display()
    ))
}

fn build_matrix(config: &ExperimentConfig) -> Result<(PathSet, ActionMatrix)> {
    let paths = enumerate_paths(&config.lattice)?;
    let matrix = build_action_matrix(&paths, &config.model)?;
    Ok((paths, matrix))
}

fn cmd_matrix(args: &ConfigArgs) -> Result<String> {
    let config = load(args)?;
    let (paths, matrix) = build_matrix(&config)?;
    let dir = out_dir(args, &config);
    let mut written = Vec::new();
    if config.output.json {
        let artifact = json!({
            "provenance": provenance(&config.hash()),
            "action_matrix": serde_json::to_value(ActionMatrixJson::from(&matrix))
                .expect("serializable"),
        });
        written.push(write_json(&dir, "matrix.json", &artifact)?);
    }
    if config.output.csv {
        let text = format!("{}{}", csv_provenance(&config.hash()), matrix.to_csv());
        written.push(write_text(&dir, "matrix.csv", &text)?);
    }
    Ok(format!(
        "action matrix {}x{} over {} paths -> {}",
        matrix.n(),
        matrix.n(),
        paths.len(),
        written
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<_>>()
            .join(", ")
    ))
}

fn cmd_solve(args: &ConfigArgs) -> Result<String> {
    let config = load(args)?;
    let (_, matrix) = build_matrix(&config)?;
    let dir = out_dir(args, &config);
    let hash = config.hash();

    let (payload, summary, failure) = match config.solver.mode {
        SolverMode::Equal => {
            let pair = solve_equal_component(&matrix, config.solver.norm_mode);
            let objective = generalized_action(&pair, &matrix)?;
            let residual = stationarity_residual(&matrix, &pair)?;
            let inertia = bordered_hessian_inertia(&matrix, &pair)?;
            (
                json!({
                    "pair": serde_json::to_value(&pair).expect("serializable"),
                    "objective": objective,
                    "total_probability": total_probability(&pair),
                    "stationarity_residual": residual,
                    "bordered_hessian_inertia": serde_json::to_value(inertia).expect("serializable"),
                }),
                format!("equal-component pair: objective {objective:.6e}, residual {residual:.3e}"),
                None,
            )
        }
        SolverMode::Stationary => {
            let init = solve_equal_component(&matrix, config.solver.norm_mode);
            let solution =
                solve_stationary(&matrix, &init, config.solver.tol, config.solver.max_iter)?;
            let objective = generalized_action(&solution.pair, &matrix)?;
            let inertia = bordered_hessian_inertia(&matrix, &solution.pair)?;
            let failure = if solution.converged {
                None
            } else {
                Some(Error::NoConvergence {
                    iterations: solution.iterations,
                    residual: solution.residual,
                })
            };
            (
                json!({
                    "solution": serde_json::to_value(&solution).expect("serializable"),
                    "objective": objective,
                    "total_probability": total_probability(&solution.pair),
                    "bordered_hessian_inertia": serde_json::to_value(inertia).expect("serializable"),
                }),
                format!(
                    "stationary pair: objective {objective:.6e}, residual {:.3e} after {} iterations",
                    solution.residual, solution.iterations
                ),
                failure,
            )
        }
        SolverMode::Minimax => {
            let solution = solve_minimax(&matrix);
            (
                json!({
                    "minimax": serde_json::to_value(&solution).expect("serializable"),
                }),
                format!("minimax value {:.6e}", solution.value),
                None,
            )
        }
    };

    let artifact = json!({
        "provenance": provenance(&hash),
        "solver": payload,
    });
    let path = write_json(&dir, "solution.json", &artifact)?;
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(format!("{summary} -> {}", path.display()))
}

/// Amplitude set over the path set per the config's amplitude mode.
fn amplitudes_for(
    config: &ExperimentConfig,
    matrix: &ActionMatrix,
) -> Result<(AmplitudeSet, serde_json::Value)> {
    match config.amplitude.mode {
        AmplitudeConfigMode::Paper => {
            let amps =
                assign_paper_phases(&matrix.diagonal(), &config.model, config.amplitude.scale)?;
            Ok((amps, json!({"mode": "paper"})))
        }
        AmplitudeConfigMode::Rotation => {
            let init = solve_equal_component(matrix, NormMode::NormForm);
            let solution =
                solve_stationary(matrix, &init, config.solver.tol, config.solver.max_iter)?;
            let balanced = balance_rotation(&solution.pair)?;
            let amps = build_amplitudes(&balanced);
            // the two phase assignments are not reconciled; report how far
            // apart they land on this path set
            let paper = assign_paper_phases(&matrix.diagonal(), &config.model, 1.0)?;
            let tau = 2.0 * std::f64::consts::PI;
            let max_phase_difference = amps
                .phases
                .iter()
                .zip(&paper.phases)
                .map(|(a, b)| {
                    let d = (a - b).rem_euclid(tau);
                    d.min(tau - d)
                })
                .fold(0.0f64, f64::max);
            let info = json!({
                "mode": "rotation",
                "solver_residual": solution.residual,
                "solver_converged": solution.converged,
                "diagonal_spread": balanced.diagonal_spread(),
                "orthogonality_defect": balanced.orthogonality_defect(),
                "magnitude": balanced.magnitude,
                "max_phase_difference_vs_paper": max_phase_difference,
            });
            Ok((amps, info))
        }
    }
}

fn cmd_amplitudes(args: &ConfigArgs) -> Result<String> {
    let config = load(args)?;
    let (_paths, matrix) = build_matrix(&config)?;
    let (amps, info) = amplitudes_for(&config, &matrix)?;
    let dir = out_dir(args, &config);
    let hash = config.hash();
    let mut written = Vec::new();
    if config.output.json {
        let artifact = json!({
            "provenance": provenance(&hash),
            "construction": info,
            "amplitudes": serde_json::to_value(AmplitudeSetJson::from(&amps))
                .expect("serializable"),
        });
        written.push(write_json(&dir, "amplitudes.json", &artifact)?);
    }
    if config.output.csv {
        let text = format!("{}{}", csv_provenance(&hash), amps.to_csv());
        written.push(write_text(&dir, "amplitudes.csv", &text)?);
    }
    Ok(format!(
        "{} amplitudes at scale {:.6e} -> {}",
        amps.len(),
        amps.scale,
        written
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<_>>()
            .join(", ")
    ))
}

fn complex_json(v: Complex64) -> serde_json::Value {
    json!({"re": v.re, "im": v.im, "modulus": v.norm(), "phase": v.arg()})
}

fn cmd_propagate(args: &ConfigArgs) -> Result<String> {
    let config = load(args)?;
    let (paths, matrix) = build_matrix(&config)?;
    let (amps, info) = amplitudes_for(&config, &matrix)?;
    let spec = &config.lattice;
    let endpoints = Endpoints {
        x_a: spec.endpoint_start as f64 * spec.dq,
        t_a: 0.0,
        x_b: spec.endpoint_end.unwrap_or(spec.endpoint_start) as f64 * spec.dq,
        t_b: spec.num_steps as f64 * spec.dt,
    };
    let forward: Propagator = sum_propagator(&amps, Some(endpoints))?;

    // the backward class contributes the conjugate factor only when asked
    let (kk_star, backward_json) = if config.amplitude.include_backward {
        let backward_paths = time_reverse(&paths);
        let backward_matrix = build_action_matrix(&backward_paths, &config.model)?;
        let (backward_amps, _) = amplitudes_for(&config, &backward_matrix)?;
        let k_backward = sum_propagator(&backward_amps, Some(endpoints))?;
        (
            forward.value * k_backward.value.conj(),
            Some(complex_json(k_backward.value)),
        )
    } else {
        (forward.value * forward.value.conj(), None)
    };

    let dir = out_dir(args, &config);
    let mut artifact = json!({
        "provenance": provenance(&config.hash()),
        "construction": info,
        "endpoints": serde_json::to_value(endpoints).expect("serializable"),
        "num_paths": paths.len(),
        "k_forward": complex_json(forward.value),
        "kk_star": complex_json(kk_star),
        "probability": probability(&forward),
    });
    if let Some(b) = backward_json {
        artifact["k_backward"] = b;
    }
    let path = write_json(&dir, "propagator.json", &artifact)?;
    Ok(format!(
        "K = {:.6e} + {:.6e}i over {} paths, |K|^2 = {:.6e} -> {}",
        forward.value.re,
        forward.value.im,
        paths.len(),
        probability(&forward),
        path.display()
    ))
}

fn cmd_compare(args: &CompareArgs) -> Result<String> {
    let model = match args.model.as_str() {
        "free" => HamiltonianModel::free(args.mass, args.hbar)?,
        "harmonic" => HamiltonianModel::harmonic(args.mass, args.omega, args.hbar)?,
        other => {
            return Err(Error::Config(format!(
                "model `{other}` is not free | harmonic"
            )))
        }
    };
    let spec = match (args.half_width, args.spacing) {
        (Some(half_width), Some(spacing)) => TimeSlicedSpec::new(
            half_width,
            spacing,
            args.slices,
            args.total_time,
            args.damping,
        )?,
        (None, None) if args.damping > 0.0 => {
            TimeSlicedSpec::recommended(&model, args.total_time, args.slices, args.damping)?
        }
        (None, None) => {
            return Err(Error::Config(
                "zero damping needs explicit --half-width and --spacing".into(),
            ))
        }
        _ => {
            return Err(Error::Config(
                "--half-width and --spacing go together".into(),
            ))
        }
    };

    let report = compare(&model, &spec, args.x_a, args.x_b)?;

    // flags double as the provenance source
    let flag_string = format!(
        "model={} T={} slices={} mass={} hbar={} omega={} half_width={} spacing={} damping={} x_a={} x_b={}",
        args.model,
        args.total_time,
        args.slices,
        args.mass,
        args.hbar,
        args.omega,
        spec.half_width,
        spec.spacing,
        spec.damping,
        args.x_a,
        args.x_b
    );
    let hash = {
        use sha2::{Digest, Sha256};
        Sha256::digest(flag_string.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect::<String>()
    };

    let artifact = json!({
        "provenance": provenance(&hash),
        "invocation": flag_string,
        "geometry": serde_json::to_value(&spec).expect("serializable"),
        "report": serde_json::to_value(&report).expect("serializable"),
    });
    write_json(&args.out, "compare.json", &artifact)?;
    let csv = format!("{}{}", csv_provenance(&hash), report.to_csv());
    let csv_path = write_text(&args.out, "compare.csv", &csv)?;

    let pipeline = report
        .row("paper_pipeline")
        .expect("report carries the pipeline row");
    Ok(format!(
        "{} T={} slices={}: pipeline modulus error {:.3e} -> {}",
        args.model,
        args.total_time,
        args.slices,
        pipeline.relative_error,
        csv_path.display()
    ))
}

fn cmd_grassmann(args: &GrassmannArgs) -> Result<String> {
    let max_n = args.generators;
    if max_n == 0 || max_n > crate::grassmann::MAX_GENERATORS {
        return Err(Error::InvalidSpec(format!(
            "generators must be in 1..={}",
            crate::grassmann::MAX_GENERATORS
        )));
    }
    let mut pairs_checked = 0usize;
    for n in 1..=max_n {
        let monomials = odd_monomials(n)?;
        for a in &monomials {
            if !a.mul(a)?.is_zero() {
                return Err(Error::InvalidSpec(format!("nilpotency failed for {a}")));
            }
            for b in &monomials {
                pairs_checked += 1;
                if !a.anticommutator(b)?.is_zero() {
                    return Err(Error::InvalidSpec(format!(
                        "anticommutation failed for {a} and {b}"
                    )));
                }
            }
        }
    }
    // a worked product for the artifact
    let eta1 = GrassmannElement::generator(1, 2)?;
    let eta2 = GrassmannElement::generator(2, 2)?;
    let sample = eta1.mul(&eta2)?;
    let hash = {
        use sha2::{Digest, Sha256};
        Sha256::digest(format!("generators={max_n}").as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect::<String>()
    };
    let artifact = json!({
        "provenance": provenance(&hash),
        "max_generators": max_n,
        "odd_pairs_checked": pairs_checked,
        "anticommutation_exact": true,
        "nilpotency_exact": true,
        "sample_product": serde_json::to_value(crate::grassmann::GrassmannJson::from(&sample))
            .expect("serializable"),
    });
    let path = write_json(&args.out, "grassmann.json", &artifact)?;
    Ok(format!(
        "checked {pairs_checked} odd monomial pairs up to n={max_n}: identities exact -> {}",
        path.display()
    ))
}
