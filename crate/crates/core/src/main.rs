//! Batch CLI over the fixed-point engines.
//!
//! Exit codes: 0 converged, 1 iteration cap reached, 2 bad input (unknown
//! names, malformed files, parameter errors), 3 order/2-cycle/hypothesis
//! violation, 4 kernel validation failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use conefix::io;
use conefix::registry;
use conefix::{
    check_h2_equivalence, delta, enumerate_fixed_points, iterate_decreasing, iterate_increasing,
    iterate_setvalued, solve, validate_kernel, ConeOrder, Error, FiniteSelfMap,
    FiniteSetValuedMap, IntegralProblem, Norm, PointSet, Quadrature, Selector, Termination,
};

const EXIT_CONVERGED: u8 = 0;
const EXIT_MAX_ITER: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const EXIT_KERNEL_INVALID: u8 = 4;

#[derive(Parser)]
#[command(
    name = "conefix",
    about = "Order-theoretic fixed-point computation on cone-ordered vector spaces",
    version
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Convergence tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Iteration cap.
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON config file supplying defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for trace/result files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two point sets stored as CSV (one point per row).
    Delta {
        #[arg(long)]
        set_a: Option<PathBuf>,
        #[arg(long)]
        set_b: Option<PathBuf>,
        /// Norm: sup, euclidean, or l1.
        #[arg(long)]
        norm: Option<String>,
    },
    /// Increasing single-valued iteration from a builtin or tabulated map.
    SolveIncreasing(MapArgs),
    /// Increasing set-valued iteration from a builtin or tabulated map.
    SolveSetvalued(SetMapArgs),
    /// Decreasing iteration from the cone origin.
    SolveDecreasing(MapArgs),
    /// Singular integral equation pipeline.
    SolveIntegral(IntegralArgs),
    /// Enumerate fixed points of a finite set-valued map.
    AnalyzePoset(SetMapArgs),
    /// Exhaustive Fix(F²) = Fix(F) vs 2-cycle report for a finite self-map.
    CheckH1h2 {
        /// Inline image table, e.g. "1,0,2".
        #[arg(long)]
        images: Option<String>,
        /// JSON file with {"domain": [...], "images": [...]}.
        #[arg(long)]
        map_file: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct MapArgs {
    /// Builtin map name.
    #[arg(long)]
    map: Option<String>,
    /// Free constant for parametric builtins (c_over_1px).
    #[arg(long)]
    param: Option<f64>,
    /// Start point as comma-separated coordinates (increasing engine only).
    #[arg(long)]
    x0: Option<String>,
    /// JSON file with {"domain": [...], "images": [...]} for a tabulated map.
    #[arg(long)]
    map_file: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SetMapArgs {
    /// Builtin set-valued map name.
    #[arg(long)]
    map: Option<String>,
    /// Start point as comma-separated coordinates.
    #[arg(long)]
    x0: Option<String>,
    /// Successor selector: lexicographic, min_norm_step, least_upper_candidate.
    #[arg(long)]
    selector: Option<String>,
    /// JSON file with {"domain": [...], "values": [[...], ...]}.
    #[arg(long)]
    map_file: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct IntegralArgs {
    /// Builtin kernel name: zero, separable_unit, separable_linear, constant_one.
    #[arg(long)]
    kernel: Option<String>,
    /// Tabulated kernel CSV (header row: y grid; first column: x grid).
    #[arg(long)]
    kernel_csv: Option<PathBuf>,
    /// Number of grid nodes on [0, 1].
    #[arg(long)]
    grid_size: Option<usize>,
    /// Growth exponent for tabulated kernels.
    #[arg(long)]
    nu: Option<f64>,
    /// Growth constant for tabulated kernels.
    #[arg(long)]
    m_bound: Option<f64>,
    /// Solve even if kernel validation reports violations.
    #[arg(long)]
    override_validation: bool,
}

/// Defaults loadable from --config. Flags win over config values.
#[derive(Deserialize, Default, Clone)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    tol: Option<f64>,
    max_iter: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    norm: Option<String>,
    map: Option<String>,
    param: Option<f64>,
    x0: Option<String>,
    selector: Option<String>,
    kernel: Option<String>,
    kernel_csv: Option<PathBuf>,
    grid_size: Option<usize>,
    nu: Option<f64>,
    m_bound: Option<f64>,
    override_validation: Option<bool>,
    images: Option<String>,
    map_file: Option<PathBuf>,
    set_a: Option<PathBuf>,
    set_b: Option<PathBuf>,
}

struct Settings {
    tol: f64,
    max_iter: usize,
    seed: u64,
    out: PathBuf,
    config: FileConfig,
}

use registry::VectorMapFn as PointMapFn;

#[derive(Deserialize)]
struct TabulatedPointMap {
    domain: Vec<Vec<f64>>,
    images: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct TabulatedSetMap {
    domain: Vec<Vec<f64>>,
    values: Vec<Vec<Vec<f64>>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::KernelValidation { .. } => EXIT_KERNEL_INVALID,
        Error::PreconditionFailed(_) | Error::ConeExit { .. } => EXIT_VIOLATION,
        _ => EXIT_BAD_INPUT,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let settings = resolve_settings(&cli.global)?;
    match cli.command {
        Command::Delta { set_a, set_b, norm } => cmd_delta(&settings, set_a, set_b, norm),
        Command::SolveIncreasing(args) => cmd_solve_increasing(&settings, args),
        Command::SolveSetvalued(args) => cmd_solve_setvalued(&settings, args),
        Command::SolveDecreasing(args) => cmd_solve_decreasing(&settings, args),
        Command::SolveIntegral(args) => cmd_solve_integral(&settings, args),
        Command::AnalyzePoset(args) => cmd_analyze_poset(&settings, args),
        Command::CheckH1h2 { images, map_file } => cmd_check_h1h2(&settings, images, map_file),
    }
}

fn resolve_settings(global: &GlobalArgs) -> Result<Settings, Error> {
    let config: FileConfig = match &global.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?;
            serde_json::from_str(&text).map_err(|e| {
                Error::InvalidParameter(format!("config {}: {e}", path.display()))
            })?
        }
        None => FileConfig::default(),
    };
    let tol = global.tol.or(config.tol).unwrap_or(1e-10);
    let max_iter = global.max_iter.or(config.max_iter).unwrap_or(1000);
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
    }
    let out = global
        .out
        .clone()
        .or(config.out.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    // Referenced input files must exist before any work starts.
    for p in [&config.kernel_csv, &config.map_file, &config.set_a, &config.set_b]
        .into_iter()
        .flatten()
    {
        require_exists(p)?;
    }
    Ok(Settings {
        tol,
        max_iter,
        seed: global.seed.or(config.seed).unwrap_or(0),
        out,
        config,
    })
}

fn require_exists(path: &Path) -> Result<(), Error> {
    if path.exists() {
        Ok(())
    } else {
        Err(Error::Io {
            path: path.display().to_string(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
        })
    }
}

fn ensure_out_dir(settings: &Settings) -> Result<(), Error> {
    std::fs::create_dir_all(&settings.out).map_err(|source| Error::Io {
        path: settings.out.display().to_string(),
        source,
    })
}

fn parse_vector(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|c| {
            c.trim().parse::<f64>().map_err(|e| {
                Error::InvalidParameter(format!("bad coordinate {c:?}: {e}"))
            })
        })
        .collect()
}

fn exit_for_termination(t: Termination) -> u8 {
    match t {
        Termination::Converged => EXIT_CONVERGED,
        Termination::MaxIter => EXIT_MAX_ITER,
        Termination::OrderViolation | Termination::H1Violation => EXIT_VIOLATION,
    }
}

fn cmd_delta(
    settings: &Settings,
    set_a: Option<PathBuf>,
    set_b: Option<PathBuf>,
    norm: Option<String>,
) -> Result<u8, Error> {
    let a_path = set_a
        .or(settings.config.set_a.clone())
        .ok_or_else(|| Error::InvalidParameter("delta needs --set-a".into()))?;
    let b_path = set_b
        .or(settings.config.set_b.clone())
        .ok_or_else(|| Error::InvalidParameter("delta needs --set-b".into()))?;
    require_exists(&a_path)?;
    require_exists(&b_path)?;
    let norm: Norm = norm
        .or(settings.config.norm.clone())
        .unwrap_or_else(|| "sup".into())
        .parse()?;
    let a = io::read_point_set_csv(&a_path, norm)?;
    let b = io::read_point_set_csv(&b_path, norm)?;
    println!("{}", delta(&a, &b)?);
    Ok(EXIT_CONVERGED)
}

fn load_point_map(
    path: &Path,
) -> Result<(PointMapFn, usize, Vec<f64>), Error> {
    require_exists(path)?;
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let table: TabulatedPointMap = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidParameter(format!("map file {}: {e}", path.display())))?;
    if table.domain.is_empty() || table.domain.len() != table.images.len() {
        return Err(Error::InvalidParameter(
            "tabulated map needs equal-length nonempty domain and images".into(),
        ));
    }
    let dim = table.domain[0].len();
    let start = table.domain[0].clone();
    let domain = table.domain;
    let images = table.images;
    let map = Arc::new(move |x: &[f64]| -> Vec<f64> {
        domain
            .iter()
            .position(|p| p == x)
            .map(|i| images[i].clone())
            // Out-of-domain points keep their value: the engines' own
            // certificates then stop the run at the stall.
            .unwrap_or_else(|| x.to_vec())
    });
    Ok((map, dim, start))
}

fn resolve_point_map(
    settings: &Settings,
    args: &MapArgs,
    increasing: bool,
) -> Result<(PointMapFn, usize, Vec<f64>), Error> {
    if let Some(path) = args.map_file.clone().or(settings.config.map_file.clone()) {
        return load_point_map(&path);
    }
    let name = args
        .map
        .clone()
        .or(settings.config.map.clone())
        .ok_or_else(|| Error::InvalidParameter("no map name or map file given".into()))?;
    let param = args.param.or(settings.config.param);
    let builtin = if increasing {
        registry::increasing_map(&name, param)?
    } else {
        registry::decreasing_map(&name, param)?
    };
    Ok((builtin.map, builtin.dimension, builtin.default_start))
}

fn cmd_solve_increasing(settings: &Settings, args: MapArgs) -> Result<u8, Error> {
    let (map, dimension, default_start) = resolve_point_map(settings, &args, true)?;
    let x0 = match args.x0.or(settings.config.x0.clone()) {
        Some(text) => parse_vector(&text)?,
        None => default_start,
    };
    let cone = ConeOrder::orthant(dimension)?;
    let result = iterate_increasing(
        |x: &[f64]| map(x),
        &x0,
        &cone,
        settings.tol,
        settings.max_iter,
    )?;
    ensure_out_dir(settings)?;
    io::write_trace_csv(&settings.out.join("trace.csv"), &result.trace)?;
    io::write_fixed_point_json(&settings.out.join("result.json"), &result)?;
    println!(
        "terminated_by={} point={:?} residual={}",
        serde_json::to_value(result.trace.terminated_by).unwrap(),
        result.point,
        result.residual
    );
    Ok(exit_for_termination(result.trace.terminated_by))
}

fn cmd_solve_decreasing(settings: &Settings, args: MapArgs) -> Result<u8, Error> {
    let (map, dimension, _) = resolve_point_map(settings, &args, false)?;
    let cone = ConeOrder::orthant(dimension)?;
    let result = iterate_decreasing(
        |x: &[f64]| map(x),
        &cone,
        settings.tol,
        settings.max_iter,
    )?;
    ensure_out_dir(settings)?;
    io::write_trace_csv(&settings.out.join("trace.csv"), &result.trace)?;
    io::write_decreasing_json(&settings.out.join("result.json"), &result)?;
    println!(
        "terminated_by={} point={:?} h1_gap={}",
        serde_json::to_value(result.trace.terminated_by).unwrap(),
        result.point,
        result.h1_gap
    );
    Ok(exit_for_termination(result.trace.terminated_by))
}

fn resolve_set_map(
    settings: &Settings,
    args: &SetMapArgs,
) -> Result<(FiniteSetValuedMap, Vec<f64>), Error> {
    if let Some(path) = args.map_file.clone().or(settings.config.map_file.clone()) {
        require_exists(&path)?;
        let text = std::fs::read_to_string(&path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let table: TabulatedSetMap = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidParameter(format!("map file {}: {e}", path.display())))?;
        let start = table
            .domain
            .first()
            .cloned()
            .ok_or_else(|| Error::InvalidParameter("tabulated set map has empty domain".into()))?;
        let values = table
            .values
            .into_iter()
            .map(|pts| PointSet::new(pts, Norm::Sup))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((FiniteSetValuedMap::new(table.domain, values)?, start))
    } else {
        let name = args
            .map
            .clone()
            .or(settings.config.map.clone())
            .ok_or_else(|| Error::InvalidParameter("no map name or map file given".into()))?;
        registry::setvalued_map(&name)
    }
}

fn cmd_solve_setvalued(settings: &Settings, args: SetMapArgs) -> Result<u8, Error> {
    let (map, default_start) = resolve_set_map(settings, &args)?;
    let x0 = match args.x0.clone().or(settings.config.x0.clone()) {
        Some(text) => parse_vector(&text)?,
        None => default_start,
    };
    let selector: Selector = args
        .selector
        .clone()
        .or(settings.config.selector.clone())
        .unwrap_or_else(|| "lexicographic".into())
        .parse()?;
    let dimension = x0.len();
    let cone = ConeOrder::orthant(dimension)?;
    let result = iterate_setvalued(&map, &x0, &cone, settings.tol, settings.max_iter, selector)?;
    ensure_out_dir(settings)?;
    io::write_trace_csv(&settings.out.join("trace.csv"), &result.trace)?;
    io::write_fixed_point_json(&settings.out.join("result.json"), &result)?;
    println!(
        "terminated_by={} point={:?} residual={}",
        serde_json::to_value(result.trace.terminated_by).unwrap(),
        result.point,
        result.residual
    );
    Ok(exit_for_termination(result.trace.terminated_by))
}

fn cmd_solve_integral(settings: &Settings, args: IntegralArgs) -> Result<u8, Error> {
    let grid_size = args.grid_size.or(settings.config.grid_size).unwrap_or(257);
    let problem: IntegralProblem =
        if let Some(path) = args.kernel_csv.clone().or(settings.config.kernel_csv.clone()) {
            require_exists(&path)?;
            let table = io::read_kernel_csv(&path)?;
            let kernel = io::interpolate_kernel(&table.x_grid, &table.y_grid, &table.values);
            IntegralProblem::new(
                Arc::new(kernel),
                args.nu.or(settings.config.nu).unwrap_or(1.0),
                args.m_bound.or(settings.config.m_bound).unwrap_or(1.0),
                grid_size,
                Quadrature::MidpointDiagonalSkip,
            )?
        } else {
            let name = args
                .kernel
                .clone()
                .or(settings.config.kernel.clone())
                .ok_or_else(|| {
                    Error::InvalidParameter("no kernel name or kernel CSV given".into())
                })?;
            registry::kernel_problem(&name, grid_size)?
        };

    let override_validation =
        args.override_validation || settings.config.override_validation.unwrap_or(false);
    // Validate with the run's seed; solve() gets the override because the
    // gate has already been applied here.
    let report = validate_kernel(&problem, 2000, settings.seed)?;
    if !report.passed() && !override_validation {
        eprintln!(
            "kernel validation failed: {} sign violation(s), {} growth violation(s)",
            report.sign_violations.len(),
            report.growth_violations.len()
        );
        return Ok(EXIT_KERNEL_INVALID);
    }

    let solution = solve(&problem, settings.tol, settings.max_iter, true)?;
    ensure_out_dir(settings)?;
    io::write_solution_csv(&settings.out.join("solution.csv"), &solution)?;
    io::write_solution_summary_json(&settings.out.join("summary.json"), &solution)?;
    println!(
        "terminated_by={} residual={} analytic_gap={} iterations={}",
        serde_json::to_value(solution.engine.trace.terminated_by).unwrap(),
        solution.residual,
        solution.analytic_gap,
        solution.iterations
    );
    Ok(exit_for_termination(solution.engine.trace.terminated_by))
}

fn cmd_analyze_poset(settings: &Settings, args: SetMapArgs) -> Result<u8, Error> {
    let (map, start) = resolve_set_map(settings, &args)?;
    let cone = ConeOrder::orthant(start.len())?;
    let analysis = enumerate_fixed_points(&map, &cone)?;
    ensure_out_dir(settings)?;
    let doc = serde_json::to_value(&analysis)
        .map_err(|e| Error::InvalidParameter(format!("serialize: {e}")))?;
    io::write_json_value(&settings.out.join("poset.json"), &doc)?;
    println!(
        "fixed_points={} maximal={} minimal={} nonempty={}",
        analysis.fixed_points.len(),
        analysis.maximal.len(),
        analysis.minimal.len(),
        analysis.is_nonempty
    );
    Ok(EXIT_CONVERGED)
}

fn cmd_check_h1h2(
    settings: &Settings,
    images: Option<String>,
    map_file: Option<PathBuf>,
) -> Result<u8, Error> {
    let self_map = if let Some(text) = images.or(settings.config.images.clone()) {
        let idx: Vec<usize> = text
            .split(',')
            .map(|c| {
                c.trim().parse::<usize>().map_err(|e| {
                    Error::InvalidParameter(format!("bad image index {c:?}: {e}"))
                })
            })
            .collect::<Result<_, _>>()?;
        FiniteSelfMap::new(idx)?
    } else if let Some(path) = map_file.or(settings.config.map_file.clone()) {
        require_exists(&path)?;
        let text = std::fs::read_to_string(&path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let table: TabulatedPointMap = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidParameter(format!("map file {}: {e}", path.display())))?;
        let mut idx = Vec::with_capacity(table.images.len());
        for (i, img) in table.images.iter().enumerate() {
            let j = table
                .domain
                .iter()
                .position(|p| p == img)
                .ok_or(Error::DomainNotClosed { index: i })?;
            idx.push(j);
        }
        FiniteSelfMap::new(idx)?
    } else {
        return Err(Error::InvalidParameter(
            "check-h1h2 needs --images or --map-file".into(),
        ));
    };

    let report = check_h2_equivalence(&self_map);
    ensure_out_dir(settings)?;
    let doc = serde_json::json!({
        "fixed_points": report.fixed_points,
        "fixed_points_f2": report.fixed_points_f2,
        "two_cycles": report.two_cycles,
        "h1_holds": report.h1_holds,
        "h2_holds": report.h2_holds,
        "equivalent": report.equivalent,
    });
    io::write_json_value(&settings.out.join("h1h2.json"), &doc)?;
    println!(
        "h1_holds={} h2_holds={} equivalent={} two_cycles={:?}",
        report.h1_holds, report.h2_holds, report.equivalent, report.two_cycles
    );
    if report.equivalent {
        Ok(EXIT_CONVERGED)
    } else {
        Ok(EXIT_VIOLATION)
    }
}
