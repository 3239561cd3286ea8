//! Command-line front end. Results go to stdout as one JSON object per
//! line; diagnostics go to stderr. Exit codes: 0 success and confident,
//! 2 input error, 3 numerical non-confidence, 4 output I/O failure.

use clap::{Parser, Subcommand, ValueEnum};
use linkframe::curve::{example_pair, Curve, CurvePair};
use linkframe::error::Error;
use linkframe::formats::{self, ConfigEcho, ExampleName, RunReport};
use linkframe::quadrature::{self, LinkEstimate, LinkMethod, QuadratureConfig};
use linkframe::{crossings, exact, wilson};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "linkframe", version, about = "Linking numbers, ribbon framings, and Wilson phases of closed space curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Linking number of a curve pair by one or all methods
    Link(LinkArgs),
    /// Framing number of a ribbon file
    Framing(FramingArgs),
    /// Wilson phase exp(2 pi i lk / k)
    Wilson(WilsonArgs),
    /// Write curve geometry as CSV or OBJ polylines
    Export(ExportArgs),
}

#[derive(clap::Args)]
struct QuadFlags {
    /// Refinement target for the absolute error
    #[arg(long, value_name = "F")]
    target_error: Option<f64>,
    /// Initial panels per smooth piece
    #[arg(long, value_name = "N")]
    panels: Option<usize>,
    /// Gauss-Legendre nodes per panel
    #[arg(long, value_name = "N")]
    nodes: Option<usize>,
    /// Panel-doubling budget
    #[arg(long, value_name = "N")]
    max_refinements: Option<usize>,
}

impl QuadFlags {
    fn to_config(&self) -> QuadratureConfig {
        let mut cfg = QuadratureConfig::default();
        if let Some(v) = self.target_error {
            cfg.target_abs_error = v;
        }
        if let Some(v) = self.panels {
            cfg.panels_per_piece = v;
        }
        if let Some(v) = self.nodes {
            cfg.nodes_per_panel = v;
        }
        if let Some(v) = self.max_refinements {
            cfg.max_refinements = v;
        }
        cfg
    }
}

#[derive(clap::Args)]
struct LinkArgs {
    /// Curve-pair file (JSON); alternative to --example
    pair_file: Option<PathBuf>,
    /// Built-in example pair
    #[arg(long, value_name = "ID")]
    example: Option<ExampleName>,
    /// Epsilon for the framing_one example
    #[arg(long, value_name = "F", default_value_t = 1.0)]
    epsilon: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    method: MethodArg,
    /// Polygonization density for the exact and crossing methods
    #[arg(long, value_name = "N", default_value_t = 256)]
    samples: usize,
    #[command(flatten)]
    quad: QuadFlags,
}

#[derive(clap::Args)]
struct FramingArgs {
    /// Ribbon file (JSON)
    framed_file: PathBuf,
    #[command(flatten)]
    quad: QuadFlags,
}

#[derive(clap::Args)]
struct WilsonArgs {
    /// Curve-pair file (JSON); alternative to --lk or --example
    pair_file: Option<PathBuf>,
    /// Linking number, bypassing any curve computation
    #[arg(long, value_name = "INT")]
    lk: Option<i64>,
    /// Built-in example pair
    #[arg(long, value_name = "ID")]
    example: Option<ExampleName>,
    #[arg(long, value_name = "F", default_value_t = 1.0)]
    epsilon: f64,
    /// Chern-Simons level (nonzero integer)
    #[arg(long, value_name = "INT", allow_hyphen_values = true)]
    k: i64,
    #[arg(long, value_name = "N", default_value_t = 256)]
    samples: usize,
    #[command(flatten)]
    quad: QuadFlags,
}

#[derive(clap::Args)]
struct ExportArgs {
    /// Curve file (JSON); alternative to --example
    curve_file: Option<PathBuf>,
    /// Built-in example pair (exports both curves)
    #[arg(long, value_name = "ID")]
    example: Option<ExampleName>,
    #[arg(long, value_name = "F", default_value_t = 1.0)]
    epsilon: f64,
    #[arg(long, value_name = "N", default_value_t = 256)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output path
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum MethodArg {
    Quadrature,
    Exact,
    Crossings,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Obj,
}

/// Failure modes mapped to exit codes.
enum CliError {
    Input(Error),
    Numerical(Error),
    Output(std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Output(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Input(e) => format!("input error: {e}"),
            CliError::Numerical(e) => format!("numerical error: {e}"),
            CliError::Output(e) => format!("output error: {e}"),
        }
    }
}

fn numerical(e: Error) -> CliError {
    match e {
        Error::Singularity(_) | Error::Convergence { .. } | Error::Degenerate(_) => {
            CliError::Numerical(e)
        }
        other => CliError::Input(other),
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("LINKFRAME_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Link(args) => cmd_link(args),
        Command::Framing(args) => cmd_framing(args),
        Command::Wilson(args) => cmd_wilson(args),
        Command::Export(args) => cmd_export(args),
    };
    match outcome {
        Ok(all_confident) => {
            if all_confident {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("{}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn resolve_pair(
    file: &Option<PathBuf>,
    example: &Option<ExampleName>,
    epsilon: f64,
) -> Result<(CurvePair, Option<f64>), CliError> {
    match (file, example) {
        (Some(_), Some(_)) => Err(CliError::Input(Error::InvalidArgument(
            "give either a pair file or --example, not both".into(),
        ))),
        (Some(path), None) => {
            let pair = formats::load_pair(path).map_err(CliError::Input)?;
            Ok((pair, None))
        }
        (None, Some(name)) => {
            let id = name.to_id(Some(epsilon));
            let pair = example_pair(id).map_err(CliError::Input)?;
            let echo_eps = matches!(name, ExampleName::FramingOne).then_some(epsilon);
            Ok((pair, echo_eps))
        }
        (None, None) => Err(CliError::Input(Error::InvalidArgument(
            "no input: give a pair file or --example".into(),
        ))),
    }
}

fn echo(cfg: &QuadratureConfig, samples: usize, epsilon: Option<f64>, k: Option<i64>) -> ConfigEcho {
    ConfigEcho {
        panels_per_piece: cfg.panels_per_piece,
        nodes_per_panel: cfg.nodes_per_panel,
        target_abs_error: cfg.target_abs_error,
        max_refinements: cfg.max_refinements,
        samples,
        epsilon,
        k,
    }
}

fn method_name(method: LinkMethod) -> &'static str {
    match method {
        LinkMethod::Quadrature => "quadrature",
        LinkMethod::ExactPolygonal => "exact_polygonal",
        LinkMethod::CrossingOracle => "crossing_oracle",
    }
}

fn report_estimate(
    label: &str,
    estimate: &LinkEstimate,
    wall_time_ms: f64,
    config: ConfigEcho,
) -> RunReport {
    RunReport {
        input_label: label.to_string(),
        method: method_name(estimate.method).to_string(),
        value: estimate.value,
        rounded: estimate.rounded,
        confident: estimate.confident,
        abs_error_bound: estimate.abs_error_bound,
        wall_time_ms,
        config,
        wilson: None,
    }
}

fn print_report(report: &RunReport) -> Result<(), CliError> {
    let line = serde_json::to_string(report)
        .map_err(|e| CliError::Input(Error::Parse(e.to_string())))?;
    println!("{line}");
    Ok(())
}

/// Exact polygon when the curve is already piecewise linear, otherwise a
/// polygonization at the requested density.
fn polygon_for(curve: &Curve, samples: usize) -> Result<linkframe::PolygonalCurve, Error> {
    match curve.as_exact_polygon() {
        Some(p) => Ok(p),
        None => curve.polygonize(samples),
    }
}

fn cmd_link(args: LinkArgs) -> Result<bool, CliError> {
    let cfg = args.quad.to_config();
    let (pair, echo_eps) = resolve_pair(&args.pair_file, &args.example, args.epsilon)?;
    let label = pair
        .label
        .clone()
        .or_else(|| args.pair_file.as_ref().map(|p| p.display().to_string()))
        .unwrap_or_else(|| "curve pair".into());
    let methods: &[MethodArg] = match args.method {
        MethodArg::All => &[MethodArg::Quadrature, MethodArg::Exact, MethodArg::Crossings],
        MethodArg::Quadrature => &[MethodArg::Quadrature],
        MethodArg::Exact => &[MethodArg::Exact],
        MethodArg::Crossings => &[MethodArg::Crossings],
    };
    let mut all_confident = true;
    for method in methods {
        let start = Instant::now();
        let estimate = match method {
            MethodArg::Quadrature => quadrature::link_numeric(&pair, &cfg),
            MethodArg::Exact => {
                let pa = polygon_for(&pair.first, args.samples).map_err(CliError::Input)?;
                let pb = polygon_for(&pair.second, args.samples).map_err(CliError::Input)?;
                exact::link_exact(&pa, &pb)
            }
            MethodArg::Crossings => {
                let pa = polygon_for(&pair.first, args.samples).map_err(CliError::Input)?;
                let pb = polygon_for(&pair.second, args.samples).map_err(CliError::Input)?;
                crossings::link_by_crossings(&pa, &pb)
            }
            MethodArg::All => unreachable!(),
        }
        .map_err(|e| {
            eprintln!(
                "method {}: computation failed",
                match method {
                    MethodArg::Quadrature => "quadrature",
                    MethodArg::Exact => "exact",
                    MethodArg::Crossings => "crossings",
                    MethodArg::All => "all",
                }
            );
            numerical(e)
        })?;
        let wall = start.elapsed().as_secs_f64() * 1e3;
        let report = report_estimate(
            &label,
            &estimate,
            wall,
            echo(&cfg, args.samples, echo_eps, None),
        );
        print_report(&report)?;
        all_confident &= estimate.confident;
    }
    Ok(all_confident)
}

fn cmd_framing(args: FramingArgs) -> Result<bool, CliError> {
    let cfg = args.quad.to_config();
    let ribbon = formats::load_framed(&args.framed_file).map_err(CliError::Input)?;
    let label = args.framed_file.display().to_string();
    let start = Instant::now();
    let estimate = ribbon.framing_number(&cfg).map_err(numerical)?;
    let wall = start.elapsed().as_secs_f64() * 1e3;
    let report = report_estimate(
        &label,
        &estimate,
        wall,
        echo(&cfg, linkframe::framing::DEFAULT_RIBBON_SAMPLES, None, None),
    );
    print_report(&report)?;
    Ok(estimate.confident)
}

fn cmd_wilson(args: WilsonArgs) -> Result<bool, CliError> {
    let cfg = args.quad.to_config();
    let start = Instant::now();
    let (label, value) = if let Some(lk) = args.lk {
        let value = wilson::wilson_expectation(lk, args.k).map_err(CliError::Input)?;
        (format!("lk={lk}"), value)
    } else {
        let (pair, _) = resolve_pair(&args.pair_file, &args.example, args.epsilon)?;
        let label = pair.label.clone().unwrap_or_else(|| "curve pair".into());
        let value = wilson::wilson_from_curves(&pair, args.k, &cfg).map_err(numerical)?;
        (label, value)
    };
    let wall = start.elapsed().as_secs_f64() * 1e3;
    let report = RunReport {
        input_label: label,
        method: "wilson".into(),
        value: value.lk as f64,
        rounded: value.lk,
        confident: true,
        abs_error_bound: 0.0,
        wall_time_ms: wall,
        config: echo(&cfg, args.samples, None, Some(args.k)),
        wilson: Some(value),
    };
    print_report(&report)?;
    Ok(true)
}

fn cmd_export(args: ExportArgs) -> Result<bool, CliError> {
    let curves: Vec<Curve> = match (&args.curve_file, &args.example) {
        (Some(_), Some(_)) => {
            return Err(CliError::Input(Error::InvalidArgument(
                "give either a curve file or --example, not both".into(),
            )))
        }
        (Some(path), None) => vec![formats::load_curve(path).map_err(CliError::Input)?],
        (None, Some(name)) => {
            let pair = example_pair(name.to_id(Some(args.epsilon))).map_err(CliError::Input)?;
            vec![pair.first, pair.second]
        }
        (None, None) => {
            return Err(CliError::Input(Error::InvalidArgument(
                "no input: give a curve file or --example".into(),
            )))
        }
    };
    let polylines = curves
        .iter()
        .map(|c| polygon_for(c, args.samples))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::Input)?;
    let payload = match args.format {
        FormatArg::Csv => formats::export_csv(&polylines),
        FormatArg::Obj => formats::export_obj(&polylines),
    };
    std::fs::write(&args.out, payload).map_err(CliError::Output)?;
    Ok(true)
}
