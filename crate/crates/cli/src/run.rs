//! Subcommand implementations.

use std::process::ExitCode;
use std::time::Instant;

use clap::Args;
use serde_json::Value;

use cvbench::benchmark::{
    cft_coherent, cft_gaussian, cft_squeezed, gaussian_block_eigencheck, gaussian_cft_quadrature,
    gp_cft_monte_carlo, gp_cft_numeric, squeezed_benchmark_eigen, OverlapKernel,
};
use cvbench::priors::EnsembleSpec;
use cvbench::srm::srm_curve;
use cvbench::teleport::{region_map, threshold_r, ThresholdOutcome, TwinBeamResource, R_MAX};
use cvbench::verify::{run_all, VerifyConfig};

use crate::config::{parse_grid, parse_width, CliError, FileConfig};
use crate::output::{float, Table};
use crate::{Cli, Command};

#[derive(Args, Debug)]
pub struct CftArgs {
    /// Displacement inverse width ('inf' allowed)
    #[arg(long, value_parser = parse_width)]
    lambda: Option<f64>,
    /// Squeezing inverse width ('inf' allowed)
    #[arg(long, value_parser = parse_width)]
    beta: Option<f64>,
    /// Cross-check route to run next to the closed form
    #[arg(long, default_value = "none", value_parser = ["none", "quadrature", "mc"])]
    numeric: String,
    /// Monte Carlo sample count for --numeric mc
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
}

#[derive(Args, Debug)]
pub struct EigencheckArgs {
    /// Squeezing inverse width
    #[arg(long, value_parser = parse_width)]
    beta: Option<f64>,
    /// Displacement inverse width; when present the Gaussian photon-number
    /// blocks are checked instead of the squeezed paired blocks
    #[arg(long, value_parser = parse_width)]
    lambda: Option<f64>,
    /// Photon-number cutoff for the squeezed operator route
    #[arg(long, default_value_t = 120)]
    n_cut: usize,
    /// Largest block index
    #[arg(long)]
    k_max: Option<usize>,
    /// Quadrature tolerance for the Gaussian block integrals
    #[arg(long, default_value_t = 1e-4)]
    quad_tol: f64,
}

#[derive(Args, Debug)]
pub struct SrmScanArgs {
    /// Prior width grid, start:stop:linN or start:stop:logN
    #[arg(long)]
    beta_grid: Option<String>,
    /// Series truncation depth
    #[arg(long, default_value_t = 200)]
    k_max: usize,
}

#[derive(Args, Debug)]
pub struct TeleportMapArgs {
    #[arg(long)]
    beta_grid: Option<String>,
    #[arg(long)]
    r_grid: Option<String>,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    /// Squeezing inverse width
    #[arg(long, value_parser = parse_width)]
    beta: Option<f64>,
    /// Displacement inverse width (0 and 'inf' give the limiting benchmarks)
    #[arg(long, value_parser = parse_width)]
    lambda: Option<f64>,
    /// Bisection tolerance on the resource squeezing
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args, Debug)]
pub struct SamplePriorArgs {
    /// Ensemble: coherent, squeezed, or gaussian
    #[arg(long, value_parser = ["coherent", "squeezed", "gaussian"])]
    kind: String,
    #[arg(long, value_parser = parse_width)]
    lambda: Option<f64>,
    #[arg(long, value_parser = parse_width)]
    beta: Option<f64>,
    /// Number of draws
    #[arg(long, default_value_t = 1000)]
    n: usize,
}

#[derive(Args, Debug)]
pub struct VerifyAllArgs {
    /// Shrink Monte Carlo sample counts and scan grids (bounds unchanged)
    #[arg(long)]
    quick: bool,
}

struct Resolved {
    seed: u64,
    workers: usize,
    format: String,
    out: Option<std::path::PathBuf>,
    file: FileConfig,
}

fn resolve(cli: &Cli) -> Result<Resolved, CliError> {
    let file = match &cli.global.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let format = cli
        .global
        .format
        .clone()
        .or_else(|| file.format.clone())
        .unwrap_or_else(|| "csv".to_string());
    if format != "csv" && format != "json" {
        return Err(CliError::Config(format!("unknown format '{format}'")));
    }
    Ok(Resolved {
        seed: cli.global.seed.or(file.seed).unwrap_or(7),
        workers: cli.global.workers.or(file.workers).unwrap_or(1).max(1),
        format,
        out: cli.global.out.clone().or_else(|| file.out.clone()),
        file,
    })
}

pub fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    let resolved = resolve(&cli)?;
    let start = Instant::now();
    let (mut table, exit) = match &cli.command {
        Command::Cft(args) => (run_cft(args, &resolved)?, ExitCode::SUCCESS),
        Command::Eigencheck(args) => (run_eigencheck(args, &resolved)?, ExitCode::SUCCESS),
        Command::SrmScan(args) => (run_srm_scan(args, &resolved)?, ExitCode::SUCCESS),
        Command::TeleportMap(args) => (run_teleport_map(args, &resolved)?, ExitCode::SUCCESS),
        Command::Threshold(args) => (run_threshold(args, &resolved)?, ExitCode::SUCCESS),
        Command::SamplePrior(args) => (run_sample_prior(args, &resolved)?, ExitCode::SUCCESS),
        Command::VerifyAll(args) => run_verify_all(args, &resolved)?,
    };
    table.seed = resolved.seed;
    table.workers = resolved.workers;
    table.wall_ms = start.elapsed().as_millis();
    table.write(&resolved.format, resolved.out.as_deref())?;
    Ok(exit)
}

fn width_or_file(
    flag: Option<f64>,
    file_value: &Option<toml::Value>,
) -> Result<Option<f64>, CliError> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => FileConfig::width(file_value),
    }
}

fn run_cft(args: &CftArgs, resolved: &Resolved) -> Result<Table, CliError> {
    let lambda = width_or_file(args.lambda, &resolved.file.lambda)?;
    let beta = width_or_file(args.beta, &resolved.file.beta)?;
    let (kind, closed) = match (lambda, beta) {
        (Some(l), Some(b)) => ("gaussian", cft_gaussian(l, b)),
        (Some(l), None) => ("coherent", cft_coherent(l)),
        (None, Some(b)) => ("squeezed", cft_squeezed(b)),
        (None, None) => {
            return Err(CliError::Config("cft needs --lambda, --beta, or both".into()))
        }
    };
    let mut table = Table::new(
        "cft",
        vec!["kind", "lambda", "beta", "closed_form", "method", "numeric", "abs_discrepancy"],
    );
    table.param("numeric", &args.numeric);
    let (method, numeric): (Value, Value) = match args.numeric.as_str() {
        "none" => (Value::Null, Value::Null),
        "quadrature" => {
            let v = match (kind, lambda, beta) {
                ("gaussian", Some(l), Some(b)) if l.is_finite() && b.is_finite() => {
                    gaussian_cft_quadrature(l, b, 1e-8)?.worst_route().numeric
                }
                ("coherent", Some(l), _) if l.is_finite() && l > 0.0 => {
                    gp_cft_numeric(&OverlapKernel::coherent(l), 1e-8)?
                }
                ("squeezed", _, Some(b)) if b.is_finite() && b > 0.0 => {
                    gp_cft_numeric(&OverlapKernel::squeezed(b), 1e-8)?
                }
                _ => {
                    return Err(CliError::Config(
                        "numeric cross-checks need positive finite widths".into(),
                    ))
                }
            };
            (Value::String("quadrature".into()), float(v))
        }
        "mc" => {
            let spec = match (kind, lambda, beta) {
                ("gaussian", Some(l), Some(b)) => EnsembleSpec::gaussian(l, b),
                ("coherent", Some(l), _) => EnsembleSpec::coherent(l),
                ("squeezed", _, Some(b)) => EnsembleSpec::squeezed(b),
                _ => unreachable!("kind fixed above"),
            };
            spec.validate().map_err(|e| CliError::Config(e.to_string()))?;
            let (v, se) = gp_cft_monte_carlo(&spec, args.samples, resolved.seed);
            table.param("samples", args.samples);
            table.param("mc_stderr", format!("{se}"));
            (Value::String("monte-carlo".into()), float(v))
        }
        other => return Err(CliError::Config(format!("unknown numeric route '{other}'"))),
    };
    let disc = match &numeric {
        Value::Number(n) => float((n.as_f64().unwrap() - closed).abs()),
        _ => Value::Null,
    };
    table.push_row(vec![
        Value::String(kind.into()),
        lambda.map(float).unwrap_or(Value::Null),
        beta.map(float).unwrap_or(Value::Null),
        float(closed),
        method,
        numeric,
        disc,
    ]);
    Ok(table)
}

fn run_eigencheck(args: &EigencheckArgs, resolved: &Resolved) -> Result<Table, CliError> {
    let beta = width_or_file(args.beta, &resolved.file.beta)?
        .ok_or_else(|| CliError::Config("eigencheck needs --beta".into()))?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(CliError::Config(format!("eigencheck needs finite positive beta, got {beta}")));
    }
    let lambda = width_or_file(args.lambda, &resolved.file.lambda)?;
    let mut table = Table::new(
        "eigencheck",
        vec!["kind", "lambda", "beta", "k", "eig_max", "eig_min", "reference", "deviation"],
    );
    match lambda {
        None => {
            let n_cut = resolved.file.n_cut.unwrap_or(args.n_cut);
            let k_max = args.k_max.or(resolved.file.k_max).unwrap_or(15);
            table.param("n_cut", n_cut);
            table.param("k_max", k_max);
            let report = squeezed_benchmark_eigen(beta, n_cut, k_max)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let expected = report.result.closed_form;
            for block in &report.blocks {
                let max = block.eigenvalues.first().copied().unwrap_or(f64::NAN);
                let min = block.eigenvalues.last().copied().unwrap_or(f64::NAN);
                table.push_row(vec![
                    Value::String("squeezed".into()),
                    Value::Null,
                    float(beta),
                    (block.k as u64).into(),
                    float(max),
                    float(min),
                    float(expected),
                    float((max - expected).abs()),
                ]);
            }
        }
        Some(lambda) => {
            if !(lambda > 0.0 && lambda.is_finite()) {
                return Err(CliError::Config(
                    "the Gaussian block check needs finite positive lambda".into(),
                ));
            }
            let k_max = args.k_max.or(resolved.file.k_max).unwrap_or(4);
            let quad_tol = resolved.file.quad_tol.unwrap_or(args.quad_tol);
            table.param("k_max", k_max);
            table.param("quad_tol", quad_tol);
            let report = gaussian_block_eigencheck(lambda, beta, k_max, quad_tol)
                .map_err(|e| CliError::NonConvergence(e.to_string()))?;
            if !report.quad_failures.is_empty() {
                return Err(CliError::NonConvergence(format!(
                    "quadrature failures at (k, m, n) = {:?}",
                    report.quad_failures
                )));
            }
            for block in &report.blocks {
                let max = block.eigenvalues.first().copied().unwrap_or(f64::NAN);
                let min = block.eigenvalues.last().copied().unwrap_or(f64::NAN);
                table.push_row(vec![
                    Value::String("gaussian".into()),
                    float(lambda),
                    float(beta),
                    (block.k as u64).into(),
                    float(max),
                    float(min),
                    float(report.a00),
                    float(max - report.a00),
                ]);
            }
        }
    }
    Ok(table)
}

fn run_srm_scan(args: &SrmScanArgs, resolved: &Resolved) -> Result<Table, CliError> {
    let grid_spec = args
        .beta_grid
        .clone()
        .or_else(|| resolved.file.beta_grid.clone())
        .unwrap_or_else(|| "0.5:30:log15".to_string());
    let grid = parse_grid(&grid_spec).map_err(CliError::Config)?;
    if grid.iter().any(|&b| b <= 0.0) {
        return Err(CliError::Config("srm-scan needs positive beta values".into()));
    }
    let mut table =
        Table::new("srm-scan", vec!["beta", "eta_star", "srm_value", "cft", "gap"]);
    table.param("beta_grid", &grid_spec);
    table.param("k_max", args.k_max);
    for row in srm_curve(&grid, args.k_max) {
        table.push_row(vec![
            float(row.beta),
            float(row.eta_star),
            float(row.srm_value),
            float(row.cft),
            float(row.gap),
        ]);
    }
    Ok(table)
}

fn run_teleport_map(args: &TeleportMapArgs, resolved: &Resolved) -> Result<Table, CliError> {
    let beta_spec = args
        .beta_grid
        .clone()
        .or_else(|| resolved.file.beta_grid.clone())
        .unwrap_or_else(|| "0.1:50:log25".to_string());
    let r_spec = args
        .r_grid
        .clone()
        .or_else(|| resolved.file.r_grid.clone())
        .unwrap_or_else(|| "0:2.5:lin26".to_string());
    let betas = parse_grid(&beta_spec).map_err(CliError::Config)?;
    let rs = parse_grid(&r_spec).map_err(CliError::Config)?;
    if betas.iter().any(|&b| b <= 0.0) || rs.iter().any(|&r| r < 0.0) {
        return Err(CliError::Config("teleport-map needs beta > 0 and r >= 0".into()));
    }
    let mut table = Table::new(
        "teleport-map",
        vec!["beta", "r", "f_avg", "beats_lambda0", "beats_lambda_inf"],
    );
    table.param("beta_grid", &beta_spec);
    table.param("r_grid", &r_spec);
    for row in region_map(&betas, &rs)? {
        table.push_row(vec![
            float(row.beta),
            float(row.r),
            float(row.fidelity),
            Value::Bool(row.beats_lambda0),
            Value::Bool(row.beats_lambda_inf),
        ]);
    }
    Ok(table)
}

fn run_threshold(args: &ThresholdArgs, resolved: &Resolved) -> Result<Table, CliError> {
    let beta = width_or_file(args.beta, &resolved.file.beta)?
        .ok_or_else(|| CliError::Config("threshold needs --beta".into()))?;
    let lambda = width_or_file(args.lambda, &resolved.file.lambda)?
        .ok_or_else(|| CliError::Config("threshold needs --lambda (0 and 'inf' allowed)".into()))?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(CliError::Config(format!("threshold needs finite positive beta, got {beta}")));
    }
    let tol = resolved.file.tol.unwrap_or(args.tol);
    if tol <= 0.0 {
        return Err(CliError::Config("tolerance must be positive".into()));
    }
    let mut table = Table::new(
        "threshold",
        vec![
            "beta",
            "lambda",
            "benchmark",
            "beats",
            "r_threshold",
            "r_db",
            "fidelity_at_r_max",
        ],
    );
    table.param("tol", tol);
    table.param("r_max", R_MAX);
    let benchmark = cft_gaussian(lambda, beta);
    match threshold_r(beta, lambda, tol)? {
        ThresholdOutcome::Beats(r) => table.push_row(vec![
            float(beta),
            float(lambda),
            float(benchmark),
            Value::Bool(true),
            float(r),
            float(TwinBeamResource::new(r).to_db()),
            Value::Null,
        ]),
        ThresholdOutcome::NeverBeats { fidelity_at_rmax, benchmark } => table.push_row(vec![
            float(beta),
            float(lambda),
            float(benchmark),
            Value::Bool(false),
            Value::Null,
            Value::Null,
            float(fidelity_at_rmax),
        ]),
    }
    Ok(table)
}

fn run_sample_prior(args: &SamplePriorArgs, resolved: &Resolved) -> Result<Table, CliError> {
    use rand::SeedableRng;
    let lambda = width_or_file(args.lambda, &resolved.file.lambda)?;
    let beta = width_or_file(args.beta, &resolved.file.beta)?;
    let spec = match args.kind.as_str() {
        "coherent" => EnsembleSpec::coherent(
            lambda.ok_or_else(|| CliError::Config("coherent sampling needs --lambda".into()))?,
        ),
        "squeezed" => EnsembleSpec::squeezed(
            beta.ok_or_else(|| CliError::Config("squeezed sampling needs --beta".into()))?,
        ),
        "gaussian" => EnsembleSpec::gaussian(
            lambda.ok_or_else(|| CliError::Config("gaussian sampling needs --lambda".into()))?,
            beta.ok_or_else(|| CliError::Config("gaussian sampling needs --beta".into()))?,
        ),
        other => return Err(CliError::Config(format!("unknown ensemble '{other}'"))),
    };
    spec.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let n = resolved.file.samples.unwrap_or(args.n);
    let mut table =
        Table::new("sample-prior", vec!["index", "alpha_re", "alpha_im", "s", "theta"]);
    table.param("kind", &args.kind);
    table.param("n", n);
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(resolved.seed);
    for i in 0..n {
        let p = spec.sample(&mut rng);
        table.push_row(vec![
            (i as u64).into(),
            float(p.alpha.re),
            float(p.alpha.im),
            float(p.s),
            float(p.theta),
        ]);
    }
    Ok(table)
}

fn run_verify_all(
    args: &VerifyAllArgs,
    resolved: &Resolved,
) -> Result<(Table, ExitCode), CliError> {
    let config = VerifyConfig { quick: args.quick, seed: resolved.seed };
    let reports = run_all(&config);
    let mut table = Table::new(
        "verify-all",
        vec!["criterion", "title", "passed", "checks", "worst_check", "worst_ratio", "wall_s"],
    );
    table.param("quick", args.quick);
    let mut failures = 0;
    for report in &reports {
        eprintln!("{}", report.summary_line());
        if !report.passed() {
            failures += 1;
            for check in report.checks.iter().filter(|c| !c.pass()) {
                eprintln!(
                    "      failed: {} = {:.6e} (bound {:.1e})",
                    check.name, check.observed, check.bound
                );
            }
        }
        let worst =
            report.checks.iter().max_by(|a, b| a.severity().total_cmp(&b.severity()));
        table.push_row(vec![
            (report.id as u64).into(),
            Value::String(report.title.to_string()),
            Value::Bool(report.passed()),
            (report.checks.len() as u64).into(),
            worst.map(|w| Value::String(w.name.clone())).unwrap_or(Value::Null),
            worst.map(|w| float(w.severity())).unwrap_or(Value::Null),
            float(report.wall_time.as_secs_f64()),
        ]);
    }
    let exit = if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    };
    Ok((table, exit))
}
