//! Command-line front end: evaluate the iterated-AB operator on a grid,
//! run the verification suites, and solve the model's differintegral
//! equations by series.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use iterated_ab::analysis::{self, SuiteReport};
use iterated_ab::config::{FunctionSpec, RunConfig, SolutionReport};
use iterated_ab::ode::{self, Branch, QuadraticParams, RelaxationParams};
use iterated_ab::{
    iab_apply_sampled_diag, Error, FracPowerSeries, IteratedOrder, Multiplier, Result,
    SampledSignal, Tolerance,
};

#[derive(Parser)]
#[command(
    name = "iab",
    about = "Two-parameter iterated-AB fractional differintegrals: evaluation, verification, series ODE solving",
    version
)]
struct Cli {
    /// JSON run-configuration file; flags override individual fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Fractional order alpha in [0, 1)
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha: Option<f64>,

    /// Iteration order beta (positive integrates, negative differentiates)
    #[arg(long, global = true, allow_negative_numbers = true)]
    beta: Option<f64>,

    /// Number of grid points
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Absolute tail tolerance for series truncation
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,

    /// Output directory (falls back to $IAB_OUT_DIR, then the working directory)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Interval endpoints as "a,b"
    #[arg(long, global = true)]
    interval: Option<String>,

    /// Multiplier name (only "one" is built in)
    #[arg(long, global = true)]
    multiplier: Option<String>,

    /// Seed for the randomized suites
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the operator to a test function, writing (t, f, iab_f) CSV
    Eval {
        /// Function spec: const:VALUE, power:MU, or fps:ALPHA:C0,C1,...
        #[arg(long)]
        function: String,
    },
    /// Run a verification suite and write its JSON report
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// Solve an equation by the series method, writing JSON + CSV
    Solve {
        #[arg(long, value_enum)]
        equation: EquationKind,
        /// Constant term of the quadratic equation
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        constant: f64,
        /// Linear coefficient of the quadratic equation
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        linear: f64,
        /// Quadratic coefficient (zero switches to the linear path)
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        quadratic: f64,
        /// Root branch for the leading coefficient (default: smaller root)
        #[arg(long, value_enum)]
        branch: Option<BranchArg>,
        /// Damping constant of the relaxation equation
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        damping: f64,
        /// Forcing for the relaxation equation (same spec syntax as eval)
        #[arg(long)]
        forcing: Option<String>,
        /// Truncation order of the solution series
        #[arg(long, default_value_t = 40)]
        order: usize,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Suite {
    Semigroup,
    Laplace,
    Bounds,
    Reductions,
}

#[derive(Copy, Clone, ValueEnum)]
enum EquationKind {
    Quadratic,
    Relaxation,
}

#[derive(Copy, Clone, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("iab: {err}");
            match err {
                Error::Discriminant { .. } | Error::SingularDenominator { .. } => {
                    ExitCode::from(3)
                }
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let config = load_config(&cli)?;
    config.validate()?;
    let multiplier = Multiplier::by_name(&config.multiplier)?;
    let out_dir = config.resolve_out_dir();
    fs::create_dir_all(&out_dir)
        .map_err(|e| Error::Config(format!("cannot create output directory: {e}")))?;

    match &cli.command {
        Command::Eval { function } => {
            cmd_eval(&config, &multiplier, &out_dir, function)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite } => cmd_verify(&config, &multiplier, &out_dir, *suite),
        Command::Solve {
            equation,
            constant,
            linear,
            quadratic,
            branch,
            damping,
            forcing,
            order,
        } => {
            cmd_solve(
                &config,
                &multiplier,
                &out_dir,
                *equation,
                QuadraticParams {
                    constant: *constant,
                    linear: *linear,
                    quadratic: *quadratic,
                    branch: branch.map(|b| match b {
                        BranchArg::Plus => Branch::Plus,
                        BranchArg::Minus => Branch::Minus,
                    }),
                    truncation: *order,
                },
                *damping,
                forcing.as_deref(),
            )?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("bad config {}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(alpha) = cli.alpha {
        config.alpha = alpha;
    }
    if let Some(beta) = cli.beta {
        config.beta = beta;
    }
    if let Some(grid) = cli.grid {
        config.n_points = grid;
    }
    if let Some(tol) = cli.tol {
        config.tolerance = Tolerance::new(tol, config.tolerance.max_terms())?;
    }
    if let Some(out) = &cli.out {
        config.out_dir = Some(out.clone());
    }
    if let Some(interval) = &cli.interval {
        let parts: Vec<&str> = interval.split(',').collect();
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad interval '{interval}'")))
        };
        if parts.len() != 2 {
            return Err(Error::Config(format!("bad interval '{interval}'")));
        }
        config.interval = [parse(parts[0])?, parse(parts[1])?];
    }
    if let Some(multiplier) = &cli.multiplier {
        config.multiplier = multiplier.clone();
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn cmd_eval(
    config: &RunConfig,
    multiplier: &Multiplier,
    out_dir: &std::path::Path,
    function: &str,
) -> Result<()> {
    let spec = FunctionSpec::parse(function)?;
    spec.validate()?;
    let [a, b] = config.interval;
    let sig = SampledSignal::from_fn(a, b, config.n_points, |t| spec.eval(t))?;
    let ord = IteratedOrder::new(config.alpha, config.beta)?;
    let (mapped, diag) = iab_apply_sampled_diag(ord, multiplier, &sig, &config.tolerance)?;
    if diag.cancellation_warning {
        eprintln!(
            "iab: warning: series cancellation consumed >6 digits (max term {:.3e}, result scale {:.3e}); \
             shrink the interval or alpha for trustworthy values",
            diag.max_term, diag.result_scale
        );
    }
    let path = out_dir.join("eval.csv");
    let mut text = String::from("t,f,iab_f\n");
    for i in 0..sig.n_points() {
        text.push_str(&format!(
            "{},{},{}\n",
            sig.t(i),
            sig.values()[i],
            mapped.values()[i]
        ));
    }
    fs::write(&path, text).map_err(|e| Error::Config(format!("cannot write CSV: {e}")))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_verify(
    config: &RunConfig,
    multiplier: &Multiplier,
    out_dir: &std::path::Path,
    suite: Suite,
) -> Result<ExitCode> {
    let tol = config.tolerance;
    let report = match suite {
        Suite::Semigroup => analysis::semigroup_suite(multiplier, 200, config.seed, &tol)?,
        Suite::Laplace => analysis::laplace_suite(multiplier, &tol)?,
        Suite::Bounds => analysis::bounds_suite(multiplier, 50, config.seed, &tol)?,
        Suite::Reductions => analysis::reductions_suite(multiplier, &tol)?,
    };
    write_suite_report(config, out_dir, &report)?;
    let failures: Vec<_> = report.failures().collect();
    println!(
        "suite {}: {} checks, {} failures",
        report.suite,
        report.checks.len(),
        failures.len()
    );
    for f in &failures {
        println!(
            "FAIL {}: expected {} got {} (err {:.3e} > {:.3e})",
            f.input, f.expected, f.got, f.rel_err, f.threshold
        );
    }
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn write_suite_report(
    config: &RunConfig,
    out_dir: &std::path::Path,
    report: &SuiteReport,
) -> Result<()> {
    #[derive(serde::Serialize)]
    struct FullReport<'a> {
        config: &'a RunConfig,
        #[serde(flatten)]
        report: &'a SuiteReport,
    }
    let path = out_dir.join(format!("verify_{}.json", report.suite));
    let body = serde_json::to_string_pretty(&FullReport { config, report })
        .map_err(|e| Error::Config(format!("cannot serialize report: {e}")))?;
    fs::write(&path, body).map_err(|e| Error::Config(format!("cannot write report: {e}")))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn forcing_series(config: &RunConfig, forcing: Option<&str>) -> Result<FracPowerSeries> {
    let spec = match forcing {
        Some(text) => FunctionSpec::parse(text)?,
        None => return Err(Error::Config("relaxation needs --forcing".into())),
    };
    spec.validate()?;
    match spec {
        FunctionSpec::Const { value } => FracPowerSeries::constant(config.alpha, value, 0.0),
        FunctionSpec::Fps { alpha, coeffs } => {
            if (alpha - config.alpha).abs() > 1e-12 {
                return Err(Error::Config(format!(
                    "forcing base order {alpha} must match alpha {}",
                    config.alpha
                )));
            }
            FracPowerSeries::new(alpha, 0.0, coeffs)
        }
        FunctionSpec::Power { mu } => {
            // representable only when mu is a multiple of alpha
            let steps = mu / config.alpha;
            let n = steps.round();
            if (steps - n).abs() > 1e-12 || n < 0.0 {
                return Err(Error::Config(format!(
                    "forcing t^{mu} is outside the alpha = {} series class; \
                     project it onto the ansatz first",
                    config.alpha
                )));
            }
            let mut coeffs = vec![0.0; n as usize + 1];
            coeffs[n as usize] = 1.0;
            FracPowerSeries::new(config.alpha, 0.0, coeffs)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    config: &RunConfig,
    multiplier: &Multiplier,
    out_dir: &std::path::Path,
    equation: EquationKind,
    quad: QuadraticParams,
    damping: f64,
    forcing: Option<&str>,
) -> Result<()> {
    let ord = IteratedOrder::new(config.alpha, config.beta)?;
    let solved = match equation {
        EquationKind::Quadratic => {
            if quad.quadratic == 0.0 {
                ode::solve_linear(ord, multiplier, quad.constant, quad.linear, quad.truncation)?
            } else {
                ode::solve_quadratic(ord, multiplier, &quad)?
            }
        }
        EquationKind::Relaxation => {
            let forcing = forcing_series(config, forcing)?;
            ode::solve_relaxation(
                ord,
                multiplier,
                &RelaxationParams {
                    damping,
                    forcing,
                    truncation: quad.truncation,
                },
            )?
        }
    };

    let report = SolutionReport {
        alpha: config.alpha,
        beta: config.beta,
        coeffs: solved.solution.coeffs().to_vec(),
        residual_max: solved.residual_max(),
        branch: solved.branch_used.map(|b| b.as_str().to_string()),
    };
    let json_path = out_dir.join("solution.json");
    let body = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Config(format!("cannot serialize solution: {e}")))?;
    fs::write(&json_path, body).map_err(|e| Error::Config(format!("cannot write JSON: {e}")))?;

    let csv_path = out_dir.join("solution.csv");
    let [a, b] = config.interval;
    let sampled = if a == 0.0 {
        solved.solution.sample(b, config.n_points)?
    } else {
        // solution series originates at 0; sample its own domain
        solved.solution.sample(b.max(1.0), config.n_points)?
    };
    let mut text = String::from("t,value\n");
    for i in 0..sampled.n_points() {
        text.push_str(&format!("{},{}\n", sampled.t(i), sampled.values()[i]));
    }
    fs::write(&csv_path, text).map_err(|e| Error::Config(format!("cannot write CSV: {e}")))?;

    println!("wrote {}", json_path.display());
    println!("wrote {}", csv_path.display());
    Ok(())
}
