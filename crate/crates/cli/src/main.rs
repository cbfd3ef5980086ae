mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use bessel_struve::kernel::{kernel_integral, kernel_series};
use bessel_struve::numerics::DEFAULT_NODES;
use bessel_struve::paley_wiener::{complex_scan, fit_exponential_type, fit_poly_exp, ScanGrid, ScanSource};
use bessel_struve::par::Execution;
use bessel_struve::verify::{run_suite, Suite};
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use config::{Source, UsageError};
use output::{emit, Csv};

#[derive(Parser)]
#[command(name = "bs", version, about = "Bessel-Struve kernels, transforms and property checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate S_λ^α(x) by the series and integral routes.
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        /// Spectral parameter, e.g. 1, -2i, 1+i.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// x values as min:max:steps.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run property suites and write a JSON report.
    Verify {
        /// kernel, intertwine, transforms, paley-wiener or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Replace every property tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transform over a complex rectangle and fit a growth envelope.
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        /// JSON descriptor (poly_bump, exp_bump or dirac), or @file.
        #[arg(long)]
        function: String,
        /// Re z as min:max:steps.
        #[arg(long, allow_hyphen_values = true)]
        re: String,
        /// Im z as min:max:steps.
        #[arg(long, allow_hyphen_values = true)]
        im: String,
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
        /// CSV path; the fit goes to <out>.fit.json unless --fit-out is given.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        fit_out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("cannot write output: {e}"))
    }
}

fn numerical(e: bessel_struve::Error) -> Failure {
    Failure::Numerical(e.to_string())
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("BS_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("BS_THREADS must be a positive integer (got '{v}')")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn cmd_kernel(alpha: f64, lambda: &str, grid: &str, nodes: usize, out: Option<PathBuf>) -> Result<(), Failure> {
    let order = config::order(alpha)?;
    let lambda = config::complex(lambda)?;
    let axis = config::grid(grid, 1)?;
    let nodes = config::nodes(nodes)?;
    let xs = axis.values();
    let rows = bessel_struve::par::try_map(&xs, Execution::Parallel, |&x| {
        let x = Complex64::new(x, 0.0);
        let s = kernel_series(&order, lambda, x)?.value;
        let q = kernel_integral(&order, lambda, x, nodes)?.value;
        Ok([x.re, s.re, s.im, q.re, q.im, (s - q).norm()])
    })
    .map_err(numerical)?;
    let mut csv = Csv::new(&["x", "re_series", "im_series", "re_integral", "im_integral", "abs_diff"]);
    for r in &rows {
        csv.row(r);
    }
    emit(out.as_deref(), &csv.finish())?;
    Ok(())
}

fn cmd_verify(suite: &str, tol: Option<f64>, out: Option<PathBuf>) -> Result<(), Failure> {
    let which: Suite = suite.parse().map_err(|e: bessel_struve::Error| Failure::Usage(e.to_string()))?;
    let tol = tol.map(config::tol).transpose()?;
    let results = run_suite(which, tol, Execution::Parallel);
    let pass = results.iter().all(|r| r.pass);
    let report = json!({
        "suite": suite,
        "pass": pass,
        "properties": serde_json::to_value(&results).expect("results serialize"),
    });
    emit(out.as_deref(), &output::json(&report))?;
    if pass {
        Ok(())
    } else {
        let failed: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
        Err(Failure::Numerical(format!("failed properties: {}", failed.join(", "))))
    }
}

struct ScanArgs {
    alpha: f64,
    function: String,
    re: String,
    im: String,
    nodes: usize,
    out: Option<PathBuf>,
    fit_out: Option<PathBuf>,
}

fn cmd_scan(a: ScanArgs) -> Result<(), Failure> {
    let order = config::order(a.alpha)?;
    let source = config::source(&a.function)?;
    let grid = ScanGrid {
        re: config::grid(&a.re, 2)?,
        im: config::grid(&a.im, 2)?,
    };
    let nodes = config::nodes(a.nodes)?;
    let scan_source = match &source {
        Source::Function(f) => ScanSource::Function(f),
        Source::Dirac(t) => ScanSource::Dirac(t),
    };
    let mut samples = complex_scan(scan_source, &order, &grid, nodes, Execution::Parallel).map_err(numerical)?;
    samples.input = a.function.clone();
    let mut csv = Csv::new(&["re_z", "im_z", "re_F", "im_F", "abs_F"]);
    for (z, v) in samples.iter() {
        csv.row(&[z.re, z.im, v.re, v.im, v.norm()]);
    }
    emit(a.out.as_deref(), &csv.finish())?;
    let fit = match source {
        Source::Function(_) => fit_exponential_type(&samples),
        Source::Dirac(_) => fit_poly_exp(&samples),
    }
    .map_err(numerical)?;
    let text = output::json(&serde_json::to_value(fit).expect("fit serializes"));
    let fit_path = a.fit_out.or_else(|| {
        a.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".fit.json");
            PathBuf::from(s)
        })
    });
    match fit_path {
        Some(p) => std::fs::write(p, text)?,
        None => eprint!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_threads()?;
    match cli.command {
        Command::Kernel { alpha, lambda, grid, nodes, out } => cmd_kernel(alpha, &lambda, &grid, nodes, out),
        Command::Verify { suite, tol, out } => cmd_verify(&suite, tol, out),
        Command::Scan { alpha, function, re, im, nodes, out, fit_out } => cmd_scan(ScanArgs {
            alpha,
            function,
            re,
            im,
            nodes,
            out,
            fit_out,
        }),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
