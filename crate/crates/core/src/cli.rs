//! Command-line front end.
//!
//! Every subcommand renders its result to a string so that runs can be
//! compared byte for byte. JSON documents carry the resolved configuration
//! under `"config"`; CSV output is preceded by nothing, and the configuration
//! goes to standard error instead.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::klbasis::{sample_normals, tau_truncated, write_values_csv, DEFAULT_MODES};
use crate::measure::{dstar_norm, m_norm_sq, MeasureSpec, SignedMeasure};
use crate::nonnuclear::{
    choose_nu, comb_eigenvalue_table, default_lambda_grid, majorization_check, omega_convergence_report,
    write_comb_csv,
};
use crate::quadform::{
    analytic_moments, cdf_grid, compare_laws, measure_moments, sample_series, series_from_spectrum, MomentSummary,
};
use crate::report::{fmt_f64, to_json_string};
use crate::spectral::{
    find_eigenvalues, galerkin_eigenvalues, galerkin_matrix, hs_norm_sq, trace, BoundaryCondition, Spectrum,
    DEFAULT_GALERKIN_SIZE,
};

#[derive(Debug, Clone, Parser)]
#[command(name = "wiener-quad", version, about = "Quadratic functionals of the Wiener process with signed weights")]
pub struct Cli {
    /// Worker threads (default: all cores); results do not depend on it
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bc {
    Dirichlet,
    Neumann,
}

impl From<Bc> for BoundaryCondition {
    fn from(b: Bc) -> Self {
        match b {
            Bc::Dirichlet => BoundaryCondition::Dirichlet,
            Bc::Neumann => BoundaryCondition::Neumann,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Shooting,
    Galerkin,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    /// Dirichlet eigenvalues of the combs ρ_n
    CombTable,
    /// sup-distance between comb shooting functions and their limit
    Omega,
    /// full problem against the dyadic Dirichlet sub-problem
    Majorization,
    /// comb sizes meeting the 2πm·ln m schedule
    ChooseNu,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Dual and M norms of the weight
    Norms(MeasureArgs),
    /// Eigenvalues of -y'' = λρy, y(0) = 0
    Spectrum(SpectrumArgs),
    /// Monte Carlo of the truncated double series
    Simulate(SimulateArgs),
    /// Spectrum, chi-square series, moments, CDF and a two-sample check
    Distribution(DistributionArgs),
    /// Comb constructions
    Nonnuclear(NonnuclearArgs),
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct MeasureSource {
    /// Inline JSON: {"atoms":[{"x":..,"w":..}],"density":{"breakpoints":[..],"values":[..]}}
    #[arg(long)]
    pub measure: Option<String>,
    #[arg(long)]
    pub measure_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub source: MeasureSource,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: MeasureSource,
    #[arg(long, value_enum, default_value_t = Bc::Neumann)]
    pub bc: Bc,
    #[arg(long, default_value_t = 10)]
    pub m_max: usize,
    #[arg(long, default_value_t = 1e4)]
    pub lambda_max: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Shooting)]
    pub method: MethodArg,
    #[arg(long, default_value_t = DEFAULT_GALERKIN_SIZE)]
    pub galerkin_size: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: MeasureSource,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub draws: usize,
    #[arg(long, default_value_t = DEFAULT_MODES)]
    pub modes: usize,
    /// Include per-draw values (always included with --format csv)
    #[arg(long)]
    pub dump: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DistributionArgs {
    #[command(flatten)]
    pub source: MeasureSource,
    #[arg(long, value_enum, default_value_t = Bc::Neumann)]
    pub bc: Bc,
    #[arg(long, default_value_t = 2000)]
    pub m_max: usize,
    #[arg(long, default_value_t = 1e9)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub draws: usize,
    #[arg(long, default_value_t = DEFAULT_MODES)]
    pub modes: usize,
    #[arg(long, default_value_t = 200)]
    pub grid_points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct NonnuclearArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Comb sizes for comb-table and omega
    #[arg(long, value_delimiter = ',', default_value = "50,100,200,500")]
    pub n_list: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub m_max: usize,
    /// Dyadic level N for majorization
    #[arg(long, default_value_t = 1)]
    pub level: u32,
    /// Comb size n for majorization
    #[arg(long, default_value_t = 50)]
    pub teeth: usize,
    /// Number of levels for choose-nu
    #[arg(long, default_value_t = 3)]
    pub depth: u32,
    #[arg(long, default_value_t = 0.05)]
    pub margin: f64,
}

impl MeasureSource {
    fn load(&self) -> Result<(MeasureSpec, SignedMeasure<f64>)> {
        let text = match (&self.measure, &self.measure_file) {
            (Some(s), _) => s.clone(),
            (None, Some(p)) => std::fs::read_to_string(p)?,
            (None, None) => return Err(Error::InvalidArgument("no measure given".into())),
        };
        let spec = MeasureSpec::from_json(&text)?;
        let rho = spec.build()?;
        Ok((MeasureSpec::from(&rho), rho))
    }
}

/// Rendered output together with the configuration echo.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub body: String,
    pub config: Value,
}

fn document(config: &Value, result: Value) -> String {
    to_json_string(&json!({ "config": config, "result": result }))
}

fn to_value<S: Serialize>(s: &S) -> Value {
    serde_json::to_value(s).expect("serializable")
}

/// Runs a parsed command on the current thread pool.
pub fn execute(cli: &Cli) -> Result<Rendered> {
    let fmt = cli.format;
    match &cli.command {
        Command::Norms(a) => norms(a, fmt),
        Command::Spectrum(a) => spectrum(a, fmt),
        Command::Simulate(a) => simulate(a, fmt),
        Command::Distribution(a) => distribution(a, fmt),
        Command::Nonnuclear(a) => nonnuclear(a, fmt),
    }
}

/// Runs inside a pool of `--threads` workers if requested.
pub fn run(cli: &Cli) -> Result<Rendered> {
    match cli.threads {
        Some(n) => {
            if n == 0 {
                return Err(Error::InvalidArgument("--threads must be at least 1".into()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            pool.install(|| execute(cli))
        }
        None => execute(cli),
    }
}

/// Machine-readable error document.
pub fn error_json(e: &Error) -> String {
    to_json_string(&json!({ "error": { "kind": e.code(), "message": e.to_string() } }))
}

fn norms(a: &MeasureArgs, fmt: Format) -> Result<Rendered> {
    let (spec, rho) = a.source.load()?;
    let config = json!({ "command": "norms", "measure": spec });
    let d = dstar_norm(&rho);
    let m = m_norm_sq(&rho);
    let body = match fmt {
        Format::Json => document(&config, json!({ "dstar_norm": d, "m_norm_sq": m })),
        Format::Csv => format!("name,value\ndstar_norm,{}\nm_norm_sq,{}\n", fmt_f64(d), fmt_f64(m)),
    };
    Ok(Rendered { body, config })
}

fn spectrum_value(s: &Spectrum<f64>, rho: &SignedMeasure<f64>) -> Value {
    let bc = s.bc;
    let hs = match bc {
        BoundaryCondition::Neumann => hs_norm_sq(rho),
        BoundaryCondition::Dirichlet => galerkin_matrix(rho, DEFAULT_GALERKIN_SIZE, bc).frobenius_sq(),
    };
    json!({
        "positive": s.positive,
        "negative": s.negative,
        "method": s.method,
        "window": s.window,
        "trace_estimate": s.all().map(|l| 1.0 / l).sum::<f64>(),
        "trace": trace(rho, bc),
        "hs_norm_sq": hs,
        "bc": bc,
        "positive_exhausted": s.positive_exhausted,
        "negative_exhausted": s.negative_exhausted,
        "multiplicity_suspected": s.multiplicity_suspected,
    })
}

fn spectrum_csv(out: &mut String, s: &Spectrum<f64>) {
    let method = match s.method {
        crate::spectral::Method::Shooting => "shooting",
        crate::spectral::Method::Galerkin => "galerkin",
    };
    for (sign, list) in [("+", &s.positive), ("-", &s.negative)] {
        for (i, l) in list.iter().enumerate() {
            let _ = writeln!(out, "{method},{sign},{},{}", i + 1, fmt_f64(*l));
        }
    }
}

// largest relative difference between matched eigenvalues of the two methods
fn agreement(a: &Spectrum<f64>, b: &Spectrum<f64>) -> (usize, f64) {
    let mut k = 0;
    let mut worst = 0.0f64;
    for (x, y) in a.positive.iter().zip(&b.positive).chain(a.negative.iter().zip(&b.negative)) {
        k += 1;
        worst = worst.max(((x - y) / x).abs());
    }
    (k, worst)
}

fn spectrum(a: &SpectrumArgs, fmt: Format) -> Result<Rendered> {
    let (spec, rho) = a.source.load()?;
    let bc: BoundaryCondition = a.bc.into();
    let config = json!({
        "command": "spectrum",
        "measure": spec,
        "bc": a.bc,
        "m_max": a.m_max,
        "lambda_max": a.lambda_max,
        "method": a.method,
        "galerkin_size": a.galerkin_size,
    });
    let shoot = || find_eigenvalues(&rho, bc, a.m_max, a.lambda_max);
    let galer = || -> Result<Spectrum<f64>> {
        if !(a.lambda_max > 0.0) {
            return Err(Error::InvalidWindow(a.lambda_max));
        }
        Ok(galerkin_eigenvalues(&rho, bc, a.galerkin_size, a.m_max, a.lambda_max))
    };
    let spectra: Vec<Spectrum<f64>> = match a.method {
        MethodArg::Shooting => vec![shoot()?],
        MethodArg::Galerkin => vec![galer()?],
        MethodArg::Both => vec![shoot()?, galer()?],
    };
    let body = match fmt {
        Format::Json => {
            let result = if spectra.len() == 1 {
                spectrum_value(&spectra[0], &rho)
            } else {
                let (k, worst) = agreement(&spectra[0], &spectra[1]);
                json!({
                    "shooting": spectrum_value(&spectra[0], &rho),
                    "galerkin": spectrum_value(&spectra[1], &rho),
                    "agreement": { "compared": k, "max_relative_diff": worst },
                })
            };
            document(&config, result)
        }
        Format::Csv => {
            let mut out = String::from("method,sign,index,lambda\n");
            for s in &spectra {
                spectrum_csv(&mut out, s);
            }
            out
        }
    };
    Ok(Rendered { body, config })
}

fn simulate(a: &SimulateArgs, fmt: Format) -> Result<Rendered> {
    let (spec, rho) = a.source.load()?;
    let config = json!({
        "command": "simulate",
        "measure": spec,
        "seed": a.seed,
        "draws": a.draws,
        "modes": a.modes,
        "cutoff": a.modes.saturating_sub(1),
        "dump": a.dump,
    });
    let ens = sample_normals(a.seed, a.draws, a.modes)?;
    let values = tau_truncated(&rho, &ens, a.modes - 1)?;
    let body = match fmt {
        Format::Json => {
            let mut result = json!({
                "moments": MomentSummary::from_sample(&values),
                "exact": measure_moments(&rho),
            });
            if a.dump {
                result["values"] = to_value(&values);
            }
            document(&config, result)
        }
        Format::Csv => {
            let mut buf = Vec::new();
            write_values_csv(&mut buf, &values)?;
            String::from_utf8(buf).expect("ascii output")
        }
    };
    Ok(Rendered { body, config })
}

fn distribution(a: &DistributionArgs, fmt: Format) -> Result<Rendered> {
    let (spec, rho) = a.source.load()?;
    let bc: BoundaryCondition = a.bc.into();
    let config = json!({
        "command": "distribution",
        "measure": spec,
        "bc": a.bc,
        "m_max": a.m_max,
        "lambda_max": a.lambda_max,
        "seed": a.seed,
        "draws": a.draws,
        "modes": a.modes,
        "grid_points": a.grid_points,
    });
    if rho.is_zero() {
        let body = match fmt {
            Format::Json => document(
                &config,
                json!({
                    "mean": 0.0, "variance": 0.0, "second_moment": 0.0,
                    "weights_used": 0, "tail_trace": 0.0,
                    "cdf_grid": [[0.0, 1.0]], "degenerate": true,
                }),
            ),
            Format::Csv => format!("x,p\n{},{}\n", fmt_f64(0.0), fmt_f64(1.0)),
        };
        return Ok(Rendered { body, config });
    }
    let spectrum = find_eigenvalues(&rho, bc, a.m_max, a.lambda_max)?;
    let series = series_from_spectrum(&spectrum, &rho)?;
    let analytic = analytic_moments(&series);
    let grid = cdf_grid(&series, a.grid_points)?;
    let body = match fmt {
        Format::Json => {
            let series_sample = sample_series(&series, a.draws, a.seed);
            let series_mc = MomentSummary::from_sample(&series_sample);
            // the path route realizes the free right end only
            let path = if bc == BoundaryCondition::Neumann {
                let ens = sample_normals(a.seed, a.draws, a.modes)?;
                let values = tau_truncated(&rho, &ens, a.modes - 1)?;
                let ks = compare_laws(&series_sample, &values)?;
                let mc = MomentSummary::from_sample(&values);
                json!({ "moments": mc, "ks": ks })
            } else {
                Value::Null
            };
            let exact = (bc == BoundaryCondition::Neumann).then(|| measure_moments(&rho));
            document(
                &config,
                json!({
                    "mean": analytic.mean,
                    "variance": analytic.variance,
                    "second_moment": analytic.second_moment,
                    "weights_used": series.len(),
                    "tail_trace": series.tail_trace,
                    "tail_variance": series.tail_variance,
                    "cdf_grid": grid.iter().map(|(x, p)| [*x, *p]).collect::<Vec<_>>(),
                    "measure_moments": exact,
                    "series_monte_carlo": series_mc,
                    "path_route": path,
                    "window_exhausted": spectrum.positive_exhausted && spectrum.negative_exhausted,
                }),
            )
        }
        Format::Csv => {
            let mut out = String::from("x,p\n");
            for (x, p) in &grid {
                let _ = writeln!(out, "{},{}", fmt_f64(*x), fmt_f64(*p));
            }
            out
        }
    };
    Ok(Rendered { body, config })
}

fn nonnuclear(a: &NonnuclearArgs, fmt: Format) -> Result<Rendered> {
    let mut config = json!({ "command": "nonnuclear", "kind": a.kind });
    let body = match a.kind {
        Kind::CombTable => {
            config["n_list"] = to_value(&a.n_list);
            config["m_max"] = to_value(&a.m_max);
            let rows = comb_eigenvalue_table(&a.n_list, a.m_max)?;
            match fmt {
                Format::Json => document(&config, to_value(&rows)),
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_comb_csv(&mut buf, &rows)?;
                    String::from_utf8(buf).expect("ascii output")
                }
            }
        }
        Kind::Omega => {
            config["n_list"] = to_value(&a.n_list);
            config["grid"] = json!({ "from": -20.0, "to": 20.0, "points": 401 });
            let rows = omega_convergence_report(&a.n_list, &default_lambda_grid());
            match fmt {
                Format::Json => document(&config, to_value(&rows)),
                Format::Csv => {
                    let mut out = String::from("n,sup_gap,at_lambda\n");
                    for r in &rows {
                        let _ = writeln!(out, "{},{},{}", r.n, fmt_f64(r.sup_gap), fmt_f64(r.at_lambda));
                    }
                    out
                }
            }
        }
        Kind::Majorization => {
            config["level"] = to_value(&a.level);
            config["teeth"] = to_value(&a.teeth);
            config["m_max"] = to_value(&a.m_max);
            if a.level == 0 || a.teeth == 0 {
                return Err(Error::InvalidArgument("level and teeth must be at least 1".into()));
            }
            let rows = majorization_check(a.level, a.teeth, a.m_max)?;
            match fmt {
                Format::Json => document(&config, to_value(&rows)),
                Format::Csv => {
                    let mut out = String::from("level,n,m,full,sub_rescaled,sub_direct,holds\n");
                    for r in &rows {
                        let _ = writeln!(
                            out,
                            "{},{},{},{},{},{},{}",
                            r.level,
                            r.n,
                            r.m,
                            fmt_f64(r.full),
                            fmt_f64(r.sub_rescaled),
                            fmt_f64(r.sub_direct),
                            r.holds
                        );
                    }
                    out
                }
            }
        }
        Kind::ChooseNu => {
            config["depth"] = to_value(&a.depth);
            config["margin"] = to_value(&a.margin);
            let report = choose_nu(a.depth, a.margin)?;
            match fmt {
                Format::Json => document(&config, to_value(&report)),
                Format::Csv => {
                    let mut out = String::from("m,lambda,sub_bound,target,checked,ok\n");
                    for r in &report.table {
                        let _ = writeln!(
                            out,
                            "{},{},{},{},{},{}",
                            r.m,
                            fmt_f64(r.lambda),
                            r.sub_bound.map(fmt_f64).unwrap_or_default(),
                            fmt_f64(r.target),
                            r.checked,
                            r.ok
                        );
                    }
                    out
                }
            }
        }
    };
    Ok(Rendered { body, config })
}
