//! Command-line driver: reproducible simulation, polynomial extraction, and
//! degree computation with CSV (default) or JSON output.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use qdeg::degree::{approx_degree, lower_bound_check, minimax_error, theorem_band};
use qdeg::error::{Error, Result};
use qdeg::exec::{run_sampled, EnumConfig, Pooling};
use qdeg::grover::PhaseOracle;
use qdeg::polyx::{
    acceptance_surface, mobius_transform, symmetrize, PolyDump, DEFAULT_ENUM_BUDGET,
};
use qdeg::qsym::{compute_symmetric, enumerate_symmetric_input, query_budget};
use qdeg::symfun::{jump_parameter, make_named, Family, SymmetricFunction};

#[derive(Parser)]
#[command(name = "qdeg", version, about = "Grover-based symmetric-function \
algorithms and eps-approximate degrees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the weight-classification algorithm on every n-bit input.
    Simulate(SimulateArgs),
    /// Extract the algorithm's acceptance probability as a polynomial.
    Extract(ExtractArgs),
    /// Compute eps-approximate degrees (single rows or a scaling band).
    Degree(DegreeArgs),
}

#[derive(Args)]
struct FunctionArgs {
    /// or | and | parity | majority | threshold<t>
    #[arg(long)]
    family: Option<Family>,
    /// Spectrum text file: "n= <int>" then n+1 bits.
    #[arg(long)]
    spectrum_file: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
}

impl FunctionArgs {
    fn load(&self) -> Result<(String, SymmetricFunction)> {
        match (&self.family, &self.spectrum_file) {
            (Some(fam), None) => {
                let n = self
                    .n
                    .ok_or_else(|| Error::Parameter("--family requires --n".into()))?;
                Ok((fam.to_string(), make_named(*fam, n)?))
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parameter(format!("{}: {e}", path.display())))?;
                let f = SymmetricFunction::parse(&text)?;
                if let Some(n) = self.n {
                    if n != f.n() {
                        return Err(Error::Parameter(format!(
                            "--n {n} disagrees with spectrum file (n = {})",
                            f.n()
                        )));
                    }
                }
                Ok(("custom".into(), f))
            }
            _ => Err(Error::Parameter(
                "give exactly one of --family or --spectrum-file".into(),
            )),
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit JSON instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Sample,
    Enumerate,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    function: FunctionArgs,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = Mode::Enumerate)]
    mode: Mode,
    /// RNG seed for sample mode.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum n for enumerate mode (env: QDEG_BUDGET).
    #[arg(long)]
    budget: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ExtractArgs {
    #[command(flatten)]
    function: FunctionArgs,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    eps: f64,
    /// Maximum n for enumeration (env: QDEG_BUDGET).
    #[arg(long)]
    budget: Option<usize>,
    /// Coefficient truncation tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct DegreeArgs {
    /// or | and | parity | majority | threshold<t>
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    spectrum_file: Option<PathBuf>,
    /// Grid of input sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Grid of error bounds, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0 / 3.0])]
    eps: Vec<f64>,
    /// Emit the scaling-band summary instead of per-point rows.
    #[arg(long)]
    band: bool,
    /// Also run the OR-embedding lower-bound consistency check per row.
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    output: OutputArgs,
}

fn default_budget(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("QDEG_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_ENUM_BUDGET)
}

fn emit(output: &OutputArgs, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Parameter(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct SimulateRow {
    input: String,
    weight: usize,
    expected: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    outcome: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_mass: Option<f64>,
    grover_queries: u64,
    verify_queries: u64,
    within_eps: bool,
}

#[derive(Serialize)]
struct Summary<T: Serialize> {
    rows: Vec<T>,
    passed: bool,
}

fn cmd_simulate(args: &SimulateArgs) -> Result<bool> {
    let (_, f) = args.function.load()?;
    let n = f.n();
    let eps = args.eps;
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::Parameter(format!("eps {eps} out of range (0, 1)")));
    }
    let budget = default_budget(args.budget);
    if args.mode == Mode::Enumerate && n > budget {
        return Err(Error::Resource {
            reason: format!("n = {n} exceeds enumeration budget {budget}"),
            partial_mass: 0.0,
        });
    }
    let budget_bound = query_budget(n, jump_parameter(&f)?, eps);
    let rows: Vec<SimulateRow> = (0..1u64 << n)
        .map(|mask| {
            let weight = mask.count_ones() as usize;
            let expected = f.value_at_weight(weight);
            match args.mode {
                Mode::Enumerate => {
                    let rep = enumerate_symmetric_input(&f, mask, eps, &EnumConfig::pooled())?;
                    Ok(SimulateRow {
                        input: format!("{mask:0n$b}"),
                        weight,
                        expected,
                        outcome: None,
                        error_mass: Some(rep.error_mass),
                        grover_queries: rep.max_queries.grover,
                        verify_queries: rep.max_queries.verify,
                        within_eps: rep.error_mass <= eps + 1e-12
                            && rep.max_queries.total() <= budget_bound,
                    })
                }
                Mode::Sample => {
                    let (out, q) =
                        run_sampled(args.seed.wrapping_add(mask), Pooling::ByIdentity, |ctx| {
                            let mut oracle = PhaseOracle::from_mask(n, mask);
                            let v = compute_symmetric(&f, &mut oracle, eps, ctx)?;
                            Ok((v, oracle.query_counts()))
                        })?;
                    Ok(SimulateRow {
                        input: format!("{mask:0n$b}"),
                        weight,
                        expected,
                        outcome: Some(out),
                        error_mass: None,
                        grover_queries: q.grover,
                        verify_queries: q.verify,
                        within_eps: q.total() <= budget_bound,
                    })
                }
            }
        })
        .collect::<Result<_>>()?;
    let passed = rows.iter().all(|r| r.within_eps);
    let text = if args.output.json {
        let mut s = serde_json::to_string_pretty(&Summary { rows, passed }).unwrap();
        s.push('\n');
        s
    } else {
        let mut s = String::from(
            "input,weight,expected,outcome,error_mass,grover_queries,verify_queries,within_eps\n",
        );
        for r in &rows {
            let outcome = r.outcome.map_or(String::new(), |o| o.to_string());
            let mass = r.error_mass.map_or(String::new(), |m| format!("{m:.12}"));
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                r.input,
                r.weight,
                r.expected,
                outcome,
                mass,
                r.grover_queries,
                r.verify_queries,
                r.within_eps
            );
        }
        let _ = writeln!(s, "# passed={passed}");
        s
    };
    emit(&args.output, &text)?;
    Ok(passed)
}

#[derive(Serialize)]
struct ExtractReport {
    family: String,
    n: usize,
    eps: f64,
    multilinear: PolyDump,
    symmetrized: PolyDump,
    max_grover_queries: u64,
    max_verify_queries: u64,
    /// 2 x worst-case total oracle applications.
    two_t: u64,
    degree_within_two_t: bool,
    pointwise_eps_approx: bool,
}

fn cmd_extract(args: &ExtractArgs) -> Result<bool> {
    let (name, f) = args.function.load()?;
    let n = f.n();
    let eps = args.eps;
    let budget = default_budget(args.budget);
    let surface = acceptance_surface(n, budget, &EnumConfig::pooled(), |mask, ctx| {
        let mut oracle = PhaseOracle::from_mask(n, mask);
        let out = compute_symmetric(&f, &mut oracle, eps, ctx)?;
        Ok((out, oracle.query_counts()))
    })?;
    let poly = mobius_transform(&surface.table);
    let uni = symmetrize(&surface.table);
    let multilinear = PolyDump::from_multilinear(&poly, args.tol);
    let symmetrized = PolyDump::from_univariate(&uni, args.tol);
    let two_t = 2 * surface.max_queries.total();
    let pointwise_eps_approx = surface
        .table
        .values
        .iter()
        .enumerate()
        .all(|(mask, &p)| {
            let fx = f.value_at_weight((mask as u64).count_ones() as usize) as f64;
            (p - fx).abs() <= eps + 1e-9
        });
    let report = ExtractReport {
        family: name,
        n,
        eps,
        degree_within_two_t: (multilinear.degree as u64) <= two_t,
        multilinear,
        symmetrized,
        max_grover_queries: surface.max_queries.grover,
        max_verify_queries: surface.max_queries.verify,
        two_t,
        pointwise_eps_approx,
    };
    let passed = report.degree_within_two_t && report.pointwise_eps_approx;
    let text = if args.output.json {
        let mut s = serde_json::to_string_pretty(&report).unwrap();
        s.push('\n');
        s
    } else {
        let mut s = String::from("section,index,value\n");
        for (i, c) in report.multilinear.coefficients.iter().enumerate() {
            let _ = writeln!(s, "monomial,{i:0n$b},{c:.12}");
        }
        for (j, c) in report.symmetrized.coefficients.iter().enumerate() {
            let _ = writeln!(s, "chebyshev,{j},{c:.12}");
        }
        let _ = writeln!(s, "summary,multilinear_degree,{}", report.multilinear.degree);
        let _ = writeln!(s, "summary,symmetrized_degree,{}", report.symmetrized.degree);
        let _ = writeln!(s, "summary,two_t,{two_t}");
        let _ = writeln!(s, "summary,degree_within_two_t,{}", report.degree_within_two_t);
        let _ = writeln!(
            s,
            "summary,pointwise_eps_approx,{}",
            report.pointwise_eps_approx
        );
        let _ = writeln!(s, "# passed={passed}");
        s
    };
    emit(&args.output, &text)?;
    Ok(passed)
}

#[derive(Serialize)]
struct DegreeRow {
    family: String,
    n: usize,
    eps: f64,
    deg_eps: usize,
    deg_13: usize,
    e_star: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    embedded_or_m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower_bound_ok: Option<bool>,
}

fn cmd_degree(args: &DegreeArgs) -> Result<bool> {
    if args.band {
        let family = args.family.ok_or_else(|| {
            Error::Parameter("--band requires --family (named grids only)".into())
        })?;
        let report = theorem_band(family, &args.n, &args.eps)?;
        let passed = report.monotone_in_n && report.monotone_in_inv_eps;
        let text = if args.output.json {
            let mut s = serde_json::to_string_pretty(&report).unwrap();
            s.push('\n');
            s
        } else {
            let mut s =
                String::from("family,n,t,eps,deg_eps,deg_13,ratio,paturi_ratio,e_star\n");
            for r in &report.rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{:.6},{:.6},{:.9}",
                    r.family, r.n, r.t, r.eps, r.deg_eps, r.deg_13, r.ratio, r.paturi_ratio,
                    r.e_star
                );
            }
            let _ = writeln!(s, "# ratio_min={:.6}", report.ratio_min);
            let _ = writeln!(s, "# ratio_max={:.6}", report.ratio_max);
            let _ = writeln!(s, "# passed={passed}");
            s
        };
        emit(&args.output, &text)?;
        return Ok(passed);
    }

    let function = FunctionArgs {
        family: args.family,
        spectrum_file: args.spectrum_file.clone(),
        n: None,
    };
    // Grid in config order; worker pool only reorders completion, not output.
    let grid: Vec<(usize, f64)> = args
        .n
        .iter()
        .flat_map(|&n| args.eps.iter().map(move |&e| (n, e)))
        .collect();
    let rows: Vec<DegreeRow> = grid
        .par_iter()
        .map(|&(n, eps)| {
            let (name, f) = match (&function.family, &function.spectrum_file) {
                (Some(fam), None) => (fam.to_string(), make_named(*fam, n)?),
                (None, Some(_)) => {
                    let (name, f) = function.load()?;
                    if f.n() != n {
                        return Err(Error::Parameter(format!(
                            "spectrum file has n = {}, grid asked for {n}",
                            f.n()
                        )));
                    }
                    (name, f)
                }
                _ => {
                    return Err(Error::Parameter(
                        "give exactly one of --family or --spectrum-file".into(),
                    ))
                }
            };
            let deg_eps = approx_degree(&f, eps)?;
            let deg_13 = approx_degree(&f, 1.0 / 3.0)?;
            let e_star = minimax_error(&f, deg_eps)?.e_star;
            let (embedded_or_m, lower_bound_ok) = if args.check {
                let r = lower_bound_check(&f, eps)?;
                (r.m, Some(r.passed))
            } else {
                (None, None)
            };
            Ok(DegreeRow {
                family: name,
                n,
                eps,
                deg_eps,
                deg_13,
                e_star,
                embedded_or_m,
                lower_bound_ok,
            })
        })
        .collect::<Result<_>>()?;
    let passed = rows.iter().all(|r| r.lower_bound_ok.unwrap_or(true));
    let text = if args.output.json {
        let mut s = serde_json::to_string_pretty(&Summary { rows, passed }).unwrap();
        s.push('\n');
        s
    } else {
        let mut s =
            String::from("family,n,eps,deg_eps,deg_13,e_star,embedded_or_m,lower_bound_ok\n");
        for r in &rows {
            let m = r.embedded_or_m.map_or(String::new(), |m| m.to_string());
            let ok = r.lower_bound_ok.map_or(String::new(), |b| b.to_string());
            let _ = writeln!(
                s,
                "{},{},{},{},{},{:.9},{},{}",
                r.family, r.n, r.eps, r.deg_eps, r.deg_13, r.e_star, m, ok
            );
        }
        let _ = writeln!(s, "# passed={passed}");
        s
    };
    emit(&args.output, &text)?;
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Extract(a) => cmd_extract(a),
        Command::Degree(a) => cmd_degree(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
