//! Command-line front end: reproducible runs of the certificate,
//! interpolation and sampling machinery with machine-readable reports.
//!
//! Exit codes: 0 verdict-pass, 1 verdict-fail, 2 usage/validation error,
//! 3 numerical breakdown (ill-conditioning, dependence, vanishing
//! denominators).

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use report::{exit_code_for, ReportBuilder};
use shimcert::catalog::KernelEval;
use shimcert::certificates::{certify_pair, ell_chain, master_certificate, omega1_radius};
use shimcert::error::Error;
use shimcert::interpolation::{
    caratheodory_extend, one_point_extension_feasible, pick_matrix, PickProblem,
};
use shimcert::io::{
    kernel_spec_from_json, resolve_catalog, spec_to_eval, CatalogRef, CcDataFile,
    CertificateReportJson, FloatMatrixFile, HmatFile, KernelSpecFile, PickProblemFile,
    PsdVerdictJson,
};
use shimcert::linalg::{operator_norm, parrott_complete, psd_float, psd_test_exact, PARROTT_SLACK};
use shimcert::sampling::{gram_psd, Grid};
use shimcert::scalar::{format_rat, C64};
use shimcert::series::MultiIndex;

#[derive(Parser)]
#[command(
    name = "shimcert",
    version,
    about = "Exact Shimorin certificates and Pick/Caratheodory feasibility for kernel pairs"
)]
struct Cli {
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format (only "json").
    #[arg(long, global = true, default_value = "json")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CatalogParams {
    /// Rational rate "p/q" for the geometric kernel.
    #[arg(long)]
    rate: Option<String>,
    /// Comma-separated positive weights for the polydisc kernel.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<u32>>,
    /// Exponent for the ball-power kernel.
    #[arg(long)]
    alpha: Option<u32>,
    /// Variable count for the ball-power kernel.
    #[arg(long)]
    vars: Option<usize>,
    /// Parameter "re,im" for the rank-one family kernels.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
}

impl CatalogParams {
    fn to_ref(&self, name: &str) -> Result<CatalogRef, Failure> {
        let lambda = match &self.lambda {
            None => None,
            Some(v) if v.len() == 2 => Some([v[0], v[1]]),
            Some(v) => return Err((2, format!("--lambda needs re,im (got {} values)", v.len()))),
        };
        Ok(CatalogRef {
            catalog: name.to_string(),
            rate: self.rate.clone(),
            weights: self.weights.clone(),
            alpha: self.alpha,
            vars: self.vars,
            lambda,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Emit a catalog kernel as kernel-spec JSON at a truncation degree.
    Catalog {
        /// szego | bergman | geometric | polydisc | ball_power | prop65 | lastex
        name: String,
        #[arg(long)]
        degree: u32,
        #[command(flatten)]
        params: CatalogParams,
    },
    /// Greedy master certificate of a normalized diagonal kernel.
    Mastercert {
        kernel: PathBuf,
        #[arg(long)]
        degree: u32,
    },
    /// Certify a pair of normalized diagonal kernels at a degree.
    Certify {
        k: PathBuf,
        l: PathBuf,
        #[arg(long)]
        degree: u32,
    },
    /// Schur-complement index chain of (l, k) with per-stage verdicts.
    Chain {
        l: PathBuf,
        k: PathBuf,
        /// Comma-separated chain indices, e.g. 2,0.
        #[arg(long, value_delimiter = ',')]
        indices: Vec<u32>,
    },
    /// Exact PSD test of a Hermitian Gaussian-rational matrix.
    Psd { matrix: PathBuf },
    /// Central Parrott completion of float blocks {"a":, "c":, "d":}.
    Parrott {
        blocks: PathBuf,
        #[arg(long, default_value_t = PARROTT_SLACK)]
        slack: f64,
    },
    /// Pick-matrix feasibility; optionally a one-point extension test.
    Pick {
        problem: PathBuf,
        /// Extension point "re,im" per coordinate, ';'-separated.
        #[arg(long)]
        extend: Option<String>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// One-step Caratheodory coefficient extension via the central
    /// completion.
    CcExtend {
        data: PathBuf,
        k: PathBuf,
        l: PathBuf,
        /// Target multi-index, comma-separated exponents.
        #[arg(long, value_delimiter = ',')]
        index: Vec<u32>,
        #[arg(long, default_value_t = PARROTT_SLACK)]
        slack: f64,
    },
    /// Domain radius of a one-variable certificate series.
    Radius {
        theta: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Gram positivity of a kernel on a seeded random grid.
    SampleCheck {
        /// Catalog kernel name, or "file:<path>" for a kernel spec.
        #[arg(long)]
        kernel: String,
        #[command(flatten)]
        params: CatalogParams,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        count: usize,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        radius: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Deserialize)]
struct ParrottBlocksFile {
    a: FloatMatrixFile,
    c: FloatMatrixFile,
    d: FloatMatrixFile,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.format != "json" {
        eprintln!("shimcert: unsupported format {:?}, only json", cli.format);
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err((code, message)) => {
            eprintln!("shimcert: {message}");
            ExitCode::from(code)
        }
    }
}

type Failure = (u8, String);

fn fail(e: Error) -> Failure {
    (exit_code_for(&e) as u8, e.to_string())
}

fn read_file(path: &Path, builder: &mut ReportBuilder) -> Result<String, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| (2u8, format!("cannot read {}: {e}", path.display())))?;
    builder.input(&path.display().to_string(), text.as_bytes());
    Ok(text)
}

fn load_spec(path: &Path, builder: &mut ReportBuilder) -> Result<KernelSpecFile, Failure> {
    let text = read_file(path, builder)?;
    kernel_spec_from_json(&text).map_err(fail)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| (2u8, format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn parse_points(spec: &str) -> Result<Vec<C64>, Failure> {
    spec.split(';')
        .map(|coord| {
            let parts: Vec<&str> = coord.split(',').collect();
            if parts.len() != 2 {
                return Err((2u8, format!("point coordinate {coord:?} is not re,im")));
            }
            let re: f64 = parts[0]
                .trim()
                .parse()
                .map_err(|e| (2u8, format!("bad point: {e}")))?;
            let im: f64 = parts[1]
                .trim()
                .parse()
                .map_err(|e| (2u8, format!("bad point: {e}")))?;
            Ok(C64::new(re, im))
        })
        .collect()
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let out = cli.out.clone();
    match cli.command {
        Command::Catalog {
            name,
            degree,
            params,
        } => {
            let handle = resolve_catalog(&params.to_ref(&name)?).map_err(fail)?;
            let spec = if let Some(d) = handle.diagonal_series(degree) {
                KernelSpecFile::from_diagonal(&d)
            } else if let Some(b) = handle.bivariate_series(degree) {
                KernelSpecFile::from_bivariate(&b.map_err(fail)?)
            } else {
                return Err((
                    2,
                    format!("kernel {name} is float-only and has no exact series form"),
                ));
            };
            emit(&out, &shimcert::io::kernel_spec_to_json(&spec))?;
            Ok(0)
        }

        Command::Mastercert { kernel, degree } => {
            let mut builder = ReportBuilder::new("mastercert");
            builder.parameter("degree", degree);
            builder.exact("coefficient_recursion");
            let spec = load_spec(&kernel, &mut builder)?;
            let k = spec.to_diagonal().map_err(fail)?;
            let theta = master_certificate(&k, degree).map_err(fail)?.into_theta();
            builder.verdict("ok");
            let report = builder.finish(json!({
                "theta": KernelSpecFile::from_diagonal(&theta),
            }));
            emit(&out, &serde_json::to_string_pretty(&report).unwrap())?;
            Ok(0)
        }

        Command::Certify { k, l, degree } => {
            let mut builder = ReportBuilder::new("certify");
            builder.parameter("degree", degree);
            builder.exact("coefficient_inequalities");
            let k_series = load_spec(&k, &mut builder)?.to_diagonal().map_err(fail)?;
            let l_series = load_spec(&l, &mut builder)?.to_diagonal().map_err(fail)?;
            let report = certify_pair(&k_series, &l_series, degree).map_err(fail)?;
            let pass = report.pass;
            builder.verdict(if pass { "pass" } else { "fail" });
            let run = builder
                .finish(serde_json::to_value(CertificateReportJson::from_report(&report)).unwrap());
            emit(&out, &serde_json::to_string_pretty(&run).unwrap())?;
            Ok(if pass { 0 } else { 1 })
        }

        Command::Chain { l, k, indices } => {
            let mut builder = ReportBuilder::new("chain");
            builder.parameter("indices", indices.clone());
            builder.exact("quotient_coefficients");
            let l_series = load_spec(&l, &mut builder)?.to_diagonal().map_err(fail)?;
            let k_series = load_spec(&k, &mut builder)?.to_diagonal().map_err(fail)?;
            let chain = ell_chain(&l_series, &k_series, &indices).map_err(fail)?;
            let overall = chain.all_nonnegative();
            let stages: Vec<Value> = chain
                .stages
                .iter()
                .map(|stage| {
                    json!({
                        "index": stage.index,
                        "series": KernelSpecFile::from_diagonal(&stage.series),
                        "quotient_nonnegative": stage.quotient_verdict.as_ref().map(|v| v.ok),
                        "first_negative": stage.quotient_verdict.as_ref().and_then(|v| {
                            v.first_failure.as_ref().map(|(a, c)| {
                                json!({"index": a.exponents(), "value": format_rat(c)})
                            })
                        }),
                    })
                })
                .collect();
            let (verdict, code) = match overall {
                Some(true) => ("pass", 0u8),
                Some(false) => ("fail", 1),
                None => ("suppressed", 0),
            };
            builder.verdict(verdict);
            let run = builder.finish(json!({ "stages": stages }));
            emit(&out, &serde_json::to_string_pretty(&run).unwrap())?;
            Ok(code)
        }

        Command::Psd { matrix } => {
            let mut builder = ReportBuilder::new("psd");
            builder.exact("ldl_pivots");
            let text = read_file(&matrix, &mut builder)?;
            let file: HmatFile = shimcert::io::from_json(&text).map_err(fail)?;
            let h = file.to_matrix().map_err(fail)?;
            let verdict = psd_test_exact(&h);
            let pass = verdict.is_psd;
            builder.verdict(if pass { "psd" } else { "not_psd" });
            let run = builder
                .finish(serde_json::to_value(PsdVerdictJson::from_verdict(&verdict)).unwrap());
            emit(&out, &serde_json::to_string_pretty(&run).unwrap())?;
            Ok(if pass { 0 } else { 1 })
        }

        Command::Parrott { blocks, slack } => {
            let mut builder = ReportBuilder::new("parrott");
            builder.tolerance("constraint_slack", slack);
            builder.tolerance("norm_guarantee", 1e-8);
            let text = read_file(&blocks, &mut builder)?;
            let file: ParrottBlocksFile = shimcert::io::from_json(&text).map_err(fail)?;
            let a = file.a.to_matrix().map_err(fail)?;
            let c = file.c.to_matrix().map_err(fail)?;
            let d = file.d.to_matrix().map_err(fail)?;
            let b = parrott_complete(&a, &c, &d, slack).map_err(fail)?;
            let completed = shimcert::linalg::completed_norm(&a, &b, &c, &d).map_err(fail)?;
            let col = operator_norm(&a.vstack(&c)).map_err(fail)?;
            let row = operator_norm(&c.hstack(&d)).map_err(fail)?;
            builder.verdict("completed");
            let run = builder.finish(json!({
                "b": FloatMatrixFile::from_matrix(&b),
                "column_norm": col,
                "row_norm": row,
                "completed_norm": completed,
            }));
            emit(&out, &serde_json::to_string_pretty(&run).unwrap())?;
            Ok(0)
        }

        Command::Pick {
            problem,
            extend,
            tol,
        } => {
            let mut builder = ReportBuilder::new("pick");
            builder.tolerance("psd_relative", tol);
            let text = read_file(&problem, &mut builder)?;
            let file: PickProblemFile = shimcert::io::from_json(&text).map_err(fail)?;
            let dir = problem.parent().map(Path::to_path_buf).unwrap_or_default();
            let problem: PickProblem = file
                .to_problem(|name| {
                    let text = fs::read_to_string(dir.join(name))
                        .map_err(|e| Error::Parse(format!("cannot read {name}: {e}")))?;
                    kernel_spec_from_json(&text)
                })
                .map_err(fail)?;
            let matrix = pick_matrix(&problem).map_err(fail)?;
            let base = psd_float(&matrix, tol);
            let mut result = json!({
                "pick_matrix_psd": base.psd,
                "min_eigenvalue": base.min_eigenvalue,
                "norm": base.norm,
            });
            let feasible = match extend {
                None => base.psd,
                Some(point_spec) => {
                    let point = parse_points(&point_spec)?;
                    builder.parameter("extend", point_spec.clone());
                    let verdict =
                        one_point_extension_feasible(&problem, &point, tol).map_err(fail)?;
                    result["extension_feasible"] = json!(verdict.psd);
                    result["extension_min_eigenvalue"] = json!(verdict.min_eigenvalue);
                    verdict.psd
                }
            };
            builder.verdict(if feasible { "feasible" } else { "infeasible" });
            let run = builder.finish(result);
            emit(&out, &serde_json::to_string_pretty(&run).unwrap())?;
            Ok(if feasible { 0 } else { 1 })
        }

        Command::CcExtend {
            data,
            k,
            l,
            index,
            slack,
        } => {
            let mut builder = ReportBuilder::new("cc-extend");
            builder.parameter("index", index.clone());
            builder.tolerance("parrott_slack", slack);
            builder.tolerance("rounding_grid", 1e-12);
            builder.exact("feasibility_grams");
            let text = read_file(&data, &mut builder)?;
            let file: CcDataFile = shimcert::io::from_json(&text).map_err(fail)?;
            let cc = file.to_data().map_err(fail)?;
            let k_series = load_spec(&k, &mut builder)?.to_diagonal().map_err(fail)?;
            let l_series = load_spec(&l, &mut builder)?.to_diagonal().map_err(fail)?;
            if index.is_empty() {
                return Err((2, "cc-extend needs a target --index".into()));
            }
            let d = MultiIndex::new(index);
            match caratheodory_extend(&cc, &k_series, &l_series, &d, slack) {
                Ok(ext) => {
                    builder.verdict("extended");
                    let run = builder.finish(json!({
                        "data": CcDataFile::from_data(&ext.data),
                        "c_d_float": FloatMatrixFile::from_matrix(&ext.c_d_float),
                        "slack": ext.slack,
                        "exact_psd": ext.exact_psd,
                    }));
                    emit(&out, &serde_json::to_string_pretty(&run).unwrap())?;
                    Ok(0)
                }
                Err(Error::InfeasibleExtension(witness)) => {
                    builder.verdict("infeasible");
                    let run = builder.finish(json!({ "witness": witness }));
                    emit(&out, &serde_json::to_string_pretty(&run).unwrap())?;
                    Ok(1)
                }
                Err(e) => Err(fail(e)),
            }
        }

        Command::Radius { theta, tol } => {
            let mut builder = ReportBuilder::new("radius");
            builder.tolerance("bisection_absolute", tol);
            let spec = load_spec(&theta, &mut builder)?;
            let series = spec.to_diagonal().map_err(fail)?;
            let radius = omega1_radius(&series, tol).map_err(fail)?;
            builder.verdict("ok");
            let run = builder.finish(json!({
                "radius": if radius.is_finite() { json!(radius) } else { json!("unbounded") },
            }));
            emit(&out, &serde_json::to_string_pretty(&run).unwrap())?;
            Ok(0)
        }

        Command::SampleCheck {
            kernel,
            params,
            seed,
            count,
            radius,
            tol,
        } => {
            let mut builder = ReportBuilder::new("sample-check");
            builder.seed(seed);
            builder.parameter("count", count);
            builder.parameter("radius", radius);
            builder.tolerance("psd_relative", tol);
            let handle: Arc<dyn KernelEval> = if let Some(path) = kernel.strip_prefix("file:") {
                let spec = load_spec(Path::new(path), &mut builder)?;
                spec_to_eval(&spec).map_err(fail)?
            } else {
                builder.parameter("kernel", kernel.clone());
                Arc::new(resolve_catalog(&params.to_ref(&kernel)?).map_err(fail)?)
            };
            let grid = Grid::random_ball(seed, handle.vars(), radius, count);
            let verdict = gram_psd(handle.as_ref(), &grid, tol).map_err(fail)?;
            builder.verdict(if verdict.psd { "psd" } else { "not_psd" });
            let run = builder.finish(json!({
                "min_eigenvalue": verdict.min_eigenvalue,
                "norm": verdict.norm,
            }));
            emit(&out, &serde_json::to_string_pretty(&run).unwrap())?;
            Ok(if verdict.psd { 0 } else { 1 })
        }
    }
}
