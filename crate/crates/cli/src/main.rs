use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypersv::charpoly::characteristic_polynomial;
use hypersv::hyperdet::hyperdet_222;
use hypersv::oracle::{
    bipartite_top_singular, naive_grid_oracle, qubit_grid_oracle, DEFAULT_REFINE,
};
use hypersv::state_file::{parse_state, parse_vectors};
use hypersv::three_qubit::{closed_form_record, SchmidtCoeffs};
use hypersv::{
    critical_spectrum, gme_estimate, overlap, residual, CriticalPoint, Error, Hypermatrix,
    SolverConfig,
};
use serde_json::{json, Value};

const EXIT_INPUT: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hypersv",
    version,
    about = "Singular values and geometric entanglement of hypermatrices"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// Convergence tolerance; a point is accepted at residual <= 10 * tol * ||H||.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Sweep cap per power-iteration run.
    #[arg(long, global = true, default_value_t = 2000)]
    max_iter: usize,
    /// Random restarts on top of the uniform start.
    #[arg(long, global = true, default_value_t = 64)]
    restarts: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Points per angle for the grid oracle.
    #[arg(long, global = true, default_value_t = 64)]
    grid: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Largest singular value from the multistart solver.
    Gme { state: PathBuf },
    /// Distinct critical values, descending.
    Spectrum { state: PathBuf },
    /// Closed-form record for a three-qubit canonical state.
    ClosedForm {
        /// a,b,c,d or a,b,c,d,f
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        coeffs: Vec<f64>,
    },
    /// Characteristic polynomial of a canonical state and its real roots.
    Charpoly {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        coeffs: Vec<f64>,
    },
    /// Hyperdeterminant of a 2x2x2 state.
    Hyperdet { state: PathBuf },
    /// Brute-force estimate of the largest singular value.
    Oracle {
        state: PathBuf,
        /// Refinement steps after the grid search.
        #[arg(long, default_value_t = DEFAULT_REFINE)]
        refine: usize,
        /// Plain grid over all six angles, no refinement.
        #[arg(long)]
        naive: bool,
    },
    /// Residual of a proposed singular value and product vectors.
    Verify {
        state: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long)]
        vectors: PathBuf,
    },
}

/// A failure with its exit status and an optional partial document.
struct Failure {
    code: u8,
    message: String,
    doc: Option<Value>,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
            doc: None,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { ref best } => Self {
                code: EXIT_NO_CONVERGENCE,
                message: e.to_string(),
                doc: serde_json::to_value(best.as_ref()).ok(),
            },
            e => Self::input(e.to_string()),
        }
    }
}

fn read_state(path: &Path) -> Result<Hypermatrix, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_state(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn coeffs(v: &[f64]) -> Result<SchmidtCoeffs, Failure> {
    if !(4..=5).contains(&v.len()) {
        return Err(Failure::input(format!(
            "coeffs: expected a,b,c,d or a,b,c,d,f, found {} values",
            v.len()
        )));
    }
    let f = v.get(4).copied().unwrap_or(0.0);
    SchmidtCoeffs::new(v[0], v[1], v[2], v[3], f)
        .map_err(|e| Failure::input(format!("coeffs: {e}")))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn point(h: &Hypermatrix, cp: &CriticalPoint) -> Value {
    json!({
        "lambda": cp.lambda,
        "normalized_lambda": cp.normalized_lambda(h),
        "squared_overlap": cp.squared_overlap(h),
        "residual": cp.residual,
        "iterations": cp.iterations,
        "converged": cp.converged,
        "factors": to_value(&cp.factors),
    })
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    let o = &cli.opts;
    let cfg = SolverConfig {
        tol: o.tol,
        max_iter: o.max_iter,
        restarts: o.restarts,
        seed: o.seed,
    };
    Ok(match &cli.cmd {
        Cmd::Gme { state } => {
            let h = read_state(state)?;
            cfg.validate()?;
            let cp = gme_estimate(&h, &cfg)?;
            json!({
                "lambda_max": cp.lambda,
                "normalized_lambda": cp.normalized_lambda(&h),
                "gme_squared_overlap": cp.squared_overlap(&h),
                "norm": h.norm(),
                "factors": to_value(&cp.factors),
                "residual": cp.residual,
                "iterations": cp.iterations,
                "restarts_used": cfg.restarts,
                "seed": cfg.seed,
            })
        }
        Cmd::Spectrum { state } => {
            let h = read_state(state)?;
            let points = critical_spectrum(&h, &cfg)?;
            json!({
                "norm": h.norm(),
                "critical_values": points.iter().map(|cp| point(&h, cp)).collect::<Vec<_>>(),
                "restarts_used": cfg.restarts,
                "seed": cfg.seed,
            })
        }
        Cmd::ClosedForm { coeffs: c } => to_value(&closed_form_record(&coeffs(c)?)?),
        Cmd::Charpoly { coeffs: c } => {
            let k = coeffs(c)?;
            let cp = characteristic_polynomial(&k);
            let hi = k.norm().powi(2);
            let roots = if cp.degenerate {
                Value::Null
            } else {
                let roots = cp.roots(0.0, hi, o.tol)?;
                roots
                    .iter()
                    .map(|r| json!({"mu": r.mu, "multiplicity": r.multiplicity, "lambda": r.lambda()}))
                    .collect()
            };
            json!({
                "input": to_value(&k),
                "norm": k.norm(),
                "status": if cp.degenerate { "degenerate" } else { "ok" },
                "quartic": to_value(&cp.quartic),
                "delta": to_value(&cp.delta),
                "scale": cp.scale,
                "interval": [0.0, hi],
                "roots": roots,
            })
        }
        Cmd::Hyperdet { state } => {
            let h = read_state(state)?;
            let z = hyperdet_222(&h)?;
            let n4 = h.norm().powi(4);
            let normalized = if n4 > 0.0 {
                json!({"re": z.re / n4, "im": z.im / n4})
            } else {
                Value::Null
            };
            json!({"re": z.re, "im": z.im, "abs": z.norm(), "normalized": normalized})
        }
        Cmd::Oracle {
            state,
            refine,
            naive,
        } => {
            let h = read_state(state)?;
            if h.order() == 2 {
                let m = as_matrix(&h);
                let v = bipartite_top_singular(&m)?;
                json!({"method": "svd", "value": v, "normalized_value": v / h.norm()})
            } else if *naive {
                let v = naive_grid_oracle(&h, o.grid)?;
                json!({"method": "naive_grid", "grid": o.grid, "value": v, "normalized_value": v / h.norm()})
            } else {
                let est = qubit_grid_oracle(&h, o.grid, *refine)?;
                json!({
                    "method": "grid",
                    "grid": o.grid,
                    "refine": refine,
                    "value": est.value,
                    "normalized_value": est.value / h.norm(),
                    "grid_value": est.grid_value,
                    "theta": est.theta,
                    "phi": est.phi,
                })
            }
        }
        Cmd::Verify {
            state,
            lambda,
            vectors,
        } => {
            let h = read_state(state)?;
            if !(lambda.is_finite() && *lambda >= 0.0) {
                return Err(Failure::input("lambda: must be finite and nonnegative"));
            }
            let text = std::fs::read_to_string(vectors)
                .map_err(|e| Failure::input(format!("{}: {e}", vectors.display())))?;
            let p = parse_vectors(&text)
                .map_err(|e| Failure::input(format!("{}: {e}", vectors.display())))?;
            let r = residual(&h, *lambda, &p)?;
            let a = overlap(&h, &p)?;
            let threshold = 10.0 * o.tol * h.norm();
            json!({
                "lambda": lambda,
                "normalized_lambda": lambda / h.norm(),
                "residual": r,
                "normalized_residual": r / h.norm(),
                "overlap": {"re": a.re, "im": a.im},
                "overlap_abs": a.norm(),
                "threshold": threshold,
                "is_solution": r <= threshold,
            })
        }
    })
}

fn as_matrix(h: &Hypermatrix) -> nalgebra::DMatrix<num_complex::Complex64> {
    let (r, c) = (h.shape()[0], h.shape()[1]);
    nalgebra::DMatrix::from_fn(r, c, |i, j| h.get(&[i, j]))
}

fn text(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                text(x, &key, out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{prefix}: [{}]", items.join(", "));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                text(x, &format!("{prefix}[{i}]"), out);
            }
        }
        Value::String(s) => {
            let _ = writeln!(out, "{prefix}: {s}");
        }
        x => {
            let _ = writeln!(out, "{prefix}: {x}");
        }
    }
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("plain data serializes"),
        Format::Text => {
            let mut out = String::new();
            text(v, "", &mut out);
            out.trim_end().to_string()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(v) => {
            println!("{}", render(&v, cli.opts.format));
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(doc) = &f.doc {
                println!("{}", render(doc, cli.opts.format));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
