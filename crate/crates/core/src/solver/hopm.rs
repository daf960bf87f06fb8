use num_complex::Complex64;

use super::{CriticalPoint, SolverConfig};
use crate::error::{Error, Result};
use crate::tensor::{overlap, residual, Hypermatrix, ProductTuple, UnitVector};

/// Alternating power iteration on the singular-value equations.
///
/// Each step replaces factor `r` by the normalized conjugate of the partial
/// contraction with `r` omitted, which is the exact maximizer of `|alpha|`
/// over that factor. Sweeps run cyclically over `r = 0..n`; the run stops
/// once the residual drops to `10 * tol * ||H||` or `max_iter` sweeps pass.
pub fn hopm_solve(
    h: &Hypermatrix,
    init: &ProductTuple,
    cfg: &SolverConfig,
) -> Result<CriticalPoint> {
    run(h, init, cfg, None)
}

/// Same as [`hopm_solve`], also returning `|alpha|` after every full sweep.
pub fn hopm_solve_traced(
    h: &Hypermatrix,
    init: &ProductTuple,
    cfg: &SolverConfig,
) -> Result<(CriticalPoint, Vec<f64>)> {
    let mut trace = Vec::new();
    let cp = run(h, init, cfg, Some(&mut trace))?;
    Ok((cp, trace))
}

fn run(
    h: &Hypermatrix,
    init: &ProductTuple,
    cfg: &SolverConfig,
    mut trace: Option<&mut Vec<f64>>,
) -> Result<CriticalPoint> {
    cfg.validate()?;
    init.check_shape(h.shape())?;
    let scale = h.norm();
    if scale == 0.0 {
        return Err(Error::ZeroTensor);
    }
    let threshold = 10.0 * cfg.tol * scale;
    let mut factors = init.clone().into_factors();
    let mut lambda = 0.0;
    let mut res = f64::INFINITY;
    let mut sweeps = 0;

    while sweeps < cfg.max_iter {
        sweeps += 1;
        for r in 0..h.order() {
            let g = h.contract_except(&factors, &[r]);
            let norm = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm <= f64::EPSILON * scale {
                return Err(Error::DegenerateDirection { factor: r });
            }
            factors[r] = UnitVector::new(g.iter().map(Complex64::conj).collect())?;
            lambda = norm;
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(lambda);
        }
        let p = ProductTuple::new(factors.clone());
        res = residual(h, lambda, &p)?;
        if res <= threshold {
            break;
        }
    }

    let p = ProductTuple::new(factors);
    // the last update leaves alpha real and positive
    let lambda = overlap(h, &p)?.norm();
    Ok(CriticalPoint {
        lambda,
        residual: res,
        iterations: sweeps,
        converged: res <= threshold,
        factors: p,
    })
}
