//! Critical points of `|alpha|` on the product of unit spheres.
//!
//! [`hopm_solve`] climbs to a local maximum by alternating power iteration.
//! [`gme_estimate`] runs it from many seeded starts and keeps the largest
//! value, which estimates the injective tensor norm. [`critical_spectrum`]
//! adds damped Newton runs, which also land on saddles, and returns every
//! distinct critical value found.

mod hopm;
mod newton;

pub use hopm::{hopm_solve, hopm_solve_traced};
pub use newton::newton_solve;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{Hypermatrix, ProductTuple, UnitVector};

/// Residual bound, relative to `||H||`, for points entering the spectrum.
pub const SPECTRUM_RESIDUAL: f64 = 1e-10;
/// Relative gap below which two critical values are merged.
pub const SPECTRUM_DEDUP: f64 = 1e-6;
/// Critical values below this fraction of `||H||` are treated as `lambda = 0`
/// and left out of the spectrum.
pub const ZERO_LAMBDA: f64 = 1e-8;

/// Stream offset separating Newton starts from power-iteration starts.
const NEWTON_STREAM: u64 = 1 << 32;

/// A singular value with its singular vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPoint {
    /// `|alpha(factors)|`; the factors are phased so `alpha` is real and `>= 0`.
    pub lambda: f64,
    pub factors: ProductTuple,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl CriticalPoint {
    /// `lambda / ||H||`.
    pub fn normalized_lambda(&self, h: &Hypermatrix) -> f64 {
        self.lambda / h.norm()
    }

    /// The maximal squared overlap `(lambda / ||H||)^2` of the normalized state.
    pub fn squared_overlap(&self, h: &Hypermatrix) -> f64 {
        self.normalized_lambda(h).powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Convergence is declared once the residual is at most `10 * tol * ||H||`.
    pub tol: f64,
    /// Maximum number of full sweeps per power-iteration run.
    pub max_iter: usize,
    /// Number of seeded random starts (the uniform start is added on top).
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 2000,
            restarts: 64,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig("tol must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1"));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1"));
        }
        Ok(())
    }
}

/// Random product tuple with entries drawn from the rotation-invariant
/// complex Gaussian, on stream `stream` of the generator seeded by `seed`.
pub fn random_tuple(shape: &[usize], seed: u64, stream: u64) -> Result<ProductTuple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let factors = shape
        .iter()
        .map(|&d| {
            UnitVector::new(
                (0..d)
                    .map(|_| {
                        let re: f64 = StandardNormal.sample(&mut rng);
                        let im: f64 = StandardNormal.sample(&mut rng);
                        Complex64::new(re, im)
                    })
                    .collect(),
            )
        })
        .collect::<Result<_>>()?;
    Ok(ProductTuple::new(factors))
}

/// Power iteration, followed by a Newton polish when the sweeps stall.
fn climb(h: &Hypermatrix, init: &ProductTuple, cfg: &SolverConfig) -> Result<CriticalPoint> {
    let cp = hopm_solve(h, init, cfg)?;
    if cp.converged {
        return Ok(cp);
    }
    let polished = newton_solve(h, &cp.factors, 10.0 * cfg.tol)?;
    if polished.residual < cp.residual {
        Ok(CriticalPoint {
            iterations: cp.iterations + polished.iterations,
            ..polished
        })
    } else {
        Ok(cp)
    }
}

fn starts(h: &Hypermatrix, cfg: &SolverConfig) -> Result<Vec<ProductTuple>> {
    let mut v = Vec::with_capacity(cfg.restarts + 1);
    v.push(ProductTuple::uniform(h.shape())?);
    for k in 0..cfg.restarts {
        v.push(random_tuple(h.shape(), cfg.seed, k as u64)?);
    }
    Ok(v)
}

/// Multistart estimate of the largest singular value.
///
/// Runs power iteration from the uniform product state and from
/// `cfg.restarts` seeded random states, concurrently, and returns the
/// converged point with the largest `lambda` (earliest start on ties). The
/// result is deterministic for a fixed seed.
pub fn gme_estimate(h: &Hypermatrix, cfg: &SolverConfig) -> Result<CriticalPoint> {
    cfg.validate()?;
    if h.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let inits = starts(h, cfg)?;
    let runs: Vec<Result<CriticalPoint>> = inits.par_iter().map(|p| climb(h, p, cfg)).collect();

    let mut best: Option<CriticalPoint> = None;
    let mut best_unconverged: Option<CriticalPoint> = None;
    let mut last_err = None;
    for run in runs {
        match run {
            Ok(cp) if cp.converged => {
                if best.as_ref().is_none_or(|b| cp.lambda > b.lambda) {
                    best = Some(cp);
                }
            }
            Ok(cp) => {
                if best_unconverged
                    .as_ref()
                    .is_none_or(|b| cp.lambda > b.lambda)
                {
                    best_unconverged = Some(cp);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    match (best, best_unconverged, last_err) {
        (Some(cp), _, _) => Ok(cp),
        (None, Some(cp), _) => Err(Error::NoConvergence { best: Box::new(cp) }),
        (None, None, Some(e)) => Err(e),
        (None, None, None) => Err(Error::ZeroTensor),
    }
}

/// Distinct critical values found from power-iteration and Newton starts,
/// in descending order.
///
/// Each restart contributes one power-iteration run (local maxima) and one
/// damped Newton run from an independent start (any critical point). Points
/// are kept when their residual is within [`SPECTRUM_RESIDUAL`]`* ||H||` and
/// `lambda` exceeds [`ZERO_LAMBDA`]`* ||H||`; values within
/// [`SPECTRUM_DEDUP`] (relative to the largest) are merged.
pub fn critical_spectrum(h: &Hypermatrix, cfg: &SolverConfig) -> Result<Vec<CriticalPoint>> {
    cfg.validate()?;
    if h.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let scale = h.norm();
    let inits = starts(h, cfg)?;
    let mut jobs: Vec<(bool, ProductTuple)> = inits.into_iter().map(|p| (false, p)).collect();
    for k in 0..cfg.restarts {
        jobs.push((
            true,
            random_tuple(h.shape(), cfg.seed, NEWTON_STREAM + k as u64)?,
        ));
    }

    let found: Vec<CriticalPoint> =
        jobs.par_iter()
            .filter_map(|(newton, init)| {
                let cp = if *newton {
                    newton_solve(h, init, SPECTRUM_RESIDUAL).ok()?
                } else {
                    let cp = climb(h, init, cfg).ok()?;
                    // power iteration stops at 10 * tol; tighten to the spectrum bound
                    if cp.residual > SPECTRUM_RESIDUAL * scale {
                        newton_solve(h, &cp.factors, SPECTRUM_RESIDUAL).ok()?
                    } else {
                        cp
                    }
                };
                (cp.residual <= SPECTRUM_RESIDUAL * scale && cp.lambda > ZERO_LAMBDA * scale)
                    .then_some(CriticalPoint {
                        converged: true,
                        ..cp
                    })
            })
            .collect();

    Ok(dedup_descending(found))
}

fn dedup_descending(mut points: Vec<CriticalPoint>) -> Vec<CriticalPoint> {
    points.sort_by(|a, b| b.lambda.total_cmp(&a.lambda));
    let Some(top) = points.first().map(|p| p.lambda) else {
        return points;
    };
    let gap = SPECTRUM_DEDUP * top;
    let mut out: Vec<CriticalPoint> = Vec::new();
    for p in points {
        match out.last() {
            Some(last) if last.lambda - p.lambda <= gap => {}
            _ => out.push(p),
        }
    }
    out
}
