//! Damped Gauss-Newton (Levenberg-Marquardt) on the singular-value equations.
//!
//! Unlike power iteration, which only settles on local maxima of `|alpha|`,
//! this converges to any nondegenerate critical point, saddles included. It
//! is used to polish power-iteration output and to enumerate the critical
//! spectrum from random starts.
//!
//! The unknowns are the real and imaginary parts of every factor plus
//! `lambda`. The equations are `partial_contract(r) - lambda * conj(u_r) = 0`
//! split into real and imaginary parts, together with `|u_r|^2 = 1`. The
//! Jacobian is rank deficient along the phase gauge directions; the damping
//! keeps the step well defined there.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::CriticalPoint;
use crate::error::{Error, Result};
use crate::tensor::{overlap, residual, Hypermatrix, ProductTuple, UnitVector};

const MAX_STEPS: usize = 200;
const DAMPING_INIT: f64 = 1e-3;
const DAMPING_MAX: f64 = 1e12;

/// Runs the damped Newton iteration from `init`, with `lambda` started at
/// `|alpha(init)|`. `accept` is the residual (relative to `||H||`) below
/// which the returned point is flagged converged.
pub fn newton_solve(h: &Hypermatrix, init: &ProductTuple, accept: f64) -> Result<CriticalPoint> {
    init.check_shape(h.shape())?;
    let scale = h.norm();
    if scale == 0.0 {
        return Err(Error::ZeroTensor);
    }
    let hn = h.normalized()?;
    let layout = Layout::new(h.shape());
    let mut x = layout.pack(init.factors(), overlap(&hn, init)?.norm());
    let mut f = equations(&hn, &layout, &x);
    let mut cost = f.norm_squared();
    let mut damping = DAMPING_INIT;
    let mut steps = 0;

    while steps < MAX_STEPS && f.amax() > 1e-15 && damping < DAMPING_MAX {
        steps += 1;
        let j = jacobian(&hn, &layout, &x);
        let jt = j.transpose();
        let rhs = -(&jt * &f);
        let normal = &jt * &j;
        loop {
            let mut damped = normal.clone();
            for i in 0..damped.nrows() {
                damped[(i, i)] += damping;
            }
            let Some(chol) = damped.cholesky() else {
                damping *= 4.0;
                if damping >= DAMPING_MAX {
                    break;
                }
                continue;
            };
            let step = chol.solve(&rhs);
            let trial = &x + &step;
            let ft = equations(&hn, &layout, &trial);
            let ct = ft.norm_squared();
            if ct < cost {
                x = trial;
                f = ft;
                cost = ct;
                damping = (damping / 3.0).max(1e-15);
                break;
            }
            damping *= 4.0;
            if damping >= DAMPING_MAX {
                break;
            }
        }
    }

    let factors = layout.unpack(&x)?;
    finish(h, factors, steps, accept * scale)
}

/// Rotates the first factor so that `alpha` is real and nonnegative, then
/// reports `lambda = |alpha|` and the residual against the original scale.
pub(crate) fn finish(
    h: &Hypermatrix,
    mut factors: Vec<UnitVector>,
    iterations: usize,
    threshold: f64,
) -> Result<CriticalPoint> {
    let alpha = overlap(h, &ProductTuple::new(factors.clone()))?;
    if alpha.norm() > 0.0 {
        factors[0] = factors[0].with_phase(alpha.conj());
    }
    let p = ProductTuple::new(factors);
    let lambda = overlap(h, &p)?.re.max(0.0);
    let res = residual(h, lambda, &p)?;
    Ok(CriticalPoint {
        lambda,
        residual: res,
        iterations,
        converged: res <= threshold,
        factors: p,
    })
}

struct Layout {
    dims: Vec<usize>,
    offsets: Vec<usize>,
    len: usize,
}

impl Layout {
    fn new(shape: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(shape.len());
        let mut o = 0;
        for &d in shape {
            offsets.push(o);
            o += 2 * d;
        }
        Self {
            dims: shape.to_vec(),
            offsets,
            len: o + 1,
        }
    }

    fn lambda_index(&self) -> usize {
        self.len - 1
    }

    fn pack(&self, factors: &[UnitVector], lambda: f64) -> DVector<f64> {
        let mut x = DVector::zeros(self.len);
        for (r, u) in factors.iter().enumerate() {
            let (o, d) = (self.offsets[r], self.dims[r]);
            for (i, z) in u.components().iter().enumerate() {
                x[o + i] = z.re;
                x[o + d + i] = z.im;
            }
        }
        x[self.lambda_index()] = lambda;
        x
    }

    fn raw(&self, x: &DVector<f64>, r: usize) -> Vec<Complex64> {
        let (o, d) = (self.offsets[r], self.dims[r]);
        (0..d)
            .map(|i| Complex64::new(x[o + i], x[o + d + i]))
            .collect()
    }

    fn unpack(&self, x: &DVector<f64>) -> Result<Vec<UnitVector>> {
        (0..self.dims.len())
            .map(|r| UnitVector::new(self.raw(x, r)))
            .collect()
    }
}

/// Raw (unnormalized) factors wrapped without renormalization, so that the
/// norm constraint equations see the actual iterate.
fn raw_factors(layout: &Layout, x: &DVector<f64>) -> Vec<UnitVector> {
    (0..layout.dims.len())
        .map(|r| UnitVector::raw(layout.raw(x, r)))
        .collect()
}

fn equations(h: &Hypermatrix, layout: &Layout, x: &DVector<f64>) -> DVector<f64> {
    let n = layout.dims.len();
    let lambda = x[layout.lambda_index()];
    let factors = raw_factors(layout, x);
    let mut f = DVector::zeros(layout.len - 1 + n);
    for r in 0..n {
        let (o, d) = (layout.offsets[r], layout.dims[r]);
        let g = h.contract_except(&factors, &[r]);
        let u = factors[r].components();
        for i in 0..d {
            let e = g[i] - lambda * u[i].conj();
            f[o + i] = e.re;
            f[o + d + i] = e.im;
        }
        f[layout.len - 1 + r] = u.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0;
    }
    f
}

fn jacobian(h: &Hypermatrix, layout: &Layout, x: &DVector<f64>) -> DMatrix<f64> {
    let n = layout.dims.len();
    let lambda = x[layout.lambda_index()];
    let li = layout.lambda_index();
    let factors = raw_factors(layout, x);
    let mut j = DMatrix::zeros(layout.len - 1 + n, layout.len);
    for r in 0..n {
        let (or, dr) = (layout.offsets[r], layout.dims[r]);
        let u = factors[r].components();
        for s in 0..n {
            if s == r {
                continue;
            }
            let (os, ds) = (layout.offsets[s], layout.dims[s]);
            let m = h.contract_except(&factors, &[r.min(s), r.max(s)]);
            for i in 0..dr {
                for k in 0..ds {
                    // d g_r[i] / d u_s[k], holomorphic in u_s
                    let mik = if r < s { m[i * ds + k] } else { m[k * dr + i] };
                    j[(or + i, os + k)] = mik.re;
                    j[(or + i, os + ds + k)] = -mik.im;
                    j[(or + dr + i, os + k)] = mik.im;
                    j[(or + dr + i, os + ds + k)] = mik.re;
                }
            }
        }
        for i in 0..dr {
            j[(or + i, or + i)] = -lambda;
            j[(or + dr + i, or + dr + i)] = lambda;
            j[(or + i, li)] = -u[i].re;
            j[(or + dr + i, li)] = u[i].im;
            let row = layout.len - 1 + r;
            j[(row, or + i)] = 2.0 * u[i].re;
            j[(row, or + dr + i)] = 2.0 * u[i].im;
        }
    }
    j
}
