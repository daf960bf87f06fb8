//! Dense real polynomials in `mu = lambda^2` and real-root isolation.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{isolate_real_roots, RatPoly};

/// Dense polynomial; `coeffs[k]` multiplies `mu^k`. Trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MuPolynomial {
    coeffs: Vec<f64>,
}

impl MuPolynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `mu - r`.
    pub fn linear_root(r: f64) -> Self {
        Self::new(vec![-r, 1.0])
    }

    /// Product of `(mu - r)` over `roots`, scaled by `lead`.
    pub fn from_roots(lead: f64, roots: &[f64]) -> Self {
        roots
            .iter()
            .fold(Self::constant(lead), |p, &r| &p * &Self::linear_root(r))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// `sum |c_k| |x|^k`, the size of the terms entering [`eval`](Self::eval).
    fn eval_scale(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn powi(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(1.0), |acc, _| &acc * self)
    }

    /// Zeroes every coefficient with magnitude at most `threshold`.
    pub fn chop(&self, threshold: f64) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|&c| if c.abs() <= threshold { 0.0 } else { c })
                .collect(),
        )
    }
}

impl Add for &MuPolynomial {
    type Output = MuPolynomial;
    fn add(self, rhs: &MuPolynomial) -> MuPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        MuPolynomial::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + rhs.coeffs.get(k).unwrap_or(&0.0))
                .collect(),
        )
    }
}

impl Sub for &MuPolynomial {
    type Output = MuPolynomial;
    fn sub(self, rhs: &MuPolynomial) -> MuPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &MuPolynomial {
    type Output = MuPolynomial;
    fn neg(self) -> MuPolynomial {
        self.scale(-1.0)
    }
}

impl Mul for &MuPolynomial {
    type Output = MuPolynomial;
    fn mul(self, rhs: &MuPolynomial) -> MuPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return MuPolynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        MuPolynomial::new(out)
    }
}

/// A real root with an estimate of its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealRoot {
    pub mu: f64,
    pub multiplicity: usize,
}

impl RealRoot {
    /// `+sqrt(mu)`, the corresponding singular-value candidate; `None` for `mu < 0`.
    pub fn lambda(&self) -> Option<f64> {
        (self.mu >= 0.0).then(|| self.mu.sqrt())
    }
}

/// Relative size, against `sum |c_k| |x|^k`, below which a critical value
/// is indistinguishable from zero given rounded coefficients.
const NEAR_ROOT_REL: f64 = 1e-12;

/// Real roots of `p` in `[lo, hi]`, ascending, each located to within `tol`.
///
/// Roots are isolated on the exact binary value of the coefficients:
/// square-free decomposition gives multiplicities and Sturm sequences
/// separate the distinct roots. Rounded coefficients can turn a double root
/// into a complex pair, so a critical point of `p` where `|p|` is within
/// rounding of zero is also reported, with multiplicity one more than its
/// order as a critical point.
pub fn real_roots(p: &MuPolynomial, lo: f64, hi: f64, tol: f64) -> Result<Vec<RealRoot>> {
    if !(lo < hi && tol > 0.0 && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidInterval { lo, hi, tol });
    }
    if p.coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("polynomial coefficients"));
    }
    if p.is_zero() {
        return Err(Error::DegeneratePencil);
    }
    let exact = RatPoly::from_f64(&p.coeffs);
    let mut roots = roots_of_exact(&exact, lo, hi, tol);
    if p.degree() >= Some(2) {
        for c in roots_of_exact(&exact.derivative(), lo, hi, tol) {
            let near = roots.iter().any(|r| (r.mu - c.mu).abs() <= tol);
            if !near && p.eval(c.mu).abs() <= NEAR_ROOT_REL * p.eval_scale(c.mu) {
                roots.push(RealRoot {
                    mu: c.mu,
                    multiplicity: c.multiplicity + 1,
                });
            }
        }
        roots.sort_by(|x, y| x.mu.total_cmp(&y.mu));
    }
    Ok(roots)
}

pub(crate) fn roots_of_exact(p: &RatPoly, lo: f64, hi: f64, tol: f64) -> Vec<RealRoot> {
    isolate_real_roots(p, lo, hi, tol)
        .into_iter()
        .map(|(mu, multiplicity)| RealRoot { mu, multiplicity })
        .collect()
}
