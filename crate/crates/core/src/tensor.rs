//! Dense complex hypermatrices and the multilinear form they define.
//!
//! A hypermatrix `a[i1,...,in]` with shape `(d1,...,dn)` is stored in
//! row-major order (last index fastest). Paired with one vector per factor
//! space it defines the multilinear form
//!
//! ```text
//! alpha(u1,...,un) = sum a[i1,...,in] u1[i1] ... un[in]
//! ```
//!
//! whose critical points on the product of unit spheres are the singular
//! values of the hypermatrix. Factor indices in this crate are zero-based.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance on the norm of a [`UnitVector`].
pub const UNIT_TOL: f64 = 1e-12;

/// Dense complex coefficient array.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypermatrix {
    shape: Vec<usize>,
    coeffs: Vec<Complex64>,
}

impl Hypermatrix {
    pub fn new(shape: Vec<usize>, coeffs: Vec<Complex64>) -> Result<Self> {
        if shape.len() < 2 || shape.contains(&0) {
            return Err(Error::InvalidShape(shape));
        }
        let expected: usize = shape.iter().product();
        if coeffs.len() != expected {
            return Err(Error::CoeffCount {
                expected,
                found: coeffs.len(),
            });
        }
        if coeffs
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite("hypermatrix coefficients"));
        }
        Ok(Self { shape, coeffs })
    }

    pub fn zeros(shape: Vec<usize>) -> Result<Self> {
        let len = shape.iter().product();
        Self::new(shape, vec![Complex64::new(0.0, 0.0); len])
    }

    /// Builds a hypermatrix from a function of the multi-index.
    pub fn from_fn(shape: Vec<usize>, mut f: impl FnMut(&[usize]) -> Complex64) -> Result<Self> {
        let len: usize = shape.iter().product();
        let mut coeffs = Vec::with_capacity(len);
        let mut idx = vec![0usize; shape.len()];
        for _ in 0..len {
            coeffs.push(f(&idx));
            advance(&mut idx, &shape);
        }
        Self::new(shape, coeffs)
    }

    /// Real-valued entries, convenient for tests and canonical forms.
    pub fn from_real(shape: Vec<usize>, values: &[f64]) -> Result<Self> {
        Self::new(
            shape,
            values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Number of factor spaces.
    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub fn get(&self, idx: &[usize]) -> Complex64 {
        self.coeffs[self.flat_index(idx)]
    }

    /// Euclidean (Frobenius) norm of the coefficient array.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scaled(&self, t: Complex64) -> Self {
        Self {
            shape: self.shape.clone(),
            coeffs: self.coeffs.iter().map(|&z| z * t).collect(),
        }
    }

    /// Coefficients divided by the norm. Fails on the zero hypermatrix.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroTensor);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    /// Applies the `d x d` matrix `m` (row-major) to factor slot `slot`:
    /// `a'[.., i, ..] = sum_j m[i][j] a[.., j, ..]`.
    pub fn apply_local(&self, slot: usize, m: &[Complex64]) -> Result<Self> {
        let d = *self.shape.get(slot).ok_or(Error::FactorIndex {
            index: slot,
            order: self.order(),
        })?;
        if m.len() != d * d {
            return Err(Error::DimensionMismatch {
                what: "local transformation",
                expected: d * d,
                found: m.len(),
            });
        }
        let inner: usize = self.shape[slot + 1..].iter().product();
        let outer: usize = self.shape[..slot].iter().product();
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len()];
        for o in 0..outer {
            for i in 0..d {
                for j in 0..d {
                    let mij = m[i * d + j];
                    if mij == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let dst = (o * d + i) * inner;
                    let src = (o * d + j) * inner;
                    for k in 0..inner {
                        out[dst + k] += mij * self.coeffs[src + k];
                    }
                }
            }
        }
        Self::new(self.shape.clone(), out)
    }

    /// Reorders factor slots: slot `s` of the result is slot `perm[s]` of `self`.
    pub fn permute_factors(&self, perm: &[usize]) -> Result<Self> {
        let n = self.order();
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidShape(perm.to_vec()));
        }
        let shape: Vec<usize> = perm.iter().map(|&p| self.shape[p]).collect();
        let mut src = vec![0usize; n];
        Self::from_fn(shape, |idx| {
            for (s, &p) in perm.iter().enumerate() {
                src[p] = idx[s];
            }
            self.get(&src)
        })
    }

    /// Contracts every factor except those listed in `keep` (ascending).
    /// The result is laid out row-major over the kept indices.
    pub(crate) fn contract_except(&self, factors: &[UnitVector], keep: &[usize]) -> Vec<Complex64> {
        let out_len: usize = keep.iter().map(|&k| self.shape[k]).product();
        let mut out = vec![Complex64::new(0.0, 0.0); out_len];
        let mut idx = vec![0usize; self.order()];
        for &a in &self.coeffs {
            if a.re != 0.0 || a.im != 0.0 {
                let mut w = a;
                let mut pos = 0usize;
                let mut kept = keep.iter().peekable();
                for (r, &i) in idx.iter().enumerate() {
                    if kept.peek() == Some(&&r) {
                        kept.next();
                        pos = pos * self.shape[r] + i;
                    } else {
                        w *= factors[r].0[i];
                    }
                }
                out[pos] += w;
            }
            advance(&mut idx, &self.shape);
        }
        out
    }
}

fn advance(idx: &mut [usize], shape: &[usize]) {
    for r in (0..idx.len()).rev() {
        idx[r] += 1;
        if idx[r] < shape[r] {
            return;
        }
        idx[r] = 0;
    }
}

/// A complex vector of unit Euclidean norm.
/// Serialized as a list of `[re, im]` pairs; deserialization renormalizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct UnitVector(Vec<Complex64>);

impl TryFrom<Vec<Complex64>> for UnitVector {
    type Error = Error;
    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<UnitVector> for Vec<Complex64> {
    fn from(u: UnitVector) -> Self {
        u.0
    }
}

impl UnitVector {
    /// Normalizes `components`. The zero vector is rejected.
    pub fn new(components: Vec<Complex64>) -> Result<Self> {
        if components
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite("unit vector"));
        }
        let n = components.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if components.is_empty() || n == 0.0 || !n.is_normal() {
            return Err(Error::ZeroVector);
        }
        Ok(Self(components.into_iter().map(|z| z / n).collect()))
    }

    /// Wraps components without normalizing; callers own the invariant.
    pub(crate) fn raw(components: Vec<Complex64>) -> Self {
        Self(components)
    }

    pub fn from_real(components: &[f64]) -> Result<Self> {
        Self::new(components.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Basis vector `e_i` of dimension `d`.
    pub fn basis(d: usize, i: usize) -> Result<Self> {
        if i >= d {
            return Err(Error::FactorIndex { index: i, order: d });
        }
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[i] = Complex64::new(1.0, 0.0);
        Ok(Self(v))
    }

    /// Uniform superposition `(1,...,1)/sqrt(d)`.
    pub fn uniform(d: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(1.0, 0.0); d])
    }

    pub fn components(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplies by a unimodular phase; the norm is unchanged.
    pub fn with_phase(&self, phase: Complex64) -> Self {
        let p = phase / phase.norm();
        Self(self.0.iter().map(|&z| z * p).collect())
    }

    /// Hermitian inner product `<self|other>`.
    pub fn inner(&self, other: &UnitVector) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }
}

/// One unit vector per factor space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProductTuple(Vec<UnitVector>);

impl ProductTuple {
    pub fn new(factors: Vec<UnitVector>) -> Self {
        Self(factors)
    }

    /// Checks the tuple against a hypermatrix shape.
    pub fn check_shape(&self, shape: &[usize]) -> Result<()> {
        if self.0.len() != shape.len() {
            return Err(Error::DimensionMismatch {
                what: "factor count",
                expected: shape.len(),
                found: self.0.len(),
            });
        }
        for (u, &d) in self.0.iter().zip(shape) {
            if u.len() != d {
                return Err(Error::DimensionMismatch {
                    what: "factor length",
                    expected: d,
                    found: u.len(),
                });
            }
        }
        Ok(())
    }

    /// The product of computational basis states `|i1>...|in>`.
    pub fn basis(shape: &[usize], idx: &[usize]) -> Result<Self> {
        if shape.len() != idx.len() {
            return Err(Error::DimensionMismatch {
                what: "basis index",
                expected: shape.len(),
                found: idx.len(),
            });
        }
        Ok(Self(
            shape
                .iter()
                .zip(idx)
                .map(|(&d, &i)| UnitVector::basis(d, i))
                .collect::<Result<_>>()?,
        ))
    }

    pub fn uniform(shape: &[usize]) -> Result<Self> {
        Ok(Self(
            shape
                .iter()
                .map(|&d| UnitVector::uniform(d))
                .collect::<Result<_>>()?,
        ))
    }

    pub fn factors(&self) -> &[UnitVector] {
        &self.0
    }

    pub fn factor(&self, r: usize) -> &UnitVector {
        &self.0[r]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn with_factor(&self, r: usize, u: UnitVector) -> Self {
        let mut f = self.0.clone();
        f[r] = u;
        Self(f)
    }

    pub fn into_factors(self) -> Vec<UnitVector> {
        self.0
    }
}

/// Full contraction `alpha(u1,...,un)`.
pub fn overlap(h: &Hypermatrix, p: &ProductTuple) -> Result<Complex64> {
    p.check_shape(h.shape())?;
    Ok(h.contract_except(p.factors(), &[])[0])
}

/// Contraction with factor `r` omitted; a vector of length `d_r`.
pub fn partial_contract(h: &Hypermatrix, p: &ProductTuple, r: usize) -> Result<Vec<Complex64>> {
    p.check_shape(h.shape())?;
    if r >= h.order() {
        return Err(Error::FactorIndex {
            index: r,
            order: h.order(),
        });
    }
    Ok(h.contract_except(p.factors(), &[r]))
}

/// Maximum deviation from the singular-value equations,
/// `max_r || partial_contract(r) - lambda * conj(u_r) ||_inf`.
pub fn residual(h: &Hypermatrix, lambda: f64, p: &ProductTuple) -> Result<f64> {
    p.check_shape(h.shape())?;
    let mut worst = 0.0f64;
    for r in 0..h.order() {
        let g = h.contract_except(p.factors(), &[r]);
        for (gi, ui) in g.iter().zip(p.factor(r).components()) {
            worst = worst.max((gi - lambda * ui.conj()).norm());
        }
    }
    Ok(worst)
}
