//! The characteristic polynomial of a 2x2x2 hypermatrix in canonical form.
//!
//! Fixing the third factor to `z`, the remaining two factors see the 2x2
//! matrix `A(z)`. The quantity `det[A(z)^+ A(z) - mu (z^+ z) I]` is quadratic
//! in `z` and in `conj(z)`; writing it as `F z0^2 + G z0 z1 + H z1^2`, the
//! quartic `G^2 - 4FH` in `conj(z)` has a repeated root exactly when `mu` is
//! a candidate squared singular value. Its discriminant `Delta(mu)` is the
//! characteristic polynomial, of degree 12 in `mu`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{exact, frac, RatPoly, Q};
use crate::poly::{roots_of_exact, MuPolynomial, RealRoot};
use crate::three_qubit::{symmetric_invariants, SchmidtCoeffs};

/// `Delta` counts as identically zero when its coefficients are below this
/// fraction of the scale of `27B^2` and `A^3`.
pub const DEGENERATE_REL: f64 = 1e-12;

/// `[[a z0, b z1], [c z1, d z0 + f z1]]`.
pub fn pencil_matrix(k: &SchmidtCoeffs, z: [Complex64; 2]) -> [[Complex64; 2]; 2] {
    [
        [z[0] * k.a, z[1] * k.b],
        [z[1] * k.c, z[0] * k.d + z[1] * k.f],
    ]
}

/// Coefficients of `alpha x0^4 + beta x0^3 x1 + gamma x0^2 x1^2 + delta x0 x1^3 + epsilon x1^4`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuarticCoeffs {
    pub alpha: MuPolynomial,
    pub beta: MuPolynomial,
    pub gamma: MuPolynomial,
    pub delta: MuPolynomial,
    pub epsilon: MuPolynomial,
}

impl QuarticCoeffs {
    pub fn as_array(&self) -> [&MuPolynomial; 5] {
        [
            &self.alpha,
            &self.beta,
            &self.gamma,
            &self.delta,
            &self.epsilon,
        ]
    }
}

/// Polynomial in `z0, z1, w0, w1, mu` where `w = conj(z)`.
#[derive(Debug, Clone, Default)]
struct Multi(BTreeMap<[u32; 5], Q>);

const Z0: usize = 0;
const Z1: usize = 1;
const W0: usize = 2;
const W1: usize = 3;
const MU: usize = 4;

impl Multi {
    fn var(i: usize, c: &Q) -> Self {
        let mut e = [0; 5];
        e[i] = 1;
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c.clone());
        }
        Self(m)
    }

    fn add(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (e, c) in &o.0 {
            *m.entry(*e).or_insert_with(Q::zero) += c;
        }
        Self(m)
    }

    fn scale(&self, s: &Q) -> Self {
        Self(self.0.iter().map(|(e, c)| (*e, c * s)).collect())
    }

    fn mul(&self, o: &Self) -> Self {
        let mut m = BTreeMap::new();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                let e = std::array::from_fn(|i| e1[i] + e2[i]);
                *m.entry(e).or_insert_with(Q::zero) += c1 * c2;
            }
        }
        Self(m)
    }

    /// Terms with the given `z` exponents, with those exponents removed.
    fn coefficient_of_z(&self, z0: u32, z1: u32) -> Self {
        Self(
            self.0
                .iter()
                .filter(|(e, _)| e[Z0] == z0 && e[Z1] == z1)
                .map(|(e, c)| ([0, 0, e[W0], e[W1], e[MU]], c.clone()))
                .collect(),
        )
    }

    /// The `mu` polynomial multiplying `w0^p w1^q`.
    fn mu_coefficient(&self, p: u32, q: u32) -> RatPoly {
        let mut dense = Vec::new();
        for (e, c) in &self.0 {
            if e[W0] == p && e[W1] == q && e[Z0] == 0 && e[Z1] == 0 {
                let k = e[MU] as usize;
                if dense.len() <= k {
                    dense.resize(k + 1, Q::zero());
                }
                dense[k] += c;
            }
        }
        RatPoly::new(dense)
    }
}

/// `[alpha, beta, gamma, delta, epsilon]` by exact expansion of `G^2 - 4FH`.
fn quartic_exact(k: &SchmidtCoeffs) -> [RatPoly; 5] {
    let (a, b, c, d, f) = (exact(k.a), exact(k.b), exact(k.c), exact(k.d), exact(k.f));
    let zero = Q::zero();
    let one = Q::one();
    let entry = |v: [usize; 2], w: [&Q; 2]| Multi::var(v[0], w[0]).add(&Multi::var(v[1], w[1]));
    // A and its conjugate (the coefficients are real)
    let pencil = |v: [usize; 2]| {
        [
            [entry(v, [&a, &zero]), entry(v, [&zero, &b])],
            [entry(v, [&zero, &c]), entry(v, [&d, &f])],
        ]
    };
    let az = pencil([Z0, Z1]);
    let aw = pencil([W0, W1]);
    // m_ij = sum_k conj(A_ki) A_kj
    let m = |i: usize, j: usize| aw[0][i].mul(&az[0][j]).add(&aw[1][i].mul(&az[1][j]));
    let beta = Multi::var(W0, &one)
        .mul(&Multi::var(Z0, &one))
        .add(&Multi::var(W1, &one).mul(&Multi::var(Z1, &one)));
    let shift = Multi::var(MU, &-one.clone()).mul(&beta);
    let det = m(0, 0)
        .add(&shift)
        .mul(&m(1, 1).add(&shift))
        .add(&m(0, 1).mul(&m(1, 0)).scale(&-one.clone()));

    let ff = det.coefficient_of_z(2, 0);
    let g = det.coefficient_of_z(1, 1);
    let h = det.coefficient_of_z(0, 2);
    let quartic = g.mul(&g).add(&ff.mul(&h).scale(&frac(-4, 1)));
    [
        quartic.mu_coefficient(4, 0),
        quartic.mu_coefficient(3, 1),
        quartic.mu_coefficient(2, 2),
        quartic.mu_coefficient(1, 3),
        quartic.mu_coefficient(0, 4),
    ]
}

/// Expands `G^2 - 4FH` symbolically and reads off the quartic coefficients.
pub fn quartic_coeffs(k: &SchmidtCoeffs) -> QuarticCoeffs {
    let [alpha, beta, gamma, delta, epsilon] =
        quartic_exact(k).map(|p| MuPolynomial::new(p.to_f64()));
    QuarticCoeffs {
        alpha,
        beta,
        gamma,
        delta,
        epsilon,
    }
}

/// `(27B^2, A^3)`, kept apart for degeneracy checks.
fn discriminant_terms(q: &[RatPoly; 5]) -> (RatPoly, RatPoly) {
    let [al, be, ga, de, ep] = q;
    let big_a = al
        .mul(ep)
        .sub(&be.mul(de).scale(&frac(1, 4)))
        .add(&ga.mul(ga).scale(&frac(1, 12)));
    let big_b = al
        .mul(ga)
        .mul(ep)
        .scale(&frac(1, 6))
        .sub(
            &al.mul(de)
                .mul(de)
                .add(&be.mul(be).mul(ep))
                .scale(&frac(1, 16)),
        )
        .add(&be.mul(ga).mul(de).scale(&frac(1, 48)))
        .sub(&ga.mul(ga).mul(ga).scale(&frac(1, 216)));
    (
        big_b.mul(&big_b).scale(&frac(27, 1)),
        big_a.mul(&big_a).mul(&big_a),
    )
}

/// `Delta = 27B^2 - A^3` with
/// `A = alpha eps - beta delta/4 + gamma^2/12` and
/// `B = alpha gamma eps/6 - (alpha delta^2 + beta^2 eps)/16 + beta gamma delta/48 - gamma^3/216`,
/// evaluated exactly on the given coefficients and rounded once.
pub fn discriminant_poly(q: &QuarticCoeffs) -> MuPolynomial {
    let exact_q = q.as_array().map(|p| RatPoly::from_f64(p.coeffs()));
    let (b2, a3) = discriminant_terms(&exact_q);
    MuPolynomial::new(b2.sub(&a3).to_f64())
}

/// The `f = 0` discriminant in factored form,
/// `-256 a^2 b^2 c^2 d^2 (mu-a^2)(mu-b^2)(mu-c^2)(mu-d^2) Q^2` with
/// `Q = mu^2 (4 S^2 mu - L^2)(4 S'^2 mu - L'^2)`.
///
/// With `beta = delta = 0` the discriminant is `-(alpha eps / 16)(gamma^2 - 4 alpha eps)^2`
/// and `gamma^2 - 4 alpha eps = 16 Q`, which fixes the constant.
pub fn factorized_discriminant_f0(k: &SchmidtCoeffs) -> Result<MuPolynomial> {
    let inv = symmetric_invariants(k)?;
    let [a, b, c, d] = k.abcd_array();
    let abcd = a * b * c * d;
    // S'^2 in product form, free of the cancellation in S^2 - abcd
    let s2p = (a + b + c + d) * (a + b - c - d) * (a - b + c - d) * (-a + b + c - d) / 16.0;
    let linear = |slope: f64, offset: f64| MuPolynomial::new(vec![-offset, slope]);
    let q = &(&MuPolynomial::new(vec![0.0, 0.0, 1.0]) * &linear(4.0 * inv.s2, inv.l2))
        * &linear(4.0 * s2p, inv.l2p);
    let lead = -256.0 * abcd * abcd;
    let quads = MuPolynomial::from_roots(lead, &[a * a, b * b, c * c, d * d]);
    Ok(&quads * &(&q * &q))
}

/// Characteristic polynomial of a canonical-form state.
#[derive(Debug, Clone, Serialize)]
pub struct CharPoly {
    pub quartic: QuarticCoeffs,
    /// `Delta(mu)`, computed exactly from the coefficients and rounded once.
    pub delta: MuPolynomial,
    /// Largest coefficient of `27B^2` or `A^3`, the size of the terms that cancel.
    pub scale: f64,
    /// Every coefficient of `Delta` is at most `DEGENERATE_REL * scale`:
    /// every `mu` is a root.
    pub degenerate: bool,
    #[serde(skip)]
    exact_delta: RatPoly,
}

pub fn characteristic_polynomial(k: &SchmidtCoeffs) -> CharPoly {
    let q = quartic_exact(k);
    let (b2, a3) = discriminant_terms(&q);
    let scale = b2.max_abs().max(a3.max_abs());
    let exact_delta = b2.sub(&a3);
    let delta = MuPolynomial::new(exact_delta.to_f64());
    let [alpha, beta, gamma, delta_q, epsilon] = q.map(|p| MuPolynomial::new(p.to_f64()));
    CharPoly {
        degenerate: delta.max_abs_coeff() <= DEGENERATE_REL * scale,
        quartic: QuarticCoeffs {
            alpha,
            beta,
            gamma,
            delta: delta_q,
            epsilon,
        },
        delta,
        scale,
        exact_delta,
    }
}

impl CharPoly {
    /// Real roots of `Delta` in `[lo, hi]`, isolated on its exact value
    /// rather than on the rounded coefficients in [`delta`](Self::delta).
    pub fn roots(&self, lo: f64, hi: f64, tol: f64) -> Result<Vec<RealRoot>> {
        if !(lo < hi && tol > 0.0 && lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidInterval { lo, hi, tol });
        }
        if self.degenerate {
            return Err(Error::DegeneratePencil);
        }
        Ok(roots_of_exact(&self.exact_delta, lo, hi, tol))
    }
}

/// Real roots of `Delta` in `[0, ||Psi||^2]`, where every singular value
/// squared must lie. Fails with [`Error::DegeneratePencil`] when `Delta` is
/// identically zero.
pub fn characteristic_roots(k: &SchmidtCoeffs, tol: f64) -> Result<Vec<RealRoot>> {
    characteristic_polynomial(k).roots(0.0, k.norm().powi(2), tol)
}
