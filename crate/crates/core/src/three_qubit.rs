//! Closed-form singular values and vectors of three-qubit states in the
//! canonical form
//!
//! ```text
//! a|000> + b|011> + c|101> + d|110> + f|111>,   a >= b >= c >= d >= 0
//! ```
//!
//! For `f = 0` the critical values of `|alpha|` are among `a, b, c, d` and
//! two symmetric quantities of `(a, b, c, d)`: the circumdiameter `D = L/2S`
//! of the cyclic quadrilateral with these side lengths, and `D' = L'/2S'`,
//! its analogue for the self-intersecting quadrilateral. The sign of a single
//! cubic `r_a` decides whether the maximum is `a` or `D`.
//!
//! All formulas here are homogeneous, so unnormalized input is accepted and
//! every value scales linearly with the state.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{overlap, Hypermatrix, ProductTuple, UnitVector};

/// Relative size (against `||Psi||^4`) below which `S^2` or `S'^2` is a pole.
const POLE_REL: f64 = 1e-12;

/// Coefficients of the canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchmidtCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub f: f64,
}

impl SchmidtCoeffs {
    pub fn new(a: f64, b: f64, c: f64, d: f64, f: f64) -> Result<Self> {
        let k = Self { a, b, c, d, f };
        let all = [a, b, c, d, f];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("Schmidt coefficients"));
        }
        if [a, b, c, d].iter().any(|&x| x < 0.0) {
            return Err(Error::InvalidCoefficients(
                "a, b, c, d must be nonnegative".into(),
            ));
        }
        if all.iter().all(|&x| x == 0.0) {
            return Err(Error::InvalidCoefficients(
                "all coefficients are zero".into(),
            ));
        }
        Ok(k)
    }

    /// `f = 0` shorthand.
    pub fn abcd(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(a, b, c, d, 0.0)
    }

    pub fn abcd_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn norm(&self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d + self.f * self.f)
            .sqrt()
    }

    pub fn is_canonical(&self) -> bool {
        self.a >= self.b && self.b >= self.c && self.c >= self.d
    }

    pub fn to_hypermatrix(&self) -> Hypermatrix {
        let mut v = [0.0; 8];
        v[0b000] = self.a;
        v[0b011] = self.b;
        v[0b101] = self.c;
        v[0b110] = self.d;
        v[0b111] = self.f;
        Hypermatrix::from_real(vec![2, 2, 2], &v).expect("fixed 2x2x2 shape")
    }

    fn require_f_zero(&self) -> Result<()> {
        if self.f != 0.0 {
            return Err(Error::UnsupportedForm(format!(
                "closed forms need f = 0, got f = {}",
                self.f
            )));
        }
        Ok(())
    }

    fn require_canonical(&self) -> Result<()> {
        self.require_f_zero()?;
        if !self.is_canonical() {
            return Err(Error::InvalidCoefficients(format!(
                "expected a >= b >= c >= d, got ({}, {}, {}, {}); canonicalize first",
                self.a, self.b, self.c, self.d
            )));
        }
        Ok(())
    }
}

/// Local moves that preserve the injective norm and the canonical shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum CanonicalMove {
    /// `X (x) X` on two qubits; swaps two pairs of coefficients.
    BitFlip { qubits: [usize; 2] },
    /// Qubit `k` of the result is qubit `order[k]` of the input, permuting `b, c, d`.
    Relabel { order: [usize; 3] },
}

/// Brings `f = 0` coefficients to `a >= b >= c >= d` with norm-preserving
/// local moves: one bit flip on a qubit pair to put the largest entry in
/// position `a`, then a relabeling of qubits to sort `b, c, d`.
pub fn canonicalize(raw: &SchmidtCoeffs) -> Result<(SchmidtCoeffs, Vec<CanonicalMove>)> {
    raw.require_f_zero()?;
    let mut v = raw.abcd_array();
    let mut moves = Vec::new();

    // argmax, earliest wins ties so canonical input stays untouched
    let top = (1..4).fold(0, |best, i| if v[i] > v[best] { i } else { best });
    // coefficient k in 1..4 belongs to qubit k-1; the flip exchanging a with it
    // acts on the other two qubits
    if top != 0 {
        let qubits = match top {
            1 => [1, 2],
            2 => [0, 2],
            _ => [0, 1],
        };
        let (p, q) = match top {
            1 => ((0, 1), (2, 3)),
            2 => ((0, 2), (1, 3)),
            _ => ((0, 3), (1, 2)),
        };
        v.swap(p.0, p.1);
        v.swap(q.0, q.1);
        moves.push(CanonicalMove::BitFlip { qubits });
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| v[j + 1].total_cmp(&v[i + 1]));
    if order != [0, 1, 2] {
        let bcd = [v[1], v[2], v[3]];
        for (k, &src) in order.iter().enumerate() {
            v[k + 1] = bcd[src];
        }
        moves.push(CanonicalMove::Relabel { order });
    }
    Ok((SchmidtCoeffs::abcd(v[0], v[1], v[2], v[3])?, moves))
}

/// Symmetric functions of `(a, b, c, d)` entering the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricInvariants {
    /// Semiperimeter `(a+b+c+d)/2`.
    pub s: f64,
    /// `S^2 = (s-a)(s-b)(s-c)(s-d)`, squared area of the cyclic quadrilateral.
    pub s2: f64,
    /// `L^2 = (ab+cd)(ac+bd)(ad+bc)`.
    pub l2: f64,
    /// `S'^2 = S^2 - abcd`.
    pub s2p: f64,
    /// `L'^2 = (cd-ab)(bd-ac)(bc-ad)`.
    pub l2p: f64,
    /// Elementary symmetric functions of `a^2, b^2, c^2, d^2`.
    pub sigma: [f64; 4],
    /// `r_a = -a^3 + a(b^2+c^2+d^2) + 2bcd` and its analogues.
    pub r: [f64; 4],
    /// `r'_a = -a^3 + a(b^2+c^2+d^2) - 2bcd` and its analogues.
    pub rp: [f64; 4],
}

pub fn symmetric_invariants(k: &SchmidtCoeffs) -> Result<SymmetricInvariants> {
    k.require_f_zero()?;
    let [a, b, c, d] = k.abcd_array();
    let s = 0.5 * (a + b + c + d);
    let s2 = (s - a) * (s - b) * (s - c) * (s - d);
    let l2 = (a * b + c * d) * (a * c + b * d) * (a * d + b * c);
    let s2p = s2 - a * b * c * d;
    let l2p = (c * d - a * b) * (b * d - a * c) * (b * c - a * d);
    let (a2, b2, c2, d2) = (a * a, b * b, c * c, d * d);
    let sigma = [
        a2 + b2 + c2 + d2,
        a2 * b2 + a2 * c2 + a2 * d2 + b2 * c2 + b2 * d2 + c2 * d2,
        a2 * b2 * c2 + a2 * b2 * d2 + a2 * c2 * d2 + b2 * c2 * d2,
        a2 * b2 * c2 * d2,
    ];
    let cubic = |x: f64, y: f64, z: f64, w: f64, sign: f64| {
        -x * x * x + x * (y * y + z * z + w * w) + sign * 2.0 * y * z * w
    };
    let r = [
        cubic(a, b, c, d, 1.0),
        cubic(b, a, c, d, 1.0),
        cubic(c, a, b, d, 1.0),
        cubic(d, a, b, c, 1.0),
    ];
    let rp = [
        cubic(a, b, c, d, -1.0),
        cubic(b, a, c, d, -1.0),
        cubic(c, a, b, d, -1.0),
        cubic(d, a, b, c, -1.0),
    ];
    Ok(SymmetricInvariants {
        s,
        s2,
        l2,
        s2p,
        l2p,
        sigma,
        r,
        rp,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CandidateLabel {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "d")]
    D,
    /// `L / 2S`.
    #[serde(rename = "D")]
    Diameter,
    /// `L' / 2S'`.
    #[serde(rename = "D'")]
    DiameterPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateStatus {
    Real,
    Complex,
    /// `S^2` (or `S'^2`) vanishes: the candidate sits on a pole or is `0/0`.
    Undefined,
}

/// One root of the characteristic equation and whether it is a singular value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Candidate {
    pub label: CandidateLabel,
    /// Present when the candidate is real.
    pub value: Option<f64>,
    pub status: CandidateStatus,
    pub is_singular_value: bool,
}

impl Candidate {
    pub fn is_real(&self) -> bool {
        self.status == CandidateStatus::Real
    }
}

fn pole_threshold(k: &SchmidtCoeffs) -> f64 {
    POLE_REL * k.norm().powi(4)
}

/// Whether an odd number of the primed cubics is negative.
pub fn odd_sign_pattern(rp: &[f64; 4]) -> bool {
    rp.iter().filter(|&&x| x < 0.0).count() % 2 == 1
}

/// The candidate list `a, b, c, d, D, D'` with reality and singularity flags.
/// Zero coefficients are left out, since `lambda = 0` is never reported.
pub fn candidate_singular_values(k: &SchmidtCoeffs) -> Result<Vec<Candidate>> {
    k.require_canonical()?;
    let inv = symmetric_invariants(k)?;
    let labels = [
        CandidateLabel::A,
        CandidateLabel::B,
        CandidateLabel::C,
        CandidateLabel::D,
    ];
    let mut out: Vec<Candidate> = labels
        .iter()
        .zip(k.abcd_array())
        .filter(|(_, x)| *x > 0.0)
        .map(|(&label, x)| Candidate {
            label,
            value: Some(x),
            status: CandidateStatus::Real,
            is_singular_value: true,
        })
        .collect();

    let eps = pole_threshold(k);
    let diameter = if inv.s2.abs() <= eps {
        (None, CandidateStatus::Undefined)
    } else if inv.s2 > 0.0 {
        (
            Some((inv.l2 / (4.0 * inv.s2)).sqrt()),
            CandidateStatus::Real,
        )
    } else {
        (None, CandidateStatus::Complex)
    };
    out.push(Candidate {
        label: CandidateLabel::Diameter,
        value: diameter.0,
        status: diameter.1,
        is_singular_value: diameter.0.is_some() && inv.r.iter().all(|&r| r >= 0.0),
    });

    let prime = if inv.s2p.abs() <= eps {
        (None, CandidateStatus::Undefined)
    } else if inv.l2p / inv.s2p >= 0.0 {
        (
            Some((inv.l2p / (4.0 * inv.s2p)).sqrt()),
            CandidateStatus::Real,
        )
    } else {
        (None, CandidateStatus::Complex)
    };
    out.push(Candidate {
        label: CandidateLabel::DiameterPrime,
        value: prime.0,
        status: prime.1,
        is_singular_value: prime.0.is_some() && odd_sign_pattern(&inv.rp),
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GmeBranch {
    /// The maximum is the coefficient `a`.
    A,
    /// The maximum is the circumdiameter `D = L/2S`.
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormGme {
    /// Largest singular value of the (possibly unnormalized) input.
    pub lambda_max: f64,
    /// `lambda_max / ||Psi||`.
    pub normalized_lambda: f64,
    /// `normalized_lambda^2`.
    pub gme_squared_overlap: f64,
    pub branch: GmeBranch,
    /// `r_a == 0`, where both branches give the same value.
    pub tie: bool,
}

/// The injective norm of a canonical `f = 0` state: `a` when `r_a < 0`,
/// `D` when `r_a >= 0`.
pub fn gme_closed_form(k: &SchmidtCoeffs) -> Result<ClosedFormGme> {
    k.require_canonical()?;
    let inv = symmetric_invariants(k)?;
    let ra = inv.r[0];
    let (lambda_max, branch) = if ra >= 0.0 && inv.s2 > pole_threshold(k) {
        ((inv.l2 / (4.0 * inv.s2)).sqrt(), GmeBranch::D)
    } else {
        (k.a, GmeBranch::A)
    };
    let normalized_lambda = lambda_max / k.norm();
    Ok(ClosedFormGme {
        lambda_max,
        normalized_lambda,
        gme_squared_overlap: normalized_lambda * normalized_lambda,
        branch,
        tie: ra == 0.0,
    })
}

/// Singular vectors attached to a candidate.
///
/// The coefficients `a, b, c, d` each have the single basis product state
/// carrying them. `D` needs every `r` nonnegative and `D'` needs an odd sign
/// pattern among the primed cubics; each then has two triples, related by
/// negating the `|1>` component of every factor.
pub fn singular_vectors(k: &SchmidtCoeffs, which: CandidateLabel) -> Result<Vec<ProductTuple>> {
    k.require_canonical()?;
    let basis = |idx: [usize; 3]| ProductTuple::basis(&[2, 2, 2], &idx).map(|p| vec![p]);
    match which {
        CandidateLabel::A => basis([0, 0, 0]),
        CandidateLabel::B => basis([0, 1, 1]),
        CandidateLabel::C => basis([1, 0, 1]),
        CandidateLabel::D => basis([1, 1, 0]),
        CandidateLabel::Diameter => {
            let inv = symmetric_invariants(k)?;
            let names = ["r_a", "r_b", "r_c", "r_d"];
            if let Some(i) = inv.r.iter().position(|&r| r < 0.0) {
                return Err(Error::NoRealSingularVector(format!(
                    "{} = {} is negative",
                    names[i], inv.r[i]
                )));
            }
            if inv.s2 <= pole_threshold(k) {
                return Err(Error::NoRealSingularVector(format!(
                    "S^2 = {} is not positive",
                    inv.s2
                )));
            }
            let [a, b, c, d] = k.abcd_array();
            let s = inv.s2.sqrt();
            let scales = [
                4.0 * s * (a * b + c * d).sqrt(),
                4.0 * s * (a * c + b * d).sqrt(),
                4.0 * s * (a * d + b * c).sqrt(),
            ];
            vector_pair(k, &inv.r, scales)
        }
        CandidateLabel::DiameterPrime => {
            let inv = symmetric_invariants(k)?;
            if inv.s2p.abs() <= pole_threshold(k) || inv.l2p / inv.s2p < 0.0 {
                return Err(Error::NoRealSingularVector("D' is not real".into()));
            }
            if !odd_sign_pattern(&inv.rp) {
                return Err(Error::NoRealSingularVector(format!(
                    "primed cubics {:?} have an even number of negative entries",
                    inv.rp
                )));
            }
            let [a, b, c, d] = k.abcd_array();
            let s = inv.s2p.abs().sqrt();
            let scales = [
                4.0 * s * (c * d - a * b).abs().sqrt(),
                4.0 * s * (b * d - a * c).abs().sqrt(),
                4.0 * s * (b * c - a * d).abs().sqrt(),
            ];
            vector_pair(k, &inv.rp, scales)
        }
    }
}

/// Factors `(sqrt(r_c r_d), sqrt(r_a r_b))`, `(sqrt(r_b r_d), sqrt(r_a r_c))`,
/// `(sqrt(r_b r_c), sqrt(r_a r_d))` with principal complex square roots, so
/// that negative products contribute imaginary components, plus the partner
/// with every `|1>` component negated.
fn vector_pair(k: &SchmidtCoeffs, r: &[f64; 4], scales: [f64; 3]) -> Result<Vec<ProductTuple>> {
    let sq = |x: f64| Complex64::new(x, 0.0).sqrt();
    let [ra, rb, rc, rd] = *r;
    let raw = [
        [sq(rc * rd), sq(ra * rb)],
        [sq(rb * rd), sq(ra * rc)],
        [sq(rb * rc), sq(ra * rd)],
    ];
    for (comp, scale) in raw.iter().zip(scales) {
        let n = (comp[0].norm_sqr() + comp[1].norm_sqr()).sqrt();
        debug_assert!(
            (n / scale - 1.0).abs() <= 1e-9,
            "normalization identity off: {n} vs {scale}"
        );
    }
    let h = k.to_hypermatrix();
    [1.0, -1.0]
        .iter()
        .map(|&sign| {
            let factors = raw
                .iter()
                .map(|comp| UnitVector::new(vec![comp[0], comp[1] * sign]))
                .collect::<Result<Vec<_>>>()?;
            phase_fixed(&h, factors)
        })
        .collect()
}

fn phase_fixed(h: &Hypermatrix, mut factors: Vec<UnitVector>) -> Result<ProductTuple> {
    let alpha = overlap(h, &ProductTuple::new(factors.clone()))?;
    if alpha.norm() > 0.0 {
        factors[0] = factors[0].with_phase(alpha.conj());
    }
    Ok(ProductTuple::new(factors))
}

/// Everything the closed forms say about an `f = 0` state.
#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormRecord {
    pub input: SchmidtCoeffs,
    pub canonical: SchmidtCoeffs,
    pub moves: Vec<CanonicalMove>,
    pub invariants: SymmetricInvariants,
    pub candidates: Vec<Candidate>,
    pub gme: ClosedFormGme,
    /// Singular vectors of the maximizing branch, for the canonical state.
    pub vectors: Vec<ProductTuple>,
}

pub fn closed_form_record(raw: &SchmidtCoeffs) -> Result<ClosedFormRecord> {
    let (canonical, moves) = canonicalize(raw)?;
    let gme = gme_closed_form(&canonical)?;
    let label = match gme.branch {
        GmeBranch::A => CandidateLabel::A,
        GmeBranch::D => CandidateLabel::Diameter,
    };
    Ok(ClosedFormRecord {
        input: *raw,
        canonical,
        moves,
        invariants: symmetric_invariants(&canonical)?,
        candidates: candidate_singular_values(&canonical)?,
        gme,
        vectors: singular_vectors(&canonical, label)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::residual;
    use approx::assert_relative_eq;

    const T: f64 = 0.577_350_269_189_625_8; // 1/sqrt(3)

    #[test]
    fn canonicalize_examples() {
        let (k, moves) = canonicalize(&SchmidtCoeffs::abcd(0.5, 0.5, 0.5, 0.5).unwrap()).unwrap();
        assert_eq!(k.abcd_array(), [0.5; 4]);
        assert!(moves.is_empty());

        let (k, moves) = canonicalize(&SchmidtCoeffs::abcd(0.0, T, T, T).unwrap()).unwrap();
        assert_eq!(k.abcd_array(), [T, T, T, 0.0]);
        assert_eq!(moves[0], CanonicalMove::BitFlip { qubits: [1, 2] });

        let (k, _) = canonicalize(&SchmidtCoeffs::abcd(0.3, 0.7, 0.4, 0.5).unwrap()).unwrap();
        assert_eq!(k.abcd_array(), [0.7, 0.5, 0.4, 0.3]);

        assert!(matches!(
            canonicalize(&SchmidtCoeffs::new(0.5, 0.5, 0.5, 0.4, 0.1).unwrap()),
            Err(Error::UnsupportedForm(_))
        ));
    }

    #[test]
    fn moves_reproduce_the_canonical_tensor() {
        let raw = SchmidtCoeffs::abcd(0.2, 0.3, 0.9, 0.5).unwrap();
        let (k, moves) = canonicalize(&raw).unwrap();
        let x = [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let mut h = raw.to_hypermatrix();
        for m in moves {
            h = match m {
                CanonicalMove::BitFlip { qubits } => h
                    .apply_local(qubits[0], &x)
                    .unwrap()
                    .apply_local(qubits[1], &x)
                    .unwrap(),
                CanonicalMove::Relabel { order } => h.permute_factors(&order).unwrap(),
            };
        }
        assert_eq!(h, k.to_hypermatrix());
    }

    #[test]
    fn invariants_of_uniform_state() {
        let inv = symmetric_invariants(&SchmidtCoeffs::abcd(0.5, 0.5, 0.5, 0.5).unwrap()).unwrap();
        assert_relative_eq!(inv.s, 1.0);
        assert_relative_eq!(inv.s2, 1.0 / 16.0);
        assert_relative_eq!(inv.l2, 1.0 / 8.0);
        assert_eq!(inv.s2p, 0.0);
        assert_eq!(inv.l2p, 0.0);
        for r in inv.r {
            assert_relative_eq!(r, 0.5);
        }
    }

    #[test]
    fn invariants_of_w_state() {
        let inv = symmetric_invariants(&SchmidtCoeffs::abcd(T, T, T, 0.0).unwrap()).unwrap();
        assert_relative_eq!(inv.s2, 1.0 / 48.0, max_relative = 1e-14);
        assert_relative_eq!(inv.l2, 1.0 / 27.0, max_relative = 1e-14);
        let t = 1.0 / (3.0 * 3f64.sqrt());
        assert_relative_eq!(inv.r[0], t, max_relative = 1e-14);
        assert_relative_eq!(inv.r[1], t, max_relative = 1e-14);
        assert_relative_eq!(inv.r[2], t, max_relative = 1e-14);
        assert_relative_eq!(inv.r[3], 2.0 * t, max_relative = 1e-14);
    }

    #[test]
    fn invariants_of_generic_state() {
        let inv = symmetric_invariants(&SchmidtCoeffs::abcd(0.7, 0.5, 0.4, 0.3).unwrap()).unwrap();
        assert_relative_eq!(inv.s, 0.95, max_relative = 1e-14);
        assert_relative_eq!(inv.s2, 0.04021875, max_relative = 1e-12);
        assert_relative_eq!(inv.l2, 0.082861, max_relative = 1e-12);
        assert_relative_eq!(inv.l2p, -0.000299, max_relative = 1e-9);
        assert_relative_eq!(inv.r[0], 0.127, max_relative = 1e-12);
        assert_relative_eq!(inv.sigma[0], 0.99, max_relative = 1e-14);
        assert_relative_eq!(inv.sigma[1], 0.3219, max_relative = 1e-14);
        assert_relative_eq!(inv.sigma[2], 0.041281, max_relative = 1e-13);
        assert_relative_eq!(inv.sigma[3], 0.001764, max_relative = 1e-13);
    }

    fn candidate(list: &[Candidate], label: CandidateLabel) -> Candidate {
        *list.iter().find(|c| c.label == label).unwrap()
    }

    #[test]
    fn candidates_of_uniform_state() {
        let c =
            candidate_singular_values(&SchmidtCoeffs::abcd(0.5, 0.5, 0.5, 0.5).unwrap()).unwrap();
        let d = candidate(&c, CandidateLabel::Diameter);
        assert!(d.is_real() && d.is_singular_value);
        assert_relative_eq!(d.value.unwrap(), 0.5f64.sqrt(), max_relative = 1e-14);
        let dp = candidate(&c, CandidateLabel::DiameterPrime);
        assert_eq!(dp.status, CandidateStatus::Undefined);
        assert!(!dp.is_singular_value);
    }

    #[test]
    fn candidates_when_a_dominates() {
        let t = (0.19f64 / 3.0).sqrt();
        let k = SchmidtCoeffs::abcd(0.9, t, t, t).unwrap();
        let inv = symmetric_invariants(&k).unwrap();
        assert!(inv.s2 < 0.0);
        assert!((inv.r[0] - -0.52612).abs() < 1e-5, "{}", inv.r[0]);
        let c = candidate_singular_values(&k).unwrap();
        assert_eq!(
            candidate(&c, CandidateLabel::Diameter).status,
            CandidateStatus::Complex
        );
        let g = gme_closed_form(&k).unwrap();
        assert_eq!(g.branch, GmeBranch::A);
        assert_eq!(g.lambda_max, 0.9);
    }

    #[test]
    fn crossed_diameter_exceeds_diameter_but_is_not_singular() {
        let k = SchmidtCoeffs::abcd(1.0, 0.99, 0.2, 0.18).unwrap();
        let c = candidate_singular_values(&k).unwrap();
        let d = candidate(&c, CandidateLabel::Diameter);
        let dp = candidate(&c, CandidateLabel::DiameterPrime);
        assert!((d.value.unwrap() - 1.013311).abs() < 1e-4);
        // exact: sqrt(L'^2 / 4S'^2) with L'^2 = (cd-ab)(bd-ac)(bc-ad)
        assert!((dp.value.unwrap() - 1.143_723_235).abs() < 1e-8);
        assert!(dp.value > d.value);
        assert!(!dp.is_singular_value);
        let rp = symmetric_invariants(&k).unwrap().rp;
        assert!(rp[0] < 0.0 && rp[1] > 0.0 && rp[2] > 0.0 && rp[3] < 0.0);
        let g = gme_closed_form(&k).unwrap();
        assert_eq!(g.branch, GmeBranch::D);
        assert!((g.normalized_lambda - 0.70730).abs() < 1e-5);
    }

    #[test]
    fn gme_closed_form_examples() {
        let g = gme_closed_form(&SchmidtCoeffs::abcd(T, T, T, 0.0).unwrap()).unwrap();
        assert_eq!(g.branch, GmeBranch::D);
        assert_relative_eq!(g.lambda_max, 2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(g.gme_squared_overlap, 4.0 / 9.0, max_relative = 1e-14);

        let g = gme_closed_form(&SchmidtCoeffs::abcd(0.7, 0.5, 0.4, 0.3).unwrap()).unwrap();
        assert!((g.lambda_max - 0.717680).abs() < 1e-6);
        assert!((g.normalized_lambda - 0.721295).abs() < 1e-6);
    }

    #[test]
    fn branches_meet_where_ra_vanishes() {
        // r_a = 0 exactly: a = 1, b = c = d chosen so -1 + 3t^2 + 2t^3 = 0 -> t = 1/2
        let k = SchmidtCoeffs::abcd(1.0, 0.5, 0.5, 0.5).unwrap();
        let inv = symmetric_invariants(&k).unwrap();
        assert_eq!(inv.r[0], 0.0);
        let g = gme_closed_form(&k).unwrap();
        assert!(g.tie);
        assert_eq!(g.branch, GmeBranch::D);
        assert!((g.lambda_max - k.a).abs() <= 1e-12);
    }

    #[test]
    fn basis_vectors_for_coefficients() {
        let k = SchmidtCoeffs::abcd(0.7, 0.5, 0.4, 0.3).unwrap();
        let h = k.to_hypermatrix();
        for (label, value) in [
            (CandidateLabel::A, 0.7),
            (CandidateLabel::B, 0.5),
            (CandidateLabel::C, 0.4),
            (CandidateLabel::D, 0.3),
        ] {
            let v = singular_vectors(&k, label).unwrap();
            assert_eq!(v.len(), 1);
            assert_eq!(residual(&h, value, &v[0]).unwrap(), 0.0);
        }
    }

    #[test]
    fn w_state_diameter_vectors() {
        let k = SchmidtCoeffs::abcd(T, T, T, 0.0).unwrap();
        let h = k.to_hypermatrix();
        let v = singular_vectors(&k, CandidateLabel::Diameter).unwrap();
        assert_eq!(v.len(), 2);
        let u = v[0].factor(0).components();
        assert!((u[0].norm() - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
        assert!((u[1].norm() - (1.0f64 / 3.0).sqrt()).abs() < 1e-14);
        let w = v[0].factor(2).components();
        assert!((w[0].norm() - (1.0f64 / 3.0).sqrt()).abs() < 1e-14);
        for p in &v {
            assert!((overlap(&h, p).unwrap().re - 2.0 / 3.0).abs() < 1e-14);
            assert!(residual(&h, 2.0 / 3.0, p).unwrap() < 1e-14);
        }
        // the two first factors are not orthogonal
        let ip = v[0].factor(0).inner(v[1].factor(0)).norm();
        assert!((ip - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn missing_vectors_name_the_failing_sign() {
        let t = (0.19f64 / 3.0).sqrt();
        let k = SchmidtCoeffs::abcd(0.9, t, t, t).unwrap();
        match singular_vectors(&k, CandidateLabel::Diameter) {
            Err(Error::NoRealSingularVector(msg)) => assert!(msg.contains("r_a")),
            other => panic!("{other:?}"),
        }
        let k = SchmidtCoeffs::abcd(1.0, 0.99, 0.2, 0.18).unwrap();
        assert!(matches!(
            singular_vectors(&k, CandidateLabel::DiameterPrime),
            Err(Error::NoRealSingularVector(_))
        ));
    }

    #[test]
    fn closed_forms_reject_f() {
        let k = SchmidtCoeffs::new(0.7, 0.5, 0.4, 0.3, 0.1).unwrap();
        assert!(matches!(
            gme_closed_form(&k),
            Err(Error::UnsupportedForm(_))
        ));
        assert!(matches!(
            symmetric_invariants(&k),
            Err(Error::UnsupportedForm(_))
        ));
    }
}
