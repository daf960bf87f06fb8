//! Exact rational polynomials and real-root isolation.
//!
//! Root isolation works on the exact rational value of the coefficients:
//! square-free decomposition gives multiplicities, Sturm sequences count
//! distinct roots on an interval, and bisection with exact sign evaluation
//! locates each one. Floating-point evaluation cannot separate the clustered
//! double roots that characteristic polynomials routinely have.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) type Q = BigRational;

pub(crate) fn exact(x: f64) -> Q {
    BigRational::from_float(x).expect("finite value")
}

pub(crate) fn rounded(x: &Q) -> f64 {
    x.to_f64().expect("finite rational")
}

pub(crate) fn frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Dense polynomial; `0[k]` multiplies `x^k`, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RatPoly(Vec<Q>);

impl RatPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self(c)
    }

    pub fn from_f64(c: &[f64]) -> Self {
        Self::new(c.iter().map(|&x| exact(x)).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rounded).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(rounded(c).abs()))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new(
            (0..n)
                .map(|k| match (self.0.get(k), o.0.get(k)) {
                    (Some(x), Some(y)) => x + y,
                    (Some(x), None) | (None, Some(x)) => x.clone(),
                    (None, None) => Q::zero(),
                })
                .collect(),
        )
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self(Vec::new());
        }
        let mut out = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Q::from_integer((k as i64).into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    fn lead(&self) -> &Q {
        self.0.last().expect("nonzero polynomial")
    }

    /// Quotient and remainder; `d` must be nonzero.
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let mut q = vec![Q::zero(); self.0.len().saturating_sub(dd)];
        let inv = Q::one() / d.lead();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().unwrap() * &inv;
            for (j, dc) in d.0.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (Self::new(q), Self::new(r))
    }

    fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = Q::one() / self.lead();
        self.scale(&inv)
    }

    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `(factor, multiplicity)` with `self = c * prod factor^multiplicity`
    /// and every factor square-free of positive degree.
    fn square_free(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        let dp = self.derivative();
        let a = self.gcd(&dp);
        let mut b = self.div_rem(&a).0;
        let mut d = dp.div_rem(&a).0.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let g = b.gcd(&d);
            b = b.div_rem(&g).0;
            let c = d.div_rem(&g).0;
            d = c.sub(&b.derivative());
            if g.degree().unwrap_or(0) > 0 {
                out.push((g, i));
            }
            i += 1;
        }
        out
    }
}

fn sturm_chain(f: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        let r = chain[n - 2].div_rem(&chain[n - 1]).1;
        if r.is_zero() {
            break;
        }
        // a positive rescaling keeps the signs and curbs coefficient growth
        let s = Q::one() / r.lead().abs();
        chain.push(r.scale(&-s));
    }
    chain
}

/// Sign changes along the chain at `x`, zeros skipped.
fn variations(chain: &[RatPoly], x: &Q) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in chain {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign(x: &Q) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Roots of square-free `f` in `(a, b]`, given that there are `count` of them.
fn isolate(f: &RatPoly, chain: &[RatPoly], a: Q, b: Q, count: usize, tol: &Q, out: &mut Vec<Q>) {
    if count == 0 {
        return;
    }
    if &b - &a <= *tol {
        out.push((a + b) / Q::from_integer(2.into()));
        return;
    }
    if count == 1 {
        out.push(bisect(f, a, b, tol));
        return;
    }
    let m = (&a + &b) / Q::from_integer(2.into());
    let left = variations(chain, &a) - variations(chain, &m);
    isolate(f, chain, a, m.clone(), left, tol, out);
    isolate(f, chain, m, b, count - left, tol, out);
}

/// The single root of square-free `f` in `(a, b]`.
fn bisect(f: &RatPoly, mut a: Q, mut b: Q, tol: &Q) -> Q {
    if f.eval(&b).is_zero() {
        return b;
    }
    // sign just right of a, which may itself be a root
    let mut sa = sign(&f.eval(&a));
    if sa == 0 {
        sa = sign(&f.derivative().eval(&a));
    }
    let two = Q::from_integer(2.into());
    while &b - &a > *tol {
        let m = (&a + &b) / &two;
        let s = sign(&f.eval(&m));
        if s == 0 {
            return m;
        }
        if s == sa {
            a = m;
        } else {
            b = m;
        }
    }
    (a + b) / two
}

/// Real roots of `p` in `[lo, hi]` with multiplicities, ascending.
/// `p` must be nonzero.
pub(crate) fn isolate_real_roots(p: &RatPoly, lo: f64, hi: f64, tol: f64) -> Vec<(f64, usize)> {
    let (lo, hi, tol) = (exact(lo), exact(hi), exact(tol));
    let mut roots = Vec::new();
    for (f, mult) in p.square_free() {
        let mut found = Vec::new();
        if f.eval(&lo).is_zero() {
            found.push(lo.clone());
        }
        let chain = sturm_chain(&f);
        let count = variations(&chain, &lo) - variations(&chain, &hi);
        isolate(&f, &chain, lo.clone(), hi.clone(), count, &tol, &mut found);
        roots.extend(found.iter().map(|x| (rounded(x), mult)));
    }
    roots.sort_by(|x, y| x.0.total_cmp(&y.0));
    roots
}
