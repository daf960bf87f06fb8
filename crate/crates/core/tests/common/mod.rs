#![allow(dead_code)]

use hypersv::three_qubit::SchmidtCoeffs;
use hypersv::Hypermatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_state(rng: &mut ChaCha8Rng, shape: &[usize]) -> Hypermatrix {
    let n: usize = shape.iter().product();
    let coeffs = (0..n).map(|_| gaussian(rng)).collect();
    Hypermatrix::new(shape.to_vec(), coeffs).unwrap()
}

/// Sorted, normalized `(a, b, c, d)` with `f = 0`.
pub fn random_canonical(rng: &mut ChaCha8Rng) -> SchmidtCoeffs {
    let mut v: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.0..1.0));
    v.sort_by(|x, y| y.total_cmp(x));
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    SchmidtCoeffs::abcd(v[0] / n, v[1] / n, v[2] / n, v[3] / n).unwrap()
}

/// Haar-like unitary from the QR factorization of a Gaussian matrix, row-major.
pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> Vec<Complex64> {
    let m = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let q = m.qr().q();
    (0..d * d).map(|k| q[(k / d, k % d)]).collect()
}

/// Random 2x2 matrix rescaled to determinant one, row-major.
pub fn random_sl2(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let m: Vec<Complex64> = (0..4).map(|_| gaussian(rng)).collect();
    let s = (m[0] * m[3] - m[1] * m[2]).sqrt();
    m.into_iter().map(|z| z / s).collect()
}

pub fn max_rel_diff(p: &[f64], q: &[f64]) -> f64 {
    let n = p.len().max(q.len());
    let get = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
    let scale = (0..n).fold(0.0f64, |m, k| m.max(get(p, k).abs()).max(get(q, k).abs()));
    (0..n).fold(0.0f64, |m, k| m.max((get(p, k) - get(q, k)).abs())) / scale
}
