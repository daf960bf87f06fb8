//! Cayley's hyperdeterminant of a 2x2x2 hypermatrix.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::Hypermatrix;

/// The degree-4 invariant that vanishes exactly when the overlap has a
/// critical point with all factors nonzero at `lambda = 0`.
pub fn hyperdet_222(h: &Hypermatrix) -> Result<Complex64> {
    if h.shape() != [2, 2, 2] {
        return Err(Error::InvalidShape(h.shape().to_vec()));
    }
    let a = |i: usize, j: usize, k: usize| h.get(&[i, j, k]);
    let (a000, a001, a010, a011) = (a(0, 0, 0), a(0, 0, 1), a(0, 1, 0), a(0, 1, 1));
    let (a100, a101, a110, a111) = (a(1, 0, 0), a(1, 0, 1), a(1, 1, 0), a(1, 1, 1));

    let squares = a000 * a000 * a111 * a111
        + a001 * a001 * a110 * a110
        + a010 * a010 * a101 * a101
        + a100 * a100 * a011 * a011;
    let pairs = a000 * a001 * a110 * a111
        + a000 * a010 * a101 * a111
        + a000 * a100 * a011 * a111
        + a001 * a010 * a101 * a110
        + a001 * a100 * a011 * a110
        + a010 * a100 * a011 * a101;
    let quads = a000 * a011 * a101 * a110 + a001 * a010 * a100 * a111;
    Ok(squares - pairs * 2.0 + quads * 4.0)
}
