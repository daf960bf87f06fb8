//! Brute-force reference values, independent of the iterative solvers.
//!
//! For three qubits the overlap is `u^T M(w) v` with `M(w)_ij = sum_k a_ijk w_k`,
//! so for a fixed third factor the best first two factors give the top
//! singular value of a 2x2 matrix, known in closed form. Only `w` needs
//! searching: a `(theta, phi)` grid on the Bloch sphere followed by a
//! shrinking-neighborhood local search from the best cells.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::Hypermatrix;

pub const MIN_GRID: usize = 16;
pub const DEFAULT_REFINE: usize = 64;
/// Grid cells used as refinement starts.
const REFINE_STARTS: usize = 8;

type Mat2 = [[Complex64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleEstimate {
    /// Best value found; a lower bound on the true maximum up to rounding.
    pub value: f64,
    /// Best value on the grid alone.
    pub grid_value: f64,
    /// Bloch angles of the best third factor.
    pub theta: f64,
    pub phi: f64,
}

fn bloch(theta: f64, phi: f64) -> [Complex64; 2] {
    [
        Complex64::new((0.5 * theta).cos(), 0.0),
        Complex64::from_polar((0.5 * theta).sin(), phi),
    ]
}

fn check_qubits(h: &Hypermatrix) -> Result<()> {
    if h.shape() != [2, 2, 2] {
        return Err(Error::InvalidShape(h.shape().to_vec()));
    }
    Ok(())
}

fn check_grid(grid_n: usize) -> Result<()> {
    if grid_n < MIN_GRID {
        return Err(Error::InvalidConfig(
            "grid must have at least 16 points per angle",
        ));
    }
    Ok(())
}

fn slice(h: &Hypermatrix, w: &[Complex64; 2]) -> Mat2 {
    let m = |i, j| h.get(&[i, j, 0]) * w[0] + h.get(&[i, j, 1]) * w[1];
    [[m(0, 0), m(0, 1)], [m(1, 0), m(1, 1)]]
}

/// Eigenvalues of `M^+ M`, ascending, from its trace and determinant.
fn gram_eigenvalues(m: &Mat2) -> [f64; 2] {
    let t: f64 = m.iter().flatten().map(|z| z.norm_sqr()).sum();
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm_sqr();
    let disc = (t * t - 4.0 * det).max(0.0).sqrt();
    let hi = 0.5 * (t + disc);
    // the smaller root via det/hi avoids cancellation
    let lo = if hi > 0.0 { det / hi } else { 0.0 };
    [lo, hi]
}

fn top_singular_2x2(m: &Mat2) -> f64 {
    gram_eigenvalues(m)[1].sqrt()
}

/// Unit vector spanning the eigenspace of the smaller eigenvalue of `M^+ M`.
fn bottom_right_singular_vector(m: &Mat2) -> [Complex64; 2] {
    let n = |i: usize, j: usize| m[0][i].conj() * m[0][j] + m[1][i].conj() * m[1][j];
    let lo = gram_eigenvalues(m)[0];
    let c1 = [n(0, 1), Complex64::new(lo, 0.0) - n(0, 0)];
    let c2 = [Complex64::new(lo, 0.0) - n(1, 1), n(1, 0)];
    let norm = |c: &[Complex64; 2]| (c[0].norm_sqr() + c[1].norm_sqr()).sqrt();
    let (c, s) = if norm(&c1) >= norm(&c2) {
        (c1, norm(&c1))
    } else {
        (c2, norm(&c2))
    };
    if s == 0.0 {
        // M^+ M is a multiple of the identity; any vector will do
        return [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    }
    [c[0] / s, c[1] / s]
}

/// Grid search over `(theta_i, phi_j) = (pi i / n, 2 pi j / n)` followed by
/// local refinement. `better(x, y)` says whether `x` improves on `y`.
fn sphere_search(
    grid_n: usize,
    refine_iters: usize,
    objective: &(dyn Fn(f64, f64) -> f64 + Sync),
    better: fn(f64, f64) -> bool,
) -> OracleEstimate {
    let dt = std::f64::consts::PI / grid_n as f64;
    let dp = 2.0 * std::f64::consts::PI / grid_n as f64;
    let cells: Vec<(f64, f64, f64)> = (0..=grid_n)
        .into_par_iter()
        .flat_map_iter(|i| {
            (0..grid_n).map(move |j| {
                let (t, p) = (i as f64 * dt, j as f64 * dp);
                (objective(t, p), t, p)
            })
        })
        .collect();

    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by(|&x, &y| {
        let (vx, vy) = (cells[x].0, cells[y].0);
        if better(vx, vy) {
            std::cmp::Ordering::Less
        } else if better(vy, vx) {
            std::cmp::Ordering::Greater
        } else {
            x.cmp(&y)
        }
    });
    let grid_best = cells[order[0]];

    let refined: Vec<(f64, f64, f64)> = order
        .iter()
        .take(REFINE_STARTS)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&c| {
            let (mut v, mut t, mut p) = cells[c];
            let (mut st, mut sp) = (dt, dp);
            for _ in 0..refine_iters {
                let mut moved = false;
                for (a, b) in [
                    (1., 0.),
                    (-1., 0.),
                    (0., 1.),
                    (0., -1.),
                    (1., 1.),
                    (1., -1.),
                    (-1., 1.),
                    (-1., -1.),
                ] {
                    let (tn, pn) = (t + a * st, p + b * sp);
                    let vn = objective(tn, pn);
                    if better(vn, v) {
                        (v, t, p) = (vn, tn, pn);
                        moved = true;
                    }
                }
                if !moved {
                    st *= 0.5;
                    sp *= 0.5;
                }
            }
            (v, t, p)
        })
        .collect();

    let best = refined
        .into_iter()
        .fold(grid_best, |acc, x| if better(x.0, acc.0) { x } else { acc });
    OracleEstimate {
        value: best.0,
        grid_value: grid_best.0,
        theta: best.1,
        phi: best.2,
    }
}

/// Maximum of `|alpha|` over unit product states of a 2x2x2 hypermatrix.
pub fn qubit_grid_oracle(
    h: &Hypermatrix,
    grid_n: usize,
    refine_iters: usize,
) -> Result<OracleEstimate> {
    check_qubits(h)?;
    check_grid(grid_n)?;
    let objective = |t: f64, p: f64| top_singular_2x2(&slice(h, &bloch(t, p)));
    Ok(sphere_search(grid_n, refine_iters, &objective, |x, y| {
        x > y
    }))
}

/// Plain grid over all six Bloch angles, with no structure exploited.
/// Cost grows as `grid_n^6`; meant for small cross-checks.
pub fn naive_grid_oracle(h: &Hypermatrix, grid_n: usize) -> Result<f64> {
    check_qubits(h)?;
    if grid_n < 2 {
        return Err(Error::InvalidConfig(
            "naive grid needs at least 2 points per angle",
        ));
    }
    let dt = std::f64::consts::PI / grid_n as f64;
    let dp = 2.0 * std::f64::consts::PI / grid_n as f64;
    let points: Vec<[Complex64; 2]> = (0..=grid_n)
        .flat_map(|i| (0..grid_n).map(move |j| bloch(i as f64 * dt, j as f64 * dp)))
        .collect();
    let best = points
        .par_iter()
        .map(|w| {
            let m = slice(h, w);
            let mut best = 0.0f64;
            for v in &points {
                let mv = [
                    m[0][0] * v[0] + m[0][1] * v[1],
                    m[1][0] * v[0] + m[1][1] * v[1],
                ];
                for u in &points {
                    best = best.max((u[0] * mv[0] + u[1] * mv[1]).norm());
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

/// Largest singular value of a complex matrix: closed form for 2x2, power
/// iteration on `M^+ M` otherwise.
pub fn bipartite_top_singular(m: &DMatrix<Complex64>) -> Result<f64> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("matrix"));
    }
    if m.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return Err(Error::ZeroTensor);
    }
    if m.shape() == (2, 2) {
        return Ok(top_singular_2x2(&[
            [m[(0, 0)], m[(0, 1)]],
            [m[(1, 0)], m[(1, 1)]],
        ]));
    }
    let gram = m.adjoint() * m;
    let n = gram.ncols();
    // every basis start: at least one overlaps the top eigenvector
    let best = (0..n)
        .map(|j| {
            let mut v = gram.column(j).into_owned();
            let mut rq = 0.0;
            for _ in 0..100_000 {
                let nv = v.norm();
                if nv == 0.0 {
                    return 0.0;
                }
                v /= Complex64::new(nv, 0.0);
                let gv = &gram * &v;
                let next = v.dotc(&gv).re;
                v = gv;
                if (next - rq).abs() <= 1e-16 * next.abs() {
                    rq = next;
                    break;
                }
                rq = next;
            }
            rq
        })
        .fold(0.0f64, f64::max);
    Ok(best.sqrt())
}

/// Smallest value over third factors `w` of
/// `2 sigma_min(M(w))^2 + ||grad_w alpha(u, v, .)||^2`,
/// where `u`, `v` span the near-null spaces of `M(w)^T` and `M(w)`.
/// It is zero exactly when the overlap has a critical point at `lambda = 0`
/// with all factors nonzero.
pub fn null_critical_defect(
    h: &Hypermatrix,
    grid_n: usize,
    refine_iters: usize,
) -> Result<OracleEstimate> {
    check_qubits(h)?;
    check_grid(grid_n)?;
    let objective = |t: f64, p: f64| {
        let w = bloch(t, p);
        let m = slice(h, &w);
        let sigma2 = gram_eigenvalues(&m)[0];
        let v = bottom_right_singular_vector(&m);
        let mt = [[m[0][0], m[1][0]], [m[0][1], m[1][1]]];
        let u = bottom_right_singular_vector(&mt);
        let grad: f64 = (0..2)
            .map(|k| {
                let mut g = Complex64::new(0.0, 0.0);
                for (i, ui) in u.iter().enumerate() {
                    for (j, vj) in v.iter().enumerate() {
                        g += h.get(&[i, j, k]) * ui * vj;
                    }
                }
                g.norm_sqr()
            })
            .sum();
        2.0 * sigma2 + grad
    };
    Ok(sphere_search(grid_n, refine_iters, &objective, |x, y| {
        x < y
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::three_qubit::SchmidtCoeffs;

    fn schmidt(a: f64, b: f64, c: f64, d: f64) -> Hypermatrix {
        SchmidtCoeffs::abcd(a, b, c, d).unwrap().to_hypermatrix()
    }

    #[test]
    fn basis_state() {
        let mut v = [0.0; 8];
        v[0] = 1.0;
        let h = Hypermatrix::from_real(vec![2, 2, 2], &v).unwrap();
        let e = qubit_grid_oracle(&h, 16, 0).unwrap();
        assert!((e.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn w_state() {
        let t = 1.0 / 3f64.sqrt();
        let e = qubit_grid_oracle(&schmidt(t, t, t, 0.0), 256, DEFAULT_REFINE).unwrap();
        assert!((e.value - 2.0 / 3.0).abs() < 1e-4, "{e:?}");
        assert!(e.value <= 2.0 / 3.0 + 1e-12);
    }

    #[test]
    fn crossed_diameter_example() {
        let h = schmidt(1.0, 0.99, 0.2, 0.18).normalized().unwrap();
        let e = qubit_grid_oracle(&h, 256, DEFAULT_REFINE).unwrap();
        assert!((e.value - 0.70730).abs() < 1e-3, "{e:?}");
    }

    #[test]
    fn grid_lower_bound_grows_with_nested_grids() {
        let h = schmidt(0.7, 0.5, 0.4, 0.3);
        let mut last = 0.0;
        for n in [16, 32, 64, 128] {
            let g = qubit_grid_oracle(&h, n, 0).unwrap().grid_value;
            assert!(g >= last, "{n}: {g} < {last}");
            last = g;
        }
    }

    #[test]
    fn naive_grid_is_a_lower_bound() {
        let h = schmidt(0.7, 0.5, 0.4, 0.3);
        let naive = naive_grid_oracle(&h, 8).unwrap();
        let sharp = qubit_grid_oracle(&h, 64, DEFAULT_REFINE).unwrap().value;
        assert!(naive <= sharp + 1e-12);
        assert!(naive > 0.6);
    }

    #[test]
    fn bipartite_examples() {
        let z = |x: f64| Complex64::new(x, 0.0);
        let m = DMatrix::from_row_slice(2, 2, &[z(1.0), z(0.0), z(0.0), z(0.0)]);
        assert_eq!(bipartite_top_singular(&m).unwrap(), 1.0);
        let m = DMatrix::from_row_slice(2, 2, &[z(0.8), z(0.0), z(0.0), z(0.6)]);
        assert!((bipartite_top_singular(&m).unwrap() - 0.8).abs() < 1e-15);
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                z(0.0),
                z(0.0),
                z(0.0),
                z(0.0),
                z(0.2),
                z(0.0),
                z(0.0),
                z(0.0),
                z(0.9),
            ],
        );
        assert!((bipartite_top_singular(&m).unwrap() - 0.9).abs() < 1e-14);
        assert!(bipartite_top_singular(&DMatrix::from_element(3, 4, z(0.0))).is_err());
    }

    #[test]
    fn bipartite_matches_svd() {
        let m = DMatrix::from_fn(3, 4, |i, j| {
            Complex64::new(
                (i * 4 + j) as f64 * 0.37 % 1.0,
                (i + 2 * j) as f64 * 0.53 % 1.0 - 0.5,
            )
        });
        let svd = m.clone().svd(false, false);
        let top = svd.singular_values.max();
        assert!((bipartite_top_singular(&m).unwrap() - top).abs() < 1e-12);
    }

    #[test]
    fn null_critical_point_for_vanishing_hyperdeterminant() {
        let zero = null_critical_defect(&schmidt(0.8, 0.0, 0.5, 0.3), 64, DEFAULT_REFINE).unwrap();
        assert!(zero.value < 1e-12, "{zero:?}");
        let generic =
            null_critical_defect(&schmidt(0.7, 0.5, 0.4, 0.3), 64, DEFAULT_REFINE).unwrap();
        assert!(generic.value > 1e-3, "{generic:?}");
    }

    #[test]
    fn rejects_bad_input() {
        let h = Hypermatrix::zeros(vec![2, 2]).unwrap();
        assert!(matches!(
            qubit_grid_oracle(&h, 16, 0),
            Err(Error::InvalidShape(_))
        ));
        let h = schmidt(0.7, 0.5, 0.4, 0.3);
        assert!(matches!(
            qubit_grid_oracle(&h, 8, 0),
            Err(Error::InvalidConfig(_))
        ));
    }
}
