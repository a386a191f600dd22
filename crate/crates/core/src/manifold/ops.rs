//! Differential operators on chart grids.
//!
//! First derivatives use fourth-order central stencils (the wrap rule
//! resolves them across seams and poles); the Laplace-Beltrami operator uses
//! the second-order divergence form, written so that it is exactly
//! self-adjoint with respect to the volume weights. That exactness is what
//! the conjugate-gradient solver relies on.

use super::fields::{ScalarField, TensorField, VectorField};
use super::{ChartGrid, ChartKind};

/// Fourth-order centered derivative along raw chart direction `axis`
/// (0 = columns/x/phi, 1 = rows/y/theta) divided by the chart spacing.
fn chart_derivative(f: &ScalarField, grid: &ChartGrid, axis: usize) -> Vec<f64> {
    let n = grid.node_count();
    let mut out = vec![0.0; n];
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let h = if axis == 0 { grid.hx } else { grid.hy };
    let v = &f.values;
    for j in 0..ny {
        for i in 0..nx {
            let idx = (j as usize) * grid.nx + i as usize;
            let sample = |o: isize| -> f64 {
                let (jj, ii) = if axis == 0 { (j, i + o) } else { (j + o, i) };
                v[grid.wrap(jj, ii)]
            };
            out[idx] =
                (8.0 * (sample(1) - sample(-1)) - (sample(2) - sample(-2))) / (12.0 * h);
        }
    }
    out
}

/// Gradient in orthonormal-frame components. On the sphere the frame is
/// singular at the poles; pole rows carry zero components there and the
/// norm-level helpers estimate the pole gradient one-sidedly.
pub fn gradient(f: &ScalarField, grid: &ChartGrid) -> VectorField {
    let dx = chart_derivative(f, grid, 0);
    let dy = chart_derivative(f, grid, 1);
    let n = grid.node_count();
    let mut g = VectorField { c1: vec![0.0; n], c2: vec![0.0; n] };
    match grid.kind {
        ChartKind::Sphere => {
            for j in 0..grid.ny {
                let pole = j == 0 || j == grid.ny - 1;
                let st = grid.sin_theta_row(j);
                for i in 0..grid.nx {
                    let idx = grid.idx(j, i);
                    if pole {
                        continue;
                    }
                    g.c1[idx] = dy[idx];
                    g.c2[idx] = dx[idx] / st;
                }
            }
        }
        _ => {
            for idx in 0..n {
                let li = 1.0 / grid.lambda(idx);
                g.c1[idx] = li * dx[idx];
                g.c2[idx] = li * dy[idx];
            }
        }
    }
    g
}

/// Squared metric gradient norm per node. Sphere poles get the largest
/// one-sided meridian difference quotient, which is what the sup-norm
/// diagnostics need.
pub fn gradient_norm_sq(f: &ScalarField, grid: &ChartGrid) -> ScalarField {
    let g = gradient(f, grid);
    let mut out = vec![0.0; grid.node_count()];
    for idx in 0..grid.node_count() {
        out[idx] = g.norm_sq(idx);
    }
    if grid.kind == ChartKind::Sphere {
        for (pole_row, ring_row) in [(0usize, 1usize), (grid.ny - 1, grid.ny - 2)] {
            let pole_val = f.values[grid.idx(pole_row, 0)];
            let mut worst = 0.0f64;
            for i in 0..grid.nx {
                let d = (f.values[grid.idx(ring_row, i)] - pole_val) / grid.hy;
                worst = worst.max(d * d);
            }
            for i in 0..grid.nx {
                out[grid.idx(pole_row, i)] = worst;
            }
        }
    }
    ScalarField { values: out }
}

/// Laplace-Beltrami operator, second order.
///
/// Tori: `lambda^{-2}` times the flat five-point Laplacian. Sphere: the
/// latitude-longitude divergence form; each pole is closed by the flux
/// balance over its adjacent ring, which keeps the operator self-adjoint
/// with respect to the volume weights.
pub fn laplace_beltrami(f: &ScalarField, grid: &ChartGrid) -> ScalarField {
    let mut out = vec![0.0; grid.node_count()];
    laplacian_into(&f.values, grid, &mut out);
    ScalarField { values: out }
}

/// In-place Laplacian used by the time-stepper's matrix-free solves.
pub(crate) fn laplacian_into(v: &[f64], grid: &ChartGrid, out: &mut [f64]) {
    match grid.kind {
        ChartKind::Sphere => {
            let nx = grid.nx;
            let ny = grid.ny;
            let ht = grid.hy;
            let hp = grid.hx;
            for j in 1..ny - 1 {
                let st = grid.sin_theta_row(j);
                let s_up = ((j as f64 + 0.5) * ht).sin();
                let s_dn = ((j as f64 - 0.5) * ht).sin();
                for i in 0..nx {
                    let idx = j * nx + i;
                    let fc = v[idx];
                    let f_n = v[grid.wrap(j as isize + 1, i as isize)];
                    let f_s = v[grid.wrap(j as isize - 1, i as isize)];
                    let f_e = v[j * nx + (i + 1) % nx];
                    let f_w = v[j * nx + (i + nx - 1) % nx];
                    out[idx] = (s_up * (f_n - fc) - s_dn * (fc - f_s)) / (st * ht * ht)
                        + (f_e + f_w - 2.0 * fc) / (st * st * hp * hp);
                }
            }
            // Pole closure: flux balance with the same edge conductance the
            // adjacent ring uses, divided by the total polar-cap weight.
            let cap = 2.0 * std::f64::consts::PI * (1.0 - (ht / 2.0).cos());
            let cond = (ht / 2.0).sin() * hp / ht;
            for (pole_row, ring_row) in [(0usize, 1usize), (ny - 1, ny - 2)] {
                let pole_val = v[pole_row * nx];
                let mut flux = 0.0;
                for i in 0..nx {
                    flux += v[ring_row * nx + i] - pole_val;
                }
                let lap = cond * flux / cap;
                for i in 0..nx {
                    out[pole_row * nx + i] = lap;
                }
            }
        }
        _ => {
            let nx = grid.nx;
            let ny = grid.ny;
            let h2 = grid.hx * grid.hx;
            for j in 0..ny {
                let jn = (j + 1) % ny;
                let js = (j + ny - 1) % ny;
                for i in 0..nx {
                    let idx = j * nx + i;
                    let ie = (i + 1) % nx;
                    let iw = (i + nx - 1) % nx;
                    let five = v[jn * nx + i] + v[js * nx + i] + v[j * nx + ie] + v[j * nx + iw]
                        - 4.0 * v[idx];
                    let li = 1.0 / grid.lambda(idx);
                    out[idx] = li * li * five / h2;
                }
            }
        }
    }
}

/// Covariant derivative of a frame vector field: `out[i][k] = <D_{e_i} Y, e_k>`,
/// connection terms included (conformal log-factor derivatives on tori,
/// `cot(theta)` terms on the sphere). Sphere pole rows are zeroed.
pub fn covariant_derivative(y: &VectorField, grid: &ChartGrid) -> TensorField {
    let f1 = ScalarField { values: y.c1.clone() };
    let f2 = ScalarField { values: y.c2.clone() };
    let d1x = chart_derivative(&f1, grid, 0);
    let d1y = chart_derivative(&f1, grid, 1);
    let d2x = chart_derivative(&f2, grid, 0);
    let d2y = chart_derivative(&f2, grid, 1);
    let mut t = TensorField::zeros(grid);
    match grid.kind {
        ChartKind::Sphere => {
            for j in 1..grid.ny - 1 {
                let st = grid.sin_theta_row(j);
                let cot = grid.theta_row(j).cos() / st;
                for i in 0..grid.nx {
                    let idx = grid.idx(j, i);
                    // e1 = d_theta, e2 = d_phi / sin(theta)
                    t.t11[idx] = d1y[idx];
                    t.t12[idx] = d2y[idx];
                    t.t21[idx] = d1x[idx] / st - cot * y.c2[idx];
                    t.t22[idx] = d2x[idx] / st + cot * y.c1[idx];
                }
            }
        }
        _ => {
            for idx in 0..grid.node_count() {
                let li = 1.0 / grid.lambda(idx);
                let p = grid.conf_p(idx);
                let q = grid.conf_q(idx);
                let e1_y1 = li * d1x[idx];
                let e1_y2 = li * d2x[idx];
                let e2_y1 = li * d1y[idx];
                let e2_y2 = li * d2y[idx];
                t.t11[idx] = e1_y1 + q * y.c2[idx];
                t.t12[idx] = e1_y2 - q * y.c1[idx];
                t.t21[idx] = e2_y1 - p * y.c2[idx];
                t.t22[idx] = e2_y2 + p * y.c1[idx];
            }
        }
    }
    t
}

/// Covariant Hessian in frame components, built as the covariant derivative
/// of the gradient.
pub fn hessian_frame(f: &ScalarField, grid: &ChartGrid) -> TensorField {
    covariant_derivative(&gradient(f, grid), grid)
}

/// Quadrature against the Riemannian volume: sum of node value times weight.
pub fn volume_integrate(f: &ScalarField, grid: &ChartGrid) -> f64 {
    f.values
        .iter()
        .zip(grid.weights())
        .map(|(v, w)| v * w)
        .sum()
}

/// Frame derivatives of log(lambda) for conformal charts; used by the
/// connection coefficients. Called once at grid construction.
pub(super) fn log_lambda_frame_derivatives(grid: &ChartGrid) -> (Vec<f64>, Vec<f64>) {
    let n = grid.node_count();
    let log_lambda =
        ScalarField { values: (0..n).map(|i| grid.lambda(i).ln()).collect::<Vec<_>>() };
    let dx = chart_derivative(&log_lambda, grid, 0);
    let dy = chart_derivative(&log_lambda, grid, 1);
    let mut p = vec![0.0; n];
    let mut q = vec![0.0; n];
    for idx in 0..n {
        let li = 1.0 / grid.lambda(idx);
        p[idx] = li * dx[idx];
        q[idx] = li * dy[idx];
    }
    (p, q)
}
