//! Node-indexed scalar, vector and tensor data.
//!
//! Vector and tensor components refer to the orthonormal frame of the chart.

use super::{ChartGrid, ChartKind};

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &ChartGrid) -> Self {
        ScalarField { values: vec![0.0; grid.node_count()] }
    }

    pub fn constant(grid: &ChartGrid, c: f64) -> Self {
        ScalarField { values: vec![c; grid.node_count()] }
    }

    /// Sample a function of the chart coordinates. On the sphere the two pole
    /// rows are sampled once and replicated, so the field is single-valued at
    /// the poles by construction.
    pub fn from_fn(grid: &ChartGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = vec![0.0; grid.node_count()];
        match grid.kind {
            ChartKind::Sphere => {
                for j in 0..grid.ny {
                    if j == 0 || j == grid.ny - 1 {
                        let v = f(grid.theta_row(j), 0.0);
                        for i in 0..grid.nx {
                            values[grid.idx(j, i)] = v;
                        }
                    } else {
                        for i in 0..grid.nx {
                            let idx = grid.idx(j, i);
                            let (t, p) = grid.chart_position(idx);
                            values[idx] = f(t, p);
                        }
                    }
                }
            }
            _ => {
                for idx in 0..grid.node_count() {
                    let (x, y) = grid.chart_position(idx);
                    values[idx] = f(x, y);
                }
            }
        }
        ScalarField { values }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
    }
}

#[derive(Debug, Clone)]
pub struct VectorField {
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
}

impl VectorField {
    pub fn zeros(grid: &ChartGrid) -> Self {
        let n = grid.node_count();
        VectorField { c1: vec![0.0; n], c2: vec![0.0; n] }
    }

    pub fn from_fn(grid: &ChartGrid, f: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        let n = grid.node_count();
        let mut v = VectorField { c1: vec![0.0; n], c2: vec![0.0; n] };
        for idx in 0..n {
            let (x, y) = grid.chart_position(idx);
            let (a, b) = f(x, y);
            v.c1[idx] = a;
            v.c2[idx] = b;
        }
        v
    }

    #[inline]
    pub fn norm_sq(&self, idx: usize) -> f64 {
        self.c1[idx] * self.c1[idx] + self.c2[idx] * self.c2[idx]
    }
}

/// 2x2 tensor per node; `tik` is the (i, k) frame component.
#[derive(Debug, Clone)]
pub struct TensorField {
    pub t11: Vec<f64>,
    pub t12: Vec<f64>,
    pub t21: Vec<f64>,
    pub t22: Vec<f64>,
}

impl TensorField {
    pub fn zeros(grid: &ChartGrid) -> Self {
        let n = grid.node_count();
        TensorField {
            t11: vec![0.0; n],
            t12: vec![0.0; n],
            t21: vec![0.0; n],
            t22: vec![0.0; n],
        }
    }

    /// Largest eigenvalue magnitude of the symmetrized tensor at a node.
    pub fn operator_norm(&self, idx: usize) -> f64 {
        let a = self.t11[idx];
        let d = self.t22[idx];
        let b = 0.5 * (self.t12[idx] + self.t21[idx]);
        let mean = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        (mean + disc).abs().max((mean - disc).abs())
    }

    /// Frobenius inner product with another tensor at a node.
    #[inline]
    pub fn dot(&self, other: &TensorField, idx: usize) -> f64 {
        self.t11[idx] * other.t11[idx]
            + self.t12[idx] * other.t12[idx]
            + self.t21[idx] * other.t21[idx]
            + self.t22[idx] * other.t22[idx]
    }
}
