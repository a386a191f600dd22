//! Discretized 2-D Riemannian charts: flat torus, conformally flat torus and
//! the round unit sphere in latitude-longitude coordinates.
//!
//! All fields live on a rectangular node array (row-major, `idx = j*nx + i`).
//! Vector and tensor quantities are expressed in the orthonormal frame of the
//! metric (`e1 = dx/lambda, e2 = dy/lambda` on tori; `e1 = d_theta,
//! e2 = d_phi/sin(theta)` on the sphere), which makes pointwise algebra
//! Euclidean. The two polar rows of the sphere grid are stored as duplicated
//! single points; every operator writes identical values across a pole row.

mod distance;
mod fields;
mod ops;

pub use distance::{geodesic_distance, injectivity_radius};
pub use fields::{ScalarField, TensorField, VectorField};
pub use ops::{
    covariant_derivative, gradient, gradient_norm_sq, hessian_frame, laplace_beltrami,
    volume_integrate,
};
pub(crate) use ops::laplacian_into as ops_laplacian_into;

use crate::error::GridError;
use std::sync::Arc;

pub const MIN_RESOLUTION: usize = 16;

/// Conformal factor presets for the conformal torus.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LambdaSpec {
    Constant { value: f64 },
    /// lambda(x, y) = 1 + amplitude * cos(2 pi x / L) * cos(2 pi y / L)
    Cosine { amplitude: f64 },
    #[serde(skip)]
    Samples(Vec<f64>),
}

/// Declarative description of a metric; `ChartGrid::build` realizes it.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpec {
    FlatTorus { side: f64, resolution: usize },
    ConformalTorus { side: f64, resolution: usize, lambda: LambdaSpec },
    /// Unit sphere; `resolution` is the number of latitude intervals,
    /// longitudes are `2 * resolution`.
    Sphere { resolution: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartKind {
    FlatTorus,
    ConformalTorus,
    Sphere,
}

/// A realized chart: node array, metric factor, volume weights and the
/// boundary rule implied by `kind`.
#[derive(Debug)]
pub struct ChartGrid {
    pub kind: ChartKind,
    /// Torus side length (unused for the sphere).
    pub side: f64,
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    /// Conformal factor per node (tori only, 1.0 on the flat torus).
    lambda: Vec<f64>,
    /// Volume weight per node; sums to the total volume.
    weight: Vec<f64>,
    /// sin(theta) per row (sphere only).
    sin_theta: Vec<f64>,
    /// theta per row (sphere only).
    theta: Vec<f64>,
    /// Unit-sphere embedding per node (sphere only), used for distances.
    embed: Vec<[f64; 3]>,
    /// Frame derivatives of log(lambda) (conformal torus only).
    conf_p: Vec<f64>,
    conf_q: Vec<f64>,
    total_volume: f64,
}

impl ChartGrid {
    pub fn build(spec: &MetricSpec) -> Result<Arc<ChartGrid>, GridError> {
        match spec {
            MetricSpec::FlatTorus { side, resolution } => {
                let lambda = vec![1.0; resolution * resolution];
                Self::build_torus(ChartKind::FlatTorus, *side, *resolution, lambda)
            }
            MetricSpec::ConformalTorus { side, resolution, lambda } => {
                let n = *resolution;
                let values = match lambda {
                    LambdaSpec::Constant { value } => vec![*value; n * n],
                    LambdaSpec::Cosine { amplitude } => {
                        let h = side / n as f64;
                        let mut v = Vec::with_capacity(n * n);
                        for j in 0..n {
                            for i in 0..n {
                                let (x, y) = (i as f64 * h, j as f64 * h);
                                let w = 2.0 * std::f64::consts::PI / side;
                                v.push(1.0 + amplitude * (w * x).cos() * (w * y).cos());
                            }
                        }
                        v
                    }
                    LambdaSpec::Samples(v) => v.clone(),
                };
                if values.len() != n * n {
                    return Err(GridError::LambdaSizeMismatch { got: values.len(), expected: n * n });
                }
                Self::build_torus(ChartKind::ConformalTorus, *side, n, values)
            }
            MetricSpec::Sphere { resolution } => Self::build_sphere(*resolution),
        }
    }

    fn build_torus(
        kind: ChartKind,
        side: f64,
        n: usize,
        lambda: Vec<f64>,
    ) -> Result<Arc<ChartGrid>, GridError> {
        if side <= 0.0 {
            return Err(GridError::NonPositiveSide(side));
        }
        if n < MIN_RESOLUTION {
            return Err(GridError::ResolutionTooCoarse { got: n, min: MIN_RESOLUTION });
        }
        for (node, &l) in lambda.iter().enumerate() {
            if !(l > 0.0) {
                return Err(GridError::MetricDegenerate { node, value: l });
            }
        }
        let h = side / n as f64;
        let weight: Vec<f64> = lambda.iter().map(|l| l * l * h * h).collect();
        let total_volume = weight.iter().sum();
        let mut grid = ChartGrid {
            kind,
            side,
            nx: n,
            ny: n,
            hx: h,
            hy: h,
            lambda,
            weight,
            sin_theta: Vec::new(),
            theta: Vec::new(),
            embed: Vec::new(),
            conf_p: Vec::new(),
            conf_q: Vec::new(),
            total_volume,
        };
        if kind == ChartKind::ConformalTorus {
            let (p, q) = ops::log_lambda_frame_derivatives(&grid);
            grid.conf_p = p;
            grid.conf_q = q;
        }
        Ok(Arc::new(grid))
    }

    fn build_sphere(ntheta: usize) -> Result<Arc<ChartGrid>, GridError> {
        if ntheta < MIN_RESOLUTION {
            return Err(GridError::ResolutionTooCoarse { got: ntheta, min: MIN_RESOLUTION });
        }
        let nphi = 2 * ntheta; // even, so pole-crossing stencils can shift by half a turn
        let ny = ntheta + 1;
        let h_theta = std::f64::consts::PI / ntheta as f64;
        let h_phi = 2.0 * std::f64::consts::PI / nphi as f64;
        let theta: Vec<f64> = (0..ny).map(|j| j as f64 * h_theta).collect();
        let sin_theta: Vec<f64> = theta.iter().map(|t| t.sin()).collect();
        let cap = 2.0 * std::f64::consts::PI * (1.0 - (h_theta / 2.0).cos());
        let mut weight = vec![0.0; ny * nphi];
        let mut embed = vec![[0.0; 3]; ny * nphi];
        for j in 0..ny {
            for i in 0..nphi {
                let idx = j * nphi + i;
                let phi = i as f64 * h_phi;
                weight[idx] = if j == 0 || j == ny - 1 {
                    cap / nphi as f64
                } else {
                    sin_theta[j] * h_theta * h_phi
                };
                embed[idx] = [
                    sin_theta[j] * phi.cos(),
                    sin_theta[j] * phi.sin(),
                    theta[j].cos(),
                ];
            }
        }
        let total_volume = weight.iter().sum();
        Ok(Arc::new(ChartGrid {
            kind: ChartKind::Sphere,
            side: 0.0,
            nx: nphi,
            ny,
            hx: h_phi,
            hy: h_theta,
            lambda: Vec::new(),
            weight,
            sin_theta,
            theta,
            embed,
            conf_p: Vec::new(),
            conf_q: Vec::new(),
            total_volume,
        }))
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn idx(&self, j: usize, i: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn weight(&self, idx: usize) -> f64 {
        self.weight[idx]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weight
    }

    #[inline]
    pub fn lambda(&self, idx: usize) -> f64 {
        if self.lambda.is_empty() {
            1.0
        } else {
            self.lambda[idx]
        }
    }

    pub fn total_volume(&self) -> f64 {
        self.total_volume
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Chart coordinates of a node: `(x, y)` on tori, `(theta, phi)` on the sphere.
    pub fn chart_position(&self, idx: usize) -> (f64, f64) {
        let j = idx / self.nx;
        let i = idx % self.nx;
        match self.kind {
            ChartKind::Sphere => (self.theta[j], i as f64 * self.hx),
            _ => (i as f64 * self.hx, j as f64 * self.hy),
        }
    }

    #[inline]
    pub fn is_pole(&self, idx: usize) -> bool {
        if self.kind != ChartKind::Sphere {
            return false;
        }
        let j = idx / self.nx;
        j == 0 || j == self.ny - 1
    }

    pub fn sin_theta_row(&self, j: usize) -> f64 {
        self.sin_theta[j]
    }

    pub fn theta_row(&self, j: usize) -> f64 {
        self.theta[j]
    }

    pub fn embed(&self, idx: usize) -> [f64; 3] {
        self.embed[idx]
    }

    pub(crate) fn conf_p(&self, idx: usize) -> f64 {
        if self.conf_p.is_empty() {
            0.0
        } else {
            self.conf_p[idx]
        }
    }

    pub(crate) fn conf_q(&self, idx: usize) -> f64 {
        if self.conf_q.is_empty() {
            0.0
        } else {
            self.conf_q[idx]
        }
    }

    /// Node `(j, i)` under the boundary rule, allowing out-of-range `j` and
    /// any integer `i`. On tori both directions wrap; on the sphere a theta
    /// overshoot crosses the pole onto the meridian half a turn away.
    #[inline]
    pub fn wrap(&self, j: isize, i: isize) -> usize {
        let nx = self.nx as isize;
        match self.kind {
            ChartKind::Sphere => {
                let ny = self.ny as isize;
                let (mut j, mut i) = (j, i);
                if j < 0 {
                    j = -j;
                    i += nx / 2;
                } else if j > ny - 1 {
                    j = 2 * (ny - 1) - j;
                    i += nx / 2;
                }
                let i = i.rem_euclid(nx);
                (j as usize) * self.nx + i as usize
            }
            _ => {
                let ny = self.ny as isize;
                let j = j.rem_euclid(ny);
                let i = i.rem_euclid(nx);
                (j as usize) * self.nx + i as usize
            }
        }
    }

    /// Shortest signed offset between chart coordinates on a torus axis.
    #[inline]
    pub fn wrap_delta(&self, d: f64) -> f64 {
        let l = self.side;
        let mut d = d % l;
        if d > l / 2.0 {
            d -= l;
        } else if d < -l / 2.0 {
            d += l;
        }
        d
    }
}

/// Stable hash of the chart description, used to pin checkpoints to a grid.
pub fn grid_spec_hash(grid: &ChartGrid) -> u64 {
    let mut h = Fnv1a::new();
    let kind = match grid.kind {
        ChartKind::FlatTorus => 0u8,
        ChartKind::ConformalTorus => 1,
        ChartKind::Sphere => 2,
    };
    h.write(&[kind]);
    h.write(&grid.side.to_le_bytes());
    h.write(&(grid.nx as u64).to_le_bytes());
    h.write(&(grid.ny as u64).to_le_bytes());
    for &l in &grid.lambda {
        h.write(&l.to_le_bytes());
    }
    h.finish()
}

struct Fnv1a(u64);

impl Fnv1a {
    fn new() -> Self {
        Fnv1a(0xcbf29ce484222325)
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x100000001b3);
        }
    }
    fn finish(&self) -> u64 {
        self.0
    }
}
