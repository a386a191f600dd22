//! Geodesic distances and injectivity radii.
//!
//! Flat torus: closed-form wrap-around distance. Sphere: great-circle arccos
//! of embedded dot products. Conformal torus: shortest path on the
//! metric-weighted 8-neighbor graph, which is O(h)-accurate and a true metric
//! by construction.

use super::fields::ScalarField;
use super::{ChartGrid, ChartKind};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Copy, Clone, PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap by distance, ties broken by node id for determinism.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Distance from node `y` to every node.
pub fn geodesic_distance(grid: &ChartGrid, y: usize) -> ScalarField {
    match grid.kind {
        ChartKind::FlatTorus => {
            let (yx, yy) = grid.chart_position(y);
            let mut values = vec![0.0; grid.node_count()];
            for idx in 0..grid.node_count() {
                let (x, yv) = grid.chart_position(idx);
                let dx = grid.wrap_delta(x - yx);
                let dy = grid.wrap_delta(yv - yy);
                values[idx] = (dx * dx + dy * dy).sqrt();
            }
            ScalarField { values }
        }
        ChartKind::Sphere => {
            let p = grid.embed(y);
            let mut values = vec![0.0; grid.node_count()];
            for idx in 0..grid.node_count() {
                let q = grid.embed(idx);
                let dot = (p[0] * q[0] + p[1] * q[1] + p[2] * q[2]).clamp(-1.0, 1.0);
                values[idx] = dot.acos();
            }
            ScalarField { values }
        }
        ChartKind::ConformalTorus => dijkstra(grid, y),
    }
}

fn dijkstra(grid: &ChartGrid, start: usize) -> ScalarField {
    let n = grid.node_count();
    let h = grid.hx;
    let diag = h * std::f64::consts::SQRT_2;
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[start] = 0.0;
    heap.push(HeapEntry { dist: 0.0, node: start });
    let offsets: [(isize, isize, f64); 8] = [
        (0, 1, h),
        (0, -1, h),
        (1, 0, h),
        (-1, 0, h),
        (1, 1, diag),
        (1, -1, diag),
        (-1, 1, diag),
        (-1, -1, diag),
    ];
    while let Some(HeapEntry { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        let j = (node / grid.nx) as isize;
        let i = (node % grid.nx) as isize;
        for &(dj, di, len) in &offsets {
            let nb = grid.wrap(j + dj, i + di);
            // Edge weight: conformal length with the midpoint factor.
            let w = 0.5 * (grid.lambda(node) + grid.lambda(nb)) * len;
            let nd = d + w;
            if nd < dist[nb] {
                dist[nb] = nd;
                heap.push(HeapEntry { dist: nd, node: nb });
            }
        }
    }
    ScalarField { values: dist }
}

/// Injectivity radius of the chart. Flat torus: half the shortest closed
/// geodesic. Sphere: pi. Conformal torus: the certified lower bound
/// `lambda_min * L / 2` (shortest nontrivial loop in chart length, scaled by
/// the smallest metric factor).
pub fn injectivity_radius(grid: &ChartGrid) -> f64 {
    match grid.kind {
        ChartKind::FlatTorus => grid.side / 2.0,
        ChartKind::Sphere => std::f64::consts::PI,
        ChartKind::ConformalTorus => grid.lambda_min() * grid.side / 2.0,
    }
}
