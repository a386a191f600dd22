//! Support identity probing: away from the energy support the solution sits
//! at a pure phase; where the interface passes it crosses the threshold.

use super::interface::interface_crossings;
use crate::manifold::{geodesic_distance, ChartGrid, ChartKind};
use crate::measure::{ConstantsLedger, CutoffProfile, DiscreteMeasure, ScanParams};
use crate::phasefield::PhaseField;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct SupportProbeParams {
    pub kappa2: f64,
    /// Forward time gap used for the local kernel mass.
    pub gap: f64,
    /// Off-support states must satisfy |u| >= this.
    pub saturation: f64,
    /// On-interface neighborhoods must contain |u| <= alpha.
    pub alpha: f64,
    /// Spatial probe lattice (per side) and number of probe times.
    pub lattice: usize,
    pub time_count: usize,
}

impl SupportProbeParams {
    pub fn from_ledger(ledger: &crate::measure::ConstantsLedger) -> Self {
        SupportProbeParams {
            kappa2: ledger.get_or("kappa2", 0.8),
            gap: 0.5 * ledger.get_or("kappa1", 0.015625),
            saturation: 0.99,
            alpha: ledger.get_or("alpha", 0.6),
            lattice: 8,
            time_count: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SupportReport {
    pub probes: usize,
    pub off_support: usize,
    pub on_interface: usize,
    /// (node, t, min |u| in the neighborhood) for failed off-support probes.
    pub off_support_violations: Vec<(usize, f64, f64)>,
    /// (node, t, min |u|) for on-interface neighborhoods that never crossed
    /// the threshold.
    pub interface_violations: Vec<(usize, f64, f64)>,
}

impl SupportReport {
    pub fn clean(&self) -> bool {
        self.off_support_violations.is_empty() && self.interface_violations.is_empty()
    }
}

/// Evenly spaced probe lattice over the chart, skipping sphere poles.
pub fn probe_lattice(grid: &ChartGrid, per_side: usize) -> Vec<usize> {
    let mut probe_nodes = Vec::new();
    for a in 0..per_side {
        for b in 0..per_side {
            let j = (a * grid.ny) / per_side + grid.ny / (2 * per_side);
            let i = (b * grid.nx) / per_side + grid.nx / (2 * per_side);
            let idx = grid.idx(j.min(grid.ny - 1), i.min(grid.nx - 1));
            if grid.kind == ChartKind::Sphere && grid.is_pole(idx) {
                continue;
            }
            probe_nodes.push(idx);
        }
    }
    probe_nodes
}

/// Clearing-out scan parameters from the run ledger: the standard lattice is
/// 10 x 10 probes at `time_count` anchor times spread over the sampled span.
pub fn scan_params(
    grid: &ChartGrid,
    ledger: &ConstantsLedger,
    times: &[f64],
    per_side: usize,
    time_count: usize,
) -> ScanParams {
    let t0 = *times.first().unwrap_or(&0.0);
    let t1 = *times.last().unwrap_or(&1.0);
    let span = t1 - t0;
    let probe_times: Vec<f64> = (0..time_count)
        .map(|k| {
            let frac = if time_count == 1 {
                0.6
            } else {
                0.3 + 0.6 * (k as f64) / (time_count as f64 - 1.0)
            };
            t0 + frac * span
        })
        .collect();
    ScanParams {
        kappa1: ledger.get_or("kappa1", 0.015625),
        kappa2: ledger.get_or("kappa2", 0.8),
        alpha: ledger.get_or("alpha", 0.6),
        r0: ledger.get_or("r0", 1.0),
        probe_nodes: probe_lattice(grid, per_side),
        probe_times,
    }
}

/// Probe a space-time lattice of stored snapshots. Points whose local kernel
/// mass (anchored a short gap ahead) is below `kappa2` count as off-support
/// and must be saturated near a pure phase; points with an interface
/// crossing inside the neighborhood must dip below `alpha` there.
pub fn support_identity_probe(
    grid: &Arc<ChartGrid>,
    r0: f64,
    sample_times: &[f64],
    snapshots: &[PhaseField],
    mus: &[DiscreteMeasure],
    params: &SupportProbeParams,
) -> SupportReport {
    let zeta = CutoffProfile::new(r0);
    let radius = 0.5 * params.gap.sqrt();

    let probe_nodes = probe_lattice(grid, params.lattice);
    let n_samples = sample_times.len();
    let time_idx: Vec<usize> = (1..=params.time_count)
        .map(|k| (k * (n_samples - 1)) / (params.time_count + 1))
        .collect();

    let mut report = SupportReport {
        probes: 0,
        off_support: 0,
        on_interface: 0,
        off_support_violations: Vec::new(),
        interface_violations: Vec::new(),
    };

    for &y in &probe_nodes {
        let dist = geodesic_distance(grid, y);
        for &ti in &time_idx {
            let t = sample_times[ti];
            report.probes += 1;
            // Local kernel mass with anchor (y, t + gap).
            let inv_sqrt = params.gap.powf(-0.5);
            let inv4 = 1.0 / (4.0 * params.gap);
            let mut g_val = 0.0;
            for (node, w) in mus[ti].weights.iter().enumerate() {
                if *w == 0.0 {
                    continue;
                }
                let rho = dist.values[node] * dist.values[node];
                let z = zeta.value(rho);
                if z == 0.0 {
                    continue;
                }
                g_val += w * z * inv_sqrt * (-rho * inv4).exp();
            }
            let u = &snapshots[ti].u;
            let mut min_abs = f64::INFINITY;
            for node in 0..grid.node_count() {
                if dist.values[node] <= radius {
                    min_abs = min_abs.min(u.values[node].abs());
                }
            }
            if g_val < params.kappa2 {
                report.off_support += 1;
                if min_abs < params.saturation {
                    report.off_support_violations.push((y, t, min_abs));
                }
            } else {
                // Interface nearby? Check the crossings of this snapshot.
                let crossings = interface_crossings(&snapshots[ti]);
                let (pa, pb) = grid.chart_position(y);
                let passes = crossings.iter().any(|&(ca, cb)| {
                    let d = match grid.kind {
                        ChartKind::Sphere => {
                            // Coordinates are (theta, phi); compare through
                            // embedded vectors.
                            let v1 = [ca.sin() * cb.cos(), ca.sin() * cb.sin(), ca.cos()];
                            let v2 = [pa.sin() * pb.cos(), pa.sin() * pb.sin(), pa.cos()];
                            (v1[0] * v2[0] + v1[1] * v2[1] + v1[2] * v2[2])
                                .clamp(-1.0, 1.0)
                                .acos()
                        }
                        _ => {
                            let dx = grid.wrap_delta(ca - pa);
                            let dy = grid.wrap_delta(cb - pb);
                            (dx * dx + dy * dy).sqrt()
                        }
                    };
                    d <= radius
                });
                if passes {
                    report.on_interface += 1;
                    if min_abs > params.alpha {
                        report.interface_violations.push((y, t, min_abs));
                    }
                }
            }
        }
    }
    report
}
