//! Density ratios, the measure-kernel inequality suite, the clearing-out
//! scanner and the forward-density probe.

use super::kernel::CutoffProfile;
use super::{energy_measure, DiscreteMeasure};
use crate::error::SeriesError;
use crate::manifold::{geodesic_distance, ChartGrid, ScalarField};
use crate::phasefield::{DoubleWell, PhaseField};
use std::sync::Arc;

/// Codimension-one density ratio `mu(B_r(x)) / (omega_1 r)` with
/// `omega_1 = 2`. Geodesic balls are sublevel sets of the distance field;
/// boundary cells are included wholly.
pub fn density_ratio(
    mu: &DiscreteMeasure,
    dist: &ScalarField,
    r: f64,
    r0: f64,
) -> Result<f64, SeriesError> {
    if !(r > 0.0 && r < r0) {
        return Err(SeriesError::RadiusRange { r, r0 });
    }
    Ok(mu.ball_mass(dist, r) / (2.0 * r))
}

fn phi_r_sum(mu: &DiscreteMeasure, dist: &ScalarField, r: f64, zeta: &CutoffProfile) -> f64 {
    let mut acc = 0.0;
    for (w, d) in mu.weights.iter().zip(&dist.values) {
        if *w == 0.0 {
            continue;
        }
        let rho = d * d;
        let z = zeta.value(rho);
        if z == 0.0 {
            continue;
        }
        acc += w * z * (-rho / (2.0 * r * r)).exp() / r;
    }
    acc
}

fn phi_r_tail_sum(
    mu: &DiscreteMeasure,
    dist: &ScalarField,
    r: f64,
    beyond: f64,
    zeta: &CutoffProfile,
) -> f64 {
    let mut acc = 0.0;
    for (w, d) in mu.weights.iter().zip(&dist.values) {
        if *w == 0.0 || *d <= beyond {
            continue;
        }
        let rho = d * d;
        let z = zeta.value(rho);
        if z == 0.0 {
            continue;
        }
        acc += w * z * (-rho / (2.0 * r * r)).exp() / r;
    }
    acc
}

#[derive(Debug, Clone)]
pub struct ClauseSlack {
    pub name: &'static str,
    /// Worst `rhs - lhs` over the sampled probes; nonnegative means the
    /// inequality held everywhere.
    pub worst_slack: f64,
    /// Natural scale of the worst pair, for relative tolerances.
    pub scale: f64,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct KernelBoundsReport {
    /// Density precondition exceeded its cap: the report is vacuous.
    pub vacuous: bool,
    /// Measured density-ratio constant of the input measure.
    pub d_tilde0: f64,
    /// The kernel-mass bound D: fitted as the sampled max of clause (i)
    /// unless a ledger value is supplied.
    pub d: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub alpha_vi: f64,
    pub clauses: Vec<ClauseSlack>,
}

impl KernelBoundsReport {
    pub fn worst_slack(&self) -> f64 {
        self.clauses.iter().map(|c| c.worst_slack).fold(f64::INFINITY, f64::min)
    }

    /// All clause slacks at least `-rel_tol * scale`.
    pub fn all_hold(&self, rel_tol: f64) -> bool {
        self.clauses.iter().all(|c| c.worst_slack >= -rel_tol * c.scale)
    }
}

pub struct SuiteProbes {
    pub y_nodes: Vec<usize>,
    pub radii: Vec<f64>,
    pub deltas: Vec<f64>,
}

/// Evaluate the measure-kernel comparison inequalities on sampled probes:
/// (i) the uniform kernel-mass bound, (ii) the Gaussian tail bound outside a
/// ball, (iii) anchor-shift stability, (iv) radius monotonicity after
/// rescaling, (v) radius-ratio stability, (vi) the kernel-vs-ball comparison.
/// Fitted constants (D, gamma2, gamma3, alpha) are reported alongside the
/// worst slacks.
pub fn kernel_bounds_suite(
    mu: &DiscreteMeasure,
    grid: &Arc<ChartGrid>,
    r0: f64,
    d_ledger: Option<f64>,
    d_tilde0_cap: f64,
    probes: &SuiteProbes,
) -> KernelBoundsReport {
    let zeta = CutoffProfile::new(r0);
    let h = grid.hx.max(grid.hy);
    let dist_fields: Vec<ScalarField> =
        probes.y_nodes.iter().map(|&y| geodesic_distance(grid, y)).collect();

    // Density precondition.
    let mut d_tilde0 = 0.0f64;
    for dist in &dist_fields {
        for &r in &probes.radii {
            if r > 0.0 && r < r0 {
                d_tilde0 = d_tilde0.max(mu.ball_mass(dist, r) / (2.0 * r));
            }
        }
    }
    let vacuous = d_tilde0 > d_tilde0_cap;

    // Clause (i): kernel masses and the fitted D.
    let mut masses: Vec<Vec<f64>> = Vec::with_capacity(dist_fields.len());
    let mut max_mass = 0.0f64;
    for dist in &dist_fields {
        let row: Vec<f64> =
            probes.radii.iter().map(|&r| phi_r_sum(mu, dist, r, &zeta)).collect();
        for &m in &row {
            max_mass = max_mass.max(m);
        }
        masses.push(row);
    }
    let d = d_ledger.unwrap_or(max_mass);
    let mut clauses = Vec::new();
    clauses.push(ClauseSlack {
        name: "kernel-mass-bound",
        worst_slack: d - max_mass,
        scale: d.max(max_mass).max(1e-9),
        detail: format!("max kernel mass {max_mass:.6e} vs D = {d:.6e}"),
    });

    // Clause (ii): tail outside B_R bounded by 2 D exp(-3R^2 / 8r^2).
    let mut worst = f64::INFINITY;
    let mut scale: f64 = 1e-9;
    let mut detail = String::from("no admissible (r, R) pair");
    for (dist, _) in dist_fields.iter().zip(&probes.y_nodes) {
        for &r in &probes.radii {
            for mult in [2.0, 4.0] {
                let big_r = mult * r;
                if big_r >= r0 {
                    continue;
                }
                let tail = phi_r_tail_sum(mu, dist, r, big_r, &zeta);
                let bound = 2.0 * d * (-3.0 * big_r * big_r / (8.0 * r * r)).exp();
                let slack = bound - tail;
                if slack < worst {
                    worst = slack;
                    scale = bound.max(tail).max(1e-9);
                    detail = format!("r = {r}, R = {big_r}: tail {tail:.3e} vs bound {bound:.3e}");
                }
            }
        }
    }
    clauses.push(ClauseSlack { name: "gaussian-tail", worst_slack: worst.min(1e30), scale, detail });

    // Clause (iii): anchor shift within gamma2 * r.
    let gamma2_candidates = [0.4, 0.2, 0.1, 0.05];
    let mut gamma2 = 0.0;
    let mut g2_slack = (f64::INFINITY, 1e-9f64, String::new());
    'g2: for &cand in &gamma2_candidates {
        let mut worst = f64::INFINITY;
        let mut sc: f64 = 1e-9;
        let mut det = String::new();
        for (yi, &y) in probes.y_nodes.iter().enumerate() {
            let j = (y / grid.nx) as isize;
            let i = (y % grid.nx) as isize;
            for &r in &probes.radii {
                let shift = (cand * r / h).floor() as isize;
                if shift < 1 {
                    continue;
                }
                for (dj, di) in [(0isize, shift), (shift, 0), (0, -shift), (-shift, 0)] {
                    let y1 = grid.wrap(j + dj, i + di);
                    let dist1 = geodesic_distance(grid, y1);
                    for &delta in &probes.deltas {
                        let lhs = phi_r_sum(mu, &dist1, r, &zeta);
                        let rhs = (1.0 + delta) * masses[yi][probes.radii.iter().position(|&x| x == r).unwrap()]
                            + d * delta;
                        let slack = rhs - lhs;
                        if slack < worst {
                            worst = slack;
                            sc = rhs.abs().max(lhs.abs()).max(1e-9);
                            det = format!("gamma2 = {cand}, r = {r}, delta = {delta}");
                        }
                    }
                }
            }
        }
        if worst >= 0.0 || !worst.is_finite() {
            gamma2 = cand;
            g2_slack = (worst.min(1e30), sc, det);
            break 'g2;
        }
        g2_slack = (worst, sc, det);
    }
    clauses.push(ClauseSlack {
        name: "anchor-shift",
        worst_slack: g2_slack.0,
        scale: g2_slack.1,
        detail: g2_slack.2,
    });

    // Clause (iv): mass(r) <= (R/r) mass(R) for r <= R; holds pointwise.
    let mut worst = f64::INFINITY;
    let mut scale: f64 = 1e-9;
    let mut detail = String::new();
    for (yi, _) in probes.y_nodes.iter().enumerate() {
        for (ri, &r) in probes.radii.iter().enumerate() {
            for (rj, &big_r) in probes.radii.iter().enumerate() {
                if big_r < r || big_r >= r0 {
                    continue;
                }
                let lhs = masses[yi][ri];
                let rhs = (big_r / r) * masses[yi][rj];
                let slack = rhs - lhs;
                if slack < worst {
                    worst = slack;
                    scale = rhs.abs().max(lhs.abs()).max(1e-9);
                    detail = format!("r = {r}, R = {big_r}");
                }
            }
        }
    }
    clauses.push(ClauseSlack {
        name: "radius-monotone",
        worst_slack: worst.min(1e30),
        scale,
        detail,
    });

    // Clause (v): mild radius growth R/r <= 1 + gamma3.
    let gamma3_candidates = [0.4, 0.2, 0.1, 0.05, 0.02];
    let mut gamma3 = 0.0;
    let mut g3_slack = (f64::INFINITY, 1e-9f64, String::new());
    'g3: for &cand in &gamma3_candidates {
        let mut worst = f64::INFINITY;
        let mut sc: f64 = 1e-9;
        let mut det = String::new();
        for (yi, dist) in dist_fields.iter().enumerate() {
            for (ri, &r) in probes.radii.iter().enumerate() {
                let big_r = (1.0 + cand) * r;
                for &delta in &probes.deltas {
                    let lhs = phi_r_sum(mu, dist, big_r, &zeta);
                    let rhs = (1.0 + delta) * masses[yi][ri] + d * delta;
                    let slack = rhs - lhs;
                    if slack < worst {
                        worst = slack;
                        sc = rhs.abs().max(lhs.abs()).max(1e-9);
                        det = format!("gamma3 = {cand}, r = {r}, delta = {delta}");
                    }
                }
            }
        }
        if worst >= 0.0 || !worst.is_finite() {
            gamma3 = cand;
            g3_slack = (worst.min(1e30), sc, det);
            break 'g3;
        }
        g3_slack = (worst, sc, det);
    }
    clauses.push(ClauseSlack {
        name: "radius-ratio",
        worst_slack: g3_slack.0,
        scale: g3_slack.1,
        detail: g3_slack.2,
    });

    // Clause (vi): kernel at radius alpha*r against the ball mass at r,
    // with the 2-ball constant omega_2 = pi in the denominator.
    let alpha_candidates = [0.5, 0.35, 0.25, 0.15, 0.1];
    let omega2 = std::f64::consts::PI;
    let mut alpha_vi = 0.0;
    let mut g6_slack = (f64::INFINITY, 1e-9f64, String::new());
    'g6: for &cand in &alpha_candidates {
        let mut worst = f64::INFINITY;
        let mut sc: f64 = 1e-9;
        let mut det = String::new();
        for dist in dist_fields.iter() {
            for &r in &probes.radii {
                let ar = cand * r;
                if ar < 2.0 * h {
                    continue;
                }
                for &delta in &probes.deltas {
                    let lhs = phi_r_sum(mu, dist, ar, &zeta);
                    let rhs = mu.ball_mass(dist, r) / (omega2 * cand * r) + delta * d;
                    let slack = rhs - lhs;
                    if slack < worst {
                        worst = slack;
                        sc = rhs.abs().max(lhs.abs()).max(1e-9);
                        det = format!("alpha = {cand}, r = {r}, delta = {delta}");
                    }
                }
            }
        }
        if worst >= 0.0 || !worst.is_finite() {
            alpha_vi = cand;
            g6_slack = (worst.min(1e30), sc, det);
            break 'g6;
        }
        g6_slack = (worst, sc, det);
    }
    clauses.push(ClauseSlack {
        name: "kernel-vs-ball",
        worst_slack: g6_slack.0,
        scale: g6_slack.1,
        detail: g6_slack.2,
    });

    KernelBoundsReport { vacuous, d_tilde0, d, gamma2, gamma3, alpha_vi, clauses }
}

#[derive(Debug, Clone)]
pub struct ScanParams {
    pub kappa1: f64,
    pub kappa2: f64,
    /// Threshold the solution must clear: `|u| >= alpha` in the neighborhood.
    pub alpha: f64,
    pub r0: f64,
    pub probe_nodes: Vec<usize>,
    /// Anchor times `s`.
    pub probe_times: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ScanViolation {
    pub probe_node: usize,
    pub s: f64,
    pub t: f64,
    pub node: usize,
    pub time: f64,
    pub u_abs: f64,
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub probes: usize,
    /// Probes whose kernel mass dropped below kappa2 at some admissible t.
    pub triggered: usize,
    /// Probes with no admissible triggering time (hypothesis failed).
    pub skipped: usize,
    pub violations: Vec<ScanViolation>,
}

/// Clearing-out scan over a stored run: wherever the kernel-weighted energy
/// shortly before `(y, s)` falls below `kappa2`, the solution must satisfy
/// `|u| >= alpha` on the space-time neighborhood of `(y, s)` with radius
/// `sqrt(s-t)/2` and time window `(s-t)/4`. Report-only.
pub fn clearing_out_scan(
    times: &[f64],
    fields: &[PhaseField],
    well: &DoubleWell,
    params: &ScanParams,
) -> ScanReport {
    assert_eq!(times.len(), fields.len());
    let grid = fields[0].grid.clone();
    let zeta = CutoffProfile::new(params.r0);
    let measures: Vec<DiscreteMeasure> =
        fields.iter().map(|f| energy_measure(f, well)).collect();
    let mut report = ScanReport {
        probes: params.probe_nodes.len() * params.probe_times.len(),
        triggered: 0,
        skipped: 0,
        violations: Vec::new(),
    };
    for &y in &params.probe_nodes {
        let dist = geodesic_distance(&grid, y);
        for &s in &params.probe_times {
            let mut any_triggered = false;
            for (ti, &t) in times.iter().enumerate() {
                let gap = s - t;
                if gap <= 0.0 || gap >= params.kappa1 {
                    continue;
                }
                // Kernel mass at (y, s) evaluated against mu_t.
                let inv_sqrt = gap.powf(-0.5);
                let inv4 = 1.0 / (4.0 * gap);
                let mut g_val = 0.0;
                for (node, w) in measures[ti].weights.iter().enumerate() {
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
                if g_val >= params.kappa2 {
                    continue;
                }
                any_triggered = true;
                let radius = 0.5 * gap.sqrt();
                let window = 0.25 * gap;
                for (si, &tau) in times.iter().enumerate() {
                    if (tau - s).abs() > window {
                        continue;
                    }
                    let u = &fields[si].u;
                    for node in 0..grid.node_count() {
                        if dist.values[node] <= radius && u.values[node].abs() < params.alpha {
                            report.violations.push(ScanViolation {
                                probe_node: y,
                                s,
                                t,
                                node,
                                time: tau,
                                u_abs: u.values[node].abs(),
                            });
                        }
                    }
                }
            }
            if any_triggered {
                report.triggered += 1;
            } else {
                report.skipped += 1;
            }
        }
    }
    report
}

/// Estimate of the forward density at `(y, t)`: the max over the five
/// smallest available `s > t` of the kernel mass anchored at `(y, s)`
/// against `mu_s`. An estimate of the limsup, never claimed as a limit.
pub fn forward_density(
    grid: &Arc<ChartGrid>,
    y: usize,
    t: f64,
    times: &[f64],
    measures: &[DiscreteMeasure],
    r0: f64,
) -> Result<f64, SeriesError> {
    assert_eq!(times.len(), measures.len());
    let after: Vec<usize> =
        (0..times.len()).filter(|&k| times[k] > t).take(5).collect();
    if after.len() < 2 {
        return Err(SeriesError::TooShort { got: after.len(), need: 2 });
    }
    let zeta = CutoffProfile::new(r0);
    let dist = geodesic_distance(grid, y);
    let mut best = 0.0f64;
    for k in after {
        let gap = times[k] - t;
        let inv_sqrt = gap.powf(-0.5);
        let inv4 = 1.0 / (4.0 * gap);
        let mut acc = 0.0;
        for (node, w) in measures[k].weights.iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            let rho = dist.values[node] * dist.values[node];
            let z = zeta.value(rho);
            if z == 0.0 {
                continue;
            }
            acc += w * z * inv_sqrt * (-rho * inv4).exp();
        }
        best = best.max(acc);
    }
    Ok(best)
}
