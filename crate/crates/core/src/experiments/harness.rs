//! The canonical run: evolve well-prepared data to a target time, sampling
//! every diagnostic the measure and varifold layers provide.

use super::interface::{extract_interface, InterfaceEstimate};
use super::ExactFlow;
use crate::error::RunError;
use crate::manifold::{
    geodesic_distance, injectivity_radius, ChartGrid, ChartKind, MetricSpec, ScalarField,
};
use crate::measure::{
    almost_monotonicity_fit, energy_measure, discrepancy_measure, monotonicity_g, ConstantsLedger,
    DiscreteMeasure, MonotonicityFit, MonotonicityKernel, Provenance,
};
use crate::phasefield::{
    dissipation_identity_check, gradient_sup, surface_tension, well_prepared_init,
    DissipationCheck, DoubleWell, InitialInterface, PhaseField, Stepper,
};
use crate::varifold::{
    brakke_functional_limit, build_varifold, default_gradient_threshold, mean_curvature_estimate,
    BrakkeValue, LimitParams,
};
use std::sync::Arc;

/// Everything needed to run one flow at one interface width.
#[derive(Debug, Clone)]
pub struct Scene {
    pub metric: MetricSpec,
    pub interface: InitialInterface,
    pub well: DoubleWell,
    pub eps: f64,
    /// dt = dt_factor * eps^2; at most 1/2.
    pub dt_factor: f64,
    pub t_end: f64,
    /// Sample diagnostics every `cadence` steps.
    pub cadence: usize,
    /// Number of auto anchors for the monotonicity functional.
    pub anchor_count: usize,
    /// Explicit anchors (chart position, anchor time); overrides the auto
    /// placement when nonempty.
    pub explicit_anchors: Vec<([f64; 2], f64)>,
    pub ledger_overrides: Vec<(String, f64)>,
}

impl Scene {
    /// Canonical torus circle with the h = eps/4 coupling.
    pub fn torus_circle(side: f64, center: (f64, f64), radius: f64, eps: f64, t_end: f64) -> Scene {
        let resolution = (side / (0.25 * eps)).ceil() as usize;
        Scene {
            metric: MetricSpec::FlatTorus { side, resolution },
            interface: InitialInterface::Circle { center, radius },
            well: DoubleWell::quartic(),
            eps,
            dt_factor: 0.5,
            t_end,
            cadence: 0, // auto
            anchor_count: 5,
            explicit_anchors: Vec::new(),
            ledger_overrides: Vec::new(),
        }
    }

    /// Canonical sphere cap with the h = eps/4 coupling.
    pub fn sphere_cap(theta0: f64, eps: f64, t_end: f64) -> Scene {
        let resolution = (std::f64::consts::PI / (0.25 * eps)).ceil() as usize;
        Scene {
            metric: MetricSpec::Sphere { resolution },
            interface: InitialInterface::Cap { theta0 },
            well: DoubleWell::quartic(),
            eps,
            dt_factor: 0.5,
            t_end,
            cadence: 0,
            anchor_count: 5,
            explicit_anchors: Vec::new(),
            ledger_overrides: Vec::new(),
        }
    }

    pub fn exact_flow(&self) -> Option<ExactFlow> {
        match (&self.metric, &self.interface) {
            (MetricSpec::FlatTorus { .. }, InitialInterface::Circle { radius, .. }) => {
                Some(ExactFlow::TorusCircle { r0: *radius })
            }
            (MetricSpec::Sphere { .. }, InitialInterface::Cap { theta0 }) => {
                Some(ExactFlow::SphereCap { theta0: *theta0 })
            }
            _ => None,
        }
    }
}

#[derive(Debug)]
pub struct RunOutput {
    pub grid: Arc<ChartGrid>,
    pub well: DoubleWell,
    pub eps: f64,
    pub dt: f64,
    pub sigma: f64,
    pub r0: f64,
    pub ledger: ConstantsLedger,
    pub sample_times: Vec<f64>,
    pub snapshots: Vec<PhaseField>,
    pub mass: Vec<f64>,
    pub xi_mass: Vec<f64>,
    pub xi_sup_pos: Vec<f64>,
    pub mu_phi1: Vec<f64>,
    pub mu_bump: Vec<f64>,
    pub radius: Vec<Option<f64>>,
    pub grad_sup_eps: Vec<f64>,
    /// Dissipation-identity checks at sample times, flat test function.
    pub diss_phi1: Vec<(f64, DissipationCheck)>,
    /// Same with the bump test function.
    pub diss_bump: Vec<(f64, DissipationCheck)>,
    /// Worst relative per-step energy increase over the whole run.
    pub max_energy_step_increase: f64,
    pub extinction_time: Option<f64>,
    /// The bump test function used throughout the run diagnostics.
    pub bump: ScalarField,
    /// Plateau bump used by the dissipation-identity checks.
    pub bump_plateau: ScalarField,
    /// Monotonicity anchors: (node, anchor time).
    pub anchors: Vec<(usize, f64)>,
    pub exact: Option<ExactFlow>,
}

impl RunOutput {
    pub fn initial_mass(&self) -> f64 {
        *self.mass.first().unwrap_or(&0.0)
    }

    pub fn radius_estimate(&self, k: usize) -> Option<f64> {
        self.radius.get(k).copied().flatten()
    }
}

/// Bump test function `(1 - d^2/rho^2)^2` around a chart point.
pub fn bump_test_function(grid: &Arc<ChartGrid>, center_node: usize, rho: f64) -> ScalarField {
    let dist = geodesic_distance(grid, center_node);
    ScalarField {
        values: dist
            .values
            .iter()
            .map(|&d| {
                if d < rho {
                    let q = 1.0 - (d * d) / (rho * rho);
                    q * q
                } else {
                    0.0
                }
            })
            .collect(),
    }
}

/// Plateau test function: identically 1 inside `rho_in`, quintic smoothstep
/// down to 0 at `rho_out`.
pub fn plateau_test_function(
    grid: &Arc<ChartGrid>,
    center_node: usize,
    rho_in: f64,
    rho_out: f64,
) -> ScalarField {
    let dist = geodesic_distance(grid, center_node);
    ScalarField {
        values: dist
            .values
            .iter()
            .map(|&d| {
                if d <= rho_in {
                    1.0
                } else if d >= rho_out {
                    0.0
                } else {
                    let s = (d - rho_in) / (rho_out - rho_in);
                    1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s))
                }
            })
            .collect(),
    }
}

fn nearest_node(grid: &ChartGrid, x: f64, y: f64) -> usize {
    match grid.kind {
        ChartKind::Sphere => {
            let j = (x / grid.hy).round() as isize;
            let i = (y / grid.hx).round() as isize;
            grid.wrap(j.clamp(0, grid.ny as isize - 1), i)
        }
        _ => {
            let i = (x / grid.hx).round() as isize;
            let j = (y / grid.hy).round() as isize;
            grid.wrap(j, i)
        }
    }
}

/// Auto anchor placement: on the initial interface, on the mid-run
/// interface, at the interface center, far away, and halfway out.
fn auto_anchors(
    grid: &Arc<ChartGrid>,
    scene: &Scene,
    s_time: f64,
    count: usize,
) -> Vec<(usize, f64)> {
    let mut nodes = Vec::new();
    match (&scene.metric, &scene.interface) {
        (MetricSpec::FlatTorus { side, .. }, InitialInterface::Circle { center, radius }) => {
            let mid_r = scene
                .exact_flow()
                .and_then(|f| f.radius(0.75 * s_time))
                .unwrap_or(radius * 0.6);
            nodes.push(nearest_node(grid, center.0, center.1));
            nodes.push(nearest_node(grid, center.0 + radius, center.1));
            nodes.push(nearest_node(grid, center.0, center.1 + mid_r));
            nodes.push(nearest_node(grid, center.0 + side / 2.0, center.1 + side / 2.0));
            nodes.push(nearest_node(
                grid,
                center.0 - (radius + side / 2.0) / 2.0,
                center.1,
            ));
        }
        (MetricSpec::Sphere { .. }, InitialInterface::Cap { theta0 }) => {
            let mid = scene
                .exact_flow()
                .and_then(|f| f.radius(0.75 * s_time))
                .unwrap_or(theta0 * 0.8);
            nodes.push(nearest_node(grid, 0.0, 0.0)); // pole
            nodes.push(nearest_node(grid, *theta0, 0.0));
            nodes.push(nearest_node(grid, mid, std::f64::consts::FRAC_PI_2));
            nodes.push(nearest_node(grid, std::f64::consts::PI - 0.3, 0.0));
            nodes.push(nearest_node(grid, 0.5 * (theta0 + std::f64::consts::PI), 1.0));
        }
        _ => {
            // Generic fallback: lattice points.
            for k in 0..count {
                let j = (grid.ny / (count + 1)) * (k + 1);
                nodes.push(grid.idx(j.min(grid.ny - 1), (k * grid.nx) / count.max(1)));
            }
        }
    }
    nodes.truncate(count.max(1));
    nodes.into_iter().map(|n| (n, s_time)).collect()
}

/// Run the flow, sampling diagnostics at the configured cadence.
/// Deterministic: no randomness anywhere in the loop, sequential reductions.
pub fn run_canonical(scene: &Scene) -> Result<RunOutput, RunError> {
    let grid = ChartGrid::build(&scene.metric)?;
    let well = scene.well.clone();
    let (mut field, init_report) = well_prepared_init(&grid, &scene.interface, scene.eps, &well)?;
    let sigma = surface_tension(&well)?;
    let r0 = injectivity_radius(&grid);

    let mut ledger = ConstantsLedger::defaults(sigma, r0, well.alpha);
    ledger.set("c2", init_report.mass, Provenance::FittedFromRuns);
    ledger.set("c_check", init_report.c_check, Provenance::FittedFromRuns);
    ledger.set("k0_observed", init_report.k0_observed, Provenance::FittedFromRuns);
    for (k, v) in &scene.ledger_overrides {
        ledger.set(k, *v, Provenance::FittedFromRuns);
    }

    let dt = scene.dt_factor * scene.eps * scene.eps;
    let n_steps = (scene.t_end / dt).round().max(1.0) as usize;
    let cadence = if scene.cadence > 0 {
        scene.cadence
    } else {
        (n_steps / 40).max(1)
    };

    // Bump center: the interface center; radius wide enough to cover the
    // interface through the whole run.
    let (bump_node, bump_rho) = match (&scene.metric, &scene.interface) {
        (MetricSpec::FlatTorus { side, .. }, InitialInterface::Circle { center, radius }) => (
            nearest_node(&grid, center.0, center.1),
            (radius + 0.3 * side).min(0.49 * side),
        ),
        (MetricSpec::Sphere { .. }, InitialInterface::Cap { theta0 }) => (
            nearest_node(&grid, 0.0, 0.0),
            (theta0 + 0.6).min(std::f64::consts::PI - 0.3),
        ),
        _ => (0, 0.45 * grid.side),
    };
    let bump = bump_test_function(&grid, bump_node, bump_rho);
    // The dissipation identity is asserted pointwise in time relative to the
    // functional's size, so its bump must keep the functional sign-definite:
    // a plateau covering the swept interface region makes the dissipation
    // term dominate at every time.
    let plateau_in = match (&scene.metric, &scene.interface) {
        (_, InitialInterface::Circle { radius, .. }) => (radius + 0.2).min(0.9 * bump_rho),
        (_, InitialInterface::Cap { theta0 }) => (theta0 + 0.3).min(0.9 * bump_rho),
    };
    let bump_plateau = plateau_test_function(&grid, bump_node, plateau_in, bump_rho);
    let one = ScalarField::constant(&grid, 1.0);

    let s_anchor = 0.8 * scene.t_end;
    let anchors = if scene.explicit_anchors.is_empty() {
        auto_anchors(&grid, scene, s_anchor, scene.anchor_count)
    } else {
        scene
            .explicit_anchors
            .iter()
            .map(|&(p, s)| (nearest_node(&grid, p[0], p[1]), s))
            .collect()
    };

    let stepper = Stepper::new(well.clone());
    let mut out = RunOutput {
        grid: grid.clone(),
        well: well.clone(),
        eps: scene.eps,
        dt,
        sigma,
        r0,
        ledger,
        sample_times: Vec::new(),
        snapshots: Vec::new(),
        mass: Vec::new(),
        xi_mass: Vec::new(),
        xi_sup_pos: Vec::new(),
        mu_phi1: Vec::new(),
        mu_bump: Vec::new(),
        radius: Vec::new(),
        grad_sup_eps: Vec::new(),
        diss_phi1: Vec::new(),
        diss_bump: Vec::new(),
        max_energy_step_increase: 0.0,
        extinction_time: None,
        bump,
        bump_plateau,
        anchors,
        exact: scene.exact_flow(),
    };

    let mut prev_mass = init_report.mass;
    let initial_mass = init_report.mass;

    let record = |out: &mut RunOutput, field: &PhaseField| {
        let mu = energy_measure(field, &well);
        let xi = discrepancy_measure(field, &well);
        let mass = mu.total_mass();
        out.sample_times.push(field.t);
        out.mass.push(mass);
        out.xi_mass.push(xi.total_variation());
        out.xi_sup_pos.push(xi.sup_density_pos());
        out.mu_phi1.push(mass);
        out.mu_bump.push(mu.integrate(&out.bump));
        let est = extract_interface(field);
        let radius = match est {
            InterfaceEstimate::Torus { radius, .. } => Some(radius),
            InterfaceEstimate::Sphere { theta, .. } => Some(theta),
            InterfaceEstimate::Empty => None,
        };
        if radius.is_none() && out.extinction_time.is_none() && mass < 0.01 * initial_mass {
            out.extinction_time = Some(field.t);
        }
        out.radius.push(radius);
        out.grad_sup_eps.push(field.eps * gradient_sup(field));
        out.snapshots.push(field.clone());
    };

    record(&mut out, &field);
    let mut pending_sample: Option<PhaseField> = Some(field.clone());

    for step_idx in 1..=n_steps {
        let next = stepper
            .step(&field, dt)
            .map_err(|e| RunError::Step { t: field.t, source: e })?;
        let mass_after = energy_measure(&next, &well).total_mass();
        if prev_mass > 0.0 {
            let rel = (mass_after - prev_mass) / prev_mass.max(1e-300);
            out.max_energy_step_increase = out.max_energy_step_increase.max(rel);
        }
        prev_mass = mass_after;

        if let Some(before) = pending_sample.take() {
            let t = before.t;
            if let Ok(c) = dissipation_identity_check(&before, &next, &one, dt, &well) {
                out.diss_phi1.push((t, c));
            }
            let c_bump =
                dissipation_identity_check(&before, &next, &out.bump_plateau, dt, &well);
            if let Ok(c) = c_bump {
                out.diss_bump.push((t, c));
            }
        }

        field = next;
        if step_idx % cadence == 0 || step_idx == n_steps {
            record(&mut out, &field);
            if step_idx != n_steps {
                pending_sample = Some(field.clone());
            }
        }
    }

    Ok(out)
}

/// Energy measures of every stored snapshot.
pub fn measures(run: &RunOutput) -> Vec<DiscreteMeasure> {
    run.snapshots.iter().map(|s| energy_measure(s, &run.well)).collect()
}

/// Kernel-weighted mass series for one anchor, over sample times strictly
/// before the anchor time.
pub fn g_series(
    run: &RunOutput,
    mus: &[DiscreteMeasure],
    anchor: (usize, f64),
) -> Vec<(f64, f64)> {
    let kernel = MonotonicityKernel::new(&run.grid, anchor.0, anchor.1, run.r0);
    let mut series = Vec::new();
    for (k, &t) in run.sample_times.iter().enumerate() {
        if t < anchor.1 - 1e-12 {
            if let Ok(g) = monotonicity_g(&mus[k], &kernel, t) {
                series.push((t, g));
            }
        }
    }
    series
}

/// Joint monotonicity fit over all anchors of a run, at the ledger caps.
pub fn fit_monotonicity(run: &RunOutput, mus: &[DiscreteMeasure]) -> MonotonicityFit {
    let caps = (
        run.ledger.get_or("c3_cap", 32.0),
        run.ledger.get_or("c4_cap", 32.0),
        run.ledger.get_or("c5_cap", 32.0),
    );
    let series: Vec<Vec<(f64, f64)>> =
        run.anchors.iter().map(|&a| g_series(run, mus, a)).collect();
    let s_time = run.anchors.first().map(|a| a.1).unwrap_or(run.t_end_effective());
    almost_monotonicity_fit(&series, s_time, caps).unwrap_or(MonotonicityFit {
        c3: f64::NAN,
        c4: f64::NAN,
        c5: f64::NAN,
        feasible: false,
        violations: usize::MAX,
    })
}

impl RunOutput {
    pub fn t_end_effective(&self) -> f64 {
        *self.sample_times.last().unwrap_or(&0.0)
    }
}

/// Per-sample limit Brakke functional values against a test function.
pub fn brakke_series(
    run: &RunOutput,
    mus: &[DiscreteMeasure],
    phi: &ScalarField,
) -> (Vec<f64>, Vec<BrakkeValue>) {
    let params = LimitParams::default();
    let thr = default_gradient_threshold(run.eps);
    let mut mu_phi = Vec::new();
    let mut b_vals = Vec::new();
    for (k, snap) in run.snapshots.iter().enumerate() {
        mu_phi.push(mus[k].integrate(phi));
        let v = build_varifold(snap, &run.well, thr);
        let h = mean_curvature_estimate(snap, &v, &run.well);
        let lim = brakke_functional_limit(&mus[k], &h, &v, phi, &params);
        b_vals.push(lim.value);
    }
    (mu_phi, b_vals)
}

/// Worst relative dissipation-identity residual across the run, for both
/// test functions.
pub fn dissipation_worst_rel(run: &RunOutput) -> f64 {
    let mut worst = 0.0f64;
    for (_, c) in run.diss_phi1.iter().chain(&run.diss_bump) {
        worst = worst.max(c.residual / c.rhs.abs().max(1e-12));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoke_run_emits_samples() {
        // Coarse, fast smoke test of the whole loop.
        let scene = Scene::torus_circle(2.0, (1.0, 1.0), 0.5, 0.1, 0.05);
        let run = run_canonical(&scene).unwrap();
        // 10 steps at cadence 1: initial state plus one sample per step.
        assert!(run.sample_times.len() >= 10, "{} samples", run.sample_times.len());
        assert_eq!(run.sample_times.len(), run.snapshots.len());
        assert!(run.max_energy_step_increase <= 1e-8, "{}", run.max_energy_step_increase);
        // Mass decreases along the shrinking circle.
        assert!(run.mass.last().unwrap() < &run.mass[0]);
        // Radius tracks the oracle loosely even at this coarse eps.
        let k = run.sample_times.len() / 2;
        let t = run.sample_times[k];
        let exact = run.exact.unwrap().radius(t).unwrap();
        let got = run.radius_estimate(k).expect("interface alive");
        assert!((got - exact).abs() / exact < 0.2, "r {got} vs {exact}");
        // Gradient bound holds.
        let ktilde = run.ledger.get("ktilde").unwrap();
        for g in &run.grad_sup_eps {
            assert!(*g <= ktilde, "eps grad sup {g} vs {ktilde}");
        }
    }

    #[test]
    fn determinism_bitwise() {
        let scene = Scene::torus_circle(2.0, (1.0, 1.0), 0.5, 0.16, 0.02);
        let a = run_canonical(&scene).unwrap();
        let b = run_canonical(&scene).unwrap();
        assert_eq!(a.mass.len(), b.mass.len());
        for (x, y) in a.mass.iter().zip(&b.mass) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        for (x, y) in a
            .snapshots
            .last()
            .unwrap()
            .u
            .values
            .iter()
            .zip(&b.snapshots.last().unwrap().u.values)
        {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}
