//! Run-level exercise of the differential almost-monotonicity check: along
//! a shrinking-circle flow, the forward-difference rate of the anchored
//! kernel mass stays below the discrepancy term plus the fitted drift
//! constants, up to a 1e-3 relative slack.

use acflow::experiments::*;
use acflow::measure::*;
use acflow::phasefield::PhaseField;

#[test]
fn differential_monotonicity_along_circle_run() {
    let scene = Scene::torus_circle(2.0, (1.0, 1.0), 0.5, 0.1, 0.1);
    let run = run_canonical(&scene).expect("run");
    let mus = measures(&run);
    let fit = fit_monotonicity(&run, &mus);
    assert!(fit.feasible, "{fit:?}");

    let ds = run.sample_times[1] - run.sample_times[0];
    let xis: Vec<_> =
        run.snapshots.iter().map(|s| discrepancy_measure(s, &run.well)).collect();
    let mut checked = 0usize;
    let mut worst_rel = f64::INFINITY;
    let mut g_max = 0.0f64;
    for &(node, s) in &run.anchors {
        let kernel = MonotonicityKernel::new(&run.grid, node, s, run.r0);
        for k in 0..run.sample_times.len() - 1 {
            let t = run.sample_times[k];
            if s - t < 10.0 * ds || run.sample_times[k + 1] >= s {
                continue;
            }
            let g_t = monotonicity_g(&mus[k], &kernel, t).unwrap();
            let g_next = monotonicity_g(&mus[k + 1], &kernel, run.sample_times[k + 1]).unwrap();
            g_max = g_max.max(g_t);
            // Kernel-weighted discrepancy at time t.
            let mut xi_phi = 0.0;
            for (nd, w) in xis[k].weights.iter().enumerate() {
                if *w != 0.0 {
                    xi_phi += w * kernel.phi(nd, t).unwrap();
                }
            }
            let rc = monotonicity_rate_check(g_t, g_next, xi_phi, s, t, ds, fit.c3, fit.c4)
                .expect("guarded");
            let rel = rc.slack / rc.rhs.abs().max(1e-9);
            worst_rel = worst_rel.min(rel);
            checked += 1;
            assert!(
                rc.slack >= -1e-3 * rc.rhs.abs(),
                "anchor {node}, t = {t}: slack {} vs rhs {}",
                rc.slack,
                rc.rhs
            );
        }
    }
    assert!(checked >= 30, "only {checked} samples checked");
    // The kernel mass stays below the run-wide cap along canonical runs.
    let cbar = run.ledger.get("cbar_cap").unwrap();
    assert!(g_max <= cbar, "G max {g_max} vs cap {cbar}");
    println!("rate check: {checked} samples, worst relative slack {worst_rel:.4}, G max {g_max:.3}");
}

#[test]
fn dissipation_check_rejects_mismatched_grids() {
    use acflow::manifold::{ChartGrid, MetricSpec, ScalarField};
    use acflow::phasefield::{dissipation_identity_check, DoubleWell};
    let g1 = ChartGrid::build(&MetricSpec::FlatTorus { side: 1.0, resolution: 16 }).unwrap();
    let g2 = ChartGrid::build(&MetricSpec::FlatTorus { side: 1.0, resolution: 16 }).unwrap();
    let a = PhaseField::new(ScalarField::constant(&g1, 1.0), 0.1, 0.0, g1.clone());
    let b = PhaseField::new(ScalarField::constant(&g2, 1.0), 0.1, 0.005, g2.clone());
    let phi = ScalarField::constant(&g1, 1.0);
    assert!(dissipation_identity_check(&a, &b, &phi, 0.005, &DoubleWell::quartic()).is_err());
}
