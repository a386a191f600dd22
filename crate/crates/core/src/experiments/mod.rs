//! Run orchestration: analytic curve-shortening oracles, interface
//! extraction, the canonical run harness, the eps-sweep and the support
//! probes.

mod harness;
mod interface;
mod probes;
mod sweep;

pub use harness::{
    brakke_series, bump_test_function, dissipation_worst_rel, fit_monotonicity, g_series,
    measures, plateau_test_function, run_canonical, RunOutput, Scene,
};
pub use interface::{extract_interface, interface_crossings, InterfaceEstimate};
pub use probes::{
    probe_lattice, scan_params, support_identity_probe, SupportProbeParams, SupportReport,
};
pub use sweep::{assemble_sweep, run_eps_sweep, summarize_run, SweepReport, SweepRow};

/// Closed-form mean-curvature-flow solutions used as oracles.
///
/// A circle of radius `R` in the flat plane shrinks by `dR/dt = -1/R`,
/// giving `R(t) = sqrt(R0^2 - 2t)` and extinction at `R0^2 / 2`.
/// A geodesic cap boundary at polar angle `theta` on the unit sphere has
/// geodesic curvature `cot(theta)`, so `d theta/dt = -cot(theta)`, i.e.
/// `cos(theta(t)) = cos(theta0) e^t`, extinct at `-ln cos(theta0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactFlow {
    TorusCircle { r0: f64 },
    SphereCap { theta0: f64 },
}

impl ExactFlow {
    pub fn extinction_time(&self) -> f64 {
        match self {
            ExactFlow::TorusCircle { r0 } => 0.5 * r0 * r0,
            ExactFlow::SphereCap { theta0 } => -theta0.cos().ln(),
        }
    }

    /// Radius of the interface at time `t`: circle radius on the torus, the
    /// polar angle of the cap boundary on the sphere. `None` past extinction.
    pub fn radius(&self, t: f64) -> Option<f64> {
        match self {
            ExactFlow::TorusCircle { r0 } => {
                let q = r0 * r0 - 2.0 * t;
                if q > 0.0 {
                    Some(q.sqrt())
                } else {
                    None
                }
            }
            ExactFlow::SphereCap { theta0 } => {
                let c = theta0.cos() * t.exp();
                if c < 1.0 {
                    Some(c.acos())
                } else {
                    None
                }
            }
        }
    }
}
