//! The scalar phase field: double-well potential, well-prepared initial data,
//! the semi-implicit time stepper and its exact dissipation identity.

mod checkpoint;
mod init;
mod stepper;
mod well;

pub use checkpoint::{read_checkpoint, write_checkpoint, CheckpointError};
pub use init::{well_prepared_init, InitReport, InitialInterface};
pub use stepper::{dissipation_identity_check, gradient_sup, DissipationCheck, Stepper};
pub use well::{check_h0, surface_tension, DoubleWell, H0Clause, H0Report, StandingProfile};

use crate::manifold::{ChartGrid, ScalarField};
use std::sync::Arc;

/// The scalar field `u` at one time, with its interface width and grid handle.
#[derive(Debug, Clone)]
pub struct PhaseField {
    pub u: ScalarField,
    pub eps: f64,
    pub t: f64,
    pub grid: Arc<ChartGrid>,
}

impl PhaseField {
    pub fn new(u: ScalarField, eps: f64, t: f64, grid: Arc<ChartGrid>) -> Self {
        assert_eq!(u.len(), grid.node_count());
        PhaseField { u, eps, t, grid }
    }

    pub fn sup_abs(&self) -> f64 {
        self.u.max_abs()
    }
}
