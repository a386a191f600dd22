//! Numerical laboratory for diffuse-interface mean curvature flow on 2-D
//! Riemannian manifolds.
//!
//! The crate evolves a scalar phase field by the reaction-diffusion law
//! `du/dt = lap(u) - f(u)/eps^2` on discretized charts (flat torus, conformal
//! torus, round sphere) and measures the geometric structures that emerge as
//! the interface width `eps` shrinks: energy and discrepancy measures, a
//! localized almost-monotonicity functional, clearing-out behaviour, discrete
//! varifolds with their first variation, and the Brakke inequality residual.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod manifold;
pub mod measure;
pub mod phasefield;
pub mod varifold;

pub use error::{ConfigError, GridError, InitError, SeriesError, StepError};
