//! Well-prepared initial data: the standing profile composed with the signed
//! geodesic distance to the initial interface.

use super::well::{DoubleWell, StandingProfile};
use super::PhaseField;
use crate::error::InitError;
use crate::manifold::{geodesic_distance, gradient_norm_sq, ChartGrid, ChartKind, ScalarField};
use std::sync::Arc;

/// The initial hypersurface `Sigma_0`, boundary of the open set where the
/// field starts positive.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialInterface {
    /// Geodesic circle on a torus chart; the enclosed disk is the positive set.
    Circle { center: (f64, f64), radius: f64 },
    /// Geodesic cap around the north pole; the cap is the positive set.
    Cap { theta0: f64 },
}

/// Constants observed on the constructed data, logged for the run ledger.
#[derive(Debug, Clone)]
pub struct InitReport {
    /// sup |u0|
    pub k0_observed: f64,
    /// eps * sup |grad u0|
    pub c_check: f64,
    /// Total energy-measure mass of the initial state.
    pub mass: f64,
}

/// Build `u0 = q(d~ / eps)` where `d~` is the signed geodesic distance to the
/// interface (positive inside) and `q` the standing profile of the well.
pub fn well_prepared_init(
    grid: &Arc<ChartGrid>,
    iface: &InitialInterface,
    eps: f64,
    well: &DoubleWell,
) -> Result<(PhaseField, InitReport), InitError> {
    let h = match grid.kind {
        ChartKind::Sphere => grid.hy,
        _ => grid.hx,
    };
    if eps < 4.0 * h - 1e-12 {
        return Err(InitError::Resolution { eps, h });
    }
    let signed = signed_distance(grid, iface, eps)?;
    let profile = StandingProfile::build(well);
    let values: Vec<f64> = signed.values.iter().map(|&d| profile.eval(d / eps)).collect();
    let u = ScalarField { values };
    let field = PhaseField::new(u, eps, 0.0, grid.clone());

    let k0_observed = field.sup_abs();
    let gsq = gradient_norm_sq(&field.u, grid);
    let grad_sup = gsq.values.iter().fold(0.0f64, |a, &v| a.max(v)).sqrt();
    let mut mass = 0.0;
    for idx in 0..grid.node_count() {
        let dens = 0.5 * eps * gsq.values[idx] + well.big_f(field.u.values[idx]) / eps;
        mass += dens * grid.weight(idx);
    }
    let report = InitReport { k0_observed, c_check: eps * grad_sup, mass };
    Ok((field, report))
}

fn signed_distance(
    grid: &Arc<ChartGrid>,
    iface: &InitialInterface,
    eps: f64,
) -> Result<ScalarField, InitError> {
    match iface {
        InitialInterface::Circle { center, radius } => {
            if grid.kind == ChartKind::Sphere {
                return Err(InitError::Geometry {
                    detail: "circle interface requires a torus chart".into(),
                });
            }
            let dist = match grid.kind {
                ChartKind::FlatTorus => {
                    let (cx, cy) = *center;
                    let mut values = vec![0.0; grid.node_count()];
                    for idx in 0..grid.node_count() {
                        let (x, y) = grid.chart_position(idx);
                        let dx = grid.wrap_delta(x - cx);
                        let dy = grid.wrap_delta(y - cy);
                        values[idx] = (dx * dx + dy * dy).sqrt();
                    }
                    ScalarField { values }
                }
                _ => {
                    // Conformal chart: distance from the node nearest the center.
                    let i = (center.0 / grid.hx).round() as isize;
                    let j = (center.1 / grid.hy).round() as isize;
                    geodesic_distance(grid, grid.wrap(j, i))
                }
            };
            Ok(ScalarField {
                values: dist.values.iter().map(|d| radius - d).collect(),
            })
        }
        InitialInterface::Cap { theta0 } => {
            if grid.kind != ChartKind::Sphere {
                return Err(InitError::Geometry {
                    detail: "cap interface requires the sphere chart".into(),
                });
            }
            let margin = 4.0 * eps;
            if *theta0 < margin || std::f64::consts::PI - theta0 < margin {
                return Err(InitError::Geometry {
                    detail: format!(
                        "cap boundary theta0 = {theta0} within 4 eps = {margin} of a pole"
                    ),
                });
            }
            let mut values = vec![0.0; grid.node_count()];
            for idx in 0..grid.node_count() {
                let (theta, _) = grid.chart_position(idx);
                values[idx] = theta0 - theta;
            }
            Ok(ScalarField { values })
        }
    }
}
