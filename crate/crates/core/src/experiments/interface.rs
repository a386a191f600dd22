//! Zero-crossing extraction and radius statistics of the diffuse interface.

use crate::manifold::ChartKind;
use crate::phasefield::PhaseField;

#[derive(Debug, Clone, PartialEq)]
pub enum InterfaceEstimate {
    /// No sign change anywhere.
    Empty,
    /// Torus charts: fitted circle center (circular mean of the crossings)
    /// and the mean wrap-distance to it.
    Torus { center: (f64, f64), radius: f64, points: usize },
    /// Sphere: mean polar angle of the meridian crossings.
    Sphere { theta: f64, points: usize },
}

/// Linear-interpolation zero crossings along grid lines, in chart
/// coordinates.
pub fn interface_crossings(s: &PhaseField) -> Vec<(f64, f64)> {
    let g = &s.grid;
    let u = &s.u.values;
    let mut pts = Vec::new();
    match g.kind {
        ChartKind::Sphere => {
            // Crossings along meridians (theta direction).
            for i in 0..g.nx {
                for j in 0..g.ny - 1 {
                    let a = u[g.idx(j, i)];
                    let b = u[g.idx(j + 1, i)];
                    if a == 0.0 {
                        pts.push((g.theta_row(j), i as f64 * g.hx));
                    } else if a * b < 0.0 {
                        let frac = a / (a - b);
                        pts.push((g.theta_row(j) + frac * g.hy, i as f64 * g.hx));
                    }
                }
            }
        }
        _ => {
            for j in 0..g.ny {
                for i in 0..g.nx {
                    let a = u[g.idx(j, i)];
                    let b = u[g.idx(j, (i + 1) % g.nx)];
                    let (x, y) = ((i as f64) * g.hx, (j as f64) * g.hy);
                    if a == 0.0 {
                        pts.push((x, y));
                    } else if a * b < 0.0 {
                        let frac = a / (a - b);
                        pts.push((x + frac * g.hx, y));
                    }
                    let c = u[g.idx((j + 1) % g.ny, i)];
                    if a != 0.0 && a * c < 0.0 {
                        let frac = a / (a - c);
                        pts.push((x, y + frac * g.hy));
                    }
                }
            }
        }
    }
    pts
}

/// Fit the interface location. Torus circles get a wrap-aware centroid via
/// circular means; sphere caps report the mean polar angle.
pub fn extract_interface(s: &PhaseField) -> InterfaceEstimate {
    let pts = interface_crossings(s);
    if pts.is_empty() {
        return InterfaceEstimate::Empty;
    }
    let g = &s.grid;
    match g.kind {
        ChartKind::Sphere => {
            let mean = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
            InterfaceEstimate::Sphere { theta: mean, points: pts.len() }
        }
        _ => {
            let center = (
                circular_mean(pts.iter().map(|p| p.0), g.side),
                circular_mean(pts.iter().map(|p| p.1), g.side),
            );
            let mut radius = 0.0;
            for &(x, y) in &pts {
                let dx = g.wrap_delta(x - center.0);
                let dy = g.wrap_delta(y - center.1);
                radius += (dx * dx + dy * dy).sqrt();
            }
            radius /= pts.len() as f64;
            InterfaceEstimate::Torus { center, radius, points: pts.len() }
        }
    }
}

fn circular_mean(values: impl Iterator<Item = f64>, period: f64) -> f64 {
    let scale = 2.0 * std::f64::consts::PI / period;
    let (mut s, mut c, mut n) = (0.0, 0.0, 0usize);
    for v in values {
        s += (v * scale).sin();
        c += (v * scale).cos();
        n += 1;
    }
    if n == 0 {
        return 0.0;
    }
    let ang = s.atan2(c) / scale;
    if ang < 0.0 {
        ang + period
    } else {
        ang
    }
}
