//! Double-well potentials, the structural hypothesis checker and the
//! surface-tension constant `sigma = int_{-1}^{1} sqrt(2 F)`.

use crate::error::InitError;
use std::sync::Arc;

type WellFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A double-well potential `F` with derivative `f = F'`, the threshold
/// `alpha` above which `F` is convex, and the sup bound `k0` for `|u|`.
#[derive(Clone)]
pub struct DoubleWell {
    pub alpha: f64,
    pub k0: f64,
    kind: WellKind,
}

#[derive(Clone)]
enum WellKind {
    Quartic,
    Custom { big_f: WellFn, f: WellFn, fp: WellFn },
}

impl std::fmt::Debug for DoubleWell {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.kind {
            WellKind::Quartic => "quartic",
            WellKind::Custom { .. } => "custom",
        };
        write!(fm, "DoubleWell({kind}, alpha={}, k0={})", self.alpha, self.k0)
    }
}

impl DoubleWell {
    /// The default quartic well `F(s) = (1 - s^2)^2 / 4`, convex beyond
    /// `alpha = 0.6` since `F'' = 3 s^2 - 1`.
    pub fn quartic() -> Self {
        DoubleWell { alpha: 0.6, k0: 1.0, kind: WellKind::Quartic }
    }

    pub fn quartic_with_alpha(alpha: f64) -> Self {
        DoubleWell { alpha, k0: 1.0, kind: WellKind::Quartic }
    }

    pub fn custom(
        big_f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        fp: impl Fn(f64) -> f64 + Send + Sync + 'static,
        alpha: f64,
        k0: f64,
    ) -> Self {
        DoubleWell {
            alpha,
            k0,
            kind: WellKind::Custom { big_f: Arc::new(big_f), f: Arc::new(f), fp: Arc::new(fp) },
        }
    }

    #[inline]
    pub fn big_f(&self, s: f64) -> f64 {
        match &self.kind {
            WellKind::Quartic => {
                let q = 1.0 - s * s;
                0.25 * q * q
            }
            WellKind::Custom { big_f, .. } => big_f(s),
        }
    }

    #[inline]
    pub fn f(&self, s: f64) -> f64 {
        match &self.kind {
            WellKind::Quartic => s * s * s - s,
            WellKind::Custom { f, .. } => f(s),
        }
    }

    #[inline]
    pub fn fprime(&self, s: f64) -> f64 {
        match &self.kind {
            WellKind::Quartic => 3.0 * s * s - 1.0,
            WellKind::Custom { fp, .. } => fp(s),
        }
    }

    pub fn is_quartic(&self) -> bool {
        matches!(self.kind, WellKind::Quartic)
    }
}

#[derive(Debug, Clone)]
pub struct H0Clause {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct H0Report {
    pub clauses: Vec<H0Clause>,
}

impl H0Report {
    pub fn all_pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }

    pub fn clause(&self, name: &str) -> Option<&H0Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }
}

const H0_SAMPLES: usize = 10_000;

/// Evaluate the structural hypotheses on the well over a fine sample grid of
/// `[-2, 2]` and report pass/fail per clause. Report-only; nothing is
/// enforced here.
pub fn check_h0(w: &DoubleWell) -> H0Report {
    let mut clauses = Vec::new();
    let tol = 1e-9;

    let zeros_ok = w.f(0.0).abs() < tol && w.f(1.0).abs() < tol && w.f(-1.0).abs() < tol;
    clauses.push(H0Clause {
        name: "f-zeros",
        pass: zeros_ok,
        detail: format!("f(0)={:e}, f(1)={:e}, f(-1)={:e}", w.f(0.0), w.f(1.0), w.f(-1.0)),
    });

    let mut sign_ok = true;
    let mut sign_detail = String::from("f<0 on (0,1), f>0 on (1,2]");
    for k in 1..H0_SAMPLES {
        let s = k as f64 / H0_SAMPLES as f64;
        if s > 1e-4 && s < 1.0 - 1e-4 && w.f(s) >= 0.0 {
            sign_ok = false;
            sign_detail = format!("f({s}) = {} >= 0 inside (0,1)", w.f(s));
            break;
        }
        let s1 = 1.0 + s;
        if s > 1e-4 && w.f(s1) <= 0.0 {
            sign_ok = false;
            sign_detail = format!("f({s1}) = {} <= 0 above 1", w.f(s1));
            break;
        }
    }
    let slopes_ok = w.fprime(0.0) < 0.0 && w.fprime(1.0) > 0.0 && w.fprime(-1.0) > 0.0;
    clauses.push(H0Clause {
        name: "f-signs",
        pass: sign_ok && slopes_ok,
        detail: if slopes_ok {
            sign_detail
        } else {
            format!("slopes f'(0)={}, f'(+-1)={},{}", w.fprime(0.0), w.fprime(1.0), w.fprime(-1.0))
        },
    });

    let mut pos_ok = w.big_f(1.0).abs() < tol && w.big_f(-1.0).abs() < tol;
    let mut pos_detail = format!("F(+-1) = {:e}, {:e}", w.big_f(1.0), w.big_f(-1.0));
    if pos_ok {
        for k in 0..=H0_SAMPLES {
            let s = -2.0 + 4.0 * k as f64 / H0_SAMPLES as f64;
            if (s - 1.0).abs() < 1e-3 || (s + 1.0).abs() < 1e-3 {
                continue;
            }
            if w.big_f(s) <= 0.0 {
                pos_ok = false;
                pos_detail = format!("F({s}) = {} <= 0", w.big_f(s));
                break;
            }
        }
    }
    clauses.push(H0Clause { name: "F-positive", pass: pos_ok, detail: pos_detail });

    let mut even_ok = true;
    let mut even_detail = String::from("F(s) = F(-s) on samples");
    for k in 0..=H0_SAMPLES {
        let s = 2.0 * k as f64 / H0_SAMPLES as f64;
        let d = (w.big_f(s) - w.big_f(-s)).abs();
        if d > tol * (1.0 + w.big_f(s).abs()) {
            even_ok = false;
            even_detail = format!("F({s}) - F(-{s}) = {d:e}");
            break;
        }
    }
    clauses.push(H0Clause { name: "F-even", pass: even_ok, detail: even_detail });

    let mut conv_min = f64::INFINITY;
    let mut conv_arg = w.alpha;
    for k in 0..=H0_SAMPLES {
        let s = w.alpha + (2.0 - w.alpha) * k as f64 / H0_SAMPLES as f64;
        let c = w.fprime(s);
        if c < conv_min {
            conv_min = c;
            conv_arg = s;
        }
    }
    clauses.push(H0Clause {
        name: "F-convex-tail",
        pass: conv_min > 0.0,
        detail: format!("min F'' on [alpha, 2] = {conv_min} at s = {conv_arg}"),
    });

    H0Report { clauses }
}

/// Surface tension `sigma = int_{-1}^{1} sqrt(2 F(s)) ds` by adaptive
/// Simpson quadrature with relative error 1e-8. This is the mass-per-length
/// constant of the well-prepared interface profile.
pub fn surface_tension(w: &DoubleWell) -> Result<f64, InitError> {
    let integrand = |s: f64| (2.0 * w.big_f(s)).max(0.0).sqrt();
    let coarse = simpson(&integrand, -1.0, 1.0);
    let scale = coarse.abs().max(1e-12);
    adaptive(&integrand, -1.0, 1.0, coarse, 1e-8 * scale, 48)
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
}

fn adaptive(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64, InitError> {
    let m = 0.5 * (a + b);
    let left = simpson(f, a, m);
    let right = simpson(f, m, b);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol {
        return Ok(left + right + err / 15.0);
    }
    if depth == 0 {
        return Err(InitError::Quadrature { err: err.abs() });
    }
    Ok(adaptive(f, a, m, left, tol / 2.0, depth - 1)?
        + adaptive(f, m, b, right, tol / 2.0, depth - 1)?)
}

/// The standing-wave profile `q` solving `q' = sqrt(2 F(q))`, `q(0) = 0`.
/// Closed form `tanh(z / sqrt(2))` for the quartic well; otherwise a cached
/// Runge-Kutta table, odd-extended and clamped at the wells.
pub struct StandingProfile {
    table: Option<(f64, Vec<f64>)>, // (dz, q on z >= 0)
}

impl StandingProfile {
    pub fn build(w: &DoubleWell) -> Self {
        if w.is_quartic() {
            return StandingProfile { table: None };
        }
        let dz = 1e-3;
        let z_max = 40.0;
        let n = (z_max / dz) as usize;
        let mut q = Vec::with_capacity(n + 1);
        let rhs = |v: f64| (2.0 * w.big_f(v.clamp(-1.0, 1.0))).max(0.0).sqrt();
        let mut v = 0.0;
        q.push(v);
        for _ in 0..n {
            let k1 = rhs(v);
            let k2 = rhs(v + 0.5 * dz * k1);
            let k3 = rhs(v + 0.5 * dz * k2);
            let k4 = rhs(v + dz * k3);
            v += dz / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            v = v.min(1.0);
            q.push(v);
        }
        StandingProfile { table: Some((dz, q)) }
    }

    pub fn eval(&self, z: f64) -> f64 {
        match &self.table {
            None => (z / std::f64::consts::SQRT_2).tanh(),
            Some((dz, q)) => {
                let az = z.abs();
                let idx = az / dz;
                let i = idx.floor() as usize;
                let v = if i + 1 >= q.len() {
                    1.0
                } else {
                    let fr = idx - i as f64;
                    q[i] * (1.0 - fr) + q[i + 1] * fr
                };
                if z < 0.0 {
                    -v
                } else {
                    v
                }
            }
        }
    }
}
