//! Named run constants with provenance tags, serialized as a key-value text
//! file. Existential constants from the theory are either analytic (computed
//! in closed form), fitted from runs, or recorded as caps.

use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    PaperExistential,
    FittedFromRuns,
    Analytic,
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::PaperExistential => "paper-existential",
            Provenance::FittedFromRuns => "fitted-from-runs",
            Provenance::Analytic => "analytic",
        }
    }

    fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "paper-existential" => Some(Provenance::PaperExistential),
            "fitted-from-runs" => Some(Provenance::FittedFromRuns),
            "analytic" => Some(Provenance::Analytic),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LedgerEntry {
    pub value: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Default)]
pub struct ConstantsLedger {
    entries: BTreeMap<String, LedgerEntry>,
}

impl ConstantsLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Standard constants for a run: surface tension, injectivity radius,
    /// the clearing-out thresholds `kappa2 = sigma sqrt(pi)/2`,
    /// `kappa1 = (r0/8)^2`, the gradient constant (1.3 times the analytic
    /// profile slope), fit caps, and the cutoff derivative sups actually
    /// attained for this `r0`.
    pub fn defaults(sigma: f64, r0: f64, alpha: f64) -> Self {
        let mut l = ConstantsLedger::new();
        use Provenance::*;
        l.set("omega1", 2.0, Analytic);
        l.set("sigma", sigma, Analytic);
        l.set("r0", r0, Analytic);
        l.set("alpha", alpha, Analytic);
        l.set("k0", 1.0, Analytic);
        l.set("kappa2", sigma * std::f64::consts::PI.sqrt() / 2.0, FittedFromRuns);
        l.set("kappa1", (r0 / 8.0) * (r0 / 8.0), FittedFromRuns);
        l.set("ktilde", 1.3 / std::f64::consts::SQRT_2, FittedFromRuns);
        let zeta = super::CutoffProfile::new(r0);
        let (d1, d2) = zeta.derivative_bounds();
        l.set("zeta_d1_bound", d1, Analytic);
        l.set("zeta_d2_bound", d2, Analytic);
        l.set("c3_cap", 32.0, PaperExistential);
        l.set("c4_cap", 32.0, PaperExistential);
        l.set("c5_cap", 32.0, PaperExistential);
        l.set("cbar_cap", 16.0 * sigma, FittedFromRuns);
        l.set("d0_cap", 3.0 * sigma, FittedFromRuns);
        l.set("rtilde", 0.5 * r0, FittedFromRuns);
        l
    }

    pub fn set(&mut self, key: &str, value: f64, provenance: Provenance) {
        self.entries.insert(key.to_string(), LedgerEntry { value, provenance });
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.entries.get(key).map(|e| e.value)
    }

    pub fn get_or(&self, key: &str, default: f64) -> f64 {
        self.get(key).unwrap_or(default)
    }

    pub fn entry(&self, key: &str) -> Option<&LedgerEntry> {
        self.entries.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &LedgerEntry)> {
        self.entries.iter()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# constants ledger v1: <key> = <value>  # <provenance>\n");
        for (k, e) in &self.entries {
            out.push_str(&format!("{} = {:e}  # {}\n", k, e.value, e.provenance.tag()));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        let mut l = ConstantsLedger::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (kv, tag) = line
                .split_once('#')
                .ok_or_else(|| format!("line {}: missing provenance tag", lineno + 1))?;
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| format!("line {}: missing '='", lineno + 1))?;
            let value: f64 = v
                .trim()
                .parse()
                .map_err(|e| format!("line {}: bad value: {e}", lineno + 1))?;
            let provenance = Provenance::from_tag(tag.trim())
                .ok_or_else(|| format!("line {}: unknown tag '{}'", lineno + 1, tag.trim()))?;
            l.set(k.trim(), value, provenance);
        }
        Ok(l)
    }
}
