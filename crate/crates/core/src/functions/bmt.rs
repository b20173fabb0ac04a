use super::conjugate::ConjugateTable;
use crate::config::Horizons;
use crate::error::{Error, Result};
use crate::verdict::{classify_tail, Trend, Verdict};

/// Number of samples of `φ` on its uniform grid.
pub const PHI_POINTS: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum BmtKind {
    /// `ω(t) = max(0, t^ρ - 1)`, so `φ(x) = e^{ρx} - 1`.
    PowerMinusOne { rho: f64 },
    /// `ω(t) = max(0, ln t)^a`, so `φ(x) = x^a`.
    LogPower { a: f64 },
    /// `φ` given by samples, linearly interpolated and extrapolated.
    Sampled,
}

/// Weight function `ω` on `[0, ∞)` vanishing on `[0, 1]`, stored through
/// `φ(x) = ω(e^x)` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BmtWeightFunction {
    kind: BmtKind,
    xs: Vec<f64>,
    phis: Vec<f64>,
}

impl BmtWeightFunction {
    pub fn power_minus_one(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidFunction(format!("pow needs rho > 0, got {rho}")));
        }
        let mut w = BmtWeightFunction { kind: BmtKind::PowerMinusOne { rho }, xs: vec![], phis: vec![] };
        w.resample(Horizons::default().slope_target());
        Ok(w)
    }

    pub fn log_power(a: f64) -> Result<Self> {
        if !(a >= 1.0 && a.is_finite()) {
            return Err(Error::InvalidFunction(format!("logpow needs a >= 1, got {a}")));
        }
        let mut w = BmtWeightFunction { kind: BmtKind::LogPower { a }, xs: vec![], phis: vec![] };
        w.resample(Horizons::default().slope_target());
        Ok(w)
    }

    /// `φ` from samples `(x, φ(x))` with `x` increasing from 0.
    pub fn sampled(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidFunction("phi-table needs at least three points".into()));
        }
        if points[0].0 != 0.0 || points[0].1.abs() > 1e-12 {
            return Err(Error::InvalidFunction("phi-table must start at (0, 0)".into()));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidFunction("phi-table abscissae must increase".into()));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::InvalidFunction(format!("phi decreases near x = {}", w[1].0)));
            }
        }
        let (xs, phis) = points.iter().cloned().unzip();
        Ok(BmtWeightFunction { kind: BmtKind::Sampled, xs, phis })
    }

    /// Resamples a canonical family so the last chord slope of `φ` exceeds
    /// `slope`. Sampled inputs are left unchanged.
    pub fn with_slope_coverage(mut self, slope: f64) -> Self {
        if self.slope_covered() < slope {
            self.resample(slope);
        }
        self
    }

    fn resample(&mut self, slope: f64) {
        let target = 1.05 * slope;
        let x_max = match self.kind {
            BmtKind::PowerMinusOne { rho } => ((target / rho).ln() / rho).max(1.0) * 1.01,
            BmtKind::LogPower { a } if a > 1.0 => (target / a).powf(1.0 / (a - 1.0)).max(1.0) * 1.01,
            BmtKind::LogPower { .. } => 64.0,
            BmtKind::Sampled => return,
        };
        let step = x_max / (PHI_POINTS - 1) as f64;
        self.xs = (0..PHI_POINTS).map(|i| i as f64 * step).collect();
        self.phis = self.xs.iter().map(|&x| self.phi(x)).collect();
    }

    pub fn kind(&self) -> &BmtKind {
        &self.kind
    }

    pub fn samples(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.phis)
    }

    pub fn slope_covered(&self) -> f64 {
        let n = self.xs.len();
        if n < 2 {
            return 0.0;
        }
        (self.phis[n - 1] - self.phis[n - 2]) / (self.xs[n - 1] - self.xs[n - 2])
    }

    /// `φ(x) = ω(e^x)` for `x >= 0`.
    pub fn phi(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        match self.kind {
            BmtKind::PowerMinusOne { rho } => (rho * x).exp_m1(),
            BmtKind::LogPower { a } => x.powf(a),
            BmtKind::Sampled => {
                let n = self.xs.len();
                let i = self.xs.partition_point(|&v| v <= x).clamp(1, n - 1);
                let (x0, x1) = (self.xs[i - 1], self.xs[i]);
                let (f0, f1) = (self.phis[i - 1], self.phis[i]);
                f0 + (f1 - f0) * (x - x0) / (x1 - x0)
            }
        }
    }

    pub fn omega(&self, t: f64) -> f64 {
        let t = t.abs();
        if t <= 1.0 {
            return 0.0;
        }
        match self.kind {
            BmtKind::PowerMinusOne { rho } => t.powf(rho) - 1.0,
            BmtKind::LogPower { a } => t.ln().powf(a),
            BmtKind::Sampled => self.phi(t.ln()),
        }
    }

    pub fn spec_string(&self) -> String {
        match self.kind {
            BmtKind::PowerMinusOne { rho } => format!("pow(rho={rho})"),
            BmtKind::LogPower { a } => format!("logpow(a={a})"),
            BmtKind::Sampled => {
                let pts: Vec<String> = self.xs.iter().zip(&self.phis).map(|(x, p)| format!("({x},{p})")).collect();
                format!("phi-table:[{}]", pts.join(","))
            }
        }
    }
}

/// `φ*` on a geometric grid up to `y_max`, resampling canonical families so
/// the slope range covers `y_max`.
pub fn young_conjugate(omega: &BmtWeightFunction, y_max: f64) -> Result<ConjugateTable> {
    let w = omega.clone().with_slope_coverage(y_max);
    let (xs, phis) = w.samples();
    ConjugateTable::new(xs.to_vec(), phis.to_vec(), y_max, 1024)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BmtConditions {
    pub alpha: Verdict,
    pub gamma: Verdict,
    pub delta: Verdict,
}

/// Points of the `t`-grid where `ω(t) >= 1`.
fn active_grid(omega: &BmtWeightFunction, hz: &Horizons) -> Vec<f64> {
    hz.t_grid().into_iter().filter(|&t| omega.omega(t) >= 1.0).collect()
}

pub fn check_alpha(omega: &BmtWeightFunction, hz: &Horizons) -> Result<Verdict> {
    let ts = active_grid(omega, hz);
    if ts.len() < hz.window + 2 {
        return Err(Error::DegenerateHorizon("too few grid points with omega >= 1 for the tail window".into()));
    }
    let ratios: Vec<f64> = ts.iter().map(|&t| omega.omega(2.0 * t) / omega.omega(t)).collect();
    let logs: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
    let bound = ratios.iter().cloned().fold(0.0, f64::max);
    let t_top = *ts.last().unwrap();
    let v = match classify_tail(&logs, hz.window, hz.margin, hz.tol) {
        Trend::Bounded => Verdict::witnessed().with_witness("bound", bound).with_witness("tail", *ratios.last().unwrap()),
        Trend::Diverging => Verdict::falsified()
            .with_counterexample("t", t_top)
            .with_counterexample("ratio", *ratios.last().unwrap())
            .with_note("doubling ratio diverges"),
        Trend::Rising => Verdict::inconclusive().with_note("doubling ratio still rising"),
    };
    // Where ω < 1 the doubling is controlled by ω(2 t_1) with t_1 the first
    // active point; this is the additive constant of the bound.
    let offset = omega.omega(2.0 * ts[0]);
    Ok(v.with_witness_if_witnessed("offset", offset).with_horizon("t_max", t_top))
}

pub fn check_gamma(omega: &BmtWeightFunction, hz: &Horizons) -> Result<Verdict> {
    const THRESHOLD: f64 = 10.0;
    if hz.fast_paths {
        match omega.kind {
            BmtKind::PowerMinusOne { .. } => {
                return Ok(Verdict::witnessed().with_witness("threshold", THRESHOLD).with_note("power growth beats log"))
            }
            BmtKind::LogPower { a } if a > 1.0 => {
                return Ok(Verdict::witnessed().with_witness("threshold", THRESHOLD).with_note("(log t)^a with a > 1"))
            }
            BmtKind::LogPower { .. } => {
                return Ok(Verdict::falsified().with_counterexample("ratio", 1.0).with_note("omega / log t is identically 1"))
            }
            BmtKind::Sampled => {}
        }
    }
    let t_max = hz.t_max;
    let decades = t_max.log10().floor() as i32;
    let samples: Vec<(f64, f64)> = (1..=decades)
        .map(|d| {
            let t = 10f64.powi(d);
            (t, omega.omega(t) / t.ln())
        })
        .collect();
    let k = hz.window.min(samples.len().saturating_sub(1));
    let tail = &samples[samples.len() - k - 1..];
    let monotone = tail.windows(2).all(|w| w[1].1 > w[0].1);
    let last = samples.last().unwrap();
    let v = if monotone && last.1 >= THRESHOLD {
        Verdict::witnessed().with_witness("threshold", THRESHOLD).with_witness("final_ratio", last.1)
    } else {
        Verdict::inconclusive().with_note("omega / log t not shown to diverge").with_counterexample("final_ratio", last.1)
    };
    Ok(v.with_horizon("t_max", last.0))
}

pub fn check_delta(omega: &BmtWeightFunction, tol: f64) -> Verdict {
    let (xs, ps) = omega.samples();
    for i in 1..xs.len() - 1 {
        let (h0, h1) = (xs[i] - xs[i - 1], xs[i + 1] - xs[i]);
        let d2 = ((ps[i + 1] - ps[i]) / h1 - (ps[i] - ps[i - 1]) / h0) / (0.5 * (h0 + h1));
        let roundoff = 1e-12 * ps[i + 1].abs() / (h0 * h1);
        if d2 < -(tol + roundoff) {
            return Verdict::falsified().with_counterexample("x", xs[i]).with_counterexample("second_difference", d2);
        }
    }
    Verdict::witnessed().with_horizon("x_max", *xs.last().unwrap())
}

pub fn check_bmt_conditions(omega: &BmtWeightFunction, hz: &Horizons) -> Result<BmtConditions> {
    Ok(BmtConditions { alpha: check_alpha(omega, hz)?, gamma: check_gamma(omega, hz)?, delta: check_delta(omega, hz.tol) })
}

/// `σ = O(ω)` on `[1, t_max]`.
pub fn compare_weight_functions(omega: &BmtWeightFunction, sigma: &BmtWeightFunction, hz: &Horizons) -> Result<Verdict> {
    if hz.fast_paths {
        use BmtKind::*;
        let fast = match (&omega.kind, &sigma.kind) {
            (PowerMinusOne { rho: r_o }, PowerMinusOne { rho: r_s }) => Some(r_s <= r_o),
            (LogPower { a: a_o }, LogPower { a: a_s }) => Some(a_s <= a_o),
            (PowerMinusOne { .. }, LogPower { .. }) => Some(true),
            (LogPower { .. }, PowerMinusOne { .. }) => Some(false),
            _ => None,
        };
        if let Some(ok) = fast {
            let v = if ok {
                let bound = compare_numeric(omega, sigma, hz).map(|(b, _)| b).unwrap_or(f64::NAN);
                Verdict::witnessed().with_witness("bound", bound)
            } else {
                Verdict::falsified().with_counterexample("t", hz.t_max).with_counterexample(
                    "ratio",
                    sigma.omega(hz.t_max) / omega.omega(hz.t_max).max(f64::MIN_POSITIVE),
                )
            };
            return Ok(v.with_note("exponent comparison").with_horizon("t_max", hz.t_max));
        }
    }
    let (bound, trend) = compare_numeric(omega, sigma, hz)?;
    let v = match trend {
        Trend::Bounded => Verdict::witnessed().with_witness("bound", bound),
        Trend::Diverging => Verdict::falsified()
            .with_counterexample("t", hz.t_max)
            .with_counterexample("ratio", sigma.omega(hz.t_max) / omega.omega(hz.t_max))
            .with_note("ratio diverges over the tail window"),
        Trend::Rising => Verdict::inconclusive().with_note("ratio still rising"),
    };
    Ok(v.with_horizon("t_max", hz.t_max))
}

fn compare_numeric(omega: &BmtWeightFunction, sigma: &BmtWeightFunction, hz: &Horizons) -> Result<(f64, Trend)> {
    let ts = active_grid(omega, hz);
    if ts.len() < hz.window + 2 {
        return Err(Error::DegenerateHorizon("too few grid points with omega >= 1".into()));
    }
    let logs: Vec<f64> = ts.iter().map(|&t| (sigma.omega(t) / omega.omega(t)).ln()).collect();
    let bound = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max).exp();
    Ok((bound, classify_tail(&logs, hz.window, hz.margin, hz.tol)))
}

trait WitnessIf {
    fn with_witness_if_witnessed(self, key: &str, v: f64) -> Self;
}

impl WitnessIf for Verdict {
    fn with_witness_if_witnessed(self, key: &str, v: f64) -> Self {
        if self.is_witnessed() {
            self.with_witness(key, v)
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_half_conditions() {
        let hz = Horizons::default();
        let w = BmtWeightFunction::power_minus_one(0.5).unwrap();
        let c = check_bmt_conditions(&w, &hz).unwrap();
        assert!(c.alpha.is_witnessed() && c.gamma.is_witnessed() && c.delta.is_witnessed());
        let tail = c.alpha.witness_value("tail").unwrap();
        assert!((tail - 2f64.sqrt()).abs() < 1e-3, "tail = {tail}");
    }

    #[test]
    fn gamma_fast_paths() {
        let hz = Horizons::default();
        assert!(check_gamma(&BmtWeightFunction::log_power(2.0).unwrap(), &hz).unwrap().is_witnessed());
        assert!(check_gamma(&BmtWeightFunction::log_power(1.0).unwrap(), &hz).unwrap().is_falsified());
        let numeric = hz.clone().numeric_only();
        assert!(check_gamma(&BmtWeightFunction::log_power(2.0).unwrap(), &numeric).unwrap().is_witnessed());
    }

    #[test]
    fn comparison_examples() {
        let hz = Horizons::default();
        let third = BmtWeightFunction::power_minus_one(1.0 / 3.0).unwrap();
        let half = BmtWeightFunction::power_minus_one(0.5).unwrap();
        assert!(compare_weight_functions(&half, &third, &hz).unwrap().is_witnessed());
        assert!(compare_weight_functions(&third, &half, &hz).unwrap().is_falsified());
        let v = compare_weight_functions(&half, &half, &hz).unwrap();
        assert_eq!(v.witness_value("bound"), Some(1.0));
        let numeric = hz.clone().numeric_only();
        assert!(compare_weight_functions(&half, &third, &numeric).unwrap().is_witnessed());
        assert!(compare_weight_functions(&third, &half, &numeric).unwrap().is_falsified());
    }

    #[test]
    fn sampled_phi_validation() {
        assert!(BmtWeightFunction::sampled(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.5)]).is_err());
        assert!(BmtWeightFunction::sampled(&[(0.0, 1.0), (1.0, 2.0), (2.0, 3.0)]).is_err());
        let w = BmtWeightFunction::sampled(&[(0.0, 0.0), (1.0, 2.0), (2.0, 3.0)]).unwrap();
        assert!(check_delta(&w, 1e-9).is_falsified());
    }
}
