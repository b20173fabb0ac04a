//! Parameterized families of weight sequences and weight functions.

mod conditions;
mod lemmas;
mod relations;

pub use conditions::{
    check_i, check_i_detailed, check_l, check_m, check_m_detailed, check_wi, check_wm, Certificate, Checked,
};
pub use lemmas::{moderate_growth_transfer, sequence_to_function_transfer, GrowthTransferReport, TransferReport};
pub use relations::{system_relation_functions, system_relation_sequences};
pub(crate) use conditions::{Probe, ShellSeries};
pub(crate) use relations::quantify_pair;

use crate::config::Horizons;
use crate::error::{Error, Result};
use crate::functions::{sequence_from_bmt, BmtWeightFunction, WeightFunction};
use crate::multi_index::MultiIndex;
use crate::sequences::{check_log_convex, WeightSequence};
use std::fmt;
use std::sync::Arc;

/// Beurling (projective) or Roumieu (inductive) quantifier order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Beurling,
    Roumieu,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Beurling => "beurling",
            Kind::Roumieu => "roumieu",
        }
    }

    pub fn parse(s: &str) -> Result<Kind> {
        match s.to_ascii_lowercase().as_str() {
            "beurling" | "b" | "()" => Ok(Kind::Beurling),
            "roumieu" | "r" | "{}" => Ok(Kind::Roumieu),
            other => Err(Error::InvalidInput(format!("unknown kind `{other}` (expected beurling or roumieu)"))),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeqSystemSpec {
    /// `λ^{|α|} M_α`.
    Dilated(WeightSequence),
    /// `exp(φ*(λ|α|)/λ)`.
    FromBmt(Arc<BmtWeightFunction>),
    Explicit(Vec<(f64, WeightSequence)>),
}

/// Weight sequence system sampled on a finite parameter grid. Members are
/// materialized once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequenceSystem {
    spec: SeqSystemSpec,
    dim: usize,
    grid: Vec<f64>,
    members: Vec<Arc<WeightSequence>>,
}

impl WeightSequenceSystem {
    pub fn dilated(base: WeightSequence, hz: &Horizons) -> Result<Self> {
        let dim = base.dim();
        Self::build(SeqSystemSpec::Dilated(base), dim, hz.lambda_grid.clone(), hz)
    }

    pub fn from_bmt(dim: usize, omega: Arc<BmtWeightFunction>, hz: &Horizons) -> Result<Self> {
        Self::build(SeqSystemSpec::FromBmt(omega), dim, hz.lambda_grid.clone(), hz)
    }

    pub fn explicit(mut members: Vec<(f64, WeightSequence)>, hz: &Horizons) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidSystem("explicit system needs at least one member".into()));
        }
        members.sort_by(|a, b| a.0.total_cmp(&b.0));
        let dim = members[0].1.dim();
        if members.iter().any(|(_, m)| m.dim() != dim) {
            return Err(Error::InvalidSystem("explicit members differ in dimension".into()));
        }
        let grid = members.iter().map(|(l, _)| *l).collect();
        Self::build(SeqSystemSpec::Explicit(members), dim, grid, hz)
    }

    fn build(spec: SeqSystemSpec, dim: usize, grid: Vec<f64>, hz: &Horizons) -> Result<Self> {
        if grid.is_empty() || grid.iter().any(|l| !(*l > 0.0)) {
            return Err(Error::InvalidSystem("parameter grid must be non-empty and positive".into()));
        }
        let members = grid
            .iter()
            .map(|&l| member_of(&spec, dim, l, hz.q_max).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        let sys = WeightSequenceSystem { spec, dim, grid, members };
        sys.check_monotone(hz)?;
        Ok(sys)
    }

    fn check_monotone(&self, hz: &Horizons) -> Result<()> {
        if !matches!(self.spec, SeqSystemSpec::Explicit(_)) {
            return Ok(());
        }
        let q_max = if self.members.iter().all(|m| m.is_isotropic()) { hz.q_max } else { hz.pair_q_max };
        for k in 1..self.members.len() {
            let (lo, hi) = (&self.members[k - 1], &self.members[k]);
            let q_top = [lo.data_horizon(), hi.data_horizon()].iter().flatten().fold(q_max, |a, b| a.min(*b));
            for a in MultiIndex::up_to(self.dim, q_top) {
                let (x, y) = (lo.ln_value(&a)?, hi.ln_value(&a)?);
                if x > y + 1e-12 * (1.0 + y.abs()) {
                    return Err(Error::InvalidSystem(format!(
                        "members not increasing in the parameter: at alpha={a}, {} > {}",
                        x.exp(),
                        y.exp()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &SeqSystemSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn members(&self) -> &[Arc<WeightSequence>] {
        &self.members
    }

    /// Member at an arbitrary parameter; explicit systems only know their grid.
    pub fn member(&self, lambda: f64, q_max: usize) -> Result<WeightSequence> {
        if let Some(k) = self.grid.iter().position(|l| *l == lambda) {
            return Ok((*self.members[k]).clone());
        }
        member_of(&self.spec, self.dim, lambda, q_max)
    }

    /// Every member log-convex, by construction or by the finite-horizon check.
    pub fn is_log_convex(&self, hz: &Horizons) -> bool {
        match &self.spec {
            SeqSystemSpec::Dilated(m) => {
                m.log_convex_by_construction()
                    || check_log_convex(m, hz.q_max.min(m.data_horizon().unwrap_or(hz.q_max)), hz.window, hz.tol)
                        .map(|v| v.is_witnessed())
                        .unwrap_or(false)
            }
            SeqSystemSpec::FromBmt(_) => true,
            SeqSystemSpec::Explicit(_) => self.members.iter().all(|m| {
                m.log_convex_by_construction()
                    || check_log_convex(m, hz.q_max.min(m.data_horizon().unwrap_or(hz.q_max)), hz.window, hz.tol)
                        .map(|v| v.is_witnessed())
                        .unwrap_or(false)
            }),
        }
    }

    pub fn spec_string(&self) -> String {
        match &self.spec {
            SeqSystemSpec::Dilated(m) => format!("dilated({})", m.spec_string()),
            SeqSystemSpec::FromBmt(w) => format!("frombmt({})", w.spec_string()),
            SeqSystemSpec::Explicit(ms) => {
                let parts: Vec<String> = ms.iter().map(|(l, m)| format!("({l},{})", m.spec_string())).collect();
                format!("explicit:[{}]", parts.join(","))
            }
        }
    }
}

fn member_of(spec: &SeqSystemSpec, dim: usize, lambda: f64, q_max: usize) -> Result<WeightSequence> {
    match spec {
        SeqSystemSpec::Dilated(m) => WeightSequence::dilated(m.clone(), lambda),
        SeqSystemSpec::FromBmt(w) => sequence_from_bmt(dim, w, lambda, q_max),
        SeqSystemSpec::Explicit(ms) => ms
            .iter()
            .find(|(l, _)| *l == lambda)
            .map(|(_, m)| m.clone())
            .ok_or_else(|| Error::InvalidSystem(format!("explicit system has no member at parameter {lambda}"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunSystemSpec {
    /// `exp ω_A(·/λ)`.
    Dilated(Arc<WeightSequence>),
    /// `exp(ω(|·|)/λ)`.
    FromOmega(Arc<BmtWeightFunction>),
    /// `exp ω_{M^λ}`.
    FromSequenceSystem(Box<WeightSequenceSystem>),
    /// `⟨·⟩^k w^λ`.
    PolyShiftAll(f64, Box<WeightFunctionSystem>),
    Explicit(Vec<(f64, WeightFunction)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunctionSystem {
    spec: FunSystemSpec,
    dim: usize,
    grid: Vec<f64>,
    members: Vec<WeightFunction>,
}

impl WeightFunctionSystem {
    pub fn dilated(base: WeightSequence, hz: &Horizons) -> Result<Self> {
        let dim = base.dim();
        Self::build(FunSystemSpec::Dilated(Arc::new(base)), dim, hz.lambda_grid.clone(), hz)
    }

    pub fn from_omega(dim: usize, omega: Arc<BmtWeightFunction>, hz: &Horizons) -> Result<Self> {
        Self::build(FunSystemSpec::FromOmega(omega), dim, hz.lambda_grid.clone(), hz)
    }

    /// The system `W_M` associated with a sequence system.
    pub fn from_sequence_system(m: WeightSequenceSystem, hz: &Horizons) -> Result<Self> {
        let (dim, grid) = (m.dim(), m.grid().to_vec());
        Self::build(FunSystemSpec::FromSequenceSystem(Box::new(m)), dim, grid, hz)
    }

    pub fn poly_shift_all(k: f64, base: WeightFunctionSystem, hz: &Horizons) -> Result<Self> {
        let (dim, grid) = (base.dim(), base.grid().to_vec());
        Self::build(FunSystemSpec::PolyShiftAll(k, Box::new(base)), dim, grid, hz)
    }

    pub fn explicit(dim: usize, mut members: Vec<(f64, WeightFunction)>, hz: &Horizons) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidSystem("explicit system needs at least one member".into()));
        }
        members.sort_by(|a, b| a.0.total_cmp(&b.0));
        let grid = members.iter().map(|(l, _)| *l).collect();
        Self::build(FunSystemSpec::Explicit(members), dim, grid, hz)
    }

    fn build(spec: FunSystemSpec, dim: usize, grid: Vec<f64>, hz: &Horizons) -> Result<Self> {
        if grid.is_empty() || grid.iter().any(|l| !(*l > 0.0)) {
            return Err(Error::InvalidSystem("parameter grid must be non-empty and positive".into()));
        }
        let members = grid.iter().enumerate().map(|(k, &l)| fun_member_of(&spec, k, l)).collect::<Result<Vec<_>>>()?;
        let sys = WeightFunctionSystem { spec, dim, grid, members };
        sys.check_anti_monotone(hz)?;
        Ok(sys)
    }

    fn check_anti_monotone(&self, hz: &Horizons) -> Result<()> {
        if !matches!(self.spec, FunSystemSpec::Explicit(_)) {
            return Ok(());
        }
        let points = sample_points(self.dim, &hz.shells);
        for k in 1..self.members.len() {
            for x in &points {
                let (small, large) = (self.members[k - 1].ln_eval(x), self.members[k].ln_eval(x));
                if large.ln > small.ln + 1e-12 * (1.0 + small.ln.abs()) && small.saturated {
                    return Err(Error::InvalidSystem(format!(
                        "members not decreasing in the parameter at x={x:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &FunSystemSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn members(&self) -> &[WeightFunction] {
        &self.members
    }

    /// Member at an arbitrary parameter where the family is defined in closed
    /// form; grid members otherwise.
    pub fn member(&self, lambda: f64) -> Result<WeightFunction> {
        if let Some(k) = self.grid.iter().position(|l| *l == lambda) {
            return Ok(self.members[k].clone());
        }
        match &self.spec {
            FunSystemSpec::Dilated(a) => Ok(WeightFunction::AssocDilate { seq: a.clone(), lambda }),
            FunSystemSpec::FromOmega(w) => Ok(WeightFunction::FromOmega { omega: w.clone(), lambda }),
            FunSystemSpec::PolyShiftAll(k, base) => {
                Ok(WeightFunction::PolyShift { k: *k, base: Box::new(base.member(lambda)?) })
            }
            FunSystemSpec::FromSequenceSystem(m) => {
                let seq = m.member(lambda, m.members()[0].q_max())?;
                Ok(WeightFunction::AssocDilate { seq: Arc::new(seq), lambda: 1.0 })
            }
            FunSystemSpec::Explicit(_) => {
                Err(Error::InvalidSystem(format!("explicit system has no member at parameter {lambda}")))
            }
        }
    }

    pub fn spec_string(&self) -> String {
        match &self.spec {
            FunSystemSpec::Dilated(a) => format!("dilated({})", a.spec_string()),
            FunSystemSpec::FromOmega(w) => format!("fromomega({})", w.spec_string()),
            FunSystemSpec::FromSequenceSystem(m) => format!("assoc({})", m.spec_string()),
            FunSystemSpec::PolyShiftAll(k, b) => format!("polyshift(k={k},{})", b.spec_string()),
            FunSystemSpec::Explicit(ms) => {
                let parts: Vec<String> = ms.iter().map(|(l, w)| format!("({l},{})", w.describe())).collect();
                format!("explicit:[{}]", parts.join(","))
            }
        }
    }
}

fn fun_member_of(spec: &FunSystemSpec, k: usize, lambda: f64) -> Result<WeightFunction> {
    Ok(match spec {
        FunSystemSpec::Dilated(a) => WeightFunction::AssocDilate { seq: a.clone(), lambda },
        FunSystemSpec::FromOmega(w) => WeightFunction::FromOmega { omega: w.clone(), lambda },
        FunSystemSpec::FromSequenceSystem(m) => WeightFunction::AssocDilate { seq: m.members()[k].clone(), lambda: 1.0 },
        FunSystemSpec::PolyShiftAll(s, base) => {
            WeightFunction::PolyShift { k: *s, base: Box::new(base.members()[k].clone()) }
        }
        FunSystemSpec::Explicit(ms) => ms[k].1.clone(),
    })
}

/// `W_M` for a sequence system.
pub fn derived_function_system(m: &WeightSequenceSystem, hz: &Horizons) -> Result<WeightFunctionSystem> {
    WeightFunctionSystem::from_sequence_system(m.clone(), hz)
}

/// Sample points: `±r` in one dimension, and `r` times the eight unit
/// directions at multiples of 45 degrees in two or more (spread over the
/// first two coordinates).
pub fn sample_points(dim: usize, shells: &[f64]) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for &r in shells {
        if r == 0.0 {
            out.push(vec![0.0; dim]);
            continue;
        }
        if dim == 1 {
            out.push(vec![r]);
            out.push(vec![-r]);
            continue;
        }
        for k in 0..8 {
            let a = k as f64 * std::f64::consts::FRAC_PI_4;
            let mut x = vec![0.0; dim];
            x[0] = r * a.cos();
            x[1] = r * a.sin();
            out.push(x);
        }
    }
    out
}

/// Mesh of the closed unit ball: radii `{0, 1/4, .., 1}` along the sample
/// directions.
pub fn unit_ball_mesh(dim: usize) -> Vec<Vec<f64>> {
    sample_points(dim, &[0.0, 0.25, 0.5, 0.75, 1.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ln_factorial;

    #[test]
    fn explicit_monotonicity_is_enforced() {
        let hz = Horizons::default();
        let g = |h: f64| WeightSequence::gevrey(1, 1.0, h).unwrap();
        assert!(WeightSequenceSystem::explicit(vec![(1.0, g(1.0)), (2.0, g(2.0))], &hz).is_ok());
        let err = WeightSequenceSystem::explicit(vec![(1.0, g(2.0)), (2.0, g(1.0))], &hz).unwrap_err();
        assert!(matches!(err, Error::InvalidSystem(_)));
    }

    #[test]
    fn derived_system_matches_dilated_family() {
        let hz = Horizons::default();
        let a = WeightSequence::table_from_logs(1, (0..=64).map(|q| ln_factorial(q as f64)).collect()).unwrap();
        let m = WeightSequenceSystem::dilated(a.clone(), &hz).unwrap();
        let w = derived_function_system(&m, &hz).unwrap();
        let direct = WeightFunctionSystem::dilated(a, &hz).unwrap();
        for (k, _) in hz.lambda_grid.iter().enumerate() {
            for x in [0.0, 0.3, 2.0, 7.5] {
                let (u, v) = (w.members()[k].ln_eval(&[x]), direct.members()[k].ln_eval(&[x]));
                if u.saturated && v.saturated {
                    assert!((u.ln - v.ln).abs() < 1e-9 * (1.0 + u.ln.abs()));
                }
            }
        }
        // ω = 0 on |x| <= 1 for a factorial generator at λ = 1
        let one = hz.lambda_grid.iter().position(|l| *l == 1.0).unwrap();
        assert_eq!(direct.members()[one].ln_eval(&[0.9]).ln, 0.0);
    }

    #[test]
    fn function_members_decrease_in_parameter() {
        let hz = Horizons::default();
        let w = WeightFunctionSystem::from_omega(1, Arc::new(BmtWeightFunction::power_minus_one(0.5).unwrap()), &hz)
            .unwrap();
        for x in [0.0, 1.0, 10.0, 1000.0] {
            let vals: Vec<f64> = w.members().iter().map(|m| m.ln_eval(&[x]).ln).collect();
            assert!(vals.windows(2).all(|p| p[1] <= p[0]));
        }
    }
}
