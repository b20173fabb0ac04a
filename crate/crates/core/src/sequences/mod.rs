//! Multi-indexed weight sequences, stored in log space.

mod convexity;
mod relations;

pub use convexity::{check_log_convex, log_convex_minorant, round_trip_ln};
pub use relations::{per_order_log_ratio, relation_preceq, relation_subseteq};

use crate::error::{Error, Result};
use crate::functions::{BmtWeightFunction, ConjugateTable};
use crate::multi_index::MultiIndex;
use crate::numeric::ln_factorial;
use std::sync::Arc;

/// Default number of trailing orders inspected by saturation tests.
pub const DEFAULT_WINDOW: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum SeqKind {
    /// `M_α = h^{|α|} (|α|!)^s`.
    Gevrey { s: f64, h: f64 },
    /// Isotropic table of `ln M_q`.
    Table { logs: Vec<f64> },
    /// `M_α = Π M^{(i)}_{α_i}` with one-dimensional factors.
    Tensor { factors: Vec<WeightSequence> },
    /// `M_α = exp(φ*(λ|α|)/λ)`, tabulated up to the horizon.
    FromBmt { omega: Arc<BmtWeightFunction>, lambda: f64, logs: Vec<f64> },
    /// `λ^{|α|} M_α`.
    Dilated { base: Box<WeightSequence>, lambda: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    dim: usize,
    q_max: usize,
    kind: SeqKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssociatedFunctionValue {
    pub value: f64,
    pub attained_at: MultiIndex,
    /// False when the supremum may lie beyond the horizon; `value` is then a
    /// lower bound.
    pub saturated: bool,
}

impl WeightSequence {
    pub fn gevrey(dim: usize, s: f64, h: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite() && h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidSequence(format!("gevrey needs s > 0 and h > 0, got s={s}, h={h}")));
        }
        check_dim(dim)?;
        Ok(WeightSequence { dim, q_max: 64, kind: SeqKind::Gevrey { s, h } })
    }

    /// Isotropic sequence from plain values `M_0, M_1, ...`.
    pub fn table(dim: usize, values: &[f64]) -> Result<Self> {
        if values.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidSequence("table entries must be positive and finite".into()));
        }
        Self::table_from_logs(dim, values.iter().map(|v| v.ln()).collect())
    }

    pub fn table_from_logs(dim: usize, logs: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if logs.is_empty() {
            return Err(Error::InvalidSequence("empty table".into()));
        }
        if logs[0].abs() > 1e-12 {
            return Err(Error::InvalidSequence(format!("M_0 must be 1, got {}", logs[0].exp())));
        }
        if logs.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSequence("table entries must be positive and finite".into()));
        }
        let q_max = logs.len() - 1;
        Ok(WeightSequence { dim, q_max, kind: SeqKind::Table { logs } })
    }

    pub fn tensor(factors: Vec<WeightSequence>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSequence("tensor needs at least one factor".into()));
        }
        if let Some(f) = factors.iter().find(|f| f.dim != 1) {
            return Err(Error::DimensionMismatch { expected: 1, found: f.dim });
        }
        let q_max = factors.iter().map(|f| f.q_max).min().unwrap_or(0);
        Ok(WeightSequence { dim: factors.len(), q_max, kind: SeqKind::Tensor { factors } })
    }

    /// `M^λ_ω` from a precomputed conjugate table.
    pub fn from_bmt(
        dim: usize,
        omega: Arc<BmtWeightFunction>,
        lambda: f64,
        conj: &ConjugateTable,
        q_max: usize,
    ) -> Result<Self> {
        check_dim(dim)?;
        if !(lambda > 0.0) {
            return Err(Error::InvalidSequence(format!("lambda must be positive, got {lambda}")));
        }
        let mut logs = Vec::with_capacity(q_max + 1);
        for q in 0..=q_max {
            let y = lambda * q as f64;
            let v = conj.eval(y).ok_or(Error::SlopeRange { needed: y, covered: conj.covered() })?;
            logs.push(if q == 0 { 0.0 } else { v / lambda });
        }
        Ok(WeightSequence { dim, q_max, kind: SeqKind::FromBmt { omega, lambda, logs } })
    }

    pub fn dilated(base: WeightSequence, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidSequence(format!("dilation must be positive, got {lambda}")));
        }
        let (dim, q_max) = (base.dim, base.q_max);
        Ok(WeightSequence { dim, q_max, kind: SeqKind::Dilated { base: Box::new(base), lambda } })
    }

    /// Same sequence with another evaluation horizon. Tabulated data caps it.
    pub fn with_q_max(mut self, q_max: usize) -> Self {
        self.q_max = match self.data_horizon() {
            Some(d) => q_max.min(d),
            None => q_max,
        };
        self
    }

    /// Same sequence viewed in another dimension (isotropic kinds only).
    pub fn with_dim(mut self, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if !self.is_isotropic() {
            return Err(Error::Anisotropic);
        }
        if let SeqKind::Dilated { base, .. } = &mut self.kind {
            let b = (**base).clone().with_dim(dim)?;
            **base = b;
        }
        self.dim = dim;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    pub fn kind(&self) -> &SeqKind {
        &self.kind
    }

    /// Largest order for which values exist at all (`None` when unbounded).
    pub fn data_horizon(&self) -> Option<usize> {
        match &self.kind {
            SeqKind::Gevrey { .. } => None,
            SeqKind::Table { logs } | SeqKind::FromBmt { logs, .. } => Some(logs.len() - 1),
            SeqKind::Tensor { factors } => factors.iter().filter_map(|f| f.data_horizon()).min(),
            SeqKind::Dilated { base, .. } => base.data_horizon(),
        }
    }

    pub fn is_isotropic(&self) -> bool {
        match &self.kind {
            SeqKind::Gevrey { .. } | SeqKind::Table { .. } | SeqKind::FromBmt { .. } => true,
            SeqKind::Tensor { factors } => factors.len() == 1,
            SeqKind::Dilated { base, .. } => base.is_isotropic(),
        }
    }

    /// True for families that are log-convex by construction.
    pub fn log_convex_by_construction(&self) -> bool {
        match &self.kind {
            SeqKind::Gevrey { .. } | SeqKind::FromBmt { .. } => true,
            SeqKind::Table { .. } => false,
            SeqKind::Tensor { factors } => factors.iter().all(|f| f.log_convex_by_construction()),
            SeqKind::Dilated { base, .. } => base.log_convex_by_construction(),
        }
    }

    /// `(s, h)` when the sequence is `h^q q!^s` up to dilation.
    pub fn gevrey_params(&self) -> Option<(f64, f64)> {
        match &self.kind {
            SeqKind::Gevrey { s, h } => Some((*s, *h)),
            SeqKind::Dilated { base, lambda } => base.gevrey_params().map(|(s, h)| (s, h * lambda)),
            SeqKind::Tensor { factors } if factors.len() == 1 => factors[0].gevrey_params(),
            _ => None,
        }
    }

    /// `ln M_q` for an isotropic sequence, ignoring the evaluation horizon
    /// but not the data horizon.
    pub fn ln_order(&self, q: usize) -> Option<f64> {
        match &self.kind {
            SeqKind::Gevrey { s, h } => Some(q as f64 * h.ln() + s * ln_factorial(q as f64)),
            SeqKind::Table { logs } | SeqKind::FromBmt { logs, .. } => logs.get(q).copied(),
            SeqKind::Dilated { base, lambda } => base.ln_order(q).map(|v| v + q as f64 * lambda.ln()),
            SeqKind::Tensor { factors } if factors.len() == 1 => factors[0].ln_order(q),
            SeqKind::Tensor { .. } => None,
        }
    }

    /// `ln M_α`, ignoring the evaluation horizon.
    pub fn ln_raw(&self, alpha: &[usize]) -> Option<f64> {
        match &self.kind {
            SeqKind::Tensor { factors } => {
                let mut total = 0.0;
                for (f, &a) in factors.iter().zip(alpha) {
                    total += f.ln_order(a)?;
                }
                Some(total)
            }
            SeqKind::Dilated { base, lambda } if !base.is_isotropic() => {
                let q: usize = alpha.iter().sum();
                base.ln_raw(alpha).map(|v| v + q as f64 * lambda.ln())
            }
            _ => self.ln_order(alpha.iter().sum()),
        }
    }

    pub fn ln_value(&self, alpha: &MultiIndex) -> Result<f64> {
        if alpha.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: alpha.dim() });
        }
        let q = alpha.order();
        if q > self.q_max {
            return Err(Error::HorizonExceeded { order: q, horizon: self.q_max });
        }
        self.ln_raw(alpha.components()).ok_or(Error::HorizonExceeded { order: q, horizon: self.q_max })
    }

    pub fn evaluate(&self, alpha: &MultiIndex) -> Result<f64> {
        self.ln_value(alpha).map(f64::exp)
    }

    /// Per-order maxima of `ln(|x^α| / M_α)` for `|α| <= q_max`, with the
    /// maximizing multi-index of each order. Stops early when the sequence is
    /// log-convex by construction and the maxima have decreased over
    /// `window` consecutive orders.
    pub fn per_order_terms(&self, x: &[f64], q_max: usize, window: usize) -> Result<Vec<(f64, MultiIndex)>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        let q_max = match self.data_horizon() {
            Some(d) => q_max.min(d),
            None => q_max,
        };
        if self.is_isotropic() {
            let (i_star, t) = x
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.abs()))
                .fold((0, 0.0), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
            let lt = t.ln();
            let early = self.log_convex_by_construction();
            let mut out = Vec::with_capacity(q_max.min(1 << 16) + 1);
            for q in 0..=q_max {
                let lm = self.ln_order(q).expect("order within data horizon");
                let v = if q == 0 { -lm } else { q as f64 * lt - lm };
                out.push((v, MultiIndex::axis(self.dim, i_star, q)));
                if early && strictly_decreasing_tail(&out, window) {
                    break;
                }
                if q > 0 && t == 0.0 {
                    break;
                }
            }
            return Ok(out);
        }
        self.tensor_terms(x, q_max)
    }

    fn tensor_terms(&self, x: &[f64], q_max: usize) -> Result<Vec<(f64, MultiIndex)>> {
        // Max-plus convolution of the coordinate-wise term sequences.
        let coord = |i: usize, a: usize| -> f64 {
            let lm = self.coord_ln(i, a);
            if a == 0 {
                -lm
            } else {
                a as f64 * x[i].abs().ln() - lm
            }
        };
        let mut best: Vec<(f64, Vec<usize>)> = (0..=q_max).map(|a| (coord(0, a), vec![a])).collect();
        for i in 1..self.dim {
            let mut next: Vec<(f64, Vec<usize>)> = vec![(f64::NEG_INFINITY, vec![]); q_max + 1];
            for (q, (v, idx)) in best.iter().enumerate() {
                for a in 0..=(q_max - q) {
                    let c = v + coord(i, a);
                    if c > next[q + a].0 || next[q + a].1.is_empty() {
                        let mut id = idx.clone();
                        id.push(a);
                        next[q + a] = (c, id);
                    }
                }
            }
            best = next;
        }
        Ok(best.into_iter().map(|(v, idx)| (v, MultiIndex(idx))).collect())
    }

    /// `ln M_{a e_i}` contribution of coordinate `i` for tensor-like sequences.
    fn coord_ln(&self, i: usize, a: usize) -> f64 {
        match &self.kind {
            SeqKind::Tensor { factors } => factors[i].ln_order(a).unwrap_or(f64::INFINITY),
            SeqKind::Dilated { base, lambda } => base.coord_ln(i, a) + a as f64 * lambda.ln(),
            _ => self.ln_order(a).unwrap_or(f64::INFINITY),
        }
    }

    /// `ω_M(x) = max_{|α| <= q_max} ln(|x^α|/M_α)` with saturation tracking.
    pub fn associated_function(&self, x: &[f64], q_max: usize) -> Result<AssociatedFunctionValue> {
        self.associated_function_with(x, q_max, DEFAULT_WINDOW)
    }

    pub fn associated_function_with(&self, x: &[f64], q_max: usize, window: usize) -> Result<AssociatedFunctionValue> {
        if x.iter().all(|v| *v == 0.0) {
            if x.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
            }
            return Ok(AssociatedFunctionValue { value: 0.0, attained_at: MultiIndex::zero(self.dim), saturated: true });
        }
        let terms = self.per_order_terms(x, q_max, window)?;
        let (mut value, mut at) = (f64::NEG_INFINITY, MultiIndex::zero(self.dim));
        for (v, a) in &terms {
            if *v > value {
                value = *v;
                at = a.clone();
            }
        }
        let saturated = strictly_decreasing_tail(&terms, window);
        Ok(AssociatedFunctionValue { value: value.max(0.0), attained_at: at, saturated })
    }

    /// Exact `ω_M(x)` over all orders when a closed form is available.
    pub fn omega_exact(&self, x: &[f64]) -> Option<f64> {
        if let Some((s, h)) = self.gevrey_params() {
            let t = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            return Some(gevrey_omega(s, h, t));
        }
        match &self.kind {
            SeqKind::Tensor { factors } => {
                let mut total = 0.0;
                for (f, xi) in factors.iter().zip(x) {
                    total += f.omega_exact(&[*xi])?;
                }
                Some(total)
            }
            SeqKind::Dilated { base, lambda } => {
                let y: Vec<f64> = x.iter().map(|v| v / lambda).collect();
                base.omega_exact(&y)
            }
            _ => None,
        }
    }

    /// `ω_M(x)`: exact when a closed form exists, otherwise the horizon value
    /// with its saturation flag.
    pub fn omega(&self, x: &[f64]) -> Result<(f64, bool)> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        if let Some(v) = self.omega_exact(x) {
            return Ok((v, true));
        }
        let a = self.associated_function(x, self.q_max)?;
        Ok((a.value, a.saturated))
    }

    /// Canonical textual form in the sequence grammar.
    pub fn spec_string(&self) -> String {
        match &self.kind {
            SeqKind::Gevrey { s, h } => format!("gevrey(s={s},h={h})"),
            SeqKind::Table { logs } => {
                let vals: Vec<String> = logs.iter().map(|l| format!("{}", l.exp())).collect();
                format!("table:[{}]", vals.join(","))
            }
            SeqKind::Tensor { factors } => {
                let parts: Vec<String> = factors.iter().map(|f| f.spec_string()).collect();
                format!("tensor({})", parts.join(","))
            }
            SeqKind::FromBmt { omega, lambda, .. } => format!("bmt({},lambda={lambda})", omega.spec_string()),
            SeqKind::Dilated { base, lambda } => format!("dilate({},lambda={lambda})", base.spec_string()),
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::InvalidSequence("dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn strictly_decreasing_tail<T>(terms: &[(f64, T)], window: usize) -> bool {
    let n = terms.len();
    if window == 0 || n < window + 1 {
        return false;
    }
    terms[n - window - 1..].windows(2).all(|w| w[1].0 < w[0].0)
}

/// Closed-form `sup_q (q ln t - q ln h - s ln q!)`.
pub fn gevrey_omega(s: f64, h: f64, t: f64) -> f64 {
    let u = t / h;
    if !(u > 1.0) {
        return 0.0;
    }
    let lu = u.ln();
    let q_star = (lu / s).exp().floor();
    let term = |q: f64| if q <= 0.0 { 0.0 } else { q * lu - s * ln_factorial(q) };
    let mut best = term(q_star);
    for q in [q_star - 1.0, q_star + 1.0] {
        best = best.max(term(q));
    }
    best.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gevrey_values() {
        let m = WeightSequence::gevrey(1, 1.0, 1.0).unwrap();
        assert!((m.evaluate(&MultiIndex::new(vec![3])).unwrap() - 6.0).abs() < 1e-12);
        assert_eq!(m.evaluate(&MultiIndex::zero(1)).unwrap(), 1.0);
        let err = m.evaluate(&MultiIndex::new(vec![65])).unwrap_err();
        assert_eq!(err, Error::HorizonExceeded { order: 65, horizon: 64 });
        let err = m.evaluate(&MultiIndex::new(vec![1, 1])).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 1, found: 2 });
    }

    #[test]
    fn associated_function_vanishes_on_unit_ball() {
        let m = WeightSequence::gevrey(1, 1.0, 1.0).unwrap();
        for t in [0.0, 0.3, 1.0, -1.0] {
            let a = m.associated_function(&[t], 64).unwrap();
            assert_eq!(a.value, 0.0);
            assert_eq!(a.attained_at.order(), 0);
            assert!(a.saturated);
        }
    }

    #[test]
    fn table_beyond_horizon_is_unsaturated() {
        let logs: Vec<f64> = (0..=64).map(|q| 2.0 * ln_factorial(q as f64)).collect();
        let m = WeightSequence::table_from_logs(1, logs).unwrap();
        let a = m.associated_function(&[1e4], 64).unwrap();
        assert!(!a.saturated);
        assert_eq!(a.attained_at.order(), 64);
    }

    #[test]
    fn closed_form_matches_horizon_sup() {
        let m = WeightSequence::gevrey(1, 0.5, 2.0).unwrap();
        for t in [1.5, 3.0, 7.0] {
            let a = m.associated_function(&[t], 400).unwrap();
            assert!(a.saturated);
            assert!((a.value - m.omega_exact(&[t]).unwrap()).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn tensor_omega_is_sum_of_factors() {
        let a = WeightSequence::gevrey(1, 1.0, 1.0).unwrap();
        let b = WeightSequence::gevrey(1, 2.0, 1.0).unwrap();
        let m = WeightSequence::tensor(vec![a.clone(), b.clone()]).unwrap();
        let x = [3.0, 5.0];
        let v = m.associated_function(&x, 64).unwrap();
        let direct = a.omega_exact(&[3.0]).unwrap() + b.omega_exact(&[5.0]).unwrap();
        assert!((v.value - direct).abs() < 1e-9);
        assert!((m.omega_exact(&x).unwrap() - direct).abs() < 1e-12);
    }
}
