use super::bmt::BmtWeightFunction;
use crate::error::{Error, Result};
use crate::numeric::japanese;
use crate::sequences::WeightSequence;
use std::sync::Arc;

/// Continuous weight `w >= 1` on `R^n`, evaluated in log space.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightFunction {
    One,
    /// `exp(a |x|^b)`.
    PowerExp { a: f64, b: f64 },
    /// `exp(ω(|x|)/λ)`.
    FromOmega { omega: Arc<BmtWeightFunction>, lambda: f64 },
    /// `⟨x⟩^k base(x)`.
    PolyShift { k: f64, base: Box<WeightFunction> },
    /// `exp ω_M(x/λ)`.
    AssocDilate { seq: Arc<WeightSequence>, lambda: f64 },
    Product(Vec<WeightFunction>),
}

/// `ln w(x)` and whether it is exact (false when an associated function was
/// cut at its horizon, in which case the value is a lower bound).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnWeight {
    pub ln: f64,
    pub saturated: bool,
}

impl WeightFunction {
    pub fn power_exp(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0) {
            return Err(Error::InvalidFunction(format!("power_exp needs a, b >= 0, got a={a}, b={b}")));
        }
        Ok(WeightFunction::PowerExp { a, b })
    }

    pub fn ln_eval(&self, x: &[f64]) -> LnWeight {
        let norm = || x.iter().map(|v| v * v).sum::<f64>().sqrt();
        match self {
            WeightFunction::One => LnWeight { ln: 0.0, saturated: true },
            WeightFunction::PowerExp { a, b } => LnWeight { ln: a * norm().powf(*b), saturated: true },
            WeightFunction::FromOmega { omega, lambda } => LnWeight { ln: omega.omega(norm()) / lambda, saturated: true },
            WeightFunction::PolyShift { k, base } => {
                let inner = base.ln_eval(x);
                LnWeight { ln: k * japanese(x).ln() + inner.ln, saturated: inner.saturated }
            }
            WeightFunction::AssocDilate { seq, lambda } => {
                let y: Vec<f64> = x.iter().map(|v| v / lambda).collect();
                match seq.omega(&y) {
                    Ok((v, sat)) => LnWeight { ln: v, saturated: sat },
                    Err(_) => LnWeight { ln: 0.0, saturated: false },
                }
            }
            WeightFunction::Product(parts) => parts.iter().fold(LnWeight { ln: 0.0, saturated: true }, |acc, p| {
                let v = p.ln_eval(x);
                LnWeight { ln: acc.ln + v.ln, saturated: acc.saturated && v.saturated }
            }),
        }
    }

    /// `w(x)`, refusing values that are only horizon lower bounds.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let v = self.ln_eval(x);
        if !v.saturated {
            return Err(Error::Unsaturated { lower_bound: v.ln.exp() });
        }
        Ok(v.ln.exp())
    }

    pub fn describe(&self) -> String {
        match self {
            WeightFunction::One => "1".into(),
            WeightFunction::PowerExp { a, b } => format!("exp({a}|x|^{b})"),
            WeightFunction::FromOmega { omega, lambda } => format!("exp({}/{lambda})", omega.spec_string()),
            WeightFunction::PolyShift { k, base } => format!("<x>^{k}*{}", base.describe()),
            WeightFunction::AssocDilate { seq, lambda } => format!("exp omega[{}](x/{lambda})", seq.spec_string()),
            WeightFunction::Product(parts) => {
                parts.iter().map(|p| p.describe()).collect::<Vec<_>>().join("*")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(WeightFunction::power_exp(1.0, 1.0).unwrap().eval(&[0.0]).unwrap(), 1.0);
        let p = WeightFunction::PolyShift { k: 2.0, base: Box::new(WeightFunction::One) };
        assert!((p.eval(&[1.0]).unwrap() - 2.0).abs() < 1e-12);
        let g = Arc::new(WeightSequence::gevrey(1, 1.0, 1.0).unwrap());
        let a = WeightFunction::AssocDilate { seq: g, lambda: 1.0 };
        assert_eq!(a.eval(&[0.7]).unwrap(), 1.0);
        assert_eq!(a.eval(&[-1.0]).unwrap(), 1.0);
    }

    #[test]
    fn unsaturated_values_are_flagged() {
        let logs: Vec<f64> = (0..=10).map(|q| crate::numeric::ln_factorial(q as f64)).collect();
        let t = Arc::new(WeightSequence::table_from_logs(1, logs).unwrap());
        let a = WeightFunction::AssocDilate { seq: t, lambda: 1.0 };
        assert!(matches!(a.eval(&[100.0]), Err(Error::Unsaturated { .. })));
        assert!(a.eval(&[0.5]).is_ok());
    }
}
