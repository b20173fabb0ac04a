//! One-dimensional parametrix of order `l = 1`: `Δ(χF₁) = δ + φ₁` with
//! `F₁ = |x|/2`, so `f = f″ ∗ (χF₁) - f ∗ φ₁`.

use crate::error::{Error, Result};
use crate::numeric::boole;
use crate::spaces::Profile;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Parametrix1D {
    order: usize,
    /// `1` on `|x| <= 1/2`, supported in `[-1, 1]`.
    cutoff: Profile,
    fundamental: Profile,
}

impl Parametrix1D {
    pub fn new(order: usize) -> Result<Self> {
        if order != 1 {
            return Err(Error::InvalidInput(format!("only order 1 is implemented, got {order}")));
        }
        Ok(Parametrix1D { order, cutoff: Profile::cutoff(0.5, 1.0)?, fundamental: Profile::half_abs() })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cutoff(&self) -> &Profile {
        &self.cutoff
    }

    /// `χ(t) F₁(t)`.
    pub fn kernel(&self, t: f64) -> Result<f64> {
        Ok(self.cutoff.value(t)?.re * self.fundamental.value(t)?.re)
    }

    /// `φ₁(t) = χ″(t) F₁(t) + 2 χ′(t) F₁′(t)`, zero on `|t| < 1/2`.
    pub fn remainder(&self, t: f64) -> Result<f64> {
        let chi = self.cutoff.derivs(2, t)?;
        let (d1, d2) = (chi[1].value().re, chi[2].value().re);
        Ok(d2 * t.abs() / 2.0 + d1 * t.signum())
    }

    /// `(F₁(h) - 2F₁(0) + F₁(-h)) / h^2`, the discrete `δ/h` mass.
    pub fn second_difference_at_origin(&self, h: f64) -> Result<f64> {
        let f = |x: f64| self.fundamental.value(x).map(|v| v.re);
        Ok((f(h)? - 2.0 * f(0.0)? + f(-h)?) / (h * h))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametrixReport {
    pub h: f64,
    pub points: usize,
    pub max_error: f64,
}

const PIECES: [(f64, f64); 4] = [(-1.0, -0.5), (-0.5, 0.0), (0.0, 0.5), (0.5, 1.0)];

/// Evaluates `f″ ∗ (χF₁) - f ∗ φ₁` with composite Boole quadrature of step
/// `h` on the kernel pieces and compares with `f` at each point.
pub fn parametrix_reproduce(p: &Parametrix1D, f: &Profile, h: f64, points: &[f64]) -> Result<ParametrixReport> {
    if !f.has_derivatives() {
        return Err(Error::MissingDerivatives);
    }
    if !(h > 0.0 && h <= 0.5) {
        return Err(Error::InvalidInput(format!("step {h} must lie in (0, 1/2]")));
    }
    let mut err = None;
    let mut guard = |r: Result<Complex64>| match r {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            Complex64::new(0.0, 0.0)
        }
    };
    let mut max_error: f64 = 0.0;
    for &x in points {
        let mut total = Complex64::new(0.0, 0.0);
        for (i, &(a, b)) in PIECES.iter().enumerate() {
            total += boole(
                |t| guard(f.derivs(2, x - t).and_then(|d| Ok(d[2].value() * p.kernel(t)?))),
                a,
                b,
                h,
            );
            if i == 0 || i == 3 {
                total -= boole(|t| guard(f.value(x - t).and_then(|v| Ok(v * p.remainder(t)?))), a, b, h);
            }
        }
        max_error = max_error.max((total - guard(f.value(x))).norm());
    }
    if let Some(e) = err {
        return Err(e);
    }
    Ok(ParametrixReport { h, points: points.len(), max_error })
}

/// `x ∈ [-2, 2)` with step `1/16`.
pub fn default_points() -> Vec<f64> {
    (0..64).map(|k| -2.0 + k as f64 / 16.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_is_reproduced_at_boole_order() {
        let p = Parametrix1D::new(1).unwrap();
        let f = Profile::bump(8, 1.0).unwrap();
        let pts = default_points();
        let coarse = parametrix_reproduce(&p, &f, 1.0 / 64.0, &pts).unwrap();
        let fine = parametrix_reproduce(&p, &f, 1.0 / 128.0, &pts).unwrap();
        assert!(coarse.max_error <= 1e-6, "{}", coarse.max_error);
        assert!(coarse.max_error / fine.max_error >= 3.0);
    }

    #[test]
    fn translated_bump_is_reproduced() {
        let p = Parametrix1D::new(1).unwrap();
        let f = Profile::bump(8, 0.5).unwrap().shifted(1.25);
        let r = parametrix_reproduce(&p, &f, 1.0 / 128.0, &default_points()).unwrap();
        assert!(r.max_error <= 1e-6, "{}", r.max_error);
    }

    #[test]
    fn kink_has_unit_mass() {
        let p = Parametrix1D::new(1).unwrap();
        for h in [0.5, 1.0 / 64.0] {
            assert_eq!(p.second_difference_at_origin(h).unwrap(), 1.0 / h);
        }
        assert_eq!(p.remainder(0.25).unwrap(), 0.0);
        assert!(p.remainder(0.999_999).unwrap().abs() < 1e-3);
        assert!(Parametrix1D::new(2).is_err());
    }
}
