//! The decay-upgrade construction `g = (f ∗ ψ) χ̂` with `g(0) = 1`.

use super::windows::{Window, WindowKind};
use crate::error::{Error, Result};
use crate::numeric::integrate_gl;
use crate::spaces::{GridFunction, GridSpec, Profile, TestFunction};
use num_complex::Complex64;

/// Shipped unit-mass cutoff: the cubic B-spline `1_{[-1/2,1/2]}^{∗4}` on
/// `[-2, 2]`. Its transform `∫ χ(x) e^{-2πixξ} dx` is `sinc(ξ)^4`.
pub fn bspline_transform() -> Profile {
    Profile::Sinc.times(Profile::Sinc).times(Profile::Sinc.times(Profile::Sinc))
}

/// Cubic B-spline as a piecewise polynomial (used to cross-check the transform).
pub fn bspline() -> Profile {
    use crate::spaces::PolyPiece;
    let p = |a: f64, b: f64, coeffs: Vec<f64>| PolyPiece { a, b, coeffs };
    Profile::Piecewise {
        pieces: vec![
            // (2 + x)^3 / 6
            p(-2.0, -1.0, vec![8.0 / 6.0, 2.0, 1.0, 1.0 / 6.0]),
            // (4 - 6x^2 - 3x^3) / 6
            p(-1.0, 0.0, vec![4.0 / 6.0, 0.0, -1.0, -0.5]),
            p(0.0, 1.0, vec![4.0 / 6.0, 0.0, -1.0, 0.5]),
            p(1.0, 2.0, vec![8.0 / 6.0, -2.0, 1.0, -1.0 / 6.0]),
        ],
    }
}

#[derive(Debug, Clone)]
pub struct DecayUpgrade {
    /// `g` in closed form.
    pub profile: Profile,
    pub function: GridFunction,
    /// `(f ∗ ψ)(0)` before normalization.
    pub normalizer: Complex64,
    pub g0: Complex64,
    /// `sup |g| ⟨x⟩^2`, the window certificate of `g`.
    pub decay: f64,
}

/// `f ∗ ψ` in closed form, with `supp ψ ⊆ [a, b]`.
fn convolve(f: &Profile, psi: &Profile, support: (f64, f64)) -> Profile {
    let (a, b) = support;
    let mut breaks = vec![a, b];
    if a < 0.0 && 0.0 < b {
        breaks.insert(1, 0.0);
    }
    Profile::Convolve { f: Box::new(f.clone()), kernel: Box::new(psi.clone()), breaks }
}

/// Builds `g = (f ∗ ψ') χ̂` with `ψ' = ψ / (f ∗ ψ)(0)` so that `g(0) = 1`.
pub fn decay_upgrade(f: &Profile, psi: &Profile, support: (f64, f64), grid: &GridSpec, tol: f64) -> Result<DecayUpgrade> {
    let normalizer = convolve(f, psi, support).value(0.0)?;
    if !(normalizer.norm() > 1e-300) || !normalizer.norm().is_finite() {
        return Err(Error::NormalizationImpossible(format!("(f * psi)(0) = {normalizer}")));
    }
    let scaled = psi.clone().scaled(1.0 / normalizer);
    let profile = convolve(f, &scaled, support).times(bspline_transform());
    let g0 = profile.value(0.0)?;
    if (g0 - 1.0).norm() > tol {
        return Err(Error::NormalizationImpossible(format!("g(0) = {g0} after normalization")));
    }
    let window = Window::new(profile.clone(), WindowKind::Generic, grid)?;
    let function = GridFunction::sample(*grid, &TestFunction::one_d(profile.clone()))?;
    Ok(DecayUpgrade { profile, function, normalizer, g0, decay: window.decay() })
}

/// Independent check of `(f ∗ ψ)(0) = ∫ f(-t) ψ(t) dt` by dense quadrature.
pub fn normalizer_oracle(f: &Profile, psi: &Profile, support: (f64, f64)) -> Complex64 {
    integrate_gl(|t| f.value(-t).unwrap_or_default() * psi.value(t).unwrap_or_default(), support.0, support.1, 256, 16)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::default_for(1).unwrap()
    }

    #[test]
    fn bspline_transform_matches_quadrature() {
        let chi = bspline();
        let mass = integrate_gl(|x| chi.value(x).unwrap(), -2.0, 2.0, 8, 16);
        assert!((mass.re - 1.0).abs() < 1e-14);
        let hat = bspline_transform();
        for xi in [0.0, 0.3, 1.0, 1.7, 4.25] {
            let direct = integrate_gl(
                |x| chi.value(x).unwrap() * Complex64::new(0.0, -2.0 * std::f64::consts::PI * x * xi).exp(),
                -2.0,
                2.0,
                64,
                16,
            );
            assert!((direct - hat.value(xi).unwrap()).norm() < 1e-13, "xi={xi}");
        }
    }

    #[test]
    fn gaussian_upgrade_is_normalized() {
        let f = Profile::gaussian(1.0).unwrap();
        let psi = Profile::bump(8, 1.0).unwrap();
        let up = decay_upgrade(&f, &psi, (-1.0, 1.0), &grid(), 1e-8).unwrap();
        assert!((up.g0 - 1.0).norm() < 1e-8);
        assert!((up.normalizer - normalizer_oracle(&f, &psi, (-1.0, 1.0))).norm() < 1e-12);
        assert!(up.decay.is_finite() && up.decay >= 1.0 - 1e-8);
        // sinc^4 decay beats <x>^2 far out
        let far = up.profile.value(20.5).unwrap().norm() * (1.0 + 20.5 * 20.5);
        assert!(far < 1e-3, "{far} {}", up.decay);
    }

    #[test]
    fn zero_cannot_be_normalized() {
        let r = decay_upgrade(&Profile::Zero, &Profile::bump(8, 1.0).unwrap(), (-1.0, 1.0), &grid(), 1e-8);
        assert!(matches!(r, Err(Error::NormalizationImpossible(_))));
    }
}
