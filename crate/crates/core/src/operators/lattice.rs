//! Operators between grid functions and lattice sequences: sampling by
//! convolution, synthesis, evaluation, periodization and multiplication.

use super::windows::{require_one_d, Window};
use crate::config::Horizons;
use crate::error::{Error, Result};
use crate::functions::WeightFunction;
use crate::numeric::lattice_constant;
use crate::spaces::{membership_verdict, BanachSpaceModel, GridFunction, GridSpec, Profile, SequenceData, TestFunction};
use crate::systems::{Kind, WeightFunctionSystem, WeightSequenceSystem};
use crate::verdict::Verdict;
use num_complex::Complex64;

fn check_radius(grid: &GridSpec, radius: i64) -> Result<()> {
    if radius < 0 || radius >= grid.half_width() {
        return Err(Error::SupportOverflow(format!(
            "lattice radius {radius} must be below the half-width {}",
            grid.half_width()
        )));
    }
    Ok(())
}

/// Default truncation radius `J = T/2`.
pub fn default_radius(grid: &GridSpec) -> i64 {
    grid.half_width() / 2
}

/// `c_j = ∫ f(t) χ(j - t) dt` for `|j| <= radius`, with `supp χ ⊆ [a, b]`.
/// Indicator kernels are integrated exactly against the piecewise-constant
/// model of `f`; other kernels use the sample sum, which is spectrally
/// accurate for smooth compactly supported integrands.
pub fn sample_convolution(f: &GridFunction, chi: &Profile, support: (f64, f64), radius: i64) -> Result<SequenceData> {
    let grid = f.grid();
    require_one_d(grid)?;
    let (a, b) = support;
    let t = grid.half_width() as f64;
    if radius as f64 - b < -t || radius as f64 - a > t || -(radius as f64) - b < -t {
        return Err(Error::SupportOverflow(format!("kernel support [{a}, {b}] shifted by {radius} leaves the grid")));
    }
    let h = grid.h();
    let axis = grid.axis();
    let s = f.samples();
    let mut out = SequenceData::zeros(1, radius);
    for j in -radius..=radius {
        let (lo, hi) = (j as f64 - b, j as f64 - a);
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &x) in axis.iter().enumerate() {
            if x + h <= lo || x > hi || s[i].norm() == 0.0 {
                continue;
            }
            let weight = match chi {
                Profile::Indicator { a: ia, b: ib } => {
                    // χ(j - t) = 1 for t ∈ (j - ib, j - ia]
                    let (l, r) = ((j as f64 - ib).max(x), (j as f64 - ia).min(x + h));
                    Complex64::new((r - l).max(0.0), 0.0)
                }
                _ => chi.value(j as f64 - x)? * h,
            };
            acc += s[i] * weight;
        }
        out.set(&[j], acc)?;
    }
    Ok(out)
}

/// `‖S_χ f‖_{E_d}` against `‖χ‖_∞ ‖ |f| ∗ 1_{[a, b+1]} ‖_E` (the kernel
/// `1_{[a,b+1]}` is `1` on `supp χ + [0,1]`). Returns `(lhs, rhs)`.
pub fn sample_convolution_bound(
    f: &GridFunction,
    chi: &Profile,
    support: (f64, f64),
    radius: i64,
    model: &BanachSpaceModel,
) -> Result<(f64, f64)> {
    check_radius(f.grid(), radius)?;
    let c = sample_convolution(f, chi, support, radius)?;
    let lhs = model.ed_norm(&c)?;
    let grid = f.grid();
    let h = grid.h();
    let (a, b) = support;
    let chi_sup = grid
        .axis()
        .iter()
        .filter(|x| (a..=b).contains(*x))
        .map(|x| chi.value(*x).map(|v| v.norm()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let axis = grid.axis();
    let s = f.samples();
    let g: Vec<Complex64> = axis
        .iter()
        .map(|&x| {
            let (lo, hi) = (x - b - 1.0 - h, x - a);
            let v: f64 = axis.iter().zip(s).filter(|(t, _)| **t >= lo && **t <= hi).map(|(_, v)| h * v.norm()).sum();
            Complex64::new(v, 0.0)
        })
        .collect();
    let rhs = chi_sup * model.norm(&GridFunction::from_samples(*grid, g, "envelope")?)?;
    Ok((lhs, rhs))
}

/// `R_ψ(c) = Σ_j c_j ψ(· - j)` on the window's grid.
pub fn synthesis(c: &SequenceData, window: &Window) -> Result<GridFunction> {
    let grid = window.grid();
    if c.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: c.dim() });
    }
    if c.radius() > grid.half_width() {
        return Err(Error::SupportOverflow(format!("radius {} exceeds the half-width", c.radius())));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (j, cj) in c.iter() {
        if cj.norm() == 0.0 {
            continue;
        }
        for (i, slot) in out.iter_mut().enumerate() {
            *slot += cj * window.shifted_sample(i, j[0]);
        }
    }
    GridFunction::from_samples(*grid, out, "synthesis")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisReport {
    pub observed: f64,
    /// `C₀ C ‖c‖_{E_d} ‖ψ‖_{⟨·⟩^2}` with `C₀ = 1` and `C` the lattice constant
    /// truncated at the grid half-width.
    pub predicted: f64,
    pub ratio: f64,
}

pub fn synthesis_bound(c: &SequenceData, window: &Window, model: &BanachSpaceModel) -> Result<SynthesisReport> {
    let r = synthesis(c, window)?;
    let observed = model.norm(&r)?;
    let constant = lattice_constant(1, window.grid().half_width());
    let predicted = constant * model.ed_norm(c)? * window.decay();
    let ratio = if predicted > 0.0 { observed / predicted } else { 0.0 };
    Ok(SynthesisReport { observed, predicted, ratio })
}

/// `S(f) = (f(j))_{|j| <= radius}`.
pub fn evaluation(f: &GridFunction, radius: i64) -> Result<SequenceData> {
    let grid = f.grid();
    check_radius(grid, radius)?;
    let mut out = SequenceData::zeros(grid.dim(), radius);
    let lattice: Vec<Vec<i64>> = out.iter().map(|(j, _)| j).collect();
    for j in lattice {
        let i = grid.lattice_index(&j).ok_or_else(|| Error::Misaligned(format!("{j:?} is not a grid point")))?;
        out.set(&j, f.samples()[i])?;
    }
    Ok(out)
}

/// `‖S(f)‖_{E_{d,v}}`.
pub fn evaluation_weighted_norm(f: &GridFunction, radius: i64, model: &BanachSpaceModel, v: &WeightFunction) -> Result<f64> {
    model.weighted_ed_norm(&evaluation(f, radius)?, v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Periodized {
    pub function: GridFunction,
    /// Bound on the omitted terms `Σ_{|j| > J} |ψ(x - j)|` for `x ∈ [0,1)`.
    pub tail_bound: f64,
    /// `max |Π(x + 1) - Π(x)|` for `x ∈ [0,1)`.
    pub periodicity_gap: f64,
}

/// `Σ_{m >= J} ⟨m⟩^{-2} <= ⟨J⟩^{-2} + π/2 - atan J`.
pub fn tail_sum(j: i64) -> f64 {
    let j = j as f64;
    1.0 / (1.0 + j * j) + std::f64::consts::FRAC_PI_2 - j.atan()
}

/// `Π(ψ) = Σ_{|j| <= J} ψ(· - j)`.
pub fn periodize(window: &Window, radius: i64) -> Result<Periodized> {
    let grid = window.grid();
    if radius < 1 || radius > grid.half_width() / 2 {
        return Err(Error::SupportOverflow(format!("radius {radius} must lie in [1, T/2]")));
    }
    let samples: Vec<Complex64> =
        (0..grid.len()).map(|i| (-radius..=radius).map(|j| window.shifted_sample(i, j)).sum()).collect();
    let start = grid.lattice_index(&[0]).ok_or_else(|| Error::Misaligned("origin off the grid".into()))?;
    let per = grid.per_unit();
    let periodicity_gap = (start..start + per).map(|i| (samples[i + per] - samples[i]).norm()).fold(0.0, f64::max);
    Ok(Periodized {
        function: GridFunction::from_samples(*grid, samples, "periodized")?,
        tail_bound: 2.0 * window.decay() * tail_sum(radius),
        periodicity_gap,
    })
}

/// Closed-form periodization with derivatives.
pub fn periodize_profile(p: &Profile, radius: i64) -> Profile {
    Profile::LatticeSum { f: Box::new(p.clone()), radius }
}

/// `L_ψ(f) = ψ f` with Leibniz derivatives.
pub fn multiply(window: &Window, f: &Profile) -> TestFunction {
    TestFunction::one_d(window.profile().clone().times(f.clone()))
}

#[derive(Debug, Clone)]
pub struct MultiplyReport {
    pub product: TestFunction,
    /// `ψ ∈ S^{[M]}_{[W_{k+2}],∞}`.
    pub hypothesis: Verdict,
    /// `ψ f ∈ E^{[M]}_{[W_k]}`; not evaluated unless the hypothesis holds.
    pub product_membership: Option<Verdict>,
}

/// [`multiply`] after checking the window hypothesis with the `∞`-model.
#[allow(clippy::too_many_arguments)]
pub fn multiply_checked(
    window: &Window,
    f: &Profile,
    m: &WeightSequenceSystem,
    w: &WeightFunctionSystem,
    kind: Kind,
    k: f64,
    model: &BanachSpaceModel,
    hz: &Horizons,
) -> Result<MultiplyReport> {
    let sup = BanachSpaceModel::lp(f64::INFINITY, *window.grid())?;
    let wide = WeightFunctionSystem::poly_shift_all(k + 2.0, w.clone(), hz)?;
    let psi = TestFunction::one_d(window.profile().clone());
    let hypothesis = membership_verdict(&psi, m, &wide, kind, &sup, hz)?;
    let product = multiply(window, f);
    let product_membership = if hypothesis.is_witnessed() {
        let shifted = WeightFunctionSystem::poly_shift_all(k, w.clone(), hz)?;
        Some(membership_verdict(&product, m, &shifted, kind, model, hz)?)
    } else {
        None
    };
    Ok(MultiplyReport { product, hypothesis, product_membership })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::windows::{interpolating_window, partition_window, WindowKind};

    fn grid() -> GridSpec {
        GridSpec::default_for(1).unwrap()
    }

    #[test]
    fn indicator_convolution_is_a_hat() {
        let g = grid();
        let one = TestFunction::one_d(Profile::Indicator { a: 0.0, b: 1.0 });
        let f = GridFunction::sample(g, &one).unwrap();
        let c = sample_convolution(&f, &Profile::Indicator { a: 0.0, b: 1.0 }, (0.0, 1.0), 4).unwrap();
        for j in -4..=4 {
            assert_eq!(c.get(&[j]).re, if j == 1 { 1.0 } else { 0.0 }, "j={j}");
        }
        let zero = GridFunction::sample(g, &TestFunction::zero(1)).unwrap();
        assert_eq!(sample_convolution(&zero, &Profile::Indicator { a: 0.0, b: 1.0 }, (0.0, 1.0), 4).unwrap().support_size(), 0);
    }

    #[test]
    fn gaussian_bump_convolution_matches_dense_quadrature() {
        let g = grid();
        let f = GridFunction::sample(g, &TestFunction::gaussian(1, 1.0).unwrap()).unwrap();
        let bump = Profile::bump(8, 1.0).unwrap();
        let c = sample_convolution(&f, &bump, (-1.0, 1.0), 5).unwrap();
        for j in -5..=5 {
            let oracle = crate::numeric::integrate_gl(
                |t| Complex64::new((-t * t).exp(), 0.0) * bump.value(j as f64 - t).unwrap(),
                j as f64 - 1.0,
                j as f64 + 1.0,
                64,
                16,
            );
            assert!((c.get(&[j]) - oracle).norm() < 1e-8, "j={j}");
        }
        let model = BanachSpaceModel::lp(2.0, g).unwrap();
        let (lhs, rhs) = sample_convolution_bound(&f, &bump, (-1.0, 1.0), 5, &model).unwrap();
        assert!(lhs <= rhs);
    }

    #[test]
    fn synthesis_of_deltas() {
        let g = grid();
        let w = Window::new(Profile::gaussian(1.0).unwrap(), WindowKind::Generic, &g).unwrap();
        let mut c = SequenceData::delta(1, 4, &[0]).unwrap();
        let r = synthesis(&c, &w).unwrap();
        for i in (0..g.len()).step_by(97) {
            assert_eq!(r.samples()[i], w.profile().value(g.point(i)[0]).unwrap());
        }
        c.set(&[1], Complex64::new(1.0, 0.0)).unwrap();
        let r = synthesis(&c, &w).unwrap();
        for i in (0..g.len()).step_by(89) {
            let x = g.point(i)[0];
            let want = (-x * x).exp() + (-(x - 1.0) * (x - 1.0)).exp();
            assert!((r.samples()[i].re - want).abs() < 1e-15);
        }
    }

    #[test]
    fn interpolating_reconstruction() {
        let g = grid();
        let w = interpolating_window(&Profile::gaussian(1.0).unwrap(), &g).unwrap();
        let mut c = SequenceData::zeros(1, 16);
        for (k, v) in [(-7, Complex64::new(1.5, -2.0)), (0, Complex64::new(-0.25, 0.0)), (11, Complex64::new(0.0, 3.0))] {
            c.set(&[k], v).unwrap();
        }
        let back = evaluation(&synthesis(&c, &w).unwrap(), 16).unwrap();
        for (j, v) in c.iter() {
            assert!((back.get(&j) - v).norm() < 1e-12, "{j:?}");
        }
    }

    #[test]
    fn evaluation_samples() {
        let g = grid();
        let f = GridFunction::sample(g, &TestFunction::gaussian(1, 1.0).unwrap()).unwrap();
        let c = evaluation(&f, 3).unwrap();
        for j in -3..=3i64 {
            assert!((c.get(&[j]).re - (-(j * j) as f64).exp()).abs() < 1e-16);
        }
        let s = GridFunction::sample(g, &TestFunction::one_d(Profile::sinc_window())).unwrap();
        let d = evaluation(&s, 8).unwrap();
        assert!((d.get(&[0]) - 1.0).norm() < 1e-15);
        assert!(d.iter().filter(|(j, _)| j[0] != 0).all(|(_, v)| v.norm() < 1e-15));
        let model = BanachSpaceModel::lp(1.0, g).unwrap();
        let w = WeightFunction::power_exp(1.0, 1.0).unwrap();
        assert_eq!(evaluation_weighted_norm(&f, 3, &model, &w).unwrap(), model.weighted_ed_norm(&c, &w).unwrap());
    }

    #[test]
    fn periodized_gaussian_is_a_theta_value() {
        let g = grid();
        let w = Window::new(Profile::gaussian(1.0).unwrap(), WindowKind::Generic, &g).unwrap();
        let p = periodize(&w, 16).unwrap();
        let oracle = 1.0 + 2.0 * (1..=40).map(|j: i32| (-(j * j) as f64).exp()).sum::<f64>();
        let i0 = g.lattice_index(&[0]).unwrap();
        assert!((p.function.samples()[i0].re - oracle).abs() < 1e-15);
        assert!(p.periodicity_gap < 1e-15);
        let half = periodize(&w, 8).unwrap();
        let diff = (i0..i0 + g.per_unit())
            .map(|i| (half.function.samples()[i] - p.function.samples()[i]).norm())
            .fold(0.0, f64::max);
        assert!(diff <= half.tail_bound);
    }

    #[test]
    fn partition_reconstructs_trig_polynomials() {
        let g = grid();
        let w = partition_window(&Profile::gaussian(1.0).unwrap(), &g).unwrap();
        let f = Profile::trig(vec![(3, Complex64::new(1.0, 0.5)), (-8, Complex64::new(0.0, -2.0)), (0, Complex64::new(0.3, 0.0))]);
        let product = Window::new(multiply(&w, &f).factors()[0].clone(), WindowKind::Generic, &g).unwrap();
        let back = periodize(&product, default_radius(&g)).unwrap();
        let i0 = g.lattice_index(&[0]).unwrap();
        for i in i0..i0 + g.per_unit() {
            let x = g.point(i)[0];
            assert!((back.function.samples()[i] - f.value(x).unwrap()).norm() < 1e-10);
        }
    }
}
