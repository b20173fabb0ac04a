//! Windows: decaying profiles sampled on an extended axis, with the
//! interpolating and partition-of-unity constructions.

use crate::error::{Error, Result};
use crate::numeric::integrate_gl;
use crate::spaces::{GridSpec, Profile};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    /// `ψ(j) = δ_{j,0}` on the lattice.
    Interpolating,
    /// `Σ_j ψ(· - j) ≡ 1`.
    Partition,
    Generic,
}

/// A one-dimensional profile with a finite certificate
/// `sup |ψ(x)| ⟨x⟩^2` on `[-2T, 2T)`, sampled on that extended axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    profile: Profile,
    kind: WindowKind,
    grid: GridSpec,
    decay: f64,
    extended: Vec<Complex64>,
}

pub(crate) fn require_one_d(grid: &GridSpec) -> Result<()> {
    if grid.dim() != 1 {
        return Err(Error::InvalidInput("operators are implemented for n = 1".into()));
    }
    Ok(())
}

impl Window {
    pub fn new(profile: Profile, kind: WindowKind, grid: &GridSpec) -> Result<Self> {
        require_one_d(grid)?;
        let t = grid.half_width() as f64;
        let count = 2 * grid.side();
        let extended: Vec<Complex64> =
            (0..count).map(|k| profile.value(-2.0 * t + k as f64 * grid.h())).collect::<Result<_>>()?;
        let mut decay: f64 = 0.0;
        let mut edge: f64 = 0.0;
        for (k, v) in extended.iter().enumerate() {
            let x = -2.0 * t + k as f64 * grid.h();
            let d = v.norm() * (1.0 + x * x);
            if !d.is_finite() {
                return Err(Error::MissingDecay(format!("{} is not finite at {x}", profile.describe())));
            }
            decay = decay.max(d);
            if x.abs() >= 2.0 * t - 1.0 {
                edge = edge.max(d);
            }
        }
        if edge >= decay && decay > 0.0 {
            return Err(Error::MissingDecay(format!(
                "sup |psi| <x>^2 of {} is attained at the edge of the box",
                profile.describe()
            )));
        }
        Ok(Window { profile, kind, grid: *grid, decay, extended })
    }

    /// `ψ f` as a generic window, reusing the samples of `ψ`.
    pub fn modulated(&self, f: &Profile) -> Result<Window> {
        let t = self.grid.half_width() as f64;
        let h = self.grid.h();
        let extended = self
            .extended
            .iter()
            .enumerate()
            .map(|(k, v)| Ok(v * f.value(-2.0 * t + k as f64 * h)?))
            .collect::<Result<Vec<_>>>()?;
        let decay = extended
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let x = -2.0 * t + k as f64 * h;
                v.norm() * (1.0 + x * x)
            })
            .fold(0.0, f64::max);
        let profile = self.profile.clone().times(f.clone());
        Ok(Window { profile, kind: WindowKind::Generic, grid: self.grid, decay, extended })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// `‖ψ‖_{⟨·⟩^2} = sup |ψ(x)| ⟨x⟩^2` over the extended samples.
    pub fn decay(&self) -> f64 {
        self.decay
    }

    /// `ψ(x_i - j)` for grid sample `i` and integer shift `|j| <= T`.
    pub fn shifted_sample(&self, i: usize, j: i64) -> Complex64 {
        let per = self.grid.per_unit() as i64;
        let k = (self.grid.half_width() - j) * per + i as i64;
        self.extended[k as usize]
    }
}

/// `ψ = φ · e^{-πix} sin(πx)/(πx)`; requires `φ(0) = 1`.
pub fn interpolating_window(phi: &Profile, grid: &GridSpec) -> Result<Window> {
    let v0 = phi.value(0.0)?;
    if (v0 - 1.0).norm() > 1e-12 {
        return Err(Error::NormalizationImpossible(format!("phi(0) = {v0}, expected 1")));
    }
    let w = Window::new(phi.clone().times(Profile::sinc_window()), WindowKind::Interpolating, grid)?;
    let t = grid.half_width();
    for j in -t..t {
        let v = w.profile.value(j as f64)?;
        let want = if j == 0 { 1.0 } else { 0.0 };
        if (v - want).norm() > 1e-12 {
            return Err(Error::InvalidFunction(format!("interpolation fails at {j}: {v}")));
        }
    }
    Ok(w)
}

/// `∫ |φ|^2` over `[-2T, 2T]`.
fn squared_mass(phi: &Profile, grid: &GridSpec) -> Result<f64> {
    let t = 2.0 * grid.half_width() as f64;
    let mut err = None;
    let mass = integrate_gl(
        |x| match phi.value(x) {
            Ok(v) => Complex64::new(v.norm_sqr(), 0.0),
            Err(e) => {
                err = Some(e);
                Complex64::new(0.0, 0.0)
            }
        },
        -t,
        t,
        (8.0 * t) as usize,
        16,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(mass.re),
    }
}

/// `φ₀ = |φ|^2 / ‖|φ|^2‖_{L^1}` and `ψ(x) = ∫_0^1 φ₀(x - t) dt`.
pub fn partition_window(phi: &Profile, grid: &GridSpec) -> Result<Window> {
    require_one_d(grid)?;
    let mass = squared_mass(phi, grid)?;
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::NormalizationImpossible(format!("|phi|^2 has mass {mass}")));
    }
    let phi0 = phi.clone().times(Profile::Conj(Box::new(phi.clone()))).scaled(Complex64::new(1.0 / mass, 0.0));
    let w = Window::new(Profile::CellAverage { f: Box::new(phi0) }, WindowKind::Partition, grid)?;
    let gap = partition_gap(&w)?;
    if gap > 1e-8 {
        return Err(Error::InvalidFunction(format!("lattice sum of the partition window misses 1 by {gap}")));
    }
    Ok(w)
}

/// `max_{x ∈ [0,1)} |Σ_{|j| <= T/2} ψ(x - j) - 1|` over the grid samples.
pub fn partition_gap(w: &Window) -> Result<f64> {
    let grid = w.grid();
    let j_max = grid.half_width() / 2;
    let start = grid.lattice_index(&[0]).ok_or_else(|| Error::Misaligned("origin off the grid".into()))?;
    let mut worst: f64 = 0.0;
    for i in start..start + grid.per_unit() {
        let s: Complex64 = (-j_max..=j_max).map(|j| w.shifted_sample(i, j)).sum();
        worst = worst.max((s - 1.0).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::default_for(1).unwrap()
    }

    #[test]
    fn interpolating_window_vanishes_off_origin() {
        let w = interpolating_window(&Profile::gaussian(1.0).unwrap(), &grid()).unwrap();
        assert_eq!(w.kind(), WindowKind::Interpolating);
        assert!((w.profile().value(0.0).unwrap() - 1.0).norm() < 1e-15);
        for j in [-2.0, -1.0, 1.0, 2.0] {
            assert!(w.profile().value(j).unwrap().norm() < 1e-15);
        }
        let bad = Profile::gaussian(1.0).unwrap().scaled(Complex64::new(2.0, 0.0));
        assert!(matches!(interpolating_window(&bad, &grid()), Err(Error::NormalizationImpossible(_))));
    }

    #[test]
    fn bare_sinc_window_has_no_decay_certificate() {
        assert!(matches!(
            Window::new(Profile::sinc_window(), WindowKind::Generic, &grid()),
            Err(Error::MissingDecay(_))
        ));
    }

    #[test]
    fn partition_window_sums_to_one() {
        let w = partition_window(&Profile::gaussian(1.0).unwrap(), &grid()).unwrap();
        assert!(partition_gap(&w).unwrap() < 1e-12);
        let g = grid();
        let i = g.lattice_index(&[0]).unwrap();
        assert_eq!(w.shifted_sample(i + 3, 2), w.profile().value(g.point(i + 3)[0] - 2.0).unwrap());
        assert!(partition_window(&Profile::Zero, &g).is_err());
    }

    #[test]
    fn decay_certificate_of_a_gaussian() {
        // sup e^{-x^2}(1 + x^2) = 1 at x = 0
        let w = Window::new(Profile::gaussian(1.0).unwrap(), WindowKind::Generic, &grid()).unwrap();
        assert_eq!(w.decay(), 1.0);
    }
}
