//! Discrete models of solid, translation-invariant Banach function spaces.

use super::grid::{finish_power, GridSpec, SequenceData};
use super::gridfn::GridFunction;
use crate::error::{Error, Result};
use crate::functions::WeightFunction;
use crate::numeric::log_sum_exp;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    /// `L^p`, `p ∈ [1, ∞]`.
    Lp(f64),
    /// Sup norm with a vanishing-tail certificate.
    L0,
    /// `‖ x_1 ↦ ‖f(x_1, ·)‖_{p1} ‖_{p2}` on two-dimensional grids.
    Mixed { p1: f64, p2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BanachSpaceModel {
    kind: ModelKind,
    grid: GridSpec,
}

/// Largest modulus on the outer unit shell of the box relative to the sup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailCertificate {
    pub shell_sup: f64,
    pub ratio: f64,
    pub vanishing: bool,
}

pub const TAIL_TOL: f64 = 1e-8;

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("exponent p = {p} must be >= 1")))
    }
}

/// `|v|^p` with the same arithmetic as [`SequenceData::lp_norm`].
fn pow_abs(v: Complex64, p: f64) -> f64 {
    if p == 1.0 {
        v.norm()
    } else if p == 2.0 {
        v.norm_sqr()
    } else {
        v.norm().powf(p)
    }
}

impl BanachSpaceModel {
    pub fn lp(p: f64, grid: GridSpec) -> Result<Self> {
        check_p(p)?;
        Ok(BanachSpaceModel { kind: ModelKind::Lp(p), grid })
    }

    pub fn l0(grid: GridSpec) -> Self {
        BanachSpaceModel { kind: ModelKind::L0, grid }
    }

    pub fn mixed(p1: f64, p2: f64, grid: GridSpec) -> Result<Self> {
        check_p(p1)?;
        check_p(p2)?;
        if grid.dim() != 2 {
            return Err(Error::InvalidInput("mixed-norm model needs a two-dimensional grid".into()));
        }
        Ok(BanachSpaceModel { kind: ModelKind::Mixed { p1, p2 }, grid })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn describe(&self) -> String {
        match self.kind {
            ModelKind::Lp(p) if p.is_infinite() => "lp(p=inf)".into(),
            ModelKind::Lp(p) => format!("lp(p={p})"),
            ModelKind::L0 => "l0".into(),
            ModelKind::Mixed { p1, p2 } => format!("mixed(p1={p1},p2={p2})"),
        }
    }

    fn check_grid(&self, f: &GridFunction) -> Result<()> {
        if f.grid() != &self.grid {
            return Err(Error::Misaligned("function sampled on a different grid".into()));
        }
        Ok(())
    }

    /// Riemann-sum norm. `L^p` sums are blocked by unit cell in row-major
    /// order, and runs of equal `|f|^p` inside a cell are weighted by
    /// `count·h^n`, so a function constant on cells is summed exactly like
    /// the sequence of its cell values.
    pub fn norm(&self, f: &GridFunction) -> Result<f64> {
        self.check_grid(f)?;
        let s = f.samples();
        Ok(match self.kind {
            ModelKind::Lp(p) if p.is_infinite() => sup(s),
            ModelKind::L0 => sup(s),
            ModelKind::Lp(p) => {
                let hn = self.grid.cell_volume();
                let mut total = 0.0;
                for (_, idx) in self.grid.cells() {
                    let mut cell = 0.0;
                    let mut i = 0;
                    while i < idx.len() {
                        let v = pow_abs(s[idx[i]], p);
                        let mut count = 1;
                        while i + count < idx.len() && pow_abs(s[idx[i + count]], p) == v {
                            count += 1;
                        }
                        cell += (count as f64 * hn) * v;
                        i += count;
                    }
                    total += cell;
                }
                finish_power(total, p)
            }
            ModelKind::Mixed { p1, p2 } => {
                let side = self.grid.side();
                let h = self.grid.h();
                let rows: Vec<f64> = s.chunks(side).map(|row| one_d_norm(row.iter().map(|v| v.norm()), p1, h)).collect();
                one_d_norm(rows.into_iter(), p2, h)
            }
        })
    }

    pub fn norm_with_tail(&self, f: &GridFunction) -> Result<(f64, Option<TailCertificate>)> {
        let n = self.norm(f)?;
        let tail = match self.kind {
            ModelKind::L0 => Some(self.tail_certificate(f)),
            _ => None,
        };
        Ok((n, tail))
    }

    pub fn tail_certificate(&self, f: &GridFunction) -> TailCertificate {
        let s = f.samples();
        let total = sup(s);
        let shell_sup = self.grid.outer_shell().into_iter().map(|i| s[i].norm()).fold(0.0, f64::max);
        let ratio = if total > 0.0 { shell_sup / total } else { 0.0 };
        TailCertificate { shell_sup, ratio, vanishing: ratio <= TAIL_TOL }
    }

    /// `‖Σ_j |c_j| 1_{j+[0,1]^n}‖_E`.
    pub fn ed_norm(&self, c: &SequenceData) -> Result<f64> {
        self.norm(&GridFunction::tiling(self.grid, c)?)
    }

    /// `‖(c_j w(j))_j‖_{E_d}`; the weight must be exact at every lattice point.
    pub fn weighted_ed_norm(&self, c: &SequenceData, w: &WeightFunction) -> Result<f64> {
        let mut weighted = SequenceData::zeros(c.dim(), c.radius());
        for (j, v) in c.iter() {
            if v.norm() == 0.0 {
                continue;
            }
            let x: Vec<f64> = j.iter().map(|k| *k as f64).collect();
            weighted.set(&j, v * w.eval(&x)?)?;
        }
        self.ed_norm(&weighted)
    }

    /// `ln ‖g‖_E` from `ln|g|` at every sample (grid layout), in log space.
    pub fn ln_norm(&self, ln_abs: &[f64]) -> f64 {
        let ln_h = self.grid.h().ln();
        let ln_one_d = |vals: &[f64], p: f64| -> f64 {
            if p.is_infinite() {
                vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            } else {
                let scaled: Vec<f64> = vals.iter().map(|v| p * v).collect();
                (log_sum_exp(&scaled) + ln_h) / p
            }
        };
        match self.kind {
            ModelKind::Lp(p) if p.is_infinite() => ln_one_d(ln_abs, p),
            ModelKind::L0 => ln_one_d(ln_abs, f64::INFINITY),
            ModelKind::Lp(p) => {
                let scaled: Vec<f64> = ln_abs.iter().map(|v| p * v).collect();
                (log_sum_exp(&scaled) + self.grid.dim() as f64 * ln_h) / p
            }
            ModelKind::Mixed { p1, p2 } => {
                let rows: Vec<f64> = ln_abs.chunks(self.grid.side()).map(|r| ln_one_d(r, p1)).collect();
                ln_one_d(&rows, p2)
            }
        }
    }

    /// `‖1_{[0,1)^n}‖_E`.
    pub fn unit_cell_norm(&self) -> Result<f64> {
        let c = SequenceData::delta(self.grid.dim(), 0, &vec![0; self.grid.dim()])?;
        self.ed_norm(&c)
    }
}

fn sup(s: &[Complex64]) -> f64 {
    s.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn one_d_norm(vals: impl Iterator<Item = f64>, p: f64, h: f64) -> f64 {
    if p.is_infinite() {
        return vals.fold(0.0, f64::max);
    }
    finish_power(vals.map(|v| h * v.powf(p)).sum(), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::testfn::TestFunction;

    fn grid() -> GridSpec {
        GridSpec::default_for(1).unwrap()
    }

    #[test]
    fn unit_indicator_has_norm_one() {
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            let m = BanachSpaceModel::lp(p, grid()).unwrap();
            assert_eq!(m.unit_cell_norm().unwrap(), 1.0);
        }
        assert_eq!(BanachSpaceModel::l0(grid()).unit_cell_norm().unwrap(), 1.0);
    }

    #[test]
    fn gaussian_norms() {
        let f = GridFunction::sample(grid(), &TestFunction::gaussian(1, 1.0).unwrap()).unwrap();
        let sup = BanachSpaceModel::lp(f64::INFINITY, grid()).unwrap().norm(&f).unwrap();
        assert_eq!(sup, 1.0);
        let two = BanachSpaceModel::lp(2.0, grid()).unwrap().norm(&f).unwrap();
        assert!((two - (std::f64::consts::PI / 2.0).powf(0.25)).abs() < 1e-12);
        let one = BanachSpaceModel::lp(1.0, grid()).unwrap().norm(&f).unwrap();
        assert!((one - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        let (n, tail) = BanachSpaceModel::l0(grid()).norm_with_tail(&f).unwrap();
        assert_eq!(n, 1.0);
        assert!(tail.unwrap().vanishing);
    }

    #[test]
    fn log_space_norm_matches_direct() {
        let f = GridFunction::sample(grid(), &TestFunction::gaussian(1, 0.5).unwrap()).unwrap();
        let ln: Vec<f64> = f.samples().iter().map(|v| v.norm().ln()).collect();
        for p in [1.0, 2.0, f64::INFINITY] {
            let m = BanachSpaceModel::lp(p, grid()).unwrap();
            assert!((m.ln_norm(&ln) - m.norm(&f).unwrap().ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn ed_norm_equals_lp_of_the_sequence() {
        let mut c = SequenceData::zeros(1, 5);
        for (k, v) in [(-5, 0.3), (-1, -2.0), (0, 1.25), (4, 7.0)] {
            c.set(&[k], Complex64::new(v, 0.0)).unwrap();
        }
        for p in [1.0, 2.0, f64::INFINITY] {
            let m = BanachSpaceModel::lp(p, grid()).unwrap();
            assert_eq!(m.ed_norm(&c).unwrap(), c.lp_norm(p));
        }
        assert_eq!(BanachSpaceModel::l0(grid()).ed_norm(&c).unwrap(), 7.0);
    }

    #[test]
    fn weighted_delta_norm_is_the_weight() {
        let m = BanachSpaceModel::lp(2.0, grid()).unwrap();
        let w = WeightFunction::power_exp(1.0, 0.5).unwrap();
        let d = SequenceData::delta(1, 10, &[7]).unwrap();
        let got = m.weighted_ed_norm(&d, &w).unwrap();
        assert!((got - w.eval(&[7.0]).unwrap()).abs() <= 1e-15 * got);
    }

    #[test]
    fn mixed_norm_of_a_product() {
        let g = GridSpec::default_for(2).unwrap();
        let f = GridFunction::sample(g, &TestFunction::gaussian(2, 1.0).unwrap()).unwrap();
        let m = BanachSpaceModel::mixed(2.0, 1.0, g).unwrap();
        // ‖e^{-x^2}‖_2 · ‖e^{-y^2}‖_1
        let want = (std::f64::consts::PI / 2.0).powf(0.25) * std::f64::consts::PI.sqrt();
        assert!((m.norm(&f).unwrap() - want).abs() < 1e-10);
        assert!(BanachSpaceModel::mixed(2.0, 1.0, grid()).is_err());
    }
}
