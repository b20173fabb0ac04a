//! Horizons and grids shared by the finite-horizon checks.

/// Powers of two `2^k` for `k` in `lo..=hi`.
pub fn dyadic_grid(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(k)).collect()
}

/// `count` points spaced geometrically on `[lo, hi]`, endpoints included.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let ratio = (hi / lo).ln() / (count - 1) as f64;
    let mut out: Vec<f64> = (0..count).map(|i| lo * (ratio * i as f64).exp()).collect();
    out[count - 1] = hi;
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Horizons {
    /// Order bound for weight sequences.
    pub q_max: usize,
    /// Tail window (in orders or grid points) used by trend certificates.
    pub window: usize,
    /// Relative tolerance.
    pub tol: f64,
    /// Minimal per-step growth (in log units) for a divergence certificate.
    pub margin: f64,
    /// Candidate geometric factors `H`.
    pub h_grid: Vec<f64>,
    /// Parameter grid for weight systems.
    pub lambda_grid: Vec<f64>,
    /// Candidate factors `R` standing in for "for all R > 0".
    pub r_grid: Vec<f64>,
    /// Radii of the shells on which weight functions are probed.
    pub shells: Vec<f64>,
    /// Upper end of the geometric `t` grid for one-dimensional weights.
    pub t_max: f64,
    /// Points per decade on the `t` grid.
    pub t_per_decade: usize,
    /// Order bound for pair enumerations over anisotropic sequences.
    pub pair_q_max: usize,
    /// Run symbolic fast paths when a canonical family is recognized.
    pub fast_paths: bool,
}

impl Default for Horizons {
    fn default() -> Self {
        let mut shells = vec![0.0];
        shells.extend(geometric_grid(0.1, 1000.0, 49));
        Horizons {
            q_max: 64,
            window: 8,
            tol: 1e-6,
            margin: 1e-3,
            h_grid: dyadic_grid(-6, 20),
            lambda_grid: dyadic_grid(-8, 8),
            r_grid: dyadic_grid(0, 10),
            shells,
            t_max: 1e8,
            t_per_decade: 64,
            pair_q_max: 20,
            fast_paths: true,
        }
    }
}

impl Horizons {
    pub fn numeric_only(mut self) -> Self {
        self.fast_paths = false;
        self
    }

    /// Geometric grid on `[1, t_max]`.
    pub fn t_grid(&self) -> Vec<f64> {
        let decades = self.t_max.log10();
        let count = (decades * self.t_per_decade as f64).round() as usize + 1;
        geometric_grid(1.0, self.t_max, count.max(2))
    }

    /// Radii probed along the integer lattice by the discrete probes: the
    /// geometric shells rounded to integers, extended up to `t_max`.
    pub fn lattice_radii(&self) -> Vec<f64> {
        let mut out: Vec<f64> = geometric_grid(1.0, self.t_max, 8 * self.t_max.log10() as usize + 1)
            .into_iter()
            .map(|r| r.round())
            .collect();
        out.insert(0, 0.0);
        out.dedup();
        out
    }

    /// Slope range a conjugate must cover so that `φ*(λq)` is available for
    /// every grid parameter and order.
    pub fn slope_target(&self) -> f64 {
        self.lambda_grid.iter().cloned().fold(0.0, f64::max) * self.q_max as f64
    }

    pub fn record(&self) -> Vec<(String, f64)> {
        vec![
            ("q_max".into(), self.q_max as f64),
            ("window".into(), self.window as f64),
            ("lambda_min".into(), first(&self.lambda_grid)),
            ("lambda_max".into(), last(&self.lambda_grid)),
        ]
    }
}

fn first(v: &[f64]) -> f64 {
    v.first().copied().unwrap_or(f64::NAN)
}

fn last(v: &[f64]) -> f64 {
    v.last().copied().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grids_match_documented_ranges() {
        let h = Horizons::default();
        assert_eq!(h.h_grid.len(), 27);
        assert_eq!(h.lambda_grid.first(), Some(&2f64.powi(-8)));
        assert_eq!(h.lambda_grid.last(), Some(&256.0));
        assert_eq!(h.r_grid.last(), Some(&1024.0));
        assert_eq!(*h.shells.last().unwrap(), 1000.0);
        let t = h.t_grid();
        assert_eq!(t.len(), 8 * 64 + 1);
        assert!((t.last().unwrap() - 1e8).abs() < 1e-3);
        let radii = h.lattice_radii();
        assert_eq!(radii[0], 0.0);
        assert!(radii.windows(2).all(|w| w[1] > w[0]));
    }
}
