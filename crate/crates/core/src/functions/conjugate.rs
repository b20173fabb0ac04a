//! Discrete Legendre-Fenchel transform over sampled convex functions.

use crate::config::geometric_grid;
use crate::error::{Error, Result};

/// `sup_{x >= x_0} (y x - f(x))` for convex samples `(xs, fs)` with
/// precomputed chord slopes. The discrete maximizer is located by the slope
/// index and refined with the parabola through its neighbors, which is exact
/// for locally quadratic `f`. Returns `None` beyond the slope at the right
/// endpoint, where the supremum would sit on the sampling boundary.
pub fn legendre_at(xs: &[f64], fs: &[f64], slopes: &[f64], y: f64) -> Option<f64> {
    let n = xs.len();
    if n < 3 || slopes.len() + 1 != n || y > end_slope(xs, fs) {
        return None;
    }
    // Number of chord slopes strictly below y is the discrete argmax.
    let i = slopes.partition_point(|&s| s < y);
    Some(refine(xs, fs, i, y))
}

fn refine(xs: &[f64], fs: &[f64], i: usize, y: f64) -> f64 {
    let n = xs.len();
    let discrete = y * xs[i] - fs[i];
    let c = i.clamp(1, n - 2);
    let (x0, x1, x2) = (xs[c - 1], xs[c], xs[c + 1]);
    let (f0, f1, f2) = (fs[c - 1], fs[c], fs[c + 1]);
    // Newton form of the interpolating parabola.
    let d01 = (f1 - f0) / (x1 - x0);
    let d12 = (f2 - f1) / (x2 - x1);
    let a = (d12 - d01) / (x2 - x0);
    if !(a > 0.0) {
        return discrete;
    }
    // p'(x) = d01 + a (2x - x0 - x1) = y
    let x_opt = ((y - d01) / a + x0 + x1) / 2.0;
    let lo = if i == 0 { xs[0] } else { xs[i - 1] };
    let hi = if i + 1 < n { xs[i + 1] } else { xs[n - 1] };
    let x_opt = x_opt.clamp(lo.max(x0), hi.min(x2));
    let p = f0 + d01 * (x_opt - x0) + a * (x_opt - x0) * (x_opt - x1);
    discrete.max(y * x_opt - p)
}

/// Slope at the last sample of the parabola through the last three samples,
/// never below the last chord slope, with a few ulps of slack.
fn end_slope(xs: &[f64], fs: &[f64]) -> f64 {
    let n = xs.len();
    let (x0, x1, x2) = (xs[n - 3], xs[n - 2], xs[n - 1]);
    let d01 = (fs[n - 2] - fs[n - 3]) / (x1 - x0);
    let d12 = (fs[n - 1] - fs[n - 2]) / (x2 - x1);
    let a = ((d12 - d01) / (x2 - x0)).max(0.0);
    let s = d12 + a * (x2 - x1);
    s + 1e-12 * s.abs().max(1.0)
}

pub fn chord_slopes(xs: &[f64], fs: &[f64]) -> Vec<f64> {
    xs.windows(2).zip(fs.windows(2)).map(|(x, f)| (f[1] - f[0]) / (x[1] - x[0])).collect()
}

/// Conjugate `φ*` of a convex, non-decreasing `φ` with `φ(0) = 0`, evaluated on
/// demand and tabulated on a geometric `y`-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateTable {
    xs: Vec<f64>,
    phis: Vec<f64>,
    slopes: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<Option<f64>>,
}

impl ConjugateTable {
    /// Builds the table; rejects non-convex samples.
    pub fn new(xs: Vec<f64>, phis: Vec<f64>, y_max: f64, y_points: usize) -> Result<Self> {
        if xs.len() != phis.len() || xs.len() < 3 {
            return Err(Error::InvalidFunction("need at least three samples of phi".into()));
        }
        let slopes = chord_slopes(&xs, &phis);
        for (k, w) in slopes.windows(2).enumerate() {
            let scale = 1.0 + w[0].abs().max(w[1].abs());
            if w[1] < w[0] - 1e-9 * scale {
                return Err(Error::NonConvex { x: xs[k + 1] });
            }
        }
        let mut ys = vec![0.0];
        if y_max > 0.0 {
            ys.extend(geometric_grid(y_max * 1e-6, y_max, y_points.max(2)));
        }
        let mut table = ConjugateTable { xs, phis, slopes, ys: Vec::new(), values: Vec::new() };
        // Monotone scan: the slope index only moves forward along the sorted ys.
        let mut i = 0;
        let last = end_slope(&table.xs, &table.phis);
        let mut values = Vec::with_capacity(ys.len());
        for &y in &ys {
            if y > last {
                values.push(None);
                continue;
            }
            while i < table.slopes.len() && table.slopes[i] < y {
                i += 1;
            }
            values.push(Some(refine(&table.xs, &table.phis, i, y)));
        }
        table.ys = ys;
        table.values = values;
        Ok(table)
    }

    /// Largest slope for which `φ*` is determined by the samples.
    pub fn covered(&self) -> f64 {
        end_slope(&self.xs, &self.phis)
    }

    pub fn eval(&self, y: f64) -> Option<f64> {
        if y < 0.0 {
            return None;
        }
        legendre_at(&self.xs, &self.phis, &self.slopes, y)
    }

    /// `φ**(x) = sup_y (x y - φ*(y))` over the tabulated `y`-grid.
    pub fn biconjugate(&self, x: f64) -> Option<f64> {
        let (ys, vs): (Vec<f64>, Vec<f64>) =
            self.ys.iter().zip(&self.values).filter_map(|(y, v)| v.map(|v| (*y, v))).unzip();
        let slopes = chord_slopes(&ys, &vs);
        legendre_at(&ys, &vs, &slopes, x)
    }

    /// Two-column CSV `y,phi_star` with empty cells where the slope range is
    /// exceeded.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidInput(e.to_string());
        w.write_record(["y", "phi_star"]).map_err(io)?;
        for (y, v) in self.ys.iter().zip(&self.values) {
            let vs = v.map(|v| format!("{v}")).unwrap_or_default();
            w.write_record([format!("{y}"), vs]).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_self_conjugate() {
        let xs: Vec<f64> = (0..=4096).map(|i| i as f64 / 64.0).collect();
        let fs: Vec<f64> = xs.iter().map(|x| x * x / 2.0).collect();
        let t = ConjugateTable::new(xs, fs, 60.0, 512).unwrap();
        for y in [0.0, 0.01, 1.0, 17.3, 59.0] {
            assert!((t.eval(y).unwrap() - y * y / 2.0).abs() < 1e-9, "y={y}");
        }
        assert!(t.eval(70.0).is_none());
    }

    #[test]
    fn linear_phi_conjugate_vanishes_then_stops() {
        let xs: Vec<f64> = (0..=100).map(|i| i as f64 / 10.0).collect();
        let fs: Vec<f64> = xs.iter().map(|x| 2.0 * x).collect();
        let t = ConjugateTable::new(xs, fs, 4.0, 16).unwrap();
        assert_eq!(t.eval(1.5), Some(0.0));
        assert_eq!(t.eval(2.0), Some(0.0));
        assert!(t.eval(2.5).is_none());
    }

    #[test]
    fn rejects_concave_samples() {
        let xs: Vec<f64> = (0..=10).map(|i| i as f64).collect();
        let fs: Vec<f64> = xs.iter().map(|x: &f64| x.sqrt()).collect();
        assert!(matches!(ConjugateTable::new(xs, fs, 1.0, 4), Err(Error::NonConvex { .. })));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let xs: Vec<f64> = (0..=10).map(|i| i as f64).collect();
        let fs: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let t = ConjugateTable::new(xs, fs, 40.0, 4).unwrap();
        let csv = t.to_csv().unwrap();
        assert!(csv.starts_with("y,phi_star\n"));
        assert_eq!(csv.lines().count(), 6);
    }
}
