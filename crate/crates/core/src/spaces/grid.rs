//! Uniform sample grids on `[-T, T)^n` and finitely supported lattice data.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Left-endpoint samples `x_i = -T + i h`, `N = 2T/h` per axis, stored
/// row-major with the first coordinate varying slowest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    dim: usize,
    half_width: i64,
    h: f64,
}

fn integral(v: f64) -> Option<i64> {
    let r = v.round();
    ((v - r).abs() <= 1e-9 * v.abs().max(1.0) && r >= 1.0).then_some(r as i64)
}

impl GridSpec {
    pub fn new(dim: usize, half_width: f64, h: f64) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidInput(format!("grid dimension {dim} (1 or 2 supported)")));
        }
        if !(h > 0.0 && h <= 1.0) {
            return Err(Error::Misaligned(format!("step {h} must lie in (0, 1]")));
        }
        let t = integral(half_width).ok_or_else(|| Error::Misaligned(format!("T = {half_width} is not a positive integer")))?;
        integral(1.0 / h).ok_or_else(|| Error::Misaligned(format!("1/h = {} is not an integer", 1.0 / h)))?;
        integral(half_width / h).ok_or_else(|| Error::Misaligned(format!("T/h = {} is not an integer", half_width / h)))?;
        Ok(GridSpec { dim, half_width: t, h })
    }

    /// `n = 1`: `T = 32, h = 2^-6`; `n = 2`: `T = 16, h = 2^-4`.
    pub fn default_for(dim: usize) -> Result<Self> {
        match dim {
            1 => GridSpec::new(1, 32.0, 0.015625),
            2 => GridSpec::new(2, 16.0, 0.0625),
            _ => Err(Error::InvalidInput(format!("no default grid for dimension {dim}"))),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> i64 {
        self.half_width
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Samples per unit length.
    pub fn per_unit(&self) -> usize {
        (1.0 / self.h).round() as usize
    }

    /// Samples per axis.
    pub fn side(&self) -> usize {
        2 * self.half_width as usize * self.per_unit()
    }

    pub fn len(&self) -> usize {
        self.side().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Axis coordinates.
    pub fn axis(&self) -> Vec<f64> {
        (0..self.side()).map(|i| -(self.half_width as f64) + i as f64 * self.h).collect()
    }

    pub fn point(&self, idx: usize) -> Vec<f64> {
        let side = self.side();
        let mut out = vec![0.0; self.dim];
        let mut rem = idx;
        for d in (0..self.dim).rev() {
            out[d] = -(self.half_width as f64) + (rem % side) as f64 * self.h;
            rem /= side;
        }
        out
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// `h^n`, exact for dyadic steps.
    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    /// Unit cells `j + [0,1)^n`, `j ∈ [-T, T-1]^n`, in row-major order; each
    /// entry lists the sample indices of the cell in row-major order.
    pub fn cells(&self) -> Vec<(Vec<i64>, Vec<usize>)> {
        let t = self.half_width;
        let per = self.per_unit();
        let side = self.side();
        let cells_per_axis = (2 * t) as usize;
        let count = cells_per_axis.pow(self.dim as u32);
        let mut out = Vec::with_capacity(count);
        for c in 0..count {
            let mut j = vec![0i64; self.dim];
            let mut rem = c;
            for d in (0..self.dim).rev() {
                j[d] = (rem % cells_per_axis) as i64 - t;
                rem /= cells_per_axis;
            }
            let base: Vec<usize> = j.iter().map(|v| ((v + t) as usize) * per).collect();
            let mut idx = Vec::with_capacity(per.pow(self.dim as u32));
            match self.dim {
                1 => idx.extend(base[0]..base[0] + per),
                _ => {
                    for a in 0..per {
                        for b in 0..per {
                            idx.push((base[0] + a) * side + base[1] + b);
                        }
                    }
                }
            }
            out.push((j, idx));
        }
        out
    }

    /// Indices of the samples within distance 1 of the boundary of the box.
    pub fn outer_shell(&self) -> Vec<usize> {
        let t = self.half_width as f64;
        (0..self.len())
            .filter(|&i| self.point(i).iter().any(|x| *x < -t + 1.0 || *x >= t - 1.0))
            .collect()
    }

    /// Sample index of the lattice point `j` (which is always a grid point).
    pub fn lattice_index(&self, j: &[i64]) -> Option<usize> {
        if j.len() != self.dim || j.iter().any(|v| *v < -self.half_width || *v >= self.half_width) {
            return None;
        }
        let side = self.side();
        let per = self.per_unit();
        Some(j.iter().fold(0, |acc, v| acc * side + ((v + self.half_width) as usize) * per))
    }
}

/// Complex lattice data `c_j`, `j ∈ [-J, J]^n`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceData {
    dim: usize,
    radius: i64,
    values: Vec<Complex64>,
}

impl SequenceData {
    pub fn zeros(dim: usize, radius: i64) -> Self {
        let side = (2 * radius + 1) as usize;
        SequenceData { dim, radius, values: vec![Complex64::new(0.0, 0.0); side.pow(dim as u32)] }
    }

    pub fn from_values(dim: usize, radius: i64, values: Vec<Complex64>) -> Result<Self> {
        let side = (2 * radius + 1) as usize;
        if values.len() != side.pow(dim as u32) {
            return Err(Error::InvalidInput(format!("expected {} values, got {}", side.pow(dim as u32), values.len())));
        }
        Ok(SequenceData { dim, radius, values })
    }

    /// `δ_k`.
    pub fn delta(dim: usize, radius: i64, k: &[i64]) -> Result<Self> {
        let mut s = SequenceData::zeros(dim, radius);
        s.set(k, Complex64::new(1.0, 0.0))?;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    fn offset(&self, j: &[i64]) -> Option<usize> {
        if j.len() != self.dim || j.iter().any(|v| v.abs() > self.radius) {
            return None;
        }
        let side = (2 * self.radius + 1) as usize;
        Some(j.iter().fold(0, |acc, v| acc * side + (v + self.radius) as usize))
    }

    pub fn get(&self, j: &[i64]) -> Complex64 {
        self.offset(j).map(|o| self.values[o]).unwrap_or_default()
    }

    pub fn set(&mut self, j: &[i64], v: Complex64) -> Result<()> {
        let o = self.offset(j).ok_or_else(|| Error::SupportOverflow(format!("{j:?} outside radius {}", self.radius)))?;
        self.values[o] = v;
        Ok(())
    }

    pub fn index(&self, o: usize) -> Vec<i64> {
        let side = (2 * self.radius + 1) as usize;
        let mut out = vec![0; self.dim];
        let mut rem = o;
        for d in (0..self.dim).rev() {
            out[d] = (rem % side) as i64 - self.radius;
            rem /= side;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<i64>, Complex64)> + '_ {
        self.values.iter().enumerate().map(|(o, v)| (self.index(o), *v))
    }

    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|v| v.norm() != 0.0).count()
    }

    /// `‖c‖_{ℓ^p}` summed in row-major order; `p = ∞` is the maximum.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        }
        let mut total = 0.0;
        for v in &self.values {
            let a = v.norm();
            total += if p == 1.0 {
                a
            } else if p == 2.0 {
                a * a
            } else {
                a.powf(p)
            };
        }
        finish_power(total, p)
    }
}

pub(crate) fn finish_power(total: f64, p: f64) -> f64 {
    if p == 1.0 {
        total
    } else if p == 2.0 {
        total.sqrt()
    } else {
        total.powf(1.0 / p)
    }
}
