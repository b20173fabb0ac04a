//! Functions sampled on a [`GridSpec`], with an optional closed-form source.

use super::grid::{GridSpec, SequenceData};
use super::testfn::TestFunction;
use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    /// Sampled from a closed form; derivatives come from the source.
    Closed(TestFunction),
    /// Produced by an operator from samples; no derivatives.
    Synthesized(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: GridSpec,
    samples: Vec<Complex64>,
    provenance: Provenance,
}

impl GridFunction {
    pub fn sample(grid: GridSpec, f: &TestFunction) -> Result<Self> {
        if f.dim() != grid.dim() {
            return Err(Error::DimensionMismatch { expected: grid.dim(), found: f.dim() });
        }
        let axis = grid.axis();
        let tables = f.axis_tables(&axis, 0)?;
        let side = grid.side();
        let samples = (0..grid.len())
            .map(|idx| {
                let mut rem = idx;
                let mut acc = Complex64::new(1.0, 0.0);
                for d in (0..grid.dim()).rev() {
                    acc *= tables[d][rem % side][0].value();
                    rem /= side;
                }
                acc
            })
            .collect();
        Ok(GridFunction { grid, samples, provenance: Provenance::Closed(f.clone()) })
    }

    pub fn from_samples(grid: GridSpec, samples: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidInput(format!("expected {} samples, got {}", grid.len(), samples.len())));
        }
        Ok(GridFunction { grid, samples, provenance: Provenance::Synthesized(label.into()) })
    }

    /// `Σ_j |c_j| 1_{j + [0,1)^n}`.
    pub fn tiling(grid: GridSpec, c: &SequenceData) -> Result<Self> {
        if c.dim() != grid.dim() {
            return Err(Error::DimensionMismatch { expected: grid.dim(), found: c.dim() });
        }
        if c.radius() >= grid.half_width() {
            return Err(Error::SupportOverflow(format!(
                "lattice radius {} needs a grid half-width above it (T = {})",
                c.radius(),
                grid.half_width()
            )));
        }
        let mut samples = vec![Complex64::new(0.0, 0.0); grid.len()];
        for (j, idx) in grid.cells() {
            let v = Complex64::new(c.get(&j).norm(), 0.0);
            for i in idx {
                samples[i] = v;
            }
        }
        Ok(GridFunction { grid, samples, provenance: Provenance::Synthesized("tiling".into()) })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn source(&self) -> Option<&TestFunction> {
        match &self.provenance {
            Provenance::Closed(f) => Some(f),
            Provenance::Synthesized(_) => None,
        }
    }

    /// Pointwise map; the result is synthesized.
    pub fn map(&self, label: &str, f: impl Fn(&[f64], Complex64) -> Complex64) -> GridFunction {
        let samples = self.samples.iter().enumerate().map(|(i, v)| f(&self.grid.point(i), *v)).collect();
        GridFunction { grid: self.grid, samples, provenance: Provenance::Synthesized(label.into()) }
    }

    /// `f(· - j)` for a lattice shift; samples shifted in from outside are 0.
    pub fn lattice_shift(&self, j: &[i64]) -> Result<GridFunction> {
        if j.len() != self.grid.dim() {
            return Err(Error::DimensionMismatch { expected: self.grid.dim(), found: j.len() });
        }
        let side = self.grid.side() as i64;
        let per = self.grid.per_unit() as i64;
        let mut out = vec![Complex64::new(0.0, 0.0); self.samples.len()];
        for (idx, slot) in out.iter_mut().enumerate() {
            let mut rem = idx as i64;
            let mut src = 0i64;
            let mut inside = true;
            let mut coords = vec![0i64; j.len()];
            for d in (0..j.len()).rev() {
                coords[d] = rem % side - j[d] * per;
                rem /= side;
            }
            for c in &coords {
                inside &= (0..side).contains(c);
                src = src * side + c;
            }
            if inside {
                *slot = self.samples[src as usize];
            }
        }
        Ok(GridFunction { grid: self.grid, samples: out, provenance: Provenance::Synthesized("shifted".into()) })
    }
}
