//! Test functions with closed-form derivatives of every order.
//!
//! A [`Profile`] is a function of one real variable; a [`TestFunction`] is a
//! tensor product of profiles, one per coordinate. Derivatives are computed
//! from recurrences or exact formulas and returned as [`Scaled`] values.

use crate::error::{Error, Result};
use crate::numeric::{binomial_row, gauss_legendre, Scaled};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Polynomial `Σ c_k x^k` on `[a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyPiece {
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Zero,
    /// `e^{-a x^2}`.
    Gaussian { a: f64 },
    /// `sin(πx)/(πx)`.
    Sinc,
    /// `e^{iωx}`.
    Phase { omega: f64 },
    /// `Σ c_k e^{2πikx}`.
    Trig { terms: Vec<(i64, Complex64)> },
    /// Piecewise polynomial, zero outside the pieces.
    Piecewise { pieces: Vec<PolyPiece> },
    Product(Box<Profile>, Box<Profile>),
    Sum(Vec<Profile>),
    Scale { f: Box<Profile>, c: Complex64 },
    /// `f(x - shift)`.
    Translate { f: Box<Profile>, shift: f64 },
    /// `Σ_{|j| <= radius} f(x - j)`.
    LatticeSum { f: Box<Profile>, radius: i64 },
    /// `∫_0^1 f(x - t) dt`.
    CellAverage { f: Box<Profile> },
    /// `∫ f(x - t) k(t) dt` with `k` supported in `[breaks[0], breaks[last]]`
    /// and smooth between consecutive breaks.
    Convolve { f: Box<Profile>, kernel: Box<Profile>, breaks: Vec<f64> },
    /// `1_{[a, b)}`; no derivatives.
    Indicator { a: f64, b: f64 },
    /// Complex conjugate.
    Conj(Box<Profile>),
}

const GL_ORDER: usize = 16;

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * x + v)
}

fn poly_diff(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, v)| k as f64 * v).collect()
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of `p(αx + β)`.
fn poly_compose_linear(p: &[f64], alpha: f64, beta: f64) -> Vec<f64> {
    let mut out = vec![0.0; p.len()];
    let mut power = vec![1.0];
    for c in p {
        for (k, v) in power.iter().enumerate() {
            out[k] += c * v;
        }
        power = poly_mul(&power, &[beta, alpha]);
    }
    out
}

/// `I_q(z) = ∫_0^1 t^q e^{izt} dt` for `q <= q_max`: upward recurrence while
/// `q <= |z|`, downward from well above `max(q_max, |z|)` beyond.
pub(crate) fn unit_moments(z: f64, q_max: usize) -> Vec<Complex64> {
    let e = Complex64::new(z.cos(), z.sin());
    let iz = Complex64::new(0.0, z);
    let mut out = vec![Complex64::new(0.0, 0.0); q_max + 1];
    let mut lo = 0;
    if z.abs() >= 1.0 {
        let m = (z.abs().floor() as usize).min(q_max);
        out[0] = (e - 1.0) / iz;
        for q in 1..=m {
            out[q] = (e - out[q - 1] * q as f64) / iz;
        }
        lo = m + 1;
    }
    if lo <= q_max {
        let n = 2 * q_max.max(z.abs().ceil() as usize) + 60;
        let mut cur = e / (n + 1) as f64;
        for q in (lo + 1..=n).rev() {
            let prev = (e - iz * cur) / q as f64;
            if q - 1 <= q_max {
                out[q - 1] = prev;
            }
            cur = prev;
        }
    }
    out
}

impl Profile {
    pub fn gaussian(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidFunction(format!("gaussian needs a > 0, got {a}")));
        }
        Ok(Profile::Gaussian { a })
    }

    /// `x^k e^{-a x^2}`.
    pub fn gauss_mono(a: f64, k: usize) -> Result<Self> {
        Ok(Profile::monomial(k).times(Profile::gaussian(a)?))
    }

    /// `e^{-iπx} sin(πx)/(πx) = ∫_0^1 e^{-2πiξx} dξ`.
    pub fn sinc_window() -> Self {
        Profile::Phase { omega: -PI }.times(Profile::Sinc)
    }

    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Profile::polynomial(coeffs)
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Profile::Piecewise { pieces: vec![PolyPiece { a: f64::NEG_INFINITY, b: f64::INFINITY, coeffs }] }
    }

    /// `(1 - (x/r)^2)^deg` on `|x| < r`.
    pub fn bump(deg: usize, r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) || deg == 0 {
            return Err(Error::InvalidFunction(format!("bump needs deg >= 1 and r > 0, got deg={deg}, r={r}")));
        }
        let row = binomial_row(deg);
        let mut coeffs = vec![0.0; 2 * deg + 1];
        for (k, b) in row.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[2 * k] = sign * b / r.powi(2 * k as i32);
        }
        Ok(Profile::Piecewise { pieces: vec![PolyPiece { a: -r, b: r, coeffs }] })
    }

    /// `1` on `|x| <= inner`, quintic smoothstep down to `0` at `|x| = outer`.
    pub fn cutoff(inner: f64, outer: f64) -> Result<Self> {
        if !(0.0 < inner && inner < outer) {
            return Err(Error::InvalidFunction(format!("cutoff needs 0 < inner < outer, got {inner}, {outer}")));
        }
        let step = [0.0, 0.0, 0.0, 10.0, -15.0, 6.0];
        let w = outer - inner;
        Ok(Profile::Piecewise {
            pieces: vec![
                PolyPiece { a: -outer, b: -inner, coeffs: poly_compose_linear(&step, 1.0 / w, outer / w) },
                PolyPiece { a: -inner, b: inner, coeffs: vec![1.0] },
                PolyPiece { a: inner, b: outer, coeffs: poly_compose_linear(&step, -1.0 / w, outer / w) },
            ],
        })
    }

    /// `|x| / 2`.
    pub fn half_abs() -> Self {
        Profile::Piecewise {
            pieces: vec![
                PolyPiece { a: f64::NEG_INFINITY, b: 0.0, coeffs: vec![0.0, -0.5] },
                PolyPiece { a: 0.0, b: f64::INFINITY, coeffs: vec![0.0, 0.5] },
            ],
        }
    }

    /// `sgn(x) / 2`, the derivative of [`Profile::half_abs`] away from 0.
    pub fn half_sign() -> Self {
        Profile::Piecewise {
            pieces: vec![
                PolyPiece { a: f64::NEG_INFINITY, b: 0.0, coeffs: vec![-0.5] },
                PolyPiece { a: 0.0, b: f64::INFINITY, coeffs: vec![0.5] },
            ],
        }
    }

    pub fn trig(terms: Vec<(i64, Complex64)>) -> Self {
        Profile::Trig { terms }
    }

    pub fn times(self, other: Profile) -> Self {
        Profile::Product(Box::new(self), Box::new(other))
    }

    pub fn scaled(self, c: Complex64) -> Self {
        Profile::Scale { f: Box::new(self), c }
    }

    pub fn shifted(self, shift: f64) -> Self {
        Profile::Translate { f: Box::new(self), shift }
    }

    /// Whether derivatives of every order are available.
    pub fn has_derivatives(&self) -> bool {
        match self {
            Profile::Indicator { .. } => false,
            Profile::Product(a, b) => a.has_derivatives() && b.has_derivatives(),
            Profile::Sum(v) => v.iter().all(|p| p.has_derivatives()),
            Profile::Scale { f, .. }
            | Profile::Translate { f, .. }
            | Profile::LatticeSum { f, .. }
            | Profile::CellAverage { f } => f.has_derivatives(),
            Profile::Conj(f) => f.has_derivatives(),
            Profile::Convolve { f, .. } => f.has_derivatives(),
            _ => true,
        }
    }

    pub fn value(&self, x: f64) -> Result<Complex64> {
        Ok(self.derivs(0, x)?[0].value())
    }

    /// `f^{(q)}(x)` for `q = 0..=q_max`.
    pub fn derivs(&self, q_max: usize, x: f64) -> Result<Vec<Scaled>> {
        let zero = || vec![Scaled::ZERO; q_max + 1];
        Ok(match self {
            Profile::Zero => zero(),
            Profile::Gaussian { a } => {
                let y = a.sqrt() * x;
                let base = -a * x * x;
                let half_ln_a = 0.5 * a.ln();
                let mut out = Vec::with_capacity(q_max + 1);
                out.push(Scaled::new(Complex64::new(1.0, 0.0), base));
                let (mut h0, mut h1, mut acc) = (1.0f64, 2.0 * y, 0.0);
                for q in 1..=q_max {
                    let sign = if q % 2 == 1 { -1.0 } else { 1.0 };
                    out.push(Scaled::new(Complex64::new(sign * h1, 0.0), acc + q as f64 * half_ln_a + base));
                    let h2 = 2.0 * y * h1 - 2.0 * q as f64 * h0;
                    h0 = h1;
                    h1 = h2;
                    if h1.abs() > 1e200 {
                        h0 *= 1e-200;
                        h1 *= 1e-200;
                        acc += 200.0 * std::f64::consts::LN_10;
                    }
                }
                out
            }
            Profile::Sinc => {
                let moments = unit_moments(PI * x, q_max);
                let ipi = Complex64::new(0.0, 1.0);
                let mut rot = Complex64::new(1.0, 0.0);
                let mut out = Vec::with_capacity(q_max + 1);
                for (q, m) in moments.iter().enumerate() {
                    let inner = if q % 2 == 0 { Complex64::new(m.re, 0.0) } else { Complex64::new(0.0, m.im) };
                    out.push(Scaled::new(rot * inner, q as f64 * PI.ln()));
                    rot *= ipi;
                }
                out
            }
            Profile::Phase { omega } => {
                let e = Complex64::new((omega * x).cos(), (omega * x).sin());
                if *omega == 0.0 {
                    let mut out = zero();
                    out[0] = Scaled::complex(e);
                    return Ok(out);
                }
                let step = Complex64::new(0.0, omega.signum());
                let mut rot = e;
                let mut out = Vec::with_capacity(q_max + 1);
                for q in 0..=q_max {
                    out.push(Scaled::new(rot, q as f64 * omega.abs().ln()));
                    rot *= step;
                }
                out
            }
            Profile::Trig { terms } => {
                let kmax = terms.iter().map(|(k, _)| k.unsigned_abs()).max().unwrap_or(0);
                let mut out = zero();
                if kmax == 0 {
                    out[0] = Scaled::complex(terms.iter().map(|(_, c)| *c).sum());
                    return Ok(out);
                }
                let ln_unit = (2.0 * PI * kmax as f64).ln();
                for (q, slot) in out.iter_mut().enumerate() {
                    let mut v = Complex64::new(0.0, 0.0);
                    for (k, c) in terms {
                        let arg = 2.0 * PI * *k as f64 * x;
                        let r = *k as f64 / kmax as f64;
                        v += c * Complex64::new(0.0, r).powu(q as u32) * Complex64::new(arg.cos(), arg.sin());
                    }
                    *slot = Scaled::new(v, q as f64 * ln_unit);
                }
                out
            }
            Profile::Piecewise { pieces } => {
                let mut out = zero();
                if let Some(p) = pieces.iter().find(|p| p.a <= x && x < p.b) {
                    let mut c = p.coeffs.clone();
                    for slot in out.iter_mut() {
                        if c.is_empty() {
                            break;
                        }
                        *slot = Scaled::real(poly_eval(&c, x));
                        c = poly_diff(&c);
                    }
                }
                out
            }
            Profile::Product(f, g) => {
                let (a, b) = (f.derivs(q_max, x)?, g.derivs(q_max, x)?);
                let mut out = Vec::with_capacity(q_max + 1);
                for q in 0..=q_max {
                    let row = binomial_row(q);
                    let mut acc = Scaled::ZERO;
                    for j in 0..=q {
                        acc = acc + (a[j] * b[q - j]).scale(row[j]);
                    }
                    out.push(acc);
                }
                out
            }
            Profile::Sum(parts) => {
                let mut out = zero();
                for p in parts {
                    for (o, v) in out.iter_mut().zip(p.derivs(q_max, x)?) {
                        *o = *o + v;
                    }
                }
                out
            }
            Profile::Scale { f, c } => f.derivs(q_max, x)?.into_iter().map(|v| v.scale_c(*c)).collect(),
            Profile::Translate { f, shift } => f.derivs(q_max, x - shift)?,
            Profile::Conj(f) => f.derivs(q_max, x)?.into_iter().map(|v| Scaled::new(v.v.conj(), v.ln_scale)).collect(),
            Profile::LatticeSum { f, radius } => {
                let mut out = zero();
                for j in -radius..=*radius {
                    for (o, v) in out.iter_mut().zip(f.derivs(q_max, x - j as f64)?) {
                        *o = *o + v;
                    }
                }
                out
            }
            Profile::CellAverage { f } => {
                let mut out = zero();
                let (nodes, weights) = gauss_legendre(GL_ORDER);
                let pieces = 8;
                let width = 1.0 / pieces as f64;
                let mut acc = Scaled::ZERO;
                for p in 0..pieces {
                    let mid = (p as f64 + 0.5) * width;
                    for (t, w) in nodes.iter().zip(&weights) {
                        acc = acc + f.derivs(0, x - mid - 0.5 * width * t)?[0].scale(0.5 * width * w);
                    }
                }
                out[0] = acc;
                if q_max >= 1 {
                    let (here, there) = (f.derivs(q_max - 1, x)?, f.derivs(q_max - 1, x - 1.0)?);
                    for q in 1..=q_max {
                        out[q] = here[q - 1] + there[q - 1].scale(-1.0);
                    }
                }
                out
            }
            Profile::Convolve { f, kernel, breaks } => {
                let mut out = zero();
                let (nodes, weights) = gauss_legendre(GL_ORDER);
                for seg in breaks.windows(2) {
                    let pieces = ((seg[1] - seg[0]) / 0.125).ceil().max(1.0) as usize;
                    let width = (seg[1] - seg[0]) / pieces as f64;
                    for p in 0..pieces {
                        let mid = seg[0] + (p as f64 + 0.5) * width;
                        for (t, w) in nodes.iter().zip(&weights) {
                            let s = mid + 0.5 * width * t;
                            let k = kernel.derivs(0, s)?[0].scale(0.5 * width * w);
                            if k.is_zero() {
                                continue;
                            }
                            for (o, v) in out.iter_mut().zip(f.derivs(q_max, x - s)?) {
                                *o = *o + v * k;
                            }
                        }
                    }
                }
                out
            }
            Profile::Indicator { a, b } => {
                if q_max > 0 {
                    return Err(Error::MissingDerivatives);
                }
                vec![Scaled::real(if *a <= x && x < *b { 1.0 } else { 0.0 })]
            }
        })
    }

    pub fn describe(&self) -> String {
        match self {
            Profile::Zero => "0".into(),
            Profile::Gaussian { a } => format!("gaussian(a={a})"),
            Profile::Sinc => "sinc".into(),
            Profile::Phase { omega } => format!("phase({omega})"),
            Profile::Trig { terms } => {
                let t: Vec<String> = terms.iter().map(|(k, c)| format!("({k},{}{:+}i)", c.re, c.im)).collect();
                format!("trig:[{}]", t.join(","))
            }
            Profile::Piecewise { pieces } => format!("piecewise({} pieces)", pieces.len()),
            Profile::Product(a, b) => format!("({})*({})", a.describe(), b.describe()),
            Profile::Sum(v) => v.iter().map(|p| p.describe()).collect::<Vec<_>>().join("+"),
            Profile::Scale { f, c } => format!("({}{:+}i)*{}", c.re, c.im, f.describe()),
            Profile::Translate { f, shift } => format!("{}(x-{shift})", f.describe()),
            Profile::LatticeSum { f, radius } => format!("periodized[{radius}]({})", f.describe()),
            Profile::CellAverage { f } => format!("cellavg({})", f.describe()),
            Profile::Convolve { f, kernel, .. } => format!("({})*conv({})", f.describe(), kernel.describe()),
            Profile::Indicator { a, b } => format!("1[{a},{b})"),
            Profile::Conj(f) => format!("conj({})", f.describe()),
        }
    }
}

/// `f(x) = Π_d f_d(x_d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    factors: Vec<Profile>,
    label: String,
}

impl TestFunction {
    pub fn new(factors: Vec<Profile>, label: impl Into<String>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidFunction("test function needs at least one factor".into()));
        }
        Ok(TestFunction { factors, label: label.into() })
    }

    pub fn one_d(p: Profile) -> Self {
        let label = p.describe();
        TestFunction { factors: vec![p], label }
    }

    /// `e^{-a|x|^2}` in `dim` variables.
    pub fn gaussian(dim: usize, a: f64) -> Result<Self> {
        TestFunction::new(vec![Profile::gaussian(a)?; dim], format!("gaussian(a={a})"))
    }

    pub fn zero(dim: usize) -> Self {
        TestFunction { factors: vec![Profile::Zero; dim], label: "0".into() }
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Profile] {
        &self.factors
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_zero(&self) -> bool {
        self.factors.iter().any(|p| matches!(p, Profile::Zero))
    }

    pub fn has_derivatives(&self) -> bool {
        self.factors.iter().all(|p| p.has_derivatives())
    }

    pub fn value(&self, x: &[f64]) -> Result<Complex64> {
        self.derivative(&vec![0; self.dim()], x).map(|v| v.value())
    }

    pub fn derivative(&self, alpha: &[usize], x: &[f64]) -> Result<Scaled> {
        if alpha.len() != self.dim() || x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        let mut acc = Scaled::real(1.0);
        for ((p, a), xi) in self.factors.iter().zip(alpha).zip(x) {
            acc = acc * p.derivs(*a, *xi)?[*a];
        }
        Ok(acc)
    }

    /// `table[d][i][q] = f_d^{(q)}(axis[i])`.
    pub fn axis_tables(&self, axis: &[f64], q_max: usize) -> Result<Vec<Vec<Vec<Scaled>>>> {
        self.factors.iter().map(|p| axis.iter().map(|x| p.derivs(q_max, *x)).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn gaussian_derivatives_match_hermite_closed_forms() {
        let g = Profile::gaussian(1.0).unwrap();
        for x in [-2.0, -0.3, 0.0, 0.7, 3.1] {
            let d = g.derivs(3, x).unwrap();
            let e = (-x * x as f64).exp();
            assert!((d[0].value().re - e).abs() < 1e-15);
            assert!((d[1].value().re + 2.0 * x * e).abs() < 1e-14);
            assert!((d[2].value().re - (4.0 * x * x - 2.0) * e).abs() < 1e-14);
            assert!((d[3].value().re - (-8.0 * x.powi(3) + 12.0 * x) * e).abs() < 1e-13);
        }
        // far out the value underflows f64 but the log stays finite
        let far = g.derivs(64, 40.0).unwrap();
        assert!(far[64].ln_abs().is_finite());
    }

    #[test]
    fn sinc_derivatives_match_direct_formulas() {
        for x in [-7.3, -1.0, -0.2, 0.0, 0.4, 2.5, 31.9] {
            let d = Profile::Sinc.derivs(2, x).unwrap();
            let z = PI * x;
            let (v, d1, d2) = if x == 0.0 {
                (1.0, 0.0, -PI * PI / 3.0)
            } else {
                let (s, c) = (z.sin(), z.cos());
                (s / z, PI * (c / z - s / (z * z)), PI * PI * (-s / z - 2.0 * c / (z * z) + 2.0 * s / z.powi(3)))
            };
            assert!((d[0].value().re - v).abs() < 1e-13, "{x}");
            assert!((d[1].value().re - d1).abs() < 1e-12, "{x}");
            assert!((d[2].value().re - d2).abs() < 1e-11, "{x}");
            assert!(d[1].value().im.abs() < 1e-14);
        }
        assert!(Profile::Sinc.value(3.0).unwrap().norm() < 1e-15);
    }

    #[test]
    fn unit_moments_agree_with_quadrature() {
        for z in [0.0, 0.5, 3.0, 40.0, 120.0] {
            let m = unit_moments(z, 50);
            for q in [0usize, 1, 7, 30, 50] {
                let direct = crate::numeric::integrate_gl(
                    |t| Complex64::new(0.0, z * t).exp() * t.powi(q as i32),
                    0.0,
                    1.0,
                    64,
                    16,
                );
                assert!(close(m[q], direct, 1e-11), "z={z} q={q}: {} vs {}", m[q], direct);
            }
        }
    }

    #[test]
    fn sinc_window_is_a_unit_cell_fourier_integral() {
        let w = Profile::sinc_window();
        for x in [-2.5, 0.0, 0.5, 1.0, 3.7] {
            let direct =
                crate::numeric::integrate_gl(|xi| Complex64::new(0.0, -2.0 * PI * xi * x).exp(), 0.0, 1.0, 16, 16);
            assert!(close(w.value(x).unwrap(), direct, 1e-13), "{x}");
            let d1 = crate::numeric::integrate_gl(
                |xi| Complex64::new(0.0, -2.0 * PI * xi) * Complex64::new(0.0, -2.0 * PI * xi * x).exp(),
                0.0,
                1.0,
                16,
                16,
            );
            assert!(close(w.derivs(1, x).unwrap()[1].value(), d1, 1e-12), "{x}");
        }
        assert!((w.value(0.5).unwrap().norm() - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn piecewise_polynomials() {
        let b = Profile::bump(2, 2.0).unwrap();
        let x: f64 = 0.8;
        let d = b.derivs(5, x).unwrap();
        let u = 1.0 - x * x / 4.0;
        assert!((d[0].value().re - u * u).abs() < 1e-15);
        assert!((d[1].value().re - 2.0 * u * (-x / 2.0)).abs() < 1e-15);
        assert!(d[5].is_zero());
        assert!(b.value(2.0).unwrap().norm() == 0.0);
        let c = Profile::cutoff(0.5, 1.0).unwrap();
        assert_eq!(c.value(0.2).unwrap().re, 1.0);
        assert!((c.value(0.75).unwrap().re - 0.5).abs() < 1e-15);
        assert!(c.value(-0.999999).unwrap().re.abs() < 1e-12);
        for edge in [0.5, 1.0] {
            let l = c.derivs(2, edge - 1e-12).unwrap();
            let r = c.derivs(2, edge + 1e-12).unwrap();
            for q in 0..=2 {
                assert!((l[q].value() - r[q].value()).norm() < 1e-6, "edge {edge} order {q}");
            }
        }
    }

    #[test]
    fn trig_and_products() {
        let t = Profile::trig(vec![(2, Complex64::new(1.0, 0.0)), (-1, Complex64::new(0.0, 0.5))]);
        let x = 0.3;
        let d = t.derivs(2, x).unwrap();
        let e = |k: f64| Complex64::new(0.0, 2.0 * PI * k * x).exp();
        let want = Complex64::new(0.0, 4.0 * PI).powu(2) * e(2.0)
            + Complex64::new(0.0, 0.5) * Complex64::new(0.0, -2.0 * PI).powu(2) * e(-1.0);
        assert!(close(d[2].value(), want, 1e-13));
        let p = Profile::gauss_mono(1.0, 1).unwrap();
        let v = p.derivs(1, x).unwrap()[1].value().re;
        assert!((v - (1.0 - 2.0 * x * x) * (-x * x).exp()).abs() < 1e-15);
    }

    #[test]
    fn cell_average_and_convolution() {
        let g = Profile::gaussian(2.0).unwrap().scaled(Complex64::new((2.0 / PI).sqrt(), 0.0));
        let avg = Profile::CellAverage { f: Box::new(g.clone()) };
        let x = 0.3;
        let s = 2f64.sqrt();
        let want = 0.5 * (statrs::function::erf::erf(s * x) - statrs::function::erf::erf(s * (x - 1.0)));
        let got = avg.value(x).unwrap().re;
        // statrs erf is good to about 1e-11 here
        assert!((got - want).abs() < 1e-11, "{got} vs {want}");
        let d1 = avg.derivs(1, x).unwrap()[1].value().re;
        assert!((d1 - (g.value(x).unwrap().re - g.value(x - 1.0).unwrap().re)).abs() < 1e-15);
        let conv = Profile::Convolve {
            f: Box::new(Profile::polynomial(vec![0.0, 0.0, 1.0])),
            kernel: Box::new(Profile::Indicator { a: 0.0, b: 1.0 }),
            breaks: vec![0.0, 1.0],
        };
        // ∫_0^1 (x - t)^2 dt = x^2 - x + 1/3
        let d = conv.derivs(2, x).unwrap();
        assert!((d[0].value().re - (x * x - x + 1.0 / 3.0)).abs() < 1e-14);
        assert!((d[1].value().re - (2.0 * x - 1.0)).abs() < 1e-14);
        assert!((d[2].value().re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn indicator_has_no_derivatives() {
        let i = Profile::Indicator { a: 0.0, b: 1.0 };
        assert!(!i.has_derivatives());
        assert_eq!(i.derivs(1, 0.5), Err(Error::MissingDerivatives));
        assert_eq!(i.value(0.5).unwrap().re, 1.0);
    }

    #[test]
    fn tensor_products() {
        let f = TestFunction::gaussian(2, 1.0).unwrap();
        let x = [0.3, -0.4];
        let d = f.derivative(&[1, 1], &x).unwrap().value().re;
        assert!((d - 4.0 * x[0] * x[1] * (-(x[0] * x[0] + x[1] * x[1])).exp()).abs() < 1e-15);
    }
}
