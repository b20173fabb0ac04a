//! Small numerical helpers: log-space arithmetic, quadrature rules, and a
//! scaled complex number used for derivatives whose magnitude spans hundreds
//! of orders.

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;
use std::ops::{Add, Mul};

pub fn ln_factorial(q: f64) -> f64 {
    if q < 1.5 {
        0.0
    } else {
        ln_gamma(q + 1.0)
    }
}

pub fn ln_binomial(n: usize, k: usize) -> f64 {
    ln_factorial(n as f64) - ln_factorial(k as f64) - ln_factorial((n - k) as f64)
}

/// Binomial coefficients as floats (exact up to n = 56 or so, fine beyond).
pub fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for k in 1..n {
        row[k] = row[k - 1] * (n + 1 - k) as f64 / k as f64;
        row[k] = row[k].round();
    }
    row
}

/// `ln(sum exp(v))`, returning `-inf` for an empty or all `-inf` input.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY || m.is_nan() {
        return m;
    }
    if m == f64::INFINITY {
        return m;
    }
    m + values.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// `⟨x⟩ = (1 + |x|^2)^{1/2}`.
pub fn japanese(x: &[f64]) -> f64 {
    (1.0 + x.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

/// `(n+1)^{(n+1)/2} * sum_{|k|_inf <= radius} ⟨k⟩^{-(n+1)}`.
pub fn lattice_constant(n: usize, radius: i64) -> f64 {
    let e = (n + 1) as f64;
    let mut total = 0.0;
    let side = (2 * radius + 1) as usize;
    let count = side.pow(n as u32);
    let mut k = vec![0f64; n];
    for idx in 0..count {
        let mut rem = idx;
        for slot in k.iter_mut() {
            *slot = (rem % side) as f64 - radius as f64;
            rem /= side;
        }
        total += japanese(&k).powf(-e);
    }
    e.powf(e / 2.0) * total
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre on `[a, b]` split into `pieces` equal intervals.
pub fn integrate_gl<F: FnMut(f64) -> Complex64>(mut f: F, a: f64, b: f64, pieces: usize, order: usize) -> Complex64 {
    let (nodes, weights) = gauss_legendre(order);
    let width = (b - a) / pieces as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..pieces {
        let lo = a + p as f64 * width;
        let mid = lo + 0.5 * width;
        for (x, w) in nodes.iter().zip(&weights) {
            total += f(mid + 0.5 * width * x) * (0.5 * width * w);
        }
    }
    total
}

/// Composite Simpson on `[a, b]` with step close to `h` (even number of
/// sub-intervals).
pub fn simpson<F: FnMut(f64) -> Complex64>(mut f: F, a: f64, b: f64, h: f64) -> Complex64 {
    let mut m = ((b - a) / h).round() as usize;
    if m < 2 {
        m = 2;
    }
    if m % 2 == 1 {
        m += 1;
    }
    let step = (b - a) / m as f64;
    let mut total = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        total += f(a + i as f64 * step) * w;
    }
    total * (step / 3.0)
}

/// Composite Boole rule on `[a, b]` with step close to `h` (sub-interval
/// count a multiple of 4).
pub fn boole<F: FnMut(f64) -> Complex64>(mut f: F, a: f64, b: f64, h: f64) -> Complex64 {
    let mut m = ((b - a) / h).round() as usize;
    m = m.max(4);
    m += (4 - m % 4) % 4;
    let step = (b - a) / m as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..=m {
        let w = match i % 4 {
            _ if i == 0 || i == m => 7.0,
            0 => 14.0,
            2 => 12.0,
            _ => 32.0,
        };
        total += f(a + i as f64 * step) * w;
    }
    total * (2.0 * step / 45.0)
}

/// Complex value `v * exp(ln_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub v: Complex64,
    pub ln_scale: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { v: Complex64 { re: 0.0, im: 0.0 }, ln_scale: 0.0 };

    pub fn new(v: Complex64, ln_scale: f64) -> Self {
        Scaled { v, ln_scale }.normalized()
    }

    pub fn real(v: f64) -> Self {
        Scaled { v: Complex64::new(v, 0.0), ln_scale: 0.0 }
    }

    pub fn complex(v: Complex64) -> Self {
        Scaled { v, ln_scale: 0.0 }
    }

    pub fn is_zero(&self) -> bool {
        self.v.re == 0.0 && self.v.im == 0.0
    }

    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.v.norm().ln() + self.ln_scale
        }
    }

    /// Plain value; underflows to zero or overflows to infinity as f64 does.
    pub fn value(&self) -> Complex64 {
        if self.is_zero() {
            return self.v;
        }
        self.v * self.ln_scale.exp()
    }

    pub fn scale(self, c: f64) -> Self {
        Scaled { v: self.v * c, ln_scale: self.ln_scale }.normalized()
    }

    pub fn scale_c(self, c: Complex64) -> Self {
        Scaled { v: self.v * c, ln_scale: self.ln_scale }.normalized()
    }

    fn normalized(self) -> Self {
        if self.is_zero() {
            return Scaled::ZERO;
        }
        let m = self.v.norm();
        if !(1e-100..=1e100).contains(&m) && m.is_finite() {
            let lm = m.ln();
            Scaled { v: self.v / m, ln_scale: self.ln_scale + lm }
        } else {
            self
        }
    }
}

impl Add for Scaled {
    type Output = Scaled;
    fn add(self, o: Scaled) -> Scaled {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (big, small) = if self.ln_scale >= o.ln_scale { (self, o) } else { (o, self) };
        let d = small.ln_scale - big.ln_scale;
        let v = if d < -745.0 { big.v } else { big.v + small.v * d.exp() };
        Scaled { v, ln_scale: big.ln_scale }.normalized()
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, o: Scaled) -> Scaled {
        if self.is_zero() || o.is_zero() {
            return Scaled::ZERO;
        }
        Scaled { v: self.v * o.v, ln_scale: self.ln_scale + o.ln_scale }.normalized()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(6);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn scaled_arithmetic_survives_extreme_magnitudes() {
        let a = Scaled::new(Complex64::new(1.0, 0.0), 2000.0);
        let b = Scaled::new(Complex64::new(2.0, 0.0), 2000.0);
        let s = a + b;
        assert!((s.ln_abs() - (3f64.ln() + 2000.0)).abs() < 1e-12);
        let p = a * Scaled::new(Complex64::new(1.0, 0.0), -2000.0);
        assert!((p.value().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lattice_constant_one_dimensional() {
        // 2 * (1 + 2 * sum 1/(1+k^2)), truncated.
        let c = lattice_constant(1, 2);
        let direct = 2.0 * (1.0 + 2.0 * (0.5 + 0.2));
        assert!((c - direct).abs() < 1e-12);
    }

    #[test]
    fn boole_is_sixth_order() {
        let f = |x: f64| Complex64::new(x.exp(), 0.0);
        let e = |h: f64| (boole(f, 0.0, 1.0, h).re - (1f64.exp() - 1.0)).abs();
        assert!((boole(|x| Complex64::new(x.powi(5), 0.0), 0.0, 2.0, 0.5).re - 64.0 / 6.0).abs() < 1e-12);
        assert!(e(0.125) / e(0.0625) > 50.0);
    }

    #[test]
    fn simpson_is_fourth_order() {
        let f = |x: f64| Complex64::new(x.powi(5), 0.0);
        let e1 = (simpson(f, 0.0, 1.0, 0.1).re - 1.0 / 6.0).abs();
        let e2 = (simpson(f, 0.0, 1.0, 0.05).re - 1.0 / 6.0).abs();
        assert!(e1 / e2 > 14.0);
    }
}
