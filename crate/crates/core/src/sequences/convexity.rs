use super::WeightSequence;
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::verdict::Verdict;

/// Candidate maximizers of `t ↦ q ln t - ω_M(t)` for a one-dimensional
/// sequence given by `ln M_0, ..., ln M_Q`: the breakpoints `M_{p+1}/M_p`.
fn breakpoints(logs: &[f64]) -> Vec<f64> {
    logs.windows(2).map(|w| (w[1] - w[0]).exp()).collect()
}

fn coord_logs(m: &WeightSequence, i: usize, q_max: usize) -> Vec<f64> {
    (0..=q_max).map(|a| m.coord_ln(i, a)).collect()
}

/// `ln sup_x |x^α| / exp ω_M(x)` where the associated function uses orders up
/// to `q_max`, evaluated over the breakpoint candidates. Equals `ln M_α` when
/// `M` is log-convex; never exceeds it.
pub fn round_trip_ln(m: &WeightSequence, alpha: &MultiIndex, q_max: usize) -> Result<f64> {
    let n = m.dim();
    if alpha.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: alpha.dim() });
    }
    let mut best = f64::NEG_INFINITY;
    if alpha.order() == 0 {
        // Attained at x = 0.
        return Ok(0.0);
    }
    if m.is_isotropic() {
        let logs: Vec<f64> = (0..=q_max).map(|q| m.ln_order(q).unwrap_or(f64::INFINITY)).collect();
        let q = alpha.order() as f64;
        let mut cands = breakpoints(&logs);
        cands.push(1.0);
        for t in cands {
            let x = vec![t; n];
            let w = m.associated_function_with(&x, q_max, 0)?.value;
            best = best.max(q * t.ln() - w);
        }
        return Ok(best);
    }
    // Tensor-like: the supremum splits over coordinates, so the coordinate
    // breakpoint matching α_i is the candidate.
    let mut x = vec![0.0; n];
    for (i, &a) in alpha.components().iter().enumerate() {
        if a > 0 {
            let logs = coord_logs(m, i, a);
            x[i] = (logs[a] - logs[a - 1]).exp();
        }
    }
    let w = m.associated_function_with(&x, q_max, 0)?.value;
    let mut lhs = 0.0;
    for (i, &a) in alpha.components().iter().enumerate() {
        if a > 0 {
            lhs += a as f64 * x[i].ln();
        }
    }
    best = best.max(lhs - w);
    Ok(best)
}

/// Log-convexity at the horizon through the round trip `M_α = sup_x
/// |x^α|/exp ω_M(x)` for `|α| <= q_max - window`, plus the ratio test
/// `M_q^2 <= M_{q-1} M_{q+1}` for isotropic sequences.
pub fn check_log_convex(m: &WeightSequence, q_max: usize, window: usize, tol: f64) -> Result<Verdict> {
    let q_max = m.data_horizon().map_or(q_max, |d| q_max.min(d));
    if q_max < window + 2 {
        return Err(Error::DegenerateHorizon(format!("q_max={q_max} leaves fewer than 2 orders after the window {window}")));
    }
    let q_prime = q_max - window;
    let horizon = |v: Verdict| v.with_horizon("q_max", q_max as f64).with_horizon("q_checked", q_prime as f64);
    if m.is_isotropic() {
        for q in 1..q_max {
            let (a, b, c) = (m.ln_order(q - 1).unwrap(), m.ln_order(q).unwrap(), m.ln_order(q + 1).unwrap());
            let excess = 2.0 * b - a - c;
            if excess > tol * (1.0 + b.abs()) {
                return Ok(horizon(
                    Verdict::falsified()
                        .with_counterexample("q", q as f64)
                        .with_counterexample("log_excess", excess)
                        .with_note("ratio test M_q^2 <= M_{q-1} M_{q+1} fails"),
                ));
            }
        }
    }
    let mut worst = 0.0f64;
    for alpha in MultiIndex::up_to(m.dim(), q_prime) {
        let target = m.ln_raw(alpha.components()).unwrap();
        let rec = round_trip_ln(m, &alpha, q_max)?;
        let err = target - rec;
        worst = worst.max(err.abs());
        if err > tol * (1.0 + target.abs()) {
            let mut v = Verdict::falsified().with_counterexample("order", alpha.order() as f64);
            for (i, a) in alpha.components().iter().enumerate() {
                v = v.with_counterexample(&format!("alpha{i}"), *a as f64);
            }
            return Ok(horizon(v.with_counterexample("log_gap", err).with_note("round trip does not recover M_alpha")));
        }
    }
    Ok(horizon(Verdict::witnessed().with_witness("max_log_error", worst)))
}

/// Largest log-convex minorant of an isotropic sequence on `0..=q_max`.
pub fn log_convex_minorant(m: &WeightSequence, q_max: usize) -> Result<WeightSequence> {
    if !m.is_isotropic() {
        return Err(Error::Anisotropic);
    }
    let q_max = m.data_horizon().map_or(q_max, |d| q_max.min(d));
    let pts: Vec<(f64, f64)> = (0..=q_max).map(|q| (q as f64, m.ln_order(q).unwrap())).collect();
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut logs = Vec::with_capacity(q_max + 1);
    let mut seg = 0;
    for q in 0..=q_max {
        let x = q as f64;
        while seg + 1 < hull.len() - 1 && hull[seg + 1].0 <= x {
            seg += 1;
        }
        let v = if hull.len() == 1 {
            hull[0].1
        } else {
            let (a, b) = (hull[seg], hull[seg + 1]);
            if x == a.0 {
                a.1
            } else if x == b.0 {
                b.1
            } else {
                a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
            }
        };
        logs.push(v.min(m.ln_order(q).unwrap()));
    }
    WeightSequence::table_from_logs(m.dim(), logs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ln_factorial;

    #[test]
    fn gevrey_is_log_convex() {
        let m = WeightSequence::gevrey(1, 0.5, 1.0).unwrap();
        assert!(check_log_convex(&m, 64, 8, 1e-6).unwrap().is_witnessed());
    }

    #[test]
    fn spike_fails_ratio_test() {
        let mut vals = vec![1.0, 1.0, 100.0, 1.0];
        let mut last: f64 = 1.0;
        for q in 4..=20 {
            last *= 1000.0 * q as f64;
            vals.push(last);
        }
        let m = WeightSequence::table(1, &vals).unwrap();
        let v = check_log_convex(&m, 20, 4, 1e-6).unwrap();
        assert!(v.is_falsified());
        assert_eq!(v.counterexample_value("q"), Some(2.0));
    }

    #[test]
    fn tensor_of_gevrey_is_log_convex() {
        let a = WeightSequence::gevrey(1, 0.5, 1.0).unwrap();
        let b = WeightSequence::gevrey(1, 1.5, 2.0).unwrap();
        let m = WeightSequence::tensor(vec![a, b]).unwrap().with_q_max(24);
        assert!(check_log_convex(&m, 24, 6, 1e-6).unwrap().is_witnessed());
    }

    #[test]
    fn minorant_of_small_table() {
        let m = WeightSequence::table(1, &[1.0, 4.0, 2.0, 8.0]).unwrap();
        let c = log_convex_minorant(&m, 3).unwrap();
        let l1 = c.ln_order(1).unwrap();
        assert!((l1 - 0.5 * 2f64.ln()).abs() < 1e-12);
        assert_eq!(c.ln_order(2).unwrap(), 2f64.ln());
        assert_eq!(c.ln_order(3).unwrap(), 8f64.ln());
    }

    #[test]
    fn minorant_of_log_convex_input_is_identity() {
        let logs: Vec<f64> = (0..=30).map(|q| 1.5 * ln_factorial(q as f64)).collect();
        let m = WeightSequence::table_from_logs(1, logs.clone()).unwrap();
        let c = log_convex_minorant(&m, 30).unwrap();
        for q in 0..=30 {
            assert_eq!(c.ln_order(q).unwrap(), logs[q]);
        }
        let single = WeightSequence::table(1, &[1.0, 3.0]).unwrap();
        assert_eq!(log_convex_minorant(&single, 1).unwrap().ln_order(1), single.ln_order(1));
    }
}
