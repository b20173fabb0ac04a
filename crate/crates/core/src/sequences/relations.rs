use super::WeightSequence;
use crate::config::Horizons;
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::numeric::ln_factorial;
use crate::verdict::{accelerating_tail, classify_tail, superlinear_tail, Trend, Verdict};

/// `max_{|α| = q} (ln M_α - ln N_α)` for `q = 0..=q_max`.
pub fn per_order_log_ratio(m: &WeightSequence, n: &WeightSequence, q_max: usize) -> Result<Vec<f64>> {
    if m.dim() != n.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), found: n.dim() });
    }
    let q_max = [m.data_horizon(), n.data_horizon()].iter().flatten().fold(q_max, |a, b| a.min(*b));
    let mut out = Vec::with_capacity(q_max + 1);
    if m.is_isotropic() && n.is_isotropic() {
        for q in 0..=q_max {
            out.push(m.ln_order(q).unwrap() - n.ln_order(q).unwrap());
        }
        return Ok(out);
    }
    for q in 0..=q_max {
        let mut best = f64::NEG_INFINITY;
        for a in MultiIndex::of_order(m.dim(), q) {
            best = best.max(m.ln_raw(a.components()).unwrap() - n.ln_raw(a.components()).unwrap());
        }
        out.push(best);
    }
    Ok(out)
}

/// `sup_q (q ln a + c ln q!)` for `c < 0`, or `c = 0` and `a <= 1`.
fn concave_sup(ln_a: f64, c: f64) -> f64 {
    let mut best = 0.0f64;
    let mut prev = 0.0;
    let mut q = 1.0;
    loop {
        let v = q * ln_a + c * ln_factorial(q);
        best = best.max(v);
        if v < prev && v < best {
            break;
        }
        prev = v;
        q += 1.0;
        if q > 1e7 {
            break;
        }
    }
    best
}

fn gevrey_pair(m: &WeightSequence, n: &WeightSequence) -> Option<((f64, f64), (f64, f64))> {
    if m.dim() != n.dim() {
        return None;
    }
    Some((m.gevrey_params()?, n.gevrey_params()?))
}

/// `M ⊆ N`: `∃C ∀α: M_α <= C N_α`.
pub fn relation_subseteq(m: &WeightSequence, n: &WeightSequence, hz: &Horizons) -> Result<Verdict> {
    if m.dim() != n.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), found: n.dim() });
    }
    if hz.fast_paths {
        if let Some(((s1, h1), (s2, h2))) = gevrey_pair(m, n) {
            let bounded = s1 < s2 || (s1 == s2 && h1 <= h2);
            let v = if bounded {
                let c = concave_sup((h1 / h2).ln(), s1 - s2).exp();
                Verdict::witnessed().with_witness("C", c)
            } else {
                let q = hz.q_max as f64;
                let r = q * (h1 / h2).ln() + (s1 - s2) * ln_factorial(q);
                Verdict::falsified().with_counterexample("q", q).with_counterexample("log_ratio", r)
            };
            return Ok(v.with_note("gevrey closed form"));
        }
    }
    let r = per_order_log_ratio(m, n, hz.q_max)?;
    let q_top = (r.len() - 1) as f64;
    let max = r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let v = match classify_tail(&r, hz.window, hz.margin, hz.tol) {
        Trend::Bounded => Verdict::witnessed().with_witness("C", max.exp()),
        _ => Verdict::inconclusive().with_note("ratio still rising at the horizon"),
    };
    Ok(v.with_horizon("q_max", q_top).with_horizon("window", hz.window as f64))
}

/// `M ≼ N`: `∃C,H ∀α: M_α <= C H^{|α|} N_α`.
pub fn relation_preceq(m: &WeightSequence, n: &WeightSequence, hz: &Horizons) -> Result<Verdict> {
    if m.dim() != n.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), found: n.dim() });
    }
    if hz.fast_paths {
        if let Some(((s1, h1), (s2, h2))) = gevrey_pair(m, n) {
            let v = if s1 <= s2 {
                Verdict::witnessed().with_witness("C", 1.0).with_witness("H", h1 / h2)
            } else {
                let q = hz.q_max as f64;
                let root = ((s1 - s2) * ln_factorial(q) / q + (h1 / h2).ln()).exp();
                Verdict::falsified().with_counterexample("q", q).with_counterexample("ratio_root", root)
            };
            return Ok(v.with_note("gevrey closed form"));
        }
    }
    let r = per_order_log_ratio(m, n, hz.q_max)?;
    let q_top = (r.len() - 1) as f64;
    // A convex log ratio outruns every geometric factor, however large the
    // grid's H happens to make it look bounded within the horizon.
    let superlinear = superlinear_tail(&r, hz.window, hz.margin);
    let undecided = accelerating_tail(&r, hz.window, hz.margin);
    for &h in hz.h_grid.iter().filter(|_| !superlinear && !undecided) {
        let lh = h.ln();
        let shifted: Vec<f64> = r.iter().enumerate().map(|(q, v)| v - q as f64 * lh).collect();
        if classify_tail(&shifted, hz.window, hz.margin, hz.tol) == Trend::Bounded {
            let c = shifted.iter().cloned().fold(f64::NEG_INFINITY, f64::max).exp();
            return Ok(Verdict::witnessed()
                .with_witness("C", c)
                .with_witness("H", h)
                .with_horizon("q_max", q_top)
                .with_horizon("h_max", *hz.h_grid.last().unwrap()));
        }
    }
    let v = if superlinear {
        let root = (r[r.len() - 1] / q_top).exp();
        Verdict::falsified()
            .with_counterexample("q", q_top)
            .with_counterexample("ratio_root", root)
            .with_note("log ratio grows superlinearly")
    } else {
        Verdict::inconclusive().with_note("no H on the grid bounds the ratio")
    };
    Ok(v.with_horizon("q_max", q_top).with_horizon("h_max", *hz.h_grid.last().unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: f64, h: f64) -> WeightSequence {
        WeightSequence::gevrey(1, s, h).unwrap()
    }

    fn table(s: f64, h: f64) -> WeightSequence {
        let logs = (0..=64).map(|q| q as f64 * h.ln() + s * ln_factorial(q as f64)).collect();
        WeightSequence::table_from_logs(1, logs).unwrap()
    }

    #[test]
    fn subseteq_examples() {
        let hz = Horizons::default();
        let v = relation_subseteq(&g(0.5, 1.0), &g(1.0, 1.0), &hz).unwrap();
        assert!(v.is_witnessed());
        assert_eq!(v.witness_value("C"), Some(1.0));
        assert!(relation_subseteq(&g(1.0, 1.0), &g(0.5, 1.0), &hz).unwrap().is_falsified());
        let v = relation_subseteq(&table(1.0, 1.0), &table(1.0, 1.0), &hz).unwrap();
        assert_eq!(v.witness_value("C"), Some(1.0));
        let v = relation_subseteq(&table(1.0, 1.0), &table(0.5, 1.0), &hz).unwrap();
        assert_eq!(v.status, crate::verdict::Status::Inconclusive);
    }

    #[test]
    fn preceq_examples() {
        let hz = Horizons::default();
        let v = relation_preceq(&g(1.0, 2.0), &g(1.0, 1.0), &hz).unwrap();
        assert_eq!((v.witness_value("C"), v.witness_value("H")), (Some(1.0), Some(2.0)));
        let v = relation_preceq(&table(1.0, 2.0), &table(1.0, 1.0), &hz).unwrap();
        assert!((v.witness_value("C").unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(v.witness_value("H"), Some(2.0));
        assert!(relation_preceq(&g(1.0, 1.0), &g(0.5, 1.0), &hz).unwrap().is_falsified());
        assert!(relation_preceq(&table(1.0, 1.0), &table(0.5, 1.0), &hz).unwrap().is_falsified());
        let v = relation_preceq(&g(0.5, 1.0), &g(0.5, 1.0), &hz).unwrap();
        assert_eq!((v.witness_value("C"), v.witness_value("H")), (Some(1.0), Some(1.0)));
    }
}
