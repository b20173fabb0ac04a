//! Cross-checks tying sequence systems to their associated function systems.

use super::conditions::{check_i_detailed, check_m, check_wm};
use super::relations::{system_relation_functions, system_relation_sequences};
use super::{derived_function_system, sample_points, unit_ball_mesh, Kind, WeightSequenceSystem};
use crate::config::Horizons;
use crate::error::Result;
use crate::verdict::{Status, Verdict};

#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    pub sequences: Verdict,
    pub functions: Verdict,
    pub log_convex: bool,
    pub consistent: bool,
    pub note: String,
}

/// `M [⊆] N ⇒ W_M [⊆] W_N`, and the converse for log-convex systems. The
/// function side is evaluated numerically so that it is an independent check.
pub fn sequence_to_function_transfer(
    m: &WeightSequenceSystem,
    n: &WeightSequenceSystem,
    kind: Kind,
    hz: &Horizons,
) -> Result<TransferReport> {
    let sequences = system_relation_sequences(m, n, kind, hz)?;
    let numeric = hz.clone().numeric_only();
    let wm = derived_function_system(m, hz)?;
    let wn = derived_function_system(n, hz)?;
    let functions = system_relation_functions(&wm, &wn, kind, &numeric)?;
    let log_convex = m.is_log_convex(hz) && n.is_log_convex(hz);
    let (consistent, note) = match (sequences.status, functions.status) {
        (Status::Witnessed, Status::Witnessed) => (true, "both relations witnessed".to_string()),
        (Status::Witnessed, s) => (false, format!("horizon artifact: sequence relation witnessed, function relation {s}")),
        (Status::Falsified, Status::Witnessed) if log_convex => {
            (false, "horizon artifact: function relation witnessed, sequence relation falsified".to_string())
        }
        (s, f) if !log_convex => (true, format!("converse not asserted (not log-convex): sequence {s}, function {f}")),
        (s, f) => (true, format!("sequence {s}, function {f}")),
    };
    Ok(TransferReport { sequences, functions, log_convex, consistent, note })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthTransferReport {
    /// `[I]` on the sequence system; its certificates drive the inequality.
    pub interpolation: Verdict,
    /// `ω_{M^λ}(x+y) <= ln C + ω_{M^μ}(2Hx) + ω_{M^ν}(2Hy)` over the sample grid.
    pub inequality_holds: bool,
    /// Same inequality with `y` restricted to the unit ball.
    pub ball_inequality_holds: bool,
    /// Largest `lhs - rhs` seen; at most 0 up to rounding when the inequality holds.
    pub worst_excess: f64,
    pub points_checked: usize,
    pub points_skipped: usize,
    /// `[M]` and `[wM]` on `W_M`.
    pub moderate: Verdict,
    pub weak_moderate: Verdict,
}

/// Replays the `[I]` certificates of `M` in the moderate-growth inequality of
/// the associated functions, then checks `[M]` and `[wM]` on `W_M`.
pub fn moderate_growth_transfer(m: &WeightSequenceSystem, kind: Kind, hz: &Horizons) -> Result<GrowthTransferReport> {
    let i = check_i_detailed(m, kind, hz)?;
    let pts = sample_points(m.dim(), &hz.shells);
    let ball = unit_ball_mesh(m.dim());
    let mut worst = f64::NEG_INFINITY;
    let mut ball_worst = f64::NEG_INFINITY;
    let (mut checked, mut skipped) = (0, 0);
    for cert in &i.certificates {
        let ml = m.member(cert.lambda, hz.q_max)?;
        let mm = m.member(cert.mu, hz.q_max)?;
        let mn = m.member(cert.nu, hz.q_max)?;
        let scaled = |x: &[f64]| -> Vec<f64> { x.iter().map(|v| 2.0 * cert.h * v).collect() };
        let xs: Vec<(f64, bool)> = pts.iter().map(|x| mm.omega(&scaled(x))).collect::<Result<_>>()?;
        let ys: Vec<(f64, bool)> = pts.iter().map(|y| mn.omega(&scaled(y))).collect::<Result<_>>()?;
        let bs: Vec<(f64, bool)> = ball.iter().map(|y| mn.omega(&scaled(y))).collect::<Result<_>>()?;
        for (a, x) in pts.iter().enumerate() {
            for (targets, vals, acc) in [(&pts, &ys, &mut worst), (&ball, &bs, &mut ball_worst)] {
                for (b, y) in targets.iter().enumerate() {
                    let sum: Vec<f64> = x.iter().zip(y).map(|(u, v)| u + v).collect();
                    let (lhs, lsat) = ml.omega(&sum)?;
                    let ((wx, sx), (wy, sy)) = (xs[a], vals[b]);
                    if !(lsat && sx && sy) {
                        skipped += 1;
                        continue;
                    }
                    checked += 1;
                    let rhs = cert.c.ln() + wx + wy;
                    *acc = acc.max((lhs - rhs) / (1.0 + rhs.abs()));
                }
            }
        }
    }
    let slack = 1e-9;
    let wm = derived_function_system(m, hz)?;
    Ok(GrowthTransferReport {
        inequality_holds: i.verdict.is_witnessed() && worst <= slack,
        ball_inequality_holds: i.verdict.is_witnessed() && ball_worst <= slack,
        worst_excess: worst.max(ball_worst),
        points_checked: checked,
        points_skipped: skipped,
        moderate: check_m(&wm, kind, hz)?,
        weak_moderate: check_wm(&wm, kind, hz)?,
        interpolation: i.verdict,
    })
}
