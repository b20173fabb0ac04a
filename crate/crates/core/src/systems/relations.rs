//! Inclusion relations between systems: `M [⊆] N` and `W [⊆] V`.

use super::conditions::{classify_probe, sample_members, Probe, ShellSeries};
use super::{FunSystemSpec, Kind, SeqSystemSpec, WeightFunctionSystem, WeightSequenceSystem};
use crate::config::Horizons;
use crate::error::{Error, Result};
use crate::functions::compare_weight_functions;
use crate::sequences::{per_order_log_ratio, relation_preceq};
use crate::verdict::{Status, Verdict};

/// `∀ outer ∃ inner` over two grids. `probe(outer, inner)`; inner candidates
/// run from the end the quantifier favors.
pub(crate) fn quantify_pair(
    kind: Kind,
    outer_grid: &[f64],
    inner_grid: &[f64],
    mut probe: impl FnMut(usize, usize) -> Result<Probe>,
) -> Result<Verdict> {
    let (outer_key, inner_key) = match kind {
        Kind::Beurling => ("lambda", "mu"),
        Kind::Roumieu => ("mu", "lambda"),
    };
    let inner: Vec<usize> = match kind {
        Kind::Beurling => (0..inner_grid.len()).collect(),
        Kind::Roumieu => (0..inner_grid.len()).rev().collect(),
    };
    let favorable = match kind {
        Kind::Beurling => outer_grid.len() - 1,
        Kind::Roumieu => 0,
    };
    let mut worst_c: f64 = 1.0;
    let mut failure: Option<(usize, bool)> = None;
    let mut pairing = None;
    for o in 0..outer_grid.len() {
        let mut all_diverge = true;
        let mut found = false;
        for &i in &inner {
            match probe(o, i)? {
                Probe::Pass { c, .. } => {
                    worst_c = worst_c.max(c);
                    if outer_grid[o] == 1.0 || pairing.is_none() {
                        pairing = Some((outer_grid[o], inner_grid[i]));
                    }
                    found = true;
                    break;
                }
                Probe::Diverge => {}
                Probe::Unknown => all_diverge = false,
            }
        }
        if !found {
            let fatal = o == favorable && all_diverge;
            if failure.is_none() || fatal {
                failure = Some((o, all_diverge && o == favorable));
            }
        }
    }
    let v = match failure {
        None => {
            let mut v = Verdict::witnessed().with_witness("C", worst_c);
            if let Some((o, i)) = pairing {
                v = v.with_witness(outer_key, o).with_witness(inner_key, i);
            }
            v
        }
        Some((o, true)) => Verdict::falsified()
            .with_counterexample(outer_key, outer_grid[o])
            .with_note("every inner parameter diverges"),
        Some((o, false)) => Verdict::inconclusive()
            .with_note(format!("no inner parameter found for {outer_key}={}", outer_grid[o])),
    };
    Ok(v.with_horizon("param_min", outer_grid[0]).with_horizon("param_max", outer_grid[outer_grid.len() - 1]))
}

/// `M [⊆] N`.
pub fn system_relation_sequences(
    m: &WeightSequenceSystem,
    n: &WeightSequenceSystem,
    kind: Kind,
    hz: &Horizons,
) -> Result<Verdict> {
    if m.dim() != n.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), found: n.dim() });
    }
    if hz.fast_paths {
        match (m.spec(), n.spec()) {
            (SeqSystemSpec::Dilated(a), SeqSystemSpec::Dilated(b)) => {
                let v = relation_preceq(a, b, hz)?;
                return Ok(v.with_note("dilated systems: reduces to M preceq N"));
            }
            (SeqSystemSpec::FromBmt(w), SeqSystemSpec::FromBmt(s)) => {
                let v = compare_weight_functions(w, s, hz)?;
                return Ok(v.with_note("conjugate-generated systems: reduces to eta = O(omega)"));
            }
            _ => {}
        }
    }
    let q_top = [m.members(), n.members()]
        .iter()
        .flat_map(|ms| ms.iter())
        .filter_map(|s| s.data_horizon())
        .fold(if m.members()[0].is_isotropic() && n.members()[0].is_isotropic() { hz.q_max } else { hz.pair_q_max }, usize::min);
    // M^μ ⊆ N^λ
    let v = match kind {
        Kind::Beurling => quantify_pair(kind, n.grid(), m.grid(), |o, i| {
            Ok(classify_probe(&per_order_log_ratio(&m.members()[i], &n.members()[o], q_top)?, hz))
        })?,
        Kind::Roumieu => quantify_pair(kind, m.grid(), n.grid(), |o, i| {
            Ok(classify_probe(&per_order_log_ratio(&m.members()[o], &n.members()[i], q_top)?, hz))
        })?,
    };
    Ok(v.with_horizon("q_max", q_top as f64))
}

/// `W [⊆] V`: `v^λ = O(w^μ)` with the quantifier order of `kind`.
pub fn system_relation_functions(
    w: &WeightFunctionSystem,
    v: &WeightFunctionSystem,
    kind: Kind,
    hz: &Horizons,
) -> Result<Verdict> {
    if w.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: w.dim(), found: v.dim() });
    }
    if hz.fast_paths {
        if let Some(verdict) = function_fast_path(w, v, kind, hz)? {
            return Ok(verdict);
        }
    }
    let sw = sample_members(w, &hz.shells);
    let sv = sample_members(v, &hz.shells);
    let probe = |wi: usize, vi: usize| -> Probe {
        let mut series = ShellSeries::new(hz.shells.len());
        for (k, &shell) in sw.shell.iter().enumerate() {
            let (num, den) = (sv.values[vi][k], sw.values[wi][k]);
            series.push(shell, num, den.ln, den.saturated);
        }
        series.probe(hz)
    };
    let out = match kind {
        Kind::Beurling => quantify_pair(kind, v.grid(), w.grid(), |o, i| Ok(probe(i, o)))?,
        Kind::Roumieu => quantify_pair(kind, w.grid(), v.grid(), |o, i| Ok(probe(o, i)))?,
    };
    Ok(out.with_horizon("r_max", hz.shells.last().copied().unwrap_or(f64::NAN)))
}

fn function_fast_path(
    w: &WeightFunctionSystem,
    v: &WeightFunctionSystem,
    kind: Kind,
    hz: &Horizons,
) -> Result<Option<Verdict>> {
    // Only a Witnessed sequence verdict transfers unconditionally; a
    // Falsified one transfers when both sides are log-convex.
    let transfer = |seq: Verdict, log_convex: bool, note: &str| -> Verdict {
        match seq.status {
            Status::Witnessed => seq.with_note(note.to_string()),
            Status::Falsified if log_convex => seq.with_note(format!("{note}; log-convex converse")),
            Status::Falsified => Verdict::inconclusive().with_note(format!("{note}; not log-convex, converse unavailable")),
            Status::Inconclusive => seq.with_note(note.to_string()),
        }
    };
    Ok(match (w.spec(), v.spec()) {
        (FunSystemSpec::FromOmega(a), FunSystemSpec::FromOmega(b)) => {
            Some(compare_weight_functions(a, b, hz)?.with_note("exp(omega/lambda) systems: reduces to eta = O(omega)"))
        }
        (FunSystemSpec::Dilated(a), FunSystemSpec::Dilated(b)) => {
            let lc = |s: &crate::sequences::WeightSequence| {
                WeightSequenceSystem::dilated(s.clone(), hz).map(|m| m.is_log_convex(hz)).unwrap_or(false)
            };
            let log_convex = lc(a) && lc(b);
            Some(transfer(relation_preceq(a, b, hz)?, log_convex, "associated-function systems: reduces to A preceq B"))
        }
        (FunSystemSpec::FromSequenceSystem(m), FunSystemSpec::FromSequenceSystem(n)) => {
            let log_convex = m.is_log_convex(hz) && n.is_log_convex(hz);
            let seq = system_relation_sequences(m, n, kind, hz)?;
            Some(transfer(seq, log_convex, "associated systems: reduces to the sequence relation"))
        }
        (FunSystemSpec::PolyShiftAll(k, a), FunSystemSpec::PolyShiftAll(l, b)) if k == l => {
            system_relation_functions(a, b, kind, hz).map(Some)?
        }
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::BmtWeightFunction;
    use crate::sequences::WeightSequence;
    use std::sync::Arc;

    fn gevrey(s: f64) -> WeightSequence {
        WeightSequence::gevrey(1, s, 1.0).unwrap()
    }

    #[test]
    fn dilated_sequence_systems() {
        let hz = Horizons::default();
        let half = WeightSequenceSystem::dilated(gevrey(0.5), &hz).unwrap();
        let one = WeightSequenceSystem::dilated(gevrey(1.0), &hz).unwrap();
        for kind in [Kind::Beurling, Kind::Roumieu] {
            assert!(system_relation_sequences(&half, &one, kind, &hz).unwrap().is_witnessed());
            assert!(system_relation_sequences(&one, &half, kind, &hz).unwrap().is_falsified());
        }
    }

    #[test]
    fn numeric_sequence_relation_agrees_away_from_grid_edges() {
        let hz = Horizons::default().numeric_only();
        let half = WeightSequenceSystem::dilated(gevrey(0.5), &hz).unwrap();
        let one = WeightSequenceSystem::dilated(gevrey(1.0), &hz).unwrap();
        let v = system_relation_sequences(&half, &one, Kind::Beurling, &hz).unwrap();
        assert!(v.is_witnessed(), "{v:?}");
        // q!^(1/2) lags q! by a factor that only overtakes 2^16 beyond the order horizon.
        let v = system_relation_sequences(&one, &half, Kind::Beurling, &hz).unwrap();
        assert!(!v.is_witnessed(), "{v:?}");
    }

    #[test]
    fn omega_function_systems() {
        let hz = Horizons::default();
        let w = |r: f64| {
            WeightFunctionSystem::from_omega(1, Arc::new(BmtWeightFunction::power_minus_one(r).unwrap()), &hz).unwrap()
        };
        for kind in [Kind::Beurling, Kind::Roumieu] {
            assert!(system_relation_functions(&w(0.5), &w(1.0 / 3.0), kind, &hz).unwrap().is_witnessed());
            assert!(system_relation_functions(&w(1.0 / 3.0), &w(0.5), kind, &hz).unwrap().is_falsified());
            assert!(system_relation_functions(&w(0.5), &w(0.5), kind, &hz).unwrap().is_witnessed());
        }
        let numeric = hz.clone().numeric_only();
        for kind in [Kind::Beurling, Kind::Roumieu] {
            let v = system_relation_functions(&w(0.5), &w(1.0 / 3.0), kind, &numeric).unwrap();
            assert!(v.is_witnessed(), "{kind}: {v:?}");
        }
    }
}
