//! Necessary conditions probed with explicit families: lattice deltas for the
//! weighted sequence spaces, characters for the periodic spaces, and the
//! embedding and multiplier checks.

use super::grid::SequenceData;
use super::model::{BanachSpaceModel, ModelKind};
use super::seminorm::{membership_verdict, periodic_seminorm};
use super::testfn::{Profile, TestFunction};
use crate::config::Horizons;
use crate::error::{Error, Result};
use crate::functions::LnWeight;
use crate::multi_index::MultiIndex;
use crate::numeric::{japanese, lattice_constant};
use crate::systems::{
    quantify_pair, sample_points, Kind, Probe, ShellSeries, WeightFunctionSystem, WeightSequenceSystem,
};
use crate::verdict::{Status, Verdict};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Integer lattice points on the probe radii, with their radius index.
fn lattice_points(dim: usize, hz: &Horizons) -> Vec<(usize, Vec<f64>)> {
    let mut out = Vec::new();
    for (k, r) in hz.lattice_radii().into_iter().enumerate() {
        for p in sample_points(dim, &[r]) {
            out.push((k, p.into_iter().map(f64::round).collect()));
        }
    }
    out
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// `E_{d,W} ⊆ E_{d,V}` forces `‖δ_k‖_{E_{d,v^λ}} <= C ‖δ_k‖_{E_{d,w^μ}}`, i.e.
/// `v^λ(k) <= C w^μ(k)` along the lattice. The identity
/// `‖δ_k‖_{E_{d,w}} = w(k) ‖δ_0‖_{E_d}` is replayed on the model first.
pub fn probe_delta_sequences(
    w: &WeightFunctionSystem,
    v: &WeightFunctionSystem,
    kind: Kind,
    model: &BanachSpaceModel,
    hz: &Horizons,
) -> Result<Verdict> {
    let n = model.grid().dim();
    if w.dim() != n || v.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: if w.dim() != n { w.dim() } else { v.dim() } });
    }
    let radius = model.grid().half_width() / 2;
    let unit = model.unit_cell_norm()?;
    let mut worst_identity: f64 = 0.0;
    for member in [&w.members()[w.members().len() / 2], &v.members()[v.members().len() / 2]] {
        for k in [0i64, 1, -3, radius - 1] {
            let mut j = vec![0; n];
            j[0] = k;
            let x: Vec<f64> = j.iter().map(|c| *c as f64).collect();
            let Ok(wk) = member.eval(&x) else { continue };
            let got = model.weighted_ed_norm(&SequenceData::delta(n, radius, &j)?, member)?;
            worst_identity = worst_identity.max(relative_gap(got, wk * unit));
        }
    }
    if worst_identity > 1e-12 {
        return Ok(Verdict::inconclusive()
            .with_note("weighted delta norms disagree with the weight")
            .with_witness("delta_identity_gap", worst_identity));
    }
    let points = lattice_points(n, hz);
    let radii = hz.lattice_radii().len();
    let ln_w: Vec<Vec<LnWeight>> = w.members().iter().map(|m| points.iter().map(|(_, p)| m.ln_eval(p)).collect()).collect();
    let ln_v: Vec<Vec<LnWeight>> = v.members().iter().map(|m| points.iter().map(|(_, p)| m.ln_eval(p)).collect()).collect();
    let probe = |wi: usize, vi: usize| -> Probe {
        let mut series = ShellSeries::new(radii);
        for (idx, (shell, _)) in points.iter().enumerate() {
            let den = ln_w[wi][idx];
            series.push(*shell, ln_v[vi][idx], den.ln, den.saturated);
        }
        series.probe(hz)
    };
    let out = match kind {
        Kind::Beurling => quantify_pair(kind, v.grid(), w.grid(), |o, i| Ok(probe(i, o)))?,
        Kind::Roumieu => quantify_pair(kind, w.grid(), v.grid(), |o, i| Ok(probe(o, i)))?,
    };
    Ok(out
        .with_witness("delta_identity_gap", worst_identity)
        .with_horizon("k_max", hz.lattice_radii().last().copied().unwrap_or(0.0)))
}

/// Periodic inclusion `E^{[M]}_per ⊆ E^{[N]}_per` forces, for the characters
/// `e^{2πik·x}`, `exp ω_{N^λ}(2πk) <= C exp ω_{M^μ}(2πk)`. The closed form of
/// the character seminorm is replayed on the model first.
pub fn probe_characters(
    m: &WeightSequenceSystem,
    n_sys: &WeightSequenceSystem,
    kind: Kind,
    model: &BanachSpaceModel,
    hz: &Horizons,
) -> Result<Verdict> {
    let n = model.grid().dim();
    if m.dim() != n || n_sys.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: if m.dim() != n { m.dim() } else { n_sys.dim() } });
    }
    let unit = model.unit_cell_norm()?;
    let mut worst_identity: f64 = 0.0;
    let probe_member = &n_sys.members()[n_sys.members().len() / 2];
    for k in [1i64, 2] {
        let mut factors = vec![Profile::trig(vec![(0, Complex64::new(1.0, 0.0))]); n];
        factors[0] = Profile::trig(vec![(k, Complex64::new(1.0, 0.0))]);
        let f = TestFunction::new(factors, format!("character({k})"))?;
        let cap = if n == 1 { hz.q_max } else { hz.pair_q_max };
        let s = periodic_seminorm(&f, probe_member, model, cap)?;
        let mut t = vec![0.0; n];
        t[0] = 2.0 * PI * k as f64;
        let (omega, exact) = probe_member.omega(&t)?;
        if s.saturated && exact {
            worst_identity = worst_identity.max((s.ln_value - (unit.ln() + omega)).abs());
        }
    }
    if worst_identity > 1e-8 {
        return Ok(Verdict::inconclusive()
            .with_note("character seminorms disagree with the associated function")
            .with_witness("character_identity_gap", worst_identity));
    }
    let points: Vec<(usize, Vec<f64>)> = lattice_points(n, hz)
        .into_iter()
        .map(|(k, p)| (k, p.into_iter().map(|c| 2.0 * PI * c).collect()))
        .collect();
    let radii = hz.lattice_radii().len();
    let omegas = |sys: &WeightSequenceSystem| -> Result<Vec<Vec<LnWeight>>> {
        sys.members()
            .iter()
            .map(|s| {
                points
                    .iter()
                    .map(|(_, p)| s.omega(p).map(|(ln, saturated)| LnWeight { ln, saturated }))
                    .collect::<Result<Vec<_>>>()
            })
            .collect()
    };
    let (om, on) = (omegas(m)?, omegas(n_sys)?);
    let probe = |mi: usize, ni: usize| -> Probe {
        let mut series = ShellSeries::new(radii);
        for (idx, (shell, _)) in points.iter().enumerate() {
            let den = om[mi][idx];
            series.push(*shell, on[ni][idx], den.ln, den.saturated);
        }
        series.probe(hz)
    };
    let out = match kind {
        Kind::Beurling => quantify_pair(kind, n_sys.grid(), m.grid(), |o, i| Ok(probe(i, o)))?,
        Kind::Roumieu => quantify_pair(kind, m.grid(), n_sys.grid(), |o, i| Ok(probe(o, i)))?,
    };
    Ok(out
        .with_witness("character_identity_gap", worst_identity)
        .with_horizon("k_max", hz.lattice_radii().last().copied().unwrap_or(0.0)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingReport {
    /// `C (n+1)^{(n+1)/2} Σ_{|j| <= T} ⟨j⟩^{-(n+1)}` with `C = C₀ = 1`.
    pub constant: f64,
    /// Largest `‖f ⟨·⟩^{-(n+1)}‖_{L^1} / (constant ‖f‖_E)`.
    pub worst_ratio: f64,
    pub instances: usize,
    pub holds: bool,
}

/// `‖f ⟨·⟩^{-(n+1)}‖_{L^1} <= C C₀ (n+1)^{(n+1)/2} Σ_j ⟨j⟩^{-(n+1)} ‖f‖_E` on
/// random finitely supported grid functions. For these models
/// `‖g 1_{j+[0,1]^n}‖_{L^1} <= ‖g‖_E` and lattice shifts are isometries.
pub fn weighted_l1_embedding_check(model: &BanachSpaceModel, instances: usize, seed: u64) -> Result<EmbeddingReport> {
    if matches!(model.kind(), ModelKind::Mixed { .. }) {
        return Err(Error::InvalidInput("embedding check runs on L^p and L^0 models".into()));
    }
    let grid = model.grid();
    let n = grid.dim();
    let constant = lattice_constant(n, grid.half_width());
    let weights: Vec<f64> = (0..grid.len()).map(|i| japanese(&grid.point(i)).powi(-(n as i32 + 1))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let support = rng.gen_range(1..=32usize);
        let mut samples = vec![Complex64::new(0.0, 0.0); grid.len()];
        for _ in 0..support {
            let i = rng.gen_range(0..grid.len());
            samples[i] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let f = super::gridfn::GridFunction::from_samples(*grid, samples, "random")?;
        let lhs: f64 = f.samples().iter().zip(&weights).map(|(v, w)| v.norm() * w).sum::<f64>() * grid.cell_volume();
        let rhs = constant * model.norm(&f)?;
        if rhs > 0.0 {
            worst = worst.max(lhs / rhs);
        }
    }
    Ok(EmbeddingReport { constant, worst_ratio: worst, instances, holds: worst <= 1.0 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierReport {
    /// `f ∈ E^{[M]}_{[⟨·⟩^{2k} W]}`.
    pub shifted: Verdict,
    /// `x^β f ∈ E^{[M]}_{[W]}` for `|β| <= 2k`.
    pub monomials: Vec<(Vec<usize>, Verdict)>,
    /// No decided pair contradicts the equivalence.
    pub consistent: bool,
}

/// Compares membership with the weight `⟨x⟩^{2k} w` against membership of
/// `x^β f` with the original weights, `|β| <= 2k`.
pub fn polynomial_multiplier_check(
    f: &TestFunction,
    m: &WeightSequenceSystem,
    w: &WeightFunctionSystem,
    kind: Kind,
    k: usize,
    model: &BanachSpaceModel,
    hz: &Horizons,
) -> Result<MultiplierReport> {
    let shifted_sys = WeightFunctionSystem::poly_shift_all(2.0 * k as f64, w.clone(), hz)?;
    let shifted = membership_verdict(f, m, &shifted_sys, kind, model, hz)?;
    let mut monomials = Vec::new();
    for beta in MultiIndex::up_to(f.dim(), 2 * k) {
        let factors = f
            .factors()
            .iter()
            .zip(beta.components())
            .map(|(p, b)| if *b == 0 { p.clone() } else { Profile::monomial(*b).times(p.clone()) })
            .collect();
        let g = TestFunction::new(factors, format!("x^{:?}*{}", beta.components(), f.label()))?;
        monomials.push((beta.components().to_vec(), membership_verdict(&g, m, w, kind, model, hz)?));
    }
    let all_in = monomials.iter().all(|(_, v)| v.status == Status::Witnessed);
    let some_out = monomials.iter().any(|(_, v)| v.status == Status::Falsified);
    let consistent = match shifted.status {
        Status::Witnessed => !some_out,
        Status::Falsified => !all_in,
        Status::Inconclusive => true,
    };
    Ok(MultiplierReport { shifted, monomials, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::BmtWeightFunction;
    use crate::sequences::WeightSequence;
    use crate::spaces::grid::GridSpec;
    use crate::systems::{system_relation_functions, system_relation_sequences};
    use std::sync::Arc;

    fn model(p: f64) -> BanachSpaceModel {
        BanachSpaceModel::lp(p, GridSpec::default_for(1).unwrap()).unwrap()
    }

    #[test]
    fn delta_probe_agrees_with_the_function_relation() {
        let hz = Horizons::default();
        let w = |r: f64| {
            WeightFunctionSystem::from_omega(1, Arc::new(BmtWeightFunction::power_minus_one(r).unwrap()), &hz).unwrap()
        };
        for kind in [Kind::Beurling, Kind::Roumieu] {
            for (a, b) in [(0.5, 1.0 / 3.0), (1.0 / 3.0, 0.5), (0.5, 0.5)] {
                let probe = probe_delta_sequences(&w(a), &w(b), kind, &model(2.0), &hz).unwrap();
                let rel = system_relation_functions(&w(a), &w(b), kind, &hz).unwrap();
                let disagree = probe.status != Status::Inconclusive
                    && rel.status != Status::Inconclusive
                    && probe.status != rel.status;
                assert!(!disagree, "{kind} {a} {b}: probe {probe:?} relation {rel:?}");
            }
            let same = probe_delta_sequences(&w(0.5), &w(0.5), kind, &model(1.0), &hz).unwrap();
            assert!(same.is_witnessed());
        }
    }

    #[test]
    fn character_probe_agrees_with_the_sequence_relation() {
        let hz = Horizons::default();
        let sys = |s: f64| WeightSequenceSystem::dilated(WeightSequence::gevrey(1, s, 1.0).unwrap(), &hz).unwrap();
        for kind in [Kind::Beurling, Kind::Roumieu] {
            let up = probe_characters(&sys(0.5), &sys(1.0), kind, &model(2.0), &hz).unwrap();
            assert!(up.is_witnessed(), "{kind}: {up:?}");
            assert!(system_relation_sequences(&sys(0.5), &sys(1.0), kind, &hz).unwrap().is_witnessed());
            let down = probe_characters(&sys(1.0), &sys(0.5), kind, &model(2.0), &hz).unwrap();
            assert!(!down.is_witnessed(), "{kind}: {down:?}");
        }
    }

    #[test]
    fn embedding_holds_on_random_functions() {
        for m in [model(1.0), model(2.0), model(f64::INFINITY), BanachSpaceModel::l0(GridSpec::default_for(1).unwrap())] {
            let r = weighted_l1_embedding_check(&m, 200, 7).unwrap();
            assert!(r.holds && r.worst_ratio > 0.0, "{r:?}");
        }
    }

    #[test]
    fn multiplier_check_on_a_gaussian() {
        let hz = Horizons::default();
        let m = WeightSequenceSystem::dilated(WeightSequence::gevrey(1, 1.0, 1.0).unwrap(), &hz).unwrap();
        let w = WeightFunctionSystem::dilated(WeightSequence::gevrey(1, 1.0, 1.0).unwrap(), &hz).unwrap();
        let g = TestFunction::gaussian(1, 1.0).unwrap();
        let r = polynomial_multiplier_check(&g, &m, &w, Kind::Roumieu, 1, &model(f64::INFINITY), &hz).unwrap();
        assert!(r.shifted.is_witnessed(), "{r:?}");
        assert_eq!(r.monomials.len(), 3);
        assert!(r.consistent);
    }
}
