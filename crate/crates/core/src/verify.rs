//! Identity suites over the operators and probes, each producing pass/fail
//! records with the observed value and the tolerance it was held to.

use crate::config::Horizons;
use crate::error::{Error, Result};
use crate::grammar::{parse_space, SpaceDefaults, SpaceSpec};
use crate::numeric::lattice_constant;
use crate::operators::{
    decay_upgrade, default_points, default_radius, evaluation, interpolating_window, parametrix_reproduce,
    partition_window, periodize, sample_convolution_bound, synthesis, synthesis_bound, tail_sum, Parametrix1D, Window,
    WindowKind,
};
use crate::spaces::{
    probe_characters, probe_delta_sequences, weighted_l1_embedding_check, BanachSpaceModel, GridFunction, GridSpec,
    ModelKind, Profile, SequenceData, TestFunction,
};
use crate::systems::{system_relation_functions, system_relation_sequences, Kind};
use crate::verdict::{Status, Verdict};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Reconstruction,
    Norms,
    Parametrix,
    Probes,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Reconstruction, Suite::Norms, Suite::Parametrix, Suite::Probes];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Reconstruction => "reconstruction",
            Suite::Norms => "norms",
            Suite::Parametrix => "parametrix",
            Suite::Probes => "probes",
        }
    }

    /// A suite name or `all`.
    pub fn parse_selector(s: &str) -> Result<Vec<Suite>> {
        match s {
            "all" => Ok(Suite::ALL.to_vec()),
            _ => Suite::ALL
                .iter()
                .find(|x| x.as_str() == s)
                .map(|x| vec![*x])
                .ok_or_else(|| Error::InvalidInput(format!("unknown suite `{s}`"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub observed: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckRecord {
    fn at_most(suite: Suite, name: &str, observed: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        CheckRecord { suite, name: name.into(), passed: observed <= tolerance, observed, tolerance, detail: detail.into() }
    }

    fn at_least(suite: Suite, name: &str, observed: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        CheckRecord { suite, name: name.into(), passed: observed >= tolerance, observed, tolerance, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random instances for the norm-bound checks.
    pub instances: usize,
    /// Tolerance for the partition reconstruction and the parametrix.
    pub tol: f64,
    pub horizons: Horizons,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 42, instances: 1000, tol: 1e-6, horizons: Horizons::default() }
    }
}

pub fn run_suites(suites: &[Suite], opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for s in suites {
        out.extend(match s {
            Suite::Reconstruction => reconstruction_suite(opts)?,
            Suite::Norms => norms_suite(opts)?,
            Suite::Parametrix => parametrix_suite(opts)?,
            Suite::Probes => probes_suite(opts)?,
        });
    }
    Ok(out)
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// `c` with `count` random nonzero entries in `|j| <= spread`, stored with radius `radius`.
pub fn random_sequence(rng: &mut ChaCha8Rng, radius: i64, spread: i64, count: usize) -> Result<SequenceData> {
    let mut c = SequenceData::zeros(1, radius);
    for _ in 0..count {
        let j = rng.gen_range(-spread..=spread);
        c.set(&[j], random_complex(rng))?;
    }
    Ok(c)
}

/// `Σ_{|k| <= degree} c_k e^{2πikx}` with random coefficients.
pub fn random_trig(rng: &mut ChaCha8Rng, degree: i64) -> Profile {
    Profile::trig((-degree..=degree).map(|k| (k, random_complex(rng))).collect())
}

/// Interpolating reconstruction `c = S(R_ψ c)` with truncation `J = 64`
/// (grid half-width 128), and the maximal lattice error over `instances`.
pub fn interpolating_reconstruction(instances: usize, seed: u64) -> Result<(f64, f64)> {
    let j_max = 64;
    let grid = GridSpec::new(1, 2.0 * j_max as f64, 0.25)?;
    let window = interpolating_window(&Profile::gaussian(1.0)?, &grid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut tail: f64 = 0.0;
    for _ in 0..instances {
        let c = random_sequence(&mut rng, j_max, j_max / 2, 16)?;
        let back = evaluation(&synthesis(&c, &window)?, j_max)?;
        for (j, v) in c.iter() {
            worst = worst.max((back.get(&j) - v).norm());
        }
        let sup = c.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
        tail = tail.max(sup * 2.0 * tail_sum(j_max / 2 + 1));
    }
    Ok((worst, tail))
}

/// Partition reconstruction `f = Π(L_ψ f)` for random trig polynomials of
/// degree `<= degree`; maximal error over the fundamental cell.
pub fn partition_reconstruction(instances: usize, degree: i64, seed: u64) -> Result<f64> {
    let grid = GridSpec::default_for(1)?;
    let window = partition_window(&Profile::gaussian(1.0)?, &grid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = grid.lattice_index(&[0]).ok_or_else(|| Error::Misaligned("origin off the grid".into()))?;
    let mut worst: f64 = 0.0;
    for k in 0..instances {
        let f = random_trig(&mut rng, (k as i64 % degree) + 1);
        let back = periodize(&window.modulated(&f)?, default_radius(&grid))?;
        for i in start..start + grid.per_unit() {
            worst = worst.max((back.function.samples()[i] - f.value(grid.point(i)[0])?).norm());
        }
    }
    Ok(worst)
}

fn reconstruction_suite(opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let s = Suite::Reconstruction;
    let (err, tail) = interpolating_reconstruction(64, opts.seed)?;
    let part = partition_reconstruction(32, 8, opts.seed)?;
    let grid = GridSpec::default_for(1)?;
    let gauss = Window::new(Profile::gaussian(1.0)?, WindowKind::Generic, &grid)?;
    let full = periodize(&gauss, default_radius(&grid))?;
    let half = periodize(&gauss, default_radius(&grid) / 2)?;
    let start = grid.lattice_index(&[0]).ok_or_else(|| Error::Misaligned("origin off the grid".into()))?;
    let doubling = (start..start + grid.per_unit())
        .map(|i| (full.function.samples()[i] - half.function.samples()[i]).norm())
        .fold(0.0, f64::max);
    let up = decay_upgrade(&Profile::gaussian(1.0)?, &Profile::bump(8, 1.0)?, (-1.0, 1.0), &grid, 1e-8)?;
    let partition = partition_window(&Profile::gaussian(1.0)?, &grid)?;
    let unit = periodize(&partition, default_radius(&grid))?;
    let unit_gap = (start..start + grid.per_unit()).map(|i| (unit.function.samples()[i] - 1.0).norm()).fold(0.0, f64::max);
    Ok(vec![
        CheckRecord::at_most(s, "interpolating_c_eq_s_r_c", err, 1e-8, format!("J=64, |supp c|<=16, tail bound {tail:.3e}")),
        CheckRecord::at_most(s, "partition_f_eq_pi_l_f", part, opts.tol, "trig degree <= 8"),
        CheckRecord::at_most(s, "partition_sums_to_one", unit_gap, 1e-8, "gaussian phi"),
        CheckRecord::at_most(s, "periodize_doubling_within_tail", doubling, half.tail_bound, "gaussian, J=T/4 vs T/2"),
        CheckRecord::at_most(s, "decay_upgrade_g0", (up.g0 - 1.0).norm(), 1e-8, "gaussian f, bump psi, b-spline chi"),
    ])
}

fn random_window(k: usize, windows: &[Window]) -> &Window {
    &windows[k % windows.len()]
}

fn norms_suite(opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let s = Suite::Norms;
    let grid = GridSpec::default_for(1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    for p in [1.0, 2.0, f64::INFINITY] {
        let model = BanachSpaceModel::lp(p, grid)?;
        let mut mismatches = 0;
        for _ in 0..opts.instances {
            let count = rng.gen_range(1..=24);
            let c = random_sequence(&mut rng, 12, 12, count)?;
            if model.ed_norm(&c)?.to_bits() != c.lp_norm(p).to_bits() {
                mismatches += 1;
            }
        }
        out.push(CheckRecord::at_most(s, &format!("ed_norm_bitwise_p{}", label_p(p)), mismatches as f64, 0.0, format!("{} random sequences", opts.instances)));
    }
    let windows = vec![
        Window::new(Profile::gaussian(1.0)?, WindowKind::Generic, &grid)?,
        interpolating_window(&Profile::gaussian(1.0)?, &grid)?,
        partition_window(&Profile::gaussian(0.5)?, &grid)?,
    ];
    let models = [BanachSpaceModel::lp(1.0, grid)?, BanachSpaceModel::lp(2.0, grid)?, BanachSpaceModel::lp(f64::INFINITY, grid)?, BanachSpaceModel::l0(grid)];
    let mut worst: f64 = 0.0;
    for k in 0..opts.instances {
        let count = rng.gen_range(1..=8);
        let c = random_sequence(&mut rng, default_radius(&grid), default_radius(&grid), count)?;
        let r = synthesis_bound(&c, random_window(k, &windows), &models[k % models.len()])?;
        worst = worst.max(r.ratio);
    }
    out.push(CheckRecord::at_most(s, "synthesis_bound_ratio", worst, 1.0, format!("C={:.6}, {} instances", lattice_constant(1, grid.half_width()), opts.instances)));
    for model in &models {
        let e = weighted_l1_embedding_check(model, opts.instances.min(200), opts.seed)?;
        out.push(CheckRecord::at_most(s, &format!("weighted_l1_embedding_{}", model.describe()), e.worst_ratio, 1.0, format!("constant {:.6}", e.constant)));
    }
    let bump = Profile::bump(8, 1.0)?;
    let mut dom: f64 = 0.0;
    for k in 0..8 {
        let f = GridFunction::sample(grid, &TestFunction::one_d(Profile::gaussian(0.25 + k as f64 / 4.0)?.shifted(k as f64 - 3.0)))?;
        let (lhs, rhs) = sample_convolution_bound(&f, &bump, (-1.0, 1.0), 8, &models[k % models.len()])?;
        dom = dom.max(lhs / rhs);
    }
    out.push(CheckRecord::at_most(s, "sample_convolution_domination", dom, 1.0, "gaussians against bump(8,1)"));
    Ok(out)
}

fn label_p(p: f64) -> String {
    if p.is_infinite() { "inf".into() } else { format!("{p}") }
}

fn parametrix_suite(opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let s = Suite::Parametrix;
    let p = Parametrix1D::new(1)?;
    let f = Profile::bump(8, 1.0)?;
    let pts = default_points();
    let coarse = parametrix_reproduce(&p, &f, 2f64.powi(-6), &pts)?;
    let fine = parametrix_reproduce(&p, &f, 2f64.powi(-7), &pts)?;
    let moved = parametrix_reproduce(&p, &Profile::bump(8, 0.5)?.shifted(1.25), 2f64.powi(-7), &pts)?;
    let h = 2f64.powi(-6);
    let kink = (p.second_difference_at_origin(h)? * h - 1.0).abs();
    Ok(vec![
        CheckRecord::at_most(s, "parametrix_error_h2e-6", coarse.max_error, opts.tol, "bump(8,1), x in [-2,2) step 1/16"),
        CheckRecord::at_least(s, "parametrix_halving_ratio", coarse.max_error / fine.max_error, 3.0, format!("error at 2^-7 {:.3e}", fine.max_error)),
        CheckRecord::at_most(s, "parametrix_translated", moved.max_error, opts.tol, "bump(8,1/2) centred at 1.25"),
        CheckRecord::at_most(s, "fundamental_kink_mass", kink, 1e-15, "h * second difference of |x|/2 at 0"),
    ])
}

/// Gevrey spaces `gs(s)` and power-weight spaces `bb(pow(ρ))`, one list per
/// family; used by the probe and hierarchy checks.
pub fn shipped_families() -> [Vec<String>; 2] {
    [
        ["1/2", "1", "2"].iter().map(|s| format!("gs(s={s})")).collect(),
        ["1/3", "1/2", "1"].iter().map(|r| format!("bb(omega=pow(rho={r}))")).collect(),
    ]
}

/// Agreement of two verdicts up to Inconclusive.
pub fn agree(a: &Verdict, b: &Verdict) -> bool {
    a.status == Status::Inconclusive || b.status == Status::Inconclusive || a.status == b.status
}

/// All ordered pairs within each family.
pub fn shipped_pairs(kind: Kind, hz: &Horizons) -> Result<Vec<(SpaceSpec, SpaceSpec)>> {
    let d = SpaceDefaults { kind: Some(kind), model: ModelKind::Lp(2.0) };
    let mut out = Vec::new();
    for family in shipped_families() {
        let spaces = family.iter().map(|s| parse_space(s, d, hz)).collect::<Result<Vec<_>>>()?;
        for a in &spaces {
            for b in &spaces {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    Ok(out)
}

fn probes_suite(opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let s = Suite::Probes;
    let hz = &opts.horizons;
    let mut out = Vec::new();
    for kind in [Kind::Beurling, Kind::Roumieu] {
        let (mut disagree, mut decided, mut total) = (0, 0, 0);
        let mut first = String::new();
        for (a, b) in shipped_pairs(kind, hz)? {
            let model = a.model()?;
            let checks = [
                (system_relation_functions(&a.fun, &b.fun, kind, hz)?, probe_delta_sequences(&a.fun, &b.fun, kind, &model, hz)?),
                (system_relation_sequences(&a.seq, &b.seq, kind, hz)?, probe_characters(&a.seq, &b.seq, kind, &model, hz)?),
            ];
            for (rel, probe) in checks {
                total += 1;
                if rel.status != Status::Inconclusive && probe.status != Status::Inconclusive {
                    decided += 1;
                }
                if !agree(&rel, &probe) {
                    disagree += 1;
                    if first.is_empty() {
                        first = format!("{} vs {}: relation {}, probe {}", a, b, rel.status, probe.status);
                    }
                }
            }
        }
        let detail = if first.is_empty() { format!("{decided}/{total} decided on both sides") } else { first };
        out.push(CheckRecord::at_most(s, &format!("probe_agreement_{kind}"), disagree as f64, 0.0, detail));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors() {
        assert_eq!(Suite::parse_selector("all").unwrap().len(), 4);
        assert_eq!(Suite::parse_selector("norms").unwrap(), vec![Suite::Norms]);
        assert!(Suite::parse_selector("nope").is_err());
    }

    #[test]
    fn shipped_pairs_stay_within_family() {
        let pairs = shipped_pairs(Kind::Roumieu, &Horizons::default()).unwrap();
        assert_eq!(pairs.len(), 18);
    }
}
