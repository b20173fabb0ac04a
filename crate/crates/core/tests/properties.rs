use gs_inclusion::functions::{ConjugateTable, WeightFunction};
use gs_inclusion::grammar::{parse_space, SpaceDefaults};
use gs_inclusion::multi_index::MultiIndex;
use gs_inclusion::sequences::{gevrey_omega, round_trip_ln, WeightSequence};
use gs_inclusion::spaces::{seminorm, BanachSpaceModel, GridSpec, ModelKind, Profile, SequenceData, TestFunction};
use gs_inclusion::Horizons;
use num_complex::Complex64;
use proptest::prelude::*;

const RADIUS: i64 = 6;

fn models() -> Vec<BanachSpaceModel> {
    let g = GridSpec::default_for(1).unwrap();
    vec![
        BanachSpaceModel::lp(1.0, g).unwrap(),
        BanachSpaceModel::lp(2.0, g).unwrap(),
        BanachSpaceModel::lp(3.0, g).unwrap(),
        BanachSpaceModel::lp(f64::INFINITY, g).unwrap(),
        BanachSpaceModel::l0(g),
    ]
}

fn seq(values: &[(f64, f64)]) -> SequenceData {
    let v = values.iter().map(|(re, im)| Complex64::new(*re, *im)).collect();
    SequenceData::from_values(1, RADIUS, v).unwrap()
}

fn entries() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), (2 * RADIUS + 1) as usize)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ed_norm_is_solid(c in entries(), shrink in prop::collection::vec(0.0..=1.0f64, (2 * RADIUS + 1) as usize)) {
        let small: Vec<(f64, f64)> = c.iter().zip(&shrink).map(|((re, im), t)| (re * t, im * t)).collect();
        for m in models() {
            let (a, b) = (m.ed_norm(&seq(&small)).unwrap(), m.ed_norm(&seq(&c)).unwrap());
            prop_assert!(a <= b * (1.0 + 1e-12), "{}: {a} > {b}", m.describe());
        }
    }

    #[test]
    fn ed_norm_is_shift_invariant(c in prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 5), k in -3i64..=3) {
        let mut a = SequenceData::zeros(1, RADIUS);
        let mut b = SequenceData::zeros(1, RADIUS);
        for (j, (re, im)) in c.iter().enumerate() {
            a.set(&[j as i64 - 2], Complex64::new(*re, *im)).unwrap();
            b.set(&[j as i64 - 2 + k], Complex64::new(*re, *im)).unwrap();
        }
        for m in models() {
            let (x, y) = (m.ed_norm(&a).unwrap(), m.ed_norm(&b).unwrap());
            prop_assert!(close(x, y), "{}: {x} vs {y}", m.describe());
        }
    }

    #[test]
    fn ed_norm_between_sup_and_sum(c in entries()) {
        let c = seq(&c);
        for m in models() {
            let u = m.unit_cell_norm().unwrap();
            let n = m.ed_norm(&c).unwrap();
            prop_assert!(c.lp_norm(f64::INFINITY) * u <= n * (1.0 + 1e-12));
            prop_assert!(n <= c.lp_norm(1.0) * u * (1.0 + 1e-12));
        }
    }

    #[test]
    fn gevrey_closed_form_matches_brute_force(s in 0.25..3.0f64, h in 0.25..4.0f64, t in 0.1..1e4f64) {
        let lu = (t / h).ln();
        // The maximiser sits near (t/h)^(1/s); keep it inside the scanned orders.
        prop_assume!(lu / s < 11.0);
        let (mut best, mut lf) = (0.0f64, 0.0f64);
        for q in 1..200_000u32 {
            lf += (q as f64).ln();
            best = best.max(q as f64 * lu - s * lf);
        }
        let w = gevrey_omega(s, h, t);
        prop_assert!((w - best).abs() <= 1e-9 * best.max(1.0), "{w} vs {best}");
    }

    #[test]
    fn round_trip_never_exceeds(s in 0.3..2.5f64, h in 0.5..2.0f64, q in 0usize..40) {
        let m = WeightSequence::gevrey(1, s, h).unwrap();
        let alpha = MultiIndex::new(vec![q]);
        let back = round_trip_ln(&m, &alpha, 64).unwrap();
        prop_assert!(back <= m.ln_value(&alpha).unwrap() + 1e-9);
    }

    #[test]
    fn fenchel_young(a in 0.1..4.0f64, b in 1.2..3.0f64, x in 0.0..8.0f64, y in 0.0..10.0f64) {
        let xs: Vec<f64> = (0..=2000).map(|i| i as f64 / 100.0).collect();
        let fs: Vec<f64> = xs.iter().map(|v| a * v.powf(b)).collect();
        let t = ConjugateTable::new(xs, fs, 10.0, 64).unwrap();
        if let Some(star) = t.eval(y) {
            prop_assert!(a * x.powf(b) + star >= x * y - 1e-9 * (1.0 + x * y));
        }
    }

    #[test]
    fn space_spec_display_reparses(s in 1usize..8, t in 1usize..8, beurling in any::<bool>(), p in 0usize..4) {
        let hz = Horizons::default();
        let kind = if beurling { "beurling" } else { "roumieu" };
        let model = ["lp(p=1)", "lp(p=2)", "lp(p=inf)", "l0"][p];
        let src = format!("gs(s={s}/4,t={t}/4,kind={kind},model={model})");
        let d = SpaceDefaults { kind: None, model: ModelKind::Lp(2.0) };
        let once = parse_space(&src, d, &hz).unwrap();
        let twice = parse_space(&once.to_string(), d, &hz).unwrap();
        prop_assert_eq!(once.to_string(), twice.to_string());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn seminorm_is_monotone_in_the_sequence(a in 0.5..2.0f64, s in 0.5..1.5f64, ds in 0.1..1.0f64) {
        let model = BanachSpaceModel::lp(2.0, GridSpec::default_for(1).unwrap()).unwrap();
        let f = TestFunction::one_d(Profile::gaussian(a).unwrap());
        let w = WeightFunction::One;
        let small = seminorm(&f, &WeightSequence::gevrey(1, s, 1.0).unwrap(), &w, &model, 24).unwrap();
        let large = seminorm(&f, &WeightSequence::gevrey(1, s + ds, 1.0).unwrap(), &w, &model, 24).unwrap();
        prop_assert!(large.ln_value <= small.ln_value + 1e-12);
        let shorter = seminorm(&f, &WeightSequence::gevrey(1, s, 1.0).unwrap(), &w, &model, 12).unwrap();
        prop_assert!(shorter.ln_value <= small.ln_value + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn interpolating_reconstruction_holds_for_any_seed(seed in any::<u64>()) {
        let (err, _) = gs_inclusion::verify::interpolating_reconstruction(2, seed).unwrap();
        prop_assert!(err <= 1e-8, "{err}");
    }
}
