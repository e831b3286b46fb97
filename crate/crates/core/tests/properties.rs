use proptest::prelude::*;

use maxvar_core::maximal::{build_profile, OperatorKind};
use maxvar_core::peaks::{extract_guarded, extract_system};
use maxvar_core::rational::{int, ratio, Rational};
use maxvar_core::variation::{var_profile, var_ratio, var_sequence, windowed_variation};
use maxvar_core::{FiniteSequence, Interval};

fn kind() -> impl Strategy<Value = OperatorKind> {
    prop_oneof![Just(OperatorKind::Centered), Just(OperatorKind::NonCentered)]
}

fn sequence() -> impl Strategy<Value = FiniteSequence> {
    (
        -40i64..40,
        prop::collection::vec((0i64..6, 1i64..5), 1..10),
    )
        .prop_filter_map("nonzero", |(offset, raw)| {
            let vals: Vec<Rational> = raw.into_iter().map(|(n, d)| ratio(n, d)).collect();
            let f = FiniteSequence::normalize(offset, vals).ok()?;
            (!f.is_zero()).then_some(f)
        })
}

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..12, 1i64..12).prop_map(|(n, d)| ratio(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn translation_moves_everything(f in sequence(), d in -100i64..100, k in kind()) {
        let g = f.translate(d);
        let (a, b) = (var_ratio(&f, k).unwrap(), var_ratio(&g, k).unwrap());
        prop_assert_eq!(&a.var_mf, &b.var_mf);
        prop_assert_eq!(&a.ratio, &b.ratio);

        let pf = build_profile(&f, OperatorKind::Centered).unwrap();
        let pg = build_profile(&g, OperatorKind::Centered).unwrap();
        let sf = extract_guarded(&pf).unwrap();
        let sg = extract_guarded(&pg).unwrap();
        prop_assert_eq!(sf.peaks.len(), sg.peaks.len());
        for (x, y) in sf.peaks.iter().zip(&sg.peaks) {
            prop_assert_eq!((x.p + d, x.r + d, x.q + d), (y.p, y.r, y.q));
            prop_assert_eq!(&x.var, &y.var);
            prop_assert_eq!(x.essential, y.essential);
            prop_assert_eq!(x.omega, y.omega);
        }
    }

    #[test]
    fn reflection_mirrors_values(f in sequence(), k in kind()) {
        let g = f.reflect();
        prop_assert_eq!(var_sequence(&f), var_sequence(&g));
        let (a, b) = (var_ratio(&f, k).unwrap(), var_ratio(&g, k).unwrap());
        prop_assert_eq!(&a.var_mf, &b.var_mf);

        let pf = build_profile(&f, k).unwrap();
        let pg = build_profile(&g, k).unwrap();
        let w = pf.guarded_window().unwrap();
        let mirrored = Interval::new(-w.hi, -w.lo).unwrap();
        let mut back = pg.values_on(mirrored);
        back.reverse();
        prop_assert_eq!(pf.values_on(w), back);

        let heights = |p: &maxvar_core::MaximalProfile| -> Vec<Rational> {
            extract_guarded(p).unwrap().peaks.into_iter().map(|x| x.var).collect()
        };
        let cf = build_profile(&f, OperatorKind::Centered).unwrap();
        let cg = build_profile(&g, OperatorKind::Centered).unwrap();
        let mut hg = heights(&cg);
        hg.reverse();
        prop_assert_eq!(heights(&cf), hg);
    }

    #[test]
    fn scaling_is_linear(f in sequence(), c in positive(), k in kind()) {
        let g = f.scale(&c).unwrap();
        prop_assert_eq!(var_sequence(&g), &c * var_sequence(&f));
        let (a, b) = (var_ratio(&f, k).unwrap(), var_ratio(&g, k).unwrap());
        prop_assert_eq!(&b.var_mf, &(&c * &a.var_mf));
        prop_assert_eq!(a.ratio, b.ratio);

        let pf = build_profile(&f, k).unwrap();
        let pg = build_profile(&g, k).unwrap();
        let w = pf.guarded_window().unwrap();
        let scaled: Vec<Rational> = pf.values_on(w).iter().map(|v| v * &c).collect();
        prop_assert_eq!(pg.values_on(w), scaled);
    }

    #[test]
    fn telescoping_on_random_windows(
        f in sequence(),
        left in 0i64..30,
        right in 0i64..30,
    ) {
        let p = build_profile(&f, OperatorKind::Centered).unwrap();
        let s = f.support().unwrap();
        let w = Interval::new(s.lo - left, s.hi + right).unwrap();
        let sys = extract_system(&p, w).unwrap();
        prop_assert_eq!(sys.telescoped_variation(), windowed_variation(&p.values_on(w)));
    }

    #[test]
    fn closed_form_matches_long_truncation(f in sequence(), k in kind()) {
        let p = build_profile(&f, k).unwrap();
        let s = f.support().unwrap();
        let w = Interval::new(s.lo - 60, s.hi + 60).unwrap();
        let vals = p.values_on(w);
        let truncated = windowed_variation(&vals) + &vals[0] + vals.last().unwrap();
        prop_assert_eq!(var_profile(&p), truncated);
    }

    #[test]
    fn variation_of_profile_is_at_least_peak_sum(f in sequence()) {
        let p = build_profile(&f, OperatorKind::Centered).unwrap();
        let sys = extract_guarded(&p).unwrap();
        prop_assert!(sys.peak_variation() <= var_profile(&p));
        prop_assert!(var_profile(&p) >= int(0));
    }
}
