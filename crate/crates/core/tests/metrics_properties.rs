use proptest::prelude::*;
use sfc_core::{evaluate, FactorTaxonomy, LabelVector, ABSENT};

fn label_vector() -> impl Strategy<Value = LabelVector> {
    let t = FactorTaxonomy::default();
    let slots: Vec<_> = t
        .factors()
        .iter()
        .map(|f| (Just(f.name.clone()), prop::sample::select(f.all_classes())))
        .collect();
    slots.prop_map(LabelVector::from_pairs)
}

fn pairs() -> impl Strategy<Value = Vec<(LabelVector, LabelVector)>> {
    prop::collection::vec((label_vector(), label_vector()), 1..30)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn scores_are_bounded_and_f1_is_harmonic(samples in pairs()) {
        let (p, g): (Vec<_>, Vec<_>) = samples.into_iter().unzip();
        let r = evaluate(&p, &g).unwrap();
        for v in [r.accuracy, r.precision, r.recall, r.f1] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        if r.precision + r.recall > 0.0 {
            prop_assert_eq!(r.f1, 2.0 * r.precision * r.recall / (r.precision + r.recall));
        } else {
            prop_assert_eq!(r.f1, 0.0);
        }
        for f in &r.per_factor {
            prop_assert!(r.accuracy <= f.accuracy);
            prop_assert!((0.0..=1.0).contains(&f.f1));
        }
        let tp: u64 = r.per_factor.iter().map(|f| f.counts.tp).sum();
        prop_assert_eq!(tp, r.counts.tp);
    }

    #[test]
    fn sample_order_does_not_matter(samples in pairs(), seed in any::<u64>()) {
        let (p, g): (Vec<_>, Vec<_>) = samples.iter().cloned().unzip();
        let mut shuffled = samples;
        sfc_core::rng::SeededRng::new(seed).shuffle(&mut shuffled);
        let (ps, gs): (Vec<_>, Vec<_>) = shuffled.into_iter().unzip();
        let a = evaluate(&p, &g).unwrap();
        let b = evaluate(&ps, &gs).unwrap();
        prop_assert_eq!(a.counts, b.counts);
        prop_assert_eq!(a.accuracy, b.accuracy);
        prop_assert_eq!(a.f1, b.f1);
    }

    #[test]
    fn self_evaluation_is_perfect(golds in prop::collection::vec(label_vector(), 1..30)) {
        let r = evaluate(&golds, &golds).unwrap();
        prop_assert_eq!(r.accuracy, 1.0);
        prop_assert_eq!(r.counts.fp + r.counts.fn_, 0);
        let present = golds.iter().flat_map(|g| g.iter()).any(|(_, c)| c != ABSENT);
        prop_assert_eq!(r.f1, if present { 1.0 } else { 0.0 });
    }
}

#[test]
fn report_serializes_with_fn_key() {
    let g = [FactorTaxonomy::default().all_absent()];
    let json = serde_json::to_value(evaluate(&g, &g).unwrap()).unwrap();
    assert_eq!(json["counts"]["fn"], 0);
    assert_eq!(json["per_factor"].as_array().unwrap().len(), 4);
}
