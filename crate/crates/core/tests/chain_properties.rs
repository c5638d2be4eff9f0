use sfc_core::{
    embed_hash, evaluate, fit_chain, generate_synthetic, predict_chain, split_train_test,
    ChainConfig, ChainModel, EmbedderSpec, EmbeddingMatrix, FactorTaxonomy, LabeledUtterance,
    SyntheticSpec,
};

fn embed(records: &[LabeledUtterance], dim: usize, seed: u64) -> EmbeddingMatrix {
    let rows: Vec<Vec<f64>> = records
        .iter()
        .map(|r| embed_hash(&r.text, dim, seed).unwrap())
        .collect();
    EmbeddingMatrix::from_rows(dim, &rows).unwrap()
}

fn trained() -> (ChainModel, Vec<LabeledUtterance>) {
    let t = FactorTaxonomy::default();
    let all = generate_synthetic(&SyntheticSpec::new(300, 5), &t).unwrap();
    let (train, test) = split_train_test(&all, 0.8, 7).unwrap();
    let x = embed(&train, 128, 1);
    let labels: Vec<_> = train.iter().map(|r| r.labels.clone()).collect();
    let cfg = ChainConfig::new(EmbedderSpec::Hash { dim: 128, seed: 1 }, 32);
    (fit_chain(&x, &labels, &t, &cfg).unwrap(), test)
}

#[test]
fn serde_round_trip_predicts_identically() {
    let (model, test) = trained();
    let json = serde_json::to_string(&model).unwrap();
    let back: ChainModel = serde_json::from_str(&json).unwrap();
    back.validate().unwrap();
    assert_eq!(back, model);
    assert_eq!(serde_json::to_string(&back).unwrap(), json);
    let x = embed(&test, 128, 1);
    for i in 0..x.rows() {
        assert_eq!(
            predict_chain(&model, x.row(i)).unwrap(),
            predict_chain(&back, x.row(i)).unwrap()
        );
    }
}

#[test]
fn head_widths_follow_the_chain() {
    let (model, _) = trained();
    let dims: Vec<usize> = model.heads.iter().map(|h| h.input_dim).collect();
    assert_eq!(dims, [32, 32 + 6, 32 + 6 + 3, 32 + 6 + 3 + 4]);
}

#[test]
fn learns_the_synthetic_cues() {
    let (model, test) = trained();
    let x = embed(&test, 128, 1);
    let preds: Vec<_> = (0..x.rows())
        .map(|i| predict_chain(&model, x.row(i)).unwrap())
        .collect();
    let golds: Vec<_> = test.iter().map(|r| r.labels.clone()).collect();
    let r = evaluate(&preds, &golds).unwrap();
    assert!(r.accuracy >= 0.9, "accuracy {}", r.accuracy);
    assert!(r.f1 >= 0.95, "f1 {}", r.f1);
}

#[test]
fn wrong_input_width_is_rejected() {
    let (model, _) = trained();
    assert!(matches!(
        predict_chain(&model, &[0.0; 5]),
        Err(sfc_core::Error::Dimension { .. })
    ));
}
