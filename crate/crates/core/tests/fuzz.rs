use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treeduce::fuzz::{
    check_model, fuzz, generate, model_seeds, random_tree, unary_ab, FuzzConfig, FuzzModel, LookaheadMode,
    ModelKind,
};
use treeduce::terms::parse_term;

#[test]
fn runs_are_reproducible() {
    for kind in [ModelKind::Tdtt, ModelKind::Mtt, ModelKind::Sst] {
        let cfg = FuzzConfig::new(kind, 7, 5, 5);
        let a = fuzz(&cfg);
        let b = fuzz(&cfg);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
        assert!(a.passed(), "{a}");
        assert_eq!(a.models.len(), 5);
    }
}

#[test]
fn single_model_can_be_replayed() {
    let cfg = FuzzConfig::new(ModelKind::Mtt, 11, 4, 5);
    let report = fuzz(&cfg);
    let seeds = model_seeds(11, 4);
    for (m, seed) in report.models.iter().zip(seeds) {
        assert_eq!(m.seed, seed);
        let (model, rejected) = generate(&cfg, seed);
        assert_eq!(rejected, m.rejected);
        assert_eq!(check_model(&cfg, &model, seed), m.checks);
    }
}

#[test]
fn different_seeds_give_different_models() {
    let cfg = FuzzConfig::new(ModelKind::Tdtt, 1, 1, 5);
    let texts: std::collections::HashSet<String> =
        model_seeds(3, 8).into_iter().map(|s| generate(&cfg, s).0.to_string()).collect();
    assert!(texts.len() > 1);
}

#[test]
fn lookahead_modes() {
    let mut cfg = FuzzConfig::new(ModelKind::Tdtt, 5, 1, 5);
    cfg.lookahead = LookaheadMode::Always;
    for s in model_seeds(5, 10) {
        let FuzzModel::TopDown(tt) = generate(&cfg, s).0 else { panic!() };
        assert!(tt.lookahead().is_some());
    }
    cfg.lookahead = LookaheadMode::Never;
    for s in model_seeds(5, 10) {
        let FuzzModel::TopDown(tt) = generate(&cfg, s).0 else { panic!() };
        assert!(tt.lookahead().is_none());
    }
}

#[test]
fn random_trees_respect_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = treeduce::fuzz::abc();
    for _ in 0..200 {
        let t = random_tree(&mut rng, &a, 30);
        assert!(t.size() <= 30);
        assert!(t.check(&a).is_ok());
    }
    let u = unary_ab();
    let t = random_tree(&mut rng, &u, 10);
    assert!(parse_term(&t.to_string(), &u).is_ok());
}

#[test]
fn kind_names_parse() {
    for kind in [ModelKind::Tdtt, ModelKind::Mtt, ModelKind::Sst] {
        assert_eq!(kind.name().parse::<ModelKind>().unwrap(), kind);
    }
    assert!("dfa".parse::<ModelKind>().is_err());
}
