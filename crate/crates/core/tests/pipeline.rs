use regret_elicit::engine::ModuleKind;
use regret_elicit::*;

fn identity_session(seed: u64) -> (SessionEngine, SessionAnalysis) {
    let mut subject = SyntheticSubject::new(SubjectSpec::identity(seed)).unwrap();
    let engine = run_synthetic(&PlanConfig::new(100.0, seed), &mut subject).unwrap();
    let analysis = analyze_session(&engine, &FitOptions::default()).unwrap();
    (engine, analysis)
}

#[test]
fn identity_subject_end_to_end() {
    let (engine, analysis) = identity_session(7);
    assert_eq!(engine.answered().len(), 100);
    let spec = SubjectSpec::identity(7);
    for record in engine.p_stars() {
        let exact = spec
            .closed_form_p_star(&CHAIN_ROWS[record.row_index])
            .unwrap();
        assert!(
            (record.p_star - exact).abs() <= 0.06,
            "row {}",
            record.row_index
        );
    }
    assert_eq!(analysis.fit.best_w, WeightingSpec::identity());
    assert!(analysis.fit.training_accuracy >= 0.95);
    assert!(analysis.fit.monotone_flag);
    assert_eq!(analysis.fit.training_size, 80);
    assert_eq!(analysis.membership_cloud.len(), 80);
    let metrics = analysis.metrics.unwrap();
    assert_eq!(metrics.revisit_accuracy, 1.0);
}

#[test]
fn full_equality_ratings_sit_near_model_zero() {
    let (_, analysis) = identity_session(7);
    for row in analysis
        .membership_cloud
        .iter()
        .filter(|r| r.mu_equal == 1.0)
    {
        assert!(row.e_rh.abs() <= 0.06, "e_rh = {}", row.e_rh);
    }
}

#[test]
fn practice_module_is_excluded_from_fitting() {
    let config = PlanConfig {
        practice: true,
        ..PlanConfig::new(100.0, 3)
    };
    let mut subject = SyntheticSubject::new(SubjectSpec::identity(3)).unwrap();
    let engine = run_synthetic(&config, &mut subject).unwrap();
    assert_eq!(engine.answered().len(), 110);
    assert_eq!(engine.answered()[0].probe.kind, ModuleKind::Practice);
    assert!(engine.practice_p_star().is_some());
    assert_eq!(engine.p_stars().len(), 8);
    let analysis = analyze_session(&engine, &FitOptions::default()).unwrap();
    assert_eq!(analysis.fit.training_size, 80);
}

#[test]
fn incomplete_session_cannot_be_analyzed() {
    let engine = SessionEngine::new(plan_session(&PlanConfig::new(100.0, 1)).unwrap()).unwrap();
    assert!(matches!(
        analyze_session(&engine, &FitOptions::default()),
        Err(Error::State(_))
    ));
}

#[test]
fn rejected_response_leaves_the_engine_untouched() {
    let mut engine = SessionEngine::new(plan_session(&PlanConfig::new(100.0, 1)).unwrap()).unwrap();
    engine.record(FuzzyResponse::new(1.0, 0.0, 0.0)).unwrap();
    let before = engine.current_probe();
    assert!(matches!(
        engine.record(FuzzyResponse::new(0.3, 0.0, 0.0)),
        Err(Error::Level { .. })
    ));
    assert!(engine.record(FuzzyResponse::new(0.0, 0.0, 0.0)).is_err());
    assert_eq!(engine.current_probe(), before);
    assert_eq!(engine.progress().answered, 1);
}
