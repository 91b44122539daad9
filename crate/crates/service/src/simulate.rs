//! Groups of synthetic subjects run through full logged sessions.

use serde::Serialize;
use uuid::Uuid;

use regret_elicit::metrics::{correlation, mean, std_dev};
use regret_elicit::{
    paired_t, MetricsReport, PStarRecord, PairedT, SubjectSpec, SyntheticSubject, WeightingSpec,
    CHAIN_ROWS,
};

use crate::error::Result;
use crate::events::{SessionConfig, SubjectKind};
use crate::session::NextProblem;
use crate::store::SessionStore;

#[derive(Debug, Clone, Copy)]
pub struct SimulationConfig {
    pub subjects: usize,
    /// Ground truth shared by the group; each subject gets its own seed.
    pub subject: SubjectSpec,
    pub money_scale: f64,
    pub seed: u64,
    pub practice: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubjectResult {
    pub session_id: Uuid,
    pub seed: u64,
    pub p_stars: Vec<PStarRecord>,
    /// Exact indifference points of a noiseless subject.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_p_stars: Option<Vec<f64>>,
    pub best_w: WeightingSpec,
    pub indifference_band: f64,
    pub q_grid: Vec<f64>,
    pub training_accuracy: f64,
    pub metrics: Option<MetricsReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Spread {
    pub mean: f64,
    pub sd: f64,
}

impl Spread {
    fn of(xs: &[f64]) -> Option<Self> {
        (!xs.is_empty()).then(|| Spread {
            mean: mean(xs),
            sd: std_dev(xs),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub subjects: usize,
    /// Subjects with at least one consistent validation answer.
    pub scored_subjects: usize,
    pub averaged_prediction_accuracy: Option<Spread>,
    pub revisit_accuracy: Option<Spread>,
    pub consistent_prediction_accuracy: Option<Spread>,
    /// Between averaged prediction accuracy and revisit accuracy.
    pub correlation: Option<f64>,
    /// Averaged prediction accuracy against revisit accuracy.
    pub paired_t: Option<PairedT>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paired_t_note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupReport {
    pub subject_model: SubjectSpec,
    pub results: Vec<SubjectResult>,
    pub summary: GroupSummary,
}

/// Runs one subject through a logged session.
pub fn run_subject(
    store: &SessionStore,
    spec: SubjectSpec,
    money_scale: f64,
    practice: bool,
) -> Result<SubjectResult> {
    let mut subject = SyntheticSubject::new(spec)?;
    let config = SessionConfig {
        session_id: Uuid::new_v4(),
        money_scale,
        seed: spec.seed,
        practice,
        subject: SubjectKind::Synthetic { spec },
    };
    let id = config.session_id;
    let handle = store.create(config)?;
    let mut session = handle.lock();
    loop {
        let (next, events) = session.present()?;
        store.persist(id, &events)?;
        let NextProblem::Problem(probe) = next else {
            break;
        };
        let response = subject.respond(&probe.problem)?;
        let (_, events) = session.submit(response)?;
        store.persist(id, &events)?;
    }
    let report = session.report()?;
    let closed_form_p_stars = if spec.noise_sigma == 0.0 {
        Some(
            CHAIN_ROWS
                .iter()
                .map(|row| spec.closed_form_p_star(row))
                .collect::<regret_elicit::Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    Ok(SubjectResult {
        session_id: id,
        seed: spec.seed,
        p_stars: report.p_stars,
        closed_form_p_stars,
        best_w: report.fit.best_w,
        indifference_band: report.fit.indifference_band,
        q_grid: report.fit.best_q.values().to_vec(),
        training_accuracy: report.fit.training_accuracy,
        metrics: report.metrics,
    })
}

pub fn simulate(store: &SessionStore, config: &SimulationConfig) -> Result<GroupReport> {
    let mut results = Vec::with_capacity(config.subjects);
    for i in 0..config.subjects {
        let spec = SubjectSpec {
            seed: config.seed.wrapping_add(i as u64),
            ..config.subject
        };
        results.push(run_subject(
            store,
            spec,
            config.money_scale,
            config.practice,
        )?);
    }
    Ok(GroupReport {
        subject_model: config.subject,
        summary: summarize(&results),
        results,
    })
}

pub fn summarize(results: &[SubjectResult]) -> GroupSummary {
    let scored: Vec<&MetricsReport> = results.iter().filter_map(|r| r.metrics.as_ref()).collect();
    let averaged: Vec<f64> = scored
        .iter()
        .map(|m| m.averaged_prediction_accuracy)
        .collect();
    let revisit: Vec<f64> = scored.iter().map(|m| m.revisit_accuracy).collect();
    let consistent: Vec<f64> = scored
        .iter()
        .map(|m| m.consistent_prediction_accuracy)
        .collect();
    let (paired_t, paired_t_note) = match paired_t(&averaged, &revisit) {
        Ok(t) => (Some(t), None),
        Err(e) => (None, Some(e.to_string())),
    };
    GroupSummary {
        subjects: results.len(),
        scored_subjects: scored.len(),
        averaged_prediction_accuracy: Spread::of(&averaged),
        revisit_accuracy: Spread::of(&revisit),
        consistent_prediction_accuracy: Spread::of(&consistent),
        correlation: correlation(&averaged, &revisit),
        paired_t,
        paired_t_note,
    }
}
