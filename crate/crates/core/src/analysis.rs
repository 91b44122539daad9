//! Post-session analysis and the synthetic-session driver.

use serde::{Deserialize, Serialize};

use crate::engine::{plan_session, PlanConfig, SessionEngine};
use crate::error::{Error, Result};
use crate::fit::{fit_model, FitOptions, FitReport, Observation};
use crate::metrics::{compute_metrics, export_membership_cloud, CloudRow, MetricsReport};
use crate::subject::SyntheticSubject;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionAnalysis {
    pub fit: FitReport,
    /// Absent when no validation problem was answered consistently.
    pub metrics: Option<MetricsReport>,
    pub membership_cloud: Vec<CloudRow>,
}

/// Fits and scores a completed session.
pub fn analyze_session(engine: &SessionEngine, options: &FitOptions) -> Result<SessionAnalysis> {
    if !engine.is_complete() {
        return Err(Error::State("session is not complete"));
    }
    let training: Vec<Observation> = engine.training_answers().map(Observation::from).collect();
    let fit = fit_model(&training, engine.p_stars(), options)?;
    let pass1: Vec<Observation> = engine
        .validation_answers(0)
        .map(Observation::from)
        .collect();
    let pass2: Vec<Observation> = engine
        .validation_answers(1)
        .map(Observation::from)
        .collect();
    let metrics = match compute_metrics(&fit, &pass1, &pass2) {
        Ok(m) => Some(m),
        Err(Error::DegenerateMetric(_)) => None,
        Err(e) => return Err(e),
    };
    let membership_cloud = export_membership_cloud(&training, &fit)?;
    Ok(SessionAnalysis {
        fit,
        metrics,
        membership_cloud,
    })
}

/// Lets a synthetic subject answer every problem of a fresh session.
pub fn run_synthetic(config: &PlanConfig, subject: &mut SyntheticSubject) -> Result<SessionEngine> {
    let mut engine = SessionEngine::new(plan_session(config)?)?;
    while let Some(probe) = engine.current_probe() {
        let response = subject.respond(&probe.problem)?;
        engine.record(response)?;
    }
    Ok(engine)
}
