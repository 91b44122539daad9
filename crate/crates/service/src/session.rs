//! One survey session as an event-sourced state machine.
//!
//! Live commands produce events and apply them through the same path used
//! for replay, so a log always rebuilds the state that wrote it.

use chrono::{DateTime, Utc};
use serde::Serialize;
use uuid::Uuid;

use regret_elicit::engine::{ModuleKind, Probe, Progress};
use regret_elicit::fuzzy::{FuzzyResponse, ResponseClass};
use regret_elicit::metrics::CloudRow;
use regret_elicit::{
    analyze_session, plan_session, FitOptions, FitReport, MetricsReport, PStarRecord, PlanConfig,
    SessionAnalysis, SessionEngine,
};

use crate::error::{Result, ServiceError};
use crate::events::{Event, EventBody, SessionConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ack {
    pub class: ResponseClass,
    pub progress: Progress,
    pub module_finished: bool,
    pub session_complete: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NextProblem {
    Problem(Probe),
    Complete(Progress),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionReport {
    pub session_id: Uuid,
    pub money_scale: f64,
    pub seed: u64,
    pub p_stars: Vec<PStarRecord>,
    pub fit: FitReport,
    pub metrics: Option<MetricsReport>,
    pub membership_cloud: Vec<CloudRow>,
}

#[derive(Debug, Clone)]
pub struct Session {
    config: SessionConfig,
    created_at: DateTime<Utc>,
    engine: SessionEngine,
    presented: Option<Probe>,
    /// p* produced by the last recorded response, until its event is seen.
    pending_p_star: Option<(ModuleKind, PStarRecord)>,
    last_module_finished: bool,
    analysis: Option<SessionAnalysis>,
    fitted_logged: bool,
    metrics_logged: bool,
}

impl Session {
    /// Plans a new session and returns it with its creation event.
    pub fn create(config: SessionConfig) -> Result<(Self, Event)> {
        let event = Event::now(EventBody::SessionCreated(config.clone()));
        let session = Self::from_config(config, event.ts)?;
        Ok((session, event))
    }

    fn from_config(config: SessionConfig, created_at: DateTime<Utc>) -> Result<Self> {
        let schedule = plan_session(&PlanConfig {
            money_scale: config.money_scale,
            seed: config.seed,
            practice: config.practice,
        })?;
        Ok(Self {
            config,
            created_at,
            engine: SessionEngine::new(schedule)?,
            presented: None,
            pending_p_star: None,
            last_module_finished: false,
            analysis: None,
            fitted_logged: false,
            metrics_logged: false,
        })
    }

    /// Rebuilds a session from its log. Also returns the events a crash
    /// may have kept from being written (fit and metrics of a finished session).
    pub fn replay(events: &[Event]) -> Result<(Self, Vec<Event>)> {
        let (first, rest) = events
            .split_first()
            .ok_or_else(|| ServiceError::Corrupt("empty log".into()))?;
        let EventBody::SessionCreated(config) = &first.body else {
            return Err(ServiceError::Corrupt(format!(
                "log starts with {} instead of session-created",
                first.body.type_name()
            )));
        };
        let mut session = Self::from_config(config.clone(), first.ts)?;
        for event in rest {
            session.apply(event)?;
        }
        let mut repair = Vec::new();
        if let Some((module, record)) = session.pending_p_star {
            session.emit(EventBody::PStarEstimated { module, record }, &mut repair)?;
        }
        repair.extend(session.finalize()?);
        Ok((session, repair))
    }

    fn apply(&mut self, event: &Event) -> Result<()> {
        let corrupt = |msg: String| Err(ServiceError::Corrupt(msg));
        match &event.body {
            EventBody::SessionCreated(_) => return corrupt("second session-created".into()),
            EventBody::ProblemPresented(probe) => {
                if self.presented.is_some() {
                    return corrupt("problem presented twice without a response".into());
                }
                if self.engine.current_probe().as_ref() != Some(probe) {
                    return corrupt(format!(
                        "presented problem {} is not the engine's next",
                        probe.sequence
                    ));
                }
                self.presented = Some(*probe);
            }
            EventBody::ResponseRecorded {
                sequence,
                response,
                class,
            } => {
                let Some(probe) = self.presented else {
                    return corrupt(format!("response {sequence} without a presented problem"));
                };
                if probe.sequence != *sequence {
                    return corrupt(format!(
                        "response {sequence} answers problem {}",
                        probe.sequence
                    ));
                }
                let outcome = self.engine.record(*response)?;
                if outcome.class != *class {
                    return corrupt(format!("response {sequence} was logged with another class"));
                }
                self.presented = None;
                self.pending_p_star = outcome.p_star;
                self.last_module_finished = outcome.module_finished;
            }
            EventBody::PStarEstimated { module, record } => {
                if self.pending_p_star.take() != Some((*module, *record)) {
                    return corrupt("p-star-estimated does not match the staircase".into());
                }
            }
            EventBody::ModelFitted(_) => {
                if !self.engine.is_complete() {
                    return corrupt("model fitted before the session finished".into());
                }
                self.fitted_logged = true;
            }
            EventBody::MetricsComputed { .. } => {
                if !self.engine.is_complete() {
                    return corrupt("metrics computed before the session finished".into());
                }
                self.metrics_logged = true;
            }
        }
        Ok(())
    }

    fn emit(&mut self, body: EventBody, out: &mut Vec<Event>) -> Result<()> {
        let event = Event::now(body);
        self.apply(&event)?;
        out.push(event);
        Ok(())
    }

    /// Presents the next problem. Asking again before answering is a conflict
    /// that carries the outstanding problem.
    pub fn present(&mut self) -> Result<(NextProblem, Vec<Event>)> {
        if let Some(probe) = self.presented {
            return Err(ServiceError::Conflict {
                message: "a presented problem is still awaiting its response",
                outstanding: Some(Box::new(probe)),
            });
        }
        let Some(probe) = self.engine.current_probe() else {
            return Ok((NextProblem::Complete(self.engine.progress()), Vec::new()));
        };
        let mut events = Vec::with_capacity(1);
        self.emit(EventBody::ProblemPresented(probe), &mut events)?;
        Ok((NextProblem::Problem(probe), events))
    }

    /// Records the answer to the presented problem. Invalid responses leave
    /// the session unchanged.
    pub fn submit(&mut self, response: FuzzyResponse) -> Result<(Ack, Vec<Event>)> {
        let Some(probe) = self.presented else {
            return Err(ServiceError::conflict(if self.engine.is_complete() {
                "session is complete"
            } else {
                "no problem is awaiting a response"
            }));
        };
        let class = regret_elicit::classify_response(&response)?;
        let mut events = Vec::new();
        self.emit(
            EventBody::ResponseRecorded {
                sequence: probe.sequence,
                response,
                class,
            },
            &mut events,
        )?;
        let module_finished = self.last_module_finished;
        if let Some((module, record)) = self.pending_p_star {
            self.emit(EventBody::PStarEstimated { module, record }, &mut events)?;
        }
        events.extend(self.finalize()?);
        let ack = Ack {
            class,
            progress: self.engine.progress(),
            module_finished,
            session_complete: self.engine.is_complete(),
        };
        Ok((ack, events))
    }

    /// Fits and scores a finished session, emitting whichever of the two
    /// result events is not logged yet.
    fn finalize(&mut self) -> Result<Vec<Event>> {
        if !self.engine.is_complete() {
            return Ok(Vec::new());
        }
        if self.analysis.is_none() {
            self.analysis = Some(analyze_session(&self.engine, &FitOptions::default())?);
        }
        let analysis = self.analysis.clone().expect("analysis computed above");
        let mut events = Vec::new();
        if !self.fitted_logged {
            self.emit(EventBody::ModelFitted(analysis.fit), &mut events)?;
        }
        if !self.metrics_logged {
            let note = analysis
                .metrics
                .is_none()
                .then(|| "no validation problem was answered consistently".to_string());
            self.emit(
                EventBody::MetricsComputed {
                    metrics: analysis.metrics,
                    note,
                },
                &mut events,
            )?;
        }
        Ok(events)
    }

    pub fn id(&self) -> Uuid {
        self.config.session_id
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    pub fn created_at(&self) -> DateTime<Utc> {
        self.created_at
    }

    pub fn engine(&self) -> &SessionEngine {
        &self.engine
    }

    pub fn outstanding(&self) -> Option<Probe> {
        self.presented
    }

    pub fn progress(&self) -> Progress {
        self.engine.progress()
    }

    pub fn is_complete(&self) -> bool {
        self.engine.is_complete()
    }

    pub fn report(&self) -> Result<SessionReport> {
        let analysis = self.analysis.as_ref().ok_or(ServiceError::conflict(
            "report is available once the session is complete",
        ))?;
        Ok(SessionReport {
            session_id: self.config.session_id,
            money_scale: self.config.money_scale,
            seed: self.config.seed,
            p_stars: self.engine.p_stars().to_vec(),
            fit: analysis.fit.clone(),
            metrics: analysis.metrics.clone(),
            membership_cloud: analysis.membership_cloud.clone(),
        })
    }
}
