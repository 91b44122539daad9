//! Adaptive elicitation of a regret-theory decision model from fuzzy
//! robot-vs-human choices.

pub mod analysis;
pub mod engine;
pub mod error;
pub mod fit;
pub mod fuzzy;
pub mod metrics;
pub mod regret;
pub mod subject;
pub mod table;

pub use analysis::{analyze_session, run_synthetic, SessionAnalysis};
pub use engine::{plan_session, PStarRecord, PlanConfig, SessionEngine, SessionSchedule};
pub use error::{Error, Result};
pub use fit::{build_q_chain, fit_model, FitOptions, FitReport, Observation};
pub use fuzzy::{classify_response, FuzzyResponse, MembershipSet, ResponseClass};
pub use metrics::{compute_metrics, paired_t, MetricsReport, PairedT};
pub use regret::{
    net_advantage, predict_choice, Choice, DecisionProblem, QCurve, WeightFamily, WeightingSpec,
};
pub use subject::{SubjectSpec, SyntheticSubject};
pub use table::{ChainRow, CHAIN_ROWS};
