//! What the survey page shows for one problem. All strings are final: the
//! UI renders them verbatim.

use serde::Serialize;

use regret_elicit::engine::{Probe, Progress};
use regret_elicit::regret::{expected_value, Cents, Side};
use regret_elicit::DecisionProblem;

pub const QUESTION_TITLE: &str = "Which option would you choose economically?";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeCell {
    pub event: &'static str,
    pub amount: String,
    pub amount_cents: i64,
    pub probability: String,
    /// Bar lengths in [0, 1]: outcome relative to the money scale, and probability.
    pub outcome_bar: f64,
    pub probability_bar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptionCell {
    pub label: &'static str,
    pub outcomes: Vec<OutcomeCell>,
    pub expected_value: String,
    pub expected_value_cents: i64,
}

/// Robot loss versus human loss.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub outcome_difference: String,
    pub outcome_difference_cents: i64,
    pub probability_difference: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemDisplay {
    pub title: &'static str,
    pub robot: OptionCell,
    pub human: OptionCell,
    pub comparison: Comparison,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemPayload {
    pub sequence: usize,
    pub progress: Progress,
    /// Normalized outcomes; dollars appear only in `display`.
    pub problem: DecisionProblem,
    pub display: ProblemDisplay,
}

impl ProblemPayload {
    pub fn new(probe: &Probe, progress: Progress) -> Self {
        Self {
            sequence: probe.sequence,
            progress,
            problem: probe.problem,
            display: render(&probe.problem),
        }
    }
}

/// Percentages with at most one decimal: 90%, 67.5%, 61.9%.
pub fn percent(p: f64) -> String {
    let tenths = (p * 1000.0).round() / 10.0;
    if tenths.fract() == 0.0 {
        format!("{tenths:.0}%")
    } else {
        format!("{tenths:.1}%")
    }
}

fn cell(event: &'static str, x_norm: f64, p: f64, money_scale: f64) -> OutcomeCell {
    let cents = Cents::from_dollars(x_norm * money_scale);
    OutcomeCell {
        event,
        amount: cents.to_string(),
        amount_cents: cents.0,
        probability: percent(p),
        outcome_bar: x_norm.abs(),
        probability_bar: p,
    }
}

pub fn render(problem: &DecisionProblem) -> ProblemDisplay {
    let scale = problem.money_scale;
    let robot_ev = expected_value(problem, Side::Robot);
    let human_ev = expected_value(problem, Side::Human);
    let diff = Cents::from_dollars((problem.xr_norm - problem.xh_norm) * scale);
    ProblemDisplay {
        title: QUESTION_TITLE,
        robot: OptionCell {
            label: "Robot",
            outcomes: vec![
                cell("success", 0.0, problem.p_r, scale),
                cell("failure", problem.xr_norm, 1.0 - problem.p_r, scale),
            ],
            expected_value: robot_ev.to_string(),
            expected_value_cents: robot_ev.0,
        },
        human: OptionCell {
            label: "Human",
            outcomes: vec![cell("certain", problem.xh_norm, 1.0, scale)],
            expected_value: human_ev.to_string(),
            expected_value_cents: human_ev.0,
        },
        comparison: Comparison {
            outcome_difference: diff.to_string(),
            outcome_difference_cents: diff.0,
            probability_difference: percent(-problem.p_r),
        },
    }
}
