//! Q-chain construction and selection of the best weighting candidate.
//!
//! At an indifference point of chain row `i`,
//!
//! ```text
//! Q(delta_{i+1}) = w(p*) / (1 - w(p*)) * Q(delta_i)
//! ```
//!
//! so a weighting candidate plus the eight row estimates determine Q on the
//! grid up to the anchor `Q(-0.5)`. Candidates are scored by how many
//! training answers they predict.

use serde::{Deserialize, Serialize};

use crate::engine::{AnsweredProbe, PStarRecord};
use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyResponse, ResponseClass};
use crate::regret::{
    grid_index, net_advantage, predict_choice, Choice, DecisionProblem, QCurve, WeightFamily,
    WeightingSpec, DEFAULT_INDIFFERENCE_TOLERANCE, GRID_LEN,
};
use crate::table::{CHAIN_ROWS, TRAINING_ROWS};

/// `Q(-0.5)`; with identity preferences this makes `Q(delta) = delta`.
pub const DEFAULT_ANCHOR: f64 = -0.5;

/// Builds Q on the grid from one record per chain row.
///
/// The two directional estimates of a row are averaged in the candidate's
/// weight space: for a fixed row `e_rh` is affine in `w(p_r)`, so the centre
/// of the indifference band is the mean of the edge weights.
pub fn build_q_chain(
    p_stars: &[PStarRecord],
    w: &WeightingSpec,
    anchor_value: f64,
) -> Result<QCurve> {
    if !(anchor_value < 0.0 && anchor_value.is_finite()) {
        return Err(Error::Input(format!(
            "anchor value must be negative, got {anchor_value}"
        )));
    }
    let mut by_row: [Option<&PStarRecord>; TRAINING_ROWS] = [None; TRAINING_ROWS];
    for record in p_stars {
        let slot = by_row.get_mut(record.row_index).ok_or_else(|| {
            Error::Input(format!("record for unknown chain row {}", record.row_index))
        })?;
        if slot.is_some() {
            return Err(Error::Input(format!(
                "duplicate record for chain row {}",
                record.row_index
            )));
        }
        *slot = Some(record);
    }

    let mut values = [f64::NAN; GRID_LEN];
    values[grid_index(-0.5).expect("anchor is on the grid")] = anchor_value;
    for row in &CHAIN_ROWS {
        let record = by_row[row.index]
            .ok_or_else(|| Error::Input(format!("missing record for chain row {}", row.index)))?;
        let [a, b] = record.phase_values;
        let weight = (w.weight(a)? + w.weight(b)?) / 2.0;
        if weight >= 1.0 {
            return Err(Error::SingularRatio { row: row.index });
        }
        let from = values[grid_index(row.delta_from).expect("chain deltas are on the grid")];
        values[grid_index(row.delta_to).expect("chain deltas are on the grid")] =
            weight / (1.0 - weight) * from;
    }
    QCurve::from_values(values)
}

/// The default candidate set: identity plus both one-parameter families on
/// gamma = 0.30, 0.35, ..., 1.50.
pub fn default_candidates() -> Vec<WeightingSpec> {
    let mut out = vec![WeightingSpec::identity()];
    for family in [WeightFamily::TverskyKahneman, WeightFamily::Prelec] {
        for k in 6..=30 {
            out.push(WeightingSpec::new(family, k as f64 / 20.0).expect("grid is in range"));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub candidates: Vec<WeightingSpec>,
    pub anchor_value: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            candidates: default_candidates(),
            anchor_value: DEFAULT_ANCHOR,
        }
    }
}

/// One answered problem used for fitting or validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub problem: DecisionProblem,
    pub response: FuzzyResponse,
    pub class: ResponseClass,
}

impl From<&AnsweredProbe> for Observation {
    fn from(a: &AnsweredProbe) -> Self {
        Self {
            problem: a.probe.problem,
            response: a.response,
            class: a.class,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub family: WeightFamily,
    pub gamma: f64,
    pub accuracy: f64,
    pub correct: usize,
    pub indifference_band: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub best_w: WeightingSpec,
    pub best_q: QCurve,
    /// Fitted tolerance: predictions with `|e_rh|` at or below it are indifferent.
    pub indifference_band: f64,
    pub training_accuracy: f64,
    /// Only robot-vs-human contradictions count as errors.
    pub relaxed_training_accuracy: f64,
    pub training_size: usize,
    pub monotone_flag: bool,
    pub candidate_table: Vec<CandidateScore>,
}

impl FitReport {
    pub fn net_advantage(&self, problem: &DecisionProblem) -> Result<f64> {
        net_advantage(problem, &self.best_w, &self.best_q)
    }

    pub fn predict(&self, problem: &DecisionProblem) -> Result<Choice> {
        Ok(predict_choice(
            self.net_advantage(problem)?,
            self.indifference_band,
        ))
    }
}

pub fn relaxed_match(predicted: Choice, observed: Choice) -> bool {
    predicted == observed || predicted == Choice::Indifferent || observed == Choice::Indifferent
}

struct Scored {
    spec: WeightingSpec,
    q: QCurve,
    correct: usize,
    band: f64,
}

/// Band that maximizes the number of correct predictions; ties go to the
/// smallest band.
fn best_band(points: &[(f64, Choice)]) -> (usize, f64) {
    let side_hit = |e: f64, c: Choice| predict_choice(e, DEFAULT_INDIFFERENCE_TOLERANCE) == c;
    let mut correct: usize = points.iter().filter(|&&(e, c)| side_hit(e, c)).count();
    let mut best = (correct, DEFAULT_INDIFFERENCE_TOLERANCE);

    let mut order: Vec<(f64, Choice, f64)> = points
        .iter()
        .filter(|(e, _)| e.abs() > DEFAULT_INDIFFERENCE_TOLERANCE)
        .map(|&(e, c)| (e.abs(), c, e))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut i = 0;
    while i < order.len() {
        let level = order[i].0;
        // every point at this |e| flips to an indifferent prediction together
        while i < order.len() && order[i].0 == level {
            let (_, c, e) = order[i];
            if side_hit(e, c) {
                correct -= 1;
            }
            if c == Choice::Indifferent {
                correct += 1;
            }
            i += 1;
        }
        let band = match order.get(i) {
            Some(next) => (level + next.0) / 2.0,
            None => level * 2.0,
        };
        if correct > best.0 {
            best = (correct, band);
        }
    }
    best
}

fn score_candidate(
    spec: WeightingSpec,
    training: &[Observation],
    p_stars: &[PStarRecord],
    anchor_value: f64,
) -> Result<Scored> {
    let q = build_q_chain(p_stars, &spec, anchor_value)?;
    let points = training
        .iter()
        .map(|o| Ok((net_advantage(&o.problem, &spec, &q)?, o.class.choice())))
        .collect::<Result<Vec<_>>>()?;
    let (correct, band) = best_band(&points);
    Ok(Scored {
        spec,
        q,
        correct,
        band,
    })
}

// higher accuracy, then identity, then gamma closest to 1, then family order, then smaller gamma
fn better(a: &Scored, b: &Scored) -> bool {
    use std::cmp::Ordering;
    let key = |s: &Scored| (s.spec.family == WeightFamily::Identity, s.spec.curvature());
    match a.correct.cmp(&b.correct) {
        Ordering::Greater => return true,
        Ordering::Less => return false,
        Ordering::Equal => {}
    }
    let (a_id, a_curv) = key(a);
    let (b_id, b_curv) = key(b);
    if a_id != b_id {
        return a_id;
    }
    match a_curv.total_cmp(&b_curv) {
        Ordering::Less => return true,
        Ordering::Greater => return false,
        Ordering::Equal => {}
    }
    (a.spec.family, a.spec.gamma.to_bits()) < (b.spec.family, b.spec.gamma.to_bits())
}

/// Scores every candidate on the training answers and keeps the best.
pub fn fit_model(
    training: &[Observation],
    p_stars: &[PStarRecord],
    options: &FitOptions,
) -> Result<FitReport> {
    if training.is_empty() {
        return Err(Error::Input("no training answers to fit".into()));
    }
    if options.candidates.is_empty() {
        return Err(Error::Input("empty candidate grid".into()));
    }
    let n = training.len();
    let mut table = Vec::with_capacity(options.candidates.len());
    let mut best: Option<Scored> = None;
    for &spec in &options.candidates {
        let scored = score_candidate(spec, training, p_stars, options.anchor_value)?;
        table.push(CandidateScore {
            family: spec.family,
            gamma: spec.gamma,
            accuracy: scored.correct as f64 / n as f64,
            correct: scored.correct,
            indifference_band: scored.band,
        });
        if best.as_ref().is_none_or(|b| better(&scored, b)) {
            best = Some(scored);
        }
    }
    let best = best.expect("at least one candidate");

    let mut relaxed = 0;
    for o in training {
        let e = net_advantage(&o.problem, &best.spec, &best.q)?;
        if relaxed_match(predict_choice(e, best.band), o.class.choice()) {
            relaxed += 1;
        }
    }

    Ok(FitReport {
        best_w: best.spec,
        monotone_flag: best.q.is_monotone(),
        best_q: best.q,
        indifference_band: best.band,
        training_accuracy: best.correct as f64 / n as f64,
        relaxed_training_accuracy: relaxed as f64 / n as f64,
        training_size: n,
        candidate_table: table,
    })
}
