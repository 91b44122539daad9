//! Adaptive survey state machine.
//!
//! A session is ten modules of ten problems: eight training modules, one
//! per chain row, and two identical validation modules (after the fourth
//! training module and at the end). An optional practice module can lead
//! the session.
//!
//! Each training module runs a two-direction bisection on `p_r`. The first
//! phase starts at 0.9 (robot clearly preferred) and tracks the boundary
//! where robot-leaning answers stop; the second starts at 0.1 and tracks
//! where human-leaning answers stop. Both directions under-adjust toward
//! the indifference region, so the module estimate is the mean of the two
//! boundaries.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{classify_response, FuzzyResponse, ResponseClass};
use crate::regret::DecisionProblem;
use crate::table::{ChainRow, CHAIN_ROWS, TRAINING_ROWS};

pub const MODULE_BUDGET: usize = 10;
pub const VALIDATION_SIZE: usize = 10;
pub const DESCEND_ANCHOR: f64 = 0.9;
pub const ASCEND_ANCHOR: f64 = 0.1;

/// Outcome pair of the optional practice module; not a chain row.
pub const PRACTICE_OUTCOMES: (f64, f64) = (-0.95, -0.45);

/// Row index carried by the practice module's p* record.
pub const PRACTICE_ROW: usize = usize::MAX;

/// Training modules before the first validation module.
const FIRST_VALIDATION_AFTER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanConfig {
    pub money_scale: f64,
    pub seed: u64,
    #[serde(default)]
    pub practice: bool,
}

impl PlanConfig {
    pub fn new(money_scale: f64, seed: u64) -> Self {
        Self {
            money_scale,
            seed,
            practice: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModuleKind {
    Practice,
    Training { row: usize },
    Validation { pass: usize },
}

impl ModuleKind {
    pub fn is_staircase(self) -> bool {
        !matches!(self, ModuleKind::Validation { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionSchedule {
    pub money_scale: f64,
    pub seed: u64,
    /// Modules in presentation order.
    pub modules: Vec<ModuleKind>,
    pub validation_set: Vec<DecisionProblem>,
    pub per_module_budget: usize,
}

impl SessionSchedule {
    pub fn total_problems(&self) -> usize {
        self.modules.len() * self.per_module_budget
    }

    /// Training rows in presentation order.
    pub fn training_rows(&self) -> Vec<usize> {
        self.modules
            .iter()
            .filter_map(|m| match m {
                ModuleKind::Training { row } => Some(*row),
                _ => None,
            })
            .collect()
    }

    /// Positions (1-based) of the validation modules among the ten scored modules.
    pub fn validation_positions(&self) -> Vec<usize> {
        self.modules
            .iter()
            .filter(|m| !matches!(m, ModuleKind::Practice))
            .enumerate()
            .filter(|(_, m)| matches!(m, ModuleKind::Validation { .. }))
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Problem template for a staircase module; `p_r` is filled per probe.
    pub fn staircase_outcomes(&self, kind: ModuleKind) -> Option<(f64, f64)> {
        match kind {
            ModuleKind::Practice => Some(PRACTICE_OUTCOMES),
            ModuleKind::Training { row } => {
                let r: &ChainRow = &CHAIN_ROWS[row];
                Some((r.xr_norm, r.xh_norm))
            }
            ModuleKind::Validation { .. } => None,
        }
    }
}

/// Plans a session: module order, chain rows and the seeded validation set.
pub fn plan_session(config: &PlanConfig) -> Result<SessionSchedule> {
    if !(config.money_scale > 0.0 && config.money_scale.is_finite()) {
        return Err(Error::Config(format!(
            "money_scale must be a positive amount, got {}",
            config.money_scale
        )));
    }
    let mut modules = Vec::with_capacity(11);
    if config.practice {
        modules.push(ModuleKind::Practice);
    }
    for row in 0..TRAINING_ROWS {
        if row == FIRST_VALIDATION_AFTER {
            modules.push(ModuleKind::Validation { pass: 0 });
        }
        modules.push(ModuleKind::Training { row });
    }
    modules.push(ModuleKind::Validation { pass: 1 });

    Ok(SessionSchedule {
        money_scale: config.money_scale,
        seed: config.seed,
        modules,
        validation_set: validation_problems(config.money_scale, config.seed),
        per_module_budget: MODULE_BUDGET,
    })
}

// Outcomes and probabilities are drawn in twentieths to keep grid values exact.
fn validation_problems(money_scale: f64, seed: u64) -> Vec<DecisionProblem> {
    let training_pairs: Vec<(i64, i64)> = CHAIN_ROWS
        .iter()
        .map(|r| (twentieths(r.xr_norm), twentieths(r.xh_norm)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut drawn: Vec<(i64, i64, i64)> = Vec::with_capacity(VALIDATION_SIZE);
    while drawn.len() < VALIDATION_SIZE {
        // |xh| <= 0.9 and |xr - xh| <= 0.9 keep Q arguments on the interpolated range
        let h: i64 = rng.random_range(1..=18);
        let r: i64 = rng.random_range(h + 1..=(h + 18).min(20));
        let p: i64 = rng.random_range(2..=18);
        if training_pairs.contains(&(-r, -h)) {
            continue;
        }
        let triple = (-r, -h, p);
        if !drawn.contains(&triple) {
            drawn.push(triple);
        }
    }
    drawn
        .into_iter()
        .map(|(r, h, p)| DecisionProblem {
            xr_norm: r as f64 / 20.0,
            xh_norm: h as f64 / 20.0,
            p_r: p as f64 / 20.0,
            money_scale,
        })
        .collect()
}

fn twentieths(x: f64) -> i64 {
    (x * 20.0).round() as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    DescendFirst,
    AscendSecond,
    Done,
}

/// Two-direction bisection inside one module.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaircaseState {
    pub phase: Phase,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub probes_used: usize,
    pub budget: usize,
    pub phase_probes: usize,
    pub p_star_phase1: Option<f64>,
    pub p_star_phase2: Option<f64>,
    pub converged: [bool; 2],
    /// Smallest phase-1 probe not answered human-leaning; caps the phase-2 bracket.
    pub ascend_ceiling: f64,
}

impl StaircaseState {
    pub fn new(budget: usize) -> Result<Self> {
        if budget < 2 {
            return Err(Error::Config(format!(
                "module budget must allow one probe per direction, got {budget}"
            )));
        }
        Ok(Self {
            phase: Phase::DescendFirst,
            bracket_lo: 0.0,
            bracket_hi: 1.0,
            probes_used: 0,
            budget,
            phase_probes: 0,
            p_star_phase1: None,
            p_star_phase2: None,
            converged: [false; 2],
            ascend_ceiling: 1.0,
        })
    }

    pub fn descend_budget(&self) -> usize {
        self.budget.div_ceil(2)
    }

    pub fn is_done(&self) -> bool {
        self.phase == Phase::Done
    }

    pub fn midpoint(&self) -> f64 {
        (self.bracket_lo + self.bracket_hi) / 2.0
    }

    pub fn next_probe(&self) -> Result<f64> {
        next_probe(self)
    }
}

pub fn next_probe(state: &StaircaseState) -> Result<f64> {
    match state.phase {
        Phase::Done => Err(Error::State("staircase already finished")),
        _ if state.probes_used >= state.budget => Err(Error::State("module budget exhausted")),
        Phase::DescendFirst if state.phase_probes == 0 => Ok(DESCEND_ANCHOR),
        Phase::AscendSecond if state.phase_probes == 0 => {
            if ASCEND_ANCHOR < state.bracket_hi {
                Ok(ASCEND_ANCHOR)
            } else {
                Ok(state.midpoint())
            }
        }
        _ => Ok(state.midpoint()),
    }
}

/// Advances the staircase with the class of the answer to `probe`.
///
/// Descending, a robot-leaning answer lowers `bracket_hi` and anything else
/// raises `bracket_lo`; ascending, a human-leaning answer raises
/// `bracket_lo` and anything else lowers `bracket_hi`. When a direction's
/// budget is spent its bracket midpoint becomes that direction's estimate.
pub fn apply_response(
    state: &StaircaseState,
    probe: f64,
    class: ResponseClass,
) -> Result<StaircaseState> {
    let expected = next_probe(state)?;
    if probe != expected {
        return Err(Error::Protocol {
            expected,
            got: probe,
        });
    }
    let mut next = state.clone();
    next.probes_used += 1;
    next.phase_probes += 1;
    match state.phase {
        Phase::DescendFirst => {
            if class == ResponseClass::RobotLeaning {
                next.bracket_hi = probe;
            } else {
                next.bracket_lo = probe;
            }
            if class != ResponseClass::HumanLeaning {
                next.ascend_ceiling = next.ascend_ceiling.min(probe);
            }
            if class == ResponseClass::Indifferent {
                next.converged[0] = true;
            }
            if next.phase_probes >= state.descend_budget() {
                next.p_star_phase1 = Some(next.midpoint());
                next.phase = Phase::AscendSecond;
                next.phase_probes = 0;
                next.bracket_lo = 0.0;
                next.bracket_hi = next.ascend_ceiling;
            }
        }
        Phase::AscendSecond => {
            if class == ResponseClass::HumanLeaning {
                next.bracket_lo = probe;
            } else {
                next.bracket_hi = probe;
            }
            if class == ResponseClass::Indifferent {
                next.converged[1] = true;
            }
            if next.probes_used >= state.budget {
                next.p_star_phase2 = Some(next.midpoint());
                next.phase = Phase::Done;
            }
        }
        Phase::Done => unreachable!("next_probe rejects finished staircases"),
    }
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PStarRecord {
    pub row_index: usize,
    pub p_star: f64,
    /// Descending and ascending estimates.
    pub phase_values: [f64; 2],
    /// Whether each direction met an indifferent answer (false: budget fallback).
    pub converged: [bool; 2],
}

impl PStarRecord {
    pub fn from_phases(
        row_index: usize,
        phase_values: [f64; 2],
        converged: [bool; 2],
    ) -> Result<Self> {
        let p_star = (phase_values[0] + phase_values[1]) / 2.0;
        if !(p_star > 0.0 && p_star < 1.0) {
            return Err(Error::Input(format!(
                "row {row_index}: p* = {p_star} must lie strictly inside (0, 1)"
            )));
        }
        Ok(Self {
            row_index,
            p_star,
            phase_values,
            converged,
        })
    }

    /// A record whose two directions agree exactly.
    pub fn exact(row_index: usize, p_star: f64) -> Result<Self> {
        Self::from_phases(row_index, [p_star, p_star], [true, true])
    }
}

pub fn estimate_p_star(state: &StaircaseState, row_index: usize) -> Result<PStarRecord> {
    match (state.phase, state.p_star_phase1, state.p_star_phase2) {
        (Phase::Done, Some(a), Some(b)) => {
            PStarRecord::from_phases(row_index, [a, b], state.converged)
        }
        _ => Err(Error::State(
            "both directions must finish before estimating p*",
        )),
    }
}

/// A problem as presented, with its place in the session.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    /// Zero-based position in the session.
    pub sequence: usize,
    /// Zero-based module position.
    pub module: usize,
    pub kind: ModuleKind,
    pub problem: DecisionProblem,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsweredProbe {
    pub probe: Probe,
    pub response: FuzzyResponse,
    pub class: ResponseClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Progress {
    pub answered: usize,
    pub total: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub class: ResponseClass,
    pub progress: Progress,
    /// Set when the answer closed a staircase module.
    pub p_star: Option<(ModuleKind, PStarRecord)>,
    pub module_finished: bool,
    pub session_complete: bool,
}

/// Drives a whole schedule. Deterministic in the sequence of responses.
#[derive(Debug, Clone)]
pub struct SessionEngine {
    schedule: SessionSchedule,
    module: usize,
    staircase: Option<StaircaseState>,
    validation_cursor: usize,
    answered: Vec<AnsweredProbe>,
    p_stars: Vec<PStarRecord>,
    practice_p_star: Option<PStarRecord>,
}

impl SessionEngine {
    pub fn new(schedule: SessionSchedule) -> Result<Self> {
        let mut engine = Self {
            schedule,
            module: 0,
            staircase: None,
            validation_cursor: 0,
            answered: Vec::new(),
            p_stars: Vec::new(),
            practice_p_star: None,
        };
        engine.enter_module()?;
        Ok(engine)
    }

    pub fn schedule(&self) -> &SessionSchedule {
        &self.schedule
    }

    pub fn staircase(&self) -> Option<&StaircaseState> {
        self.staircase.as_ref()
    }

    pub fn answered(&self) -> &[AnsweredProbe] {
        &self.answered
    }

    /// Chain-row estimates in completion order.
    pub fn p_stars(&self) -> &[PStarRecord] {
        &self.p_stars
    }

    pub fn practice_p_star(&self) -> Option<&PStarRecord> {
        self.practice_p_star.as_ref()
    }

    pub fn is_complete(&self) -> bool {
        self.module >= self.schedule.modules.len()
    }

    pub fn progress(&self) -> Progress {
        Progress {
            answered: self.answered.len(),
            total: self.schedule.total_problems(),
        }
    }

    fn enter_module(&mut self) -> Result<()> {
        self.validation_cursor = 0;
        self.staircase = match self.schedule.modules.get(self.module) {
            Some(kind) if kind.is_staircase() => {
                Some(StaircaseState::new(self.schedule.per_module_budget)?)
            }
            _ => None,
        };
        Ok(())
    }

    /// The next problem to present, or `None` once the session is complete.
    pub fn current_probe(&self) -> Option<Probe> {
        let kind = *self.schedule.modules.get(self.module)?;
        let problem = match kind {
            ModuleKind::Validation { .. } => self.schedule.validation_set[self.validation_cursor],
            _ => {
                let (xr, xh) = self.schedule.staircase_outcomes(kind)?;
                let state = self.staircase.as_ref()?;
                DecisionProblem {
                    xr_norm: xr,
                    xh_norm: xh,
                    p_r: state.next_probe().ok()?,
                    money_scale: self.schedule.money_scale,
                }
            }
        };
        Some(Probe {
            sequence: self.answered.len(),
            module: self.module,
            kind,
            problem,
        })
    }

    /// Records the answer to the current problem.
    ///
    /// Invalid responses are rejected without changing any state.
    pub fn record(&mut self, response: FuzzyResponse) -> Result<StepOutcome> {
        let probe = self
            .current_probe()
            .ok_or(Error::State("session is already complete"))?;
        let class = classify_response(&response)?;

        let mut p_star = None;
        let module_finished = match probe.kind {
            ModuleKind::Validation { .. } => {
                self.validation_cursor + 1 >= self.schedule.validation_set.len()
            }
            kind => {
                let state = self
                    .staircase
                    .as_ref()
                    .ok_or(Error::State("staircase module without state"))?;
                let next = apply_response(state, probe.problem.p_r, class)?;
                let done = next.is_done();
                if done {
                    let row = match kind {
                        ModuleKind::Training { row } => row,
                        _ => PRACTICE_ROW,
                    };
                    let record = estimate_p_star(&next, row)?;
                    p_star = Some((kind, record));
                }
                self.staircase = Some(next);
                done
            }
        };

        self.answered.push(AnsweredProbe {
            probe,
            response,
            class,
        });
        if let Some((kind, record)) = p_star {
            match kind {
                ModuleKind::Practice => self.practice_p_star = Some(record),
                _ => self.p_stars.push(record),
            }
        }
        if module_finished {
            self.module += 1;
            self.enter_module()?;
        } else if matches!(probe.kind, ModuleKind::Validation { .. }) {
            self.validation_cursor += 1;
        }

        Ok(StepOutcome {
            class,
            progress: self.progress(),
            p_star,
            module_finished,
            session_complete: self.is_complete(),
        })
    }

    pub fn training_answers(&self) -> impl Iterator<Item = &AnsweredProbe> {
        self.answered
            .iter()
            .filter(|a| matches!(a.probe.kind, ModuleKind::Training { .. }))
    }

    pub fn validation_answers(&self, pass: usize) -> impl Iterator<Item = &AnsweredProbe> {
        self.answered
            .iter()
            .filter(move |a| a.probe.kind == ModuleKind::Validation { pass })
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;

    fn fresh() -> StaircaseState {
        StaircaseState::new(MODULE_BUDGET).unwrap()
    }

    #[test]
    fn schedule_structure() {
        let s = plan_session(&PlanConfig::new(100.0, 7)).unwrap();
        assert_eq!(s.modules.len(), 10);
        assert_eq!(s.total_problems(), 100);
        assert_eq!(s.training_rows(), (0..8).collect::<Vec<_>>());
        assert_eq!(s.validation_positions(), vec![5, 10]);
        assert_eq!(s.modules[0], ModuleKind::Training { row: 0 });
        assert_eq!(s.staircase_outcomes(s.modules[0]), Some((-0.9, -0.5)));
        assert_eq!(s.validation_set.len(), VALIDATION_SIZE);
    }

    #[test]
    fn practice_module_leads() {
        let mut cfg = PlanConfig::new(100.0, 7);
        cfg.practice = true;
        let s = plan_session(&cfg).unwrap();
        assert_eq!(s.modules[0], ModuleKind::Practice);
        assert_eq!(s.modules.len(), 11);
        assert_eq!(s.validation_positions(), vec![5, 10]);
    }

    #[test]
    fn plan_is_a_function_of_the_seed() {
        let a = plan_session(&PlanConfig::new(100.0, 11)).unwrap();
        let b = plan_session(&PlanConfig::new(100.0, 11)).unwrap();
        let c = plan_session(&PlanConfig::new(100.0, 12)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.validation_set, c.validation_set);
    }

    #[test]
    fn validation_problems_respect_the_grid() {
        for seed in 0..200 {
            let s = plan_session(&PlanConfig::new(80.0, seed)).unwrap();
            for (i, p) in s.validation_set.iter().enumerate() {
                p.validate().unwrap();
                assert!(p.xh_norm.abs() <= 0.9 + 1e-12);
                assert!(p.failure_difference().abs() <= 0.9 + 1e-12);
                assert!((0.1 - 1e-12..=0.9 + 1e-12).contains(&p.p_r));
                for x in [p.xr_norm, p.xh_norm, p.p_r] {
                    assert!(((x * 20.0).round() - x * 20.0).abs() < 1e-9);
                }
                assert!(!CHAIN_ROWS
                    .iter()
                    .any(|r| r.xr_norm == p.xr_norm && r.xh_norm == p.xh_norm));
                assert!(!s.validation_set[..i].contains(p));
                assert_eq!(p.money_scale, 80.0);
            }
        }
    }

    #[test]
    fn plan_rejects_bad_money_scale() {
        assert!(matches!(
            plan_session(&PlanConfig::new(0.0, 1)),
            Err(Error::Config(_))
        ));
        assert!(plan_session(&PlanConfig::new(f64::NAN, 1)).is_err());
    }

    #[test]
    fn anchors_and_midpoints() {
        let s = fresh();
        assert_eq!(next_probe(&s).unwrap(), 0.9);
        let mid = StaircaseState {
            bracket_lo: 0.0,
            bracket_hi: 0.5,
            phase_probes: 2,
            probes_used: 2,
            ..fresh()
        };
        assert_eq!(next_probe(&mid).unwrap(), 0.25);
        let ascend = StaircaseState {
            phase: Phase::AscendSecond,
            probes_used: 5,
            ..fresh()
        };
        assert_eq!(next_probe(&ascend).unwrap(), 0.1);
        let low_ceiling = StaircaseState {
            bracket_hi: 0.08,
            ..ascend.clone()
        };
        assert_eq!(next_probe(&low_ceiling).unwrap(), 0.04);
        let done = StaircaseState {
            phase: Phase::Done,
            ..fresh()
        };
        assert!(matches!(next_probe(&done), Err(Error::State(_))));
    }

    #[test]
    fn bisection_updates() {
        let s = StaircaseState {
            phase_probes: 1,
            probes_used: 1,
            ..fresh()
        };
        let s = apply_response(&s, 0.5, ResponseClass::RobotLeaning).unwrap();
        assert_eq!((s.bracket_lo, s.bracket_hi), (0.0, 0.5));
        let s = apply_response(&s, 0.25, ResponseClass::HumanLeaning).unwrap();
        assert_eq!((s.bracket_lo, s.bracket_hi), (0.25, 0.5));
    }

    #[test]
    fn indifference_moves_each_direction_toward_its_edge() {
        // descending: indifferent means the robot boundary is above the probe
        let s = StaircaseState {
            phase_probes: 1,
            probes_used: 1,
            bracket_hi: 0.9,
            ..fresh()
        };
        let s = apply_response(&s, 0.45, ResponseClass::Indifferent).unwrap();
        assert_eq!((s.bracket_lo, s.bracket_hi), (0.45, 0.9));
        assert!(s.converged[0]);
        assert_eq!(s.ascend_ceiling, 0.45);
        // ascending: indifferent means the human boundary is below the probe
        let s = StaircaseState {
            phase: Phase::AscendSecond,
            probes_used: 5,
            ..fresh()
        };
        let s = apply_response(&s, 0.1, ResponseClass::Indifferent).unwrap();
        assert_eq!((s.bracket_lo, s.bracket_hi), (0.0, 0.1));
        assert!(s.converged[1]);
    }

    #[test]
    fn ascend_ceiling_ignores_human_leaning_answers() {
        let mut s = fresh();
        for class in [
            ResponseClass::RobotLeaning,
            ResponseClass::HumanLeaning,
            ResponseClass::RobotLeaning,
            ResponseClass::HumanLeaning,
            ResponseClass::RobotLeaning,
        ] {
            let p = next_probe(&s).unwrap();
            s = apply_response(&s, p, class).unwrap();
        }
        // probes 0.9 R, 0.45 H, 0.675 R, 0.5625 H, 0.61875 R
        assert_eq!(s.phase, Phase::AscendSecond);
        assert_abs_diff_eq!(s.ascend_ceiling, 0.61875);
        assert_eq!((s.bracket_lo, s.bracket_hi), (0.0, s.ascend_ceiling));
        assert_eq!(next_probe(&s).unwrap(), ASCEND_ANCHOR);
    }

    #[test]
    fn mismatched_probe_is_a_protocol_error() {
        let s = fresh();
        assert!(matches!(
            apply_response(&s, 0.5, ResponseClass::RobotLeaning),
            Err(Error::Protocol { .. })
        ));
    }

    #[test]
    fn module_always_spends_its_budget() {
        for class in [
            ResponseClass::RobotLeaning,
            ResponseClass::HumanLeaning,
            ResponseClass::Indifferent,
        ] {
            let mut s = fresh();
            let mut n = 0;
            while !s.is_done() {
                let p = s.next_probe().unwrap();
                s = apply_response(&s, p, class).unwrap();
                n += 1;
                if n == 5 {
                    assert_eq!(s.phase, Phase::AscendSecond);
                    assert!(s.p_star_phase1.is_some());
                }
            }
            assert_eq!(n, MODULE_BUDGET);
            let rec = estimate_p_star(&s, 0).unwrap();
            assert!(rec.p_star > 0.0 && rec.p_star < 1.0);
        }
    }

    #[test]
    fn p_star_estimates() {
        let r = PStarRecord::from_phases(0, [0.44, 0.46], [true, true]).unwrap();
        assert_abs_diff_eq!(r.p_star, 0.45, epsilon = 1e-15);
        let r = PStarRecord::from_phases(3, [0.44, 0.50], [true, false]).unwrap();
        assert_abs_diff_eq!(r.p_star, 0.47, epsilon = 1e-15);
        assert_eq!(r.converged, [true, false]);
        assert!(matches!(estimate_p_star(&fresh(), 0), Err(Error::State(_))));
    }

    #[test]
    fn engine_walks_the_schedule() {
        let schedule = plan_session(&PlanConfig::new(100.0, 3)).unwrap();
        let validation = schedule.validation_set.clone();
        let mut engine = SessionEngine::new(schedule).unwrap();
        let first = engine.current_probe().unwrap();
        assert_eq!(first.kind, ModuleKind::Training { row: 0 });
        assert_eq!(first.problem.p_r, 0.9);
        assert_eq!((first.problem.xr_norm, first.problem.xh_norm), (-0.9, -0.5));

        let bad = FuzzyResponse::new(0.3, 0.0, 0.0);
        assert!(engine.record(bad).is_err());
        assert_eq!(engine.progress().answered, 0);

        let robot = FuzzyResponse::new(1.0, 0.0, 0.0);
        let mut kinds = Vec::new();
        while let Some(probe) = engine.current_probe() {
            kinds.push(probe.kind);
            let out = engine.record(robot).unwrap();
            assert_eq!(out.progress.answered, probe.sequence + 1);
        }
        assert!(engine.is_complete());
        assert_eq!(
            engine.progress(),
            Progress {
                answered: 100,
                total: 100
            }
        );
        assert_eq!(engine.p_stars().len(), 8);
        assert_eq!(engine.training_answers().count(), 80);
        let pass0: Vec<_> = engine
            .validation_answers(0)
            .map(|a| a.probe.problem)
            .collect();
        let pass1: Vec<_> = engine
            .validation_answers(1)
            .map(|a| a.probe.problem)
            .collect();
        assert_eq!(pass0, validation);
        assert_eq!(pass1, validation);
        assert_eq!(kinds[40], ModuleKind::Validation { pass: 0 });
        assert!(matches!(engine.record(robot), Err(Error::State(_))));
    }
}
