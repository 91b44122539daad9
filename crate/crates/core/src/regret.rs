//! Regret-theory decision model for the robot-vs-human choice.
//!
//! A problem pits a risky robot option (success at no cost with probability
//! `p_r`, otherwise a failure cost `xr_norm`) against a certain human cost
//! `xh_norm`. Outcomes are normalized by the subject's regret-salient money
//! magnitude. The net advantage of the robot option is
//!
//! ```text
//! e_rh = w(p_r) * Q(0 - xh) + (1 - w(p_r)) * Q(xr - xh)
//! ```
//!
//! and its sign decides the preference.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const GAMMA_MIN: f64 = 0.3;
pub const GAMMA_MAX: f64 = 1.5;

/// Tolerance below which a net advantage counts as indifference.
pub const DEFAULT_INDIFFERENCE_TOLERANCE: f64 = 1e-9;

const RANGE_SLACK: f64 = 1e-12;

/// One robot-vs-human lottery pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionProblem {
    /// Normalized robot-failure cost, in [-1, 0).
    pub xr_norm: f64,
    /// Normalized human cost, in (-1, 0).
    pub xh_norm: f64,
    /// Robot success probability.
    pub p_r: f64,
    /// The subject's money magnitude in dollars.
    pub money_scale: f64,
}

impl DecisionProblem {
    pub fn new(xr_norm: f64, xh_norm: f64, p_r: f64, money_scale: f64) -> Result<Self> {
        let problem = Self {
            xr_norm,
            xh_norm,
            p_r,
            money_scale,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn validate(&self) -> Result<()> {
        let Self {
            xr_norm,
            xh_norm,
            p_r,
            money_scale,
        } = *self;
        if !(xr_norm >= -1.0 - RANGE_SLACK && xr_norm < xh_norm && xh_norm < 0.0 && xh_norm > -1.0)
        {
            return Err(Error::Problem(format!(
                "need -1 <= xr_norm < xh_norm < 0, got xr_norm={xr_norm}, xh_norm={xh_norm}"
            )));
        }
        if !(0.0..=1.0).contains(&p_r) {
            return Err(Error::Problem(format!("p_r = {p_r} outside [0, 1]")));
        }
        if !(money_scale > 0.0 && money_scale.is_finite()) {
            return Err(Error::Problem(format!(
                "money_scale = {money_scale} must be > 0"
            )));
        }
        Ok(())
    }

    /// Same outcomes, different robot success probability.
    pub fn with_probability(&self, p_r: f64) -> Self {
        Self { p_r, ..*self }
    }

    /// Argument of Q for the "robot succeeds" state: `0 - xh`.
    pub fn success_difference(&self) -> f64 {
        -self.xh_norm
    }

    /// Argument of Q for the "robot fails" state: `xr - xh`.
    pub fn failure_difference(&self) -> f64 {
        self.xr_norm - self.xh_norm
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightFamily {
    Identity,
    TverskyKahneman,
    Prelec,
}

impl WeightFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightFamily::Identity => "identity",
            WeightFamily::TverskyKahneman => "tversky-kahneman",
            WeightFamily::Prelec => "prelec",
        }
    }
}

impl fmt::Display for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for WeightFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(WeightFamily::Identity),
            "tversky-kahneman" | "tk" => Ok(WeightFamily::TverskyKahneman),
            "prelec" => Ok(WeightFamily::Prelec),
            other => Err(Error::Config(format!("unknown weighting family {other:?}"))),
        }
    }
}

/// A one-parameter probability weighting function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeightingSpec")]
pub struct WeightingSpec {
    pub family: WeightFamily,
    /// Shape parameter; 1.0 for the identity family.
    pub gamma: f64,
}

#[derive(Deserialize)]
struct RawWeightingSpec {
    family: WeightFamily,
    #[serde(default = "one")]
    gamma: f64,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawWeightingSpec> for WeightingSpec {
    type Error = Error;

    fn try_from(raw: RawWeightingSpec) -> Result<Self> {
        WeightingSpec::new(raw.family, raw.gamma)
    }
}

impl WeightingSpec {
    pub fn new(family: WeightFamily, gamma: f64) -> Result<Self> {
        match family {
            WeightFamily::Identity => Ok(Self::identity()),
            _ => {
                check_gamma(gamma)?;
                Ok(Self { family, gamma })
            }
        }
    }

    pub fn identity() -> Self {
        Self {
            family: WeightFamily::Identity,
            gamma: 1.0,
        }
    }

    pub fn tversky_kahneman(gamma: f64) -> Result<Self> {
        Self::new(WeightFamily::TverskyKahneman, gamma)
    }

    pub fn prelec(gamma: f64) -> Result<Self> {
        Self::new(WeightFamily::Prelec, gamma)
    }

    pub fn weight(&self, p: f64) -> Result<f64> {
        eval_weight(self, p)
    }

    /// Distance from the identity-like shape, used for tie-breaking.
    pub fn curvature(&self) -> f64 {
        match self.family {
            WeightFamily::Identity => 0.0,
            _ => (self.gamma - 1.0).abs(),
        }
    }
}

impl fmt::Display for WeightingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            WeightFamily::Identity => f.write_str("identity"),
            family => write!(f, "{family}(gamma={:.2})", self.gamma),
        }
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if (GAMMA_MIN - RANGE_SLACK..=GAMMA_MAX + RANGE_SLACK).contains(&gamma) {
        Ok(())
    } else {
        Err(Error::Parameter {
            name: "gamma",
            value: gamma,
            range: "[0.3, 1.5]",
        })
    }
}

/// Evaluates `w(p)`. Endpoints are exact: `w(0) = 0`, `w(1) = 1`.
pub fn eval_weight(spec: &WeightingSpec, p: f64) -> Result<f64> {
    if spec.family != WeightFamily::Identity {
        check_gamma(spec.gamma)?;
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            domain: "[0, 1]",
        });
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    let g = spec.gamma;
    let w = match spec.family {
        WeightFamily::Identity => p,
        WeightFamily::TverskyKahneman => {
            let num = p.powf(g);
            num / (num + (1.0 - p).powf(g)).powf(1.0 / g)
        }
        WeightFamily::Prelec => (-(-p.ln()).powf(g)).exp(),
    };
    Ok(w.clamp(0.0, 1.0))
}

pub const GRID_LEN: usize = 9;
pub const ANCHOR_DELTA: f64 = -0.5;
const ANCHOR_INDEX: usize = 4;

/// Grid delta for index `k`: `-(k + 1) / 10`, so index 0 is -0.1 and 8 is -0.9.
pub fn grid_delta(k: usize) -> f64 {
    -((k + 1) as f64) / 10.0
}

/// Index of a grid delta in {-0.1, ..., -0.9}, if it is one.
pub fn grid_index(delta: f64) -> Option<usize> {
    let tenths = -delta * 10.0;
    let k = tenths.round();
    if (tenths - k).abs() < 1e-9 && (1.0..=9.0).contains(&k) {
        Some(k as usize - 1)
    } else {
        None
    }
}

/// Pointwise regret-utility function on the nine-point delta grid.
///
/// Evaluation is piecewise linear through `(0, 0)` and the grid points,
/// extended to positive arguments by oddness.
#[derive(Debug, Clone, PartialEq)]
pub struct QCurve {
    values: [f64; GRID_LEN],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub delta: f64,
    pub q_value: f64,
}

#[derive(Serialize, Deserialize)]
struct RawQCurve {
    grid: Vec<GridPoint>,
    anchor_delta: f64,
    anchor_value: f64,
}

impl QCurve {
    /// `values[k]` is `Q(grid_delta(k))`; every value must be finite and negative.
    pub fn from_values(values: [f64; GRID_LEN]) -> Result<Self> {
        for (k, &v) in values.iter().enumerate() {
            if !(v.is_finite() && v < 0.0) {
                return Err(Error::Input(format!(
                    "Q({}) = {v} must be finite and negative",
                    grid_delta(k)
                )));
            }
        }
        Ok(Self { values })
    }

    /// `Q(delta) = delta` on the grid.
    pub fn identity() -> Self {
        Self {
            values: std::array::from_fn(grid_delta),
        }
    }

    pub fn values(&self) -> &[f64; GRID_LEN] {
        &self.values
    }

    pub fn grid(&self) -> Vec<GridPoint> {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &q_value)| GridPoint {
                delta: grid_delta(k),
                q_value,
            })
            .collect()
    }

    pub fn anchor_value(&self) -> f64 {
        self.values[ANCHOR_INDEX]
    }

    pub fn at_grid(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::from_values(self.values.map(|v| v * factor))
    }

    /// True when Q is non-decreasing in delta across the grid.
    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn eval(&self, delta: f64) -> Result<f64> {
        eval_q(self, delta)
    }

    // value at tenths position t (0 for t=0, grid for 1..=9)
    fn knot(&self, t: usize) -> f64 {
        if t == 0 {
            0.0
        } else {
            self.values[t - 1]
        }
    }

    fn eval_negative(&self, delta: f64) -> f64 {
        let t = -delta * 10.0;
        let seg = (t.floor() as usize).min(GRID_LEN - 1);
        let (a, b) = (self.knot(seg), self.knot(seg + 1));
        a + (b - a) * (t - seg as f64)
    }
}

impl Serialize for QCurve {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RawQCurve {
            grid: self.grid(),
            anchor_delta: ANCHOR_DELTA,
            anchor_value: self.anchor_value(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QCurve {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawQCurve::deserialize(deserializer)?;
        if raw.grid.len() != GRID_LEN {
            return Err(D::Error::custom(format!(
                "expected {GRID_LEN} grid points, got {}",
                raw.grid.len()
            )));
        }
        let mut values = [0.0; GRID_LEN];
        let mut seen = [false; GRID_LEN];
        for point in &raw.grid {
            let k = grid_index(point.delta)
                .ok_or_else(|| D::Error::custom(format!("{} is not a grid delta", point.delta)))?;
            values[k] = point.q_value;
            seen[k] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(D::Error::custom(
                "grid deltas must be -0.9, -0.8, ..., -0.1",
            ));
        }
        QCurve::from_values(values).map_err(D::Error::custom)
    }
}

/// Evaluates Q at `delta`, `|delta| <= 1`.
///
/// Beyond `|delta| = 0.9` the outermost segment is continued linearly.
pub fn eval_q(curve: &QCurve, delta: f64) -> Result<f64> {
    if delta.is_nan() || delta.abs() > 1.0 {
        return Err(Error::Domain {
            name: "delta",
            value: delta,
            domain: "[-1, 1]",
        });
    }
    if delta == 0.0 {
        Ok(0.0)
    } else if delta < 0.0 {
        Ok(curve.eval_negative(delta))
    } else {
        Ok(-curve.eval_negative(-delta))
    }
}

/// Net advantage of the robot option over the human option.
pub fn net_advantage(problem: &DecisionProblem, w: &WeightingSpec, q: &QCurve) -> Result<f64> {
    net_advantage_with(problem, w, |d| eval_q(q, d))
}

/// Net advantage with an arbitrary Q function (used by ground-truth subjects).
pub fn net_advantage_with<F>(problem: &DecisionProblem, w: &WeightingSpec, q: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let wp = eval_weight(w, problem.p_r)?;
    let rejoice = q(problem.success_difference())?;
    let regret = q(problem.failure_difference())?;
    Ok(wp * rejoice + (1.0 - wp) * regret)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Choice {
    Robot,
    Human,
    Indifferent,
}

impl Choice {
    pub fn as_str(self) -> &'static str {
        match self {
            Choice::Robot => "robot",
            Choice::Human => "human",
            Choice::Indifferent => "indifferent",
        }
    }
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn predict_choice(e_rh: f64, epsilon: f64) -> Choice {
    if e_rh > epsilon {
        Choice::Robot
    } else if e_rh < -epsilon {
        Choice::Human
    } else {
        Choice::Indifferent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Robot,
    Human,
}

/// Whole cents; displayed as `-$18.00`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cents(pub i64);

impl Cents {
    pub fn from_dollars(dollars: f64) -> Self {
        Cents((dollars * 100.0).round() as i64)
    }

    pub fn dollars(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl fmt::Display for Cents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{sign}${}.{:02}", abs / 100, abs % 100)
    }
}

/// Expected dollar value of one option, rounded to cents.
pub fn expected_value(problem: &DecisionProblem, side: Side) -> Cents {
    let dollars = match side {
        Side::Robot => (1.0 - problem.p_r) * problem.xr_norm * problem.money_scale,
        Side::Human => problem.xh_norm * problem.money_scale,
    };
    Cents::from_dollars(dollars)
}
