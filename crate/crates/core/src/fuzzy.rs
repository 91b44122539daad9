//! Fuzzy linguistic responses.
//!
//! A subject rates three labels (prefer robot, equally liking, prefer human)
//! on a five-point membership scale. The staircase only needs a coarse
//! class, which [`classify_response`] extracts.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regret::Choice;

pub const SCALE_LEVELS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Minimum "equally liking" rating for a response to count as indifferent.
pub const INDIFFERENCE_THRESHOLD: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Label {
    PreferRobot,
    EquallyLiking,
    PreferHuman,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::PreferRobot => "prefer-robot",
            Label::EquallyLiking => "equally-liking",
            Label::PreferHuman => "prefer-human",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzyResponse {
    pub mu_robot: f64,
    pub mu_equal: f64,
    pub mu_human: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub respond_ms: Option<u64>,
}

impl FuzzyResponse {
    pub fn new(mu_robot: f64, mu_equal: f64, mu_human: f64) -> Self {
        Self {
            mu_robot,
            mu_equal,
            mu_human,
            respond_ms: None,
        }
    }

    pub fn membership(&self, label: Label) -> f64 {
        match label {
            Label::PreferRobot => self.mu_robot,
            Label::EquallyLiking => self.mu_equal,
            Label::PreferHuman => self.mu_human,
        }
    }

    /// The same ratings with the robot and human scales exchanged.
    pub fn mirrored(&self) -> Self {
        Self {
            mu_robot: self.mu_human,
            mu_human: self.mu_robot,
            ..*self
        }
    }
}

fn is_level(v: f64) -> bool {
    SCALE_LEVELS.contains(&v)
}

pub fn validate_response(r: &FuzzyResponse) -> Result<()> {
    for label in [Label::PreferRobot, Label::EquallyLiking, Label::PreferHuman] {
        let value = r.membership(label);
        if !is_level(value) {
            return Err(Error::Level {
                label: label.as_str(),
                value,
            });
        }
    }
    if r.mu_robot == 0.0 && r.mu_equal == 0.0 && r.mu_human == 0.0 {
        return Err(Error::EmptyResponse);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResponseClass {
    Indifferent,
    RobotLeaning,
    HumanLeaning,
}

impl ResponseClass {
    /// The choice a response of this class expresses.
    pub fn choice(self) -> Choice {
        match self {
            ResponseClass::Indifferent => Choice::Indifferent,
            ResponseClass::RobotLeaning => Choice::Robot,
            ResponseClass::HumanLeaning => Choice::Human,
        }
    }

    pub fn label(self) -> Label {
        match self {
            ResponseClass::Indifferent => Label::EquallyLiking,
            ResponseClass::RobotLeaning => Label::PreferRobot,
            ResponseClass::HumanLeaning => Label::PreferHuman,
        }
    }

    pub fn mirrored(self) -> Self {
        match self {
            ResponseClass::Indifferent => ResponseClass::Indifferent,
            ResponseClass::RobotLeaning => ResponseClass::HumanLeaning,
            ResponseClass::HumanLeaning => ResponseClass::RobotLeaning,
        }
    }
}

pub fn classify_response(r: &FuzzyResponse) -> Result<ResponseClass> {
    validate_response(r)?;
    let side_max = r.mu_robot.max(r.mu_human);
    let class = if r.mu_equal >= INDIFFERENCE_THRESHOLD && r.mu_equal >= side_max {
        ResponseClass::Indifferent
    } else if r.mu_robot > r.mu_human {
        ResponseClass::RobotLeaning
    } else if r.mu_human > r.mu_robot {
        ResponseClass::HumanLeaning
    } else {
        // equal side ratings without a dominant "equally liking"
        ResponseClass::Indifferent
    };
    Ok(class)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MembershipShape {
    Triangular { center: f64, half_width: f64 },
    SaturatingRamp { onset: f64, saturation_point: f64 },
}

/// Membership function of one label over the net advantage axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMembershipSpec")]
pub struct MembershipSpec {
    pub label: Label,
    pub shape: MembershipShape,
}

#[derive(Deserialize)]
struct RawMembershipSpec {
    label: Label,
    shape: MembershipShape,
}

impl TryFrom<RawMembershipSpec> for MembershipSpec {
    type Error = Error;

    fn try_from(raw: RawMembershipSpec) -> Result<Self> {
        MembershipSpec::new(raw.label, raw.shape)
    }
}

impl MembershipSpec {
    pub fn new(label: Label, shape: MembershipShape) -> Result<Self> {
        match (label, shape) {
            (Label::EquallyLiking, MembershipShape::Triangular { center, half_width }) => {
                if !(half_width > 0.0 && half_width.is_finite() && center.is_finite()) {
                    return Err(Error::Membership(format!(
                        "triangle needs finite center and half_width > 0, got {center}, {half_width}"
                    )));
                }
            }
            (
                Label::PreferRobot | Label::PreferHuman,
                MembershipShape::SaturatingRamp {
                    onset,
                    saturation_point,
                },
            ) => {
                if !(onset < saturation_point && onset.is_finite() && saturation_point.is_finite())
                {
                    return Err(Error::Membership(format!(
                        "ramp needs onset < saturation_point, got {onset}, {saturation_point}"
                    )));
                }
            }
            (label, _) => {
                return Err(Error::Membership(format!(
                    "{label} uses the wrong shape (triangle for equally-liking, ramp for sides)"
                )))
            }
        }
        Ok(Self { label, shape })
    }

    pub fn triangle(center: f64, half_width: f64) -> Result<Self> {
        Self::new(
            Label::EquallyLiking,
            MembershipShape::Triangular { center, half_width },
        )
    }

    pub fn ramp(label: Label, onset: f64, saturation_point: f64) -> Result<Self> {
        Self::new(
            label,
            MembershipShape::SaturatingRamp {
                onset,
                saturation_point,
            },
        )
    }

    pub fn eval(&self, e_rh: f64) -> f64 {
        eval_membership(self, e_rh)
    }
}

pub fn eval_membership(spec: &MembershipSpec, e_rh: f64) -> f64 {
    match spec.shape {
        MembershipShape::Triangular { center, half_width } => {
            (1.0 - (e_rh - center).abs() / half_width).max(0.0)
        }
        MembershipShape::SaturatingRamp {
            onset,
            saturation_point,
        } => {
            // prefer-human is the mirror image of prefer-robot
            let x = if spec.label == Label::PreferHuman {
                -e_rh
            } else {
                e_rh
            };
            ((x - onset) / (saturation_point - onset)).clamp(0.0, 1.0)
        }
    }
}

/// The three membership functions of a responder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipSet {
    pub robot: MembershipSpec,
    pub equal: MembershipSpec,
    pub human: MembershipSpec,
}

impl MembershipSet {
    pub fn new(
        robot: MembershipSpec,
        equal: MembershipSpec,
        human: MembershipSpec,
    ) -> Result<Self> {
        let labels = [robot.label, equal.label, human.label];
        if labels != [Label::PreferRobot, Label::EquallyLiking, Label::PreferHuman] {
            return Err(Error::Membership(format!(
                "expected prefer-robot, equally-liking, prefer-human; got {labels:?}"
            )));
        }
        Ok(Self {
            robot,
            equal,
            human,
        })
    }

    /// Analog memberships `(robot, equal, human)` at `e_rh`.
    pub fn eval(&self, e_rh: f64) -> [f64; 3] {
        [
            self.robot.eval(e_rh),
            self.equal.eval(e_rh),
            self.human.eval(e_rh),
        ]
    }
}

impl Default for MembershipSet {
    /// Triangle centred at 0 with half-width 0.3; side ramps from 0 to 0.5.
    fn default() -> Self {
        Self {
            robot: MembershipSpec {
                label: Label::PreferRobot,
                shape: MembershipShape::SaturatingRamp {
                    onset: 0.0,
                    saturation_point: 0.5,
                },
            },
            equal: MembershipSpec {
                label: Label::EquallyLiking,
                shape: MembershipShape::Triangular {
                    center: 0.0,
                    half_width: 0.3,
                },
            },
            human: MembershipSpec {
                label: Label::PreferHuman,
                shape: MembershipShape::SaturatingRamp {
                    onset: 0.0,
                    saturation_point: 0.5,
                },
            },
        }
    }
}

/// Nearest five-point level; exact midpoints round up.
pub fn snap_to_scale(mu: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::Domain {
            name: "membership",
            value: mu,
            domain: "[0, 1]",
        });
    }
    let quarters = (mu * 4.0 + 0.5).floor().min(4.0);
    Ok(quarters / 4.0)
}
