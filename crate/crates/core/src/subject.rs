//! Simulated respondents with a known ground-truth model.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{snap_to_scale, FuzzyResponse, MembershipSet};
use crate::regret::{eval_weight, net_advantage_with, DecisionProblem, WeightingSpec};
use crate::table::ChainRow;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubjectSpec {
    pub w_true: WeightingSpec,
    /// Exponent of `Q(x) = sign(x) |x|^beta`.
    pub beta: f64,
    #[serde(default)]
    pub memberships: MembershipSet,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub seed: u64,
}

impl SubjectSpec {
    /// Expected-value responder: identity weighting, linear Q, no noise.
    pub fn identity(seed: u64) -> Self {
        Self {
            w_true: WeightingSpec::identity(),
            beta: 1.0,
            memberships: MembershipSet::default(),
            noise_sigma: 0.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1.0..=3.0).contains(&self.beta) {
            return Err(Error::Parameter {
                name: "beta",
                value: self.beta,
                range: "[1, 3]",
            });
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::Parameter {
                name: "noise_sigma",
                value: self.noise_sigma,
                range: ">= 0",
            });
        }
        Ok(())
    }

    pub fn q_true(&self, x: f64) -> f64 {
        x.signum() * x.abs().powf(self.beta)
    }

    pub fn net_advantage(&self, problem: &DecisionProblem) -> Result<f64> {
        net_advantage_with(problem, &self.w_true, |x| Ok(self.q_true(x)))
    }

    /// Indifference probability of a chain row, by bisection to 1e-9.
    pub fn closed_form_p_star(&self, row: &ChainRow) -> Result<f64> {
        if self.noise_sigma != 0.0 {
            return Err(Error::Model(
                "closed-form p* needs a noiseless subject".into(),
            ));
        }
        let rejoice = self.q_true(-row.xh_norm);
        let regret = -self.q_true(row.xr_norm - row.xh_norm);
        let gap = |p: f64| -> Result<f64> {
            let w = eval_weight(&self.w_true, p)?;
            Ok(w * rejoice - (1.0 - w) * regret)
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        if !(gap(lo)? < 0.0 && gap(hi)? > 0.0) {
            return Err(Error::Model(format!(
                "no indifference point for row {}",
                row.index
            )));
        }
        while hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            if gap(mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticSubject {
    spec: SubjectSpec,
    rng: ChaCha8Rng,
    noise: Option<Normal<f64>>,
}

impl SyntheticSubject {
    pub fn new(spec: SubjectSpec) -> Result<Self> {
        spec.validate()?;
        let noise = if spec.noise_sigma > 0.0 {
            Some(Normal::new(0.0, spec.noise_sigma).map_err(|e| Error::Config(e.to_string()))?)
        } else {
            None
        };
        Ok(Self {
            spec,
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
            noise,
        })
    }

    pub fn spec(&self) -> &SubjectSpec {
        &self.spec
    }

    pub fn respond(&mut self, problem: &DecisionProblem) -> Result<FuzzyResponse> {
        let e = self.spec.net_advantage(problem)?;
        let perturbation = match &self.noise {
            Some(n) => n.sample(&mut self.rng),
            None => 0.0,
        };
        Ok(self.respond_at(e + perturbation))
    }

    /// Snapped response at a perceived net advantage, without noise.
    pub fn respond_at(&self, e_rh: f64) -> FuzzyResponse {
        let analog = self.spec.memberships.eval(e_rh);
        let mut snapped = analog.map(|mu| snap_to_scale(mu).expect("memberships lie in [0, 1]"));
        if snapped.iter().all(|&mu| mu == 0.0) {
            let dominant = (0..3)
                .max_by(|&a, &b| analog[a].total_cmp(&analog[b]))
                .expect("three memberships");
            snapped[dominant] = 0.25;
        }
        FuzzyResponse::new(snapped[0], snapped[1], snapped[2])
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::fuzzy::classify_response;
    use crate::regret::{predict_choice, Choice};
    use crate::table::CHAIN_ROWS;

    fn noiseless() -> SyntheticSubject {
        SyntheticSubject::new(SubjectSpec::identity(1)).unwrap()
    }

    #[test]
    fn documented_responses() {
        let s = noiseless();
        assert_eq!(s.respond_at(0.0), FuzzyResponse::new(0.0, 1.0, 0.0));
        assert_eq!(s.respond_at(0.8), FuzzyResponse::new(1.0, 0.0, 0.0));
        assert_eq!(s.respond_at(0.15), FuzzyResponse::new(0.25, 0.5, 0.0));
        assert_eq!(s.respond_at(-0.15), FuzzyResponse::new(0.0, 0.5, 0.25));
    }

    #[test]
    fn identity_p_star_closed_form() {
        let spec = SubjectSpec::identity(0);
        assert_abs_diff_eq!(
            spec.closed_form_p_star(&CHAIN_ROWS[0]).unwrap(),
            4.0 / 9.0,
            epsilon = 1e-8
        );
        assert_abs_diff_eq!(
            spec.closed_form_p_star(&CHAIN_ROWS[7]).unwrap(),
            0.9,
            epsilon = 1e-8
        );
        for r in &CHAIN_ROWS {
            let (a, b) = (r.delta_from.abs(), r.delta_to.abs());
            assert_abs_diff_eq!(
                spec.closed_form_p_star(r).unwrap(),
                b / (a + b),
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn curved_p_star_zeroes_the_advantage() {
        let spec = SubjectSpec {
            w_true: WeightingSpec::tversky_kahneman(0.7).unwrap(),
            beta: 1.8,
            ..SubjectSpec::identity(0)
        };
        for r in &CHAIN_ROWS {
            let p = spec.closed_form_p_star(r).unwrap();
            let problem = DecisionProblem::new(r.xr_norm, r.xh_norm, p, 100.0).unwrap();
            assert!(spec.net_advantage(&problem).unwrap().abs() < 1e-7);
        }
    }

    #[test]
    fn closed_form_rejects_noise() {
        let spec = SubjectSpec {
            noise_sigma: 0.05,
            ..SubjectSpec::identity(0)
        };
        assert!(matches!(
            spec.closed_form_p_star(&CHAIN_ROWS[0]),
            Err(Error::Model(_))
        ));
    }

    #[test]
    fn spec_validation() {
        for beta in [0.5, 3.5, f64::NAN] {
            let spec = SubjectSpec {
                beta,
                ..SubjectSpec::identity(0)
            };
            assert!(SyntheticSubject::new(spec).is_err());
        }
        let spec = SubjectSpec {
            noise_sigma: -0.1,
            ..SubjectSpec::identity(0)
        };
        assert!(SyntheticSubject::new(spec).is_err());
    }

    #[test]
    fn noisy_stream_is_seeded() {
        let spec = SubjectSpec {
            noise_sigma: 0.1,
            ..SubjectSpec::identity(42)
        };
        let problem = DecisionProblem::new(-0.9, -0.5, 0.45, 100.0).unwrap();
        let run = || {
            let mut s = SyntheticSubject::new(spec).unwrap();
            (0..50)
                .map(|_| s.respond(&problem).unwrap())
                .collect::<Vec<_>>()
        };
        let a = run();
        assert_eq!(a, run());
        assert!(
            a.iter().any(|r| *r != a[0]),
            "noise should move some answers"
        );
    }

    #[test]
    fn noiseless_choice_matches_sign_away_from_zero() {
        let s = noiseless();
        for i in -100..=100 {
            let e = i as f64 / 100.0;
            let class = classify_response(&s.respond_at(e)).unwrap();
            // the triangle snaps below 0.75 once |e| passes 0.1125
            if e.abs() > 0.1125 {
                assert_eq!(class.choice(), predict_choice(e, 0.1125), "e = {e}");
            } else {
                assert_eq!(class.choice(), Choice::Indifferent, "e = {e}");
            }
        }
    }
}
