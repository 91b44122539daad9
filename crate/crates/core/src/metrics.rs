//! Validation metrics and exports.

use std::io::Write;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::fit::{relaxed_match, FitReport, Observation};
use crate::fuzzy::Label;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedT {
    pub t: f64,
    pub df: usize,
    /// Two-sided.
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    /// Share of validation problems answered with the same choice twice.
    pub revisit_accuracy: f64,
    /// Mean of the two per-pass prediction accuracies.
    pub averaged_prediction_accuracy: f64,
    /// Prediction accuracy over the consistently answered problems.
    pub consistent_prediction_accuracy: f64,
    pub pass_accuracy: [f64; 2],
    pub relaxed_averaged_prediction_accuracy: f64,
    pub consistent_count: usize,
    pub validation_size: usize,
    /// Only present on group-level reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paired_t: Option<PairedT>,
}

pub fn compute_metrics(
    model: &FitReport,
    pass1: &[Observation],
    pass2: &[Observation],
) -> Result<MetricsReport> {
    if pass1.is_empty() {
        return Err(Error::Input("validation passes are empty".into()));
    }
    if pass1.len() != pass2.len() {
        return Err(Error::Input(format!(
            "validation passes differ in length: {} vs {}",
            pass1.len(),
            pass2.len()
        )));
    }
    if let Some(i) = pass1
        .iter()
        .zip(pass2)
        .position(|(a, b)| a.problem != b.problem)
    {
        return Err(Error::Input(format!(
            "validation passes differ at problem {i}"
        )));
    }

    let n = pass1.len();
    let mut consistent = 0;
    let mut consistent_hits = 0;
    let mut hits = [0usize; 2];
    let mut relaxed_hits = 0;
    for (a, b) in pass1.iter().zip(pass2) {
        let predicted = model.predict(&a.problem)?;
        let (ca, cb) = (a.class.choice(), b.class.choice());
        hits[0] += usize::from(predicted == ca);
        hits[1] += usize::from(predicted == cb);
        relaxed_hits += usize::from(relaxed_match(predicted, ca));
        relaxed_hits += usize::from(relaxed_match(predicted, cb));
        if ca == cb {
            consistent += 1;
            consistent_hits += usize::from(predicted == ca);
        }
    }
    if consistent == 0 {
        return Err(Error::DegenerateMetric(
            "no validation problem was answered consistently",
        ));
    }
    let pass_accuracy = [hits[0] as f64 / n as f64, hits[1] as f64 / n as f64];
    Ok(MetricsReport {
        revisit_accuracy: consistent as f64 / n as f64,
        averaged_prediction_accuracy: (pass_accuracy[0] + pass_accuracy[1]) / 2.0,
        consistent_prediction_accuracy: consistent_hits as f64 / consistent as f64,
        pass_accuracy,
        relaxed_averaged_prediction_accuracy: relaxed_hits as f64 / (2 * n) as f64,
        consistent_count: consistent,
        validation_size: n,
        paired_t: None,
    })
}

/// Paired-samples t statistic for `a - b`.
pub fn paired_t(a: &[f64], b: &[f64]) -> Result<PairedT> {
    if a.len() != b.len() {
        return Err(Error::Statistic("samples must have equal length"));
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::Statistic("need at least two pairs"));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean = d.iter().sum::<f64>() / n as f64;
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    // float differences of equal steps are not exactly equal
    if sd.is_nan() || sd <= 1e-12 * mean.abs().max(1.0) {
        return Err(Error::Statistic("differences have zero variance"));
    }
    let t = mean / (sd / (n as f64).sqrt());
    let df = n - 1;
    let dist = StudentsT::new(0.0, 1.0, df as f64)
        .map_err(|_| Error::Statistic("bad degrees of freedom"))?;
    let p_value = 2.0 * (1.0 - dist.cdf(t.abs()));
    Ok(PairedT { t, df, p_value })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudRow {
    pub e_rh: f64,
    pub mu_robot: f64,
    pub mu_equal: f64,
    pub mu_human: f64,
    pub dominant_label: Label,
}

/// One row per training answer: the fitted model's net advantage next to the
/// memberships the subject gave.
pub fn export_membership_cloud(
    training: &[Observation],
    model: &FitReport,
) -> Result<Vec<CloudRow>> {
    training
        .iter()
        .map(|o| {
            Ok(CloudRow {
                e_rh: model.net_advantage(&o.problem)?,
                mu_robot: o.response.mu_robot,
                mu_equal: o.response.mu_equal,
                mu_human: o.response.mu_human,
                dominant_label: o.class.label(),
            })
        })
        .collect()
}

pub const CLOUD_CSV_HEADER: &str = "e_rh,mu_robot,mu_equal,mu_human,dominant_label";

pub fn write_cloud_csv<W: Write>(rows: &[CloudRow], out: W) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CLOUD_CSV_HEADER.split(','))?;
    for row in rows {
        writer.write_record([
            row.e_rh.to_string(),
            row.mu_robot.to_string(),
            row.mu_equal.to_string(),
            row.mu_human.to_string(),
            row.dominant_label.as_str().to_string(),
        ])?;
    }
    writer.flush()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation.
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Pearson correlation; `None` when either sample is constant.
pub fn correlation(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return None;
    }
    let (ma, mb) = (mean(a), mean(b));
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    if va <= 0.0 || vb <= 0.0 {
        return None;
    }
    Some(cov / (va * vb).sqrt())
}
