//! Class statistics and prediction-vs-truth evaluation.

use alloc::string::String;
use alloc::vec::Vec;

use crate::cloud::{LabelCode, LabeledCloud};
use crate::error::EvalError;
use crate::math;

/// Confusion counts for one class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassMetrics {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl ClassMetrics {
    pub fn precision(&self) -> Option<f64> {
        let d = self.tp + self.fp;
        (d > 0).then(|| self.tp as f64 / d as f64)
    }

    pub fn recall(&self) -> Option<f64> {
        let d = self.tp + self.fn_;
        (d > 0).then(|| self.tp as f64 / d as f64)
    }

    pub fn iou(&self) -> Option<f64> {
        let d = self.tp + self.fp + self.fn_;
        (d > 0).then(|| self.tp as f64 / d as f64)
    }
}

/// Per-class point counts, plus evaluation metrics when truth was supplied.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassReport {
    pub total: u64,
    /// Predicted point count per class, aligned with [`LabelCode::ALL`].
    pub counts: [u64; 8],
    /// Confusion per class over evaluated points, when truth was supplied.
    pub metrics: Option<[ClassMetrics; 8]>,
    /// Classes present in the truth and not ignored.
    pub evaluated_classes: Vec<LabelCode>,
    /// Mean IoU over `evaluated_classes`.
    pub mean_iou: Option<f64>,
}

impl ClassReport {
    pub fn count_of(&self, code: LabelCode) -> u64 {
        self.counts[code.ordinal()]
    }

    pub fn percent_of(&self, code: LabelCode) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count_of(code) as f64 / self.total as f64 * 100.0
        }
    }

    pub fn metrics_of(&self, code: LabelCode) -> Option<ClassMetrics> {
        self.metrics.map(|m| m[code.ordinal()])
    }

    /// One `class metric value` triple per line.
    pub fn kv_lines(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "overall total {}", self.total);
        for code in LabelCode::ALL {
            let _ = writeln!(out, "{} count {}", code.name(), self.count_of(code));
            let _ = writeln!(out, "{} percent {:.4}", code.name(), self.percent_of(code));
        }
        if let Some(metrics) = &self.metrics {
            for code in LabelCode::ALL {
                let m = metrics[code.ordinal()];
                if m.tp + m.fp + m.fn_ == 0 {
                    continue;
                }
                let name = code.name();
                let _ = writeln!(out, "{name} tp {}", m.tp);
                let _ = writeln!(out, "{name} fp {}", m.fp);
                let _ = writeln!(out, "{name} fn {}", m.fn_);
                if let Some(p) = m.precision() {
                    let _ = writeln!(out, "{name} precision {p:.6}");
                }
                if let Some(r) = m.recall() {
                    let _ = writeln!(out, "{name} recall {r:.6}");
                }
                if let Some(iou) = m.iou() {
                    let _ = writeln!(out, "{name} iou {iou:.6}");
                }
            }
        }
        if let Some(miou) = self.mean_iou {
            let _ = writeln!(out, "overall mean_iou {miou:.6}");
        }
        out
    }
}

impl core::fmt::Display for ClassReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "{:<14} {:>12} {:>8}", "class", "count", "percent")?;
        for code in LabelCode::ALL {
            writeln!(
                f,
                "{:<14} {:>12} {:>7.2}%",
                code.name(),
                self.count_of(code),
                self.percent_of(code)
            )?;
        }
        writeln!(f, "{:<14} {:>12} {:>7.2}%", "total", self.total, 100.0 * (self.total.min(1) as f64))?;
        if let Some(metrics) = &self.metrics {
            writeln!(f)?;
            writeln!(
                f,
                "{:<14} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
                "class", "tp", "fp", "fn", "precision", "recall", "iou"
            )?;
            for code in LabelCode::ALL {
                let m = metrics[code.ordinal()];
                if m.tp + m.fp + m.fn_ == 0 {
                    continue;
                }
                let fmt_opt = |v: Option<f64>| match v {
                    Some(v) => alloc::format!("{v:.4}"),
                    None => String::from("-"),
                };
                writeln!(
                    f,
                    "{:<14} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
                    code.name(),
                    m.tp,
                    m.fp,
                    m.fn_,
                    fmt_opt(m.precision()),
                    fmt_opt(m.recall()),
                    fmt_opt(m.iou())
                )?;
            }
            if let Some(miou) = self.mean_iou {
                writeln!(f, "mean IoU {miou:.4}")?;
            }
        }
        Ok(())
    }
}

/// Exact per-class counts and percentages of a cloud's labels.
pub fn stats(cloud: &LabeledCloud) -> ClassReport {
    let counts = cloud.label_counts();
    let mut out = [0u64; 8];
    for (i, c) in counts.iter().enumerate() {
        out[i] = *c as u64;
    }
    ClassReport {
        total: cloud.len() as u64,
        counts: out,
        metrics: None,
        evaluated_classes: Vec::new(),
        mean_iou: None,
    }
}

/// Maximum coordinate discrepancy tolerated when pairing clouds, 1 mm.
const COORD_TOLERANCE_M: f64 = 1e-3;

/// Compares predicted labels against truth labels point by point.
///
/// Points whose truth label is in `ignore` are excluded from all confusion
/// counts. Per-class precision/recall/IoU cover the remaining points; mean
/// IoU averages over the classes present in the truth. The clouds must have
/// equal size and identical coordinates (checked on the first 100 points to
/// within 1 mm).
pub fn evaluate(
    predicted: &LabeledCloud,
    truth: &LabeledCloud,
    ignore: &[LabelCode],
) -> Result<ClassReport, EvalError> {
    if predicted.len() != truth.len() {
        return Err(EvalError::SizeMismatch {
            pred: predicted.len(),
            truth: truth.len(),
        });
    }
    for i in 0..predicted.len().min(100) {
        if math::fabs(predicted.x[i] - truth.x[i]) > COORD_TOLERANCE_M
            || math::fabs(predicted.y[i] - truth.y[i]) > COORD_TOLERANCE_M
            || math::fabs(predicted.z[i] - truth.z[i]) > COORD_TOLERANCE_M
        {
            return Err(EvalError::CoordinateMismatch { index: i });
        }
    }

    let ignored = |code: LabelCode| ignore.contains(&code);
    let mut metrics = [ClassMetrics::default(); 8];
    let mut truth_present = [false; 8];
    for i in 0..predicted.len() {
        let t = truth.label[i];
        if ignored(t) {
            continue;
        }
        truth_present[t.ordinal()] = true;
        let p = predicted.label[i];
        if p == t {
            metrics[t.ordinal()].tp += 1;
        } else {
            metrics[t.ordinal()].fn_ += 1;
            metrics[p.ordinal()].fp += 1;
        }
    }

    let evaluated_classes: Vec<LabelCode> = LabelCode::ALL
        .into_iter()
        .filter(|c| truth_present[c.ordinal()])
        .collect();
    let mean_iou = if evaluated_classes.is_empty() {
        None
    } else {
        let sum: f64 = evaluated_classes
            .iter()
            .map(|c| metrics[c.ordinal()].iou().unwrap_or(0.0))
            .sum();
        Some(sum / evaluated_classes.len() as f64)
    };

    let mut report = stats(predicted);
    report.metrics = Some(metrics);
    report.evaluated_classes = evaluated_classes;
    report.mean_iou = mean_iou;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn cloud_with_labels(labels: &[LabelCode]) -> LabeledCloud {
        let n = labels.len();
        let xs: Vec<f64> = (0..n).map(|i| i as f64 * 0.01).collect();
        let mut cloud =
            LabeledCloud::from_xyz(xs, vec![0.0; n], vec![0.0; n]).unwrap();
        cloud.label = labels.to_vec();
        cloud
    }

    #[test]
    fn stats_of_empty_cloud_is_all_zero() {
        let report = stats(&cloud_with_labels(&[]));
        assert_eq!(report.total, 0);
        assert!(report.counts.iter().all(|c| *c == 0));
    }

    #[test]
    fn stats_counts_single_class() {
        let report = stats(&cloud_with_labels(&[LabelCode::Car; 100]));
        assert_eq!(report.count_of(LabelCode::Car), 100);
        assert_eq!(report.percent_of(LabelCode::Car), 100.0);
    }

    #[test]
    fn stats_percentages_sum_to_100() {
        let mut labels = vec![LabelCode::Ground; 37];
        labels.extend(vec![LabelCode::Building; 21]);
        labels.extend(vec![LabelCode::Unlabelled; 5]);
        labels.extend(vec![LabelCode::Noise; 3]);
        let report = stats(&cloud_with_labels(&labels));
        let sum: f64 = LabelCode::ALL.iter().map(|c| report.percent_of(*c)).sum();
        assert!((sum - 100.0).abs() < 0.01);
    }

    #[test]
    fn perfect_prediction_has_unit_iou() {
        let truth = cloud_with_labels(&[LabelCode::Ground, LabelCode::Car, LabelCode::Tree]);
        let report = evaluate(&truth.clone(), &truth, &[]).unwrap();
        assert_eq!(report.mean_iou, Some(1.0));
        for c in [LabelCode::Ground, LabelCode::Car, LabelCode::Tree] {
            assert_eq!(report.metrics_of(c).unwrap().iou(), Some(1.0));
        }
    }

    #[test]
    fn half_wrong_prediction_has_half_iou() {
        let truth = cloud_with_labels(&[LabelCode::Ground; 10]);
        let mut pred = truth.clone();
        for i in 0..5 {
            pred.label[i] = LabelCode::Building;
        }
        let report = evaluate(&pred, &truth, &[]).unwrap();
        let ground = report.metrics_of(LabelCode::Ground).unwrap();
        assert_eq!(ground.iou(), Some(0.5));
        // Building got only false positives; it is not a truth class, so it
        // does not enter the mean
        assert_eq!(report.evaluated_classes, vec![LabelCode::Ground]);
        assert_eq!(report.mean_iou, Some(0.5));
    }

    #[test]
    fn ignored_truth_points_are_excluded_entirely() {
        let truth = cloud_with_labels(&[
            LabelCode::Unlabelled,
            LabelCode::Unlabelled,
            LabelCode::Ground,
        ]);
        let mut pred = truth.clone();
        pred.label[0] = LabelCode::Car; // mispredicted, but truth is ignored
        pred.label[2] = LabelCode::Ground;
        let report = evaluate(&pred, &truth, &[LabelCode::Unlabelled, LabelCode::Noise]).unwrap();
        let car = report.metrics_of(LabelCode::Car).unwrap();
        assert_eq!((car.tp, car.fp, car.fn_), (0, 0, 0));
        assert_eq!(report.mean_iou, Some(1.0));
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let a = cloud_with_labels(&[LabelCode::Ground; 3]);
        let b = cloud_with_labels(&[LabelCode::Ground; 4]);
        assert!(evaluate(&a, &b, &[]).is_err());
    }

    #[test]
    fn coordinate_mismatch_is_an_error() {
        let a = cloud_with_labels(&[LabelCode::Ground; 3]);
        let mut b = cloud_with_labels(&[LabelCode::Ground; 3]);
        b.x[1] += 0.5;
        assert!(matches!(
            evaluate(&a, &b, &[]),
            Err(EvalError::CoordinateMismatch { index: 1 })
        ));
    }

    #[test]
    fn kv_lines_contain_metric_triples() {
        let truth = cloud_with_labels(&[LabelCode::Ground; 4]);
        let report = evaluate(&truth.clone(), &truth, &[]).unwrap();
        let kv = report.kv_lines();
        assert!(kv.contains("ground precision 1.000000"));
        assert!(kv.contains("ground iou 1.000000"));
        assert!(kv.contains("overall mean_iou 1.000000"));
    }
}
