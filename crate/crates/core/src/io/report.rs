//! Evaluation report rendering and metric-map files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{CorrectnessPolicy, MetricKind, MetricMap, MetricReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "json" | "json-like" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidConfig(format!("unknown report format {other:?}"))),
        }
    }
}

#[derive(Serialize)]
struct ClassRow {
    class_id: u16,
    metric: MetricKind,
    samples: usize,
    pass_rate: f64,
    auc_add: f64,
    auc_adds: f64,
}

#[derive(Serialize)]
struct ReportDoc {
    policy: String,
    tau_max: f64,
    samples: usize,
    mean_pass_rate: f64,
    mean_auc_add: f64,
    mean_auc_adds: f64,
    classes: Vec<ClassRow>,
}

pub fn render_report(
    report: &MetricReport,
    policy: &CorrectnessPolicy,
    metrics: &MetricMap,
    format: ReportFormat,
) -> Result<String> {
    let doc = ReportDoc {
        policy: policy.to_string(),
        tau_max: report.tau_max,
        samples: report.samples,
        mean_pass_rate: report.mean_pass_rate,
        mean_auc_add: report.mean_auc_add,
        mean_auc_adds: report.mean_auc_adds,
        classes: report
            .classes
            .iter()
            .map(|c| ClassRow {
                class_id: c.class_id,
                metric: metrics.get(c.class_id),
                samples: c.samples,
                pass_rate: c.pass_rate,
                auc_add: c.auc_add,
                auc_adds: c.auc_adds,
            })
            .collect(),
    };
    if format == ReportFormat::Json {
        let mut s = serde_json::to_string_pretty(&doc)?;
        s.push('\n');
        return Ok(s);
    }
    let mut s = String::new();
    let _ = writeln!(s, "policy: {}", doc.policy);
    let _ = writeln!(s, "tau_max: {}", doc.tau_max);
    let _ = writeln!(s, "samples: {}", doc.samples);
    let _ = writeln!(s, "classes: {}", doc.classes.len());
    let _ = writeln!(s, "mean_pass_rate: {:.4}", doc.mean_pass_rate);
    let _ = writeln!(s, "mean_auc_add: {:.6}", doc.mean_auc_add);
    let _ = writeln!(s, "mean_auc_adds: {:.6}", doc.mean_auc_adds);
    s.push('\n');
    let _ = writeln!(s, "{:>8} {:>6} {:>8} {:>10} {:>10} {:>10}", "class", "metric", "samples", "pass_rate", "auc_add", "auc_adds");
    for c in &doc.classes {
        let _ = writeln!(
            s,
            "{:>8} {:>6} {:>8} {:>10.4} {:>10.6} {:>10.6}",
            c.class_id, c.metric, c.samples, c.pass_rate, c.auc_add, c.auc_adds
        );
    }
    Ok(s)
}

/// Reads `class_id,metric` rows (`add` or `adds`); `#` starts a comment.
pub fn read_metric_map(path: &Path) -> Result<MetricMap> {
    let bytes = super::read_file(path)?;
    let text = String::from_utf8_lossy(&bytes);
    let mut map = BTreeMap::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse {
            path: path.to_path_buf(),
            line: k + 1,
            msg,
        };
        let (id, metric) = line
            .split_once(',')
            .ok_or_else(|| err("expected class_id,metric".into()))?;
        let id: u16 = id.trim().parse().map_err(|_| err(format!("bad class id {id:?}")))?;
        let metric: MetricKind = metric.parse().map_err(|e: Error| err(e.to_string()))?;
        map.insert(id, metric);
    }
    Ok(MetricMap(map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{summarize, EvalRecord};

    fn report() -> MetricReport {
        let recs = [
            EvalRecord { class_id: 0, error_add: 0.01, error_adds: 0.005, correct: true },
            EvalRecord { class_id: 2, error_add: 0.2, error_adds: 0.05, correct: false },
        ];
        summarize(&recs, 0.1).unwrap()
    }

    #[test]
    fn text_and_json() {
        let mut map = MetricMap::default();
        map.0.insert(2, MetricKind::Adds);
        let policy = CorrectnessPolicy::default();
        let text = render_report(&report(), &policy, &map, ReportFormat::Text).unwrap();
        assert!(text.contains("policy: diameter10"));
        assert!(text.contains("mean_pass_rate: 50.0000"));
        assert!(text.lines().any(|l| l.split_whitespace().take(2).eq(["2", "adds"])));
        let json = render_report(&report(), &policy, &map, ReportFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["classes"][1]["metric"], "adds");
        assert_eq!(v["mean_pass_rate"], 50.0);
    }

    #[test]
    fn metric_map_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("map.csv");
        std::fs::write(&p, "# eggbox and glue\n10, adds\n11,ADD-S\n3,add\n").unwrap();
        let m = read_metric_map(&p).unwrap();
        assert_eq!(m.get(10), MetricKind::Adds);
        assert_eq!(m.get(11), MetricKind::Adds);
        assert_eq!(m.get(3), MetricKind::Add);
        std::fs::write(&p, "10 adds\n").unwrap();
        assert!(read_metric_map(&p).is_err());
    }
}
