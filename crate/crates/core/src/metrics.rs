//! Point-set distances, pose errors and accuracy summaries.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ObjectModel, PointCloud, Pose, Vec3};
use crate::spatial::KdTree;
use crate::synth::LabeledPose;

fn mean_nearest(from: &[Vec3], to: &KdTree) -> f64 {
    let sum: f64 = from
        .iter()
        .map(|p| to.nearest(p).map_or(0.0, |(_, d2)| d2.sqrt()))
        .sum();
    sum / from.len() as f64
}

/// Symmetric Chamfer distance with unsquared Euclidean terms: the mean
/// nearest-neighbor distance from `a` to `b` plus that from `b` to `a`.
pub fn chamfer_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let ta = KdTree::new(a.points());
    let tb = KdTree::new(b.points());
    Ok(mean_nearest(a.points(), &tb) + mean_nearest(b.points(), &ta))
}

fn posed(pose: &Pose, model: &ObjectModel) -> Vec<Vec3> {
    let r = pose.rotation_matrix();
    model
        .cloud()
        .iter()
        .map(|x| r.rotate(x) + pose.translation)
        .collect()
}

/// Mean distance between corresponding model points under `gt` and `pred`.
pub fn add_error(gt: &Pose, pred: &Pose, model: &ObjectModel) -> f64 {
    let a = posed(gt, model);
    let b = posed(pred, model);
    let sum: f64 = a.iter().zip(&b).map(|(p, q)| (p - q).norm()).sum();
    sum / a.len() as f64
}

/// Mean distance from each model point under `gt` to the closest model
/// point under `pred`.
pub fn adds_error(gt: &Pose, pred: &Pose, model: &ObjectModel) -> f64 {
    let a = posed(gt, model);
    let tree = KdTree::new(&posed(pred, model));
    mean_nearest(&a, &tree)
}

/// When a pose error counts as correct. Comparisons are strict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum CorrectnessPolicy {
    /// Error below this fraction of the model diameter.
    DiameterFraction(f64),
    /// Error below this many meters.
    Absolute(f64),
}

impl Default for CorrectnessPolicy {
    fn default() -> Self {
        CorrectnessPolicy::DiameterFraction(0.10)
    }
}

impl CorrectnessPolicy {
    pub fn diameter_fraction(value: f64) -> Result<Self> {
        Self::checked(value).map(CorrectnessPolicy::DiameterFraction)
    }

    pub fn absolute(value: f64) -> Result<Self> {
        Self::checked(value).map(CorrectnessPolicy::Absolute)
    }

    fn checked(value: f64) -> Result<f64> {
        if value > 0.0 && value.is_finite() {
            Ok(value)
        } else {
            Err(Error::InvalidConfig(format!(
                "correctness threshold must be positive, got {value}"
            )))
        }
    }

    pub fn threshold(&self, model: &ObjectModel) -> f64 {
        match *self {
            CorrectnessPolicy::DiameterFraction(f) => f * model.diameter(),
            CorrectnessPolicy::Absolute(t) => t,
        }
    }
}

/// Parses `diameter10` (percent of the diameter) or `abs:0.1` (meters).
impl FromStr for CorrectnessPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("unknown policy {s:?}, expected diameterN or abs:X"));
        if let Some(pct) = s.strip_prefix("diameter") {
            let pct: f64 = pct.trim_start_matches(':').parse().map_err(|_| bad())?;
            return Self::diameter_fraction(pct / 100.0);
        }
        if let Some(m) = s.strip_prefix("abs:") {
            return Self::absolute(m.parse().map_err(|_| bad())?);
        }
        Err(bad())
    }
}

impl fmt::Display for CorrectnessPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorrectnessPolicy::DiameterFraction(v) => write!(f, "diameter{}", v * 100.0),
            CorrectnessPolicy::Absolute(v) => write!(f, "abs:{v}"),
        }
    }
}

pub fn pose_correct(error: f64, model: &ObjectModel, policy: &CorrectnessPolicy) -> bool {
    error < policy.threshold(model)
}

/// Normalized area under the accuracy-vs-threshold curve on `[0, tau_max]`.
/// Errors at or above `tau_max` contribute nothing.
pub fn auc_threshold_curve(errors: &[f64], tau_max: f64) -> Result<f64> {
    if errors.is_empty() {
        return Err(Error::NoErrors);
    }
    if !(tau_max > 0.0) {
        return Err(Error::InvalidConfig(format!("tau_max must be positive, got {tau_max}")));
    }
    // Normalizing each term first keeps the all-zero case exactly 1.
    let sum: f64 = errors.iter().map(|&e| (1.0 - e / tau_max).max(0.0)).sum();
    Ok(sum / errors.len() as f64)
}

/// Which pose error decides correctness for a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    #[default]
    Add,
    Adds,
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "add" => Ok(MetricKind::Add),
            "adds" | "add-s" => Ok(MetricKind::Adds),
            other => Err(Error::InvalidConfig(format!("unknown metric {other:?}"))),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            MetricKind::Add => "add",
            MetricKind::Adds => "adds",
        })
    }
}

/// Per-class metric selection; classes not listed use ADD.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricMap(pub BTreeMap<u16, MetricKind>);

impl MetricMap {
    pub fn get(&self, class_id: u16) -> MetricKind {
        self.0.get(&class_id).copied().unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalRecord {
    pub class_id: u16,
    pub error_add: f64,
    pub error_adds: f64,
    pub correct: bool,
}

/// Evaluates one prediction, judging correctness by `metric`.
pub fn evaluate(
    gt: &Pose,
    pred: &Pose,
    model: &ObjectModel,
    policy: &CorrectnessPolicy,
    metric: MetricKind,
) -> EvalRecord {
    let error_add = add_error(gt, pred, model);
    let error_adds = adds_error(gt, pred, model);
    let decisive = match metric {
        MetricKind::Add => error_add,
        MetricKind::Adds => error_adds,
    };
    EvalRecord {
        class_id: model.class_id,
        error_add,
        error_adds,
        correct: pose_correct(decisive, model, policy),
    }
}

/// Evaluates predictions row by row against ground truth. Rows must agree
/// on the class id, which selects the model by `class_id`.
pub fn evaluate_poses(
    gt: &[LabeledPose],
    pred: &[LabeledPose],
    models: &[ObjectModel],
    policy: &CorrectnessPolicy,
    metrics: &MetricMap,
) -> Result<Vec<EvalRecord>> {
    if gt.len() != pred.len() {
        return Err(Error::InvalidConfig(format!(
            "{} ground-truth poses but {} predictions",
            gt.len(),
            pred.len()
        )));
    }
    gt.iter()
        .zip(pred)
        .enumerate()
        .map(|(k, (g, p))| {
            if g.class_id != p.class_id {
                return Err(Error::InvalidConfig(format!(
                    "row {k}: ground truth is class {} but prediction is class {}",
                    g.class_id, p.class_id
                )));
            }
            let model = models
                .iter()
                .find(|m| m.class_id == g.class_id)
                .ok_or_else(|| Error::InvalidConfig(format!("row {k}: no model for class {}", g.class_id)))?;
            Ok(evaluate(&g.pose, &p.pose, model, policy, metrics.get(g.class_id)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub class_id: u16,
    pub samples: usize,
    /// Percentage of correct poses.
    pub pass_rate: f64,
    pub auc_add: f64,
    pub auc_adds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub tau_max: f64,
    pub samples: usize,
    pub classes: Vec<ClassReport>,
    /// Unweighted means over classes.
    pub mean_pass_rate: f64,
    pub mean_auc_add: f64,
    pub mean_auc_adds: f64,
}

/// Aggregates records per class (ascending class id).
pub fn summarize(records: &[EvalRecord], tau_max: f64) -> Result<MetricReport> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let mut by_class: BTreeMap<u16, Vec<&EvalRecord>> = BTreeMap::new();
    for r in records {
        by_class.entry(r.class_id).or_default().push(r);
    }
    let mut classes = Vec::with_capacity(by_class.len());
    for (class_id, recs) in by_class {
        let add: Vec<f64> = recs.iter().map(|r| r.error_add).collect();
        let adds: Vec<f64> = recs.iter().map(|r| r.error_adds).collect();
        let correct = recs.iter().filter(|r| r.correct).count();
        classes.push(ClassReport {
            class_id,
            samples: recs.len(),
            pass_rate: 100.0 * correct as f64 / recs.len() as f64,
            auc_add: auc_threshold_curve(&add, tau_max)?,
            auc_adds: auc_threshold_curve(&adds, tau_max)?,
        });
    }
    let k = classes.len() as f64;
    let mean = |f: fn(&ClassReport) -> f64| classes.iter().map(f).sum::<f64>() / k;
    Ok(MetricReport {
        tau_max,
        samples: records.len(),
        mean_pass_rate: mean(|c| c.pass_rate),
        mean_auc_add: mean(|c| c.auc_add),
        mean_auc_adds: mean(|c| c.auc_adds),
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::AxisAngle;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_points(seed: u64, n: usize, scale: f64) -> Vec<Vec3> {
        let mut rng = crate::seed::rng(seed);
        (0..n)
            .map(|_| Vec3::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) * scale)
            .collect()
    }

    fn random_pose(seed: u64) -> Pose {
        let mut rng = crate::seed::rng(seed);
        let axis = crate::seed::unit_vector(&mut rng);
        let angle = rng.random::<f64>() * std::f64::consts::PI;
        let t = Vec3::new(rng.random(), rng.random(), rng.random()) * 0.5;
        Pose::new(AxisAngle::new(axis * angle), t)
    }

    fn brute_chamfer(a: &[Vec3], b: &[Vec3]) -> f64 {
        let dir = |x: &[Vec3], y: &[Vec3]| {
            x.iter()
                .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
                .sum::<f64>()
                / x.len() as f64
        };
        dir(a, b) + dir(b, a)
    }

    fn brute_adds(gt: &Pose, pred: &Pose, m: &[Vec3]) -> f64 {
        let s: f64 = m
            .iter()
            .map(|x1| {
                let p = gt.transform_point(x1);
                m.iter()
                    .map(|x2| (p - pred.transform_point(x2)).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .sum();
        s / m.len() as f64
    }

    fn model(points: Vec<Vec3>) -> ObjectModel {
        ObjectModel::new(0, points.into()).unwrap()
    }

    #[test]
    fn chamfer_examples() {
        let a = PointCloud::from(random_points(1, 50, 1.0));
        assert_eq!(chamfer_distance(&a, &a).unwrap(), 0.0);
        let a = PointCloud::from(vec![Vec3::zeros()]);
        let b = PointCloud::from(vec![Vec3::new(0.0, 0.0, 1.0)]);
        assert_eq!(chamfer_distance(&a, &b).unwrap(), 2.0);
        assert!(matches!(chamfer_distance(&a, &PointCloud::default()), Err(Error::EmptyCloud)));
    }

    #[test]
    fn chamfer_matches_brute_force() {
        for seed in 0..20 {
            let a = random_points(seed, 40, 1.0);
            let b = random_points(seed + 100, 60, 1.0);
            let fast = chamfer_distance(&a.clone().into(), &b.clone().into()).unwrap();
            assert!((fast - brute_chamfer(&a, &b)).abs() <= 1e-12);
        }
    }

    #[test]
    fn add_examples() {
        let m = model(random_points(2, 500, 0.2));
        let gt = random_pose(3);
        assert_eq!(add_error(&gt, &gt, &m), 0.0);
        assert_eq!(adds_error(&gt, &gt, &m), 0.0);

        let delta = Vec3::new(0.003, -0.004, 0.012);
        let pred = Pose::new(gt.rotation, gt.translation + delta);
        assert!((add_error(&gt, &pred, &m) - delta.norm()).abs() < 1e-15);

        let pred = random_pose(4);
        let brute: f64 = m
            .cloud()
            .iter()
            .map(|x| (gt.transform_point(x) - pred.transform_point(x)).norm())
            .sum::<f64>()
            / 500.0;
        assert!((add_error(&gt, &pred, &m) - brute).abs() <= 1e-12);
        let adds = adds_error(&gt, &pred, &m);
        assert!((adds - brute_adds(&gt, &pred, m.cloud().points())).abs() <= 1e-12);
        assert!(adds <= add_error(&gt, &pred, &m) + 1e-12);
    }

    #[test]
    fn adds_is_small_for_symmetric_model() {
        let radius = 0.05;
        let circle: Vec<Vec3> = (0..360)
            .map(|k| {
                let a = (k as f64).to_radians();
                Vec3::new(radius * a.cos(), radius * a.sin(), 0.0)
            })
            .collect();
        let m = model(circle);
        let gt = random_pose(5);
        let chord = 2.0 * radius * (0.5f64.to_radians()).sin();
        for deg in [7.3, 45.0, 133.9, 271.2] {
            let spin = Pose::new(AxisAngle::new(Vec3::z() * f64::to_radians(deg)), Vec3::zeros());
            let pred = gt.compose(&spin);
            assert!(adds_error(&gt, &pred, &m) <= chord + 1e-12);
            assert!(add_error(&gt, &pred, &m) > 0.005);
        }
    }

    #[test]
    fn correctness_policies() {
        let m = model(vec![Vec3::zeros(), Vec3::new(0.2, 0.0, 0.0)]);
        let d10 = CorrectnessPolicy::default();
        let abs = CorrectnessPolicy::absolute(0.1).unwrap();
        assert!(pose_correct(0.0, &m, &d10) && pose_correct(0.0, &m, &abs));
        assert!(!pose_correct(0.11 * 0.2, &m, &d10));
        assert!(!pose_correct(0.1 * 0.2, &m, &d10));
        assert!(pose_correct(0.09, &m, &abs));
        assert!(!pose_correct(0.1, &m, &abs));
        assert!(CorrectnessPolicy::absolute(0.0).is_err());
    }

    #[test]
    fn policy_parsing() {
        assert_eq!("diameter10".parse::<CorrectnessPolicy>().unwrap(), CorrectnessPolicy::DiameterFraction(0.1));
        assert_eq!("abs:0.1".parse::<CorrectnessPolicy>().unwrap(), CorrectnessPolicy::Absolute(0.1));
        assert!("abs:-1".parse::<CorrectnessPolicy>().is_err());
        assert!("median".parse::<CorrectnessPolicy>().is_err());
        assert_eq!("ADD-S".parse::<MetricKind>().unwrap(), MetricKind::Adds);
    }

    #[test]
    fn auc_examples() {
        for n in [1, 5, 10, 128, 1000] {
            assert_eq!(auc_threshold_curve(&vec![0.0; n], 0.1).unwrap(), 1.0);
        }
        assert_eq!(auc_threshold_curve(&[0.1, 0.2, 7.0], 0.1).unwrap(), 0.0);
        assert_eq!(auc_threshold_curve(&[0.05], 0.1).unwrap(), 0.5);
        assert!(matches!(auc_threshold_curve(&[], 0.1), Err(Error::NoErrors)));
    }

    #[test]
    fn auc_matches_numeric_integral() {
        let errors = [0.0, 0.013, 0.05, 0.0999, 0.3, 0.02];
        let tau = 0.1;
        let steps = 200_000;
        let h = tau / steps as f64;
        let integral: f64 = (0..steps)
            .map(|k| {
                let t = (k as f64 + 0.5) * h;
                errors.iter().filter(|&&e| e < t).count() as f64 / errors.len() as f64
            })
            .sum::<f64>()
            * h
            / tau;
        assert!((auc_threshold_curve(&errors, tau).unwrap() - integral).abs() < 1e-4);
    }

    fn record(class_id: u16, err: f64, correct: bool) -> EvalRecord {
        EvalRecord {
            class_id,
            error_add: err,
            error_adds: err / 2.0,
            correct,
        }
    }

    #[test]
    fn summary_examples() {
        let all = vec![record(0, 0.0, true), record(1, 0.0, true)];
        let rep = summarize(&all, 0.1).unwrap();
        assert!(rep.classes.iter().all(|c| c.pass_rate == 100.0));

        let mut recs: Vec<EvalRecord> = (0..5).map(|k| record(3, 0.01 * k as f64, k != 0)).collect();
        recs.extend((0..4).map(|_| record(7, 0.2, true)));
        let rep = summarize(&recs, 0.1).unwrap();
        assert_eq!(rep.classes[0].pass_rate, 80.0);
        assert_eq!(rep.classes[1].pass_rate, 100.0);
        assert_eq!(rep.mean_pass_rate, 90.0);
        let errs: Vec<f64> = recs[..5].iter().map(|r| r.error_add).collect();
        assert_eq!(rep.classes[0].auc_add, auc_threshold_curve(&errs, 0.1).unwrap());
        assert_eq!(rep.samples, 9);
        assert!(matches!(summarize(&[], 0.1), Err(Error::NoRecords)));
    }

    #[test]
    fn evaluate_uses_the_class_metric() {
        let m = model(random_points(9, 200, 0.2));
        let gt = random_pose(10);
        let pred = Pose::new(gt.rotation, gt.translation + Vec3::new(0.0, 0.0, 0.015));
        let policy = CorrectnessPolicy::absolute(0.01).unwrap();
        let r = evaluate(&gt, &pred, &m, &policy, MetricKind::Add);
        assert!(!r.correct);
        assert!(r.error_adds <= r.error_add);
        let mut map = MetricMap::default();
        map.0.insert(4, MetricKind::Adds);
        assert_eq!(map.get(4), MetricKind::Adds);
        assert_eq!(map.get(0), MetricKind::Add);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn adds_never_exceeds_add(seed in any::<u64>()) {
            let m = model(random_points(seed, 120, 0.3));
            let gt = random_pose(seed ^ 1);
            let pred = random_pose(seed ^ 2);
            prop_assert!(adds_error(&gt, &pred, &m) <= add_error(&gt, &pred, &m) + 1e-12);
        }

        #[test]
        fn add_is_left_invariant(seed in any::<u64>()) {
            let m = model(random_points(seed, 100, 0.3));
            let gt = random_pose(seed ^ 3);
            let pred = random_pose(seed ^ 4);
            let g = random_pose(seed ^ 5);
            let before = add_error(&gt, &pred, &m);
            let after = add_error(&g.compose(&gt), &g.compose(&pred), &m);
            prop_assert!((before - after).abs() < 1e-9);
        }

        #[test]
        fn chamfer_is_symmetric_and_positive(seed in any::<u64>()) {
            let a: PointCloud = random_points(seed, 30, 1.0).into();
            let b: PointCloud = random_points(seed ^ 7, 25, 1.0).into();
            let ab = chamfer_distance(&a, &b).unwrap();
            prop_assert!((ab - chamfer_distance(&b, &a).unwrap()).abs() < 1e-15);
            prop_assert!(ab > 0.0);
        }
    }
}
