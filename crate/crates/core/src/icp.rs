//! Radius-gated point-to-point ICP.

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::geometry::{PointCloud, Pose, RotationMatrix, Vec3};
use crate::spatial::KdTree;

/// Iteration count and shrinking correspondence radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IcpSchedule {
    pub iterations: usize,
    /// Meters.
    pub initial_radius: f64,
    /// Per-iteration radius multiplier in `(0, 1]`.
    pub decay: f64,
}

impl Default for IcpSchedule {
    fn default() -> Self {
        IcpSchedule {
            iterations: 10,
            initial_radius: 0.01,
            decay: 0.9,
        }
    }
}

impl IcpSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("icp needs at least one iteration".into()));
        }
        if !(self.initial_radius > 0.0) || !self.initial_radius.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "icp radius must be positive, got {}",
                self.initial_radius
            )));
        }
        if !(self.decay > 0.0 && self.decay <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "icp decay multiplier must be in (0, 1], got {}",
                self.decay
            )));
        }
        Ok(())
    }

    /// Correspondence radius of iteration `i` (0-based).
    pub fn radius(&self, i: usize) -> f64 {
        self.initial_radius * self.decay.powi(i as i32)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IcpResult {
    pub refined: Pose,
    /// RMS distance of the last iteration's correspondences under the
    /// refined pose; 0 when nothing matched.
    pub final_rmse: f64,
    /// Fraction of source points matched in the last iteration.
    pub matched_fraction: f64,
    /// RMS correspondence distance before each iteration's update.
    pub rmse_history: Vec<f64>,
}

/// Least-squares rigid transform taking `src[i]` onto `dst[i]`. `None` for
/// fewer than three pairs.
pub fn rigid_fit(src: &[Vec3], dst: &[Vec3]) -> Option<(RotationMatrix, Vec3)> {
    assert_eq!(src.len(), dst.len());
    if src.len() < 3 {
        return None;
    }
    let n = src.len() as f64;
    let cs = src.iter().fold(Vec3::zeros(), |a, p| a + p) / n;
    let cd = dst.iter().fold(Vec3::zeros(), |a, p| a + p) / n;
    let mut h = Matrix3::zeros();
    for (s, d) in src.iter().zip(dst) {
        h += (s - cs) * (d - cd).transpose();
    }
    let svd = h.svd(true, true);
    let (u, v_t) = (svd.u?, svd.v_t?);
    let v = v_t.transpose();
    let mut fix = Matrix3::identity();
    if (v * u.transpose()).determinant() < 0.0 {
        fix[(2, 2)] = -1.0;
    }
    let r = RotationMatrix::from_matrix(v * fix * u.transpose()).ok()?;
    let t = cd - r.rotate(&cs);
    Some((r, t))
}

fn rms(sum_sq: f64, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        (sum_sq / n as f64).sqrt()
    }
}

/// Refines `init`, the pose taking the object-frame `source` (the model) to
/// the camera-frame `target` (the observed segment).
pub fn icp_point_to_point(
    source: &PointCloud,
    target: &PointCloud,
    init: &Pose,
    schedule: &IcpSchedule,
) -> Result<IcpResult> {
    schedule.validate()?;
    if source.len() < 3 || target.len() < 3 {
        return Err(Error::InvalidConfig("icp needs at least 3 points in each cloud".into()));
    }
    if !init.is_finite() {
        return Err(Error::NonFinite("initial pose"));
    }
    let tree = KdTree::new(target.points());
    let mut rot = init.rotation_matrix();
    let mut trans = init.translation;
    let mut src = Vec::with_capacity(source.len());
    let mut dst = Vec::with_capacity(source.len());
    let mut history = Vec::with_capacity(schedule.iterations);
    let mut last = (0.0, 0.0);

    for i in 0..schedule.iterations {
        let radius = schedule.radius(i);
        src.clear();
        dst.clear();
        let mut sum_sq = 0.0;
        for p in source {
            let q = rot.rotate(p) + trans;
            if let Some((j, d2)) = tree.nearest_within(&q, radius) {
                src.push(q);
                dst.push(*tree.point(j));
                sum_sq += d2;
            }
        }
        history.push(rms(sum_sq, src.len()));
        if let Some((dr, dt)) = rigid_fit(&src, &dst) {
            rot = dr.compose(&rot);
            trans = dr.rotate(&trans) + dt;
            let after: f64 = src
                .iter()
                .zip(&dst)
                .map(|(s, d)| (dr.rotate(s) + dt - d).norm_squared())
                .sum();
            last = (rms(after, src.len()), src.len() as f64 / source.len() as f64);
        } else {
            last = (rms(sum_sq, src.len()), src.len() as f64 / source.len() as f64);
        }
    }

    Ok(IcpResult {
        refined: Pose::from_rotation_matrix(&rot, trans),
        final_rmse: last.0,
        matched_fraction: last.1,
        rmse_history: history,
    })
}
