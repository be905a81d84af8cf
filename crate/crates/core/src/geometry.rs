//! Rigid-body primitives: axis-angle rotations, poses and point clouds.
//!
//! All angles are radians and all lengths are meters.

use std::ops::Index;

use nalgebra::Matrix3;

use crate::error::{Error, Result};

pub type Vec3 = nalgebra::Vector3<f64>;

/// Below this rotation angle the Rodrigues construction switches to its
/// second-order Taylor expansion.
const TAYLOR_THRESHOLD: f64 = 1e-7;

/// Norms up to `PI + CANONICAL_SLACK` are accepted as already canonical so
/// that rotations of exactly pi survive an f32 round trip unchanged.
const CANONICAL_SLACK: f64 = 1e-6;

/// Tolerance used when validating user supplied rotation matrices.
pub const ROTATION_TOLERANCE: f64 = 1e-6;

/// Axis-angle rotation vector: direction is the unit axis, norm is the angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAngle(Vec3);

impl AxisAngle {
    pub const IDENTITY: AxisAngle = AxisAngle(Vec3::new(0.0, 0.0, 0.0));

    /// Builds a canonical rotation vector with angle in `[0, pi]`.
    ///
    /// Vectors longer than pi are wrapped onto the equivalent rotation about
    /// the negated axis.
    pub fn new(r: Vec3) -> Self {
        let theta = r.norm();
        if theta <= std::f64::consts::PI + CANONICAL_SLACK || !theta.is_finite() {
            return AxisAngle(r);
        }
        let axis = r / theta;
        let wrapped = theta.rem_euclid(std::f64::consts::TAU);
        if wrapped > std::f64::consts::PI {
            AxisAngle(-axis * (std::f64::consts::TAU - wrapped))
        } else {
            AxisAngle(axis * wrapped)
        }
    }

    pub fn from_components(x: f64, y: f64, z: f64) -> Self {
        Self::new(Vec3::new(x, y, z))
    }

    pub fn vector(&self) -> Vec3 {
        self.0
    }

    pub fn angle(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn to_matrix(&self) -> RotationMatrix {
        axis_angle_to_matrix(self)
    }
}

impl Default for AxisAngle {
    fn default() -> Self {
        Self::IDENTITY
    }
}

/// Proper 3x3 rotation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix(Matrix3<f64>);

impl RotationMatrix {
    pub fn identity() -> Self {
        RotationMatrix(Matrix3::identity())
    }

    /// Validates orthonormality and a positive determinant.
    pub fn from_matrix(m: Matrix3<f64>) -> Result<Self> {
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("rotation matrix"));
        }
        let err = (m.transpose() * m - Matrix3::identity()).abs().max();
        let det_err = (m.determinant() - 1.0).abs();
        let worst = err.max(det_err);
        if worst > ROTATION_TOLERANCE {
            return Err(Error::NotRotation(worst));
        }
        Ok(RotationMatrix(m))
    }

    pub fn from_rows(rows: [[f64; 3]; 3]) -> Result<Self> {
        Self::from_matrix(Matrix3::from_row_slice(&[
            rows[0][0], rows[0][1], rows[0][2], rows[1][0], rows[1][1], rows[1][2], rows[2][0],
            rows[2][1], rows[2][2],
        ]))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        RotationMatrix(self.0.transpose())
    }

    pub fn compose(&self, other: &RotationMatrix) -> Self {
        RotationMatrix(self.0 * other.0)
    }

    pub fn rotate(&self, v: &Vec3) -> Vec3 {
        self.0 * v
    }

    pub fn to_axis_angle(&self) -> AxisAngle {
        rotation_to_axis_angle(&self.0)
    }
}

impl Index<(usize, usize)> for RotationMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

/// Rigid transform `x -> R x + t` from the object frame to the camera frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pose {
    pub rotation: AxisAngle,
    pub translation: Vec3,
}

impl Pose {
    pub fn new(rotation: AxisAngle, translation: Vec3) -> Self {
        Pose {
            rotation,
            translation,
        }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_rotation_matrix(rotation: &RotationMatrix, translation: Vec3) -> Self {
        Pose::new(rotation.to_axis_angle(), translation)
    }

    pub fn rotation_matrix(&self) -> RotationMatrix {
        self.rotation.to_matrix()
    }

    pub fn transform_point(&self, p: &Vec3) -> Vec3 {
        self.rotation_matrix().rotate(p) + self.translation
    }

    /// The inverse transform `(R^T, -R^T t)`.
    pub fn inverse(&self) -> Pose {
        let rt = self.rotation_matrix().transpose();
        Pose::from_rotation_matrix(&rt, -rt.rotate(&self.translation))
    }

    /// `self ∘ other`: applies `other` first, then `self`.
    pub fn compose(&self, other: &Pose) -> Pose {
        let r = self.rotation_matrix();
        let rot = r.compose(&other.rotation_matrix());
        Pose::from_rotation_matrix(&rot, r.rotate(&other.translation) + self.translation)
    }

    pub fn is_finite(&self) -> bool {
        self.rotation.is_finite() && self.translation.iter().all(|v| v.is_finite())
    }
}

/// An ordered set of 3D points in meters.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    points: Vec<Vec3>,
}

impl PointCloud {
    /// Rejects clouds containing non-finite coordinates.
    pub fn try_new(points: Vec<Vec3>) -> Result<Self> {
        if points.iter().any(|p| p.iter().any(|v| !v.is_finite())) {
            return Err(Error::NonFinite("point cloud"));
        }
        Ok(PointCloud { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Vec3> {
        self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vec3> {
        self.points.iter()
    }

    pub fn mean(&self) -> Option<Vec3> {
        if self.points.is_empty() {
            return None;
        }
        let sum = self.points.iter().fold(Vec3::zeros(), |acc, p| acc + p);
        Some(sum / self.points.len() as f64)
    }

    pub fn scaled(&self, factor: f64) -> PointCloud {
        PointCloud {
            points: self.points.iter().map(|p| p * factor).collect(),
        }
    }

    pub fn select(&self, indices: &[usize]) -> PointCloud {
        PointCloud {
            points: indices.iter().map(|&i| self.points[i]).collect(),
        }
    }
}

impl From<Vec<Vec3>> for PointCloud {
    fn from(points: Vec<Vec3>) -> Self {
        PointCloud { points }
    }
}

impl FromIterator<Vec3> for PointCloud {
    fn from_iter<I: IntoIterator<Item = Vec3>>(iter: I) -> Self {
        PointCloud {
            points: iter.into_iter().collect(),
        }
    }
}

impl Index<usize> for PointCloud {
    type Output = Vec3;

    fn index(&self, i: usize) -> &Vec3 {
        &self.points[i]
    }
}

impl<'a> IntoIterator for &'a PointCloud {
    type Item = &'a Vec3;
    type IntoIter = std::slice::Iter<'a, Vec3>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// A texture-less object model: class id, object-frame cloud and its
/// cached diameter.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectModel {
    pub class_id: u16,
    cloud: PointCloud,
    diameter: f64,
}

impl ObjectModel {
    pub fn new(class_id: u16, cloud: PointCloud) -> Result<Self> {
        let diameter = model_diameter(&cloud)?;
        Ok(ObjectModel {
            class_id,
            cloud,
            diameter,
        })
    }

    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }
}

fn skew(r: &Vec3) -> Matrix3<f64> {
    Matrix3::new(0.0, -r.z, r.y, r.z, 0.0, -r.x, -r.y, r.x, 0.0)
}

/// `vee(M - M^T)`, equal to `2 sin(theta) * axis` for a rotation.
fn antisymmetric_part(m: &Matrix3<f64>) -> Vec3 {
    Vec3::new(
        m[(2, 1)] - m[(1, 2)],
        m[(0, 2)] - m[(2, 0)],
        m[(1, 0)] - m[(0, 1)],
    )
}

/// Rodrigues' formula.
pub fn axis_angle_to_matrix(r: &AxisAngle) -> RotationMatrix {
    let v = r.vector();
    let theta = v.norm();
    let k = skew(&v);
    let k2 = k * k;
    let m = if theta < TAYLOR_THRESHOLD {
        Matrix3::identity() + k + k2 * 0.5
    } else {
        let a = theta.sin() / theta;
        let b = (1.0 - theta.cos()) / (theta * theta);
        Matrix3::identity() + k * a + k2 * b
    };
    RotationMatrix(m)
}

/// Inverse of [`axis_angle_to_matrix`] for arbitrary matrices; rejects
/// inputs that are not proper rotations.
pub fn matrix_to_axis_angle(m: &Matrix3<f64>) -> Result<AxisAngle> {
    Ok(RotationMatrix::from_matrix(*m)?.to_axis_angle())
}

fn rotation_to_axis_angle(m: &Matrix3<f64>) -> AxisAngle {
    let c = ((m.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
    let w = antisymmetric_part(m);
    let s = (w.norm() * 0.5).min(1.0);

    if c >= 0.0 {
        // theta in [0, pi/2]: asin is well conditioned and handles theta -> 0.
        if s == 0.0 {
            return AxisAngle::IDENTITY;
        }
        return AxisAngle(w * (0.5 * s.asin() / s));
    }

    let theta = c.acos();
    if s > 1e-4 {
        return AxisAngle(w * (0.5 * theta / s));
    }

    // Close to pi: recover the axis from the symmetric part (1 - c) a a^T.
    let sym = (m + m.transpose()) * 0.5 - Matrix3::identity() * c;
    let k = (0..3)
        .max_by(|&i, &j| sym[(i, i)].total_cmp(&sym[(j, j)]))
        .unwrap_or(0);
    let mut axis: Vec3 = sym.column(k).into_owned();
    axis /= axis.norm();
    let sign = if w.norm() > 0.0 {
        axis.dot(&w).signum()
    } else {
        // Exactly pi: make the dominant component positive.
        let dominant = axis.iamax();
        axis[dominant].signum()
    };
    AxisAngle(axis * (sign * theta))
}

/// `x_C = R x_O + t` for every point, order preserved.
pub fn apply_pose(pose: &Pose, cloud: &PointCloud) -> PointCloud {
    let r = pose.rotation_matrix();
    let t = pose.translation;
    cloud.iter().map(|p| r.rotate(p) + t).collect()
}

/// Angle of the relative rotation `R1 R2^T`, in `[0, pi]`.
///
/// Evaluated as `atan2(|vee(M - M^T)| / 2, (tr M - 1) / 2)`, which equals the
/// clamped `acos((tr M - 1) / 2)` but stays accurate near 0 and pi.
pub fn geodesic_distance(r1: &AxisAngle, r2: &AxisAngle) -> f64 {
    let m = r1.to_matrix().matrix() * r2.to_matrix().matrix().transpose();
    let c = (m.trace() - 1.0) * 0.5;
    let s = antisymmetric_part(&m).norm() * 0.5;
    s.atan2(c)
}

/// Subtracts the coordinate mean; returns the centered cloud and the mean.
pub fn normalize_segment(cloud: &PointCloud) -> Result<(PointCloud, Vec3)> {
    let mean = cloud.mean().ok_or(Error::EmptySegment)?;
    Ok((cloud.iter().map(|p| p - mean).collect(), mean))
}

/// Maximum pairwise Euclidean distance, exact O(n^2) scan.
pub fn model_diameter(cloud: &PointCloud) -> Result<f64> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let pts = cloud.points();
    let mut best = 0.0f64;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            best = best.max((a - b).norm_squared());
        }
    }
    Ok(best.sqrt())
}
