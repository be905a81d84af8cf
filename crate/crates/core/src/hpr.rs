//! Hidden point removal by spherical flipping.
//!
//! With the viewpoint moved to the origin, every point `p` is reflected to
//! `p + 2 (R - |p|) p / |p|` with `R = factor * max |p|`. A point is visible
//! iff its image is on the convex hull of the images plus the origin.

use crate::error::{Error, Result};
use crate::geometry::{PointCloud, Vec3};
use crate::hull;

/// Points closer than this to the viewpoint are rejected.
const MIN_VIEW_DISTANCE: f64 = 1e-9;

fn flip_into(out: &mut Vec<Vec3>, points: &[Vec3], viewpoint: &Vec3, radius: f64) {
    out.extend(points.iter().map(|p| {
        let q = p - viewpoint;
        let n = q.norm();
        q * ((2.0 * radius - n) / n)
    }));
}

fn check(points: &[Vec3], viewpoint: &Vec3, offset: usize) -> Result<f64> {
    let mut max = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        let d = (p - viewpoint).norm();
        if d < MIN_VIEW_DISTANCE {
            return Err(Error::DegenerateViewpoint(offset + i));
        }
        max = max.max(d);
    }
    Ok(max)
}

fn check_factor(radius_factor: f64) -> Result<()> {
    if !(radius_factor > 1.0) || !radius_factor.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "hpr radius factor must be > 1, got {radius_factor}"
        )));
    }
    Ok(())
}

fn visible_indices(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &v)| v.then_some(i))
        .collect()
}

/// Indices (ascending) of the points of `cloud` visible from `viewpoint`.
pub fn hidden_point_removal(
    cloud: &PointCloud,
    viewpoint: &Vec3,
    radius_factor: f64,
) -> Result<Vec<usize>> {
    check_factor(radius_factor)?;
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let max = check(cloud.points(), viewpoint, 0)?;
    let mut flipped = Vec::with_capacity(cloud.len() + 1);
    flip_into(&mut flipped, cloud.points(), viewpoint, radius_factor * max);
    flipped.push(Vec3::zeros());
    let eps = hull::tolerance(&flipped);
    let mask = hull::on_hull_mask(&flipped, eps);
    Ok(visible_indices(&mask[..cloud.len()]))
}

/// Visibility of `object` alone and of `object` in the presence of
/// `occluders`, both from the origin.
#[derive(Debug, Clone)]
pub struct OcclusionVisibility {
    /// Visible object indices without occluders.
    pub unoccluded: Vec<usize>,
    /// Visible object indices with occluders present.
    pub occluded: Vec<usize>,
}

/// Computes both visibility sets, sharing one hull build when the flip
/// radius is the same for both point sets.
pub fn occlusion_visibility(
    object: &[Vec3],
    occluders: &[Vec3],
    viewpoint: &Vec3,
    radius_factor: f64,
) -> Result<OcclusionVisibility> {
    check_factor(radius_factor)?;
    if object.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let max_obj = check(object, viewpoint, 0)?;
    let max_occ = check(occluders, viewpoint, object.len())?;
    let n = object.len();

    if max_occ <= max_obj {
        let radius = radius_factor * max_obj;
        let mut flipped = Vec::with_capacity(n + 1 + occluders.len());
        flip_into(&mut flipped, object, viewpoint, radius);
        flipped.push(Vec3::zeros());
        flip_into(&mut flipped, occluders, viewpoint, radius);
        let eps = hull::tolerance(&flipped[..=n]);
        let masks = hull::on_hull_mask_staged(&flipped, n + 1, eps);
        return Ok(OcclusionVisibility {
            unoccluded: visible_indices(&masks.first[..n]),
            occluded: visible_indices(&masks.full[..n]),
        });
    }

    // The occluders move the flip radius; the two problems differ.
    let unoccluded = hidden_point_removal(&object.to_vec().into(), viewpoint, radius_factor)?;
    let radius = radius_factor * max_occ;
    let mut flipped = Vec::with_capacity(n + 1 + occluders.len());
    flip_into(&mut flipped, object, viewpoint, radius);
    flipped.push(Vec3::zeros());
    flip_into(&mut flipped, occluders, viewpoint, radius);
    let eps = hull::tolerance(&flipped);
    let mask = hull::on_hull_mask(&flipped, eps);
    Ok(OcclusionVisibility {
        unoccluded,
        occluded: visible_indices(&mask[..n]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearer_of_two_collinear_points_is_visible() {
        let cloud: PointCloud = vec![Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, 2.0)].into();
        assert_eq!(hidden_point_removal(&cloud, &Vec3::zeros(), 100.0).unwrap(), vec![0]);
        let cloud: PointCloud = vec![Vec3::new(0.0, 0.0, 2.0), Vec3::new(0.0, 0.0, 1.0)].into();
        assert_eq!(hidden_point_removal(&cloud, &Vec3::zeros(), 100.0).unwrap(), vec![1]);
    }

    #[test]
    fn single_point_is_visible() {
        let cloud: PointCloud = vec![Vec3::new(0.1, 0.2, 0.7)].into();
        assert_eq!(hidden_point_removal(&cloud, &Vec3::zeros(), 100.0).unwrap(), vec![0]);
    }

    #[test]
    fn viewpoint_on_a_point_is_rejected() {
        let cloud: PointCloud = vec![Vec3::new(0.0, 0.0, 1.0), Vec3::new(1.0, 2.0, 3.0)].into();
        let err = hidden_point_removal(&cloud, &Vec3::new(1.0, 2.0, 3.0), 100.0).unwrap_err();
        assert!(matches!(err, Error::DegenerateViewpoint(1)));
        assert!(err.to_string().contains("degenerate viewpoint"));
    }

    #[test]
    fn rejects_bad_factor_and_empty_cloud() {
        let cloud: PointCloud = vec![Vec3::new(0.0, 0.0, 1.0)].into();
        assert!(hidden_point_removal(&cloud, &Vec3::zeros(), 1.0).is_err());
        assert!(hidden_point_removal(&PointCloud::default(), &Vec3::zeros(), 10.0).is_err());
    }

    #[test]
    fn viewpoint_translation_is_respected() {
        let cloud: PointCloud = vec![Vec3::new(5.0, 0.0, 1.0), Vec3::new(5.0, 0.0, 2.0)].into();
        let vis = hidden_point_removal(&cloud, &Vec3::new(5.0, 0.0, 3.0), 100.0).unwrap();
        assert_eq!(vis, vec![1]);
    }

    #[test]
    fn occluder_in_front_hides_the_point_behind_it() {
        let object = vec![Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.3, 0.0, 1.0)];
        let occluder = vec![Vec3::new(0.0, 0.0, 0.5)];
        let vis = occlusion_visibility(&object, &occluder, &Vec3::zeros(), 100.0).unwrap();
        assert_eq!(vis.unoccluded, vec![0, 1]);
        assert_eq!(vis.occluded, vec![1]);
    }
}
