mod support;

use pose_synth::hpr::hidden_point_removal;
use pose_synth::hull::{on_hull_mask, tolerance};
use pose_synth::{PointCloud, Vec3};
use rand::Rng;

#[test]
fn hull_vertices_match_gift_wrapping() {
    let mut rng = support::rng(11);
    for n in [4, 10, 60, 300] {
        let pts = support::ellipsoid(&mut rng, n, Vec3::new(1.0, 0.7, 0.4));
        let mut oracle = vec![false; n];
        for f in support::convex_facets(&pts) {
            for i in f {
                oracle[i] = true;
            }
        }
        assert_eq!(on_hull_mask(&pts, tolerance(&pts)), oracle, "n = {n}");
    }
}

#[test]
fn interior_points_are_not_on_hull() {
    let mut rng = support::rng(12);
    let mut pts = support::ellipsoid(&mut rng, 200, Vec3::new(1.0, 1.0, 1.0));
    let interior: Vec<Vec3> = (0..50).map(|_| support::unit_vector(&mut rng) * rng.random_range(0.0..0.9)).collect();
    pts.extend(interior);
    let mask = on_hull_mask(&pts, tolerance(&pts));
    assert!(mask[..200].iter().all(|&m| m));
    assert!(mask[200..].iter().all(|&m| !m));
}

// Unit sphere 3 m away along the optical axis: exactly the near cap
// (z < 3 - 1/3) is visible.
#[test]
fn sphere_in_front_of_camera() {
    let mut rng = support::rng(13);
    let center = Vec3::new(0.0, 0.0, 3.0);
    let pts: Vec<Vec3> = support::ellipsoid(&mut rng, 2000, Vec3::repeat(1.0))
        .into_iter()
        .map(|p| p + center)
        .collect();
    let vis = hidden_point_removal(&PointCloud::from(pts.clone()), &Vec3::zeros(), 10.0).unwrap();
    let got = support::mask(pts.len(), &vis);
    let oracle = support::raycast_visible(&pts, &Vec3::zeros());
    assert!(support::agreement(&got, &oracle) >= 0.99);

    let analytic: Vec<bool> = pts.iter().map(|p| p.z < 3.0 - 1.0 / 3.0).collect();
    // The sampled polytope differs from the sphere only in a thin band at the rim.
    let a = support::agreement(&oracle, &analytic);
    assert!(a >= 0.95, "{a}");
}

#[test]
fn convex_clouds_agree_with_ray_cast() {
    let mut rng = support::rng(14);
    for _ in 0..5 {
        let axes = Vec3::new(
            rng.random_range(0.03..0.1),
            rng.random_range(0.03..0.1),
            rng.random_range(0.03..0.1),
        );
        let offset = Vec3::new(rng.random_range(-0.2..0.2), rng.random_range(-0.2..0.2), rng.random_range(0.5..2.0));
        let pts: Vec<Vec3> = support::ellipsoid(&mut rng, 400, axes).into_iter().map(|p| p + offset).collect();
        let vis = hidden_point_removal(&PointCloud::from(pts.clone()), &Vec3::zeros(), 100.0).unwrap();
        let a = support::agreement(&support::mask(pts.len(), &vis), &support::raycast_visible(&pts, &Vec3::zeros()));
        assert!(a >= 0.95, "agreement {a}");
    }
}
