//! On-line training sample synthesis.
//!
//! Pipeline per sample: pose the model into the camera frame, drop random
//! spherical occluders between camera and object, keep the object points
//! that survive hidden point removal, perturb them with Gaussian noise,
//! resample to a fixed size and center. The clean learning target is the
//! unoccluded, noise-free visible part of the posed model.

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{apply_pose, normalize_segment, ObjectModel, PointCloud, Pose, Vec3};
use crate::hpr::{hidden_point_removal, occlusion_visibility};
use crate::seed;

/// Minimum number of object points that must survive occlusion.
pub const MIN_VISIBLE_POINTS: usize = 8;
/// Re-draws attempted after the first fully occluded draw.
pub const OCCLUSION_RETRIES: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct OccluderConfig {
    /// Inclusive range for the number of occluders.
    pub count_range: (u32, u32),
    /// Sphere radius range in meters.
    pub sphere_radius_range: (f64, f64),
    /// Position of the sphere center along the camera-to-object ray.
    pub depth_fraction_range: (f64, f64),
    /// Radius of the disk the center is jittered in, perpendicular to the ray.
    pub lateral_jitter: f64,
    pub points_per_occluder: usize,
}

impl Default for OccluderConfig {
    fn default() -> Self {
        OccluderConfig {
            count_range: (0, 3),
            sphere_radius_range: (0.01, 0.04),
            depth_fraction_range: (0.3, 0.9),
            lateral_jitter: 0.05,
            points_per_occluder: 256,
        }
    }
}

impl OccluderConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        let (lo, hi) = self.count_range;
        if hi < lo {
            return bad("occluder count range is empty");
        }
        let (rlo, rhi) = self.sphere_radius_range;
        if !(rlo > 0.0 && rhi >= rlo && rhi.is_finite()) {
            return bad("occluder radius range must be non-empty and positive");
        }
        let (flo, fhi) = self.depth_fraction_range;
        if !(flo > 0.0 && fhi >= flo && fhi < 1.0) {
            return bad("occluder depth fraction range must lie inside (0, 1)");
        }
        if !(self.lateral_jitter >= 0.0 && self.lateral_jitter.is_finite()) {
            return bad("lateral jitter must be non-negative");
        }
        if self.points_per_occluder == 0 {
            return bad("points per occluder must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub occluders: OccluderConfig,
    /// Standard deviation of the per-coordinate noise, meters.
    pub noise_sigma: f64,
    /// Points per output segment.
    pub output_points: usize,
    pub hpr_radius_factor: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            occluders: OccluderConfig::default(),
            noise_sigma: 0.0013,
            output_points: 256,
            hpr_radius_factor: 100.0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        self.occluders.validate()?;
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::InvalidConfig("noise sigma must be >= 0".into()));
        }
        if self.output_points == 0 {
            return Err(Error::InvalidConfig("output points must be >= 1".into()));
        }
        if !(self.hpr_radius_factor > 1.0) {
            return Err(Error::InvalidConfig("hpr radius factor must be > 1".into()));
        }
        Ok(())
    }
}

/// One training record.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSample {
    pub class_id: u16,
    /// Occluded, noisy segment with its mean removed.
    pub segment_normalized: PointCloud,
    /// Mean of the segment before centering.
    pub mean: Vec3,
    /// Noise- and occluder-free visible part of the posed model.
    pub target_visible: PointCloud,
    pub pose: Pose,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereOccluder {
    pub center: Vec3,
    pub radius: f64,
}

fn uniform(rng: &mut impl Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.random_range(lo..=hi)
    } else {
        lo
    }
}

/// Two unit vectors completing `d` to an orthonormal basis.
fn perpendicular_basis(d: &Vec3) -> (Vec3, Vec3) {
    let helper = if d.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let e1 = d.cross(&helper).normalize();
    let e2 = d.cross(&e1);
    (e1, e2)
}

fn draw_spheres(
    rng: &mut impl Rng,
    camera: &Vec3,
    object_centroid: &Vec3,
    config: &OccluderConfig,
) -> Vec<SphereOccluder> {
    let (lo, hi) = config.count_range;
    let count = rng.random_range(lo..=hi);
    let ray = object_centroid - camera;
    let dir = ray.normalize();
    let (e1, e2) = perpendicular_basis(&dir);
    (0..count)
        .map(|_| {
            let f = uniform(rng, config.depth_fraction_range);
            let r = config.lateral_jitter * rng.random::<f64>().sqrt();
            let phi = rng.random::<f64>() * std::f64::consts::TAU;
            let offset = (e1 * phi.cos() + e2 * phi.sin()) * r;
            SphereOccluder {
                center: camera + ray * f + offset,
                radius: uniform(rng, config.sphere_radius_range),
            }
        })
        .collect()
}

/// The occluder spheres that [`generate_occluders`] samples for `rng_seed`.
pub fn sample_occluders(
    rng_seed: u64,
    camera: &Vec3,
    object_centroid: &Vec3,
    config: &OccluderConfig,
) -> Vec<SphereOccluder> {
    draw_spheres(&mut seed::rng(rng_seed), camera, object_centroid, config)
}

/// Points sampled uniformly on the surfaces of random spheres placed
/// between the camera and the object. Occluder `k` owns points
/// `k * points_per_occluder .. (k + 1) * points_per_occluder`.
pub fn generate_occluders(
    rng_seed: u64,
    camera: &Vec3,
    object_centroid: &Vec3,
    config: &OccluderConfig,
) -> PointCloud {
    let mut rng = seed::rng(rng_seed);
    let spheres = draw_spheres(&mut rng, camera, object_centroid, config);
    let mut points = Vec::with_capacity(spheres.len() * config.points_per_occluder);
    for s in &spheres {
        for _ in 0..config.points_per_occluder {
            points.push(s.center + seed::unit_vector(&mut rng) * s.radius);
        }
    }
    points.into()
}

/// Adds i.i.d. `N(0, sigma^2)` noise to every coordinate.
pub fn add_gaussian_noise(rng_seed: u64, cloud: &PointCloud, sigma: f64) -> PointCloud {
    if sigma == 0.0 {
        return cloud.clone();
    }
    let mut rng = seed::rng(rng_seed);
    cloud
        .iter()
        .map(|p| {
            let n = Vec3::new(
                seed::normal(&mut rng),
                seed::normal(&mut rng),
                seed::normal(&mut rng),
            );
            p + n * sigma
        })
        .collect()
}

/// Resamples to exactly `n` points. Larger clouds are subsampled without
/// replacement; smaller ones keep every point once and fill the remainder
/// with uniform draws, then the order is shuffled.
pub fn resample_fixed(rng_seed: u64, cloud: &PointCloud, n: usize) -> Result<PointCloud> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if n == 0 {
        return Err(Error::InvalidConfig("resample size must be >= 1".into()));
    }
    let mut rng = seed::rng(rng_seed);
    let m = cloud.len();
    let indices: Vec<usize> = if m >= n {
        index::sample(&mut rng, m, n).into_vec()
    } else {
        let mut idx: Vec<usize> = (0..m).collect();
        idx.extend((m..n).map(|_| rng.random_range(0..m)));
        idx.shuffle(&mut rng);
        idx
    };
    Ok(cloud.select(&indices))
}

/// Noise-free visible part of the posed model, seen from the origin.
pub fn visible_target(model: &ObjectModel, pose: &Pose, radius_factor: f64) -> Result<PointCloud> {
    let posed = apply_pose(pose, model.cloud());
    let visible = hidden_point_removal(&posed, &Vec3::zeros(), radius_factor)?;
    Ok(posed.select(&visible))
}

// Sub-stream tags for per-sample randomness.
const TAG_OCCLUDERS: u64 = 1;
const TAG_NOISE: u64 = 2;
const TAG_RESAMPLE: u64 = 3;
const TAG_TARGET: u64 = 4;
const TAG_RETRY: u64 = 0x5245_5452_5900;

/// Generates one training sample. Deterministic in `rng_seed`.
pub fn synthesize_sample(
    model: &ObjectModel,
    pose: &Pose,
    rng_seed: u64,
    config: &SynthConfig,
) -> Result<SyntheticSample> {
    config.validate()?;
    let posed = apply_pose(pose, model.cloud());
    let camera = Vec3::zeros();
    let centroid = posed.mean().ok_or(Error::EmptyCloud)?;
    if (centroid - camera).norm() < 1e-9 {
        return Err(Error::DegenerateViewpoint(0));
    }

    let mut unoccluded: Option<Vec<usize>> = None;
    for attempt in 0..=OCCLUSION_RETRIES {
        let attempt_seed = if attempt == 0 {
            rng_seed
        } else {
            seed::derive(rng_seed, TAG_RETRY + attempt as u64)
        };
        let occluders = generate_occluders(
            seed::derive(attempt_seed, TAG_OCCLUDERS),
            &camera,
            &centroid,
            &config.occluders,
        );
        let vis = occlusion_visibility(
            posed.points(),
            occluders.points(),
            &camera,
            config.hpr_radius_factor,
        )?;
        let target_idx = unoccluded.get_or_insert(vis.unoccluded);
        if vis.occluded.len() < MIN_VISIBLE_POINTS {
            continue;
        }

        let target = resample_fixed(
            seed::derive(rng_seed, TAG_TARGET),
            &posed.select(target_idx),
            config.output_points,
        )?;
        let noisy = add_gaussian_noise(
            seed::derive(attempt_seed, TAG_NOISE),
            &posed.select(&vis.occluded),
            config.noise_sigma,
        );
        let segment = resample_fixed(
            seed::derive(attempt_seed, TAG_RESAMPLE),
            &noisy,
            config.output_points,
        )?;
        let (segment_normalized, mean) = normalize_segment(&segment)?;
        return Ok(SyntheticSample {
            class_id: model.class_id,
            segment_normalized,
            mean,
            target_visible: target,
            pose: *pose,
        });
    }
    Err(Error::FullyOccluded(OCCLUSION_RETRIES + 1))
}

/// A pose tagged with the class of the object it applies to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledPose {
    pub class_id: u16,
    pub pose: Pose,
}

/// Generates `count` samples. Sample `i` uses pose `poses[i % poses.len()]`
/// and seed `splitmix64(master_seed ^ i)`, so the output does not depend on
/// `workers`.
pub fn synthesize_batch(
    models: &[ObjectModel],
    poses: &[LabeledPose],
    master_seed: u64,
    count: usize,
    config: &SynthConfig,
    workers: usize,
) -> Result<Vec<SyntheticSample>> {
    config.validate()?;
    if poses.is_empty() {
        return Err(Error::NoPoses);
    }
    for p in poses {
        if !models.iter().any(|m| m.class_id == p.class_id) {
            return Err(Error::InvalidConfig(format!(
                "pose references unknown class {}",
                p.class_id
            )));
        }
    }
    let make = |i: usize| {
        let entry = &poses[i % poses.len()];
        let model = models
            .iter()
            .find(|m| m.class_id == entry.class_id)
            .expect("checked above");
        synthesize_sample(model, &entry.pose, seed::sample_seed(master_seed, i as u64), config)
    };
    if workers <= 1 {
        return (0..count).map(make).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    pool.install(|| (0..count).into_par_iter().map(make).collect())
}
