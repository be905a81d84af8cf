//! Training pose generation from a pose pool, verbatim or through a
//! Gaussian-kernel density estimate.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{AxisAngle, Pose, Vec3};
use crate::seed;

/// Default rotation jitter for KDE draws: 5 degrees.
pub const DEFAULT_ROTATION_SIGMA: f64 = 5.0 * std::f64::consts::PI / 180.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerMode {
    /// Uniform draws with replacement from the pool.
    Verbatim,
    /// A pool pose plus Gaussian translation jitter and a small random
    /// rotation, which samples the Gaussian-kernel density estimate.
    Kde,
}

impl std::str::FromStr for SamplerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "verbatim" => Ok(SamplerMode::Verbatim),
            "kde" => Ok(SamplerMode::Kde),
            other => Err(Error::InvalidConfig(format!("unknown sampler mode {other:?}"))),
        }
    }
}

/// Optional replacements for the fitted KDE parameters.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SamplerOverrides {
    pub translation_bandwidth: Option<Vec3>,
    pub rotation_perturb_sigma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoseSampler {
    mode: SamplerMode,
    pool: Vec<Pose>,
    translation_bandwidth: Vec3,
    rotation_perturb_sigma: f64,
}

/// Scott's rule for 3D data: `n^(-1/7)` times the per-axis sample
/// standard deviation of the translations.
pub fn scott_bandwidth(poses: &[Pose]) -> Result<Vec3> {
    let n = poses.len();
    if n < 2 {
        return Err(Error::InsufficientPoses(n));
    }
    let mean = poses.iter().fold(Vec3::zeros(), |a, p| a + p.translation) / n as f64;
    let var = poses.iter().fold(Vec3::zeros(), |a, p| {
        let d = p.translation - mean;
        a + d.component_mul(&d)
    }) / (n - 1) as f64;
    Ok(var.map(f64::sqrt) * (n as f64).powf(-1.0 / 7.0))
}

impl PoseSampler {
    pub fn fit(poses: Vec<Pose>, mode: SamplerMode, overrides: SamplerOverrides) -> Result<Self> {
        if poses.is_empty() {
            return Err(Error::NoPoses);
        }
        if poses.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("pose pool"));
        }
        let (translation_bandwidth, rotation_perturb_sigma) = match mode {
            SamplerMode::Verbatim => (Vec3::zeros(), 0.0),
            SamplerMode::Kde => {
                let bw = match overrides.translation_bandwidth {
                    Some(bw) => bw,
                    None => scott_bandwidth(&poses)?,
                };
                let sigma = overrides.rotation_perturb_sigma.unwrap_or(DEFAULT_ROTATION_SIGMA);
                if bw.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) || !(sigma >= 0.0) || !sigma.is_finite() {
                    return Err(Error::InvalidConfig(
                        "KDE bandwidths must be finite and non-negative".into(),
                    ));
                }
                (bw, sigma)
            }
        };
        Ok(PoseSampler {
            mode,
            pool: poses,
            translation_bandwidth,
            rotation_perturb_sigma,
        })
    }

    pub fn mode(&self) -> SamplerMode {
        self.mode
    }

    pub fn pool(&self) -> &[Pose] {
        &self.pool
    }

    pub fn translation_bandwidth(&self) -> Vec3 {
        self.translation_bandwidth
    }

    pub fn rotation_perturb_sigma(&self) -> f64 {
        self.rotation_perturb_sigma
    }

    /// Draws `count` poses, deterministically for a given seed.
    pub fn draw(&self, rng_seed: u64, count: usize) -> Vec<Pose> {
        let mut rng = seed::rng(rng_seed);
        (0..count)
            .map(|_| {
                let base = self.pool[rng.random_range(0..self.pool.len())];
                match self.mode {
                    SamplerMode::Verbatim => base,
                    SamplerMode::Kde => self.jitter(&base, &mut rng),
                }
            })
            .collect()
    }

    fn jitter<R: Rng>(&self, base: &Pose, rng: &mut R) -> Pose {
        let bw = self.translation_bandwidth;
        let noise = Vec3::new(
            bw.x * seed::normal(rng),
            bw.y * seed::normal(rng),
            bw.z * seed::normal(rng),
        );
        let translation = base.translation + noise;
        if self.rotation_perturb_sigma == 0.0 {
            return Pose::new(base.rotation, translation);
        }
        let axis = seed::unit_vector(rng);
        let angle = (self.rotation_perturb_sigma * seed::normal(rng)).abs();
        let delta = AxisAngle::new(axis * angle).to_matrix();
        let rotation = delta.compose(&base.rotation_matrix());
        Pose::from_rotation_matrix(&rotation, translation)
    }
}
