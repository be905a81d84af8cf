//! Times batch synthesis for a 10k-point ellipsoid model.

use std::time::Instant;

use pose_synth::seed;
use pose_synth::synth::{synthesize_batch, LabeledPose, SynthConfig};
use pose_synth::{AxisAngle, ObjectModel, PointCloud, Pose, Vec3};
use rand::Rng;
use rand::SeedableRng;

fn main() {
    let points: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let workers: usize = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let axes = Vec3::new(0.05, 0.035, 0.07);
    let cloud: PointCloud = (0..points)
        .map(|_| {
            let v = Vec3::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            v.normalize().component_mul(&axes)
        })
        .collect();
    let model = ObjectModel::new(0, cloud).unwrap();
    let poses: Vec<LabeledPose> = (0..128)
        .map(|i| LabeledPose {
            class_id: 0,
            pose: Pose::new(
                AxisAngle::from_components(0.3 * i as f64, 0.1, -0.2),
                Vec3::new(0.05, -0.03, 0.8 + 0.004 * i as f64),
            ),
        })
        .collect();
    let cfg = SynthConfig::default();
    let mut times = Vec::new();
    for run in 0..20 {
        let t = Instant::now();
        let batch = synthesize_batch(std::slice::from_ref(&model), &poses, run, 128, &cfg, workers).unwrap();
        times.push(t.elapsed().as_secs_f64() * 1e3);
        assert_eq!(batch.len(), 128);
    }
    times.sort_by(f64::total_cmp);
    println!("median {:.1} ms  (min {:.1})  seed {}", times[5], times[0], seed::sample_seed(0, 0));
}
