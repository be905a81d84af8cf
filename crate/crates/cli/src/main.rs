use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pose_synth::icp::{icp_point_to_point, IcpSchedule};
use pose_synth::io::{self, ReportFormat};
use pose_synth::metrics::{evaluate_poses, summarize, CorrectnessPolicy, MetricMap};
use pose_synth::sampling::{PoseSampler, SamplerMode, SamplerOverrides};
use pose_synth::seed::sample_seed;
use pose_synth::synth::{synthesize_batch, LabeledPose, OccluderConfig, SynthConfig};
use pose_synth::{Error, Pose, Result, Vec3};

#[derive(Parser)]
#[command(name = "posesynth", version, about = "Synthetic point-cloud training data and 6D pose tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a batch file of occluded, noisy object segments.
    Synth(SynthArgs),
    /// Draw training poses from a pose set, per class.
    SamplePoses(SampleArgs),
    /// Score predicted poses against ground truth.
    Eval(EvalArgs),
    /// Refine a pose with point-to-point ICP.
    Refine(RefineArgs),
}

#[derive(Args)]
struct SynthArgs {
    /// Directory of model files; class ids follow the sorted file names.
    #[arg(long)]
    models: PathBuf,
    /// Pose file (CSV or binary); sample i uses pose i modulo the count.
    #[arg(long)]
    poses: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 128)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 256)]
    points: usize,
    /// Noise standard deviation in meters.
    #[arg(long, default_value_t = 0.0013)]
    sigma: f64,
    /// Inclusive occluder count range `lo:hi`.
    #[arg(long, default_value = "0:3", value_parser = parse_range::<u32>)]
    occluder_count: (u32, u32),
    /// Occluder sphere radius range in meters, `lo:hi`.
    #[arg(long, default_value = "0.01:0.04", value_parser = parse_range::<f64>)]
    occluder_radius: (f64, f64),
    #[arg(long, default_value_t = 100.0)]
    hpr_factor: f64,
    /// Multiplier taking model coordinates to meters.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long, default_value = "kde")]
    mode: SamplerMode,
    /// Poses drawn per class.
    #[arg(long, default_value_t = 100_000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; a `.bin` extension selects the binary format.
    #[arg(long)]
    out: PathBuf,
    /// Per-axis translation bandwidth `x:y:z` in meters, replacing Scott's rule.
    #[arg(long, value_parser = parse_vec3)]
    bandwidth: Option<Vec3>,
    /// Rotation jitter standard deviation in degrees.
    #[arg(long)]
    rotation_sigma_deg: Option<f64>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    gt: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    models: PathBuf,
    /// `diameterN` (N percent of the model diameter) or `abs:X` (meters).
    #[arg(long, default_value = "diameter10")]
    policy: CorrectnessPolicy,
    #[arg(long, default_value_t = 0.1)]
    tau_max: f64,
    /// `class_id,add|adds` rows choosing the metric that decides correctness.
    #[arg(long)]
    metric_map: Option<PathBuf>,
    #[arg(long, default_value = "text")]
    format: ReportFormat,
    /// Report file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
}

#[derive(Args)]
struct RefineArgs {
    #[arg(long)]
    model: PathBuf,
    /// Observed segment in camera coordinates.
    #[arg(long)]
    segment: PathBuf,
    /// Pose CSV with a single row.
    #[arg(long)]
    init_pose: PathBuf,
    #[arg(long, default_value_t = 10)]
    iters: usize,
    #[arg(long, default_value_t = 0.01)]
    radius: f64,
    /// Fraction by which the radius shrinks after each iteration.
    #[arg(long, default_value_t = 0.1)]
    decay: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
}

fn parse_range<T: std::str::FromStr>(s: &str) -> std::result::Result<(T, T), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<T>().map_err(|_| format!("bad number {x:?}"));
    Ok((p(a)?, p(b)?))
}

fn parse_vec3(s: &str) -> std::result::Result<Vec3, String> {
    let v: Vec<f64> = s
        .split(':')
        .map(|x| x.trim().parse().map_err(|_| format!("bad number {x:?}")))
        .collect::<std::result::Result<_, _>>()?;
    match v.as_slice() {
        [x] => Ok(Vec3::repeat(*x)),
        [x, y, z] => Ok(Vec3::new(*x, *y, *z)),
        _ => Err(format!("expected x:y:z, got {s:?}")),
    }
}

fn synth(a: SynthArgs) -> Result<()> {
    let config = SynthConfig {
        occluders: OccluderConfig {
            count_range: a.occluder_count,
            sphere_radius_range: a.occluder_radius,
            ..OccluderConfig::default()
        },
        noise_sigma: a.sigma,
        output_points: a.points,
        hpr_radius_factor: a.hpr_factor,
    };
    config.validate()?;
    let models = io::load_models_dir(&a.models, a.scale)?;
    let poses = io::read_poses(&a.poses)?;
    let samples = synthesize_batch(&models, &poses, a.seed, a.count, &config, a.workers)?;
    io::write_batch(&a.out, &samples, models.len() as u32)
}

fn is_binary(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("bin"))
}

fn sample_poses(a: SampleArgs) -> Result<()> {
    let train = io::read_poses(&a.train)?;
    if train.is_empty() {
        return Err(Error::NoPoses);
    }
    let mut by_class: BTreeMap<u16, Vec<Pose>> = BTreeMap::new();
    for p in train {
        by_class.entry(p.class_id).or_default().push(p.pose);
    }
    let overrides = SamplerOverrides {
        translation_bandwidth: a.bandwidth,
        rotation_perturb_sigma: a.rotation_sigma_deg.map(f64::to_radians),
    };
    let mut out = Vec::with_capacity(by_class.len() * a.count);
    for (class_id, poses) in by_class {
        let sampler = PoseSampler::fit(poses, a.mode, overrides)?;
        out.extend(
            sampler
                .draw(sample_seed(a.seed, class_id as u64), a.count)
                .into_iter()
                .map(|pose| LabeledPose { class_id, pose }),
        );
    }
    if is_binary(&a.out) {
        io::write_poses_binary(&a.out, &out)
    } else {
        io::write_poses_csv(&a.out, &out)
    }
}

fn eval(a: EvalArgs) -> Result<()> {
    let models = io::load_models_dir(&a.models, a.scale)?;
    let gt = io::read_poses(&a.gt)?;
    let pred = io::read_poses(&a.pred)?;
    let metrics = match &a.metric_map {
        Some(p) => io::read_metric_map(p)?,
        None => MetricMap::default(),
    };
    let records = evaluate_poses(&gt, &pred, &models, &a.policy, &metrics)?;
    let report = summarize(&records, a.tau_max)?;
    let text = io::render_report(&report, &a.policy, &metrics, a.format)?;
    match &a.out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::File {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn refine(a: RefineArgs) -> Result<()> {
    if !(0.0..1.0).contains(&a.decay) {
        return Err(Error::InvalidConfig(format!(
            "decay is the per-iteration radius reduction and must be in [0, 1), got {}",
            a.decay
        )));
    }
    let schedule = IcpSchedule {
        iterations: a.iters,
        initial_radius: a.radius,
        decay: 1.0 - a.decay,
    };
    let init = io::read_poses(&a.init_pose)?;
    let [init] = init.as_slice() else {
        return Err(Error::InvalidConfig(format!(
            "{}: expected exactly one pose, found {}",
            a.init_pose.display(),
            init.len()
        )));
    };
    let model = io::load_model(&a.model, init.class_id, a.scale)?;
    let segment = io::load_cloud(&a.segment)?;
    let result = icp_point_to_point(model.cloud(), &segment, &init.pose, &schedule)?;
    io::write_poses_csv(
        &a.out,
        &[LabeledPose {
            class_id: init.class_id,
            pose: result.refined,
        }],
    )?;
    println!(
        "final_rmse: {}\nmatched_fraction: {}",
        result.final_rmse, result.matched_fraction
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(a) => synth(a),
        Command::SamplePoses(a) => sample_poses(a),
        Command::Eval(a) => eval(a),
        Command::Refine(a) => refine(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
