//! File formats: object models, pose pools, training batches and reports.

mod batch;
mod model;
mod poses;
mod report;

use std::path::Path;

use crate::error::{Error, Result};

pub use batch::{batch_size, decode_batch, encode_batch, read_batch, write_batch, Batch, BATCH_MAGIC, BATCH_VERSION};
pub use model::{load_cloud, load_model, load_models_dir, parse_ply, parse_xyz};
pub use poses::{
    decode_poses, encode_poses_binary, encode_poses_csv, read_poses, write_poses_binary, write_poses_csv,
    POSE_MAGIC, POSE_RECORD_BYTES, POSE_VERSION,
};
pub use report::{read_metric_map, render_report, ReportFormat};

pub(crate) fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })
}
