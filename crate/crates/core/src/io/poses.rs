//! Pose pools. CSV rows `class_id,rx,ry,rz,tx,ty,tz` (axis-angle radians,
//! meters), or a compact little-endian binary form: magic `CPOS`, u32
//! version, u32 count, then per pose u16 class id and 6 f32 values.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{AxisAngle, Pose, Vec3};
use crate::synth::LabeledPose;

pub const POSE_MAGIC: &[u8; 4] = b"CPOS";
pub const POSE_VERSION: u32 = 1;
pub const POSE_RECORD_BYTES: usize = 2 + 6 * 4;

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn labeled(class_id: u16, v: [f64; 6]) -> Option<LabeledPose> {
    if v.iter().any(|x| !x.is_finite()) {
        return None;
    }
    Some(LabeledPose {
        class_id,
        pose: Pose::new(AxisAngle::new(Vec3::new(v[0], v[1], v[2])), Vec3::new(v[3], v[4], v[5])),
    })
}

fn decode_csv(text: &str, path: &Path) -> Result<Vec<LabeledPose>> {
    let mut out = Vec::new();
    let mut first = true;
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let header = first && fields[0].parse::<f64>().is_err();
        first = false;
        if header {
            continue;
        }
        if fields.len() != 7 {
            return Err(parse_err(path, k + 1, format!("expected 7 fields, found {}", fields.len())));
        }
        let class_id: u16 = fields[0]
            .parse()
            .map_err(|_| parse_err(path, k + 1, format!("bad class id {:?}", fields[0])))?;
        let mut v = [0.0; 6];
        for (slot, f) in v.iter_mut().zip(&fields[1..]) {
            *slot = f
                .parse()
                .map_err(|_| parse_err(path, k + 1, format!("not a number: {f:?}")))?;
        }
        out.push(labeled(class_id, v).ok_or_else(|| parse_err(path, k + 1, "non-finite pose"))?);
    }
    Ok(out)
}

fn u32_at(bytes: &[u8], offset: usize) -> Result<u32> {
    bytes
        .get(offset..offset + 4)
        .map(|b| u32::from_le_bytes(b.try_into().unwrap()))
        .ok_or(Error::Truncated { offset: offset as u64 })
}

fn decode_binary(bytes: &[u8]) -> Result<Vec<LabeledPose>> {
    let version = u32_at(bytes, 4)?;
    if version != POSE_VERSION {
        return Err(Error::VersionMismatch {
            offset: 4,
            found: version,
            expected: POSE_VERSION,
        });
    }
    let count = u32_at(bytes, 8)? as usize;
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let at = 12 + k * POSE_RECORD_BYTES;
        let rec = bytes
            .get(at..at + POSE_RECORD_BYTES)
            .ok_or(Error::Truncated { offset: at as u64 })?;
        let class_id = u16::from_le_bytes([rec[0], rec[1]]);
        let mut v = [0.0; 6];
        for (j, slot) in v.iter_mut().enumerate() {
            *slot = f32::from_le_bytes(rec[2 + 4 * j..6 + 4 * j].try_into().unwrap()) as f64;
        }
        out.push(labeled(class_id, v).ok_or_else(|| {
            Error::InconsistentBatch(format!("non-finite pose at offset {at}"))
        })?);
    }
    let end = 12 + count * POSE_RECORD_BYTES;
    if bytes.len() != end {
        return Err(Error::InconsistentBatch(format!("trailing bytes at offset {end}")));
    }
    Ok(out)
}

/// Decodes either pose format, detected by the binary magic.
pub fn decode_poses(bytes: &[u8], path: &Path) -> Result<Vec<LabeledPose>> {
    if bytes.starts_with(POSE_MAGIC) {
        return decode_binary(bytes);
    }
    let text = std::str::from_utf8(bytes).map_err(|_| parse_err(path, 0, "not a text pose file"))?;
    decode_csv(text, path)
}

pub fn read_poses(path: &Path) -> Result<Vec<LabeledPose>> {
    decode_poses(&super::read_file(path)?, path)
}

/// CSV with a header row. Values use the shortest exact decimal form, so
/// parsing the output reproduces the poses.
pub fn encode_poses_csv(poses: &[LabeledPose]) -> String {
    let mut s = String::with_capacity(64 * (poses.len() + 1));
    s.push_str("class_id,rx,ry,rz,tx,ty,tz\n");
    for p in poses {
        let r = p.pose.rotation.vector();
        let t = p.pose.translation;
        let _ = writeln!(s, "{},{},{},{},{},{},{}", p.class_id, r.x, r.y, r.z, t.x, t.y, t.z);
    }
    s
}

pub fn encode_poses_binary(poses: &[LabeledPose]) -> Result<Vec<u8>> {
    let count = u32::try_from(poses.len())
        .map_err(|_| Error::InvalidConfig("too many poses for the binary format".into()))?;
    let mut out = Vec::with_capacity(12 + poses.len() * POSE_RECORD_BYTES);
    out.extend_from_slice(POSE_MAGIC);
    out.extend_from_slice(&POSE_VERSION.to_le_bytes());
    out.extend_from_slice(&count.to_le_bytes());
    for p in poses {
        out.extend_from_slice(&p.class_id.to_le_bytes());
        let r = p.pose.rotation.vector();
        for v in r.iter().chain(p.pose.translation.iter()) {
            out.extend_from_slice(&(*v as f32).to_le_bytes());
        }
    }
    Ok(out)
}

pub fn write_poses_csv(path: &Path, poses: &[LabeledPose]) -> Result<()> {
    super::write_file(path, encode_poses_csv(poses).as_bytes())
}

pub fn write_poses_binary(path: &Path, poses: &[LabeledPose]) -> Result<()> {
    super::write_file(path, &encode_poses_binary(poses)?)
}
