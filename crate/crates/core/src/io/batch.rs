//! Training batch files.
//!
//! Little-endian layout: magic `CAAE`, u32 version, u32 sample count, u32
//! points per sample `n`, u32 class count `c`; then per sample a u16 class
//! id, 3 f32 segment mean, 3 f32 rotation vector, 3 f32 translation, `n`
//! segment points and `n` target points as 3 f32 each.

use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{AxisAngle, PointCloud, Pose, Vec3};
use crate::synth::SyntheticSample;

pub const BATCH_MAGIC: &[u8; 4] = b"CAAE";
pub const BATCH_VERSION: u32 = 1;
const HEADER_BYTES: u64 = 20;

/// Decoded batch. Values are the stored f32 payloads widened to f64.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch {
    pub class_count: u32,
    pub points_per_sample: u32,
    pub samples: Vec<SyntheticSample>,
}

/// Size in bytes of a batch file.
pub fn batch_size(samples: u64, points: u64) -> u64 {
    HEADER_BYTES + samples * (2 + 36 + 24 * points)
}

fn put_vec(out: &mut Vec<u8>, v: &Vec3) {
    for x in v.iter() {
        out.extend_from_slice(&(*x as f32).to_le_bytes());
    }
}

/// Serializes `samples`, checking they share one point count and that
/// every class id is below `class_count`.
pub fn encode_batch(samples: &[SyntheticSample], class_count: u32) -> Result<Vec<u8>> {
    let n = samples.first().map_or(0, |s| s.segment_normalized.len());
    for (k, s) in samples.iter().enumerate() {
        if s.segment_normalized.len() != n || s.target_visible.len() != n {
            return Err(Error::InconsistentBatch(format!(
                "sample {k} has {} segment and {} target points, expected {n}",
                s.segment_normalized.len(),
                s.target_visible.len()
            )));
        }
        if u32::from(s.class_id) >= class_count {
            return Err(Error::InconsistentBatch(format!(
                "sample {k} has class {} but the batch declares {class_count} classes",
                s.class_id
            )));
        }
    }
    let count = u32::try_from(samples.len())
        .map_err(|_| Error::InconsistentBatch("too many samples".into()))?;
    let n32 = u32::try_from(n).map_err(|_| Error::InconsistentBatch("too many points".into()))?;
    let mut out = Vec::with_capacity(batch_size(count as u64, n as u64) as usize);
    out.extend_from_slice(BATCH_MAGIC);
    for v in [BATCH_VERSION, count, n32, class_count] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for s in samples {
        out.extend_from_slice(&s.class_id.to_le_bytes());
        put_vec(&mut out, &s.mean);
        put_vec(&mut out, &s.pose.rotation.vector());
        put_vec(&mut out, &s.pose.translation);
        for p in s.segment_normalized.iter().chain(s.target_visible.iter()) {
            put_vec(&mut out, p);
        }
    }
    Ok(out)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let b = self
            .bytes
            .get(self.pos..self.pos + n)
            .ok_or(Error::Truncated {
                offset: self.bytes.len().min(self.pos) as u64,
            })?;
        self.pos += n;
        Ok(b)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn vec3(&mut self) -> Result<Vec3> {
        let b = self.take(12)?;
        let f = |k: usize| f32::from_le_bytes(b[4 * k..4 * k + 4].try_into().unwrap()) as f64;
        Ok(Vec3::new(f(0), f(1), f(2)))
    }

    fn cloud(&mut self, n: usize) -> Result<PointCloud> {
        (0..n).map(|_| self.vec3()).collect::<Result<Vec<_>>>().map(PointCloud::from)
    }
}

pub fn decode_batch(bytes: &[u8]) -> Result<Batch> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4).ok() != Some(BATCH_MAGIC.as_slice()) {
        return Err(Error::BadMagic { offset: 0 });
    }
    let version = r.u32()?;
    if version != BATCH_VERSION {
        return Err(Error::VersionMismatch {
            offset: 4,
            found: version,
            expected: BATCH_VERSION,
        });
    }
    let count = r.u32()?;
    let n = r.u32()?;
    let class_count = r.u32()?;
    let expected = batch_size(count as u64, n as u64);
    if (bytes.len() as u64) < expected {
        // Report where the first incomplete record starts.
        let rec = 2 + 36 + 24 * n as u64;
        let whole = (bytes.len() as u64 - HEADER_BYTES) / rec;
        return Err(Error::Truncated {
            offset: HEADER_BYTES + whole * rec,
        });
    }
    if bytes.len() as u64 > expected {
        return Err(Error::InconsistentBatch(format!("trailing bytes at offset {expected}")));
    }
    let mut samples = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let at = r.pos;
        let class_id = u16::from_le_bytes(r.take(2)?.try_into().unwrap());
        if u32::from(class_id) >= class_count {
            return Err(Error::InconsistentBatch(format!(
                "class {class_id} at offset {at} is not below the class count {class_count}"
            )));
        }
        let mean = r.vec3()?;
        let rotation = AxisAngle::new(r.vec3()?);
        let translation = r.vec3()?;
        let segment_normalized = r.cloud(n as usize)?;
        let target_visible = r.cloud(n as usize)?;
        samples.push(SyntheticSample {
            class_id,
            segment_normalized,
            mean,
            target_visible,
            pose: Pose::new(rotation, translation),
        });
    }
    Ok(Batch {
        class_count,
        points_per_sample: n,
        samples,
    })
}

pub fn write_batch(path: &Path, samples: &[SyntheticSample], class_count: u32) -> Result<()> {
    super::write_file(path, &encode_batch(samples, class_count)?)
}

pub fn read_batch(path: &Path) -> Result<Batch> {
    decode_batch(&super::read_file(path)?)
}
