//! Point-cloud data synthesis for 6D object pose learning, with the pose
//! evaluation and refinement tools that go with it.

pub mod error;
pub mod geometry;
pub mod hpr;
pub mod hull;
pub mod icp;
pub mod io;
pub mod metrics;
pub mod sampling;
pub mod seed;
pub mod spatial;
pub mod synth;

pub use error::{Error, Result};
pub use geometry::{AxisAngle, ObjectModel, PointCloud, Pose, RotationMatrix, Vec3};
