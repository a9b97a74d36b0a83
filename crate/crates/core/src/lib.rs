//! Evaluation toolkit for 3D surface reconstructions.
//!
//! The crate covers the full validation loop: mesh / point-cloud I/O and
//! geometric queries, two-stage rigid registration (spin-image matching
//! followed by point-to-plane ICP), surface distance and normal-deviation
//! metrics with ROI and boundary exclusion, camera-trajectory error scoring,
//! and a synthetic RGBD sequence generator with a reference depth-fusion
//! reconstructor for closed-loop tests.
//!
//! All geometry is in millimeters; trajectory timestamps are in seconds.

pub mod error;
pub mod io;
pub mod mesh;
pub mod transform;

pub use error::{GeometryError, MetricsError, ParseError, RegistrationError, SynthError, TrajectoryError};
pub use mesh::{BvhTree, ClosestHit, PointCloud, TriangleMesh};
pub use transform::RigidTransform;
