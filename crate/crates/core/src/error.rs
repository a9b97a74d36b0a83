//! Error types shared across the toolkit.

use thiserror::Error;

/// Errors produced while decoding mesh / point-cloud files.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed header at line {line}: {message}")]
    MalformedHeader { line: usize, message: String },
    #[error("truncated body: expected {expected} {what}, found {found} (at byte offset {offset})")]
    TruncatedBody {
        what: &'static str,
        expected: usize,
        found: usize,
        offset: usize,
    },
    #[error("face index {index} out of range for {vertex_count} vertices (at {location})")]
    FaceIndexOutOfRange {
        index: i64,
        vertex_count: usize,
        location: String,
    },
    #[error("malformed body at {location}: {message}")]
    MalformedBody { location: String, message: String },
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Errors from geometric queries on meshes.
#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("mesh has no faces")]
    EmptyMesh,
    #[error("centroid line parallel to z misses every face of the target mesh")]
    NoRoiIntersection,
}

/// Errors from the registration cascade.
#[derive(Debug, Error)]
pub enum RegistrationError {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("source normals are required for spin-image matching")]
    MissingNormals,
    #[error("spin images have mismatched geometry (bin size / width)")]
    DescriptorMismatch,
    #[error("too few correspondences: got {got}, need at least {need}")]
    TooFewCorrespondences { got: usize, need: usize },
    #[error("degenerate correspondence geometry: {0}")]
    DegenerateSample(String),
    #[error("no transform hypothesis reached {need} inliers")]
    NoConsensus { need: usize },
    #[error(
        "under-constrained geometry: normal-equation condition number {condition:.3e} exceeds {max:.1e}"
    )]
    UnderConstrained { condition: f64, max: f64 },
    #[error("too few ICP correspondences inside the ROI: got {got}, need at least {need}")]
    TooFewIcpPoints { got: usize, need: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Errors from metric evaluation and statistics.
#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("size mismatch: {what} has {got} entries, expected {expected}")]
    SizeMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("paired test needs at least {need} samples, got {got}")]
    TooFewSamples { got: usize, need: usize },
}

/// Errors from trajectory parsing and evaluation.
#[derive(Debug, Error)]
pub enum TrajectoryError {
    #[error("line {line}: expected 8 numeric fields, got {got}")]
    FieldCount { line: usize, got: usize },
    #[error("line {line}: non-numeric field {field:?}")]
    NonNumeric { line: usize, field: String },
    #[error("line {line}: timestamps not strictly increasing ({prev} >= {next})")]
    NonMonotonicTimestamps { line: usize, prev: f64, next: f64 },
    #[error("line {line}: quaternion norm too small to normalize")]
    ZeroQuaternion { line: usize },
    #[error("no associations between trajectories (window {max_dt} s)")]
    NoAssociations { max_dt: f64 },
    #[error("trajectory alignment needs at least {need} pairs, got {got}")]
    TooFewPairs { got: usize, need: usize },
    #[error("degenerate point configuration for alignment: {0}")]
    DegenerateAlignment(String),
}

/// Errors from synthetic rendering and fusion.
#[derive(Debug, Error)]
pub enum SynthError {
    #[error("frame dimensions {got_w}x{got_h} do not match camera {cam_w}x{cam_h}")]
    DimensionMismatch {
        got_w: usize,
        got_h: usize,
        cam_w: usize,
        cam_h: usize,
    },
    #[error("no pose found for frame timestamp {timestamp}")]
    MissingPose { timestamp: f64 },
    #[error("invalid camera intrinsics: {0}")]
    InvalidCamera(String),
    #[error("sequence manifest: {0}")]
    Manifest(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
