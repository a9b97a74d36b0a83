//! Mesh / point-cloud file codecs: PLY (ASCII and binary little-endian) and
//! an OBJ subset (v / vn / f records).

mod obj;
mod ply;

use crate::error::ParseError;
use crate::mesh::{PointCloud, TriangleMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    PlyAscii,
    PlyBinaryLe,
    Obj,
}

impl MeshFormat {
    pub fn name(&self) -> &'static str {
        match self {
            MeshFormat::PlyAscii => "ply-ascii",
            MeshFormat::PlyBinaryLe => "ply-binary-le",
            MeshFormat::Obj => "obj",
        }
    }
}

/// Geometry loaded from a file: faces present means a mesh, vertex-only
/// means a point cloud.
#[derive(Debug, Clone)]
pub enum LoadedGeometry {
    Mesh(TriangleMesh),
    Cloud(PointCloud),
}

impl LoadedGeometry {
    pub fn vertex_count(&self) -> usize {
        match self {
            LoadedGeometry::Mesh(m) => m.vertex_count(),
            LoadedGeometry::Cloud(c) => c.len(),
        }
    }

    pub fn as_mesh(&self) -> Option<&TriangleMesh> {
        match self {
            LoadedGeometry::Mesh(m) => Some(m),
            LoadedGeometry::Cloud(_) => None,
        }
    }

    /// Point view of the geometry (mesh vertices with their normals).
    pub fn to_point_cloud(&self) -> PointCloud {
        match self {
            LoadedGeometry::Mesh(m) => m.to_point_cloud(),
            LoadedGeometry::Cloud(c) => c.clone(),
        }
    }

    pub fn scale_uniform(&mut self, factor: f64) {
        match self {
            LoadedGeometry::Mesh(m) => m.scale_uniform(factor),
            LoadedGeometry::Cloud(c) => c.scale_uniform(factor),
        }
    }
}

/// Result of a load: the geometry, the per-vertex scalar channel when the
/// file carried one, and non-fatal diagnostics.
#[derive(Debug, Clone)]
pub struct LoadOutcome {
    pub geometry: LoadedGeometry,
    /// Per-vertex "quality" values if the file stored them.
    pub quality: Option<Vec<f64>>,
    pub warnings: Vec<String>,
}

/// Decodes `bytes` according to the declared format.
pub fn load_mesh(bytes: &[u8], format: MeshFormat) -> Result<LoadOutcome, ParseError> {
    match format {
        MeshFormat::PlyAscii => ply::load(bytes, false),
        MeshFormat::PlyBinaryLe => ply::load(bytes, true),
        MeshFormat::Obj => obj::load(bytes),
    }
}

/// Picks the format from a file extension, sniffing the PLY header for the
/// ascii/binary variant.
pub fn detect_format(bytes: &[u8], extension: &str) -> Result<MeshFormat, ParseError> {
    match extension.to_ascii_lowercase().as_str() {
        "obj" => Ok(MeshFormat::Obj),
        "ply" => {
            if ply::header_is_binary(bytes)? {
                Ok(MeshFormat::PlyBinaryLe)
            } else {
                Ok(MeshFormat::PlyAscii)
            }
        }
        other => Err(ParseError::UnsupportedFormat(format!(
            "unknown mesh extension {other:?} (expected ply or obj)"
        ))),
    }
}

/// Output settings for mesh/cloud writers.
#[derive(Debug, Clone)]
pub struct WriteOptions {
    pub format: MeshFormat,
    /// Extra comment lines embedded in the file header.
    pub comments: Vec<String>,
}

impl WriteOptions {
    pub fn new(format: MeshFormat) -> Self {
        Self {
            format,
            comments: Vec::new(),
        }
    }
}

/// Encodes a mesh, optionally with a per-vertex scalar stored as a float
/// property named "quality" (PLY formats only).
pub fn write_mesh(
    mesh: &TriangleMesh,
    quality: Option<&[f64]>,
    opts: &WriteOptions,
) -> Result<Vec<u8>, ParseError> {
    check_quality_len(quality, mesh.vertex_count())?;
    match opts.format {
        MeshFormat::PlyAscii => ply::write_mesh(mesh, quality, false, &opts.comments),
        MeshFormat::PlyBinaryLe => ply::write_mesh(mesh, quality, true, &opts.comments),
        MeshFormat::Obj => {
            if quality.is_some() {
                return Err(ParseError::UnsupportedFormat(
                    "obj cannot store a per-vertex scalar channel".into(),
                ));
            }
            obj::write_mesh(mesh, &opts.comments)
        }
    }
}

/// Encodes a point cloud (vertex-only file).
pub fn write_cloud(
    cloud: &PointCloud,
    quality: Option<&[f64]>,
    opts: &WriteOptions,
) -> Result<Vec<u8>, ParseError> {
    check_quality_len(quality, cloud.len())?;
    match opts.format {
        MeshFormat::PlyAscii => ply::write_cloud(cloud, quality, false, &opts.comments),
        MeshFormat::PlyBinaryLe => ply::write_cloud(cloud, quality, true, &opts.comments),
        MeshFormat::Obj => {
            if quality.is_some() {
                return Err(ParseError::UnsupportedFormat(
                    "obj cannot store a per-vertex scalar channel".into(),
                ));
            }
            obj::write_cloud(cloud, &opts.comments)
        }
    }
}

fn check_quality_len(quality: Option<&[f64]>, n: usize) -> Result<(), ParseError> {
    if let Some(q) = quality {
        if q.len() != n {
            return Err(ParseError::Contract(format!(
                "scalar channel length {} differs from vertex count {}",
                q.len(),
                n
            )));
        }
    }
    Ok(())
}
