//! OBJ subset codec: v / vn / f records, other record types skipped.

use super::{LoadOutcome, LoadedGeometry};
use crate::error::ParseError;
use crate::mesh::{PointCloud, TriangleMesh};
use nalgebra::{Point3, Vector3};
use std::collections::BTreeSet;
use std::fmt::Write as _;

pub(super) fn load(bytes: &[u8]) -> Result<LoadOutcome, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|_| ParseError::MalformedHeader {
        line: 0,
        message: "obj file is not valid UTF-8".into(),
    })?;

    let mut vertices: Vec<Point3<f64>> = Vec::new();
    let mut file_normals: Vec<Vector3<f64>> = Vec::new();
    // (vertex indices, optional per-corner normal indices)
    let mut faces: Vec<[u32; 3]> = Vec::new();
    let mut corner_normals: Vec<[Option<u32>; 3]> = Vec::new();
    let mut skipped: BTreeSet<String> = BTreeSet::new();
    let mut warnings = Vec::new();

    for (line_idx, raw) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let record = words.next().unwrap();
        match record {
            "v" => {
                let v = parse_three(&mut words, line_no, "v")?;
                vertices.push(Point3::new(v[0], v[1], v[2]));
            }
            "vn" => {
                let v = parse_three(&mut words, line_no, "vn")?;
                let n = Vector3::new(v[0], v[1], v[2]);
                let len = n.norm();
                file_normals.push(if len > 1e-12 { n / len } else { Vector3::zeros() });
            }
            "f" => {
                let mut poly: Vec<(u32, Option<u32>)> = Vec::new();
                for corner in words {
                    poly.push(parse_corner(corner, vertices.len(), file_normals.len(), line_no)?);
                }
                if poly.len() < 3 {
                    return Err(ParseError::MalformedBody {
                        location: format!("line {line_no}"),
                        message: format!("face with {} corners", poly.len()),
                    });
                }
                for k in 1..poly.len() - 1 {
                    let tri = [poly[0], poly[k], poly[k + 1]];
                    if tri[0].0 == tri[1].0 || tri[1].0 == tri[2].0 || tri[0].0 == tri[2].0 {
                        warnings.push(format!("skipping degenerate face at line {line_no}"));
                        continue;
                    }
                    faces.push([tri[0].0, tri[1].0, tri[2].0]);
                    corner_normals.push([tri[0].1, tri[1].1, tri[2].1]);
                }
            }
            other => {
                skipped.insert(other.to_string());
            }
        }
    }

    for record in skipped {
        warnings.push(format!("ignoring unsupported obj record {record:?}"));
    }

    // map per-corner normal references onto vertices (last reference wins);
    // a bare vn list matching the vertex count maps one-to-one
    let normals = if !file_normals.is_empty() {
        let mut per_vertex = vec![Vector3::zeros(); vertices.len()];
        let mut any = false;
        if file_normals.len() == vertices.len() {
            per_vertex.clone_from_slice(&file_normals);
            any = true;
        }
        for (f, cn) in faces.iter().zip(&corner_normals) {
            for (vi, ni) in f.iter().zip(cn) {
                if let Some(ni) = ni {
                    per_vertex[*vi as usize] = file_normals[*ni as usize];
                    any = true;
                }
            }
        }
        if any {
            Some(per_vertex)
        } else {
            warnings.push("vn records present but never referenced; ignored".into());
            None
        }
    } else {
        None
    };

    let geometry = if faces.is_empty() {
        let mut cloud = PointCloud::new(vertices);
        cloud.normals = normals;
        LoadedGeometry::Cloud(cloud)
    } else {
        let mut mesh = TriangleMesh::new(vertices, faces);
        mesh.vertex_normals = normals;
        LoadedGeometry::Mesh(mesh)
    };

    Ok(LoadOutcome {
        geometry,
        quality: None,
        warnings,
    })
}

fn parse_three<'a>(
    words: &mut impl Iterator<Item = &'a str>,
    line_no: usize,
    record: &str,
) -> Result<[f64; 3], ParseError> {
    let mut out = [0f64; 3];
    for slot in &mut out {
        let token = words.next().ok_or_else(|| ParseError::MalformedBody {
            location: format!("line {line_no}"),
            message: format!("{record} record with fewer than 3 coordinates"),
        })?;
        *slot = token.parse().map_err(|_| ParseError::MalformedBody {
            location: format!("line {line_no}"),
            message: format!("cannot parse {token:?} as a number"),
        })?;
    }
    Ok(out)
}

/// Parses `v`, `v/vt`, `v//vn` or `v/vt/vn`; indices are 1-based, negative
/// values count back from the current list end.
fn parse_corner(
    corner: &str,
    vertex_count: usize,
    normal_count: usize,
    line_no: usize,
) -> Result<(u32, Option<u32>), ParseError> {
    let mut parts = corner.split('/');
    let v_tok = parts.next().unwrap_or("");
    let _vt = parts.next();
    let vn_tok = parts.next();

    let v = resolve_index(v_tok, vertex_count, line_no)?;
    let vn = match vn_tok {
        Some(t) if !t.is_empty() => Some(resolve_index(t, normal_count, line_no)?),
        _ => None,
    };
    Ok((v, vn))
}

fn resolve_index(token: &str, count: usize, line_no: usize) -> Result<u32, ParseError> {
    let idx: i64 = token.parse().map_err(|_| ParseError::MalformedBody {
        location: format!("line {line_no}"),
        message: format!("cannot parse index {token:?}"),
    })?;
    let resolved = if idx > 0 {
        idx - 1
    } else if idx < 0 {
        count as i64 + idx
    } else {
        -1
    };
    if resolved < 0 || resolved as usize >= count {
        return Err(ParseError::FaceIndexOutOfRange {
            index: idx,
            vertex_count: count,
            location: format!("line {line_no}"),
        });
    }
    Ok(resolved as u32)
}

pub(super) fn write_mesh(mesh: &TriangleMesh, comments: &[String]) -> Result<Vec<u8>, ParseError> {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(&mut out, "# {}", c.replace(['\n', '\r'], " "));
    }
    for v in &mesh.vertices {
        let _ = writeln!(&mut out, "v {} {} {}", v.x, v.y, v.z);
    }
    if let Some(normals) = &mesh.vertex_normals {
        for n in normals {
            let _ = writeln!(&mut out, "vn {} {} {}", n.x, n.y, n.z);
        }
        for f in &mesh.faces {
            let _ = writeln!(
                &mut out,
                "f {}//{} {}//{} {}//{}",
                f[0] + 1,
                f[0] + 1,
                f[1] + 1,
                f[1] + 1,
                f[2] + 1,
                f[2] + 1
            );
        }
    } else {
        for f in &mesh.faces {
            let _ = writeln!(&mut out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
        }
    }
    Ok(out.into_bytes())
}

pub(super) fn write_cloud(cloud: &PointCloud, comments: &[String]) -> Result<Vec<u8>, ParseError> {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(&mut out, "# {}", c.replace(['\n', '\r'], " "));
    }
    for p in &cloud.points {
        let _ = writeln!(&mut out, "v {} {} {}", p.x, p.y, p.z);
    }
    if let Some(normals) = &cloud.normals {
        for n in normals {
            let _ = writeln!(&mut out, "vn {} {} {}", n.x, n.y, n.z);
        }
    }
    Ok(out.into_bytes())
}
