//! PLY codec: ASCII and binary little-endian, vertex/face elements.
//!
//! Recognized vertex properties: x y z, nx ny nz, red green blue, quality.
//! Everything else is skipped with a warning. Values declared `float` are
//! parsed at f32 precision so write/load round trips are exact.

use super::{LoadOutcome, LoadedGeometry};
use crate::error::ParseError;
use crate::mesh::{PointCloud, TriangleMesh};
use byteorder::{ByteOrder, LittleEndian};
use nalgebra::{Point3, Vector3};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scalar {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl Scalar {
    fn parse(word: &str) -> Option<Scalar> {
        Some(match word {
            "char" | "int8" => Scalar::I8,
            "uchar" | "uint8" => Scalar::U8,
            "short" | "int16" => Scalar::I16,
            "ushort" | "uint16" => Scalar::U16,
            "int" | "int32" => Scalar::I32,
            "uint" | "uint32" => Scalar::U32,
            "float" | "float32" => Scalar::F32,
            "double" | "float64" => Scalar::F64,
            _ => None,
        })
    }

    fn size(&self) -> usize {
        match self {
            Scalar::I8 | Scalar::U8 => 1,
            Scalar::I16 | Scalar::U16 => 2,
            Scalar::I32 | Scalar::U32 | Scalar::F32 => 4,
            Scalar::F64 => 8,
        }
    }
}

#[derive(Debug, Clone)]
enum Property {
    Scalar { name: String, kind: Scalar },
    List { name: String, count: Scalar, item: Scalar },
}

#[derive(Debug, Clone)]
struct Element {
    name: String,
    count: usize,
    properties: Vec<Property>,
}

struct Header {
    binary: bool,
    elements: Vec<Element>,
    /// Byte offset of the first body byte.
    body_start: usize,
    /// Number of header lines (for ASCII line diagnostics).
    header_lines: usize,
}

/// Reads just enough of the header to know the declared storage format.
pub(super) fn header_is_binary(bytes: &[u8]) -> Result<bool, ParseError> {
    Ok(parse_header(bytes)?.binary)
}

fn parse_header(bytes: &[u8]) -> Result<Header, ParseError> {
    let mut offset = 0usize;
    let mut line_no = 0usize;
    let mut binary: Option<bool> = None;
    let mut elements: Vec<Element> = Vec::new();
    let mut saw_magic = false;

    loop {
        let rest = &bytes[offset.min(bytes.len())..];
        if rest.is_empty() {
            return Err(ParseError::MalformedHeader {
                line: line_no,
                message: "header ended before end_header".into(),
            });
        }
        let eol = rest.iter().position(|&b| b == b'\n').unwrap_or(rest.len());
        let raw = &rest[..eol];
        offset += eol + 1;
        line_no += 1;

        let line = std::str::from_utf8(raw)
            .map_err(|_| ParseError::MalformedHeader {
                line: line_no,
                message: "header line is not valid UTF-8".into(),
            })?
            .trim_end_matches('\r')
            .trim();
        let mut words = line.split_whitespace();
        let keyword = match words.next() {
            Some(w) => w,
            None => continue,
        };

        if !saw_magic {
            if keyword != "ply" {
                return Err(ParseError::MalformedHeader {
                    line: line_no,
                    message: "file does not start with 'ply'".into(),
                });
            }
            saw_magic = true;
            continue;
        }

        match keyword {
            "comment" | "obj_info" => {}
            "format" => {
                let kind = words.next().unwrap_or("");
                binary = Some(match kind {
                    "ascii" => false,
                    "binary_little_endian" => true,
                    "binary_big_endian" => {
                        return Err(ParseError::UnsupportedFormat(
                            "ply binary_big_endian is not supported".into(),
                        ))
                    }
                    other => {
                        return Err(ParseError::MalformedHeader {
                            line: line_no,
                            message: format!("unknown format {other:?}"),
                        })
                    }
                });
            }
            "element" => {
                let name = words.next().unwrap_or("").to_string();
                let count: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| ParseError::MalformedHeader {
                        line: line_no,
                        message: format!("element {name:?} is missing a valid count"),
                    })?;
                if name.is_empty() {
                    return Err(ParseError::MalformedHeader {
                        line: line_no,
                        message: "element without a name".into(),
                    });
                }
                elements.push(Element {
                    name,
                    count,
                    properties: Vec::new(),
                });
            }
            "property" => {
                let element = elements.last_mut().ok_or(ParseError::MalformedHeader {
                    line: line_no,
                    message: "property before any element".into(),
                })?;
                let first = words.next().unwrap_or("");
                if first == "list" {
                    let count = Scalar::parse(words.next().unwrap_or("")).ok_or_else(|| {
                        ParseError::MalformedHeader {
                            line: line_no,
                            message: "bad list count type".into(),
                        }
                    })?;
                    let item = Scalar::parse(words.next().unwrap_or("")).ok_or_else(|| {
                        ParseError::MalformedHeader {
                            line: line_no,
                            message: "bad list item type".into(),
                        }
                    })?;
                    let name = words.next().unwrap_or("").to_string();
                    element.properties.push(Property::List { name, count, item });
                } else {
                    let kind = Scalar::parse(first).ok_or_else(|| ParseError::MalformedHeader {
                        line: line_no,
                        message: format!("unknown property type {first:?}"),
                    })?;
                    let name = words.next().unwrap_or("").to_string();
                    element.properties.push(Property::Scalar { name, kind });
                }
            }
            "end_header" => {
                let binary = binary.ok_or(ParseError::MalformedHeader {
                    line: line_no,
                    message: "missing format line".into(),
                })?;
                return Ok(Header {
                    binary,
                    elements,
                    body_start: offset,
                    header_lines: line_no,
                });
            }
            other => {
                return Err(ParseError::MalformedHeader {
                    line: line_no,
                    message: format!("unknown header keyword {other:?}"),
                });
            }
        }
    }
}

/// Value source abstracting ASCII tokens vs. little-endian bytes.
enum Body<'a> {
    Ascii {
        tokens: std::str::SplitWhitespace<'a>,
        consumed: usize,
        line_base: usize,
    },
    Binary {
        bytes: &'a [u8],
        cursor: usize,
        base: usize,
    },
}

impl<'a> Body<'a> {
    fn location(&self) -> String {
        match self {
            Body::Ascii { consumed, line_base, .. } => {
                format!("token {} after header line {}", consumed, line_base)
            }
            Body::Binary { cursor, base, .. } => format!("byte offset {}", base + cursor),
        }
    }

    fn offset(&self) -> usize {
        match self {
            Body::Ascii { consumed, .. } => *consumed,
            Body::Binary { cursor, base, .. } => base + cursor,
        }
    }

    fn read(&mut self, kind: Scalar, expected: usize, found: usize) -> Result<f64, ParseError> {
        match self {
            Body::Ascii { tokens, consumed, .. } => {
                let token = tokens.next().ok_or(ParseError::TruncatedBody {
                    what: "rows",
                    expected,
                    found,
                    offset: *consumed,
                })?;
                *consumed += 1;
                parse_ascii_value(token, kind).ok_or_else(|| ParseError::MalformedBody {
                    location: format!("token {}", *consumed),
                    message: format!("cannot parse {token:?} as {kind:?}"),
                })
            }
            Body::Binary { bytes, cursor, base } => {
                let size = kind.size();
                if *cursor + size > bytes.len() {
                    return Err(ParseError::TruncatedBody {
                        what: "rows",
                        expected,
                        found,
                        offset: *base + *cursor,
                    });
                }
                let raw = &bytes[*cursor..*cursor + size];
                *cursor += size;
                Ok(decode_le(raw, kind))
            }
        }
    }
}

fn parse_ascii_value(token: &str, kind: Scalar) -> Option<f64> {
    match kind {
        Scalar::F32 => token.parse::<f32>().ok().map(f64::from),
        Scalar::F64 => token.parse::<f64>().ok(),
        _ => token.parse::<i64>().ok().map(|v| v as f64),
    }
}

fn decode_le(raw: &[u8], kind: Scalar) -> f64 {
    match kind {
        Scalar::I8 => raw[0] as i8 as f64,
        Scalar::U8 => raw[0] as f64,
        Scalar::I16 => LittleEndian::read_i16(raw) as f64,
        Scalar::U16 => LittleEndian::read_u16(raw) as f64,
        Scalar::I32 => LittleEndian::read_i32(raw) as f64,
        Scalar::U32 => LittleEndian::read_u32(raw) as f64,
        Scalar::F32 => LittleEndian::read_f32(raw) as f64,
        Scalar::F64 => LittleEndian::read_f64(raw),
    }
}

pub(super) fn load(bytes: &[u8], expect_binary: bool) -> Result<LoadOutcome, ParseError> {
    let header = parse_header(bytes)?;
    if header.binary != expect_binary {
        return Err(ParseError::MalformedHeader {
            line: 2,
            message: format!(
                "file declares {} storage but {} was requested",
                if header.binary { "binary_little_endian" } else { "ascii" },
                if expect_binary { "ply-binary-le" } else { "ply-ascii" },
            ),
        });
    }

    let body_bytes = &bytes[header.body_start.min(bytes.len())..];
    let body_text;
    let mut body = if header.binary {
        Body::Binary {
            bytes: body_bytes,
            cursor: 0,
            base: header.body_start,
        }
    } else {
        body_text = std::str::from_utf8(body_bytes).map_err(|_| ParseError::MalformedBody {
            location: format!("after header line {}", header.header_lines),
            message: "ascii body is not valid UTF-8".into(),
        })?;
        Body::Ascii {
            tokens: body_text.split_whitespace(),
            consumed: 0,
            line_base: header.header_lines,
        }
    };

    let mut warnings = Vec::new();
    let mut vertices: Vec<Point3<f64>> = Vec::new();
    let mut normals: Vec<Vector3<f64>> = Vec::new();
    let mut colors: Vec<[u8; 3]> = Vec::new();
    let mut quality: Vec<f64> = Vec::new();
    let mut faces: Vec<[u32; 3]> = Vec::new();
    let mut have_normals = false;
    let mut have_colors = false;
    let mut have_quality = false;

    for element in &header.elements {
        match element.name.as_str() {
            "vertex" => {
                let slots = vertex_slots(element, &mut warnings)?;
                have_normals = slots.nx.is_some() && slots.ny.is_some() && slots.nz.is_some();
                have_colors = slots.red.is_some() && slots.green.is_some() && slots.blue.is_some();
                have_quality = slots.quality.is_some();
                let mut row = vec![0f64; element.properties.len()];
                for r in 0..element.count {
                    read_row(&mut body, element, &mut row, element.count, r)?;
                    let v = Point3::new(row[slots.x], row[slots.y], row[slots.z]);
                    vertices.push(v);
                    if have_normals {
                        let n = Vector3::new(
                            row[slots.nx.unwrap()],
                            row[slots.ny.unwrap()],
                            row[slots.nz.unwrap()],
                        );
                        let len = n.norm();
                        normals.push(if len > 1e-12 { n / len } else { Vector3::zeros() });
                    }
                    if have_colors {
                        colors.push([
                            row[slots.red.unwrap()] as u8,
                            row[slots.green.unwrap()] as u8,
                            row[slots.blue.unwrap()] as u8,
                        ]);
                    }
                    if have_quality {
                        quality.push(row[slots.quality.unwrap()]);
                    }
                }
            }
            "face" => {
                for r in 0..element.count {
                    read_face_row(&mut body, element, element.count, r, vertices.len(), &mut faces, &mut warnings)?;
                }
            }
            other => {
                if element.count > 0 {
                    warnings.push(format!("ignoring unknown element {other:?}"));
                }
                let mut row = vec![0f64; element.properties.len()];
                for r in 0..element.count {
                    read_row(&mut body, element, &mut row, element.count, r)?;
                }
            }
        }
    }

    let geometry = if faces.is_empty() {
        let mut cloud = PointCloud::new(vertices);
        if cloud.points.iter().zip(&cloud.valid).any(|(_, v)| !v) {
            warnings.push("non-finite vertex coordinates flagged invalid".into());
        }
        if have_normals {
            cloud.normals = Some(normals);
        }
        LoadedGeometry::Cloud(cloud)
    } else {
        let mut mesh = TriangleMesh::new(vertices, faces);
        if have_normals {
            mesh.vertex_normals = Some(normals);
        }
        if have_colors {
            mesh.vertex_colors = Some(colors);
        }
        LoadedGeometry::Mesh(mesh)
    };

    Ok(LoadOutcome {
        geometry,
        quality: if have_quality { Some(quality) } else { None },
        warnings,
    })
}

struct VertexSlots {
    x: usize,
    y: usize,
    z: usize,
    nx: Option<usize>,
    ny: Option<usize>,
    nz: Option<usize>,
    red: Option<usize>,
    green: Option<usize>,
    blue: Option<usize>,
    quality: Option<usize>,
}

fn vertex_slots(element: &Element, warnings: &mut Vec<String>) -> Result<VertexSlots, ParseError> {
    let mut slots = VertexSlots {
        x: usize::MAX,
        y: usize::MAX,
        z: usize::MAX,
        nx: None,
        ny: None,
        nz: None,
        red: None,
        green: None,
        blue: None,
        quality: None,
    };
    for (i, prop) in element.properties.iter().enumerate() {
        match prop {
            Property::Scalar { name, .. } => match name.as_str() {
                "x" => slots.x = i,
                "y" => slots.y = i,
                "z" => slots.z = i,
                "nx" => slots.nx = Some(i),
                "ny" => slots.ny = Some(i),
                "nz" => slots.nz = Some(i),
                "red" => slots.red = Some(i),
                "green" => slots.green = Some(i),
                "blue" => slots.blue = Some(i),
                "quality" => slots.quality = Some(i),
                other => warnings.push(format!("ignoring unknown vertex property {other:?}")),
            },
            Property::List { name, .. } => {
                warnings.push(format!("ignoring list property {name:?} on vertex element"))
            }
        }
    }
    if slots.x == usize::MAX || slots.y == usize::MAX || slots.z == usize::MAX {
        return Err(ParseError::MalformedHeader {
            line: 0,
            message: "vertex element lacks x/y/z properties".into(),
        });
    }
    Ok(slots)
}

/// Reads one row of scalars/lists; list contents beyond the declared slots
/// are consumed and dropped.
fn read_row(
    body: &mut Body,
    element: &Element,
    row: &mut [f64],
    expected: usize,
    found: usize,
) -> Result<(), ParseError> {
    for (i, prop) in element.properties.iter().enumerate() {
        match prop {
            Property::Scalar { kind, .. } => {
                row[i] = body.read(*kind, expected, found)?;
            }
            Property::List { count, item, .. } => {
                let n = body.read(*count, expected, found)?;
                let n = list_len(n, body)?;
                for _ in 0..n {
                    body.read(*item, expected, found)?;
                }
                row[i] = n as f64;
            }
        }
    }
    Ok(())
}

fn list_len(raw: f64, body: &Body) -> Result<usize, ParseError> {
    if !(0.0..=1e9).contains(&raw) || raw.fract() != 0.0 {
        return Err(ParseError::MalformedBody {
            location: body.location(),
            message: format!("invalid list length {raw}"),
        });
    }
    Ok(raw as usize)
}

fn read_face_row(
    body: &mut Body,
    element: &Element,
    expected: usize,
    found: usize,
    vertex_count: usize,
    faces: &mut Vec<[u32; 3]>,
    warnings: &mut Vec<String>,
) -> Result<(), ParseError> {
    for prop in &element.properties {
        match prop {
            Property::List { name, count, item } if name == "vertex_indices" || name == "vertex_index" => {
                let n = body.read(*count, expected, found)?;
                let n = list_len(n, body)?;
                let mut poly = Vec::with_capacity(n);
                for _ in 0..n {
                    let raw = body.read(*item, expected, found)?;
                    let idx = raw as i64;
                    if idx < 0 || idx as usize >= vertex_count {
                        return Err(ParseError::FaceIndexOutOfRange {
                            index: idx,
                            vertex_count,
                            location: body.location(),
                        });
                    }
                    poly.push(idx as u32);
                }
                if n < 3 {
                    warnings.push(format!("skipping face row {found} with {n} indices"));
                    continue;
                }
                // fan-triangulate polygons
                for k in 1..n - 1 {
                    let tri = [poly[0], poly[k], poly[k + 1]];
                    if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                        warnings.push(format!("skipping degenerate face row {found}"));
                    } else {
                        faces.push(tri);
                    }
                }
            }
            Property::List { count, item, .. } => {
                let n = body.read(*count, expected, found)?;
                let n = list_len(n, body)?;
                for _ in 0..n {
                    body.read(*item, expected, found)?;
                }
            }
            Property::Scalar { kind, .. } => {
                body.read(*kind, expected, found)?;
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// writing

fn push_header(
    out: &mut String,
    binary: bool,
    comments: &[String],
    vertex_count: usize,
    with_normals: bool,
    with_colors: bool,
    with_quality: bool,
    face_count: Option<usize>,
) {
    out.push_str("ply\n");
    out.push_str(if binary {
        "format binary_little_endian 1.0\n"
    } else {
        "format ascii 1.0\n"
    });
    for c in comments {
        // comments must stay single-line
        let clean = c.replace(['\n', '\r'], " ");
        let _ = writeln!(out, "comment {clean}");
    }
    let _ = writeln!(out, "element vertex {vertex_count}");
    out.push_str("property float x\nproperty float y\nproperty float z\n");
    if with_normals {
        out.push_str("property float nx\nproperty float ny\nproperty float nz\n");
    }
    if with_colors {
        out.push_str("property uchar red\nproperty uchar green\nproperty uchar blue\n");
    }
    if with_quality {
        out.push_str("property float quality\n");
    }
    if let Some(fc) = face_count {
        let _ = writeln!(out, "element face {fc}");
        out.push_str("property list uchar int vertex_indices\n");
    }
    out.push_str("end_header\n");
}

struct VertexRow {
    position: Point3<f64>,
    normal: Option<Vector3<f64>>,
    color: Option<[u8; 3]>,
    quality: Option<f64>,
}

fn write_body(
    header: String,
    binary: bool,
    rows: impl Iterator<Item = VertexRow>,
    faces: &[[u32; 3]],
) -> Vec<u8> {
    let mut out = header.into_bytes();
    if binary {
        for row in rows {
            push_f32(&mut out, row.position.x);
            push_f32(&mut out, row.position.y);
            push_f32(&mut out, row.position.z);
            if let Some(n) = row.normal {
                push_f32(&mut out, n.x);
                push_f32(&mut out, n.y);
                push_f32(&mut out, n.z);
            }
            if let Some(c) = row.color {
                out.extend_from_slice(&c);
            }
            if let Some(q) = row.quality {
                push_f32(&mut out, q);
            }
        }
        for f in faces {
            out.push(3u8);
            for &i in f {
                out.extend_from_slice(&(i as i32).to_le_bytes());
            }
        }
    } else {
        let mut text = String::new();
        for row in rows {
            let _ = write!(
                &mut text,
                "{} {} {}",
                row.position.x as f32, row.position.y as f32, row.position.z as f32
            );
            if let Some(n) = row.normal {
                let _ = write!(&mut text, " {} {} {}", n.x as f32, n.y as f32, n.z as f32);
            }
            if let Some(c) = row.color {
                let _ = write!(&mut text, " {} {} {}", c[0], c[1], c[2]);
            }
            if let Some(q) = row.quality {
                let _ = write!(&mut text, " {}", q as f32);
            }
            text.push('\n');
        }
        for f in faces {
            let _ = writeln!(&mut text, "3 {} {} {}", f[0], f[1], f[2]);
        }
        out.extend_from_slice(text.as_bytes());
    }
    out
}

fn push_f32(out: &mut Vec<u8>, v: f64) {
    out.extend_from_slice(&(v as f32).to_le_bytes());
}

pub(super) fn write_mesh(
    mesh: &TriangleMesh,
    quality: Option<&[f64]>,
    binary: bool,
    comments: &[String],
) -> Result<Vec<u8>, ParseError> {
    let mut header = String::new();
    push_header(
        &mut header,
        binary,
        comments,
        mesh.vertex_count(),
        mesh.vertex_normals.is_some(),
        mesh.vertex_colors.is_some(),
        quality.is_some(),
        Some(mesh.face_count()),
    );
    let rows = (0..mesh.vertex_count()).map(|i| VertexRow {
        position: mesh.vertices[i],
        normal: mesh.vertex_normals.as_ref().map(|n| n[i]),
        color: mesh.vertex_colors.as_ref().map(|c| c[i]),
        quality: quality.map(|q| q[i]),
    });
    Ok(write_body(header, binary, rows, &mesh.faces))
}

pub(super) fn write_cloud(
    cloud: &PointCloud,
    quality: Option<&[f64]>,
    binary: bool,
    comments: &[String],
) -> Result<Vec<u8>, ParseError> {
    let mut header = String::new();
    push_header(
        &mut header,
        binary,
        comments,
        cloud.len(),
        cloud.normals.is_some(),
        false,
        quality.is_some(),
        None,
    );
    let rows = (0..cloud.len()).map(|i| VertexRow {
        position: cloud.points[i],
        normal: cloud.normals.as_ref().map(|n| n[i]),
        color: None,
        quality: quality.map(|q| q[i]),
    });
    Ok(write_body(header, binary, rows, &[]))
}
