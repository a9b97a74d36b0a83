//! Boundary triangle detection via undirected edge counting.

use super::TriangleMesh;
use std::collections::HashMap;

/// Returns the sorted indices of all faces having at least one edge used by
/// exactly one face. On a watertight mesh the result is empty.
pub fn detect_boundary_triangles(mesh: &TriangleMesh) -> Vec<u32> {
    let mut edge_use: HashMap<(u32, u32), u32> = HashMap::with_capacity(mesh.faces.len() * 3);
    for face in &mesh.faces {
        for (a, b) in face_edges(face) {
            *edge_use.entry(ordered(a, b)).or_insert(0) += 1;
        }
    }
    let mut out = Vec::new();
    for (fi, face) in mesh.faces.iter().enumerate() {
        let single = face_edges(face)
            .into_iter()
            .any(|(a, b)| edge_use[&ordered(a, b)] == 1);
        if single {
            out.push(fi as u32);
        }
    }
    out
}

/// Boolean mask over faces, `true` for boundary triangles.
pub fn boundary_mask(mesh: &TriangleMesh) -> Vec<bool> {
    let mut mask = vec![false; mesh.faces.len()];
    for fi in detect_boundary_triangles(mesh) {
        mask[fi as usize] = true;
    }
    mask
}

fn face_edges(face: &[u32; 3]) -> [(u32, u32); 3] {
    [
        (face[0], face[1]),
        (face[1], face[2]),
        (face[2], face[0]),
    ]
}

fn ordered(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Point3;

    fn tetrahedron() -> TriangleMesh {
        TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
                Point3::new(0.0, 0.0, 1.0),
            ],
            vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]],
        )
    }

    #[test]
    fn closed_tetrahedron_has_no_boundary() {
        assert!(detect_boundary_triangles(&tetrahedron()).is_empty());
    }

    #[test]
    fn single_triangle_is_boundary() {
        let mesh = TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2]],
        );
        assert_eq!(detect_boundary_triangles(&mesh), vec![0]);
    }

    #[test]
    fn planar_grid_matches_edge_count_enumeration() {
        // 3x3 vertex grid split into 8 triangles
        let mut vertices = Vec::new();
        for y in 0..3 {
            for x in 0..3 {
                vertices.push(Point3::new(x as f64, y as f64, 0.0));
            }
        }
        let mut faces = Vec::new();
        for y in 0..2u32 {
            for x in 0..2u32 {
                let i = y * 3 + x;
                faces.push([i, i + 1, i + 4]);
                faces.push([i, i + 4, i + 3]);
            }
        }
        let mesh = TriangleMesh::new(vertices, faces);

        // brute force: enumerate every undirected edge and count incidence
        let mut counts: HashMap<(u32, u32), u32> = HashMap::new();
        for f in &mesh.faces {
            for (a, b) in super::face_edges(f) {
                *counts.entry(super::ordered(a, b)).or_insert(0) += 1;
            }
        }
        let expected: Vec<u32> = mesh
            .faces
            .iter()
            .enumerate()
            .filter(|(_, f)| {
                super::face_edges(f)
                    .into_iter()
                    .any(|(a, b)| counts[&super::ordered(a, b)] == 1)
            })
            .map(|(i, _)| i as u32)
            .collect();

        assert_eq!(detect_boundary_triangles(&mesh), expected);
        // the interior diagonal edges make every face of this grid a boundary face
        assert_eq!(expected.len(), 8);
    }
}
