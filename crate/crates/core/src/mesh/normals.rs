//! Area-weighted vertex normal computation.

use super::TriangleMesh;
use nalgebra::Vector3;

/// Computes per-vertex normals as the normalized, area-weighted sum of
/// incident face normals. Zero-area faces contribute nothing; vertices with
/// no incident area get a zero vector.
pub fn compute_vertex_normals(mesh: &TriangleMesh) -> Vec<Vector3<f64>> {
    let mut acc = vec![Vector3::zeros(); mesh.vertices.len()];
    for face in &mesh.faces {
        let a = mesh.vertices[face[0] as usize];
        let b = mesh.vertices[face[1] as usize];
        let c = mesh.vertices[face[2] as usize];
        // cross product length is twice the face area, so summing it
        // directly gives the area weighting
        let area_vec = (b - a).cross(&(c - a));
        for &vi in face {
            acc[vi as usize] += area_vec;
        }
    }
    for n in &mut acc {
        let len = n.norm();
        if len > 1e-12 {
            *n /= len;
        } else {
            *n = Vector3::zeros();
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Point3;

    #[test]
    fn unit_square_normals_follow_winding() {
        // two coplanar triangles forming the unit square in z=0
        let mesh = TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(1.0, 1.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2], [0, 2, 3]],
        );
        let normals = compute_vertex_normals(&mesh);
        for n in &normals {
            assert!((n - Vector3::new(0.0, 0.0, 1.0)).norm() < 1e-12);
        }

        // flipped winding flips the normals
        let mesh_flipped = TriangleMesh::new(mesh.vertices.clone(), vec![[0, 2, 1], [0, 3, 2]]);
        for n in compute_vertex_normals(&mesh_flipped) {
            assert!((n - Vector3::new(0.0, 0.0, -1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn degenerate_face_contributes_nothing() {
        let mesh = TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
                Point3::new(2.0, 0.0, 0.0),
                Point3::new(3.0, 0.0, 0.0),
                Point3::new(4.0, 0.0, 0.0),
            ],
            // second face is collinear (zero area)
            vec![[0, 1, 2], [3, 4, 5]],
        );
        let normals = compute_vertex_normals(&mesh);
        assert!((normals[0] - Vector3::new(0.0, 0.0, 1.0)).norm() < 1e-12);
        for i in 3..6 {
            assert_eq!(normals[i], Vector3::zeros());
        }
    }

    #[test]
    fn isolated_vertex_gets_zero_normal() {
        let mesh = TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
                Point3::new(5.0, 5.0, 5.0),
            ],
            vec![[0, 1, 2]],
        );
        let normals = compute_vertex_normals(&mesh);
        assert_eq!(normals[3], Vector3::zeros());
    }
}
