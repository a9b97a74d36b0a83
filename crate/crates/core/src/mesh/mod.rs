//! Mesh and point-cloud data model with geometric queries.

mod boundary;
mod bvh;
mod normals;
mod roi;
mod tri;

pub use boundary::detect_boundary_triangles;
pub use bvh::BvhTree;
pub use normals::compute_vertex_normals;
pub use roi::roi_sphere_center;
pub use tri::{closest_point_on_triangle, ClosestHit};

use nalgebra::{Point3, Vector3};

/// Indexed triangle surface. Coordinates in millimeters.
#[derive(Debug, Clone, Default)]
pub struct TriangleMesh {
    pub vertices: Vec<Point3<f64>>,
    pub faces: Vec<[u32; 3]>,
    /// Unit normals, or zero vectors for vertices where none is defined.
    pub vertex_normals: Option<Vec<Vector3<f64>>>,
    pub vertex_colors: Option<Vec<[u8; 3]>>,
}

impl TriangleMesh {
    pub fn new(vertices: Vec<Point3<f64>>, faces: Vec<[u32; 3]>) -> Self {
        Self {
            vertices,
            faces,
            vertex_normals: None,
            vertex_colors: None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn face_vertices(&self, face: usize) -> [Point3<f64>; 3] {
        let [a, b, c] = self.faces[face];
        [
            self.vertices[a as usize],
            self.vertices[b as usize],
            self.vertices[c as usize],
        ]
    }

    /// Doubled face area vector (cross product of two edges).
    pub fn face_area_vector(&self, face: usize) -> Vector3<f64> {
        let [a, b, c] = self.face_vertices(face);
        (b - a).cross(&(c - a))
    }

    pub fn face_area(&self, face: usize) -> f64 {
        0.5 * self.face_area_vector(face).norm()
    }

    /// Computes and stores area-weighted vertex normals.
    pub fn ensure_vertex_normals(&mut self) {
        if self.vertex_normals.is_none() {
            self.vertex_normals = Some(compute_vertex_normals(self));
        }
    }

    /// Uniformly scales all vertex positions (e.g. meters to millimeters).
    pub fn scale_uniform(&mut self, factor: f64) {
        for v in &mut self.vertices {
            *v *= factor;
        }
    }

    /// Vertices, normals and validity flags as a point cloud.
    pub fn to_point_cloud(&self) -> PointCloud {
        PointCloud {
            points: self.vertices.clone(),
            normals: self.vertex_normals.clone(),
            valid: vec![true; self.vertices.len()],
        }
    }

    /// Checks index bounds, distinctness of face indices and normal lengths.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.vertices.len();
        for (fi, f) in self.faces.iter().enumerate() {
            if f.iter().any(|&i| i as usize >= n) {
                return Err(format!("face {fi} references vertex out of range"));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(format!("face {fi} has repeated vertex indices"));
            }
        }
        if let Some(normals) = &self.vertex_normals {
            if normals.len() != n {
                return Err("vertex normal count differs from vertex count".into());
            }
            for (i, nv) in normals.iter().enumerate() {
                let len = nv.norm();
                if len > 1e-12 && (len - 1.0).abs() > 1e-6 {
                    return Err(format!("vertex normal {i} is neither unit nor zero"));
                }
            }
        }
        Ok(())
    }
}

/// Oriented point set. Coordinates in millimeters.
#[derive(Debug, Clone, Default)]
pub struct PointCloud {
    pub points: Vec<Point3<f64>>,
    /// Unit normals, or zero vectors where no normal is known.
    pub normals: Option<Vec<Vector3<f64>>>,
    /// Per-point validity; loaders flag non-finite coordinates here.
    pub valid: Vec<bool>,
}

impl PointCloud {
    pub fn new(points: Vec<Point3<f64>>) -> Self {
        let valid = points.iter().map(|p| p.coords.iter().all(|c| c.is_finite())).collect();
        Self {
            points,
            normals: None,
            valid,
        }
    }

    pub fn with_normals(points: Vec<Point3<f64>>, normals: Vec<Vector3<f64>>) -> Self {
        let mut cloud = Self::new(points);
        assert_eq!(cloud.points.len(), normals.len());
        cloud.normals = Some(normals);
        cloud
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn normal(&self, i: usize) -> Option<Vector3<f64>> {
        self.normals
            .as_ref()
            .map(|n| n[i])
            .filter(|n| n.norm() > 1e-12)
    }

    pub fn scale_uniform(&mut self, factor: f64) {
        for p in &mut self.points {
            *p *= factor;
        }
    }

    /// Drops invalid points; keeps normals aligned.
    pub fn compact(&self) -> PointCloud {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.valid[i]).collect();
        PointCloud {
            points: keep.iter().map(|&i| self.points[i]).collect(),
            normals: self
                .normals
                .as_ref()
                .map(|n| keep.iter().map(|&i| n[i]).collect()),
            valid: vec![true; keep.len()],
        }
    }

    /// Applies a rigid transform to points and normals.
    pub fn transformed(&self, t: &crate::transform::RigidTransform) -> PointCloud {
        PointCloud {
            points: self.points.iter().map(|p| t.apply_point(p)).collect(),
            normals: self
                .normals
                .as_ref()
                .map(|ns| ns.iter().map(|n| t.apply_vector(n)).collect()),
            valid: self.valid.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cloud_flags_non_finite_points_invalid() {
        let cloud = PointCloud::new(vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(f64::NAN, 0.0, 0.0),
            Point3::new(1.0, 2.0, 3.0),
        ]);
        assert_eq!(cloud.valid, vec![true, false, true]);
        let compact = cloud.compact();
        assert_eq!(compact.len(), 2);
        assert_eq!(compact.points[1], Point3::new(1.0, 2.0, 3.0));
    }

    #[test]
    fn validate_rejects_out_of_range_face() {
        let mesh = TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 3]],
        );
        assert!(mesh.validate().is_err());
    }
}
