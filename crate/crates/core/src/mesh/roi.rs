//! Region-of-interest sphere center on the target surface.

use super::TriangleMesh;
use crate::error::GeometryError;
use nalgebra::Point3;

/// Intersects the z-parallel line through the mesh's area-weighted surface
/// centroid with the mesh and returns the intersection with the smallest z
/// (the surface point nearest the camera in the acquisition frame).
pub fn roi_sphere_center(mesh: &TriangleMesh) -> Result<Point3<f64>, GeometryError> {
    if mesh.faces.is_empty() {
        return Err(GeometryError::EmptyMesh);
    }
    let centroid = area_weighted_centroid(mesh)?;
    let (cx, cy) = (centroid.x, centroid.y);

    let mut best_z: Option<f64> = None;
    for fi in 0..mesh.face_count() {
        let [a, b, c] = mesh.face_vertices(fi);
        // 2D barycentric test in the xy-projection; faces edge-on to the
        // line (zero projected area) cannot produce a proper intersection
        let det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        if det.abs() < 1e-18 {
            continue;
        }
        let v = ((cx - a.x) * (c.y - a.y) - (c.x - a.x) * (cy - a.y)) / det;
        let w = ((b.x - a.x) * (cy - a.y) - (cx - a.x) * (b.y - a.y)) / det;
        let u = 1.0 - v - w;
        if u < 0.0 || v < 0.0 || w < 0.0 {
            continue;
        }
        let z = u * a.z + v * b.z + w * c.z;
        if best_z.is_none_or(|bz| z < bz) {
            best_z = Some(z);
        }
    }

    match best_z {
        Some(z) => Ok(Point3::new(cx, cy, z)),
        None => Err(GeometryError::NoRoiIntersection),
    }
}

/// Area-weighted centroid of the mesh surface (not the vertex average).
pub fn area_weighted_centroid(mesh: &TriangleMesh) -> Result<Point3<f64>, GeometryError> {
    let mut acc = nalgebra::Vector3::zeros();
    let mut total_area = 0.0;
    for fi in 0..mesh.face_count() {
        let [a, b, c] = mesh.face_vertices(fi);
        let area = mesh.face_area(fi);
        acc += (a.coords + b.coords + c.coords) / 3.0 * area;
        total_area += area;
    }
    if total_area <= 0.0 {
        return Err(GeometryError::EmptyMesh);
    }
    Ok(Point3::from(acc / total_area))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_square_returns_its_plane_height() {
        let z = 0.9;
        let mesh = TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, z),
                Point3::new(2.0, 0.0, z),
                Point3::new(2.0, 2.0, z),
                Point3::new(0.0, 2.0, z),
            ],
            vec![[0, 1, 2], [0, 2, 3]],
        );
        let c = roi_sphere_center(&mesh).unwrap();
        assert!((c - Point3::new(1.0, 1.0, z)).norm() < 1e-12);
    }

    #[test]
    fn line_missing_all_faces_is_an_error() {
        // vertical strip: xy-projection is a degenerate segment away from
        // its own centroid x, so the z-line misses
        let mesh = TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
                Point3::new(0.0, 0.0, 1.0),
            ],
            vec![[0, 1, 2]],
        );
        assert!(matches!(
            roi_sphere_center(&mesh),
            Err(GeometryError::NoRoiIntersection)
        ));
    }

    #[test]
    fn centroid_is_area_weighted() {
        // one big triangle and one tiny triangle; vertex average would sit
        // midway, area weighting pulls toward the big one
        let mesh = TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(10.0, 0.0, 0.0),
                Point3::new(0.0, 10.0, 0.0),
                Point3::new(100.0, 100.0, 0.0),
                Point3::new(100.1, 100.0, 0.0),
                Point3::new(100.0, 100.1, 0.0),
            ],
            vec![[0, 1, 2], [3, 4, 5]],
        );
        let c = area_weighted_centroid(&mesh).unwrap();
        assert!((c.x - 10.0 / 3.0).abs() < 0.05);
        assert!((c.y - 10.0 / 3.0).abs() < 0.05);
    }
}
