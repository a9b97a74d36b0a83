//! Exact closest point on a triangle.
//!
//! The query projects the point onto the triangle's plane and tests the
//! projection's barycentric coordinates; if it falls outside, the minimum over
//! the three edge segments is exact. Degenerate (zero-area) triangles fall
//! back to their longest edge segment.

use nalgebra::{Point3, Vector3};

/// Result of a closest-point query against one triangle of a mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosestHit {
    pub face_index: u32,
    pub closest_point: Point3<f64>,
    /// Convex weights of `closest_point` w.r.t. the triangle's vertices.
    pub barycentric: [f64; 3],
    /// Euclidean distance from the query to `closest_point`, in mm.
    pub distance: f64,
}

const DEGENERATE_AREA_SQ: f64 = 1e-24;

/// Exact minimizer of distance from `p` over the closed triangle `(a, b, c)`.
pub fn closest_point_on_triangle(
    p: &Point3<f64>,
    a: &Point3<f64>,
    b: &Point3<f64>,
    c: &Point3<f64>,
) -> ClosestHit {
    let ab = b - a;
    let ac = c - a;
    let n = ab.cross(&ac);
    let n_sq = n.norm_squared();

    if n_sq <= DEGENERATE_AREA_SQ {
        return degenerate_triangle_hit(p, a, b, c);
    }

    // orthogonal projection of p onto the supporting plane
    let ap = p - a;
    let dist_plane = ap.dot(&n) / n_sq;
    let proj = p - n * dist_plane;

    // barycentric coordinates of the projection
    let vp = proj - a;
    let d00 = ab.dot(&ab);
    let d01 = ab.dot(&ac);
    let d11 = ac.dot(&ac);
    let d20 = vp.dot(&ab);
    let d21 = vp.dot(&ac);
    let denom = d00 * d11 - d01 * d01;
    let v = (d11 * d20 - d01 * d21) / denom;
    let w = (d00 * d21 - d01 * d20) / denom;
    let u = 1.0 - v - w;

    if u >= 0.0 && v >= 0.0 && w >= 0.0 {
        return finish(p, proj, [u, v, w]);
    }

    // projection outside: the minimizer lies on the boundary
    let (q_ab, t_ab) = closest_on_segment(p, a, b);
    let (q_bc, t_bc) = closest_on_segment(p, b, c);
    let (q_ca, t_ca) = closest_on_segment(p, c, a);
    let d_ab = (p - q_ab).norm_squared();
    let d_bc = (p - q_bc).norm_squared();
    let d_ca = (p - q_ca).norm_squared();

    if d_ab <= d_bc && d_ab <= d_ca {
        finish(p, q_ab, [1.0 - t_ab, t_ab, 0.0])
    } else if d_bc <= d_ca {
        finish(p, q_bc, [0.0, 1.0 - t_bc, t_bc])
    } else {
        finish(p, q_ca, [t_ca, 0.0, 1.0 - t_ca])
    }
}

fn finish(p: &Point3<f64>, q: Point3<f64>, barycentric: [f64; 3]) -> ClosestHit {
    ClosestHit {
        face_index: 0,
        closest_point: q,
        barycentric,
        distance: (p - q).norm(),
    }
}

/// Closest point on segment `[s, e]` and its parameter in [0, 1].
fn closest_on_segment(p: &Point3<f64>, s: &Point3<f64>, e: &Point3<f64>) -> (Point3<f64>, f64) {
    let d = e - s;
    let len_sq = d.norm_squared();
    if len_sq <= f64::MIN_POSITIVE {
        return (*s, 0.0);
    }
    let t = ((p - s).dot(&d) / len_sq).clamp(0.0, 1.0);
    (s + d * t, t)
}

fn degenerate_triangle_hit(
    p: &Point3<f64>,
    a: &Point3<f64>,
    b: &Point3<f64>,
    c: &Point3<f64>,
) -> ClosestHit {
    let lens = [
        (b - a).norm_squared(),
        (c - b).norm_squared(),
        (a - c).norm_squared(),
    ];
    let longest = lens
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .map(|(i, _)| i)
        .unwrap();
    match longest {
        0 => {
            let (q, t) = closest_on_segment(p, a, b);
            finish(p, q, [1.0 - t, t, 0.0])
        }
        1 => {
            let (q, t) = closest_on_segment(p, b, c);
            finish(p, q, [0.0, 1.0 - t, t])
        }
        _ => {
            let (q, t) = closest_on_segment(p, c, a);
            finish(p, q, [t, 0.0, 1.0 - t])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_tri() -> (Point3<f64>, Point3<f64>, Point3<f64>) {
        (
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        )
    }

    #[test]
    fn orthogonal_projection_onto_vertex_region() {
        let (a, b, c) = unit_tri();
        let hit = closest_point_on_triangle(&Point3::new(0.0, 0.0, 1.0), &a, &b, &c);
        assert!((hit.distance - 1.0).abs() < 1e-12);
        assert!((hit.closest_point - Point3::new(0.0, 0.0, 0.0)).norm() < 1e-12);
        assert!((hit.barycentric[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vertex_region_query() {
        let (a, b, c) = unit_tri();
        let hit = closest_point_on_triangle(&Point3::new(2.0, 0.0, 0.0), &a, &b, &c);
        assert!((hit.distance - 1.0).abs() < 1e-12);
        assert!((hit.closest_point - Point3::new(1.0, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn interior_projection() {
        let (a, b, c) = unit_tri();
        let hit = closest_point_on_triangle(&Point3::new(0.25, 0.25, -3.0), &a, &b, &c);
        assert!((hit.distance - 3.0).abs() < 1e-12);
        assert!((hit.closest_point - Point3::new(0.25, 0.25, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn barycentric_sums_to_one_and_matches_point() {
        let (a, b, c) = unit_tri();
        let hit = closest_point_on_triangle(&Point3::new(0.9, 0.9, 0.5), &a, &b, &c);
        let sum: f64 = hit.barycentric.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert!(hit.barycentric.iter().all(|&w| w >= 0.0));
        let recon = a.coords * hit.barycentric[0]
            + b.coords * hit.barycentric[1]
            + c.coords * hit.barycentric[2];
        assert!((recon - hit.closest_point.coords).norm() < 1e-9);
    }

    #[test]
    fn degenerate_triangle_uses_longest_edge() {
        // collinear triangle along x
        let a = Point3::new(0.0, 0.0, 0.0);
        let b = Point3::new(2.0, 0.0, 0.0);
        let c = Point3::new(1.0, 0.0, 0.0);
        let hit = closest_point_on_triangle(&Point3::new(1.5, 1.0, 0.0), &a, &b, &c);
        assert!((hit.distance - 1.0).abs() < 1e-12);
        assert!((hit.closest_point - Point3::new(1.5, 0.0, 0.0)).norm() < 1e-12);
    }
}
