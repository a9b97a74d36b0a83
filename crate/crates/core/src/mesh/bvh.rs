//! Median-split AABB hierarchy over mesh faces for closest-triangle queries.

use super::{closest_point_on_triangle, ClosestHit, TriangleMesh};
use crate::error::GeometryError;
use nalgebra::{Point3, Vector3};

const LEAF_SIZE: usize = 4;

#[derive(Debug, Clone, Copy)]
struct Aabb {
    min: Point3<f64>,
    max: Point3<f64>,
}

impl Aabb {
    fn empty() -> Self {
        Self {
            min: Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY),
            max: Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    fn grow_point(&mut self, p: &Point3<f64>) {
        for k in 0..3 {
            self.min[k] = self.min[k].min(p[k]);
            self.max[k] = self.max[k].max(p[k]);
        }
    }

    fn grow(&mut self, other: &Aabb) {
        for k in 0..3 {
            self.min[k] = self.min[k].min(other.min[k]);
            self.max[k] = self.max[k].max(other.max[k]);
        }
    }

    /// Squared distance from `p` to the box (zero inside).
    fn distance_sq(&self, p: &Point3<f64>) -> f64 {
        let mut d = 0.0;
        for k in 0..3 {
            let v = p[k];
            if v < self.min[k] {
                d += (self.min[k] - v) * (self.min[k] - v);
            } else if v > self.max[k] {
                d += (v - self.max[k]) * (v - self.max[k]);
            }
        }
        d
    }
}

#[derive(Debug, Clone)]
enum Node {
    Internal { aabb: Aabb, left: u32, right: u32 },
    Leaf { aabb: Aabb, start: u32, count: u32 },
}

impl Node {
    fn aabb(&self) -> &Aabb {
        match self {
            Node::Internal { aabb, .. } | Node::Leaf { aabb, .. } => aabb,
        }
    }
}

/// Bounding volume hierarchy over the faces of one mesh.
///
/// Immutable after construction; queries are pure and thread-safe.
#[derive(Debug, Clone)]
pub struct BvhTree {
    nodes: Vec<Node>,
    /// Face indices permuted so that leaf ranges are contiguous.
    face_order: Vec<u32>,
}

impl BvhTree {
    pub fn build(mesh: &TriangleMesh) -> Result<Self, GeometryError> {
        if mesh.faces.is_empty() {
            return Err(GeometryError::EmptyMesh);
        }
        let centroids: Vec<Vector3<f64>> = (0..mesh.face_count())
            .map(|fi| {
                let [a, b, c] = mesh.face_vertices(fi);
                (a.coords + b.coords + c.coords) / 3.0
            })
            .collect();
        let boxes: Vec<Aabb> = (0..mesh.face_count())
            .map(|fi| {
                let mut bb = Aabb::empty();
                for v in mesh.face_vertices(fi) {
                    bb.grow_point(&v);
                }
                bb
            })
            .collect();

        let mut face_order: Vec<u32> = (0..mesh.face_count() as u32).collect();
        let mut nodes = Vec::new();
        build_node(&mut nodes, &mut face_order, 0, mesh.face_count(), &centroids, &boxes);
        Ok(Self { nodes, face_order })
    }

    /// Globally minimal closest hit over all faces; ties broken by lowest
    /// face index.
    pub fn closest_triangle(&self, mesh: &TriangleMesh, p: &Point3<f64>) -> ClosestHit {
        let mut best: Option<ClosestHit> = None;
        self.search(0, mesh, p, &mut best);
        best.expect("BVH is never built over an empty mesh")
    }

    fn search(&self, node: usize, mesh: &TriangleMesh, p: &Point3<f64>, best: &mut Option<ClosestHit>) {
        match &self.nodes[node] {
            Node::Leaf { start, count, .. } => {
                for i in *start..(*start + *count) {
                    let fi = self.face_order[i as usize];
                    let [a, b, c] = mesh.face_vertices(fi as usize);
                    let mut hit = closest_point_on_triangle(p, &a, &b, &c);
                    hit.face_index = fi;
                    let better = match best {
                        None => true,
                        Some(cur) => {
                            hit.distance < cur.distance
                                || (hit.distance == cur.distance && fi < cur.face_index)
                        }
                    };
                    if better {
                        *best = Some(hit);
                    }
                }
            }
            Node::Internal { left, right, .. } => {
                let l = *left as usize;
                let r = *right as usize;
                let dl = self.nodes[l].aabb().distance_sq(p);
                let dr = self.nodes[r].aabb().distance_sq(p);
                let (first, second, d_first, d_second) =
                    if dl <= dr { (l, r, dl, dr) } else { (r, l, dr, dl) };
                // prune strictly so equal-distance candidates are still
                // visited and the index tie-break stays exact
                if self.exceeds(d_first, best) {
                    return;
                }
                self.search(first, mesh, p, best);
                if !self.exceeds(d_second, best) {
                    self.search(second, mesh, p, best);
                }
            }
        }
    }

    fn exceeds(&self, dist_sq: f64, best: &Option<ClosestHit>) -> bool {
        match best {
            Some(b) => dist_sq > b.distance * b.distance,
            None => false,
        }
    }
}

fn build_node(
    nodes: &mut Vec<Node>,
    order: &mut [u32],
    start: usize,
    count: usize,
    centroids: &[Vector3<f64>],
    boxes: &[Aabb],
) -> u32 {
    let slice = &order[start..start + count];
    let mut aabb = Aabb::empty();
    for &fi in slice {
        aabb.grow(&boxes[fi as usize]);
    }

    let index = nodes.len() as u32;
    if count <= LEAF_SIZE {
        nodes.push(Node::Leaf {
            aabb,
            start: start as u32,
            count: count as u32,
        });
        return index;
    }

    // split along the widest centroid axis at the median
    let mut cmin = Vector3::repeat(f64::INFINITY);
    let mut cmax = Vector3::repeat(f64::NEG_INFINITY);
    for &fi in slice {
        let c = centroids[fi as usize];
        for k in 0..3 {
            cmin[k] = cmin[k].min(c[k]);
            cmax[k] = cmax[k].max(c[k]);
        }
    }
    let extent = cmax - cmin;
    let axis = if extent.x >= extent.y && extent.x >= extent.z {
        0
    } else if extent.y >= extent.z {
        1
    } else {
        2
    };

    let mid = count / 2;
    order[start..start + count].select_nth_unstable_by(mid, |&a, &b| {
        centroids[a as usize][axis]
            .total_cmp(&centroids[b as usize][axis])
            .then(a.cmp(&b))
    });

    nodes.push(Node::Leaf {
        // placeholder, replaced below once children exist
        aabb,
        start: 0,
        count: 0,
    });
    let left = build_node(nodes, order, start, mid, centroids, boxes);
    let right = build_node(nodes, order, start + mid, count - mid, centroids, boxes);
    nodes[index as usize] = Node::Internal { aabb, left, right };
    index
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra() -> TriangleMesh {
        TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(10.0, 0.0, 0.0),
                Point3::new(0.0, 10.0, 0.0),
                Point3::new(0.0, 0.0, 10.0),
            ],
            vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]],
        )
    }

    #[test]
    fn mesh_vertices_are_at_distance_zero() {
        let mesh = tetra();
        let bvh = BvhTree::build(&mesh).unwrap();
        for v in &mesh.vertices {
            let hit = bvh.closest_triangle(&mesh, v);
            assert!(hit.distance < 1e-12);
        }
    }

    #[test]
    fn tie_break_prefers_lowest_face_index() {
        let mesh = tetra();
        let bvh = BvhTree::build(&mesh).unwrap();
        // vertex 0 touches faces 0, 1 and 3; all tie at distance 0
        let hit = bvh.closest_triangle(&mesh, &Point3::new(0.0, 0.0, 0.0));
        assert_eq!(hit.face_index, 0);
    }

    #[test]
    fn empty_mesh_is_an_error() {
        let mesh = TriangleMesh::new(vec![Point3::new(0.0, 0.0, 0.0)], vec![]);
        assert!(matches!(BvhTree::build(&mesh), Err(GeometryError::EmptyMesh)));
    }
}
