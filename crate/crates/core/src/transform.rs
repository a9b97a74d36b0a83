//! Rigid SE(3) transforms stored as unit quaternion + translation.

use nalgebra::{Matrix3, Point3, Quaternion, UnitQuaternion, Vector3};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A rigid transform `x -> R * x + t` with translation in millimeters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    pub rotation: UnitQuaternion<f64>,
    pub translation: Vector3<f64>,
}

impl RigidTransform {
    pub fn identity() -> Self {
        Self {
            rotation: UnitQuaternion::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn new(rotation: UnitQuaternion<f64>, translation: Vector3<f64>) -> Self {
        Self {
            rotation,
            translation,
        }
    }

    /// Rotation from a scaled axis (angle = vector norm, radians).
    pub fn from_axis_angle(axis_angle: Vector3<f64>, translation: Vector3<f64>) -> Self {
        Self {
            rotation: UnitQuaternion::from_scaled_axis(axis_angle),
            translation,
        }
    }

    pub fn apply_point(&self, p: &Point3<f64>) -> Point3<f64> {
        self.rotation.transform_point(p) + self.translation
    }

    /// Rotates a direction (no translation).
    pub fn apply_vector(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rotation.transform_vector(v)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &RigidTransform) -> RigidTransform {
        RigidTransform {
            rotation: self.rotation * other.rotation,
            translation: self.rotation.transform_vector(&other.translation) + self.translation,
        }
    }

    pub fn inverse(&self) -> RigidTransform {
        let inv_rot = self.rotation.inverse();
        RigidTransform {
            rotation: inv_rot,
            translation: -(inv_rot.transform_vector(&self.translation)),
        }
    }

    /// Rotation angle in radians between this transform's rotation and `other`'s.
    pub fn rotation_angle_to(&self, other: &RigidTransform) -> f64 {
        (self.rotation.inverse() * other.rotation).angle()
    }

    pub fn translation_distance_to(&self, other: &RigidTransform) -> f64 {
        (self.translation - other.translation).norm()
    }

    pub fn rotation_matrix(&self) -> Matrix3<f64> {
        self.rotation.to_rotation_matrix().into_inner()
    }

    /// 4x4 homogeneous matrix, row-major.
    pub fn to_matrix_row_major(&self) -> [[f64; 4]; 4] {
        let r = self.rotation_matrix();
        let t = self.translation;
        [
            [r[(0, 0)], r[(0, 1)], r[(0, 2)], t.x],
            [r[(1, 0)], r[(1, 1)], r[(1, 2)], t.y],
            [r[(2, 0)], r[(2, 1)], r[(2, 2)], t.z],
            [0.0, 0.0, 0.0, 1.0],
        ]
    }
}

impl Default for RigidTransform {
    fn default() -> Self {
        Self::identity()
    }
}

#[derive(Serialize, Deserialize)]
struct QuatRepr {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

#[derive(Serialize, Deserialize)]
struct TransformRepr {
    rotation_quaternion: QuatRepr,
    translation_mm: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix_row_major: Option<[[f64; 4]; 4]>,
}

impl Serialize for RigidTransform {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let q = self.rotation.quaternion();
        TransformRepr {
            rotation_quaternion: QuatRepr {
                w: q.w,
                x: q.i,
                y: q.j,
                z: q.k,
            },
            translation_mm: [self.translation.x, self.translation.y, self.translation.z],
            matrix_row_major: Some(self.to_matrix_row_major()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RigidTransform {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = TransformRepr::deserialize(deserializer)?;
        let q = repr.rotation_quaternion;
        let quat = Quaternion::new(q.w, q.x, q.y, q.z);
        if quat.norm() < 1e-12 {
            return Err(D::Error::custom("quaternion norm too small"));
        }
        Ok(RigidTransform {
            rotation: UnitQuaternion::from_quaternion(quat),
            translation: Vector3::from(repr.translation_mm),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample() -> RigidTransform {
        RigidTransform::new(
            UnitQuaternion::from_euler_angles(0.3, -0.2, 0.9),
            Vector3::new(12.0, -4.5, 100.0),
        )
    }

    #[test]
    fn compose_inverse_is_identity() {
        let t = sample();
        let id = t.compose(&t.inverse());
        assert!(id.rotation.angle() < 1e-12);
        assert!(id.translation.norm() < 1e-9);
    }

    #[test]
    fn compose_applies_right_operand_first() {
        let a = sample();
        let b = RigidTransform::new(
            UnitQuaternion::from_euler_angles(-0.7, 0.1, 0.2),
            Vector3::new(1.0, 2.0, 3.0),
        );
        let p = Point3::new(4.0, 5.0, 6.0);
        let via_compose = a.compose(&b).apply_point(&p);
        let sequential = a.apply_point(&b.apply_point(&p));
        assert_relative_eq!(via_compose, sequential, epsilon = 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let t = sample();
        let json = serde_json::to_string(&t).unwrap();
        let back: RigidTransform = serde_json::from_str(&json).unwrap();
        assert!(t.rotation_angle_to(&back) < 1e-12);
        assert!(t.translation_distance_to(&back) < 1e-12);
        // matrix block is emitted for interop
        assert!(json.contains("matrix_row_major"));
    }
}
