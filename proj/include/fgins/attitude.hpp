#pragma once

// Attitude algebra: Hamilton quaternions (scalar first), rotation vectors and
// direction cosine matrices.
//
// Convention: q_b^a rotates b-frame vectors into the a-frame through
//   v^a = q ⊗ (0, v^b) ⊗ q^-1,
// and quat_to_dcm(q_b^a) = C_b^a, so the chain rule reads
//   q_c^a = q_b^a ⊗ q_c^b  <=>  C_c^a = C_b^a C_c^b.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>

namespace fgins {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Rotation vector (axis times angle, radians).
using RotationVector = Vec3;
/// Direction cosine matrix C_b^a.
using Dcm = Mat3;

/// Below this angle the small-angle quaternion (1, phi/2) is used.
inline constexpr double kSmallAngle = 1e-8;

struct Quaternion {
    double w{1.0};
    Vec3 v{Vec3::Zero()};

    Quaternion() = default;
    Quaternion(double qw, const Vec3& qv) : w(qw), v(qv) {}
    Quaternion(double qw, double qx, double qy, double qz) : w(qw), v(qx, qy, qz) {}

    static Quaternion identity() { return {}; }
    static Quaternion from_coeffs(const Vec4& c) { return {c[0], c.tail<3>()}; }

    /// [qw qx qy qz]
    Vec4 coeffs() const { return {w, v.x(), v.y(), v.z()}; }
    double squared_norm() const { return w * w + v.squaredNorm(); }
    double norm() const;
    Quaternion normalized() const;
    Quaternion conjugate() const { return {w, -v}; }
    /// Inverse of a unit quaternion (conjugate).
    Quaternion inverse() const { return conjugate(); }
    /// Same rotation with qw >= 0.
    Quaternion canonical() const { return w < 0.0 ? Quaternion{-w, -v} : *this; }
    bool is_finite() const { return std::isfinite(w) && v.allFinite(); }
};

/// Hamilton product a ⊗ b.
Quaternion operator*(const Quaternion& a, const Quaternion& b);

/// Left product matrix: a ⊗ b = [a]_L b.
Mat4 left_matrix(const Quaternion& a);
/// Right product matrix: a ⊗ b = [b]_R a.
Mat4 right_matrix(const Quaternion& b);

Quaternion product_via_left(const Quaternion& a, const Quaternion& b);
Quaternion product_via_right(const Quaternion& a, const Quaternion& b);

/// [a×] with skew(a) * b == a.cross(b).
Mat3 skew(const Vec3& a);

/// Exponential map. Throws std::invalid_argument on non-finite input.
Quaternion quat_from_rotvec(const RotationVector& phi);

/// Logarithm map, canonicalised to qw >= 0 so |result| <= pi.
/// Throws std::invalid_argument on a zero-norm or non-finite quaternion.
RotationVector rotvec_from_quat(const Quaternion& q);

Dcm quat_to_dcm(const Quaternion& q);

/// Throws std::invalid_argument when C is not orthonormal within 1e-6.
Quaternion dcm_to_quat(const Dcm& c);

/// Sandwich product q ⊗ (0, v) ⊗ q^-1, the reference for quat_to_dcm.
Vec3 rotate(const Quaternion& q, const Vec3& v);

/// Right Jacobian of SO(3): Exp(phi + d) ≈ Exp(phi) Exp(Jr(phi) d).
Mat3 right_jacobian(const RotationVector& phi);
Mat3 right_jacobian_inverse(const RotationVector& phi);

/// Roll, pitch, yaw (ZYX, NED body) in radians.
Vec3 dcm_to_euler(const Dcm& c);
Dcm euler_to_dcm(const Vec3& rpy);
Quaternion euler_to_quat(const Vec3& rpy);

}  // namespace fgins
