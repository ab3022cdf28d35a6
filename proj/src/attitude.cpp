#include "fgins/attitude.hpp"

#include <stdexcept>

namespace fgins {

double Quaternion::norm() const { return std::sqrt(squared_norm()); }

Quaternion Quaternion::normalized() const {
    const double n = norm();
    return {w / n, v / n};
}

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.v.dot(b.v), a.w * b.v + b.w * a.v + a.v.cross(b.v)};
}

Mat4 left_matrix(const Quaternion& a) {
    Mat4 m = a.w * Mat4::Identity();
    m.block<1, 3>(0, 1) -= a.v.transpose();
    m.block<3, 1>(1, 0) += a.v;
    m.block<3, 3>(1, 1) += skew(a.v);
    return m;
}

Mat4 right_matrix(const Quaternion& b) {
    Mat4 m = b.w * Mat4::Identity();
    m.block<1, 3>(0, 1) -= b.v.transpose();
    m.block<3, 1>(1, 0) += b.v;
    m.block<3, 3>(1, 1) -= skew(b.v);
    return m;
}

Quaternion product_via_left(const Quaternion& a, const Quaternion& b) {
    return Quaternion::from_coeffs(left_matrix(a) * b.coeffs());
}

Quaternion product_via_right(const Quaternion& a, const Quaternion& b) {
    return Quaternion::from_coeffs(right_matrix(b) * a.coeffs());
}

Mat3 skew(const Vec3& a) {
    Mat3 s;
    s << 0.0, -a.z(), a.y(),
         a.z(), 0.0, -a.x(),
        -a.y(), a.x(), 0.0;
    return s;
}

Quaternion quat_from_rotvec(const RotationVector& phi) {
    if (!phi.allFinite()) {
        throw std::invalid_argument("quat_from_rotvec: non-finite rotation vector");
    }
    const double angle = phi.norm();
    if (angle < kSmallAngle) {
        // (1, phi/2) normalised; the truncation error is O(angle^2) in qw only.
        return Quaternion{1.0, 0.5 * phi}.normalized();
    }
    const double half = 0.5 * angle;
    return {std::cos(half), (std::sin(half) / angle) * phi};
}

RotationVector rotvec_from_quat(const Quaternion& q) {
    if (!q.is_finite()) {
        throw std::invalid_argument("rotvec_from_quat: non-finite quaternion");
    }
    const double n = q.norm();
    if (n == 0.0) {
        throw std::invalid_argument("rotvec_from_quat: zero-norm quaternion");
    }
    const Quaternion u = Quaternion{q.w / n, q.v / n}.canonical();
    const double vn = u.v.norm();
    if (vn < kSmallAngle) {
        return 2.0 * u.v;
    }
    return (2.0 * std::atan2(vn, u.w) / vn) * u.v;
}

Dcm quat_to_dcm(const Quaternion& q) {
    const double w = q.w, x = q.v.x(), y = q.v.y(), z = q.v.z();
    Dcm c;
    c << 1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y),
         2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x),
         2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y);
    return c;
}

Quaternion dcm_to_quat(const Dcm& c) {
    if (!c.allFinite() || (c.transpose() * c - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-6 ||
        std::abs(c.determinant() - 1.0) > 1e-6) {
        throw std::invalid_argument("dcm_to_quat: matrix is not a rotation");
    }
    // Shepperd: pick the largest of 4w^2, 4x^2, 4y^2, 4z^2 as pivot.
    const double tr = c.trace();
    const Vec4 diag{tr, c(0, 0), c(1, 1), c(2, 2)};
    int k = 0;
    diag.maxCoeff(&k);
    Quaternion q;
    if (k == 0) {
        const double s = 2.0 * std::sqrt(1.0 + tr);
        q = {0.25 * s, (c(2, 1) - c(1, 2)) / s, (c(0, 2) - c(2, 0)) / s, (c(1, 0) - c(0, 1)) / s};
    } else if (k == 1) {
        const double s = 2.0 * std::sqrt(1.0 + c(0, 0) - c(1, 1) - c(2, 2));
        q = {(c(2, 1) - c(1, 2)) / s, 0.25 * s, (c(0, 1) + c(1, 0)) / s, (c(0, 2) + c(2, 0)) / s};
    } else if (k == 2) {
        const double s = 2.0 * std::sqrt(1.0 - c(0, 0) + c(1, 1) - c(2, 2));
        q = {(c(0, 2) - c(2, 0)) / s, (c(0, 1) + c(1, 0)) / s, 0.25 * s, (c(1, 2) + c(2, 1)) / s};
    } else {
        const double s = 2.0 * std::sqrt(1.0 - c(0, 0) - c(1, 1) + c(2, 2));
        q = {(c(1, 0) - c(0, 1)) / s, (c(0, 2) + c(2, 0)) / s, (c(1, 2) + c(2, 1)) / s, 0.25 * s};
    }
    return q.canonical().normalized();
}

Vec3 rotate(const Quaternion& q, const Vec3& v) {
    return (q * Quaternion{0.0, v} * q.inverse()).v;
}

Mat3 right_jacobian(const RotationVector& phi) {
    const double a = phi.norm();
    const Mat3 s = skew(phi);
    if (a < 1e-6) {
        return Mat3::Identity() - 0.5 * s + (1.0 / 6.0) * s * s;
    }
    const double a2 = a * a;
    return Mat3::Identity() - ((1.0 - std::cos(a)) / a2) * s + ((a - std::sin(a)) / (a2 * a)) * s * s;
}

Mat3 right_jacobian_inverse(const RotationVector& phi) {
    const double a = phi.norm();
    const Mat3 s = skew(phi);
    if (a < 1e-6) {
        return Mat3::Identity() + 0.5 * s + (1.0 / 12.0) * s * s;
    }
    const double coef = 1.0 / (a * a) - (1.0 + std::cos(a)) / (2.0 * a * std::sin(a));
    return Mat3::Identity() + 0.5 * s + coef * s * s;
}

Vec3 dcm_to_euler(const Dcm& c) {
    const double pitch = std::atan2(-c(2, 0), std::hypot(c(2, 1), c(2, 2)));
    const double roll = std::atan2(c(2, 1), c(2, 2));
    const double yaw = std::atan2(c(1, 0), c(0, 0));
    return {roll, pitch, yaw};
}

Dcm euler_to_dcm(const Vec3& rpy) {
    const double cr = std::cos(rpy[0]), sr = std::sin(rpy[0]);
    const double cp = std::cos(rpy[1]), sp = std::sin(rpy[1]);
    const double cy = std::cos(rpy[2]), sy = std::sin(rpy[2]);
    Dcm c;
    c << cp * cy, -cr * sy + sr * sp * cy, sr * sy + cr * sp * cy,
         cp * sy, cr * cy + sr * sp * sy, -sr * cy + cr * sp * sy,
         -sp, sr * cp, cr * cp;
    return c;
}

Quaternion euler_to_quat(const Vec3& rpy) {
    const double cr = std::cos(0.5 * rpy[0]), sr = std::sin(0.5 * rpy[0]);
    const double cp = std::cos(0.5 * rpy[1]), sp = std::sin(0.5 * rpy[1]);
    const double cy = std::cos(0.5 * rpy[2]), sy = std::sin(0.5 * rpy[2]);
    return {cy * cp * cr + sy * sp * sr, cy * cp * sr - sy * sp * cr, cy * sp * cr + sy * cp * sr,
            sy * cp * cr - cy * sp * sr};
}

}  // namespace fgins
