#include "fgins/attitude.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <Eigen/Geometry>

#include <limits>
#include <stdexcept>

using namespace fgins;
using namespace fgins::testing;

namespace {

void expect_quat_near(const Quaternion& a, const Quaternion& b, double tol) {
    EXPECT_NEAR(a.w, b.w, tol);
    EXPECT_NEAR(a.v.x(), b.v.x(), tol);
    EXPECT_NEAR(a.v.y(), b.v.y(), tol);
    EXPECT_NEAR(a.v.z(), b.v.z(), tol);
}

// Same rotation up to sign.
double quat_distance(const Quaternion& a, const Quaternion& b) {
    return std::min((a.coeffs() - b.coeffs()).norm(), (a.coeffs() + b.coeffs()).norm());
}

}  // namespace

TEST(QuatFromRotvec, ZeroIsIdentity) { expect_quat_near(quat_from_rotvec(Vec3::Zero()), Quaternion{}, 0.0); }

TEST(QuatFromRotvec, HalfTurnAboutX) { expect_quat_near(quat_from_rotvec(Vec3(kPi, 0, 0)), {0, 1, 0, 0}, 1e-15); }

TEST(QuatFromRotvec, TenthRadianAboutX) {
    const Quaternion q = quat_from_rotvec(Vec3(0.1, 0, 0));
    EXPECT_NEAR(q.w, 0.99875026, 1e-8);
    EXPECT_NEAR(q.v.x(), 0.04997917, 1e-8);
    EXPECT_EQ(q.v.y(), 0.0);
    EXPECT_EQ(q.v.z(), 0.0);
}

TEST(QuatFromRotvec, RejectsNonFinite) {
    EXPECT_THROW(quat_from_rotvec(Vec3(std::numeric_limits<double>::quiet_NaN(), 0, 0)), std::invalid_argument);
    EXPECT_THROW(quat_from_rotvec(Vec3(0, std::numeric_limits<double>::infinity(), 0)), std::invalid_argument);
}

TEST(QuatFromRotvec, MatchesAngleAxis) {
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const Vec3 phi = random_vec(rng, 3.0);
        const Eigen::Quaterniond ref(Eigen::AngleAxisd(phi.norm(), phi.normalized()));
        expect_quat_near(quat_from_rotvec(phi), {ref.w(), ref.x(), ref.y(), ref.z()}, 1e-14);
    }
}

TEST(QuatFromRotvec, SmallAngleFormErrorOrders) {
    // Against (1, εu/2): the vector part is off by O(ε³), while the scalar
    // part, cos(ε/2) = 1 - ε²/8 + ..., is off at second order.
    const Vec3 u = Vec3(1, -2, 0.5).normalized();
    double prev_vec = 0.0;
    double prev_scalar = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const Quaternion exact = quat_from_rotvec(eps * u);
        const double vec_err = (exact.v - 0.5 * eps * u).norm();
        const double scalar_err = std::abs(exact.w - 1.0);
        if (prev_vec > 0.0) {
            EXPECT_NEAR(prev_vec / vec_err, 1000.0, 10.0);
            EXPECT_NEAR(prev_scalar / scalar_err, 100.0, 1.0);
        }
        prev_vec = vec_err;
        prev_scalar = scalar_err;
    }
}

TEST(RotvecFromQuat, Identity) { EXPECT_EQ(rotvec_from_quat(Quaternion{}), Vec3::Zero()); }

TEST(RotvecFromQuat, HalfTurn) { EXPECT_TRUE(rotvec_from_quat({0, 1, 0, 0}).isApprox(Vec3(kPi, 0, 0), 1e-15)); }

TEST(RotvecFromQuat, RoundTripTenthRadian) {
    const Vec3 phi = rotvec_from_quat(Quaternion(std::cos(0.05), std::sin(0.05), 0, 0));
    EXPECT_NEAR(phi.x(), 0.1, 1e-12);
    EXPECT_NEAR(phi.y(), 0.0, 1e-15);
    const Vec3 rounded = rotvec_from_quat({0.99875026, 0.04997917, 0, 0});
    EXPECT_NEAR(rounded.x(), 0.1, 1e-7);
}

TEST(RotvecFromQuat, RejectsZeroQuaternion) {
    EXPECT_THROW(rotvec_from_quat({0, 0, 0, 0}), std::invalid_argument);
}

TEST(RotvecFromQuat, SmallPathReturnsTwiceVectorPart) {
    const Quaternion q(1.0, 1e-10, -2e-10, 3e-10);
    EXPECT_TRUE(rotvec_from_quat(q).isApprox(2.0 * q.v, 1e-15));
}

TEST(RotvecFromQuat, CanonicalizesSign) {
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        const Quaternion q = random_quat(rng);
        const Vec3 a = rotvec_from_quat(q);
        const Vec3 b = rotvec_from_quat({-q.w, -q.v});
        EXPECT_LT((a - b).norm(), 1e-12);
        EXPECT_LE(a.norm(), kPi + 1e-12);
        EXPECT_LT(quat_distance(quat_from_rotvec(a), q), 1e-13);
    }
}

TEST(QuatProduct, IdentityIsNeutral) {
    Rng rng(3);
    const Quaternion q = random_quat(rng);
    expect_quat_near(q * Quaternion{}, q, 0.0);
    expect_quat_near(Quaternion{} * q, q, 0.0);
}

TEST(QuatProduct, TwoHalfTurnsAboutX) { expect_quat_near(Quaternion(0, 1, 0, 0) * Quaternion(0, 1, 0, 0), {-1, 0, 0, 0}, 0.0); }

TEST(QuatProduct, LeftAndRightMatricesAgree) {
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        const Quaternion a = random_quat(rng);
        const Quaternion b = random_quat(rng);
        expect_quat_near(product_via_left(a, b), product_via_right(a, b), 1e-14);
        expect_quat_near(product_via_left(a, b), a * b, 1e-14);
    }
}

TEST(QuatProduct, MatchesEigenHamiltonProduct) {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const Quaternion a = random_quat(rng);
        const Quaternion b = random_quat(rng);
        const Eigen::Quaterniond ea(a.w, a.v.x(), a.v.y(), a.v.z());
        const Eigen::Quaterniond eb(b.w, b.v.x(), b.v.y(), b.v.z());
        const Eigen::Quaterniond ref = ea * eb;
        expect_quat_near(a * b, {ref.w(), ref.x(), ref.y(), ref.z()}, 1e-14);
    }
}

TEST(QuatProduct, Associative) {
    Rng rng(6);
    for (int i = 0; i < 100; ++i) {
        const Quaternion a = random_quat(rng), b = random_quat(rng), c = random_quat(rng);
        expect_quat_near((a * b) * c, a * (b * c), 1e-14);
    }
}

TEST(QuatProduct, ConjugateGivesIdentity) {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const Quaternion q = random_quat(rng);
        EXPECT_LT(((q * q.conjugate()).coeffs() - Vec4(1, 0, 0, 0)).norm(), 1e-13);
    }
}

TEST(Skew, ZeroVector) { EXPECT_EQ(skew(Vec3::Zero()), Mat3::Zero()); }

TEST(Skew, XCrossYIsZ) { EXPECT_EQ(skew(Vec3(1, 0, 0)) * Vec3(0, 1, 0), Vec3(0, 0, 1)); }

TEST(Skew, MatchesComponentCrossProduct) {
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        const Vec3 a = random_vec(rng, 10.0);
        const Vec3 b = random_vec(rng, 10.0);
        const Vec3 cross(a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(), a.x() * b.y() - a.y() * b.x());
        EXPECT_EQ(skew(a) * b, cross);
        EXPECT_EQ(skew(a).transpose(), -skew(a));
    }
}

TEST(Dcm, IdentityQuaternion) { EXPECT_EQ(quat_to_dcm(Quaternion{}), Mat3::Identity()); }

TEST(Dcm, QuarterTurnAboutZ) {
    const Mat3 c = quat_to_dcm(quat_from_rotvec(Vec3(0, 0, kPi / 2)));
    EXPECT_TRUE((c * Vec3(1, 0, 0)).isApprox(Vec3(0, 1, 0), 1e-15));
    EXPECT_TRUE((c * Vec3(0, 1, 0)).isApprox(Vec3(-1, 0, 0), 1e-15));
}

TEST(Dcm, MatchesSandwichProduct) {
    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        const Quaternion q = random_quat(rng);
        const Vec3 v = random_vec(rng, 5.0);
        EXPECT_LT((quat_to_dcm(q) * v - rotate(q, v)).norm(), 1e-13 * 5.0);
    }
}

TEST(Dcm, RoundTripAndOrthonormality) {
    Rng rng(10);
    for (int i = 0; i < 200; ++i) {
        const Quaternion q = random_quat(rng);
        const Mat3 c = quat_to_dcm(q);
        EXPECT_LT((c.transpose() * c - Mat3::Identity()).norm(), 1e-9);
        EXPECT_NEAR(c.determinant(), 1.0, 1e-9);
        EXPECT_LT(quat_distance(dcm_to_quat(c), q), 1e-12);
    }
}

TEST(Dcm, ChainRule) {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const Quaternion a = random_quat(rng), b = random_quat(rng);
        EXPECT_LT((quat_to_dcm(a * b) - quat_to_dcm(a) * quat_to_dcm(b)).norm(), 1e-12);
    }
}

TEST(Dcm, RejectsNonOrthonormal) {
    Mat3 c = Mat3::Identity();
    c(0, 1) = 1e-3;
    EXPECT_THROW(dcm_to_quat(c), std::invalid_argument);
}

TEST(RightJacobian, FirstOrderExpansion) {
    Rng rng(12);
    for (int i = 0; i < 50; ++i) {
        const Vec3 phi = random_vec(rng, 1.5);
        const Vec3 d = random_vec(rng, 1e-6);
        const Quaternion lhs = quat_from_rotvec(phi + d);
        const Quaternion rhs = quat_from_rotvec(phi) * quat_from_rotvec(right_jacobian(phi) * d);
        EXPECT_LT(quat_distance(lhs, rhs), 1e-11);
        EXPECT_LT((right_jacobian(phi) * right_jacobian_inverse(phi) - Mat3::Identity()).norm(), 1e-12);
    }
}

TEST(Euler, RoundTrip) {
    Rng rng(13);
    for (int i = 0; i < 100; ++i) {
        const Vec3 rpy(uniform(rng, -3.0, 3.0), uniform(rng, -1.4, 1.4), uniform(rng, -3.0, 3.0));
        EXPECT_LT((dcm_to_euler(euler_to_dcm(rpy)) - rpy).norm(), 1e-12);
        EXPECT_LT((quat_to_dcm(euler_to_quat(rpy)) - euler_to_dcm(rpy)).norm(), 1e-13);
    }
}

TEST(Euler, YawIsRotationAboutDown) {
    const Mat3 c = euler_to_dcm(Vec3(0, 0, kPi / 2));
    // Heading east: body x points along w-frame y (east).
    EXPECT_TRUE((c * Vec3(1, 0, 0)).isApprox(Vec3(0, 1, 0), 1e-15));
}
