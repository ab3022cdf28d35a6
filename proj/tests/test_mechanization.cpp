#include "fgins/imu_simulator.hpp"
#include "fgins/mechanization.hpp"
#include "fgins/trajectory.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace fgins;
using namespace fgins::testing;

namespace {

LocalFrame no_earth(const Vec3& g = Vec3::Zero()) { return LocalFrame::with_vectors(GeodeticPosition{}, g, Vec3::Zero()); }

NavState run(const NavState& x0, const std::vector<ImuSample>& s, const LocalFrame& f, const ImuBias& b = {}) {
    NavState x = x0;
    ImuSample prev = zero_predecessor(s.front());
    for (const auto& c : s) {
        x = ins_step(x, prev, c, b, f);
        prev = c;
    }
    return x;
}

// Coning motion: body rate ω(t) = [a cos Ωt, a sin Ωt, c].
Vec3 coning_rate(double t) {
    const double a = 0.3, omega = 2.0 * kPi * 2.0, c = 0.1;
    return {a * std::cos(omega * t), a * std::sin(omega * t), c};
}

Quaternion rk4_attitude(double t_end, int steps) {
    auto deriv = [](double t, const Vec4& q) {
        const Vec3 w = coning_rate(t);
        const Quaternion dq = Quaternion::from_coeffs(q) * Quaternion(0.0, w);
        return Vec4(0.5 * dq.coeffs());
    };
    Vec4 q(1, 0, 0, 0);
    const double h = t_end / steps;
    for (int i = 0; i < steps; ++i) {
        const double t = i * h;
        const Vec4 k1 = deriv(t, q);
        const Vec4 k2 = deriv(t + h / 2, q + h / 2 * k1);
        const Vec4 k3 = deriv(t + h / 2, q + h / 2 * k2);
        const Vec4 k4 = deriv(t + h, q + h * k3);
        q += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        q.normalize();
    }
    return Quaternion::from_coeffs(q);
}

std::vector<ImuSample> coning_samples(double t_end, double dt) {
    std::vector<ImuSample> out;
    const int n = static_cast<int>(std::lround(t_end / dt));
    for (int k = 1; k <= n; ++k) {
        // Simpson's rule on the analytic rate.
        const double t0 = (k - 1) * dt, t1 = k * dt;
        const Vec3 dth = dt / 6 * (coning_rate(t0) + 4 * coning_rate(0.5 * (t0 + t1)) + coning_rate(t1));
        out.push_back({t1, dt, dth, Vec3::Zero()});
    }
    return out;
}

double attitude_error(const Quaternion& a, const Quaternion& b) { return rotvec_from_quat(a.conjugate() * b).norm(); }

}  // namespace

TEST(Compensate, ZeroBiasLeavesSample) {
    const ImuSample s{1.0, 0.005, Vec3(1e-3, 2e-3, 3e-3), Vec3(0.01, 0.02, 0.03)};
    const ImuSample c = compensate(s, {});
    EXPECT_EQ(c.dtheta, s.dtheta);
    EXPECT_EQ(c.dvel, s.dvel);
}

TEST(Compensate, SubtractsBiasTimesInterval) {
    const ImuSample s{1.0, 0.005, Vec3(1e-3, 0, 0), Vec3::Zero()};
    const ImuSample c = compensate(s, {Vec3(1e-4, 0, 0), Vec3::Zero()});
    EXPECT_NEAR(s.dtheta.x() - c.dtheta.x(), 5e-7, 1e-18);
}

TEST(Compensate, RoundTrip) {
    Rng rng(30);
    const ImuSample s{1.0, 0.005, random_vec(rng, 1e-3), random_vec(rng, 0.05)};
    const ImuBias b = random_bias(rng);
    const ImuSample back = compensate(compensate(s, b), {-b.bg, -b.ba});
    EXPECT_LT((back.dtheta - s.dtheta).norm(), 1e-18);
    EXPECT_LT((back.dvel - s.dvel).norm(), 1e-17);
}

TEST(AttitudeUpdate, ZeroIncrementsKeepAttitude) {
    Rng rng(31);
    NavState x;
    x.q = random_quat(rng);
    const ImuSample s{0.005, 0.005, Vec3::Zero(), Vec3::Zero()};
    const Quaternion q = attitude_update(x, s, s, no_earth());
    EXPECT_LT((q.coeffs() - x.q.coeffs()).norm(), 1e-15);
}

TEST(AttitudeUpdate, ParallelIncrementsHaveNoConing) {
    const ImuSample a{0.005, 0.005, Vec3(1e-3, 2e-3, -1e-3), Vec3::Zero()};
    const ImuSample b{0.010, 0.005, 3.0 * a.dtheta, Vec3::Zero()};
    EXPECT_EQ(coning_rotvec(a, b), b.dtheta);
}

TEST(AttitudeUpdate, StationaryWithEarthRateIsConstant) {
    const LocalFrame f = frame_at(30.0);
    Rng rng(32);
    NavState x;
    x.q = random_quat(rng);
    const double dt = 0.005;
    const Vec3 dth = quat_to_dcm(x.q).transpose() * f.earth_rate() * dt;
    const ImuSample s{dt, dt, dth, Vec3::Zero()};
    Quaternion q = x.q;
    for (int k = 0; k < 12000; ++k) {
        NavState y = x;
        y.q = q;
        q = attitude_update(y, s, s, f);
    }
    EXPECT_LT(attitude_error(q, x.q), 1e-10);
}

TEST(AttitudeUpdate, WithoutEarthRateReducesToBodyRotation) {
    Rng rng(33);
    for (int i = 0; i < 50; ++i) {
        NavState x;
        x.q = random_quat(rng);
        const ImuSample a{0.005, 0.005, random_vec(rng, 1e-2), Vec3::Zero()};
        const ImuSample b{0.010, 0.005, random_vec(rng, 1e-2), Vec3::Zero()};
        const Quaternion q = attitude_update(x, a, b, no_earth());
        const Quaternion ref = (x.q * quat_from_rotvec(coning_rotvec(a, b))).normalized();
        EXPECT_EQ(q.coeffs(), ref.coeffs());
    }
}

TEST(AttitudeUpdate, KeepsUnitNorm) {
    Rng rng(34);
    const LocalFrame f = frame_at(45.0);
    NavState x = random_nav(rng);
    const auto s = random_segment(rng, 0.0, 2000, 0.005, 2.0);
    ImuSample prev = zero_predecessor(s.front());
    for (const auto& c : s) {
        x = ins_step(x, prev, c, {}, f);
        prev = c;
        ASSERT_NEAR(x.q.squared_norm(), 1.0, 1e-12);
    }
}

TEST(AttitudeUpdate, ConingMotionTracksDirectIntegration) {
    // Two-sample coning correction against RK4 on q̇ = ½ q ⊗ ω at 20 kHz.
    const double t_end = 10.0, dt = 0.005;
    const Quaternion truth = rk4_attitude(t_end, 200000);
    const auto samples = coning_samples(t_end, dt);
    const NavState x = run(NavState{}, samples, no_earth());

    // The same loop with the correction dropped: a first-order algorithm.
    Quaternion first_order;
    for (const auto& s : samples) first_order = (first_order * quat_from_rotvec(s.dtheta)).normalized();

    const double err = attitude_error(x.q, truth);
    EXPECT_LT(err, 1e-6);
    EXPECT_LT(err, 1e-2 * attitude_error(first_order, truth));
}

TEST(VelocityUpdate, FreeFallUnderGravity) {
    const double g = 9.8;
    const LocalFrame f = no_earth(Vec3(0, 0, g));
    const ImuSample s{0.005, 0.005, Vec3::Zero(), Vec3::Zero()};
    const Vec3 v = velocity_update(NavState{}, s, s, f);
    EXPECT_NEAR(v.z(), g * 0.005, 1e-15);
    EXPECT_EQ(v.head<2>(), Eigen::Vector2d::Zero());
}

TEST(VelocityUpdate, ParallelIncrementsHaveNoSculling) {
    const ImuSample a{0.005, 0.005, Vec3::Zero(), Vec3(0.01, 0.02, 0.03)};
    const ImuSample b{0.010, 0.005, Vec3::Zero(), 2.0 * a.dvel};
    EXPECT_EQ(sculled_dvel(a, b), b.dvel);
}

TEST(VelocityUpdate, RotationAndScullingTerms) {
    const ImuSample a{0.005, 0.005, Vec3(1e-3, 0, 0), Vec3(0, 0.02, 0)};
    const ImuSample b{0.010, 0.005, Vec3(0, 2e-3, 0), Vec3(0.01, 0, 0.03)};
    const Vec3 expected = b.dvel + 0.5 * b.dtheta.cross(b.dvel) +
                          (a.dtheta.cross(b.dvel) + a.dvel.cross(b.dtheta)) / 12.0;
    EXPECT_LT((sculled_dvel(a, b) - expected).norm(), 1e-18);
}

TEST(VelocityUpdate, CoriolisTermMatchesCrossProduct) {
    const LocalFrame f = LocalFrame::with_vectors(GeodeticPosition{}, Vec3::Zero(), earth_rate_in_w(kPi / 4));
    NavState x;
    x.v = Vec3(500, 0, 0);
    const double dt = 1.0;
    const ImuSample s{dt, dt, Vec3::Zero(), Vec3::Zero()};
    const Vec3 dv = velocity_update(x, s, s, f) - x.v;
    const Vec3 w = f.earth_rate();
    const Vec3 cross(w.y() * 500 * 0 - w.z() * 0, w.z() * 500 - w.x() * 0, w.x() * 0 - w.y() * 500);
    EXPECT_LT((dv + 2.0 * cross * dt).norm(), 1e-15);
    EXPECT_NEAR(dv.norm(), 2.0 * wgs84::kRotationRate * std::sin(kPi / 4) * 500.0, 1e-12);
}

TEST(PositionUpdate, Trapezoid) {
    NavState x;
    x.v = Vec3(1, 0, 0);
    EXPECT_EQ(position_update(x, Vec3(1, 0, 0), 1.0), Vec3(1, 0, 0));
    x.v = Vec3::Zero();
    EXPECT_EQ(position_update(x, Vec3(2, 0, 0), 1.0), Vec3(1, 0, 0));
}

TEST(PositionUpdate, ConstantAccelerationIsExact) {
    // Trapezoidal position with exactly integrated velocity reproduces ½at².
    const LocalFrame f = no_earth();
    const double a = 0.7, dt = 0.01;
    std::vector<ImuSample> s;
    for (int k = 1; k <= 1000; ++k) s.push_back({k * dt, dt, Vec3::Zero(), Vec3(a * dt, 0, 0)});
    const NavState x = run(NavState{}, s, f);
    EXPECT_NEAR(x.p.x(), 0.5 * a * 100.0, 1e-9);
    EXPECT_NEAR(x.v.x(), a * 10.0, 1e-12);
}

TEST(InsStep, AllZeroIsFixedPoint) {
    Rng rng(35);
    const NavState x = random_nav(rng);
    NavState y = x;
    y.v = Vec3::Zero();
    const ImuSample s{0.005, 0.005, Vec3::Zero(), Vec3::Zero()};
    const NavState z = ins_step(y, s, s, {}, no_earth());
    EXPECT_EQ(z.p, y.p);
    EXPECT_EQ(z.v, y.v);
    EXPECT_LT((z.q.coeffs() - y.q.coeffs()).norm(), 1e-15);
}

TEST(InsStep, BiasMatchesPrecompensation) {
    Rng rng(36);
    const LocalFrame f = frame_at(30.0);
    const auto s = random_segment(rng, 0.0, 200, 0.005);
    const ImuBias b = random_bias(rng);
    const NavState x0 = random_nav(rng);
    const NavState a = run(x0, s, f, b);
    // The predecessor of the first sample is compensated too.
    NavState c = x0;
    ImuSample prev = compensate(zero_predecessor(s.front()), b);
    for (const auto& m : s) {
        const ImuSample cm = compensate(m, b);
        c = ins_step(c, prev, cm, {}, f);
        prev = cm;
    }
    EXPECT_LT((a.p - c.p).norm(), 1e-10);
    EXPECT_LT((a.v - c.v).norm(), 1e-10);
}

TEST(InsStep, StationaryForOneMinute) {
    TrajectorySpec spec;
    spec.origin = GeodeticPosition{30.0 * kDeg, 114.0 * kDeg, 0.0};
    spec.segments = {Segment::stationary(60.0)};
    const Trajectory traj(spec);
    const LocalFrame f(spec.origin);
    const auto imu = ideal_imu(traj, f, 200.0);
    const NavState x = run(traj.at(0).nav, imu, f);
    EXPECT_LT(x.p.norm(), 1e-3);
    EXPECT_LT(x.v.norm(), 1e-9);
    EXPECT_LT(attitude_error(x.q, traj.at(0).nav.q), 1e-10);
}

TEST(InsStep, CircleForHundredSeconds) {
    TrajectorySpec spec;
    spec.origin = GeodeticPosition{30.0 * kDeg, 114.0 * kDeg, 0.0};
    spec.segments = {Segment::stationary(1.0), Segment::straight(10.0, 10.0), Segment::turn(100.0, 0.1)};
    const Trajectory traj(spec);
    const LocalFrame f(spec.origin);
    const auto imu = ideal_imu(traj, f, 200.0);
    const NavState x = run(traj.at(0).nav, imu, f);
    EXPECT_LT((x.p - traj.at(traj.duration()).nav.p).norm(), 0.05);
}

TEST(InsStep, TimeReversalReturnsToStart) {
    // Replay the reversed, negated increments from the final state with the
    // velocity flipped. Without gravity or Earth rate the motion retraces
    // itself up to the algorithm's truncation error.
    Rng rng(37);
    const LocalFrame f = no_earth();
    const double dt = 0.005;
    const auto s = random_segment(rng, 0.0, 2000, dt, 0.3, 2.0);
    NavState x0;
    x0.q = random_quat(rng);
    x0.v = random_vec(rng, 5.0);
    NavState x = run(x0, s, f);

    std::vector<ImuSample> back;
    for (int k = static_cast<int>(s.size()) - 1; k >= 0; --k) {
        back.push_back({dt * (s.size() - k), dt, -s[k].dtheta, s[k].dvel});
    }
    // Reversing time flips the rate but not the specific force; the velocity
    // state flips sign, which is why dvel is kept and v negated.
    x.v = -x.v;
    const NavState y = run(x, back, f);
    EXPECT_LT((y.p - x0.p).norm(), 1e-3);
    EXPECT_LT(attitude_error(y.q, x0.q), 1e-5);
}

TEST(SplitSample, PreservesTotals) {
    const ImuSample s{1.0, 0.01, Vec3(1e-3, 2e-3, 3e-3), Vec3(0.1, 0.2, 0.3)};
    const auto [a, b] = split_sample(s, 0.996);
    EXPECT_NEAR(a.dt + b.dt, s.dt, 1e-15);
    EXPECT_LT((a.dtheta + b.dtheta - s.dtheta).norm(), 1e-18);
    EXPECT_LT((a.dvel + b.dvel - s.dvel).norm(), 1e-16);
    EXPECT_DOUBLE_EQ(a.t, 0.996);
    EXPECT_THROW(split_sample(s, 1.0), std::invalid_argument);
    EXPECT_THROW(split_sample(s, 0.99), std::invalid_argument);
}
