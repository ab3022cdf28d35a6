#pragma once

// Shared generators for the tests. Everything is seeded so failures replay.

#include "fgins/attitude.hpp"
#include "fgins/earth.hpp"
#include "fgins/factors.hpp"
#include "fgins/imu_noise.hpp"
#include "fgins/gnss_simulator.hpp"
#include "fgins/imu_simulator.hpp"
#include "fgins/mechanization.hpp"
#include "fgins/scenario.hpp"
#include "fgins/sliding_window.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

namespace fgins::testing {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDeg = kPi / 180.0;

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline Vec3 random_vec(Rng& rng, double scale) {
    return Vec3(uniform(rng, -scale, scale), uniform(rng, -scale, scale), uniform(rng, -scale, scale));
}

inline Quaternion random_quat(Rng& rng) {
    std::normal_distribution<double> n;
    return Quaternion(n(rng), n(rng), n(rng), n(rng)).normalized();
}

inline LocalFrame frame_at(double lat_deg, double h = 0.0) {
    return LocalFrame(GeodeticPosition{lat_deg * kDeg, 114.0 * kDeg, h});
}

/// A wandering IMU segment: rates follow a random walk around random means,
/// so consecutive increments differ and coning/sculling terms are exercised.
inline std::vector<ImuSample> random_segment(Rng& rng, double t0, int n, double dt, double max_rate = 0.5,
                                             double max_force = 12.0) {
    std::vector<ImuSample> out;
    Vec3 w = random_vec(rng, max_rate);
    Vec3 f = random_vec(rng, max_force);
    for (int k = 1; k <= n; ++k) {
        w += random_vec(rng, 0.05 * max_rate);
        f += random_vec(rng, 0.05 * max_force);
        out.push_back({t0 + k * dt, dt, w * dt, f * dt});
    }
    return out;
}

inline NavState random_nav(Rng& rng) {
    NavState s;
    s.p = random_vec(rng, 100.0);
    s.v = random_vec(rng, 15.0);
    s.q = random_quat(rng);
    return s;
}

inline ImuBias random_bias(Rng& rng, double bg = 1e-4, double ba = 1e-2) {
    return {random_vec(rng, bg), random_vec(rng, ba)};
}

inline StateNode random_node(Rng& rng, double t = 0.0) { return {t, random_nav(rng), random_bias(rng)}; }

/// Mid-grade model used where the exact numbers do not matter.
inline ImuNoiseModel nominal_noise() { return from_datasheet({0.15, 0.037, 2.0, 50.0, 1.0, 1.0}); }

inline double rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const double scale = std::max(b.norm(), 1e-12);
    return (a - b).norm() / scale;
}

/// A short drive with IMU at 200 Hz and GNSS at 1 Hz, nodes on whole seconds.
struct SyntheticRun {
    Trajectory traj;
    LocalFrame frame;
    std::vector<ImuSample> imu;
    std::vector<GnssFactor> gnss;
    ImuBias bias0;
};

/// Perfect sensors when noise is null.
inline SyntheticRun synthetic_run(double duration, const ImuNoiseModel* noise = nullptr, std::uint64_t seed = 7) {
    const TrajectorySpec spec = drive_scenario(duration, 5.0);
    SyntheticRun r{Trajectory(spec), LocalFrame(spec.origin), {}, {}, {}};
    r.imu = ideal_imu(r.traj, r.frame, spec.imu_rate);
    GnssNoise gn;
    if (noise) {
        ImuErrorTrace trace;
        r.imu = corrupt_imu(r.imu, *noise, seed, &trace);
        r.bias0 = trace.bias.front();
    } else {
        gn.sd = Vec3::Constant(1e-3);
    }
    r.gnss = gen_gnss(r.traj, Vec3::Zero(), gn, 1.0, std::nullopt, seed ^ 0x5bd1e995ULL);
    if (!noise) {
        for (auto& f : r.gnss) f.pos_w = r.traj.at(f.t).nav.p;
    }
    return r;
}

inline Mat15 initial_cov(const ImuNoiseModel& n) {
    Eigen::Matrix<double, 15, 1> sd;
    sd << Vec3::Constant(0.01), Vec3::Constant(1e-3), Vec3::Constant(0.01), Vec3::Constant(n.steady_gyro_bias()),
        Vec3::Constant(n.steady_accel_bias());
    return sd.cwiseProduct(sd).asDiagonal();
}

/// Runs a window over the first `seconds` of a synthetic run, starting from
/// truth, and returns it.
inline SlidingWindow run_window(const SyntheticRun& r, const WindowConfig& cfg, const ImuNoiseModel& model,
                                int seconds, EarthModel mode = EarthModel::Refined) {
    SlidingWindow w(cfg);
    w.initialize({0.0, r.traj.at(0.0).nav, r.bias0}, initial_cov(model));
    const int per = static_cast<int>(std::lround(r.traj.spec().imu_rate));
    for (int k = 0; k < seconds; ++k) {
        const StateNode& x = w.latest();
        auto block = std::make_shared<Preintegration>(x.bias, model, x.nav.q, r.frame, mode, double(k));
        for (int i = k * per; i < (k + 1) * per; ++i) {
            block->add(i == 0 ? zero_predecessor(r.imu.front()) : r.imu[i - 1], r.imu[i]);
        }
        w.push(block, r.gnss.at(k + 1));
    }
    return w;
}

}  // namespace fgins::testing
