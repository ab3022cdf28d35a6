#include "fgins/imu_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fgins {

Vec3 ideal_specific_force(const TruthPoint& tp, const LocalFrame& frame) {
    const Mat3 c_wb = quat_to_dcm(tp.nav.q).transpose();
    return c_wb * (tp.accel - frame.gravity() + 2.0 * frame.earth_rate().cross(tp.nav.v));
}

Vec3 ideal_angular_rate(const TruthPoint& tp, const LocalFrame& frame) {
    const Mat3 c_wb = quat_to_dcm(tp.nav.q).transpose();
    return tp.omega_wb_b + c_wb * frame.earth_rate();
}

std::vector<double> imu_timestamps(double duration, double rate) {
    const auto n = static_cast<long>(std::floor(duration * rate + 1e-9));
    std::vector<double> t(static_cast<std::size_t>(n));
    for (long k = 1; k <= n; ++k) t[static_cast<std::size_t>(k - 1)] = static_cast<double>(k) / rate;
    return t;
}

std::vector<ImuSample> ideal_imu(const Trajectory& traj, const LocalFrame& frame, double rate, int substeps) {
    static const double kNode = std::sqrt(3.0 / 5.0);
    static const double kW[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    static const double kX[3] = {-kNode, 0.0, kNode};

    const std::vector<double> ts = imu_timestamps(traj.duration(), rate);
    const auto& bps = traj.breakpoints();
    std::vector<ImuSample> out;
    out.reserve(ts.size());

    auto integrate = [&](double a, double b, Vec3& dth, Vec3& dv) {
        const double h = (b - a) / substeps;
        for (int s = 0; s < substeps; ++s) {
            const double mid = a + (s + 0.5) * h;
            for (int q = 0; q < 3; ++q) {
                const TruthPoint tp = traj.at(mid + 0.5 * h * kX[q]);
                dth += 0.5 * h * kW[q] * ideal_angular_rate(tp, frame);
                dv += 0.5 * h * kW[q] * ideal_specific_force(tp, frame);
            }
        }
    };

    for (std::size_t k = 0; k < ts.size(); ++k) {
        ImuSample smp;
        smp.t = ts[k];
        smp.dt = k == 0 ? (ts.size() > 1 ? ts[1] - ts[0] : ts[0]) : ts[k] - ts[k - 1];
        const double a = smp.t - smp.dt;
        double lo = a;
        for (double bp : bps) {
            if (bp > a && bp < smp.t) {
                integrate(lo, bp, smp.dtheta, smp.dvel);
                lo = bp;
            }
        }
        integrate(lo, smp.t, smp.dtheta, smp.dvel);
        out.push_back(smp);
    }
    return out;
}

std::vector<ImuSample> corrupt_imu(const std::vector<ImuSample>& samples, const ImuNoiseModel& noise,
                                   std::uint64_t seed, ImuErrorTrace* trace, const ImuBias* initial_bias) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    auto draw = [&]() { return Vec3(n01(rng), n01(rng), n01(rng)); };

    ImuBias b;
    if (initial_bias) {
        b = *initial_bias;
    } else {
        b.bg = noise.steady_gyro_bias() * draw();
        b.ba = noise.steady_accel_bias() * draw();
    }
    std::vector<ImuSample> out;
    out.reserve(samples.size());
    if (trace) trace->bias.clear();
    for (const auto& s : samples) {
        const double dt = s.dt;
        const Vec3 ng = draw(), na = draw(), eg = draw(), ea = draw();
        const double fg = std::exp(-dt / noise.tau_bg), fa = std::exp(-dt / noise.tau_ba);
        b.bg = fg * b.bg + noise.sigma_bg * std::sqrt(0.5 * noise.tau_bg * (1.0 - fg * fg)) * eg;
        b.ba = fa * b.ba + noise.sigma_ba * std::sqrt(0.5 * noise.tau_ba * (1.0 - fa * fa)) * ea;
        ImuSample c = s;
        c.dtheta += (b.bg + noise.sigma_g / std::sqrt(dt) * ng) * dt;
        c.dvel += (b.ba + noise.sigma_a / std::sqrt(dt) * na) * dt;
        out.push_back(c);
        if (trace) trace->bias.push_back(b);
    }
    return out;
}

}  // namespace fgins
