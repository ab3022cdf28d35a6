#include "fgins/gnss_simulator.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fgins {

void OutageSchedule::validate() const {
    if (!(outage_len > 0.0 && outage_len < interval)) {
        throw std::invalid_argument("outage schedule requires 0 < outage_len < interval");
    }
}

std::vector<double> OutageSchedule::starts(double duration) const {
    validate();
    std::vector<double> out;
    for (int k = 0;; ++k) {
        const double s = init_time + k * interval;
        if (s + outage_len > duration + 1e-9) break;
        out.push_back(s);
    }
    return out;
}

bool OutageSchedule::blocked(double t, double duration) const {
    for (double s : starts(duration)) {
        if (t >= s - 1e-9 && t < s + outage_len - 1e-9) return true;
    }
    return false;
}

std::vector<GnssFactor> gen_gnss(const Trajectory& traj, const Vec3& lever_arm, const GnssNoise& noise, double rate,
                                 const std::optional<OutageSchedule>& schedule, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    const double duration = traj.duration();
    const auto n = static_cast<long>(std::floor(duration * rate + 1e-9));
    const Mat3 cov = noise.sd.cwiseProduct(noise.sd).asDiagonal();
    std::vector<GnssFactor> out;
    for (long k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) / rate;
        const TruthPoint tp = traj.at(t);
        const Vec3 e(n01(rng), n01(rng), n01(rng));
        if (schedule && schedule->blocked(t, duration)) continue;
        GnssFactor f;
        f.t = t;
        f.pos_w = tp.nav.p + quat_to_dcm(tp.nav.q) * lever_arm + noise.sd.cwiseProduct(e);
        f.cov = cov;
        f.lever_arm = lever_arm;
        out.push_back(f);
    }
    return out;
}

}  // namespace fgins
