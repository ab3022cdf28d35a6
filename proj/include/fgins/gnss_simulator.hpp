#pragma once

#include "fgins/factors.hpp"
#include "fgins/trajectory.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace fgins {

/// Outages [init + k·interval, init + k·interval + length) for every k whose
/// outage ends no later than the run duration.
struct OutageSchedule {
    double init_time{500.0};
    double outage_len{60.0};
    double interval{150.0};

    /// Throws std::invalid_argument unless 0 < outage_len < interval.
    void validate() const;
    std::vector<double> starts(double duration) const;
    bool blocked(double t, double duration) const;
};

struct GnssNoise {
    Vec3 sd{0.02, 0.02, 0.03};  // NED, m
};

/// Fixes at t = k / rate (k = 0 ..) of the antenna at p + C l plus Gaussian
/// NED noise; epochs inside scheduled outages are omitted.
std::vector<GnssFactor> gen_gnss(const Trajectory& traj, const Vec3& lever_arm, const GnssNoise& noise, double rate,
                                 const std::optional<OutageSchedule>& schedule, std::uint64_t seed);

}  // namespace fgins
