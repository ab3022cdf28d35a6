#pragma once

#include "fgins/earth.hpp"
#include "fgins/imu_noise.hpp"
#include "fgins/mechanization.hpp"
#include "fgins/trajectory.hpp"

#include <cstdint>
#include <vector>

namespace fgins {

/// Specific force f^b = C_w^b (a - g + 2[w_ie×] v) at a truth point.
Vec3 ideal_specific_force(const TruthPoint& tp, const LocalFrame& frame);
/// Gyro rate w_ib^b = w_wb^b + C_w^b w_ie.
Vec3 ideal_angular_rate(const TruthPoint& tp, const LocalFrame& frame);

/// Sample end times t_k = k / rate, k = 1 .. floor(duration * rate). Each
/// sample's dt is the spacing to the preceding timestamp; the first sample
/// borrows the spacing of the second, as a reader of the file would.
std::vector<double> imu_timestamps(double duration, double rate);

/// Increments integrated over each interval with `substeps` three-point
/// Gauss–Legendre panels, split at segment breakpoints.
std::vector<ImuSample> ideal_imu(const Trajectory& traj, const LocalFrame& frame, double rate, int substeps = 10);

struct ImuErrorTrace {
    std::vector<ImuBias> bias;  // bias applied to each sample
};

/// Adds white noise (rate stddev sigma / sqrt(dt)) and exact discrete
/// Gauss–Markov biases. The initial bias is drawn from the steady-state
/// distribution unless given.
std::vector<ImuSample> corrupt_imu(const std::vector<ImuSample>& samples, const ImuNoiseModel& noise,
                                   std::uint64_t seed, ImuErrorTrace* trace = nullptr,
                                   const ImuBias* initial_bias = nullptr);

}  // namespace fgins
