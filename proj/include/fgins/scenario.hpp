#pragma once

// Canned trajectories and the end-to-end synthetic dataset generator.

#include "fgins/config.hpp"
#include "fgins/dataset.hpp"
#include "fgins/gnss_simulator.hpp"
#include "fgins/imu_noise.hpp"
#include "fgins/imu_simulator.hpp"
#include "fgins/trajectory.hpp"

#include <cstdint>
#include <string>

namespace fgins {

/// Default origin of the synthetic scenarios (30.5 N, 114.5 E, 20 m).
GeodeticPosition default_origin();

/// Land-vehicle drive: a static start, then repeated loops of straights with
/// speed changes and 90° left turns, cut to the requested duration. Speeds
/// stay between 8 and 12 m/s and the path stays within a few hundred meters
/// of its loop.
TrajectorySpec drive_scenario(double duration = 1500.0, double static_time = 30.0,
                              const GeodeticPosition& origin = default_origin(), double heading = 0.0);

/// A single figure-eight from rest to rest.
TrajectorySpec figure_eight_scenario(double duration = 100.0, double amplitude = 0.5,
                                     const GeodeticPosition& origin = default_origin(), double heading = 0.0);

struct SimulationConfig {
    TrajectorySpec trajectory;
    ImuNoiseModel noise;
    GnssNoise gnss_noise;
    Vec3 lever_arm{Vec3::Zero()};
    double truth_rate{10.0};
    std::uint64_t seed{1};
};

/// Reads scenario, duration, grade/noise overrides, rates, GNSS noise, lever
/// arm and seed from a configuration.
SimulationConfig simulation_from(const Config& cfg);

/// Ideal IMU corrupted with the configured noise, GNSS at every epoch (outages
/// are applied when the data are processed) and truth.
Dataset simulate(const SimulationConfig& sim, ImuErrorTrace* trace = nullptr);

/// Writes imu.txt, gnss.txt and truth.txt into dir.
void write_dataset(const std::filesystem::path& dir, const Dataset& data);

}  // namespace fgins
