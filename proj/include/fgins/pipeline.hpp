#pragma once

// Runs one processing mode over a dataset and scores position drift during
// simulated GNSS outages.
//
//   M0  error-state EKF
//   M1  sliding-window optimizer, Earth-rotation-aware preintegration
//   M2  sliding-window optimizer, preintegration without Earth rotation
//
// Every outage pass replays the full dataset with its own schedule; the
// report pools the outages of all passes.

#include "fgins/config.hpp"
#include "fgins/dataset.hpp"
#include "fgins/factor_graph.hpp"
#include "fgins/gnss_simulator.hpp"
#include "fgins/imu_noise.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fgins {

enum class Mode { M0, M1, M2 };

/// Accepts "M0", "M1", "M2" (case-insensitive). Throws std::invalid_argument.
Mode parse_mode(const std::string& text);
std::string to_string(Mode mode);

struct RunConfig {
    Mode mode{Mode::M1};
    std::filesystem::path imu_file;
    std::filesystem::path gnss_file;
    std::filesystem::path truth_file;
    /// w-frame origin; the first GNSS fix when unset.
    std::optional<GeodeticPosition> origin;
    ImuNoiseModel noise;
    int window_size{20};
    int max_iterations{20};
    OutageSchedule outage;
    /// Outage start offsets, one replay each. Empty means a single replay
    /// with GNSS throughout.
    std::vector<double> outage_passes{500.0, 575.0};
    Vec3 lever_arm{Vec3::Zero()};
    std::uint64_t seed{1};
    /// Leading stretch of IMU data averaged to level the initial attitude;
    /// zero starts level.
    double level_duration{5.0};
    /// Speed that must be reached before the initial heading is taken from
    /// GNSS velocity.
    double init_speed{2.0};
    Execution exec{Execution::Serial};

    /// Throws std::invalid_argument on a bad window, schedule or noise model,
    /// and when a configured input file is missing.
    void validate() const;
};

/// Reads RunConfig fields from a configuration. Recognized keys are listed
/// in the README.
RunConfig run_config_from(const Config& cfg);
/// Noise model of the configured grade with any explicit overrides applied.
ImuNoiseModel noise_from(const Config& cfg);

struct EpochEstimate {
    double t{0.0};
    NavState nav;
    ImuBias bias;
    /// Estimate minus truth in the w-frame (NED), m.
    Vec3 error{Vec3::Constant(std::numeric_limits<double>::quiet_NaN())};
    bool gnss_used{false};
    /// Index into OutageReport::outages while inside an outage, else -1.
    int outage{-1};
};

struct OutageDrift {
    int pass{0};
    double start{0.0};
    double max_horizontal{0.0};
    double max_vertical{0.0};
};

struct OutageReport {
    std::vector<OutageDrift> outages;
    double rmse_horizontal{0.0};
    double rmse_vertical{0.0};
    int count() const { return static_cast<int>(outages.size()); }
    /// Set when an estimator diverged; the statistics then cover only the
    /// epochs processed before the failure.
    bool partial{false};
    std::string note;
};

struct PassResult {
    double outage_init{0.0};
    std::vector<EpochEstimate> epochs;
};

struct RunStats {
    int solves{0};
    int iterations{0};
    int solver_failures{0};
    bool costs_monotone{true};
    int marginalizations{0};
    int regularizations{0};
    int dropped_gnss{0};
    int skipped_updates{0};
};

struct RunResult {
    Mode mode{Mode::M1};
    std::vector<PassResult> passes;
    OutageReport report;
    RunStats stats;
};

struct InitialState {
    StateNode node;
    Mat15 cov;  // node tangent order
    std::size_t gnss_index{0};
};

/// Levels the attitude from the leading IMU data and takes position,
/// velocity and heading at the first fix where the GNSS speed exceeds
/// init_speed. Throws std::runtime_error if the vehicle never moves.
InitialState initialize(const RunConfig& cfg, const std::vector<ImuSample>& imu,
                        const std::vector<GnssFactor>& gnss);

RunResult run_mode(const RunConfig& cfg, const Dataset& data);
/// Ingests the configured files first.
RunResult run_mode(const RunConfig& cfg);

/// Pools the per-outage maxima of the given passes.
OutageReport score_outages(std::vector<PassResult>& passes, const OutageSchedule& schedule, double duration);

}  // namespace fgins
