#include "fgins/scenario.hpp"

#include "fgins/pipeline.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fgins {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;
}  // namespace

GeodeticPosition default_origin() { return {30.5 * kDeg, 114.5 * kDeg, 20.0}; }

TrajectorySpec drive_scenario(double duration, double static_time, const GeodeticPosition& origin, double heading) {
    if (!(duration > static_time + 20.0)) throw std::invalid_argument("drive_scenario: duration too short");
    TrajectorySpec spec;
    spec.origin = origin;
    spec.initial_heading = heading;

    // Each loop turns 360° in total, so the vehicle keeps circling the same
    // block instead of wandering off.
    const std::vector<Segment> loop = {
        Segment::straight(45.0, 12.0), Segment::turn(15.0, kPi / 30.0),   Segment::straight(30.0, 8.0),
        Segment::turn(10.0, kPi / 20.0), Segment::straight(40.0, 12.0), Segment::turn(15.0, kPi / 30.0),
        Segment::straight(25.0, 10.0), Segment::turn(12.0, kPi / 24.0),
    };

    double t = 0.0;
    auto add = [&](Segment s) {
        s.duration = std::min(s.duration, duration - t);
        t += s.duration;
        spec.segments.push_back(s);
    };
    if (static_time > 0.0) add(Segment::stationary(static_time));
    add(Segment::straight(20.0, 10.0));
    for (std::size_t i = 0; duration - t > 1e-9; ++i) add(loop[i % loop.size()]);
    return spec;
}

TrajectorySpec figure_eight_scenario(double duration, double amplitude, const GeodeticPosition& origin,
                                     double heading) {
    TrajectorySpec spec;
    spec.origin = origin;
    spec.initial_heading = heading;
    spec.segments = {Segment::figure_eight(duration, amplitude)};
    return spec;
}

SimulationConfig simulation_from(const Config& cfg) {
    SimulationConfig sim;
    GeodeticPosition origin = default_origin();
    origin.lat = cfg.get_double("lat0", origin.lat / kDeg) * kDeg;
    origin.lon = cfg.get_double("lon0", origin.lon / kDeg) * kDeg;
    origin.h = cfg.get_double("h0", origin.h);
    const double heading = cfg.get_double("heading", 0.0) * kDeg;

    const std::string scenario = cfg.get_string("scenario", "drive");
    if (scenario == "drive") {
        sim.trajectory = drive_scenario(cfg.get_double("duration", 1500.0), cfg.get_double("static_time", 30.0),
                                        origin, heading);
    } else if (scenario == "figure_eight") {
        sim.trajectory = figure_eight_scenario(cfg.get_double("duration", 100.0), cfg.get_double("amplitude", 0.5),
                                               origin, heading);
    } else {
        throw ConfigError(fmt::format("unknown scenario '{}' (expected drive or figure_eight)", scenario));
    }
    sim.trajectory.imu_rate = cfg.get_double("imu_rate", 200.0);
    sim.trajectory.gnss_rate = cfg.get_double("gnss_rate", 1.0);
    sim.truth_rate = cfg.get_double("truth_rate", 10.0);
    sim.noise = cfg.get_bool("ideal", false) ? ImuNoiseModel{} : noise_from(cfg);
    sim.gnss_noise.sd = Vec3(cfg.get_double("gnss_sd_h", 0.02), cfg.get_double("gnss_sd_h", 0.02),
                             cfg.get_double("gnss_sd_v", 0.03));
    const auto lever = cfg.get_doubles("lever_arm", {0.0, 0.0, 0.0});
    if (lever.size() != 3) throw ConfigError("lever_arm needs three comma-separated values");
    sim.lever_arm = Vec3(lever[0], lever[1], lever[2]);
    sim.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
    return sim;
}

Dataset simulate(const SimulationConfig& sim, ImuErrorTrace* trace) {
    sim.trajectory.validate();
    const Trajectory traj(sim.trajectory);
    const LocalFrame frame(sim.trajectory.origin);

    Dataset out;
    const auto ideal = ideal_imu(traj, frame, sim.trajectory.imu_rate);
    out.imu = corrupt_imu(ideal, sim.noise, sim.seed, trace);

    // Separate stream so the GNSS noise does not depend on the IMU draws.
    const std::uint64_t gnss_seed = sim.seed ^ 0x9e3779b97f4a7c15ULL;
    for (const auto& f : gen_gnss(traj, sim.lever_arm, sim.gnss_noise, sim.trajectory.gnss_rate, std::nullopt,
                                  gnss_seed)) {
        out.gnss.push_back(to_record(f, frame));
    }
    for (const auto& tp : synth_truth(traj, sim.truth_rate)) out.truth.push_back(to_record(tp, frame));
    return out;
}

void write_dataset(const std::filesystem::path& dir, const Dataset& data) {
    std::filesystem::create_directories(dir);
    write_imu(dir / "imu.txt", data.imu);
    write_gnss(dir / "gnss.txt", data.gnss);
    write_truth(dir / "truth.txt", data.truth);
}

}  // namespace fgins
