#pragma once

// Analytic ground-truth trajectories in the w-frame. The vehicle stays level
// with yaw following the direction of travel.

#include "fgins/attitude.hpp"
#include "fgins/earth.hpp"
#include "fgins/mechanization.hpp"

#include <vector>

namespace fgins {

enum class SegmentKind { Static, Straight, Turn, FigureEight };

struct Segment {
    SegmentKind kind{SegmentKind::Static};
    double duration{1.0};
    /// Straight: speed at the end (smoothstep profile from the entry speed).
    double speed_end{0.0};
    /// Turn: constant yaw rate, rad/s, at the entry speed.
    double yaw_rate{0.0};
    /// FigureEight: lobe half-length. The curve x = A sin θ, y = (A/2) sin 2θ
    /// is traversed once from rest to rest; it must start at rest.
    double amplitude{0.0};

    static Segment stationary(double duration);
    static Segment straight(double duration, double speed_end);
    static Segment turn(double duration, double yaw_rate);
    static Segment figure_eight(double duration, double amplitude);
};

struct TrajectorySpec {
    std::vector<Segment> segments;
    GeodeticPosition origin;
    double initial_heading{0.0};  // rad from north
    double imu_rate{200.0};
    double gnss_rate{1.0};

    /// Throws std::invalid_argument on non-positive durations, a figure-eight
    /// or static segment entered while moving, or imu_rate < 20 * gnss_rate.
    void validate() const;
};

struct TruthPoint {
    double t{0.0};
    NavState nav;
    Vec3 accel{Vec3::Zero()};       // w-frame, m/s^2
    Vec3 omega_wb_b{Vec3::Zero()};  // rad/s
};

class Trajectory {
public:
    explicit Trajectory(TrajectorySpec spec);

    /// Clamped to [0, duration()].
    TruthPoint at(double t) const;
    double duration() const { return starts_.back(); }
    /// Segment start times plus the end time.
    const std::vector<double>& breakpoints() const { return starts_; }
    const TrajectorySpec& spec() const { return spec_; }

private:
    struct Entry {
        Vec3 p;
        double speed;
        double heading;
    };

    TruthPoint evaluate(std::size_t seg, double tau) const;

    TrajectorySpec spec_;
    std::vector<double> starts_;
    std::vector<Entry> entries_;
};

/// Truth sampled at t = k / rate for k = 0 .. floor(duration * rate).
std::vector<TruthPoint> synth_truth(const Trajectory& traj, double rate);

}  // namespace fgins
