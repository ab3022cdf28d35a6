#include "fgins/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fgins {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec3 heading_dir(double psi) { return {std::cos(psi), std::sin(psi), 0.0}; }

}  // namespace

Segment Segment::stationary(double duration) { return {SegmentKind::Static, duration, 0.0, 0.0, 0.0}; }
Segment Segment::straight(double duration, double speed_end) {
    return {SegmentKind::Straight, duration, speed_end, 0.0, 0.0};
}
Segment Segment::turn(double duration, double yaw_rate) { return {SegmentKind::Turn, duration, 0.0, yaw_rate, 0.0}; }
Segment Segment::figure_eight(double duration, double amplitude) {
    return {SegmentKind::FigureEight, duration, 0.0, 0.0, amplitude};
}

void TrajectorySpec::validate() const {
    if (segments.empty()) throw std::invalid_argument("trajectory has no segments");
    if (!(imu_rate >= 20.0 * gnss_rate) || !(gnss_rate > 0.0)) {
        throw std::invalid_argument("imu_rate must be at least 20 times gnss_rate");
    }
    double speed = 0.0;
    for (const auto& s : segments) {
        if (!(s.duration > 0.0)) throw std::invalid_argument("segment duration must be positive");
        switch (s.kind) {
            case SegmentKind::Static:
            case SegmentKind::FigureEight:
                if (speed != 0.0) throw std::invalid_argument("static and figure-eight segments must start at rest");
                break;
            case SegmentKind::Straight:
                if (s.speed_end < 0.0) throw std::invalid_argument("negative speed");
                speed = s.speed_end;
                break;
            case SegmentKind::Turn:
                break;
        }
    }
}

Trajectory::Trajectory(TrajectorySpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    starts_.push_back(0.0);
    Entry e{Vec3::Zero(), 0.0, spec_.initial_heading};
    for (std::size_t k = 0; k < spec_.segments.size(); ++k) {
        entries_.push_back(e);
        const double d = spec_.segments[k].duration;
        starts_.push_back(starts_.back() + d);
        const TruthPoint end = evaluate(k, d);
        e.p = end.nav.p;
        e.speed = end.nav.v.norm();
        if (spec_.segments[k].kind == SegmentKind::FigureEight) {
            e.speed = 0.0;
            e.p = entries_[k].p;  // closed curve; avoid carrying round-off
        }
        e.heading = dcm_to_euler(quat_to_dcm(end.nav.q))[2];
    }
}

TruthPoint Trajectory::at(double t) const {
    t = std::clamp(t, 0.0, duration());
    auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
    std::size_t seg = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - starts_.begin() - 1, 0));
    seg = std::min(seg, spec_.segments.size() - 1);
    TruthPoint tp = evaluate(seg, t - starts_[seg]);
    tp.t = t;
    return tp;
}

TruthPoint Trajectory::evaluate(std::size_t seg, double tau) const {
    const Segment& s = spec_.segments[seg];
    const Entry& e = entries_[seg];
    TruthPoint out;
    out.t = starts_[seg] + tau;
    double psi = e.heading;
    double psi_dot = 0.0;
    switch (s.kind) {
        case SegmentKind::Static:
            out.nav.p = e.p;
            break;
        case SegmentKind::Straight: {
            const double T = s.duration;
            const double u = tau / T;
            const double ds = s.speed_end - e.speed;
            const double speed = e.speed + ds * (3.0 * u * u - 2.0 * u * u * u);
            const double dist = e.speed * tau + ds * T * (u * u * u - 0.5 * u * u * u * u);
            const double along = ds / T * (6.0 * u - 6.0 * u * u);
            const Vec3 h = heading_dir(psi);
            out.nav.p = e.p + dist * h;
            out.nav.v = speed * h;
            out.accel = along * h;
            break;
        }
        case SegmentKind::Turn: {
            const double r = s.yaw_rate;
            psi = e.heading + r * tau;
            psi_dot = r;
            if (std::abs(r) < 1e-12) {
                out.nav.p = e.p + e.speed * tau * heading_dir(psi);
            } else {
                out.nav.p = e.p + (e.speed / r) * Vec3(std::sin(psi) - std::sin(e.heading),
                                                       -(std::cos(psi) - std::cos(e.heading)), 0.0);
            }
            out.nav.v = e.speed * heading_dir(psi);
            out.accel = e.speed * r * Vec3(-std::sin(psi), std::cos(psi), 0.0);
            break;
        }
        case SegmentKind::FigureEight: {
            const double T = s.duration;
            const double A = s.amplitude;
            const double w = kTwoPi / T;
            const double th = w * tau - std::sin(w * tau);
            const double th_d = w * (1.0 - std::cos(w * tau));
            const double th_dd = w * w * std::sin(w * tau);
            const double beta = e.heading - std::numbers::pi / 4.0;
            const double cb = std::cos(beta), sb = std::sin(beta);
            auto rot = [&](double x, double y) { return Vec3(cb * x - sb * y, sb * x + cb * y, 0.0); };

            const double x = A * std::sin(th), y = 0.5 * A * std::sin(2.0 * th);
            const double xt = A * std::cos(th), yt = A * std::cos(2.0 * th);
            const double xtt = -A * std::sin(th), ytt = -2.0 * A * std::sin(2.0 * th);
            out.nav.p = e.p + rot(x, y);
            out.nav.v = rot(xt * th_d, yt * th_d);
            out.accel = rot(xtt * th_d * th_d + xt * th_dd, ytt * th_d * th_d + yt * th_dd);

            // Heading follows the curve tangent in θ, which never vanishes.
            const double X = std::cos(th), Y = std::cos(2.0 * th);
            const double Xp = -std::sin(th), Yp = -2.0 * std::sin(2.0 * th);
            psi = beta + std::atan2(Y, X);
            psi_dot = (X * Yp - Y * Xp) / (X * X + Y * Y) * th_d;
            break;
        }
    }
    out.nav.q = euler_to_quat(Vec3(0.0, 0.0, psi));
    out.omega_wb_b = Vec3(0.0, 0.0, psi_dot);
    return out;
}

std::vector<TruthPoint> synth_truth(const Trajectory& traj, double rate) {
    const auto n = static_cast<long>(std::floor(traj.duration() * rate + 1e-9));
    std::vector<TruthPoint> out;
    out.reserve(static_cast<std::size_t>(n + 1));
    for (long k = 0; k <= n; ++k) out.push_back(traj.at(static_cast<double>(k) / rate));
    return out;
}

}  // namespace fgins
