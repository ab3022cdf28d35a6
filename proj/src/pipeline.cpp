#include "fgins/pipeline.hpp"

#include "fgins/ekf.hpp"
#include "fgins/sliding_window.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace fgins {

Mode parse_mode(const std::string& text) {
    std::string s = text;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    if (s == "M0") return Mode::M0;
    if (s == "M1") return Mode::M1;
    if (s == "M2") return Mode::M2;
    throw std::invalid_argument(fmt::format("unknown mode '{}' (expected M0, M1 or M2)", text));
}

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::M0: return "M0";
        case Mode::M1: return "M1";
        case Mode::M2: return "M2";
    }
    return "?";
}

void RunConfig::validate() const {
    if (window_size < 2) throw std::invalid_argument("window_size must be at least 2");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
    if (!outage_passes.empty()) outage.validate();
    noise.validate();
    if (level_duration < 0.0) throw std::invalid_argument("level_duration must be non-negative");
    if (!(init_speed > 0.0)) throw std::invalid_argument("init_speed must be positive");
    for (const auto& p : {imu_file, gnss_file, truth_file}) {
        if (!p.empty() && !std::filesystem::exists(p)) {
            throw std::invalid_argument(fmt::format("input file '{}' does not exist", p.string()));
        }
    }
}

ImuNoiseModel noise_from(const Config& cfg) {
    DatasheetNoise d = grade_preset(cfg.get_string("grade", "adis16465"));
    d.arw_deg_rt_h = cfg.get_double("arw", d.arw_deg_rt_h);
    d.vrw_m_s_rt_h = cfg.get_double("vrw", d.vrw_m_s_rt_h);
    d.gyro_bias_deg_h = cfg.get_double("gyro_bias_instability", d.gyro_bias_deg_h);
    d.accel_bias_mgal = cfg.get_double("accel_bias_instability", d.accel_bias_mgal);
    d.tau_g_h = cfg.get_double("tau_g", d.tau_g_h);
    d.tau_a_h = cfg.get_double("tau_a", d.tau_a_h);
    return from_datasheet(d);
}

RunConfig run_config_from(const Config& cfg) {
    RunConfig rc;
    rc.mode = parse_mode(cfg.get_string("mode", "M1"));
    rc.imu_file = cfg.get_string("imu_file", "");
    rc.gnss_file = cfg.get_string("gnss_file", "");
    rc.truth_file = cfg.get_string("truth_file", "");
    if (cfg.has("lat0") || cfg.has("lon0") || cfg.has("h0")) {
        constexpr double d2r = std::numbers::pi / 180.0;
        rc.origin = GeodeticPosition{cfg.get_double("lat0", 0.0) * d2r, cfg.get_double("lon0", 0.0) * d2r,
                                     cfg.get_double("h0", 0.0)};
    }
    rc.noise = noise_from(cfg);
    rc.window_size = static_cast<int>(cfg.get_int("window_size", rc.window_size));
    rc.max_iterations = static_cast<int>(cfg.get_int("max_iterations", rc.max_iterations));
    rc.outage.init_time = cfg.get_double("outage_init", rc.outage.init_time);
    rc.outage.outage_len = cfg.get_double("outage_len", rc.outage.outage_len);
    rc.outage.interval = cfg.get_double("outage_interval", rc.outage.interval);
    rc.outage_passes = cfg.get_doubles("outage_passes", rc.outage_passes);
    const auto lever = cfg.get_doubles("lever_arm", {0.0, 0.0, 0.0});
    if (lever.size() != 3) throw ConfigError("lever_arm needs three comma-separated values");
    rc.lever_arm = Vec3(lever[0], lever[1], lever[2]);
    rc.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
    rc.level_duration = cfg.get_double("level_duration", rc.level_duration);
    rc.init_speed = cfg.get_double("init_speed", rc.init_speed);
    rc.exec = cfg.get_bool("parallel", false) ? Execution::Parallel : Execution::Serial;
    return rc;
}

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
// Time tolerance for matching epochs to sample boundaries.
constexpr double kTimeEps = 1e-6;

/// Walks an IMU stream, yielding (prev, curr) pairs that end exactly on
/// requested epochs; a sample straddling an epoch is split there.
class ImuCursor {
public:
    ImuCursor(const std::vector<ImuSample>& s, std::size_t first, const ImuSample& prev)
        : s_(s), idx_(first), prev_(prev) {}

    /// Next pair ending no later than t_target; false once t_target is reached.
    bool next(double t_target, ImuSample& prev, ImuSample& curr) {
        if (idx_ >= s_.size()) return false;
        const ImuSample& raw = pending_ ? *pending_ : s_[idx_];
        if (raw.t - raw.dt >= t_target - kTimeEps) return false;
        prev = prev_;
        if (raw.t <= t_target + kTimeEps) {
            curr = raw;
            pending_.reset();
            ++idx_;
        } else {
            auto [a, b] = split_sample(raw, t_target);
            curr = a;
            pending_ = b;
        }
        prev_ = curr;
        return true;
    }

    bool exhausted() const { return idx_ >= s_.size(); }

private:
    const std::vector<ImuSample>& s_;
    std::size_t idx_;
    ImuSample prev_;
    std::optional<ImuSample> pending_;
};

double nominal_spacing(const std::vector<GnssFactor>& gnss) {
    std::vector<double> d;
    for (std::size_t i = 1; i < gnss.size(); ++i) d.push_back(gnss[i].t - gnss[i - 1].t);
    if (d.empty()) return 1.0;
    std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
    return d[d.size() / 2];
}

struct TruthTrack {
    std::vector<double> t;
    std::vector<Vec3> p;

    /// Linear interpolation; NaN outside the covered span.
    Vec3 at(double tq) const {
        const Vec3 nan = Vec3::Constant(std::numeric_limits<double>::quiet_NaN());
        if (t.empty() || tq < t.front() - kTimeEps || tq > t.back() + kTimeEps) return nan;
        auto it = std::lower_bound(t.begin(), t.end(), tq - kTimeEps);
        std::size_t i = static_cast<std::size_t>(it - t.begin());
        if (i < t.size() && std::abs(t[i] - tq) <= kTimeEps) return p[i];
        if (i == 0 || i >= t.size()) return nan;
        const double u = (tq - t[i - 1]) / (t[i] - t[i - 1]);
        return (1.0 - u) * p[i - 1] + u * p[i];
    }
};

struct Prepared {
    LocalFrame frame;
    std::vector<GnssFactor> gnss;
    TruthTrack truth;
    double duration{0.0};
};

Prepared prepare(const RunConfig& cfg, const Dataset& data) {
    if (data.imu.empty()) throw std::invalid_argument("run_mode: the IMU stream is empty");
    Prepared out;
    GeodeticPosition origin;
    if (cfg.origin) {
        origin = *cfg.origin;
    } else if (!data.gnss.empty()) {
        origin = geodetic_of(data.gnss.front());
    } else {
        throw std::invalid_argument("run_mode: no origin configured and no GNSS fix to take it from");
    }
    out.frame = LocalFrame(origin);
    for (const auto& r : data.gnss) out.gnss.push_back(from_record(r, out.frame, cfg.lever_arm));
    for (const auto& r : data.truth) {
        out.truth.t.push_back(r.t);
        out.truth.p.push_back(out.frame.to_local(geodetic_of(r)));
    }
    out.duration = data.imu.back().t;
    return out;
}

Mat3 diag3(double a, double b, double c) { return Vec3(a, b, c).asDiagonal(); }

}  // namespace

InitialState initialize(const RunConfig& cfg, const std::vector<ImuSample>& imu,
                        const std::vector<GnssFactor>& gnss) {
    if (imu.empty()) throw std::invalid_argument("initialize: empty IMU stream");

    double roll = 0.0;
    double pitch = 0.0;
    if (cfg.level_duration > 0.0) {
        Vec3 dv = Vec3::Zero();
        double dt = 0.0;
        const double t_end = imu.front().t - imu.front().dt + cfg.level_duration;
        for (const auto& s : imu) {
            if (s.t > t_end + kTimeEps) break;
            dv += s.dvel;
            dt += s.dt;
        }
        if (dt > 0.0) {
            const Vec3 f = dv / dt;
            roll = std::atan2(-f.y(), -f.z());
            pitch = std::atan2(f.x(), std::hypot(f.y(), f.z()));
        }
    }

    const double spacing = nominal_spacing(gnss);
    for (std::size_t k = 2; k < gnss.size(); ++k) {
        const double d1 = gnss[k].t - gnss[k - 1].t;
        const double d2 = gnss[k - 1].t - gnss[k - 2].t;
        Vec3 v;
        Mat3 v_cov;
        if (std::abs(d1 - d2) < 1e-3 * spacing) {
            v = (3.0 * gnss[k].pos_w - 4.0 * gnss[k - 1].pos_w + gnss[k - 2].pos_w) / (2.0 * d1);
            v_cov = (9.0 * gnss[k].cov + 16.0 * gnss[k - 1].cov + gnss[k - 2].cov) / (4.0 * d1 * d1);
        } else {
            v = (gnss[k].pos_w - gnss[k - 1].pos_w) / d1;
            v_cov = (gnss[k].cov + gnss[k - 1].cov) / (d1 * d1);
        }
        const double speed = v.head<2>().norm();
        if (speed <= cfg.init_speed) continue;
        if (gnss[k].t <= imu.front().t) continue;

        const double yaw = std::atan2(v.y(), v.x());
        InitialState init;
        init.gnss_index = k;
        init.node.t = gnss[k].t;
        init.node.nav.q = euler_to_quat(Vec3(roll, pitch, yaw));
        init.node.nav.v = v;
        init.node.nav.p = gnss[k].pos_w - quat_to_dcm(init.node.nav.q) * gnss[k].lever_arm;

        const double sd_v = std::sqrt(std::max(v_cov.diagonal().maxCoeff(), 1e-6));
        const double sd_level = std::max(0.2 * kDeg, 3.0 * cfg.noise.steady_accel_bias() / 9.8);
        const double sd_yaw = std::max(1.0 * kDeg, 3.0 * sd_v / speed);
        init.cov = Mat15::Zero();
        init.cov.block<3, 3>(node::P, node::P) = gnss[k].cov + 1e-4 * Mat3::Identity();
        init.cov.block<3, 3>(node::PHI, node::PHI) = diag3(sd_level * sd_level, sd_level * sd_level, sd_yaw * sd_yaw);
        init.cov.block<3, 3>(node::V, node::V) = 4.0 * v_cov;
        const double bg = std::max(cfg.noise.steady_gyro_bias(), 1e-9);
        const double ba = std::max(cfg.noise.steady_accel_bias(), 1e-9);
        init.cov.block<3, 3>(node::BG, node::BG) = bg * bg * Mat3::Identity();
        init.cov.block<3, 3>(node::BA, node::BA) = ba * ba * Mat3::Identity();
        return init;
    }
    throw std::runtime_error(
        fmt::format("initialize: GNSS speed never exceeds {} m/s; cannot determine the heading", cfg.init_speed));
}

namespace {

struct PassContext {
    const RunConfig& cfg;
    const Dataset& data;
    const Prepared& prep;
    const InitialState& init;
    std::optional<OutageSchedule> schedule;
};

bool available(const PassContext& c, const GnssFactor& f) {
    return !(c.schedule && c.schedule->blocked(f.t, c.prep.duration));
}

std::size_t first_sample_after(const std::vector<ImuSample>& imu, double t) {
    auto it = std::upper_bound(imu.begin(), imu.end(), t + kTimeEps,
                               [](double v, const ImuSample& s) { return v < s.t; });
    return static_cast<std::size_t>(it - imu.begin());
}

/// Raw sample ending at t (or a synthetic predecessor when t falls mid-sample
/// or before the stream).
ImuSample predecessor_at(const std::vector<ImuSample>& imu, std::size_t first, double t) {
    if (first > 0 && std::abs(imu[first - 1].t - t) <= kTimeEps) return imu[first - 1];
    if (first < imu.size()) {
        const ImuSample& s = imu[first];
        if (s.t - s.dt < t - kTimeEps) return split_sample(s, t).first;
        return zero_predecessor(s);
    }
    return zero_predecessor(imu.back());
}

class Recorder {
public:
    Recorder(const PassContext& c, PassResult& out, OutageReport& report) : c_(c), out_(out), report_(report) {}

    /// False once the estimate has diverged.
    bool record(double t, const NavState& nav, const ImuBias& bias, bool gnss_used) {
        EpochEstimate e;
        e.t = t;
        e.nav = nav;
        e.bias = bias;
        e.gnss_used = gnss_used;
        e.error = nav.p - c_.prep.truth.at(t);
        out_.epochs.push_back(e);
        const bool finite = nav.p.allFinite() && nav.v.allFinite() && nav.q.is_finite();
        if (!finite || nav.v.norm() > 1e4) {
            report_.partial = true;
            report_.note += fmt::format("{} diverged at t = {:.3f} s; ", to_string(c_.cfg.mode), t);
            return false;
        }
        return true;
    }

private:
    const PassContext& c_;
    PassResult& out_;
    OutageReport& report_;
};

void run_fgo(const PassContext& c, RunStats& stats, PassResult& out, OutageReport& report) {
    WindowConfig wc;
    wc.size = c.cfg.window_size;
    wc.solver.max_iterations = c.cfg.max_iterations;
    wc.solver.exec = c.cfg.exec;
    SlidingWindow window(wc);
    window.initialize(c.init.node, c.init.cov);

    const EarthModel earth = c.cfg.mode == Mode::M1 ? EarthModel::Refined : EarthModel::Rough;
    const auto& imu = c.data.imu;
    const double t0 = c.init.node.t;
    const std::size_t first = first_sample_after(imu, t0);
    ImuCursor cursor(imu, first, predecessor_at(imu, first, t0));
    const double spacing = nominal_spacing(c.prep.gnss);

    Recorder rec(c, out, report);
    if (!rec.record(t0, c.init.node.nav, c.init.node.bias, true)) return;

    std::size_t g = c.init.gnss_index + 1;
    double t_prev = t0;
    for (long k = 1;; ++k) {
        const double tn = t0 + static_cast<double>(k) * spacing;
        if (tn > c.prep.duration + kTimeEps) break;
        const StateNode& start = window.latest();
        auto block = std::make_shared<Preintegration>(start.bias, c.cfg.noise, start.nav.q, c.prep.frame, earth,
                                                      t_prev);
        ImuSample prev;
        ImuSample curr;
        while (cursor.next(tn, prev, curr)) block->add(prev, curr);
        if (block->size() == 0) break;

        while (g < c.prep.gnss.size() && c.prep.gnss[g].t < tn - 0.01) ++g;
        std::optional<GnssFactor> fix;
        if (g < c.prep.gnss.size() && std::abs(c.prep.gnss[g].t - tn) < 0.01 && available(c, c.prep.gnss[g])) {
            fix = c.prep.gnss[g];
        }
        const double t_end = block->t_end();
        window.push(std::move(block), fix);
        ++stats.solves;
        stats.iterations += window.last_summary().iterations;
        if (window.last_summary().failed) ++stats.solver_failures;
        const StateNode& latest = window.latest();
        if (!rec.record(t_end, latest.nav, latest.bias, fix.has_value())) break;
        t_prev = t_end;
        if (cursor.exhausted()) break;
    }
    stats.costs_monotone = stats.costs_monotone && window.costs_monotone();
    stats.marginalizations += window.marginalizations();
    stats.regularizations += window.regularizations();
    stats.dropped_gnss += window.dropped_gnss();
}

void run_ekf(const PassContext& c, RunStats& stats, PassResult& out, OutageReport& report) {
    EkfState x;
    x.nav = c.init.node.nav;
    x.bias = c.init.node.bias;
    x.P = node_to_filter_cov(c.init.cov);

    const auto& imu = c.data.imu;
    const double t0 = c.init.node.t;
    const std::size_t first = first_sample_after(imu, t0);
    ImuCursor cursor(imu, first, predecessor_at(imu, first, t0));
    const double spacing = nominal_spacing(c.prep.gnss);

    Recorder rec(c, out, report);
    if (!rec.record(t0, x.nav, x.bias, true)) return;

    std::size_t g = c.init.gnss_index + 1;
    for (long k = 1;; ++k) {
        const double tn = t0 + static_cast<double>(k) * spacing;
        if (tn > c.prep.duration + kTimeEps) break;
        ImuSample prev;
        ImuSample curr;
        double t_reached = -1.0;
        while (cursor.next(tn, prev, curr)) {
            x = ekf_propagate(x, prev, curr, c.prep.frame, c.cfg.noise);
            t_reached = curr.t;
        }
        if (t_reached < 0.0) break;

        while (g < c.prep.gnss.size() && c.prep.gnss[g].t < tn - 0.01) ++g;
        bool used = false;
        if (g < c.prep.gnss.size() && std::abs(c.prep.gnss[g].t - t_reached) < 0.01 &&
            available(c, c.prep.gnss[g])) {
            EkfUpdateResult u = ekf_update(x, c.prep.gnss[g]);
            x = u.state;
            used = u.applied;
            if (!u.applied) ++stats.skipped_updates;
        }
        if (!rec.record(t_reached, x.nav, x.bias, used)) break;
        if (cursor.exhausted()) break;
    }
}

}  // namespace

OutageReport score_outages(std::vector<PassResult>& passes, const OutageSchedule& schedule, double duration) {
    OutageReport rep;
    double sum_h = 0.0;
    double sum_v = 0.0;
    for (std::size_t p = 0; p < passes.size(); ++p) {
        OutageSchedule s = schedule;
        s.init_time = passes[p].outage_init;
        for (double start : s.starts(duration)) {
            OutageDrift d;
            d.pass = static_cast<int>(p);
            d.start = start;
            const int index = rep.count();
            bool seen = false;
            for (auto& e : passes[p].epochs) {
                if (e.t < start - kTimeEps || e.t >= start + s.outage_len - kTimeEps) continue;
                if (!e.error.allFinite()) continue;
                e.outage = index;
                seen = true;
                d.max_horizontal = std::max(d.max_horizontal, e.error.head<2>().norm());
                d.max_vertical = std::max(d.max_vertical, std::abs(e.error.z()));
            }
            if (!seen) continue;
            sum_h += d.max_horizontal * d.max_horizontal;
            sum_v += d.max_vertical * d.max_vertical;
            rep.outages.push_back(d);
        }
    }
    if (rep.count() > 0) {
        rep.rmse_horizontal = std::sqrt(sum_h / rep.count());
        rep.rmse_vertical = std::sqrt(sum_v / rep.count());
    }
    return rep;
}

RunResult run_mode(const RunConfig& cfg, const Dataset& data) {
    cfg.validate();
    const Prepared prep = prepare(cfg, data);
    const InitialState init = initialize(cfg, data.imu, prep.gnss);

    RunResult result;
    result.mode = cfg.mode;
    std::vector<std::optional<double>> offsets;
    if (cfg.outage_passes.empty()) {
        offsets.push_back(std::nullopt);
    } else {
        for (double o : cfg.outage_passes) offsets.emplace_back(o);
    }

    OutageReport flags;
    for (const auto& offset : offsets) {
        PassResult pass;
        pass.outage_init = offset.value_or(std::numeric_limits<double>::infinity());
        PassContext ctx{cfg, data, prep, init, std::nullopt};
        if (offset) {
            ctx.schedule = cfg.outage;
            ctx.schedule->init_time = *offset;
        }
        try {
            if (cfg.mode == Mode::M0) {
                run_ekf(ctx, result.stats, pass, flags);
            } else {
                run_fgo(ctx, result.stats, pass, flags);
            }
        } catch (const std::exception& e) {
            flags.partial = true;
            flags.note += fmt::format("{} stopped: {}; ", to_string(cfg.mode), e.what());
        }
        result.passes.push_back(std::move(pass));
    }

    if (cfg.outage_passes.empty()) {
        result.report = OutageReport{};
    } else {
        result.report = score_outages(result.passes, cfg.outage, prep.duration);
    }
    result.report.partial = flags.partial;
    result.report.note = flags.note;
    return result;
}

RunResult run_mode(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.imu_file.empty() || cfg.gnss_file.empty() || cfg.truth_file.empty()) {
        throw std::invalid_argument("run_mode: imu_file, gnss_file and truth_file must all be set");
    }
    return run_mode(cfg, ingest(cfg.imu_file, cfg.gnss_file, cfg.truth_file));
}

}  // namespace fgins
