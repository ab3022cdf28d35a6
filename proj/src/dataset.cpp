#include "fgins/dataset.hpp"

#include <fmt/format.h>
#include <fmt/os.h>

#include <charconv>
#include <limits>
#include <fstream>
#include <numbers>

namespace fgins {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::vector<double> parse_fields(const std::string& line, const std::filesystem::path& path, long lineno,
                                 std::size_t expected) {
    std::vector<double> v;
    v.reserve(expected);
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
        while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
        if (p == end) break;
        double x = 0.0;
        const char* start = *p == '+' ? p + 1 : p;
        auto [next, ec] = std::from_chars(start, end, x);
        if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t' && *next != '\r')) {
            throw DatasetError(fmt::format("{}:{}: malformed number", path.string(), lineno));
        }
        v.push_back(x);
        p = next;
    }
    if (v.size() != expected) {
        throw DatasetError(
            fmt::format("{}:{}: expected {} fields, found {}", path.string(), lineno, expected, v.size()));
    }
    return v;
}

template <typename F>
void for_each_record(const std::filesystem::path& path, std::size_t fields, F&& f) {
    std::ifstream in(path);
    if (!in) throw DatasetError(fmt::format("cannot open {}", path.string()));
    std::string line;
    long lineno = 0;
    double last_t = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const std::vector<double> v = parse_fields(line, path, lineno, fields);
        if (!(v[0] > last_t)) {
            throw DatasetError(fmt::format("{}:{}: timestamp does not increase", path.string(), lineno));
        }
        last_t = v[0];
        f(v);
    }
}

fmt::ostream open_out(const std::filesystem::path& path) {
    try {
        return fmt::output_file(path.string());
    } catch (const std::system_error& e) {
        throw DatasetError(fmt::format("cannot write {}: {}", path.string(), e.what()));
    }
}

}  // namespace

void write_imu(const std::filesystem::path& path, const std::vector<ImuSample>& samples) {
    auto out = open_out(path);
    out.print("# fgins-imu v1: t dtheta_x dtheta_y dtheta_z dvel_x dvel_y dvel_z\n");
    for (const auto& s : samples) {
        out.print("{} {} {} {} {} {} {}\n", s.t, s.dtheta.x(), s.dtheta.y(), s.dtheta.z(), s.dvel.x(), s.dvel.y(),
                  s.dvel.z());
    }
}

void write_gnss(const std::filesystem::path& path, const std::vector<GnssRecord>& records) {
    auto out = open_out(path);
    out.print("# fgins-gnss v1: t lat lon h sdN sdE sdD\n");
    for (const auto& r : records) {
        out.print("{} {} {} {} {} {} {}\n", r.t, r.lat_deg, r.lon_deg, r.h, r.sd.x(), r.sd.y(), r.sd.z());
    }
}

void write_truth(const std::filesystem::path& path, const std::vector<TruthRecord>& records) {
    auto out = open_out(path);
    out.print("# fgins-truth v1: t lat lon h vN vE vD roll pitch yaw\n");
    for (const auto& r : records) {
        out.print("{} {} {} {} {} {} {} {} {} {}\n", r.t, r.lat_deg, r.lon_deg, r.h, r.v_ned.x(), r.v_ned.y(),
                  r.v_ned.z(), r.rpy_deg.x(), r.rpy_deg.y(), r.rpy_deg.z());
    }
}

std::vector<ImuSample> read_imu(const std::filesystem::path& path) {
    std::vector<ImuSample> out;
    for_each_record(path, 7, [&](const std::vector<double>& v) {
        ImuSample s;
        s.t = v[0];
        s.dtheta = Vec3(v[1], v[2], v[3]);
        s.dvel = Vec3(v[4], v[5], v[6]);
        out.push_back(s);
    });
    for (std::size_t k = 1; k < out.size(); ++k) out[k].dt = out[k].t - out[k - 1].t;
    if (out.size() > 1) {
        out[0].dt = out[1].dt;
    } else if (out.size() == 1) {
        throw DatasetError(fmt::format("{}: a single IMU sample has no interval", path.string()));
    }
    return out;
}

std::vector<GnssRecord> read_gnss(const std::filesystem::path& path) {
    std::vector<GnssRecord> out;
    for_each_record(path, 7, [&](const std::vector<double>& v) {
        out.push_back({v[0], v[1], v[2], v[3], Vec3(v[4], v[5], v[6])});
    });
    return out;
}

std::vector<TruthRecord> read_truth(const std::filesystem::path& path) {
    std::vector<TruthRecord> out;
    for_each_record(path, 10, [&](const std::vector<double>& v) {
        out.push_back({v[0], v[1], v[2], v[3], Vec3(v[4], v[5], v[6]), Vec3(v[7], v[8], v[9])});
    });
    return out;
}

Dataset ingest(const std::filesystem::path& imu, const std::filesystem::path& gnss,
               const std::filesystem::path& truth) {
    Dataset d;
    d.imu = read_imu(imu);
    d.gnss = read_gnss(gnss);
    if (!truth.empty()) d.truth = read_truth(truth);
    return d;
}

GeodeticPosition geodetic_of(const TruthRecord& r) { return {r.lat_deg * kDeg, r.lon_deg * kDeg, r.h}; }
GeodeticPosition geodetic_of(const GnssRecord& r) { return {r.lat_deg * kDeg, r.lon_deg * kDeg, r.h}; }

GnssRecord to_record(const GnssFactor& f, const LocalFrame& frame) {
    const GeodeticPosition g = frame.to_geodetic(f.pos_w);
    return {f.t, g.lat / kDeg, g.lon / kDeg, g.h, f.cov.diagonal().cwiseSqrt()};
}

GnssFactor from_record(const GnssRecord& r, const LocalFrame& frame, const Vec3& lever_arm) {
    GnssFactor f;
    f.t = r.t;
    f.pos_w = frame.to_local(geodetic_of(r));
    f.cov = r.sd.cwiseProduct(r.sd).asDiagonal();
    f.lever_arm = lever_arm;
    return f;
}

TruthRecord to_record(const TruthPoint& tp, const LocalFrame& frame) {
    const GeodeticPosition g = frame.to_geodetic(tp.nav.p);
    TruthRecord r;
    r.t = tp.t;
    r.lat_deg = g.lat / kDeg;
    r.lon_deg = g.lon / kDeg;
    r.h = g.h;
    r.v_ned = tp.nav.v;
    r.rpy_deg = dcm_to_euler(quat_to_dcm(tp.nav.q)) / kDeg;
    return r;
}

NavState truth_in_frame(const TruthRecord& r, const LocalFrame& frame) {
    NavState s;
    s.p = frame.to_local(geodetic_of(r));
    s.v = r.v_ned;
    s.q = euler_to_quat(r.rpy_deg * kDeg);
    return s;
}

}  // namespace fgins
