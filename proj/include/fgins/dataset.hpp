#pragma once

// Whitespace-separated text streams, one record per line. Lines starting with
// '#' are comments; a writer emits a "# fgins-<kind> v1" header first.
//
//   IMU:   t dθx dθy dθz dvx dvy dvz           (s, rad, m/s; increments over
//                                               the interval ending at t)
//   GNSS:  t lat lon h sdN sdE sdD             (s, deg, deg, m, m, m, m)
//   Truth: t lat lon h vN vE vD roll pitch yaw (s, deg, deg, m, m/s, deg)

#include "fgins/earth.hpp"
#include "fgins/factors.hpp"
#include "fgins/mechanization.hpp"
#include "fgins/trajectory.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace fgins {

class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GnssRecord {
    double t{0.0};
    double lat_deg{0.0};
    double lon_deg{0.0};
    double h{0.0};
    Vec3 sd{Vec3::Zero()};
};

struct TruthRecord {
    double t{0.0};
    double lat_deg{0.0};
    double lon_deg{0.0};
    double h{0.0};
    Vec3 v_ned{Vec3::Zero()};
    Vec3 rpy_deg{Vec3::Zero()};
};

struct Dataset {
    std::vector<ImuSample> imu;
    std::vector<GnssRecord> gnss;
    std::vector<TruthRecord> truth;
};

void write_imu(const std::filesystem::path& path, const std::vector<ImuSample>& samples);
void write_gnss(const std::filesystem::path& path, const std::vector<GnssRecord>& records);
void write_truth(const std::filesystem::path& path, const std::vector<TruthRecord>& records);

/// Throws DatasetError naming the file and line on malformed input or on a
/// timestamp that does not increase. Sample dt is the spacing to the
/// previous timestamp (the first sample uses the second spacing).
std::vector<ImuSample> read_imu(const std::filesystem::path& path);
std::vector<GnssRecord> read_gnss(const std::filesystem::path& path);
std::vector<TruthRecord> read_truth(const std::filesystem::path& path);

Dataset ingest(const std::filesystem::path& imu, const std::filesystem::path& gnss,
               const std::filesystem::path& truth);

GnssRecord to_record(const GnssFactor& f, const LocalFrame& frame);
GnssFactor from_record(const GnssRecord& r, const LocalFrame& frame, const Vec3& lever_arm);
TruthRecord to_record(const TruthPoint& tp, const LocalFrame& frame);

/// Position, velocity and attitude of a truth record in the w-frame.
NavState truth_in_frame(const TruthRecord& r, const LocalFrame& frame);

GeodeticPosition geodetic_of(const TruthRecord& r);
GeodeticPosition geodetic_of(const GnssRecord& r);

}  // namespace fgins
