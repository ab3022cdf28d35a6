#pragma once

// WGS-84 constants, normal gravity and the local world frame (w-frame).
//
// The w-frame is the NED frame at a fixed origin. Gravity and Earth rate are
// evaluated once at the origin and held constant in that frame.

#include "fgins/attitude.hpp"

namespace fgins {

namespace wgs84 {
inline constexpr double kRotationRate = 7.2921158e-5;   // rad/s
inline constexpr double kSemiMajorAxis = 6378137.0;     // m
inline constexpr double kFlattening = 1.0 / 298.257223563;
inline constexpr double kEccentricitySq = kFlattening * (2.0 - kFlattening);
inline constexpr double kGravityEquator = 9.7803253359;  // m/s^2
inline constexpr double kGravityPole = 9.8321849379;     // m/s^2
inline constexpr double kGM = 3.986004418e14;            // m^3/s^2
}  // namespace wgs84

struct GeodeticPosition {
    double lat{0.0};  // rad
    double lon{0.0};  // rad
    double h{0.0};    // m, ellipsoidal
};

/// [w_e cos(lat0), 0, -w_e sin(lat0)]. Throws std::invalid_argument if |lat0| > pi/2.
Vec3 earth_rate_in_w(double lat0);

/// Somigliana normal gravity with the first-order free-air height correction.
double normal_gravity(double lat, double h);

double meridian_radius(double lat);
double prime_vertical_radius(double lat);

class LocalFrame {
public:
    LocalFrame() : LocalFrame(GeodeticPosition{}) {}
    explicit LocalFrame(const GeodeticPosition& origin);

    /// Frame with caller-supplied gravity and Earth-rate vectors (tests, rough models).
    static LocalFrame with_vectors(const GeodeticPosition& origin, const Vec3& gravity, const Vec3& earth_rate);

    const GeodeticPosition& origin() const { return origin_; }
    const Vec3& gravity() const { return gravity_; }
    const Vec3& earth_rate() const { return earth_rate_; }

    /// NED offset of p from the origin using the origin's curvature radii.
    Vec3 to_local(const GeodeticPosition& p) const;
    GeodeticPosition to_geodetic(const Vec3& ned) const;

private:
    GeodeticPosition origin_;
    Vec3 gravity_;
    Vec3 earth_rate_;
    double rm_h_;  // (R_M + h0)
    double rn_h_cos_;  // (R_N + h0) cos(lat0)
};

}  // namespace fgins
