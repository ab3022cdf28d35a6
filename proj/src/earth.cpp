#include "fgins/earth.hpp"

#include <numbers>
#include <stdexcept>

namespace fgins {

Vec3 earth_rate_in_w(double lat0) {
    if (!(std::abs(lat0) <= 0.5 * std::numbers::pi)) {
        throw std::invalid_argument("earth_rate_in_w: latitude out of range");
    }
    return {wgs84::kRotationRate * std::cos(lat0), 0.0, -wgs84::kRotationRate * std::sin(lat0)};
}

double normal_gravity(double lat, double h) {
    using namespace wgs84;
    const double b = kSemiMajorAxis * (1.0 - kFlattening);
    const double k = (b * kGravityPole) / (kSemiMajorAxis * kGravityEquator) - 1.0;
    const double s2 = std::sin(lat) * std::sin(lat);
    const double g0 = kGravityEquator * (1.0 + k * s2) / std::sqrt(1.0 - kEccentricitySq * s2);
    const double omega2 = kRotationRate * kRotationRate;
    const double m = omega2 * kSemiMajorAxis * kSemiMajorAxis * b / kGM;
    return g0 * (1.0 - 2.0 * (1.0 + kFlattening + m - 2.0 * kFlattening * s2) * h / kSemiMajorAxis);
}

double meridian_radius(double lat) {
    using namespace wgs84;
    const double s2 = std::sin(lat) * std::sin(lat);
    const double d = 1.0 - kEccentricitySq * s2;
    return kSemiMajorAxis * (1.0 - kEccentricitySq) / (d * std::sqrt(d));
}

double prime_vertical_radius(double lat) {
    using namespace wgs84;
    const double s2 = std::sin(lat) * std::sin(lat);
    return kSemiMajorAxis / std::sqrt(1.0 - kEccentricitySq * s2);
}

LocalFrame::LocalFrame(const GeodeticPosition& origin)
    : origin_(origin),
      gravity_(0.0, 0.0, normal_gravity(origin.lat, origin.h)),
      earth_rate_(earth_rate_in_w(origin.lat)),
      rm_h_(meridian_radius(origin.lat) + origin.h),
      rn_h_cos_((prime_vertical_radius(origin.lat) + origin.h) * std::cos(origin.lat)) {}

LocalFrame LocalFrame::with_vectors(const GeodeticPosition& origin, const Vec3& gravity, const Vec3& earth_rate) {
    LocalFrame f(origin);
    f.gravity_ = gravity;
    f.earth_rate_ = earth_rate;
    return f;
}

Vec3 LocalFrame::to_local(const GeodeticPosition& p) const {
    return {(p.lat - origin_.lat) * rm_h_, (p.lon - origin_.lon) * rn_h_cos_, origin_.h - p.h};
}

GeodeticPosition LocalFrame::to_geodetic(const Vec3& ned) const {
    return {origin_.lat + ned.x() / rm_h_, origin_.lon + ned.y() / rn_h_cos_, origin_.h - ned.z()};
}

}  // namespace fgins
