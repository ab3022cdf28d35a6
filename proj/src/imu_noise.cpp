#include "fgins/imu_noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fgins {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kHour = 3600.0;
constexpr double kMilliGal = 1e-5;

}  // namespace

void ImuNoiseModel::validate() const {
    if (!(sigma_g >= 0 && sigma_a >= 0 && sigma_bg >= 0 && sigma_ba >= 0)) {
        throw std::invalid_argument("noise densities must be non-negative");
    }
    if (!(tau_bg >= 1.0 && tau_ba >= 1.0)) {
        throw std::invalid_argument("bias correlation times must be at least 1 s");
    }
}

double ImuNoiseModel::steady_gyro_bias() const { return sigma_bg * std::sqrt(tau_bg / 2.0); }
double ImuNoiseModel::steady_accel_bias() const { return sigma_ba * std::sqrt(tau_ba / 2.0); }

ImuNoiseModel from_datasheet(const DatasheetNoise& d) {
    ImuNoiseModel m;
    m.sigma_g = d.arw_deg_rt_h * kDeg / 60.0;
    m.sigma_a = d.vrw_m_s_rt_h / 60.0;
    m.tau_bg = d.tau_g_h * kHour;
    m.tau_ba = d.tau_a_h * kHour;
    m.sigma_bg = d.gyro_bias_deg_h * kDeg / kHour * std::sqrt(2.0 / m.tau_bg);
    m.sigma_ba = d.accel_bias_mgal * kMilliGal * std::sqrt(2.0 / m.tau_ba);
    m.validate();
    return m;
}

DatasheetNoise grade_preset(const std::string& name) {
    if (name == "icm20602") return {0.24, 0.24, 10.0, 250.0, 1.0, 1.0};
    if (name == "adis16460") return {0.12, 0.09, 8.0, 200.0, 1.0, 1.0};
    if (name == "adis16465") return {0.15, 0.037, 2.0, 50.0, 1.0, 1.0};
    if (name == "hguide_i300") return {0.1, 0.03, 3.0, 50.0, 1.0, 1.0};
    throw std::invalid_argument("unknown IMU grade: " + name);
}

}  // namespace fgins
