#pragma once

#include <string>

namespace fgins {

/// White-noise densities and first-order Gauss–Markov bias parameters, all in
/// SI units. sigma_bg/sigma_ba are driving-noise densities of the bias
/// process, so the steady-state bias stddev is sigma_b * sqrt(tau / 2).
struct ImuNoiseModel {
    double sigma_g{0.0};   // rad/s/sqrt(Hz)
    double sigma_a{0.0};   // m/s^2/sqrt(Hz)
    double sigma_bg{0.0};  // rad/s^2/sqrt(Hz)
    double sigma_ba{0.0};  // m/s^3/sqrt(Hz)
    double tau_bg{3600.0};
    double tau_ba{3600.0};

    /// Throws std::invalid_argument unless all densities are non-negative and
    /// both correlation times are at least 1 s.
    void validate() const;

    double steady_gyro_bias() const;
    double steady_accel_bias() const;
};

/// Datasheet-style parameters: angle random walk deg/sqrt(h), velocity random
/// walk m/s/sqrt(h), gyro bias instability deg/h, accel bias instability mGal,
/// correlation times in hours. The instabilities are read as the steady-state
/// stddev of the Gauss–Markov process.
struct DatasheetNoise {
    double arw_deg_rt_h{0.0};
    double vrw_m_s_rt_h{0.0};
    double gyro_bias_deg_h{0.0};
    double accel_bias_mgal{0.0};
    double tau_g_h{1.0};
    double tau_a_h{1.0};
};

ImuNoiseModel from_datasheet(const DatasheetNoise& d);

/// Synthetic grades named after the MEMS units compared in the evaluation:
/// icm20602, adis16460, adis16465, hguide_i300. The gyro bias instability
/// matches each unit's datasheet class; random-walk and accel terms are
/// chosen per grade. Throws std::invalid_argument on an unknown name.
DatasheetNoise grade_preset(const std::string& name);

}  // namespace fgins
