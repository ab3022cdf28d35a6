#pragma once

// Strapdown INS integration in the w-frame with second-order coning and
// sculling corrections and the Coriolis term of the rotating Earth.

#include "fgins/attitude.hpp"
#include "fgins/earth.hpp"

#include <utility>

namespace fgins {

/// One IMU interval ending at t. Increments are integrated over (t - dt, t].
struct ImuSample {
    double t{0.0};
    double dt{0.0};
    Vec3 dtheta{Vec3::Zero()};  // rad
    Vec3 dvel{Vec3::Zero()};    // m/s
};

struct ImuBias {
    Vec3 bg{Vec3::Zero()};  // rad/s
    Vec3 ba{Vec3::Zero()};  // m/s^2
};

/// Position, velocity and attitude (body to w) of the IMU.
struct NavState {
    Vec3 p{Vec3::Zero()};
    Vec3 v{Vec3::Zero()};
    Quaternion q;
};

/// Predecessor used for the first sample of a stream: zero increments, so the
/// history-based coning and sculling terms vanish.
ImuSample zero_predecessor(const ImuSample& first);

ImuSample compensate(const ImuSample& sample, const ImuBias& bias);

/// Rotation vector of the body over the interval, with the two-sample coning
/// correction dθ_{m-1} × dθ_m / 12.
Vec3 coning_rotvec(const ImuSample& prev, const ImuSample& curr);

/// Velocity increment in the body frame at t_{m-1}, including the rotation and
/// sculling terms.
Vec3 sculled_dvel(const ImuSample& prev, const ImuSample& curr);

/// Samples are expected to be bias-compensated.
Quaternion attitude_update(const NavState& state, const ImuSample& prev, const ImuSample& curr,
                           const LocalFrame& frame);
Vec3 velocity_update(const NavState& state, const ImuSample& prev, const ImuSample& curr,
                     const LocalFrame& frame);
Vec3 position_update(const NavState& state, const Vec3& v_new, double dt);

/// Compensates both samples with bias, then updates attitude, velocity and
/// position. The velocity update uses the attitude at t_{m-1}.
NavState ins_step(const NavState& state, const ImuSample& prev, const ImuSample& curr, const ImuBias& bias,
                  const LocalFrame& frame);

/// Splits a sample at t_split (t - dt < t_split < t) assuming constant rates
/// over the interval.
std::pair<ImuSample, ImuSample> split_sample(const ImuSample& sample, double t_split);

}  // namespace fgins
