#pragma once

// Loosely coupled error-state Kalman filter in the w-frame.
//
// Error state [δp, δv, δφ, δbg, δba], attitude error on the right as for the
// optimizer. The error dynamics reuse build_noise_matrices with R = C_b^w and
// the Coriolis velocity coupling -2[w_ie×].

#include "fgins/earth.hpp"
#include "fgins/factors.hpp"
#include "fgins/imu_noise.hpp"
#include "fgins/mechanization.hpp"
#include "fgins/preintegration.hpp"

namespace fgins {

struct EkfState {
    NavState nav;
    ImuBias bias;
    Mat15 P{Mat15::Zero()};
};

EkfState ekf_propagate(const EkfState& state, const ImuSample& prev, const ImuSample& curr, const LocalFrame& frame,
                       const ImuNoiseModel& noise);

struct EkfUpdateResult {
    EkfState state;
    bool applied{false};
};

/// Joseph-form update with the GNSS position and closed-loop feedback.
/// Skips the update (applied = false) when the innovation covariance is not
/// positive definite.
EkfUpdateResult ekf_update(const EkfState& state, const GnssFactor& f);

/// Reorders a node-tangent covariance [p, φ, v, bg, ba] to the filter order.
Mat15 node_to_filter_cov(const Mat15& node_cov);

}  // namespace fgins
