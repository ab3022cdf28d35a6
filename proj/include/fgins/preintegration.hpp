#pragma once

// Earth-rotation-aware IMU preintegration over one interval [t_{k-1}, t_k].
//
// The reference frame is the body frame at t_{k-1} frozen with respect to
// inertial space. Earth rotation over the elapsed time τ appears through
//   A(τ) = C_sᵀ · C_e(τ) · C_s,   C_e(τ) = C(Exp(-w_ie τ)),
// where C_s is the body-to-w attitude snapshot taken when the block starts.
// In rough mode w_ie is zero and every Earth term collapses to identity.

#include "fgins/attitude.hpp"
#include "fgins/earth.hpp"
#include "fgins/imu_noise.hpp"
#include "fgins/mechanization.hpp"

#include <Eigen/Core>

#include <vector>

namespace fgins {

using Vec15 = Eigen::Matrix<double, 15, 1>;
using Mat15 = Eigen::Matrix<double, 15, 15>;
using Mat15x12 = Eigen::Matrix<double, 15, 12>;
using Mat12 = Eigen::Matrix<double, 12, 12>;

/// Block offsets of the 15-dimensional error state [δp, δv, δφ, δbg, δba].
namespace err {
inline constexpr int P = 0;
inline constexpr int V = 3;
inline constexpr int PHI = 6;
inline constexpr int BG = 9;
inline constexpr int BA = 12;
}  // namespace err

enum class EarthModel { Refined, Rough };

/// How the Coriolis contribution to the predicted position and velocity is
/// formed. Surrogate uses only the interval end points (the displacement is
/// solved for once); Exact replays the per-sample accumulators gathered
/// during integration and is valid at the linearization attitude and bias.
enum class CoriolisModel { Surrogate, Exact };

struct NoiseMatrices {
    Mat15 F{Mat15::Zero()};
    Mat15x12 G{Mat15x12::Zero()};
    Mat15 Phi{Mat15::Identity()};
    Mat15 Q{Mat15::Zero()};
};

/// Continuous error dynamics and their first-order discretisation.
/// R maps the current body frame into the frame the velocity error lives in,
/// f and w are the bias-compensated specific force and angular rate, and
/// f_vv is the velocity self-coupling (zero for preintegration, -2[w_ie×] for
/// a navigation-frame filter).
NoiseMatrices build_noise_matrices(const Mat3& R, const Vec3& f, const Vec3& w, const Mat3& f_vv,
                                   const ImuNoiseModel& noise, double dt);

/// Measurement corrected to a new bias by the stored first-order Jacobian.
struct CorrectedDelta {
    Vec3 dp;
    Vec3 dv;
    Quaternion dq;
};

class Preintegration {
public:
    Preintegration(const ImuBias& bias_lin, const ImuNoiseModel& noise, const Quaternion& q_start,
                   const LocalFrame& frame, EarthModel mode, double t_start);

    /// Integrates the raw sample curr; prev is the raw sample before it (it
    /// may belong to the previous interval). Throws std::invalid_argument when
    /// curr.t does not advance past t_end().
    void add(const ImuSample& prev, const ImuSample& curr);

    CorrectedDelta corrected(const ImuBias& bias) const;

    /// State at t_end implied by x_prev, the bias at t_start, and the
    /// bias-corrected measurements.
    NavState predict(const NavState& x_prev, const ImuBias& bias,
                     CoriolisModel model = CoriolisModel::Surrogate) const;

    /// Re-integrates the stored samples from scratch about a new bias.
    Preintegration reintegrated(const ImuBias& bias_lin) const;

    /// Earth rotation Exp(-w_ie·τ) over the elapsed interval.
    Quaternion earth_rotation() const;

    const Quaternion& dq() const { return dq_; }
    const Vec3& dv() const { return dv_; }
    const Vec3& dp() const { return dp_; }
    const Mat15& cov() const { return cov_; }
    const Mat15& jac() const { return jac_; }
    const ImuBias& bias_lin() const { return bias_lin_; }
    const ImuNoiseModel& noise() const { return noise_; }
    const Quaternion& q_start() const { return q_start_; }
    EarthModel mode() const { return mode_; }
    const Vec3& earth_rate() const { return w_ie_; }
    const Vec3& gravity() const { return g_; }
    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    /// Sum of the integrated sample intervals.
    double dt_total() const { return dt_sum_; }
    std::size_t size() const { return samples_.size(); }
    /// Position Coriolis correction (w-frame, m) accumulated sample by sample
    /// at the linearization attitude, excluding the part linear in v_{k-1}.
    const Vec3& cor_accum() const { return cor_e_; }

    /// F, G, Φ and Q of the most recent add().
    const NoiseMatrices& last_noise_matrices() const { return last_; }
    /// Exact one-step Jacobian of (dp, dv, dφ) with respect to the block
    /// state and the linearization bias from the most recent add().
    const Mat15& last_step_jacobian() const { return last_step_; }

private:
    ImuBias bias_lin_;
    ImuNoiseModel noise_;
    Quaternion q_start_;
    Mat3 c_start_;
    EarthModel mode_;
    Vec3 w_ie_;
    Vec3 g_;
    double t_start_;
    double t_end_;
    double dt_sum_{0.0};

    Quaternion dq_;
    Vec3 dv_{Vec3::Zero()};
    Vec3 dp_{Vec3::Zero()};
    Mat15 cov_{Mat15::Zero()};
    Mat15 jac_{Mat15::Identity()};

    Vec3 cor_a_{Vec3::Zero()};
    Mat3 cor_m_{Mat3::Zero()};
    Vec3 cor_e_{Vec3::Zero()};
    Mat3 cor_n_{Mat3::Zero()};

    NoiseMatrices last_;
    Mat15 last_step_{Mat15::Identity()};

    std::vector<std::pair<ImuSample, ImuSample>> samples_;
};

}  // namespace fgins
