#include "fgins/preintegration.hpp"

#include <Eigen/LU>

#include <stdexcept>

namespace fgins {

NoiseMatrices build_noise_matrices(const Mat3& R, const Vec3& f, const Vec3& w, const Mat3& f_vv,
                                   const ImuNoiseModel& noise, double dt) {
    using namespace err;
    const Mat3 I = Mat3::Identity();
    NoiseMatrices m;
    m.F.block<3, 3>(P, V) = I;
    m.F.block<3, 3>(V, V) = f_vv;
    m.F.block<3, 3>(V, PHI) = -R * skew(f);
    m.F.block<3, 3>(V, BA) = -R;
    m.F.block<3, 3>(PHI, PHI) = -skew(w);
    m.F.block<3, 3>(PHI, BG) = -I;
    m.F.block<3, 3>(BG, BG) = -I / noise.tau_bg;
    m.F.block<3, 3>(BA, BA) = -I / noise.tau_ba;

    m.G.block<3, 3>(V, 3) = -R;
    m.G.block<3, 3>(PHI, 0) = -I;
    m.G.block<3, 3>(BG, 6) = I;
    m.G.block<3, 3>(BA, 9) = I;

    m.Phi = Mat15::Identity() + m.F * dt;

    // G diag(q) G^T is block diagonal, so Q = ½(Φ n + n Φ^T) dt is formed
    // block by block: Q = n dt + ½ (F n + (F n)^T) dt².
    Mat3 nb[5];
    nb[P / 3] = Mat3::Zero();
    nb[V / 3] = noise.sigma_a * noise.sigma_a * R * R.transpose();
    nb[PHI / 3] = noise.sigma_g * noise.sigma_g * I;
    nb[BG / 3] = noise.sigma_bg * noise.sigma_bg * I;
    nb[BA / 3] = noise.sigma_ba * noise.sigma_ba * I;
    Mat15 fn = Mat15::Zero();
    for (int i = 0; i < 5; ++i) {
        for (int j = 1; j < 5; ++j) fn.block<3, 3>(3 * i, 3 * j) = m.F.block<3, 3>(3 * i, 3 * j) * nb[j];
    }
    m.Q = 0.5 * dt * dt * (fn + fn.transpose());
    for (int j = 1; j < 5; ++j) m.Q.block<3, 3>(3 * j, 3 * j) += dt * nb[j];
    return m;
}

Preintegration::Preintegration(const ImuBias& bias_lin, const ImuNoiseModel& noise, const Quaternion& q_start,
                               const LocalFrame& frame, EarthModel mode, double t_start)
    : bias_lin_(bias_lin),
      noise_(noise),
      q_start_(q_start),
      c_start_(quat_to_dcm(q_start)),
      mode_(mode),
      w_ie_(mode == EarthModel::Refined ? frame.earth_rate() : Vec3::Zero()),
      g_(frame.gravity()),
      t_start_(t_start),
      t_end_(t_start) {}

void Preintegration::add(const ImuSample& prev, const ImuSample& curr) {
    using namespace err;
    if (!(curr.t > t_end_) || !(curr.dt > 0.0)) {
        throw std::invalid_argument("Preintegration::add: sample time must advance");
    }
    samples_.emplace_back(prev, curr);

    const ImuSample p = compensate(prev, bias_lin_);
    const ImuSample c = compensate(curr, bias_lin_);
    const double dt = c.dt;
    const double dtp = p.dt;
    const Mat3 I = Mat3::Identity();

    const Mat3 a_tau = c_start_.transpose() * quat_to_dcm(quat_from_rotvec(-w_ie_ * dt_sum_)) * c_start_;
    const Mat3 ce_dt = quat_to_dcm(quat_from_rotvec(-w_ie_ * dt));
    const Mat3 k = c_start_.transpose() * (0.5 * (ce_dt + I)) * c_start_ * a_tau;
    const Mat3 c_dq = quat_to_dcm(dq_);

    last_ = build_noise_matrices(a_tau * c_dq, c.dvel / dt, c.dtheta / dt, Mat3::Zero(), noise_, dt);
    cov_ = last_.Phi * cov_ * last_.Phi.transpose() + last_.Q;
    cov_ = 0.5 * (cov_ + cov_.transpose()).eval();

    const Vec3 phi_b = coning_rotvec(p, c);
    const Vec3 dv_b = sculled_dvel(p, c);

    Mat15 a = Mat15::Identity();
    a.block<3, 3>(PHI, PHI) = quat_to_dcm(quat_from_rotvec(phi_b)).transpose();
    a.block<3, 3>(PHI, BG) =
        right_jacobian(phi_b) * (-dt * I + (dtp * skew(c.dtheta) - dt * skew(p.dtheta)) / 12.0);
    const Mat3 kc = k * c_dq;
    const Mat3 a_vphi = -kc * skew(dv_b);
    const Mat3 a_vbg = kc * (0.5 * dt * skew(c.dvel) + dtp / 12.0 * skew(c.dvel) - dt / 12.0 * skew(p.dvel));
    const Mat3 a_vba = kc * (-dt * I - 0.5 * dt * skew(c.dtheta) - dt / 12.0 * skew(p.dtheta) +
                             dtp / 12.0 * skew(c.dtheta));
    a.block<3, 3>(V, PHI) = a_vphi;
    a.block<3, 3>(V, BG) = a_vbg;
    a.block<3, 3>(V, BA) = a_vba;
    a.block<3, 3>(P, V) = dt * I;
    a.block<3, 3>(P, PHI) = 0.5 * dt * a_vphi;
    a.block<3, 3>(P, BG) = 0.5 * dt * a_vbg;
    a.block<3, 3>(P, BA) = 0.5 * dt * a_vba;
    last_step_ = a;
    jac_ = (a * jac_).eval();

    // Coriolis accumulators: c_m = cor_a + cor_m · v_{k-1} tracks the sum of
    // 2[w×]v dt exactly as the sample-by-sample mechanization forms it.
    const Mat3 w_x = skew(w_ie_);
    const Vec3 a_new = cor_a_ + 2.0 * w_x * (c_start_ * dv_ + g_ * dt_sum_ - cor_a_) * dt;
    const Mat3 m_new = cor_m_ + 2.0 * w_x * (I - cor_m_) * dt;
    cor_e_ += 0.5 * (cor_a_ + a_new) * dt;
    cor_n_ += 0.5 * (cor_m_ + m_new) * dt;
    cor_a_ = a_new;
    cor_m_ = m_new;

    const Vec3 dv_new = dv_ + kc * dv_b;
    dp_ += 0.5 * (dv_ + dv_new) * dt;
    dv_ = dv_new;
    dq_ = (dq_ * quat_from_rotvec(phi_b)).normalized();

    dt_sum_ += dt;
    t_end_ = curr.t;
}

CorrectedDelta Preintegration::corrected(const ImuBias& bias) const {
    using namespace err;
    const Vec3 dbg = bias.bg - bias_lin_.bg;
    const Vec3 dba = bias.ba - bias_lin_.ba;
    CorrectedDelta out;
    out.dp = dp_ + jac_.block<3, 3>(P, BG) * dbg + jac_.block<3, 3>(P, BA) * dba;
    out.dv = dv_ + jac_.block<3, 3>(V, BG) * dbg + jac_.block<3, 3>(V, BA) * dba;
    out.dq = (dq_ * quat_from_rotvec(jac_.block<3, 3>(PHI, BG) * dbg)).normalized();
    return out;
}

Quaternion Preintegration::earth_rotation() const { return quat_from_rotvec(-w_ie_ * dt_sum_); }

NavState Preintegration::predict(const NavState& x_prev, const ImuBias& bias, CoriolisModel model) const {
    const CorrectedDelta d = corrected(bias);
    const Mat3 c_i = quat_to_dcm(x_prev.q);
    const double t = dt_sum_;
    NavState out;
    out.q = (earth_rotation() * x_prev.q * d.dq).normalized();
    if (model == CoriolisModel::Exact) {
        out.v = x_prev.v + c_i * d.dv + g_ * t - (cor_a_ + cor_m_ * x_prev.v);
        out.p = x_prev.p + x_prev.v * t + c_i * d.dp + 0.5 * g_ * t * t - (cor_e_ + cor_n_ * x_prev.v);
        return out;
    }
    const Mat3 w_x = skew(w_ie_);
    const Vec3 rhs = x_prev.v * t + c_i * d.dp + 0.5 * g_ * t * t;
    const Vec3 disp = (Mat3::Identity() + w_x * t).lu().solve(rhs);
    out.p = x_prev.p + disp;
    out.v = x_prev.v + c_i * d.dv + g_ * t - 2.0 * w_x * disp;
    return out;
}

Preintegration Preintegration::reintegrated(const ImuBias& bias_lin) const {
    Preintegration out(bias_lin, noise_, q_start_, LocalFrame(), mode_, t_start_);
    out.w_ie_ = w_ie_;
    out.g_ = g_;
    for (const auto& [prev, curr] : samples_) out.add(prev, curr);
    return out;
}

}  // namespace fgins
