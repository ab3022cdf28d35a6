#include "fgins/ekf.hpp"

#include <Eigen/Cholesky>

#include <iostream>

namespace fgins {

EkfState ekf_propagate(const EkfState& state, const ImuSample& prev, const ImuSample& curr, const LocalFrame& frame,
                       const ImuNoiseModel& noise) {
    const ImuSample c = compensate(curr, state.bias);
    const NoiseMatrices m = build_noise_matrices(quat_to_dcm(state.nav.q), c.dvel / c.dt, c.dtheta / c.dt,
                                                 -2.0 * skew(frame.earth_rate()), noise, c.dt);
    EkfState out;
    out.nav = ins_step(state.nav, prev, curr, state.bias, frame);
    out.bias = state.bias;
    out.P = m.Phi * state.P * m.Phi.transpose() + m.Q;
    out.P = 0.5 * (out.P + out.P.transpose()).eval();
    return out;
}

EkfUpdateResult ekf_update(const EkfState& state, const GnssFactor& f) {
    using namespace err;
    const Mat3 c = quat_to_dcm(state.nav.q);
    Eigen::Matrix<double, 3, 15> h = Eigen::Matrix<double, 3, 15>::Zero();
    h.block<3, 3>(0, P) = Mat3::Identity();
    h.block<3, 3>(0, PHI) = -c * skew(f.lever_arm);

    const Vec3 innovation = f.pos_w - (state.nav.p + c * f.lever_arm);
    const Mat3 s = h * state.P * h.transpose() + f.cov;
    Eigen::LLT<Mat3> llt(0.5 * (s + s.transpose()));
    if (llt.info() != Eigen::Success) {
        std::clog << "warning: singular innovation covariance at t = " << f.t << "; update skipped\n";
        return {state, false};
    }
    const Eigen::Matrix<double, 15, 3> k = llt.solve(h * state.P).transpose();
    const Vec15 dx = k * innovation;
    const Mat15 ikh = Mat15::Identity() - k * h;

    EkfUpdateResult out{state, true};
    out.state.P = ikh * state.P * ikh.transpose() + k * f.cov * k.transpose();
    out.state.P = 0.5 * (out.state.P + out.state.P.transpose()).eval();
    out.state.nav.p += dx.segment<3>(P);
    out.state.nav.v += dx.segment<3>(V);
    out.state.nav.q = (state.nav.q * quat_from_rotvec(dx.segment<3>(PHI))).normalized();
    out.state.bias.bg += dx.segment<3>(BG);
    out.state.bias.ba += dx.segment<3>(BA);
    return out;
}

Mat15 node_to_filter_cov(const Mat15& node_cov) {
    // filter index -> node index
    const int map[5] = {node::P, node::V, node::PHI, node::BG, node::BA};
    Mat15 out;
    for (int a = 0; a < 5; ++a) {
        for (int b = 0; b < 5; ++b) out.block<3, 3>(3 * a, 3 * b) = node_cov.block<3, 3>(map[a], map[b]);
    }
    return out;
}

}  // namespace fgins
