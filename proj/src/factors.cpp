#include "fgins/factors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace fgins {

StateNode retract(const StateNode& x, const Vec15& d) {
    StateNode out = x;
    out.nav.p += d.segment<3>(node::P);
    out.nav.q = (x.nav.q * quat_from_rotvec(d.segment<3>(node::PHI))).normalized();
    out.nav.v += d.segment<3>(node::V);
    out.bias.bg += d.segment<3>(node::BG);
    out.bias.ba += d.segment<3>(node::BA);
    return out;
}

Vec15 local_difference(const StateNode& x, const StateNode& lin) {
    Vec15 d;
    d.segment<3>(node::P) = x.nav.p - lin.nav.p;
    d.segment<3>(node::PHI) = rotvec_from_quat(lin.nav.q.inverse() * x.nav.q);
    d.segment<3>(node::V) = x.nav.v - lin.nav.v;
    d.segment<3>(node::BG) = x.bias.bg - lin.bias.bg;
    d.segment<3>(node::BA) = x.bias.ba - lin.bias.ba;
    return d;
}

Eigen::MatrixXd sqrt_information(const Eigen::MatrixXd& cov) {
    const Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(sym);
    if (llt.info() == Eigen::Success) {
        const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(sym.rows(), sym.cols());
        return llt.matrixL().solve(eye);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    Eigen::VectorXd ev = es.eigenvalues();
    const double floor = 1e-12 * std::max(ev.maxCoeff(), 1e-300);
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = 1.0 / std::sqrt(std::max(ev[i], floor));
    return ev.asDiagonal() * es.eigenvectors().transpose();
}

PreintResidual preint_residual(const StateNode& i, const StateNode& j, const Preintegration& block) {
    using namespace err;
    const CorrectedDelta d = block.corrected(i.bias);
    const double t = block.dt_total();
    const Mat3 I = Mat3::Identity();
    const Mat3 w_x = skew(block.earth_rate());
    const Mat3 c_i = quat_to_dcm(i.nav.q);
    const Mat3 c_it = c_i.transpose();
    const Vec3& g = block.gravity();
    const Vec3 dp_w = j.nav.p - i.nav.p;

    const Vec3 x_p = (I + w_x * t) * dp_w - i.nav.v * t - 0.5 * g * t * t;
    const Vec3 x_v = j.nav.v - i.nav.v - g * t + 2.0 * w_x * dp_w;

    const Quaternion a = j.nav.q.inverse() * block.earth_rotation() * i.nav.q;
    Quaternion q = a * d.dq;
    const double sign = q.w < 0.0 ? -1.0 : 1.0;
    q = q.canonical();

    PreintResidual out;
    out.r.segment<3>(P) = c_it * x_p - d.dp;
    out.r.segment<3>(V) = c_it * x_v - d.dv;
    out.r.segment<3>(PHI) = 2.0 * q.v;
    out.r.segment<3>(BG) = j.bias.bg - i.bias.bg;
    out.r.segment<3>(BA) = j.bias.ba - i.bias.ba;

    const Mat15& jac = block.jac();
    const Vec3 dbg = i.bias.bg - block.bias_lin().bg;

    out.j_i.setZero();
    out.j_j.setZero();

    out.j_i.block<3, 3>(P, node::P) = -c_it * (I + w_x * t);
    out.j_i.block<3, 3>(P, node::PHI) = skew(c_it * x_p);
    out.j_i.block<3, 3>(P, node::V) = -c_it * t;
    out.j_i.block<3, 3>(P, node::BG) = -jac.block<3, 3>(P, BG);
    out.j_i.block<3, 3>(P, node::BA) = -jac.block<3, 3>(P, BA);
    out.j_j.block<3, 3>(P, node::P) = c_it * (I + w_x * t);

    out.j_i.block<3, 3>(V, node::P) = -2.0 * c_it * w_x;
    out.j_i.block<3, 3>(V, node::PHI) = skew(c_it * x_v);
    out.j_i.block<3, 3>(V, node::V) = -c_it;
    out.j_i.block<3, 3>(V, node::BG) = -jac.block<3, 3>(V, BG);
    out.j_i.block<3, 3>(V, node::BA) = -jac.block<3, 3>(V, BA);
    out.j_j.block<3, 3>(V, node::P) = 2.0 * c_it * w_x;
    out.j_j.block<3, 3>(V, node::V) = c_it;

    const Mat4 m_i = left_matrix(a) * right_matrix(d.dq);
    out.j_i.block<3, 3>(PHI, node::PHI) = sign * m_i.block<3, 3>(1, 1);
    const Mat3 j_phi_bg = jac.block<3, 3>(PHI, BG);
    out.j_i.block<3, 3>(PHI, node::BG) =
        left_matrix(q).block<3, 3>(1, 1) * right_jacobian(j_phi_bg * dbg) * j_phi_bg;
    out.j_j.block<3, 3>(PHI, node::PHI) = -right_matrix(q).block<3, 3>(1, 1);

    out.j_i.block<3, 3>(BG, node::BG) = -I;
    out.j_j.block<3, 3>(BG, node::BG) = I;
    out.j_i.block<3, 3>(BA, node::BA) = -I;
    out.j_j.block<3, 3>(BA, node::BA) = I;
    return out;
}

GnssResidual gnss_residual(const StateNode& x, const GnssFactor& f) {
    const Mat3 c = quat_to_dcm(x.nav.q);
    GnssResidual out;
    out.r = x.nav.p + c * f.lever_arm - f.pos_w;
    out.j.setZero();
    out.j.block<3, 3>(0, node::P) = Mat3::Identity();
    out.j.block<3, 3>(0, node::PHI) = -c * skew(f.lever_arm);
    return out;
}

PriorResidual prior_residual(const PriorFactor& prior, const std::vector<const StateNode*>& states) {
    const auto n = static_cast<Eigen::Index>(prior.nodes.size());
    Eigen::VectorXd dx(15 * n);
    PriorResidual out;
    for (Eigen::Index k = 0; k < n; ++k) {
        dx.segment<15>(15 * k) = local_difference(*states[k], prior.lin[k]);
    }
    out.r = prior.r0 + prior.h * dx;
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::MatrixXd jk = prior.h.middleCols(15 * k, 15);
        const Mat3 jr_inv = right_jacobian_inverse(dx.segment<3>(15 * k + node::PHI));
        jk.middleCols(node::PHI, 3) = (jk.middleCols(node::PHI, 3) * jr_inv).eval();
        out.j.push_back(std::move(jk));
    }
    return out;
}

}  // namespace fgins
