#pragma once

// Residuals and Jacobians of the estimator's factors.
//
// A node's tangent is ordered [δp, δφ, δv, δbg, δba] with attitude perturbed
// on the right, q ⊗ Exp(δφ). Preintegration residual rows follow the error
// state of the block, [δp, δv, δφ, δbg, δba].

#include "fgins/attitude.hpp"
#include "fgins/mechanization.hpp"
#include "fgins/preintegration.hpp"

#include <Eigen/Core>

#include <vector>

namespace fgins {

namespace node {
inline constexpr int P = 0;
inline constexpr int PHI = 3;
inline constexpr int V = 6;
inline constexpr int BG = 9;
inline constexpr int BA = 12;
inline constexpr int kDim = 15;
}  // namespace node

struct StateNode {
    double t{0.0};
    NavState nav;
    ImuBias bias;
};

/// x ⊞ d
StateNode retract(const StateNode& x, const Vec15& d);
/// x ⊟ lin, the inverse of retract about lin.
Vec15 local_difference(const StateNode& x, const StateNode& lin);

/// GNSS antenna position converted to the w-frame.
struct GnssFactor {
    double t{0.0};
    Vec3 pos_w{Vec3::Zero()};
    Mat3 cov{Mat3::Identity()};
    Vec3 lever_arm{Vec3::Zero()};
};

/// Square-root information L^-1 with L Lᵀ = cov.
/// Falls back to an eigen-decomposition with eigenvalues floored at
/// 1e-12 * max when the Cholesky factorisation fails.
Eigen::MatrixXd sqrt_information(const Eigen::MatrixXd& cov);

struct PreintResidual {
    Vec15 r;
    Mat15 j_i;
    Mat15 j_j;
};

/// Unwhitened residual of a block spanning nodes i and j.
PreintResidual preint_residual(const StateNode& i, const StateNode& j, const Preintegration& block);

struct GnssResidual {
    Vec3 r;
    Eigen::Matrix<double, 3, 15> j;
};

/// Unwhitened r = p + C l - p̂.
GnssResidual gnss_residual(const StateNode& x, const GnssFactor& f);

/// Linear prior r0 + H · (x ⊟ x_lin) over several nodes, already whitened.
struct PriorFactor {
    std::vector<int> nodes;
    std::vector<StateNode> lin;
    Eigen::VectorXd r0;
    Eigen::MatrixXd h;

    bool empty() const { return nodes.empty(); }
};

struct PriorResidual {
    Eigen::VectorXd r;
    std::vector<Eigen::MatrixXd> j;  // one block per node, columns = 15
};

PriorResidual prior_residual(const PriorFactor& prior, const std::vector<const StateNode*>& states);

}  // namespace fgins
