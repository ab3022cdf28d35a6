#include "fgins/sliding_window.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace fgins {

SlidingWindow::SlidingWindow(WindowConfig config) : config_(config) {
    if (config_.size < 2) throw std::invalid_argument("window size must be at least 2");
}

void SlidingWindow::initialize(const StateNode& x0, const Mat15& cov0) {
    graph_ = FactorGraph{};
    latest_id_ = graph_.add_node(x0);
    PriorFactor prior;
    prior.nodes = {latest_id_};
    prior.lin = {x0};
    prior.r0 = Eigen::VectorXd::Zero(15);
    prior.h = sqrt_information(cov0);
    graph_.add_prior(std::move(prior));
}

const StateNode& SlidingWindow::latest() const { return graph_.node(latest_id_); }

const SolverSummary& SlidingWindow::push(std::shared_ptr<const Preintegration> block,
                                         const std::optional<GnssFactor>& gnss) {
    if (latest_id_ < 0) throw std::logic_error("SlidingWindow::push before initialize");
    const StateNode& prev = latest();
    StateNode next;
    next.t = block->t_end();
    next.nav = block->predict(prev.nav, prev.bias);
    next.bias = prev.bias;
    const int from = latest_id_;
    latest_id_ = graph_.add_node(next);
    graph_.add_imu_factor(from, latest_id_, std::move(block));
    if (gnss) {
        if (std::abs(gnss->t - next.t) < 0.01) {
            graph_.add_gnss_factor(latest_id_, *gnss);
        } else {
            ++dropped_gnss_;
            std::clog << "warning: GNSS epoch " << gnss->t << " has no node within 10 ms; dropped\n";
        }
    }
    if (config_.marginalize) {
        while (static_cast<int>(graph_.imu_factors().size()) > config_.size) marginalize_oldest();
    }
    run_solver();
    if (config_.reintegrate) {
        for (auto& f : graph_.imu_factors()) {
            f.block = std::make_shared<Preintegration>(f.block->reintegrated(graph_.node(f.from).bias));
            f.sqrt_info = sqrt_information(f.block->cov());
        }
        run_solver();
    }
    return last_;
}

void SlidingWindow::run_solver() {
    last_ = solve(graph_, config_.solver);
    monotone_ = monotone_ && last_.monotone();
    failed_ = failed_ || last_.failed;
}

void SlidingWindow::marginalize_oldest() {
    const int m = graph_.nodes().begin()->first;
    if (m == latest_id_) return;
    const auto factors = graph_.linearize_touching(m);

    std::vector<int> keep;
    for (const auto& f : factors) {
        for (const auto& b : f.blocks) {
            if (b.node != m && std::find(keep.begin(), keep.end(), b.node) == keep.end()) keep.push_back(b.node);
        }
    }
    std::sort(keep.begin(), keep.end());

    if (!keep.empty()) {
        const int ns = static_cast<int>(keep.size());
        const int dim = 15 * (ns + 1);
        auto offset = [&](int id) {
            if (id == m) return 0;
            return 15 * (1 + static_cast<int>(std::find(keep.begin(), keep.end(), id) - keep.begin()));
        };
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
        Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
        for (const auto& f : factors) {
            for (const auto& a : f.blocks) {
                g.segment(offset(a.node), 15) += a.j.transpose() * f.r;
                for (const auto& b : f.blocks) {
                    h.block(offset(a.node), offset(b.node), 15, 15) += a.j.transpose() * b.j;
                }
            }
        }
        Mat15 hmm = h.topLeftCorner<15, 15>();
        Eigen::LDLT<Mat15> ldlt(hmm);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
            ldlt.vectorD().minCoeff() <= 1e-12 * ldlt.vectorD().maxCoeff()) {
            hmm += 1e-12 * Mat15::Identity();
            ldlt.compute(hmm);
            ++regularizations_;
            std::clog << "warning: marginal information of node " << m << " regularized\n";
        }
        const int ds = dim - 15;
        const Eigen::MatrixXd hsm = h.bottomLeftCorner(ds, 15);
        const Eigen::MatrixXd hss = h.bottomRightCorner(ds, ds) - hsm * ldlt.solve(hsm.transpose());
        const Eigen::VectorXd gs = g.tail(ds) - hsm * ldlt.solve(g.head<15>());

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (hss + hss.transpose()));
        const Eigen::VectorXd lam = es.eigenvalues();
        const double floor = 1e-12 * std::max(lam.maxCoeff(), 0.0);
        std::vector<int> kept;
        for (int i = 0; i < ds; ++i) {
            if (lam[i] > floor && lam[i] > 0.0) kept.push_back(i);
        }
        PriorFactor prior;
        prior.nodes = keep;
        for (int id : keep) prior.lin.push_back(graph_.node(id));
        const int nk = static_cast<int>(kept.size());
        prior.h.resize(nk, ds);
        prior.r0.resize(nk);
        for (int k = 0; k < nk; ++k) {
            const double s = std::sqrt(lam[kept[k]]);
            const auto vk = es.eigenvectors().col(kept[k]);
            prior.h.row(k) = s * vk.transpose();
            prior.r0[k] = vk.dot(gs) / s;
        }
        graph_.remove_factors_touching(m);
        if (nk > 0) graph_.add_prior(std::move(prior));
    } else {
        graph_.remove_factors_touching(m);
    }
    graph_.remove_node(m);
    ++marginalizations_;
}

}  // namespace fgins
