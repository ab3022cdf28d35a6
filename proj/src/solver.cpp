#include "fgins/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace fgins {

namespace {

struct NormalEquations {
    Eigen::SparseMatrix<double> h;
    Eigen::VectorXd g;
};

NormalEquations assemble(const std::vector<LinearizedFactor>& factors, const std::unordered_map<int, int>& offset,
                         int dim) {
    std::vector<Eigen::Triplet<double>> trip;
    NormalEquations ne;
    ne.g = Eigen::VectorXd::Zero(dim);
    for (const auto& f : factors) {
        for (const auto& a : f.blocks) {
            const int oa = offset.at(a.node);
            ne.g.segment(oa, a.j.cols()) += a.j.transpose() * f.r;
            for (const auto& b : f.blocks) {
                const int ob = offset.at(b.node);
                const Eigen::MatrixXd hab = a.j.transpose() * b.j;
                for (Eigen::Index r = 0; r < hab.rows(); ++r) {
                    for (Eigen::Index c = 0; c < hab.cols(); ++c) {
                        if (hab(r, c) != 0.0) trip.emplace_back(oa + r, ob + c, hab(r, c));
                    }
                }
            }
        }
    }
    ne.h.resize(dim, dim);
    ne.h.setFromTriplets(trip.begin(), trip.end());
    return ne;
}

NodeMap apply_step(const NodeMap& nodes, const std::unordered_map<int, int>& offset, const Eigen::VectorXd& dx) {
    NodeMap out;
    for (const auto& [id, x] : nodes) out.emplace(id, retract(x, dx.segment<15>(offset.at(id))));
    return out;
}

}  // namespace

bool SolverSummary::monotone() const {
    for (std::size_t k = 1; k < costs.size(); ++k) {
        if (costs[k] > costs[k - 1]) return false;
    }
    return true;
}

SolverSummary solve(FactorGraph& graph, const SolverOptions& options) {
    if (!graph.has_absolute_constraint()) {
        throw std::invalid_argument("solve: no GNSS factor or prior; the window is unobservable");
    }
    std::unordered_map<int, int> offset;
    int dim = 0;
    for (const auto& [id, x] : graph.nodes()) {
        offset[id] = dim;
        dim += node::kDim;
    }

    SolverSummary summary;
    auto factors = graph.linearize(options.exec);
    double cost = total_cost(factors);
    summary.costs.push_back(cost);
    if (!std::isfinite(cost)) {
        summary.failed = true;
        summary.message = "non-finite initial cost";
        return summary;
    }

    double lambda = options.initial_lambda;
    double nu = 2.0;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    bool pattern_ready = false;

    while (summary.iterations < options.max_iterations) {
        NormalEquations ne = assemble(factors, offset, dim);
        if (ne.g.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
            summary.converged = true;
            summary.message = "gradient below tolerance";
            break;
        }
        ++summary.iterations;

        const Eigen::VectorXd diag = ne.h.diagonal().cwiseMax(1e-6).cwiseMin(1e32);
        Eigen::SparseMatrix<double> damped = ne.h;
        for (int i = 0; i < dim; ++i) damped.coeffRef(i, i) += lambda * diag[i];
        if (!pattern_ready) {
            ldlt.analyzePattern(damped);
            pattern_ready = true;
        }
        ldlt.factorize(damped);
        if (ldlt.info() != Eigen::Success) {
            lambda *= nu;
            nu *= 2.0;
            continue;
        }
        const Eigen::VectorXd dx = ldlt.solve(-ne.g);
        const double predicted = -(ne.g.dot(dx) + 0.5 * dx.dot(ne.h * dx));

        NodeMap candidate = apply_step(graph.nodes(), offset, dx);
        auto cand_factors = graph.linearize(candidate, options.exec);
        const double new_cost = total_cost(cand_factors);

        const double actual = cost - new_cost;
        const double rho = predicted > 0.0 ? actual / predicted : -1.0;
        if (std::isfinite(new_cost) && actual >= 0.0 && rho > 0.0) {
            graph.nodes() = std::move(candidate);
            factors = std::move(cand_factors);
            const double rel = actual / std::max(cost, 1e-300);
            cost = new_cost;
            summary.costs.push_back(cost);
            lambda *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
            nu = 2.0;
            if (rel < options.relative_tolerance) {
                summary.converged = true;
                summary.message = "relative cost decrease below tolerance";
                break;
            }
        } else {
            lambda *= nu;
            nu *= 2.0;
            if (lambda > 1e16) {
                summary.converged = true;
                summary.message = "no further decrease";
                break;
            }
        }
    }
    if (!summary.converged && summary.message.empty()) summary.message = "iteration limit";
    if (!std::isfinite(cost)) {
        summary.failed = true;
        summary.message = "non-finite cost";
    }
    return summary;
}

}  // namespace fgins
