#include "fgins/factor_graph.hpp"

#include <algorithm>

namespace fgins {

int FactorGraph::add_node(const StateNode& x) {
    const int id = next_id_++;
    nodes_.emplace(id, x);
    return id;
}

void FactorGraph::remove_node(int id) { nodes_.erase(id); }

void FactorGraph::add_imu_factor(int from, int to, std::shared_ptr<const Preintegration> block) {
    ImuFactor f;
    f.from = from;
    f.to = to;
    f.sqrt_info = sqrt_information(block->cov());
    f.block = std::move(block);
    imu_.push_back(std::move(f));
}

void FactorGraph::add_gnss_factor(int node, const GnssFactor& f) {
    gnss_.push_back({node, f, sqrt_information(f.cov)});
}

LinearizedFactor FactorGraph::linearize_prior(const PriorFactor& prior, const NodeMap& states) const {
    std::vector<const StateNode*> xs;
    for (int id : prior.nodes) xs.push_back(&states.at(id));
    PriorResidual pr = prior_residual(prior, xs);
    LinearizedFactor out;
    out.r = std::move(pr.r);
    for (std::size_t k = 0; k < prior.nodes.size(); ++k) out.blocks.push_back({prior.nodes[k], std::move(pr.j[k])});
    return out;
}

namespace {

bool prior_touches(const PriorFactor& p, int id) {
    return std::find(p.nodes.begin(), p.nodes.end(), id) != p.nodes.end();
}

}  // namespace

LinearizedFactor FactorGraph::linearize_imu(const ImuFactor& f, const NodeMap& states) const {
    const PreintResidual pr = preint_residual(states.at(f.from), states.at(f.to), *f.block);
    LinearizedFactor out;
    out.r = f.sqrt_info * pr.r;
    out.blocks.push_back({f.from, f.sqrt_info * pr.j_i});
    out.blocks.push_back({f.to, f.sqrt_info * pr.j_j});
    return out;
}

LinearizedFactor FactorGraph::linearize_gnss(const GnssEntry& f, const NodeMap& states) const {
    const GnssResidual gr = gnss_residual(states.at(f.node), f.meas);
    LinearizedFactor out;
    out.r = f.sqrt_info * gr.r;
    out.blocks.push_back({f.node, f.sqrt_info * gr.j});
    return out;
}

std::vector<LinearizedFactor> FactorGraph::linearize(const NodeMap& states, Execution exec) const {
    const int has_prior = static_cast<int>(priors_.size());
    const int n_imu = static_cast<int>(imu_.size());
    const int n = has_prior + n_imu + static_cast<int>(gnss_.size());
    std::vector<LinearizedFactor> out(n);
    auto eval = [&](int k) {
        if (k < has_prior) {
            out[k] = linearize_prior(priors_[k], states);
        } else if (k < has_prior + n_imu) {
            out[k] = linearize_imu(imu_[k - has_prior], states);
        } else {
            out[k] = linearize_gnss(gnss_[k - has_prior - n_imu], states);
        }
    };
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (int k = 0; k < n; ++k) eval(k);
    } else {
        for (int k = 0; k < n; ++k) eval(k);
    }
    return out;
}

std::vector<LinearizedFactor> FactorGraph::linearize_touching(int id) const {
    std::vector<LinearizedFactor> out;
    for (const auto& p : priors_) {
        if (prior_touches(p, id)) out.push_back(linearize_prior(p, nodes_));
    }
    for (const auto& f : imu_) {
        if (f.from == id || f.to == id) out.push_back(linearize_imu(f, nodes_));
    }
    for (const auto& f : gnss_) {
        if (f.node == id) out.push_back(linearize_gnss(f, nodes_));
    }
    return out;
}

void FactorGraph::remove_factors_touching(int id) {
    std::erase_if(priors_, [id](const PriorFactor& p) { return prior_touches(p, id); });
    std::erase_if(imu_, [id](const ImuFactor& f) { return f.from == id || f.to == id; });
    std::erase_if(gnss_, [id](const GnssEntry& f) { return f.node == id; });
}

double total_cost(const std::vector<LinearizedFactor>& factors) {
    double c = 0.0;
    for (const auto& f : factors) c += 0.5 * f.r.squaredNorm();
    return c;
}

double FactorGraph::cost(const NodeMap& states, Execution exec) const { return total_cost(linearize(states, exec)); }

}  // namespace fgins
