#pragma once

#include "fgins/factors.hpp"
#include "fgins/preintegration.hpp"

#include <Eigen/Core>

#include <map>
#include <memory>
#include <vector>

namespace fgins {

/// Serial is the reference path; Parallel evaluates factors concurrently with
/// OpenMP and produces identical results.
enum class Execution { Serial, Parallel };

struct ImuFactor {
    int from{0};
    int to{0};
    std::shared_ptr<const Preintegration> block;
    Mat15 sqrt_info;
};

struct GnssEntry {
    int node{0};
    GnssFactor meas;
    Mat3 sqrt_info;
};

struct LinearBlock {
    int node{0};
    Eigen::MatrixXd j;
};

/// Whitened residual and Jacobian blocks of one factor.
struct LinearizedFactor {
    Eigen::VectorXd r;
    std::vector<LinearBlock> blocks;
};

using NodeMap = std::map<int, StateNode>;

class FactorGraph {
public:
    int add_node(const StateNode& x);
    void remove_node(int id);

    const NodeMap& nodes() const { return nodes_; }
    NodeMap& nodes() { return nodes_; }
    StateNode& node(int id) { return nodes_.at(id); }
    const StateNode& node(int id) const { return nodes_.at(id); }

    void add_imu_factor(int from, int to, std::shared_ptr<const Preintegration> block);
    void add_gnss_factor(int node, const GnssFactor& f);
    void add_prior(PriorFactor prior) { priors_.push_back(std::move(prior)); }

    const std::vector<ImuFactor>& imu_factors() const { return imu_; }
    std::vector<ImuFactor>& imu_factors() { return imu_; }
    const std::vector<GnssEntry>& gnss_factors() const { return gnss_; }
    const std::vector<PriorFactor>& priors() const { return priors_; }

    bool has_absolute_constraint() const { return !gnss_.empty() || !priors_.empty(); }
    std::size_t factor_count() const { return imu_.size() + gnss_.size() + priors_.size(); }

    /// Factors in a fixed order: priors, IMU factors, GNSS factors.
    std::vector<LinearizedFactor> linearize(const NodeMap& states, Execution exec = Execution::Serial) const;
    std::vector<LinearizedFactor> linearize(Execution exec = Execution::Serial) const {
        return linearize(nodes_, exec);
    }

    /// Only the factors that involve node id, in the same relative order.
    std::vector<LinearizedFactor> linearize_touching(int id) const;

    /// Drops every factor involving node id; priors are dropped as a whole.
    void remove_factors_touching(int id);

    /// 0.5 * sum of squared whitened residuals.
    double cost(const NodeMap& states, Execution exec = Execution::Serial) const;
    double cost() const { return cost(nodes_); }

private:
    LinearizedFactor linearize_prior(const PriorFactor& prior, const NodeMap& states) const;
    LinearizedFactor linearize_imu(const ImuFactor& f, const NodeMap& states) const;
    LinearizedFactor linearize_gnss(const GnssEntry& f, const NodeMap& states) const;

    NodeMap nodes_;
    std::vector<ImuFactor> imu_;
    std::vector<GnssEntry> gnss_;
    std::vector<PriorFactor> priors_;
    int next_id_{0};
};

double total_cost(const std::vector<LinearizedFactor>& factors);

}  // namespace fgins
