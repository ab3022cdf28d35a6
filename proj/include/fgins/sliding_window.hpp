#pragma once

#include "fgins/factor_graph.hpp"
#include "fgins/solver.hpp"

#include <memory>
#include <optional>

namespace fgins {

struct WindowConfig {
    /// Maximum number of preintegration factors kept; the window holds at
    /// most size + 1 nodes.
    int size{20};
    /// False keeps every node (full batch).
    bool marginalize{true};
    /// Re-integrate blocks about the converged start-node bias after each
    /// solve and solve again, instead of relying on first-order correction.
    bool reintegrate{false};
    SolverOptions solver;
};

class SlidingWindow {
public:
    explicit SlidingWindow(WindowConfig config);

    /// First node with a Gaussian prior; cov0 is ordered like the node tangent.
    void initialize(const StateNode& x0, const Mat15& cov0);

    /// Adds the node at block->t_end() predicted from the latest estimate,
    /// the block's factor and, if given, a GNSS factor on the new node;
    /// marginalizes while the factor count exceeds the window size; solves.
    const SolverSummary& push(std::shared_ptr<const Preintegration> block, const std::optional<GnssFactor>& gnss);

    /// Schur-complements the oldest node into the prior.
    void marginalize_oldest();

    const StateNode& latest() const;
    int latest_id() const { return latest_id_; }
    const FactorGraph& graph() const { return graph_; }
    FactorGraph& graph() { return graph_; }
    const WindowConfig& config() const { return config_; }

    int marginalizations() const { return marginalizations_; }
    int regularizations() const { return regularizations_; }
    int dropped_gnss() const { return dropped_gnss_; }
    /// False once any solve reported an increasing accepted cost.
    bool costs_monotone() const { return monotone_; }
    bool any_failure() const { return failed_; }
    const SolverSummary& last_summary() const { return last_; }

private:
    void run_solver();

    WindowConfig config_;
    FactorGraph graph_;
    int latest_id_{-1};
    int marginalizations_{0};
    int regularizations_{0};
    int dropped_gnss_{0};
    bool monotone_{true};
    bool failed_{false};
    SolverSummary last_;
};

}  // namespace fgins
