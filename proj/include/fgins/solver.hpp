#pragma once

#include "fgins/factor_graph.hpp"

#include <string>
#include <vector>

namespace fgins {

struct SolverOptions {
    int max_iterations{20};
    double relative_tolerance{1e-8};
    double gradient_tolerance{1e-10};
    /// Small on purpose: the window problem is nearly linear, and a larger
    /// start over-damps the weakly observable yaw and bias directions.
    double initial_lambda{1e-8};
    Execution exec{Execution::Serial};
};

struct SolverSummary {
    bool converged{false};
    bool failed{false};
    int iterations{0};
    /// Cost at the start and after every accepted step.
    std::vector<double> costs;
    std::string message;

    bool monotone() const;
};

/// Levenberg–Marquardt with Jacobi-scaled damping on the sparse normal
/// equations. Throws std::invalid_argument when the graph has neither a
/// GNSS factor nor a prior, since the problem is then unobservable.
SolverSummary solve(FactorGraph& graph, const SolverOptions& options = {});

}  // namespace fgins
