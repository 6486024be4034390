#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vmz/network.hpp"
#include "vmz/types.hpp"

namespace vmz {

struct SolverConfig {
  Scalar tolerance = 1e-10;  // sup-norm residual
  long long max_iterations = 100000;
  enum class Init { uniform, zeros };
  Init init = Init::uniform;
};

/// Equilibrium opinion distributions: row per user, column per opinion.
struct OpinionMatrix {
  std::vector<std::string> ids;  // user row -> node id
  Matrix values;
  long long iterations = 0;
  Scalar residual = 0;
  Scalar tolerance = 0;
};

/// Aggregated in-weight from zealots holding each opinion, per user row.
Matrix zealot_exposure(const Network& net);

/// Jacobi fixed-point solve of x = W x + z over all users. Requires a
/// normalized network in which every user has a leader chain to a zealot.
OpinionMatrix solve_equilibrium(const Network& net, const SolverConfig& cfg = {});

struct WalkEstimate {
  Vector frequencies;       // absorption share per opinion
  long long capped = 0;     // walks that hit the step cap
  long long absorbed = 0;
};

/// Empirical absorption frequencies of backward random walks started at the
/// given node: step to a leader with probability its edge weight, stop on a
/// zealot. Walk w uses an engine seeded from (seed, w).
WalkEstimate random_walk_estimate(const Network& net, const std::string& node_id,
                                  long long walks, std::uint64_t seed,
                                  long long step_cap = 1000000);

}  // namespace vmz
