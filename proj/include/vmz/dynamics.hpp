#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vmz/network.hpp"
#include "vmz/types.hpp"

namespace vmz {

struct SimConfig {
  long long burn_in = -1;  // < 0 -> default 100 * users * K
  long long samples = 10000;
  long long thinning = 1;
  std::uint64_t seed = 0;
};

/// Empirical (or exact-chain) opinion statistics.
struct SimStats {
  std::vector<std::string> ids;  // user row -> node id
  Matrix frequencies;            // users x K
  std::vector<Pair> pairs;
  Vector disagreement;
  long long samples = 0;
};

/// Observer invoked with the full opinion state (per node, zealots included)
/// at every recorded sample. Test hook; pass nullptr otherwise.
using StateObserver = std::function<void(const std::vector<int>&)>;

/// Asynchronous voter dynamics: each step picks a non-zealot uniformly at
/// random and copies the current opinion of one of its leaders, sampled by
/// edge weight. Opinions start uniform at random; zealots never move.
SimStats simulate(const Network& net, const SimConfig& cfg,
                  const PairSet& pairs = PairSet::none(),
                  const StateObserver* observer = nullptr);

/// Exact stationary distribution of the K^n-state chain of the same
/// dynamics, by matrix-free power iteration to sup-norm residual 1e-13.
/// Bounds: at most 8 users and at most 100000 states.
SimStats brute_force_stationary(const Network& net,
                                const PairSet& pairs = PairSet::all());

}  // namespace vmz
