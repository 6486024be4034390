#pragma once

#include <unordered_map>
#include <vector>

#include "vmz/equilibrium.hpp"
#include "vmz/network.hpp"
#include "vmz/types.hpp"

namespace vmz {

/// Pairwise discord probabilities over a set of unordered user pairs.
struct DiscordStore {
  enum class Mode { exact, approx };
  Mode mode = Mode::approx;
  std::vector<std::string> ids;  // user row -> node id
  std::vector<Pair> pairs;       // canonical i < j, unique
  Vector values;
  long long iterations = 0;
  Scalar residual = 0;
  Scalar tolerance = 0;

  std::unordered_map<std::uint64_t, int> index;

  /// Stored value; the diagonal is the boundary value 0 and is never stored.
  Scalar value(int i, int j) const {
    if (i == j) return 0;
    auto it = index.find(pair_key(i, j));
    if (it == index.end()) throw DomainError("pair not in discord store");
    return values[it->second];
  }
  bool contains(int i, int j) const {
    return i != j && index.count(pair_key(i, j)) > 0;
  }
  void rebuild_index();
};

/// Iterative solve of the discord fixed point
///   rho_ij = 1/2 [ sum_k w_ik rho_jk + sum_k w_jk rho_ik
///                  + sum_s z_i^s (1 - x_j^s) + sum_s z_j^s (1 - x_i^s) ]
/// with rho_jj = 0 and the k sums over user leaders. With PairSet::all the
/// full user-pair system is solved densely; with a listed set only the
/// leader-closure of the requested pairs is materialized.
DiscordStore discord_exact(const Network& net, const OpinionMatrix& x,
                           const PairSet& pairs, const SolverConfig& cfg = {});

/// Independence approximation rho_ij = sum_s x_i^s (1 - x_j^s).
DiscordStore discord_approx(const OpinionMatrix& x, const PairSet& pairs);

struct ApproximationReport {
  long long pair_count = 0;
  Scalar mean_error = 0;   // mean(approx - exact)
  Scalar max_error = 0;    // largest signed error
  Scalar min_error = 0;    // smallest signed error
  Scalar max_abs_error = 0;
  Scalar over_share = 0;   // pairs with approx >= exact - 1e-12
  Histogram signed_errors;
};

/// Error summary of the approximation against the exact values; both stores
/// must cover the same pair set.
ApproximationReport approximation_report(const DiscordStore& exact,
                                         const DiscordStore& approx,
                                         int bins = 50);

}  // namespace vmz
