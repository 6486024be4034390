#include "vmz/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "vmz/rng.hpp"

namespace vmz {

Matrix zealot_exposure(const Network& net) {
  const int n = net.num_users();
  const int k = net.space.size();
  Matrix z = Matrix::Zero(n, k);
  int row = 0;
  for (int i = 0; i < net.num_nodes(); ++i) {
    if (net.nodes[i].is_zealot) continue;
    for (const InEdge& e : net.in_edges[i]) {
      const NodeRecord& src = net.nodes[e.source];
      if (src.is_zealot) {
        if (src.ground_truth < 0 || src.ground_truth >= k)
          throw DomainError("zealot '" + src.id + "' has no opinion in the space");
        z(row, src.ground_truth) += e.weight;
      }
    }
    ++row;
  }
  return z;
}

OpinionMatrix solve_equilibrium(const Network& net, const SolverConfig& cfg) {
  if (cfg.tolerance <= 0) throw DomainError("tolerance must be positive");
  if (cfg.max_iterations < 1) throw DomainError("max_iterations must be positive");
  if (!net.normalized) throw DomainError("network is not normalized");

  const int n = net.num_users();
  const int k = net.space.size();
  const SparseMatrix w = user_adjacency(net);
  const Matrix z = zealot_exposure(net);

  Matrix x = cfg.init == SolverConfig::Init::uniform
                 ? Matrix::Constant(n, k, Scalar(1) / k)
                 : Matrix::Zero(n, k);
  Matrix next(n, k);

  OpinionMatrix result;
  result.ids = user_ids(net);
  result.tolerance = cfg.tolerance;

  Scalar residual = std::numeric_limits<Scalar>::infinity();
  long long iter = 0;
  while (iter < cfg.max_iterations) {
    next = w * x + z;
    residual = n > 0 ? (next - x).cwiseAbs().maxCoeff() : 0;
    x.swap(next);
    ++iter;
    if (cfg.init == SolverConfig::Init::uniform && iter % 100 == 0) {
      const Scalar drift = (x.rowwise().sum().array() - 1).abs().maxCoeff();
      if (n > 0 && drift > 1e-9)
        throw Error("row-sum invariant broken during iteration");
    }
    if (residual <= cfg.tolerance) {
      result.values = std::move(x);
      result.iterations = iter;
      result.residual = residual;
      return result;
    }
  }
  throw ConvergenceError("equilibrium solve hit " +
                         std::to_string(cfg.max_iterations) +
                         " iterations, residual " + std::to_string(residual));
}

WalkEstimate random_walk_estimate(const Network& net, const std::string& node_id,
                                  long long walks, std::uint64_t seed,
                                  long long step_cap) {
  if (walks < 1) throw DomainError("walks must be at least 1");
  if (step_cap < 1) throw DomainError("step_cap must be at least 1");
  const auto index = id_index(net);
  const auto it = index.find(node_id);
  if (it == index.end()) throw DomainError("unknown node id '" + node_id + "'");
  const int start = it->second;
  const int k = net.space.size();

  // Per-node cumulative weights for inverse-CDF leader sampling.
  const int n = net.num_nodes();
  std::vector<std::vector<Scalar>> cumulative(n);
  for (int i = 0; i < n; ++i) {
    if (net.nodes[i].is_zealot) continue;
    Scalar acc = 0;
    cumulative[i].reserve(net.in_edges[i].size());
    for (const InEdge& e : net.in_edges[i]) {
      acc += e.weight;
      cumulative[i].push_back(acc);
    }
  }

  WalkEstimate est;
  est.frequencies = Vector::Zero(k);
  for (long long walk = 0; walk < walks; ++walk) {
    std::mt19937_64 rng(stream_seed(seed, static_cast<std::uint64_t>(walk)));
    int node = start;
    long long steps = 0;
    while (!net.nodes[node].is_zealot && steps < step_cap) {
      const auto& cum = cumulative[node];
      if (cum.empty())
        throw DomainError("walk stranded at '" + net.nodes[node].id +
                          "', node has no leaders");
      const Scalar u = uniform01(rng) * cum.back();
      const auto pos = std::lower_bound(cum.begin(), cum.end(), u);
      const std::size_t edge =
          std::min(static_cast<std::size_t>(pos - cum.begin()), cum.size() - 1);
      node = net.in_edges[node][edge].source;
      ++steps;
    }
    if (net.nodes[node].is_zealot) {
      const int s = net.nodes[node].ground_truth;
      if (s < 0 || s >= k)
        throw DomainError("zealot '" + net.nodes[node].id +
                          "' has no opinion in the space");
      est.frequencies[s] += 1;
      ++est.absorbed;
    } else {
      ++est.capped;
    }
  }
  if (est.capped * 100 > walks)
    throw ConvergenceError(std::to_string(est.capped) + " of " +
                           std::to_string(walks) + " walks hit the step cap");
  est.frequencies /= static_cast<Scalar>(est.absorbed);
  return est;
}

}  // namespace vmz
