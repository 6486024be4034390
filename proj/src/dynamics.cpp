#include "vmz/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "vmz/rng.hpp"

namespace vmz {

namespace {

std::vector<Pair> resolve_pairs(const PairSet& pairs, int n) {
  std::vector<Pair> out;
  if (pairs.kind == PairSet::Kind::all) {
    out.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
    return out;
  }
  std::unordered_map<std::uint64_t, char> seen;
  for (const Pair& p : pairs.pairs) {
    if (p.first < 0 || p.first >= n || p.second < 0 || p.second >= n)
      throw DomainError("pair references a user row outside the network");
    if (p.first == p.second) throw DomainError("self pairs are not sampled");
    if (seen.emplace(pair_key(p.first, p.second), 1).second)
      out.push_back(canonical_pair(p.first, p.second));
  }
  return out;
}

}  // namespace

SimStats simulate(const Network& net, const SimConfig& cfg, const PairSet& pairs,
                  const StateObserver* observer) {
  if (!net.normalized) throw DomainError("simulate needs a normalized network");
  if (cfg.samples < 1) throw DomainError("samples must be at least 1");
  if (cfg.thinning < 1) throw DomainError("thinning must be at least 1");

  const int n_nodes = net.num_nodes();
  const int k = net.space.size();
  const auto users = user_node_indices(net);
  const int n = static_cast<int>(users.size());
  if (n == 0) throw DomainError("network has no users to update");
  const long long burn_in =
      cfg.burn_in >= 0 ? cfg.burn_in : 100LL * n * k;

  std::vector<std::vector<Scalar>> cumulative(n_nodes);
  for (int u : users) {
    if (net.in_edges[u].empty())
      throw DomainError("user '" + net.nodes[u].id + "' has no leaders");
    Scalar acc = 0;
    for (const InEdge& e : net.in_edges[u]) {
      acc += e.weight;
      cumulative[u].push_back(acc);
    }
  }

  std::mt19937_64 rng(mix64(cfg.seed));
  std::vector<int> state(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    const NodeRecord& node = net.nodes[i];
    if (node.is_zealot) {
      if (node.ground_truth < 0 || node.ground_truth >= k)
        throw DomainError("zealot '" + node.id + "' has no opinion in the space");
      state[i] = node.ground_truth;
    } else {
      state[i] = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(k)));
    }
  }

  const auto step = [&] {
    const int u =
        users[uniform_below(rng, static_cast<std::uint64_t>(users.size()))];
    const auto& cum = cumulative[u];
    const Scalar r = uniform01(rng) * cum.back();
    const auto it = std::lower_bound(cum.begin(), cum.end(), r);
    const std::size_t edge =
        std::min(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
    state[u] = state[net.in_edges[u][edge].source];
  };

  SimStats out;
  out.ids = user_ids(net);
  out.pairs = resolve_pairs(pairs, n);
  Matrix counts = Matrix::Zero(n, k);
  Eigen::Matrix<long long, Eigen::Dynamic, 1> disagree =
      Eigen::Matrix<long long, Eigen::Dynamic, 1>::Zero(
          static_cast<long>(out.pairs.size()));

  for (long long t = 0; t < burn_in; ++t) step();
  for (long long s = 0; s < cfg.samples; ++s) {
    for (long long t = 0; t < cfg.thinning; ++t) step();
    for (int r = 0; r < n; ++r) counts(r, state[users[r]]) += 1;
    for (std::size_t p = 0; p < out.pairs.size(); ++p)
      if (state[users[out.pairs[p].first]] != state[users[out.pairs[p].second]])
        disagree[static_cast<long>(p)] += 1;
    if (observer != nullptr && *observer) (*observer)(state);
  }

  out.samples = cfg.samples;
  out.frequencies = counts / static_cast<Scalar>(cfg.samples);
  out.disagreement = disagree.cast<Scalar>() / static_cast<Scalar>(cfg.samples);
  return out;
}

SimStats brute_force_stationary(const Network& net, const PairSet& pairs) {
  if (!net.normalized)
    throw DomainError("stationary enumeration needs a normalized network");
  const int k = net.space.size();
  const auto users = user_node_indices(net);
  const auto rows = node_user_rows(net);
  const int n = static_cast<int>(users.size());
  if (n == 0) throw DomainError("network has no users to update");
  if (n > 8)
    throw SizeError("stationary enumeration supports at most 8 users, got " +
                    std::to_string(n));
  long long n_states = 1;
  for (int i = 0; i < n; ++i) {
    n_states *= k;
    if (n_states > 100000)
      throw SizeError("state space exceeds 100000 states");
  }

  // Per user: leaders resolved to either a user digit or a fixed opinion.
  struct Leader {
    int user_row;  // -1 when the leader is a zealot
    int opinion;   // meaningful for zealots
    Scalar weight;
  };
  std::vector<std::vector<Leader>> leaders(n);
  for (int r = 0; r < n; ++r) {
    for (const InEdge& e : net.in_edges[users[r]]) {
      const NodeRecord& src = net.nodes[e.source];
      if (src.is_zealot) {
        if (src.ground_truth < 0 || src.ground_truth >= k)
          throw DomainError("zealot '" + src.id + "' has no opinion in the space");
        leaders[r].push_back({-1, src.ground_truth, e.weight});
      } else {
        leaders[r].push_back({rows[e.source], 0, e.weight});
      }
    }
    if (leaders[r].empty())
      throw DomainError("user '" + net.nodes[users[r]].id + "' has no leaders");
  }

  std::vector<long long> pow_k(n);
  for (int i = 0; i < n; ++i) pow_k[i] = i == 0 ? 1 : pow_k[i - 1] * k;
  std::vector<int> digits(static_cast<std::size_t>(n_states) * n);
  for (long long s = 0; s < n_states; ++s)
    for (int i = 0; i < n; ++i)
      digits[static_cast<std::size_t>(s) * n + i] =
          static_cast<int>(s / pow_k[i] % k);

  Vector pi = Vector::Constant(n_states, Scalar(1) / n_states);
  Vector next(n_states);
  const Scalar pick = Scalar(1) / n;
  const Scalar tolerance = 1e-13;
  const long long max_sweeps = 200000;
  Scalar residual = std::numeric_limits<Scalar>::infinity();
  for (long long sweep = 0; sweep < max_sweeps; ++sweep) {
    next.setZero();
    for (long long s = 0; s < n_states; ++s) {
      const Scalar p = pi[s];
      if (p == 0) continue;
      const int* d = &digits[static_cast<std::size_t>(s) * n];
      for (int i = 0; i < n; ++i) {
        for (const Leader& l : leaders[i]) {
          const int opinion = l.user_row < 0 ? l.opinion : d[l.user_row];
          const long long t = s + static_cast<long long>(opinion - d[i]) * pow_k[i];
          next[t] += p * pick * l.weight;
        }
      }
    }
    next /= next.sum();
    residual = (next - pi).cwiseAbs().maxCoeff();
    pi.swap(next);
    if (residual <= tolerance) break;
  }
  if (residual > tolerance)
    throw ConvergenceError("stationary enumeration did not reach residual 1e-13");

  SimStats out;
  out.ids = user_ids(net);
  out.pairs = resolve_pairs(pairs, n);
  out.frequencies = Matrix::Zero(n, k);
  out.disagreement = Vector::Zero(static_cast<long>(out.pairs.size()));
  for (long long s = 0; s < n_states; ++s) {
    const int* d = &digits[static_cast<std::size_t>(s) * n];
    for (int i = 0; i < n; ++i) out.frequencies(i, d[i]) += pi[s];
    for (std::size_t p = 0; p < out.pairs.size(); ++p)
      if (d[out.pairs[p].first] != d[out.pairs[p].second])
        out.disagreement[static_cast<long>(p)] += pi[s];
  }
  out.samples = 0;
  return out;
}

}  // namespace vmz
