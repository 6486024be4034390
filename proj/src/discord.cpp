#include "vmz/discord.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vmz {

void DiscordStore::rebuild_index() {
  index.clear();
  index.reserve(pairs.size());
  for (int p = 0; p < static_cast<int>(pairs.size()); ++p)
    index.emplace(pair_key(pairs[p].first, pairs[p].second), p);
}

namespace {

void check_solved_on(const Network& net, const OpinionMatrix& x) {
  const auto ids = user_ids(net);
  if (ids != x.ids)
    throw DomainError("opinion matrix does not match the network's users");
  if (x.values.rows() != static_cast<long>(ids.size()) ||
      x.values.cols() != net.space.size())
    throw DomainError("opinion matrix has wrong shape");
}

std::vector<Pair> canonical_unique(const std::vector<Pair>& requested, int n) {
  std::vector<Pair> out;
  out.reserve(requested.size());
  std::unordered_map<std::uint64_t, char> seen;
  for (const Pair& p : requested) {
    if (p.first < 0 || p.first >= n || p.second < 0 || p.second >= n)
      throw DomainError("pair references a user row outside the network");
    if (p.first == p.second)
      throw DomainError("self pairs are the boundary value zero, not stored");
    if (seen.emplace(pair_key(p.first, p.second), 1).second)
      out.push_back(canonical_pair(p.first, p.second));
  }
  return out;
}

std::vector<Pair> all_pairs(int n) {
  std::vector<Pair> out;
  out.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

DiscordStore solve_all(const Network& net, const OpinionMatrix& x,
                       const SolverConfig& cfg) {
  const int n = static_cast<int>(x.ids.size());
  const SparseMatrix w = user_adjacency(net);
  const Matrix one_minus = (1 - x.values.array()).matrix();
  const Matrix m = zealot_exposure(net) * one_minus.transpose();
  const Matrix c = Scalar(0.5) * (m + m.transpose());

  Matrix approx = x.values * one_minus.transpose();
  Matrix r = Scalar(0.5) * (approx + approx.transpose());
  r.diagonal().setZero();

  Scalar residual = std::numeric_limits<Scalar>::infinity();
  long long iter = 0;
  Matrix wr(n, n), next(n, n);
  while (iter < cfg.max_iterations) {
    wr.noalias() = w * r;
    next = Scalar(0.5) * (wr + wr.transpose()) + c;
    next.diagonal().setZero();
    residual = n > 0 ? (next - r).cwiseAbs().maxCoeff() : 0;
    r.swap(next);
    ++iter;
    if (residual <= cfg.tolerance) break;
  }
  if (residual > cfg.tolerance)
    throw ConvergenceError("discord solve hit " +
                           std::to_string(cfg.max_iterations) +
                           " iterations, residual " + std::to_string(residual));

  DiscordStore store;
  store.mode = DiscordStore::Mode::exact;
  store.ids = x.ids;
  store.pairs = all_pairs(n);
  store.values.resize(static_cast<long>(store.pairs.size()));
  for (std::size_t p = 0; p < store.pairs.size(); ++p)
    store.values[static_cast<long>(p)] = r(store.pairs[p].first, store.pairs[p].second);
  store.iterations = iter;
  store.residual = residual;
  store.tolerance = cfg.tolerance;
  store.rebuild_index();
  return store;
}

DiscordStore solve_listed(const Network& net, const OpinionMatrix& x,
                          const std::vector<Pair>& requested,
                          const SolverConfig& cfg) {
  const int n = static_cast<int>(x.ids.size());
  const std::vector<Pair> wanted = canonical_unique(requested, n);
  const auto rows = node_user_rows(net);
  const auto user_nodes = user_node_indices(net);
  const Matrix z = zealot_exposure(net);
  const int k = net.space.size();

  // Per user row: leaders that are users, as (user row, weight).
  std::vector<std::vector<std::pair<int, Scalar>>> leaders(n);
  for (int r = 0; r < n; ++r)
    for (const InEdge& e : net.in_edges[user_nodes[r]])
      if (rows[e.source] >= 0) leaders[r].push_back({rows[e.source], e.weight});

  // Closure: every pair the update of a requested pair can touch.
  std::vector<Pair> closure = wanted;
  std::unordered_map<std::uint64_t, int> pos;
  for (int p = 0; p < static_cast<int>(closure.size()); ++p)
    pos.emplace(pair_key(closure[p].first, closure[p].second), p);
  auto intern = [&](int a, int b) {
    const auto key = pair_key(a, b);
    auto it = pos.find(key);
    if (it != pos.end()) return it->second;
    const int idx = static_cast<int>(closure.size());
    closure.push_back(canonical_pair(a, b));
    pos.emplace(key, idx);
    return idx;
  };
  for (std::size_t head = 0; head < closure.size(); ++head) {
    const auto [i, j] = closure[head];
    for (const auto& [lead, weight] : leaders[i])
      if (lead != j && weight > 0) intern(j, lead);
    for (const auto& [lead, weight] : leaders[j])
      if (lead != i && weight > 0) intern(i, lead);
  }

  // CSR of the update operator plus the constant zealot terms.
  const int total = static_cast<int>(closure.size());
  std::vector<std::size_t> row_start(total + 1, 0);
  std::vector<int> col;
  std::vector<Scalar> coef;
  Vector constant(total);
  const auto at = [&](int a, int b) { return pos.at(pair_key(a, b)); };
  for (int p = 0; p < total; ++p) {
    const auto [i, j] = closure[p];
    for (const auto& [lead, weight] : leaders[i])
      if (lead != j && weight > 0) {
        col.push_back(at(j, lead));
        coef.push_back(Scalar(0.5) * weight);
      }
    for (const auto& [lead, weight] : leaders[j])
      if (lead != i && weight > 0) {
        col.push_back(at(i, lead));
        coef.push_back(Scalar(0.5) * weight);
      }
    row_start[p + 1] = col.size();
    Scalar zi = 0, zj = 0;
    for (int s = 0; s < k; ++s) {
      zi += z(i, s) * (1 - x.values(j, s));
      zj += z(j, s) * (1 - x.values(i, s));
    }
    constant[p] = Scalar(0.5) * (zi + zj);
  }

  Vector rho(total);
  for (int p = 0; p < total; ++p) {
    const auto [i, j] = closure[p];
    Scalar v = 0;
    for (int s = 0; s < k; ++s) v += x.values(i, s) * (1 - x.values(j, s));
    rho[p] = v;
  }

  Scalar residual = std::numeric_limits<Scalar>::infinity();
  long long iter = 0;
  Vector next(total);
  while (iter < cfg.max_iterations) {
    for (int p = 0; p < total; ++p) {
      Scalar v = constant[p];
      for (std::size_t e = row_start[p]; e < row_start[p + 1]; ++e)
        v += coef[e] * rho[col[e]];
      next[p] = v;
    }
    residual = total > 0 ? (next - rho).cwiseAbs().maxCoeff() : 0;
    rho.swap(next);
    ++iter;
    if (residual <= cfg.tolerance) break;
  }
  if (residual > cfg.tolerance)
    throw ConvergenceError("discord solve hit " +
                           std::to_string(cfg.max_iterations) +
                           " iterations, residual " + std::to_string(residual));

  DiscordStore store;
  store.mode = DiscordStore::Mode::exact;
  store.ids = x.ids;
  store.pairs = wanted;
  store.values = rho.head(static_cast<long>(wanted.size()));
  store.iterations = iter;
  store.residual = residual;
  store.tolerance = cfg.tolerance;
  store.rebuild_index();
  return store;
}

}  // namespace

DiscordStore discord_exact(const Network& net, const OpinionMatrix& x,
                           const PairSet& pairs, const SolverConfig& cfg) {
  if (cfg.tolerance <= 0) throw DomainError("tolerance must be positive");
  if (cfg.max_iterations < 1) throw DomainError("max_iterations must be positive");
  if (!net.normalized) throw DomainError("network is not normalized");
  check_solved_on(net, x);
  if (pairs.kind == PairSet::Kind::all) return solve_all(net, x, cfg);
  return solve_listed(net, x, pairs.pairs, cfg);
}

DiscordStore discord_approx(const OpinionMatrix& x, const PairSet& pairs) {
  const int n = static_cast<int>(x.ids.size());
  DiscordStore store;
  store.mode = DiscordStore::Mode::approx;
  store.ids = x.ids;
  store.pairs = pairs.kind == PairSet::Kind::all ? all_pairs(n)
                                                 : canonical_unique(pairs.pairs, n);
  store.values.resize(static_cast<long>(store.pairs.size()));
  const int k = static_cast<int>(x.values.cols());
  for (std::size_t p = 0; p < store.pairs.size(); ++p) {
    const auto [i, j] = store.pairs[p];
    Scalar v = 0;
    for (int s = 0; s < k; ++s) v += x.values(i, s) * (1 - x.values(j, s));
    store.values[static_cast<long>(p)] = v;
  }
  store.rebuild_index();
  return store;
}

ApproximationReport approximation_report(const DiscordStore& exact,
                                         const DiscordStore& approx,
                                         int bins) {
  if (exact.pairs.size() != approx.pairs.size())
    throw DomainError("discord stores cover different pair sets");
  ApproximationReport rep;
  rep.pair_count = static_cast<long long>(exact.pairs.size());
  std::vector<Scalar> errors;
  errors.reserve(exact.pairs.size());
  long long over = 0;
  for (std::size_t p = 0; p < exact.pairs.size(); ++p) {
    const auto [i, j] = exact.pairs[p];
    const Scalar e = approx.value(i, j) - exact.values[static_cast<long>(p)];
    errors.push_back(e);
    if (e >= -1e-12) ++over;
  }
  if (!errors.empty()) {
    rep.mean_error =
        std::accumulate(errors.begin(), errors.end(), Scalar(0)) / errors.size();
    rep.max_error = *std::max_element(errors.begin(), errors.end());
    rep.min_error = *std::min_element(errors.begin(), errors.end());
    rep.max_abs_error = std::max(std::abs(rep.max_error), std::abs(rep.min_error));
    rep.over_share = static_cast<Scalar>(over) / errors.size();
  }
  rep.signed_errors = make_histogram(errors, bins, errors.empty() ? 0 : rep.min_error,
                                     errors.empty() ? 0 : rep.max_error);
  return rep;
}

}  // namespace vmz
