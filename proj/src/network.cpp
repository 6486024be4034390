#include "vmz/network.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

namespace vmz {

int Network::num_users() const {
  int n = 0;
  for (const auto& node : nodes)
    if (!node.is_zealot) ++n;
  return n;
}

std::vector<int> user_node_indices(const Network& net) {
  std::vector<int> idx;
  idx.reserve(net.nodes.size());
  for (int i = 0; i < net.num_nodes(); ++i)
    if (!net.nodes[i].is_zealot) idx.push_back(i);
  return idx;
}

std::vector<int> node_user_rows(const Network& net) {
  std::vector<int> rows(net.num_nodes(), -1);
  int r = 0;
  for (int i = 0; i < net.num_nodes(); ++i)
    if (!net.nodes[i].is_zealot) rows[i] = r++;
  return rows;
}

std::unordered_map<std::string, int> id_index(const Network& net) {
  std::unordered_map<std::string, int> m;
  m.reserve(net.nodes.size());
  for (int i = 0; i < net.num_nodes(); ++i) m.emplace(net.nodes[i].id, i);
  return m;
}

SparseMatrix user_adjacency(const Network& net) {
  const auto rows = node_user_rows(net);
  const int n = net.num_users();
  std::vector<Eigen::Triplet<Scalar>> triplets;
  for (int i = 0; i < net.num_nodes(); ++i) {
    if (rows[i] < 0) continue;
    for (const InEdge& e : net.in_edges[i])
      if (rows[e.source] >= 0)
        triplets.emplace_back(rows[i], rows[e.source], e.weight);
  }
  SparseMatrix w(n, n);
  w.setFromTriplets(triplets.begin(), triplets.end());
  return w;
}

std::vector<std::string> user_ids(const Network& net) {
  std::vector<std::string> ids;
  for (const auto& node : net.nodes)
    if (!node.is_zealot) ids.push_back(node.id);
  return ids;
}

Network normalize(Network net) {
  for (int i = 0; i < net.num_nodes(); ++i) {
    if (net.nodes[i].is_zealot) continue;
    long double total = 0;
    for (const InEdge& e : net.in_edges[i]) total += e.weight;
    if (total <= 0) continue;  // left for the filter
    for (InEdge& e : net.in_edges[i])
      e.weight = static_cast<Scalar>(e.weight / total);
  }
  net.normalized = true;
  return net;
}

Network transform(const Network& net, TransformMode mode) {
  Network out = net;
  out.normalized = false;
  if (mode == TransformMode::unweighted) {
    for (auto& edges : out.in_edges)
      for (InEdge& e : edges) e.weight = 1;
    for (WeakLink& l : out.weak_links) l.weight = 1;
    return out;
  }

  // Symmetrize: each unordered pair carries the sum of both raw directions,
  // counting dropped into-zealot edges as raw weight as well.
  std::map<std::pair<int, int>, Scalar> totals;
  for (int i = 0; i < net.num_nodes(); ++i)
    for (const InEdge& e : net.in_edges[i])
      totals[std::minmax(e.source, i)] += e.weight;
  for (const WeakLink& l : net.weak_links)
    totals[std::minmax(l.source, l.target)] += l.weight;

  for (auto& edges : out.in_edges) edges.clear();
  out.weak_links.clear();
  const bool drop_weights = mode == TransformMode::undirected_unweighted;
  for (const auto& [pair, total] : totals) {
    const auto [a, b] = pair;
    const Scalar w = drop_weights ? Scalar(1) : total;
    if (!out.nodes[a].is_zealot)
      out.in_edges[a].push_back({b, w});
    else
      out.weak_links.push_back({b, a, w});
    if (a == b) continue;
    if (!out.nodes[b].is_zealot)
      out.in_edges[b].push_back({a, w});
    else
      out.weak_links.push_back({a, b, w});
  }
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void merge(int a, int b) { parent[find(a)] = find(b); }
};

// Marks users without a positive-weight leader chain from any zealot dead.
bool reachability_pass(const Network& net, std::vector<char>& alive) {
  const int n = net.num_nodes();
  std::vector<std::vector<int>> out_edges(n);
  for (int i = 0; i < n; ++i) {
    if (!alive[i] || net.nodes[i].is_zealot) continue;
    for (const InEdge& e : net.in_edges[i])
      if (alive[e.source] && e.weight > 0) out_edges[e.source].push_back(i);
  }
  std::vector<char> reached(n, 0);
  std::deque<int> queue;
  for (int i = 0; i < n; ++i)
    if (alive[i] && net.nodes[i].is_zealot) {
      reached[i] = 1;
      queue.push_back(i);
    }
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : out_edges[u])
      if (!reached[v]) {
        reached[v] = 1;
        queue.push_back(v);
      }
  }
  bool changed = false;
  for (int i = 0; i < n; ++i)
    if (alive[i] && !net.nodes[i].is_zealot && !reached[i]) {
      alive[i] = 0;
      changed = true;
    }
  return changed;
}

// Keeps only the largest weakly connected component; ties go to the
// component holding the lexicographically smallest node id.
bool giant_component_pass(const Network& net, std::vector<char>& alive) {
  const int n = net.num_nodes();
  UnionFind uf(n);
  for (int i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    for (const InEdge& e : net.in_edges[i])
      if (alive[e.source] && e.weight > 0) uf.merge(i, e.source);
  }
  for (const WeakLink& l : net.weak_links)
    if (alive[l.source] && alive[l.target] && l.weight > 0)
      uf.merge(l.source, l.target);

  std::unordered_map<int, long long> size;
  std::unordered_map<int, const std::string*> min_id;
  for (int i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    const int root = uf.find(i);
    ++size[root];
    auto& cur = min_id[root];
    if (cur == nullptr || net.nodes[i].id < *cur) cur = &net.nodes[i].id;
  }
  if (size.empty()) return false;
  int best = -1;
  for (const auto& [root, sz] : size) {
    if (best < 0 || sz > size[best] ||
        (sz == size[best] && *min_id[root] < *min_id[best]))
      best = root;
  }
  bool changed = false;
  for (int i = 0; i < n; ++i)
    if (alive[i] && uf.find(i) != best) {
      alive[i] = 0;
      changed = true;
    }
  return changed;
}

}  // namespace

Network filter(const Network& net) {
  const int n = net.num_nodes();
  std::vector<char> alive(n, 1);
  bool changed = true;
  while (changed) {
    changed = reachability_pass(net, alive);
    changed = giant_component_pass(net, alive) || changed;
  }

  bool any_zealot = false, any_user = false;
  for (int i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    (net.nodes[i].is_zealot ? any_zealot : any_user) = true;
  }
  if (!any_zealot || !any_user) throw DomainError("no zealot-reachable core");

  Network out;
  out.space = net.space;
  std::vector<int> remap(n, -1);
  for (int i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    remap[i] = out.num_nodes();
    out.nodes.push_back(net.nodes[i]);
  }
  out.in_edges.resize(out.nodes.size());
  for (int i = 0; i < n; ++i) {
    if (remap[i] < 0) continue;
    for (const InEdge& e : net.in_edges[i])
      if (remap[e.source] >= 0)
        out.in_edges[remap[i]].push_back({remap[e.source], e.weight});
  }
  for (const WeakLink& l : net.weak_links)
    if (remap[l.source] >= 0 && remap[l.target] >= 0)
      out.weak_links.push_back({remap[l.source], remap[l.target], l.weight});
  return normalize(std::move(out));
}

Network generate_planted(int parties, int n_users, int n_zealots, Scalar p_in,
                         std::uint64_t /*seed*/) {
  if (parties < 2) throw DomainError("need at least two parties");
  if (n_users < 1 || n_zealots < 1)
    throw DomainError("need at least one user and one zealot per party");
  if (!(p_in >= 0 && p_in <= 1)) throw DomainError("p_in must lie in [0, 1]");

  std::vector<std::string> labels;
  for (int p = 0; p < parties; ++p) labels.push_back("P" + std::to_string(p + 1));

  Network net;
  net.space = OpinionSpace(labels);
  std::vector<std::vector<int>> party_members(parties);  // zealots then users
  for (int p = 0; p < parties; ++p)
    for (int k = 0; k < n_zealots; ++k) {
      party_members[p].push_back(net.num_nodes());
      net.nodes.push_back({labels[p] + "_Z" + std::to_string(k + 1), true, p});
    }
  std::vector<std::vector<int>> party_users(parties);
  for (int p = 0; p < parties; ++p)
    for (int k = 0; k < n_users; ++k) {
      party_members[p].push_back(net.num_nodes());
      party_users[p].push_back(net.num_nodes());
      net.nodes.push_back({labels[p] + "_U" + std::to_string(k + 1), false, p});
    }

  net.in_edges.resize(net.nodes.size());
  const int per_party = n_users + n_zealots;
  const Scalar w_in = p_in / per_party;
  const Scalar w_out = (Scalar(1) - p_in) / (Scalar(parties - 1) * per_party);
  for (int p = 0; p < parties; ++p) {
    for (int user : party_users[p]) {
      auto& edges = net.in_edges[user];
      edges.reserve(static_cast<std::size_t>(parties) * per_party);
      for (int q = 0; q < parties; ++q) {
        const Scalar w = q == p ? w_in : w_out;
        if (w <= 0) continue;
        for (int src : party_members[q]) edges.push_back({src, w});
      }
    }
  }
  return normalize(std::move(net));
}

NetworkStats stats(const Network& net) {
  NetworkStats s;
  const auto rows = node_user_rows(net);
  long long zero_exposure = 0;
  for (int i = 0; i < net.num_nodes(); ++i) {
    const NodeRecord& node = net.nodes[i];
    const std::string label =
        node.ground_truth >= 0 ? net.space.label(node.ground_truth) : "";
    if (node.is_zealot) {
      ++s.zealots;
      ++s.zealot_labels[label];
    } else {
      ++s.users;
      ++s.user_labels[label];
      s.edges += static_cast<long long>(net.in_edges[i].size());
      bool any_zealot_edge = false;
      for (const InEdge& e : net.in_edges[i])
        if (net.nodes[e.source].is_zealot && e.weight > 0) any_zealot_edge = true;
      if (!any_zealot_edge) ++zero_exposure;
    }
  }
  s.weak_links = static_cast<long long>(net.weak_links.size());
  s.zero_exposure_share =
      s.users > 0 ? static_cast<Scalar>(zero_exposure) / s.users : 0;
  return s;
}

}  // namespace vmz
