#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "vmz/opinion_space.hpp"
#include "vmz/types.hpp"

namespace vmz {

struct NodeRecord {
  std::string id;
  bool is_zealot = false;
  int ground_truth = -1;  // opinion index; -1 = absent. Zealots always have one.
};

struct InEdge {
  int source;  // node index
  Scalar weight;
};

/// Directed edge that was dropped from the in-adjacency because its target is
/// a zealot. Kept only so weak-connectivity sees the link.
struct WeakLink {
  int source;
  int target;  // always a zealot
  Scalar weight;
};

/// Directed weighted influence network. in_edges[i] lists the leaders of node
/// i; zealot rows are always empty. When normalized is set, every non-zealot
/// row with positive in-weight sums to one.
struct Network {
  OpinionSpace space;
  std::vector<NodeRecord> nodes;
  std::vector<std::vector<InEdge>> in_edges;
  std::vector<WeakLink> weak_links;
  bool normalized = false;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_users() const;
  int num_zealots() const { return num_nodes() - num_users(); }
};

/// Node indices of non-zealots, in node order. Position = user row.
std::vector<int> user_node_indices(const Network& net);

/// Inverse of user_node_indices: user row per node, -1 for zealots.
std::vector<int> node_user_rows(const Network& net);

std::unordered_map<std::string, int> id_index(const Network& net);

/// User-to-user weight block W: entry (i, j) is the in-weight of user row i
/// from user row j. Zealot in-weights are excluded (see zealot_exposure).
SparseMatrix user_adjacency(const Network& net);

/// Ids of the non-zealot nodes, in user-row order.
std::vector<std::string> user_ids(const Network& net);

enum class TransformMode { unweighted, undirected, undirected_unweighted };

/// Scale every non-zealot row to total in-weight one. Rows with zero
/// in-weight are left empty for the reachability filter to remove.
Network normalize(Network net);

/// Network variants built from raw weights: drop weights, symmetrize
/// directions (weights of both directions summed), or both. The result is
/// unnormalized; edges into zealots stay out of the adjacency.
Network transform(const Network& net, TransformMode mode);

/// Restrict to the zealot-reachable giant weakly-connected component,
/// iterating both steps to a fixed point, then re-normalize.
Network filter(const Network& net);

/// Planted-partition instance: K parties, n_users users and n_zealots zealots
/// per party; each user's in-weight splits p_in over its own party (self
/// included) and 1 - p_in uniformly over the others. Fully deterministic; the
/// seed is kept for interface stability.
Network generate_planted(int parties, int n_users, int n_zealots, Scalar p_in,
                         std::uint64_t seed);

struct NetworkStats {
  long long users = 0;
  long long zealots = 0;
  long long edges = 0;       // stored in-edges
  long long weak_links = 0;  // dropped edges into zealots
  std::map<std::string, long long> user_labels;
  std::map<std::string, long long> zealot_labels;
  Scalar zero_exposure_share = 0;  // users with no direct zealot in-edge
};

NetworkStats stats(const Network& net);

}  // namespace vmz
