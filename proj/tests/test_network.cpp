#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "vmz/network.hpp"

using namespace vmz;
using namespace vmz::testing;

namespace {

Scalar in_weight(const Network& net, const std::string& target,
                 const std::string& source) {
  const auto index = id_index(net);
  const auto it = index.find(target);
  if (it == index.end()) return -1;
  const int src = index.at(source);
  Scalar total = 0;
  bool found = false;
  for (const InEdge& e : net.in_edges[it->second])
    if (e.source == src) {
      total += e.weight;
      found = true;
    }
  return found ? total : -1;
}

std::set<std::string> node_ids(const Network& net) {
  std::set<std::string> ids;
  for (const NodeRecord& n : net.nodes) ids.insert(n.id);
  return ids;
}

// (target id, source id, weight) triples, order-independent.
std::multiset<std::tuple<std::string, std::string, Scalar>> edge_set(
    const Network& net) {
  std::multiset<std::tuple<std::string, std::string, Scalar>> out;
  for (int i = 0; i < net.num_nodes(); ++i)
    for (const InEdge& e : net.in_edges[i])
      out.insert({net.nodes[i].id, net.nodes[e.source].id, e.weight});
  return out;
}

}  // namespace

TEST_CASE("normalize scales rows proportionally") {
  Network net = build_network({"A", "B"},
                              {{"ZA", true, "A"},
                               {"ZB", true, "B"},
                               {"u1", false, "A"},
                               {"u2", false, "B"}},
                              {{"ZA", "u1", 3.0},
                               {"u2", "u1", 1.0},
                               {"ZB", "u2", 2.0},
                               {"u1", "u2", 2.0}},
                              false);
  net = normalize(std::move(net));
  CHECK(net.normalized);
  CHECK(in_weight(net, "u1", "ZA") == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(in_weight(net, "u1", "u2") == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(in_weight(net, "u2", "ZB") == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("normalize leaves zealot rows and zero rows empty") {
  Network net = build_network({"A", "B"},
                              {{"ZA", true, "A"},
                               {"ZB", true, "B"},
                               {"u1", false, "A"},
                               {"lonely", false, ""}},
                              {{"ZA", "u1", 1.0}},
                              false);
  net = normalize(std::move(net));
  const auto index = id_index(net);
  CHECK(net.in_edges[index.at("ZA")].empty());
  CHECK(net.in_edges[index.at("lonely")].empty());
}

TEST_CASE("normalized row sums are one within 1e-12") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Network net = random_reachable_network(seed);
    for (int i = 0; i < net.num_nodes(); ++i) {
      if (net.nodes[i].is_zealot) continue;
      Scalar total = 0;
      for (const InEdge& e : net.in_edges[i]) total += e.weight;
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("unweighted transform sets every weight to one and is idempotent") {
  Network raw = build_network({"A", "B"},
                              {{"ZA", true, "A"},
                               {"ZB", true, "B"},
                               {"u1", false, "A"},
                               {"u2", false, "B"}},
                              {{"ZA", "u1", 3.0},
                               {"u2", "u1", 0.25},
                               {"ZB", "u2", 2.0},
                               {"u1", "u2", 7.0},
                               {"u1", "ZA", 4.0}},
                              false);
  const Network once = transform(raw, TransformMode::unweighted);
  for (int i = 0; i < once.num_nodes(); ++i)
    for (const InEdge& e : once.in_edges[i]) CHECK(e.weight == 1.0);
  for (const WeakLink& l : once.weak_links) CHECK(l.weight == 1.0);
  CHECK_FALSE(once.normalized);

  const Network twice = transform(once, TransformMode::unweighted);
  CHECK(edge_set(twice) == edge_set(once));
  CHECK(twice.weak_links.size() == once.weak_links.size());
}

TEST_CASE("undirected transform sums the two directions") {
  Network raw = build_network({"A", "B"},
                              {{"ZA", true, "A"},
                               {"ZB", true, "B"},
                               {"u1", false, "A"},
                               {"u2", false, "B"}},
                              {{"ZA", "u1", 1.0},
                               {"ZB", "u2", 1.0},
                               {"u2", "u1", 2.0},
                               {"u1", "u2", 3.0}},
                              false);
  const Network und = transform(raw, TransformMode::undirected);
  CHECK(in_weight(und, "u1", "u2") == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(in_weight(und, "u2", "u1") == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(in_weight(und, "u1", "ZA") == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("undirected transform keeps the zealot side as a weak link only") {
  // Only a raw edge u1 -> ZA exists; symmetrization creates ZA -> u1 but the
  // direction into the zealot must stay out of the adjacency.
  Network raw = build_network({"A", "B"},
                              {{"ZA", true, "A"},
                               {"ZB", true, "B"},
                               {"u1", false, "A"}},
                              {{"u1", "ZA", 4.0}, {"ZB", "u1", 1.0}},
                              false);
  const Network und = transform(raw, TransformMode::undirected);
  CHECK(in_weight(und, "u1", "ZA") == doctest::Approx(4.0).epsilon(1e-14));
  bool weak_into_za = false;
  const auto index = id_index(und);
  for (const WeakLink& l : und.weak_links)
    if (l.target == index.at("ZA") && l.source == index.at("u1") &&
        l.weight == 4.0)
      weak_into_za = true;
  CHECK(weak_into_za);
}

TEST_CASE("undirected transform keeps a self-loop at its original weight") {
  Network raw = build_network(
      {"A", "B"},
      {{"ZA", true, "A"}, {"ZB", true, "B"}, {"u1", false, "A"}},
      {{"ZA", "u1", 1.0}, {"ZB", "u1", 1.0}, {"u1", "u1", 2.5}}, false);
  const Network und = transform(raw, TransformMode::undirected);
  CHECK(in_weight(und, "u1", "u1") == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("undirected_unweighted composes both rules") {
  Network raw = build_network({"A", "B"},
                              {{"ZA", true, "A"},
                               {"ZB", true, "B"},
                               {"u1", false, "A"},
                               {"u2", false, "B"}},
                              {{"ZA", "u1", 1.0},
                               {"ZB", "u2", 1.0},
                               {"u1", "u2", 3.0}},
                              false);
  const Network uu = transform(raw, TransformMode::undirected_unweighted);
  CHECK(in_weight(uu, "u1", "u2") == 1.0);
  CHECK(in_weight(uu, "u2", "u1") == 1.0);
  CHECK(in_weight(uu, "u2", "ZB") == 1.0);
}

TEST_CASE("filter removes users unreachable from any zealot") {
  Network net = build_network({"A", "B"},
                              {{"ZA", true, "A"},
                               {"ZB", true, "B"},
                               {"u1", false, "A"},
                               {"u2", false, "B"},
                               {"u3", false, "A"}},
                              {{"ZA", "u1", 1.0},
                               {"ZB", "u1", 1.0},
                               {"u1", "u2", 1.0},
                               {"u3", "u3", 1.0}},
                              false);
  const Network kept = filter(net);
  CHECK(node_ids(kept) == std::set<std::string>{"ZA", "ZB", "u1", "u2"});
  CHECK(kept.normalized);
}

TEST_CASE("filter keeps the larger weakly connected component") {
  // Component {ZA, u1} vs {ZB, u2, u3}: the second is larger.
  Network net = build_network({"A", "B"},
                              {{"ZA", true, "A"},
                               {"ZB", true, "B"},
                               {"u1", false, "A"},
                               {"u2", false, "B"},
                               {"u3", false, "B"}},
                              {{"ZA", "u1", 1.0},
                               {"ZB", "u2", 1.0},
                               {"ZB", "u3", 1.0}},
                              false);
  const Network kept = filter(net);
  CHECK(node_ids(kept) == std::set<std::string>{"ZB", "u2", "u3"});
}

TEST_CASE("filter breaks component-size ties toward the smaller node id") {
  Network net = build_network({"A", "B"},
                              {{"Z1", true, "A"},
                               {"Z9", true, "B"},
                               {"a1", false, "A"},
                               {"b1", false, "B"}},
                              {{"Z9", "b1", 1.0}, {"Z1", "a1", 1.0}},
                              false);
  const Network kept = filter(net);
  CHECK(node_ids(kept) == std::set<std::string>{"Z1", "a1"});
}

TEST_CASE("filter applies the component step to the reachability result") {
  // u5/u6 form an unreachable cycle that bridges the two halves; once the
  // reachability pass drops them the graph splits and only one half survives.
  Network net = build_network({"A", "B"},
                              {{"ZA", true, "A"},
                               {"ZB", true, "B"},
                               {"u1", false, "A"},
                               {"u2", false, "B"},
                               {"u5", false, ""},
                               {"u6", false, ""}},
                              {{"ZA", "u1", 1.0},
                               {"ZB", "u2", 1.0},
                               {"u5", "u6", 1.0},
                               {"u6", "u5", 1.0},
                               {"u5", "u1", 1.0},
                               {"u5", "u2", 1.0}},
                              false);
  const Network kept = filter(net);
  CHECK(node_ids(kept) == std::set<std::string>{"ZA", "u1"});
}

TEST_CASE("filter is idempotent") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Network once = filter(random_reachable_network(seed));
    const Network twice = filter(once);
    CHECK(node_ids(twice) == node_ids(once));
    CHECK(edge_set(twice) == edge_set(once));
  }
}

TEST_CASE("filtered users all have an in-edge and a leader chain to a zealot") {
  for (std::uint64_t seed = 20; seed < 26; ++seed) {
    const Network net = filter(random_reachable_network(seed));
    // Breadth-first search backwards along in-edges from every user.
    for (int i = 0; i < net.num_nodes(); ++i) {
      if (net.nodes[i].is_zealot) continue;
      CHECK_FALSE(net.in_edges[i].empty());
      std::vector<char> seen(net.nodes.size(), 0);
      std::vector<int> queue{i};
      seen[i] = 1;
      bool hit_zealot = false;
      while (!queue.empty() && !hit_zealot) {
        const int v = queue.back();
        queue.pop_back();
        for (const InEdge& e : net.in_edges[v]) {
          if (net.nodes[e.source].is_zealot) hit_zealot = true;
          if (!seen[e.source]) {
            seen[e.source] = 1;
            queue.push_back(e.source);
          }
        }
      }
      CHECK(hit_zealot);
    }
  }
}

TEST_CASE("filter with no zealot-reachable core is a domain error") {
  Network cycle = build_network(
      {"A", "B"},
      {{"u1", false, "A"}, {"u2", false, "B"}},
      {{"u1", "u2", 1.0}, {"u2", "u1", 1.0}}, false);
  CHECK_THROWS_AS(filter(cycle), DomainError);
}

TEST_CASE("planted generator shapes and determinism") {
  const Network a = generate_planted(2, 10, 1, 0.8, 42);
  CHECK(a.num_users() == 20);
  CHECK(a.num_zealots() == 2);
  CHECK(a.space.size() == 2);
  CHECK(a.normalized);
  for (const NodeRecord& n : a.nodes) CHECK(n.ground_truth >= 0);

  const Network b = generate_planted(2, 10, 1, 0.8, 42);
  REQUIRE(a.num_nodes() == b.num_nodes());
  for (int i = 0; i < a.num_nodes(); ++i) {
    CHECK(a.nodes[i].id == b.nodes[i].id);
    REQUIRE(a.in_edges[i].size() == b.in_edges[i].size());
    for (std::size_t e = 0; e < a.in_edges[i].size(); ++e) {
      CHECK(a.in_edges[i][e].source == b.in_edges[i][e].source);
      CHECK(a.in_edges[i][e].weight == b.in_edges[i][e].weight);
    }
  }
}

TEST_CASE("planted generator splits in-weight p_in within party") {
  const Network net = generate_planted(2, 4, 1, 0.9, 0);
  const auto index = id_index(net);
  const int u = index.at("P1_U1");
  Scalar own = 0, other = 0;
  for (const InEdge& e : net.in_edges[u]) {
    if (net.nodes[e.source].ground_truth == net.nodes[u].ground_truth)
      own += e.weight;
    else
      other += e.weight;
  }
  CHECK(own == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(other == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("planted generator validates its arguments") {
  CHECK_THROWS_AS(generate_planted(1, 5, 1, 0.5, 0), DomainError);
  CHECK_THROWS_AS(generate_planted(2, 0, 1, 0.5, 0), DomainError);
  CHECK_THROWS_AS(generate_planted(2, 5, 0, 0.5, 0), DomainError);
  CHECK_THROWS_AS(generate_planted(2, 5, 1, -0.1, 0), DomainError);
  CHECK_THROWS_AS(generate_planted(2, 5, 1, 1.5, 0), DomainError);
}

TEST_CASE("stats counts nodes, edges and zero-exposure users") {
  const Network t2 = toy2();
  const NetworkStats s = stats(t2);
  CHECK(s.users == 2);
  CHECK(s.zealots == 2);
  CHECK(s.edges == 4);
  CHECK(s.weak_links == 0);
  CHECK(s.zero_exposure_share == 0.0);
  CHECK(s.user_labels.at("A") == 1);
  CHECK(s.zealot_labels.at("B") == 1);

  // u2 hears only u1, so it has no direct zealot edge.
  const Network chainy = build_network({"A", "B"},
                                       {{"ZA", true, "A"},
                                        {"ZB", true, "B"},
                                        {"u1", false, "A"},
                                        {"u2", false, "B"}},
                                       {{"ZA", "u1", 0.5},
                                        {"ZB", "u1", 0.5},
                                        {"u1", "u2", 1.0}});
  CHECK(stats(chainy).zero_exposure_share == doctest::Approx(0.5));
}

TEST_CASE("user adjacency excludes zealot columns") {
  const Network t2 = toy2();
  const Matrix w = Matrix(user_adjacency(t2));
  REQUIRE(w.rows() == 2);
  REQUIRE(w.cols() == 2);
  CHECK(w(0, 0) == 0.0);
  CHECK(w(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(w(1, 0) == doctest::Approx(0.5).epsilon(1e-14));
  const auto ids = user_ids(t2);
  CHECK(ids == std::vector<std::string>{"u1", "u2"});
}
