#include <doctest.h>

#include <cmath>
#include <vector>

#include "test_support.hpp"
#include "vmz/discord.hpp"
#include "vmz/equilibrium.hpp"

using namespace vmz;
using namespace vmz::testing;

TEST_CASE("independent users make the approximation exact") {
  const Network net = toy_ind();
  const OpinionMatrix x = solve_equilibrium(net);
  const DiscordStore exact = discord_exact(net, x, PairSet::all());
  const DiscordStore approx = discord_approx(x, PairSet::all());
  REQUIRE(exact.pairs.size() == 1);
  CHECK(std::abs(exact.value(0, 1) - 0.6) <= 1e-10);
  CHECK(std::abs(approx.value(0, 1) - 0.6) <= 1e-10);
  CHECK(std::abs(exact.value(0, 1) - approx.value(0, 1)) <= 1e-10);
}

TEST_CASE("two-user loop discord and its overestimating approximation") {
  const Network net = toy2();
  const OpinionMatrix x = solve_equilibrium(net);
  const DiscordStore exact = discord_exact(net, x, PairSet::all());
  const DiscordStore approx = discord_approx(x, PairSet::all());
  CHECK(std::abs(exact.value(0, 1) - 1.0 / 3.0) <= 1e-9);
  CHECK(std::abs(approx.value(0, 1) - 5.0 / 9.0) <= 1e-9);
  CHECK(exact.mode == DiscordStore::Mode::exact);
  CHECK(approx.mode == DiscordStore::Mode::approx);
}

TEST_CASE("zealot-only-leader networks solve to the approximation") {
  for (std::uint64_t seed = 70; seed < 76; ++seed) {
    // Strip user-to-user edges so every leader is a zealot.
    Network base = random_reachable_network(seed);
    std::vector<EdgeSpec> edges;
    std::vector<NodeSpec> nodes;
    for (int i = 0; i < base.num_nodes(); ++i) {
      const NodeRecord& n = base.nodes[i];
      nodes.push_back({n.id, n.is_zealot,
                       n.ground_truth < 0 ? "" : base.space.label(n.ground_truth)});
      for (const InEdge& e : base.in_edges[i])
        if (base.nodes[e.source].is_zealot)
          edges.push_back({base.nodes[e.source].id, n.id, e.weight});
    }
    const Network net = filter(build_network(base.space.labels(), nodes, edges));
    const OpinionMatrix x = solve_equilibrium(net);
    const DiscordStore exact = discord_exact(net, x, PairSet::all());
    const DiscordStore approx = discord_approx(x, PairSet::all());
    for (std::size_t p = 0; p < exact.pairs.size(); ++p)
      CHECK(std::abs(exact.values[static_cast<long>(p)] -
                     approx.values[static_cast<long>(p)]) <= 1e-10);
  }
}

TEST_CASE("dense and scoped solvers agree on every pair") {
  for (std::uint64_t seed = 80; seed < 86; ++seed) {
    const Network net = random_reachable_network(seed);
    if (net.num_users() < 2) continue;
    const OpinionMatrix x = solve_equilibrium(net);
    const DiscordStore dense = discord_exact(net, x, PairSet::all());
    const DiscordStore scoped = discord_exact(net, x, PairSet::listed(dense.pairs));
    REQUIRE(dense.pairs.size() == scoped.pairs.size());
    for (std::size_t p = 0; p < dense.pairs.size(); ++p)
      CHECK(std::abs(dense.values[static_cast<long>(p)] -
                     scoped.values[static_cast<long>(p)]) <= 1e-9);
  }
}

TEST_CASE("a single requested pair solves against its leader closure") {
  const Network net = random_reachable_network(81);
  REQUIRE(net.num_users() >= 2);
  const OpinionMatrix x = solve_equilibrium(net);
  const DiscordStore dense = discord_exact(net, x, PairSet::all());
  const DiscordStore one = discord_exact(net, x, PairSet::listed({{1, 0}}));
  REQUIRE(one.pairs.size() == 1);
  CHECK(one.pairs[0] == Pair{0, 1});
  CHECK(std::abs(one.value(0, 1) - dense.value(0, 1)) <= 1e-9);
}

TEST_CASE("discord is symmetric and zero on the diagonal") {
  const Network net = random_reachable_network(82);
  REQUIRE(net.num_users() >= 2);
  const OpinionMatrix x = solve_equilibrium(net);
  const DiscordStore exact = discord_exact(net, x, PairSet::all());
  CHECK(exact.value(0, 1) == exact.value(1, 0));
  CHECK(exact.value(0, 0) == 0.0);
  CHECK(exact.value(1, 1) == 0.0);

  // The approximation formula itself is orientation-independent because the
  // rows live on the simplex.
  const DiscordStore approx = discord_approx(x, PairSet::all());
  for (const Pair& p : approx.pairs) {
    Scalar forward = 0, backward = 0;
    for (long s = 0; s < x.values.cols(); ++s) {
      forward += x.values(p.first, s) * (1 - x.values(p.second, s));
      backward += x.values(p.second, s) * (1 - x.values(p.first, s));
    }
    CHECK(std::abs(forward - backward) <= 1e-12);
  }
}

TEST_CASE("discord values are bounded and dominate coordinate gaps") {
  for (std::uint64_t seed = 90; seed < 96; ++seed) {
    const Network net = random_reachable_network(seed);
    if (net.num_users() < 2) continue;
    const OpinionMatrix x = solve_equilibrium(net);
    const DiscordStore exact = discord_exact(net, x, PairSet::all());
    for (std::size_t p = 0; p < exact.pairs.size(); ++p) {
      const auto [i, j] = exact.pairs[p];
      const Scalar rho = exact.values[static_cast<long>(p)];
      CHECK(rho >= -1e-12);
      CHECK(rho <= 1.0 + 1e-12);
      for (long s = 0; s < x.values.cols(); ++s)
        CHECK(rho >= std::abs(x.values(i, s) - x.values(j, s)) - 1e-9);
    }
  }
}

TEST_CASE("requested pairs are deduplicated and canonicalized") {
  const Network net = toy2();
  const OpinionMatrix x = solve_equilibrium(net);
  const DiscordStore store =
      discord_exact(net, x, PairSet::listed({{1, 0}, {0, 1}, {1, 0}}));
  REQUIRE(store.pairs.size() == 1);
  CHECK(store.pairs[0] == Pair{0, 1});
}

TEST_CASE("empty pair list yields an empty store") {
  const Network net = toy2();
  const OpinionMatrix x = solve_equilibrium(net);
  const DiscordStore store = discord_exact(net, x, PairSet::none());
  CHECK(store.pairs.empty());
  CHECK(store.values.size() == 0);
}

TEST_CASE("invalid pairs and lookups are domain errors") {
  const Network net = toy2();
  const OpinionMatrix x = solve_equilibrium(net);
  CHECK_THROWS_AS(discord_exact(net, x, PairSet::listed({{0, 0}})), DomainError);
  CHECK_THROWS_AS(discord_exact(net, x, PairSet::listed({{0, 5}})), DomainError);
  CHECK_THROWS_AS(discord_exact(net, x, PairSet::listed({{-1, 1}})), DomainError);
  const DiscordStore store = discord_exact(net, x, PairSet::none());
  CHECK_THROWS_AS(store.value(0, 1), DomainError);
}

TEST_CASE("mismatched opinions are rejected") {
  const OpinionMatrix x = solve_equilibrium(toy2());
  OpinionMatrix wrong = x;
  wrong.ids[0] = "someone_else";
  CHECK_THROWS_AS(discord_exact(toy2(), wrong, PairSet::all()), DomainError);
}

TEST_CASE("iteration budget exhaustion is a convergence error") {
  const Network net = toy2();
  const OpinionMatrix x = solve_equilibrium(net);
  SolverConfig cfg;
  cfg.max_iterations = 1;
  CHECK_THROWS_AS(discord_exact(net, x, PairSet::all(), cfg), ConvergenceError);
}

TEST_CASE("approximation report on identical stores is all zeros") {
  const OpinionMatrix x = solve_equilibrium(toy_ind());
  const DiscordStore approx = discord_approx(x, PairSet::all());
  const ApproximationReport rep = approximation_report(approx, approx);
  CHECK(rep.pair_count == 1);
  CHECK(rep.mean_error == 0.0);
  CHECK(rep.max_abs_error == 0.0);
  CHECK(rep.over_share == 1.0);
}

TEST_CASE("approximation report quantifies the two-user loop gap") {
  const Network net = toy2();
  const OpinionMatrix x = solve_equilibrium(net);
  const DiscordStore exact = discord_exact(net, x, PairSet::all());
  const DiscordStore approx = discord_approx(x, PairSet::all());
  const ApproximationReport rep = approximation_report(exact, approx);
  CHECK(std::abs(rep.mean_error - 2.0 / 9.0) <= 1e-9);
  CHECK(rep.over_share == 1.0);
  CHECK(rep.signed_errors.counts.size() == 50);
}

TEST_CASE("approximation report rejects mismatched pair sets") {
  const OpinionMatrix x = solve_equilibrium(toy2());
  const DiscordStore all = discord_approx(x, PairSet::all());
  const DiscordStore none = discord_approx(x, PairSet::none());
  CHECK_THROWS_AS(approximation_report(all, none), DomainError);
}
