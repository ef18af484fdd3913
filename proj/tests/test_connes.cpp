#include <doctest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "ncg/connes.hpp"
#include "ncg/error.hpp"
#include "ncg/spectral.hpp"
#include "support/fixtures.hpp"

using namespace ncg;

namespace {

NodeVector random_function(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = u(rng);
  return NodeVector(v);
}

void check_certificate(const ConnesResult& r, NodeIndex a = 0) {
  CHECK(r.certified);
  CHECK(r.kkt_residual <= 1e-7);
  CHECK(r.slacks.values.maxCoeff() <= 1.0 + 1e-7);
  CHECK(r.multipliers.minCoeff() >= 0.0);
  CHECK(r.optimizer[a] == 0.0);
}

}  // namespace

TEST_CASE("commutator norm on the path of 3 nodes") {
  const Graph g = build_path(3);
  const NodeVector f{0.0, 1.0, 3.0};
  const auto p = constraint_profile(g, f);
  CHECK(p.values[0] == 1.0);
  CHECK(p.values[1] == 5.0);
  CHECK(p.values[2] == 4.0);
  CHECK(commutator_norm(g, f) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("commutator norm matches the operator norm of [D,f]") {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    // Up to 20 nodes at high density: the assembled map exceeds 64 x 64.
    const Graph g = build_random(2 + seed % 19, 0.3 + 0.01 * double(seed), seed);
    const NodeVector f = random_function(g.node_count(), rng);
    const double formula = commutator_norm(g, f);
    CHECK(std::abs(formula - dense_operator_norm(commutator_Df(g, f))) <= 1e-8 * std::max(1.0, formula));
  }
}

TEST_CASE("square") {
  const auto r = connes_distance(build_cycle(4), {0, 2});
  CHECK(std::abs(r.distance - std::sqrt(2.0)) <= 1e-6);
  check_certificate(r);
}

TEST_CASE("adjacent nodes without a triangle sit at distance one") {
  CHECK(connes_distance(build_path(2), {0, 1}).distance == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(connes_distance(build_cycle(4), {0, 1}).distance == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(connes_distance(build_cycle(5), {0, 1}).distance == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(connes_distance(build_binary_tree(3), {1, 3}).distance == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("bonds inside triangles are shorter than one") {
  // Triangle: by symmetry the third node sits at f_b / 2, giving
  // f_b^2 (1 + 1/4) = 1 at both a and b.
  const auto tri = connes_distance(build_complete(3), {0, 1});
  CHECK(tri.distance == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-9));
  check_certificate(tri);
  // K4: both other nodes at f_b / 2, giving f_b^2 (1 + 2/4) = 1.
  const auto k4 = connes_distance(build_complete(4), {2, 3});
  CHECK(k4.distance == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-9));
  check_certificate(k4, 2);
}

TEST_CASE("lattice closed form") {
  CHECK(lattice_closed_form(0) == 0.0);
  CHECK(lattice_closed_form(1) == 1.0);
  CHECK(lattice_closed_form(2) == doctest::Approx(std::sqrt(2.0)));
  CHECK(lattice_closed_form(3) == doctest::Approx(std::sqrt(5.0)));
  CHECK(lattice_closed_form(4) == doctest::Approx(std::sqrt(8.0)));
  for (std::size_t n = 1; n <= 40; ++n) {
    CHECK(lattice_closed_form(n + 1) > lattice_closed_form(n));
    CHECK(lattice_closed_form(n) <= double(n));
    const auto steps = lattice_optimal_steps(n);
    CHECK(steps.admissible(1e-12));
    CHECK(steps.total() == doctest::Approx(lattice_closed_form(n)).epsilon(1e-12));
    if (n >= 3 && n % 2 == 1) {
      CHECK(lattice_uneven_expression(n) == doctest::Approx(lattice_closed_form(n)).epsilon(1e-12));
    }
  }
  CHECK_THROWS(lattice_uneven_expression(4));
}

TEST_CASE("solver reproduces the lattice on paths") {
  for (std::size_t n = 1; n <= 8; ++n) {
    CAPTURE(n);
    const auto r = connes_distance(build_path(n + 1), {0, n});
    CHECK(std::abs(r.distance - lattice_closed_form(n)) <= 1e-5);
    check_certificate(r);
    // Interior constraints are active.
    for (std::size_t i = 1; i < n; ++i) CHECK(r.slacks.values[static_cast<Eigen::Index>(i)] == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("trees follow the closed form at the combinatorial distance") {
  const Graph t = build_binary_tree(3);
  CHECK(tree_distance_closed_form(t, {7, 14}) == doctest::Approx(std::sqrt(18.0)));
  CHECK(connes_distance(t, {7, 14}).distance == doctest::Approx(std::sqrt(18.0)).epsilon(1e-7));
  CHECK(connes_distance(t, {0, 10}).distance == doctest::Approx(std::sqrt(5.0)).epsilon(1e-7));
  CHECK_THROWS_AS(tree_distance_closed_form(build_cycle(4), {0, 2}), WrongFamily);
}

TEST_CASE("restarts from random feasible starts agree") {
  for (const auto& [name, g] : testing::connected_fixtures()) {
    if (g.node_count() > 8) continue;
    CAPTURE(name);
    const NodePair pair{0, g.node_count() - 1};
    const double base = connes_distance(g, pair).distance;
    for (std::uint64_t s = 0; s < 5; ++s) {
      SolverOptions o;
      o.start = random_feasible_start(g, s);
      CHECK(commutator_norm(g, *o.start) < 1.0);
      const auto r = connes_distance(g, pair, o);
      CHECK(r.certified);
      CHECK(std::abs(r.distance - base) <= 1e-6);
    }
  }
}

TEST_CASE("brute-force oracle") {
  CHECK(brute_force_distance(build_path(3), {0, 2}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
  CHECK(brute_force_distance(build_cycle(4), {0, 2}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
  CHECK(brute_force_distance(build_complete(3), {0, 1}) == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-3));
  CHECK(brute_force_distance(build_path(2), {0, 1}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(brute_force_distance(build_path(7), {0, 6}), InvalidSize);

  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Graph g = build_random(5, 0.5, seed);
    for (NodeIndex b = 1; b < 5; ++b) {
      const double exact = connes_distance(g, {0, b}).distance;
      CHECK(std::abs(brute_force_distance(g, {0, b}) - exact) <= 1e-3);
      CHECK(brute_force_distance(g, {0, b}) <= exact + 1e-9);
    }
  }
}

TEST_CASE("distance matrix is a metric bounded by hop distance") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = build_random(7 + seed, 0.35, seed);
    const auto m = distance_matrix(g, {}, 2);
    CHECK(m.all_certified());
    const auto v = metric_violation(m.distance);
    CHECK(v.asymmetry <= 1e-12);
    CHECK(v.triangle <= 1e-6);
    CHECK(v.max_diagonal == 0.0);
    CHECK(v.min_off_diagonal > 0.0);
    for (NodeIndex a = 0; a < g.node_count(); ++a) {
      const auto hops = bfs_distances(g, a);
      for (NodeIndex b = 0; b < g.node_count(); ++b) {
        CHECK(m.distance(a, b) <= double(*hops[b]) + 1e-6);
      }
    }
    // Same answer with a single worker.
    CHECK((distance_matrix(g, {}, 1).distance - m.distance).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("comparison suite") {
  const auto tree = comparison_suite(build_binary_tree(3), {7, 12}, 4, 1);
  REQUIRE(tree.tree_equality);
  CHECK(*tree.tree_equality);
  CHECK(tree.bounded_by_min_path);
  CHECK(tree.min_path_closed_form == doctest::Approx(tree.min_path_connes).epsilon(1e-7));

  const Graph g = build_random(9, 0.4, 3);
  const auto r = comparison_suite(g, {0, 8}, 6, 2);
  CHECK(!r.tree_equality);
  CHECK(r.bounded_by_combinatorial);
  CHECK(r.bounded_by_min_path);
  for (const auto& s : r.subgraphs) CHECK(s.restriction_bound);
}

TEST_CASE("scale normalization") {
  const Graph g = build_random(8, 0.4, 6);
  std::mt19937_64 rng(3);
  CHECK(scale_normalization_check(g, random_function(8, rng)));
  CHECK_THROWS_AS(scale_normalization_check(g, NodeVector::constant(8, 2.0)), DegenerateInput);
}

TEST_CASE("degenerate inputs") {
  const auto r = connes_distance(build_cycle(5), {3, 3});
  CHECK(r.distance == 0.0);
  CHECK(r.certified);
  const Graph split = testing::from_list(4, {{0, 1}, {2, 3}}, Graph::Connectivity::allowed);
  CHECK_THROWS_AS(connes_distance(split, {0, 2}), InvalidGraph);
  CHECK_THROWS(connes_distance(build_path(3), {0, 7}));
}

TEST_CASE("result json") {
  const auto r = connes_distance(build_cycle(4), {0, 2});
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j.at("distance").get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(j.at("certified").get<bool>());
  CHECK(j.at("f").size() == 4);
  CHECK(j.at("slacks").size() == 4);
  CHECK(j.at("multipliers").size() == 4);
  CHECK(j.contains("kkt_residual"));
  CHECK(j.contains("iterations"));
}
