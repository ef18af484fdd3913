#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "ncg/error.hpp"
#include "ncg/operators.hpp"
#include "ncg/spectral.hpp"
#include "support/fixtures.hpp"

using namespace ncg;

namespace {

// Dense reference matrices built straight from the bond list.
struct Dense {
  Eigen::MatrixXd A, V, d;
};

Dense dense_reference(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  const auto m = static_cast<Eigen::Index>(g.directed_edge_count());
  Dense r{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(m, n)};
  for (auto [i, k] : g.bonds()) {
    r.A(i, k) = r.A(k, i) = 1;
    r.V(i, i) += 1;
    r.V(k, k) += 1;
  }
  for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e) {
    const auto [tail, head] = g.edge(e);
    r.d(e, head) += 1;
    r.d(e, tail) -= 1;
  }
  return r;
}

Eigen::VectorXd random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = normal(rng);
  return v;
}

}  // namespace

TEST_CASE("d on the path of 3 nodes") {
  const Graph g = build_path(3);
  const NodeVector f{0.0, 1.0, 3.0};
  const EdgeVector df = apply_d(g, f);
  CHECK(df.at(g, 0, 1) == 1.0);
  CHECK(df.at(g, 1, 0) == -1.0);
  CHECK(df.at(g, 1, 2) == 2.0);
  CHECK(df.at(g, 2, 1) == -2.0);
  CHECK(df.antisymmetric());
  CHECK(df.is_antisymmetric(g));
}

TEST_CASE("d of a constant vanishes") {
  const Graph g = build_random(10, 0.4, 2);
  CHECK(apply_d(g, NodeVector::constant(10, 3.5)).values().isZero(0.0));
}

TEST_CASE("delta maps a directed edge to its end node") {
  const Graph g = build_cycle(5);
  const auto e = EdgeVector::basis(g, 1, 2);
  CHECK(apply_delta1(g, e).values() == Eigen::VectorXd::Unit(5, 2));
  CHECK(apply_delta2(g, e).values() == Eigen::VectorXd::Unit(5, 1));
  CHECK_THROWS(EdgeVector::basis(g, 0, 2));
}

TEST_CASE("adjoint of d on the antisymmetric subspace is twice delta") {
  const Graph g = build_random(9, 0.4, 5);
  const auto b = EdgeVector::oriented_bond(g, g.edge(0).tail, g.edge(0).head);
  const Eigen::VectorXd lhs = apply_adjoint_d(g, b).values();
  const Eigen::VectorXd rhs = 2.0 * apply_delta1(g, b).values();
  CHECK((lhs - rhs).isZero(0.0));
}

TEST_CASE("length mismatch is rejected") {
  const Graph g = build_path(4);
  CHECK_THROWS_AS(apply_d(g, NodeVector{1.0, 2.0}), LengthMismatch);
  CHECK_THROWS_AS(d_map(g).apply(Eigen::VectorXd::Zero(3)), LengthMismatch);
}

TEST_CASE("assembled maps agree with the dense reference") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = build_random(3 + seed % 12, 0.35, seed);
    const Dense ref = dense_reference(g);
    CHECK(adjacency_map(g).to_dense() == ref.A);
    CHECK(degree_map(g).to_dense() == ref.V);
    CHECK(d_map(g).to_dense() == ref.d);
    CHECK(laplacian_map(g).to_dense() == ref.A - ref.V);
    CHECK((d_map(g).adjoint() * d_map(g)).to_dense() == -2.0 * (ref.A - ref.V));
  }
}

TEST_CASE("operator identities hold exactly") {
  std::vector<testing::Fixture> fixtures = testing::connected_fixtures();
  for (auto& f : testing::disconnected_fixtures()) fixtures.push_back(f);
  for (const auto& [name, g] : fixtures) {
    CAPTURE(name);
    for (const auto& check : check_operator_identities(g)) {
      CAPTURE(check.name);
      CHECK(check.passed);
      CHECK(check.deviation == 0.0);
    }
  }
}

TEST_CASE("B B^T = V - A for every orientation") {
  std::mt19937_64 rng(9);
  std::bernoulli_distribution coin(0.5);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = build_random(12, 0.3, seed);
    Orientation o(g.bond_count());
    for (std::size_t j = 0; j < o.size(); ++j) o[j] = coin(rng);
    const Eigen::MatrixXd b = incidence_map(g, o).to_dense();
    const Dense ref = dense_reference(g);
    CHECK(b * b.transpose() == ref.V - ref.A);
    for (Eigen::Index c = 0; c < b.cols(); ++c) CHECK(b.col(c).sum() == 0.0);
  }
}

TEST_CASE("||df||^2 = (f, -2 Delta f)") {
  std::mt19937_64 rng(1);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = build_random(4 + seed % 14, 0.3, seed);
    const NodeVector f(random_vector(g.node_count(), rng));
    const double lhs = apply_d(g, f).values().squaredNorm();
    const double rhs = f.values().dot(-2.0 * laplacian_map(g).apply(f.values()));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("Dirac operator structure") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = build_random(5 + seed, 0.35, seed);
    const auto dirac = dirac_operator(g);
    const auto& D = dirac.assembled;
    CHECK(D.is_symmetric(0.0));
    CHECK(D.rows() == g.node_count() + g.directed_edge_count());

    const auto chi = chirality_map(g);
    CHECK((chi * D + D * chi).is_zero());

    const LinearMap upper = dirac.square_upper_block();
    CHECK(upper.to_dense() == (-2.0 * laplacian_map(g)).to_dense());

    // Spectrum symmetric about zero.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D.to_dense(), Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = es.eigenvalues();
    const Eigen::Index N = ev.size();
    for (Eigen::Index j = 0; j < N; ++j) CHECK(std::abs(ev[j] + ev[N - 1 - j]) <= 1e-9);

    // J commutes with D on real vectors.
    std::mt19937_64 rng(seed);
    const Eigen::VectorXd x = random_vector(D.cols(), rng);
    CHECK((conjugation_J(D.apply(x)) - D.apply(conjugation_J(x))).isZero(0.0));
  }
}

TEST_CASE("conjugation on complex vectors") {
  Eigen::VectorXcd z(2);
  z << std::complex<double>(1, 2), std::complex<double>(-3, 0.5);
  const Eigen::VectorXcd w = conjugation_J(z);
  CHECK(w[0] == std::complex<double>(1, -2));
  CHECK(conjugation_J(w) == z);
}

TEST_CASE("left and right actions") {
  const Graph g = build_path(3);
  const NodeVector f{2.0, 3.0, 5.0};
  const auto left = function_representation(g, f);
  const auto right = right_function_representation(g, f);
  const auto e = *g.edge_index(0, 1);
  const auto row = static_cast<Eigen::Index>(g.node_count() + e);
  CHECK(left.coeff(row, row) == 2.0);
  CHECK(right.coeff(row, row) == 3.0);
  CHECK(left.coeff(1, 1) == 3.0);
}

TEST_CASE("commutator blocks and skew symmetry") {
  std::mt19937_64 rng(4);
  const Graph g = build_random(8, 0.4, 4);
  const NodeVector f(random_vector(8, rng));
  const Eigen::MatrixXd c = commutator_Df(g, f).to_dense();
  CHECK((c + c.transpose()).isZero(1e-14));
  const auto n = static_cast<Eigen::Index>(g.node_count());
  for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e) {
    const auto [i, k] = g.edge(e);
    CHECK(c(n + e, k) == doctest::Approx(f[k] - f[i]).epsilon(1e-14));
  }
}

TEST_CASE("cycle vectors lie in the kernel of d*") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Graph g = build_random(11, 0.35, seed);
    const LinearMap dstar = d_map(g).adjoint();
    for (const auto& cycle : fundamental_cycles(g)) {
      const EdgeVector c = cycle_vector(g, cycle);
      CHECK(c.is_antisymmetric(g));
      CHECK(dstar.apply(c.values()).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  const Graph sq = build_cycle(4);
  const std::vector<NodeIndex> walk = {0, 1, 2, 3};
  CHECK(d_map(sq).adjoint().apply(cycle_vector(sq, walk).values()).isZero(0.0));
  const std::vector<NodeIndex> bad = {0, 2, 1};
  CHECK_THROWS(cycle_vector(sq, bad));
}

TEST_CASE("rank of d* is n - c") {
  std::vector<testing::Fixture> fixtures = testing::connected_fixtures();
  for (auto& f : testing::disconnected_fixtures()) fixtures.push_back(f);
  for (const auto& [name, g] : fixtures) {
    if (g.node_count() > 20) continue;
    CAPTURE(name);
    const LinearMap dstar = d_map(g).adjoint();
    const std::size_t exact = exact_rank(dstar);
    CHECK(exact == g.node_count() - g.component_count());
    const auto dims = cycle_space_dims(g);
    CHECK(dims.rank_dstar == exact);
    CHECK(dims.kernel_dim == g.directed_edge_count() - exact);
  }
}

TEST_CASE("linear map basics") {
  const auto m = LinearMap::from_entries(2, 3, Space::H0, Space::H0, {{0, 1, 2.0}, {1, 2, -1.0}});
  CHECK(m.nonzeros() == 2);
  CHECK(m.adjoint().rows() == 3);
  CHECK(m.adjoint().coeff(1, 0) == 2.0);
  CHECK_THROWS(LinearMap::from_entries(2, 2, Space::H0, Space::H0, {{0, 0, 1.0}, {0, 0, 2.0}}));
  CHECK_THROWS(LinearMap::from_entries(2, 2, Space::H0, Space::H0, {{2, 0, 1.0}}));
  CHECK_THROWS(m * m);
}
