#ifndef NCG_CONNES_HPP
#define NCG_CONNES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ncg/graph.hpp"
#include "ncg/operators.hpp"

namespace ncg {

/// Per-node jump energies a_i = sum_{k~i} (f_k - f_i)^2.
struct ConstraintProfile {
  Eigen::VectorXd values;

  /// sup_i sqrt(a_i), which is ||[D,f]||.
  double sup_root() const;
};

ConstraintProfile constraint_profile(const Graph& g, const NodeVector& f);

/// ||[D,f]|| = max_i (sum_{k~i} |f_k - f_i|^2)^(1/2).
double commutator_norm(const Graph& g, const NodeVector& f);

struct SolverOptions {
  /// Certification tolerance on the KKT residual.
  double tol = 1e-7;
  double mu_initial = 1.0;
  double mu_factor = 0.1;
  double mu_final = 1e-9;
  /// Constraints with 1 - a_i below this at the last barrier iterate enter
  /// the final KKT Newton polish as equalities.
  double active_slack = 1e-3;
  std::size_t max_newton_per_stage = 200;
  /// Strictly feasible start (max a_i < 1); f = 0 when absent.
  std::optional<NodeVector> start;
};

struct ConnesResult {
  double distance = 0.0;
  /// Maximizer, shifted so that f(a) = 0.
  NodeVector optimizer;
  /// a_i at the optimizer (all <= 1 up to tolerance).
  ConstraintProfile slacks;
  /// lambda_i >= 0 of the constraints a_i <= 1.
  Eigen::VectorXd multipliers;
  double stationarity = 0.0;     // || (e_b - e_a) - sum lambda_i grad a_i ||
  double complementarity = 0.0;  // max lambda_i (1 - a_i)
  double infeasibility = 0.0;    // max(0, max a_i - 1)
  double kkt_residual = 0.0;     // max of the three above
  /// sum lambda_i (1 - a_i): the Lagrangian dual bound exceeds `distance` by this.
  double duality_gap = 0.0;
  std::size_t iterations = 0;
  bool certified = false;
};

/**
 * dist_C(a, b) = sup { f_b - f_a : a_i(f) <= 1 for every node i }.
 *
 * Solved as a convex program with a log-barrier interior-point method:
 * damped Newton steps on  (f_b - f_a) + mu * sum_i log(1 - a_i(f))  with
 * f_a fixed to 0, for mu = mu_initial, mu*mu_factor, ..., mu_final, and a
 * backtracking line search that keeps every a_i < 1. The last iterate is
 * then polished by Newton's method on the KKT equations of the nearly active
 * constraints; the polished point replaces the barrier iterate only when its
 * KKT residual is smaller. The multipliers (mu / (1 - a_i) from the barrier,
 * or those of the polish) certify the result.
 *
 * Requires a connected graph. a == b returns a certified zero.
 */
ConnesResult connes_distance(const Graph& g, NodePair pair, const SolverOptions& options = {});

/// {distance, certified, kkt_residual, iterations, f, slacks, multipliers,
///  duality_gap} as a JSON object.
std::string to_json(const ConnesResult& result);

/// Random f scaled so that max a_i is drawn from [0.1, 0.9].
NodeVector random_feasible_start(const Graph& g, std::uint64_t seed);

// Closed forms for the one-dimensional lattice.

/// Increments h_1..h_n of a monotone function along a path.
struct LatticeStep {
  std::vector<double> h;

  double total() const;
  /// h_i >= 0, h_1^2 <= 1, h_n^2 <= 1 and h_i^2 + h_{i+1}^2 <= 1.
  bool admissible(double tol = 0.0) const;
};

/// dist_C(0, n) on the lattice: sqrt(floor(n^2/2)) for even n and
/// sqrt(floor(n^2/2) + 1) for odd n; 0 for n = 0.
double lattice_closed_form(std::size_t n);

/// The unsimplified odd-n expression ((m+1) A + m) / sqrt(1 + A^2) with
/// m = floor(n/2) and A = 1 + 1/m. Requires odd n >= 3.
double lattice_uneven_expression(std::size_t n);

/// Optimal increments: alternating h_max, sqrt(1 - h_max^2), starting with
/// h_max = A/sqrt(1+A^2) for odd n and 1/sqrt(2) for even n.
LatticeStep lattice_optimal_steps(std::size_t n);

/// Closed-form distance on a tree: the lattice value at the combinatorial
/// distance. Throws WrongFamily when g is not a tree.
double tree_distance_closed_form(const Graph& g, NodePair pair);

/// Grid-search oracle, independent of the barrier solver. With f_a = 0 it
/// scans the nodes other than a and b on a grid over [-d(a,k), d(a,k)],
/// computes the largest feasible f_b exactly for every grid point, and
/// refines around the best point (shrink factor 10 per round) until the
/// grid step falls below resolution/10. At most 6 nodes.
double brute_force_distance(const Graph& g, NodePair pair, double resolution = 1e-3);

struct DistanceMatrix {
  Eigen::MatrixXd distance;
  /// certified(i, j) is false when the (i, j) solve was not certified.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> certified;

  bool all_certified() const { return certified.all(); }
};

/// All-pairs dist_C, solved concurrently; diagonal 0, symmetric.
DistanceMatrix distance_matrix(const Graph& g, const SolverOptions& options = {},
                               std::size_t workers = 0);

struct MetricViolation {
  double asymmetry = 0.0;
  double triangle = 0.0;      // largest d(i,k) - d(i,j) - d(j,k)
  double min_off_diagonal = 0.0;
  double max_diagonal = 0.0;
};

MetricViolation metric_violation(const Eigen::MatrixXd& d);

struct SubgraphComparison {
  std::vector<NodeIndex> nodes;
  double distance = 0.0;
  /// dist_C(G) <= dist_C(G') (restriction of admissible functions).
  bool restriction_bound = false;
  /// dist_C(G') <= dist_C(G).
  bool reverse_bound = false;
};

struct ComparisonReport {
  double connes = 0.0;
  std::size_t combinatorial = 0;
  std::vector<NodeIndex> min_path;
  double min_path_connes = 0.0;
  double min_path_closed_form = 0.0;
  std::vector<SubgraphComparison> subgraphs;
  bool bounded_by_combinatorial = false;
  bool bounded_by_min_path = false;
  /// Only meaningful on trees: dist_C(G) == dist_C(min path).
  std::optional<bool> tree_equality;
};

/// dist_C(G) against the combinatorial distance, the minimal-path subgraph,
/// and `samples` random connected induced subgraphs containing the pair.
ComparisonReport comparison_suite(const Graph& g, NodePair pair, std::size_t samples = 8,
                                  std::uint64_t seed = 0, const SolverOptions& options = {},
                                  double tol = 1e-5);

/// With c = ||[D,f]|| > 0: checks ||[D, f/c]|| = 1 and that every difference
/// f_k - f_i scales by 1/c. Throws DegenerateInput for c = 0.
bool scale_normalization_check(const Graph& g, const NodeVector& f, double tol = 1e-12);

}  // namespace ncg

#endif  // NCG_CONNES_HPP
