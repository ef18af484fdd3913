#ifndef NCG_SPECTRAL_HPP
#define NCG_SPECTRAL_HPP

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "ncg/graph.hpp"
#include "ncg/linear_map.hpp"

namespace ncg {

struct NormEstimate {
  double value = 0.0;
  std::size_t iterations = 0;
  /// False when the iteration cap was hit; `value` is then the last estimate.
  bool converged = false;
};

struct PowerIterationOptions {
  /// Relative residual ||M^2 x - rho x|| / rho at which iteration stops.
  double tol = 1e-12;
  std::size_t max_iterations = 500000;
  /// Maps with at most this many rows use a dense eigensolver instead.
  std::size_t dense_cutoff = 64;
};

/// Largest |eigenvalue| of a symmetric map. Power iteration on M^2 from a
/// fixed start vector; small maps go straight to a dense eigensolver.
/// Throws NotSymmetric when M is not symmetric.
NormEstimate spectral_norm(const LinearMap& m, const PowerIterationOptions& options = {});

/// Largest singular value of an arbitrary map, via power iteration on M^T M
/// (the same scheme as spectral_norm).
NormEstimate operator_norm(const LinearMap& m, const PowerIterationOptions& options = {});

/// Reference value from a dense eigen/singular value decomposition.
double dense_operator_norm(const LinearMap& m);

struct NormBounds {
  /// Best prefix Rayleigh quotient: max over j of (1/j) sum_{i<j} of the
  /// degree of i inside the first j nodes of the labelling.
  double lower = 0.0;
  /// Maximum degree.
  double upper = 0.0;
  /// ||A||.
  double estimate = 0.0;
  std::size_t best_prefix = 0;
};

NormBounds adjacency_norm_bounds(const Graph& g);

enum class Family { binary_tree, path, cycle };

Family parse_family(std::string_view name);
std::string_view to_string(Family family);
/// Member of a family at a given depth: binary tree of that depth, path with
/// depth+1 nodes, cycle with depth+2 nodes.
Graph family_member(Family family, std::size_t depth);

struct TruncationReport {
  Family family = Family::binary_tree;
  std::vector<std::size_t> depths;
  std::vector<std::size_t> sizes;
  std::vector<double> norms;
  bool monotone = false;
};

/// ||A_n|| along nested truncations of a family. Depths must be nonempty
/// and strictly increasing; members larger than `max_nodes` are rejected.
TruncationReport truncation_norm_sequence(Family family, const std::vector<std::size_t>& depths,
                                          double monotone_tol = 1e-9,
                                          std::size_t max_nodes = std::size_t{1} << 22);

/// CSV with header "depth,nodes,norm".
void write_truncation_csv(std::ostream& out, const TruncationReport& report);

/// Average degree over the first N levels of the infinite binary tree.
struct LevelAverage {
  std::size_t levels = 0;
  /// Degree sum 3 sum_{k=0}^N 2^k - 2 2^N - 1 over n(N) = sum_{k=1}^N 2^k.
  double displayed = 0.0;
  /// Average degree of the depth-N truncated tree (2^{N+1} - 1 nodes).
  double truncated = 0.0;
};

LevelAverage prefix_average_degree_limit(std::size_t levels);

struct CycleSpaceDims {
  std::size_t rank_dstar = 0;
  std::size_t kernel_dim = 0;
  std::size_t components = 0;
};

/// rank(d*) and dim Ker(d*) by rank-revealing QR (relative tolerance
/// `rank_tol`), cross-checked against the traversal component count.
CycleSpaceDims cycle_space_dims(const Graph& g, double rank_tol = 1e-9);

/// Numerical rank by column-pivoted QR with threshold relative to the
/// largest pivot.
std::size_t numerical_rank(const LinearMap& m, double rel_tol = 1e-9);

/// Exact rank of an integer-valued map by fraction-free elimination.
/// Throws InvalidArgument for non-integer entries or more than
/// `max_rows` rows.
std::size_t exact_rank(const LinearMap& m, std::size_t max_rows = 20);

}  // namespace ncg

#endif  // NCG_SPECTRAL_HPP
