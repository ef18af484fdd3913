#include "ncg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "ncg/error.hpp"
#include "ncg/operators.hpp"

namespace ncg {

namespace {

using Index = Eigen::Index;

// All ones plus a fixed non-periodic perturbation, so the start vector is
// never orthogonal to a dominant eigenvector by symmetry.
Eigen::VectorXd start_vector(Index n) {
  Eigen::VectorXd x(n);
  for (Index i = 0; i < n; ++i) x[i] = 1.0 + 0.25 * std::sin(1.0 + 0.7 * static_cast<double>(i));
  return x.normalized();
}

// Power iteration on a symmetric positive semidefinite Gram operator.
template <typename Apply>
NormEstimate power_iterate(Apply&& gram, Index n, const PowerIterationOptions& options) {
  NormEstimate est;
  Eigen::VectorXd x = start_vector(n);
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    const Eigen::VectorXd y = gram(x);
    const double rho = x.dot(y);
    est.value = std::sqrt(std::max(rho, 0.0));
    est.iterations = it;
    const double ynorm = y.norm();
    if (ynorm == 0.0) {
      est.value = 0.0;
      est.converged = true;
      return est;
    }
    if ((y - rho * x).norm() <= options.tol * rho) {
      est.converged = true;
      return est;
    }
    x = y / ynorm;
  }
  return est;
}

}  // namespace

double dense_operator_norm(const LinearMap& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  const Eigen::MatrixXd dense = m.to_dense();
  if (m.is_square() && m.asymmetry() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
  }
  // Largest eigenvalue of the smaller Gram matrix. BDCSVD misreports the
  // top singular value of skew maps whose singular values come in pairs.
  const Eigen::MatrixXd gram = dense.rows() < dense.cols() ? Eigen::MatrixXd(dense * dense.transpose())
                                                           : Eigen::MatrixXd(dense.transpose() * dense);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(solver.eigenvalues().maxCoeff(), 0.0));
}

NormEstimate spectral_norm(const LinearMap& m, const PowerIterationOptions& options) {
  if (!m.is_square() || m.asymmetry() != 0.0) throw NotSymmetric("spectral_norm needs a symmetric map");
  if (!(options.tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (m.rows() <= options.dense_cutoff) return {dense_operator_norm(m), 0, true};
  const auto& a = m.matrix();
  return power_iterate([&a](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a * (a * x); },
                       static_cast<Index>(m.rows()), options);
}

NormEstimate operator_norm(const LinearMap& m, const PowerIterationOptions& options) {
  if (!(options.tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (std::max(m.rows(), m.cols()) <= options.dense_cutoff) return {dense_operator_norm(m), 0, true};
  const auto& a = m.matrix();
  return power_iterate(
      [&a](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a.transpose() * (a * x); },
      static_cast<Index>(m.cols()), options);
}

NormBounds adjacency_norm_bounds(const Graph& g) {
  NormBounds bounds;
  bounds.upper = static_cast<double>(g.max_degree());

  // Rayleigh quotient of the normalized indicator of the first j nodes:
  // (1/j) * (number of ordered adjacent pairs inside the prefix).
  std::size_t inner = 0;
  for (NodeIndex j = 0; j < g.node_count(); ++j) {
    for (NodeIndex k : g.neighbors(j)) {
      if (k < j) inner += 2;
    }
    const double avg = static_cast<double>(inner) / static_cast<double>(j + 1);
    if (avg > bounds.lower) {
      bounds.lower = avg;
      bounds.best_prefix = j + 1;
    }
  }
  bounds.estimate = spectral_norm(adjacency_map(g)).value;
  return bounds;
}

Family parse_family(std::string_view name) {
  if (name == "tree" || name == "binary_tree" || name == "binary-tree") return Family::binary_tree;
  if (name == "path") return Family::path;
  if (name == "cycle") return Family::cycle;
  throw InvalidArgument("unknown family '" + std::string(name) + "'");
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::binary_tree: return "tree";
    case Family::path: return "path";
    case Family::cycle: return "cycle";
  }
  return "?";
}

Graph family_member(Family family, std::size_t depth) {
  switch (family) {
    case Family::binary_tree: return build_binary_tree(depth);
    case Family::path: return build_path(depth + 1);
    case Family::cycle: return build_cycle(depth + 2);
  }
  throw InvalidArgument("unknown family");
}

namespace {

std::size_t family_size(Family family, std::size_t depth) {
  switch (family) {
    case Family::binary_tree:
      return depth >= 62 ? std::numeric_limits<std::size_t>::max() : (std::size_t{2} << depth) - 1;
    case Family::path: return depth + 1;
    case Family::cycle: return depth + 2;
  }
  return 0;
}

}  // namespace

TruncationReport truncation_norm_sequence(Family family, const std::vector<std::size_t>& depths,
                                          double monotone_tol, std::size_t max_nodes) {
  if (depths.empty()) throw InvalidArgument("truncation needs at least one depth");
  for (std::size_t j = 1; j < depths.size(); ++j) {
    if (depths[j] <= depths[j - 1]) throw InvalidArgument("truncation depths must be strictly increasing");
  }
  for (std::size_t depth : depths) {
    if (family_size(family, depth) > max_nodes) {
      throw InvalidSize("depth " + std::to_string(depth) + " exceeds the node cap of " + std::to_string(max_nodes));
    }
  }

  TruncationReport report;
  report.family = family;
  report.depths = depths;
  std::vector<std::future<std::pair<std::size_t, double>>> jobs;
  jobs.reserve(depths.size());
  for (std::size_t depth : depths) {
    jobs.push_back(std::async(std::launch::async, [family, depth] {
      const Graph g = family_member(family, depth);
      return std::pair{g.node_count(), spectral_norm(adjacency_map(g)).value};
    }));
  }
  for (auto& job : jobs) {
    const auto [nodes, norm] = job.get();
    report.sizes.push_back(nodes);
    report.norms.push_back(norm);
  }
  report.monotone = true;
  for (std::size_t j = 1; j < report.norms.size(); ++j) {
    if (report.norms[j] < report.norms[j - 1] - monotone_tol) report.monotone = false;
  }
  return report;
}

void write_truncation_csv(std::ostream& out, const TruncationReport& report) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "depth,nodes,norm\n";
  for (std::size_t j = 0; j < report.depths.size(); ++j) {
    out << report.depths[j] << ',' << report.sizes[j] << ',' << report.norms[j] << '\n';
  }
  out.precision(old_precision);
}

LevelAverage prefix_average_degree_limit(std::size_t levels) {
  if (levels < 1) throw InvalidArgument("level count must be at least 1");
  if (levels > 60) throw InvalidSize("level count too large");
  const double pow_n = std::ldexp(1.0, static_cast<int>(levels));  // 2^N
  const double all_levels = 2.0 * pow_n - 1.0;                      // sum_{k=0}^N 2^k
  const double degree_sum = 3.0 * all_levels - 2.0 * pow_n - 1.0;

  LevelAverage out;
  out.levels = levels;
  out.displayed = degree_sum / (all_levels - 1.0);  // n(N) omits the root
  out.truncated = degree_sum / all_levels;
  return out;
}

std::size_t numerical_rank(const LinearMap& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (m.rows() * m.cols() > std::size_t{25'000'000}) throw InvalidSize("map too large for dense rank");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m.to_dense());
  qr.setThreshold(rel_tol);
  return static_cast<std::size_t>(qr.rank());
}

std::size_t exact_rank(const LinearMap& m, std::size_t max_rows) {
  if (m.rows() > max_rows) throw InvalidArgument("exact rank limited to " + std::to_string(max_rows) + " rows");
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::vector<long long>> a(rows, std::vector<long long>(cols, 0));
  for (const auto& e : m.entries()) {
    const double r = std::round(e.value);
    if (r != e.value || std::abs(r) > 1e9) throw InvalidArgument("exact rank needs small integer entries");
    a[e.row][e.col] = static_cast<long long>(r);
  }

  // Bareiss: every intermediate entry is a minor, so divisions are exact.
  long long prev = 1;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        long long lhs = 0;
        long long rhs = 0;
        long long diff = 0;
        if (__builtin_mul_overflow(a[rank][c], a[r][j], &lhs) ||
            __builtin_mul_overflow(a[r][c], a[rank][j], &rhs) || __builtin_sub_overflow(lhs, rhs, &diff)) {
          throw std::overflow_error("exact rank: integer overflow");
        }
        a[r][j] = diff / prev;
      }
      a[r][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

CycleSpaceDims cycle_space_dims(const Graph& g, double rank_tol) {
  const LinearMap dstar = d_map(g).adjoint();
  CycleSpaceDims dims;
  dims.components = g.component_count();
  dims.rank_dstar = numerical_rank(dstar, rank_tol);
  dims.kernel_dim = g.directed_edge_count() - dims.rank_dstar;
  if (dims.rank_dstar != g.node_count() - dims.components) {
    throw std::logic_error("rank(d*) = " + std::to_string(dims.rank_dstar) + " disagrees with n - c = " +
                           std::to_string(g.node_count() - dims.components));
  }
  return dims;
}

}  // namespace ncg
