#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "ncg/connes.hpp"
#include "ncg/error.hpp"

namespace ncg {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

}  // namespace

double LatticeStep::total() const { return std::accumulate(h.begin(), h.end(), 0.0); }

bool LatticeStep::admissible(double tol) const {
  if (h.empty()) return true;
  for (double x : h) {
    if (x < -tol) return false;
  }
  if (h.front() * h.front() > 1.0 + tol || h.back() * h.back() > 1.0 + tol) return false;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    if (h[i] * h[i] + h[i + 1] * h[i + 1] > 1.0 + tol) return false;
  }
  return true;
}

double lattice_closed_form(std::size_t n) {
  if (n == 0) return 0.0;
  const std::size_t half_square = n * n / 2;
  return std::sqrt(static_cast<double>(n % 2 == 0 ? half_square : half_square + 1));
}

double lattice_uneven_expression(std::size_t n) {
  if (n < 3 || n % 2 == 0) throw InvalidArgument("uneven lattice expression needs odd n >= 3");
  const double m = static_cast<double>(n / 2);
  const double a = 1.0 + 1.0 / m;
  return ((m + 1.0) * a + m) / std::sqrt(1.0 + a * a);
}

LatticeStep lattice_optimal_steps(std::size_t n) {
  LatticeStep step;
  if (n == 0) return step;
  if (n == 1) {
    step.h = {1.0};
    return step;
  }
  double first = std::sqrt(0.5);
  if (n % 2 == 1) {
    const double a = 1.0 + 1.0 / static_cast<double>(n / 2);
    first = a / std::sqrt(1.0 + a * a);
  }
  const double second = std::sqrt(1.0 - first * first);
  step.h.resize(n);
  for (std::size_t i = 0; i < n; ++i) step.h[i] = i % 2 == 0 ? first : second;
  return step;
}

double tree_distance_closed_form(const Graph& g, NodePair pair) {
  if (!is_tree(g)) throw WrongFamily("closed form needs a tree");
  return lattice_closed_form(combinatorial_distance(g, pair));
}

double brute_force_distance(const Graph& g, NodePair pair, double resolution) {
  const std::size_t n = g.node_count();
  if (n > 6) throw InvalidSize("brute-force oracle is limited to 6 nodes");
  if (!g.connected()) throw InvalidGraph("brute-force oracle needs a connected graph");
  if (pair.a >= n || pair.b >= n) throw InvalidArgument("node pair out of range");
  if (!(resolution > 0.0)) throw InvalidArgument("resolution must be positive");
  if (pair.a == pair.b) return 0.0;

  const auto dist = bfs_distances(g, pair.a);
  std::vector<NodeIndex> grid_nodes;
  for (NodeIndex i = 0; i < n; ++i) {
    if (i != pair.a && i != pair.b) grid_nodes.push_back(i);
  }
  const std::size_t q = grid_nodes.size();

  std::vector<double> f(n, 0.0);

  // Largest f_b compatible with the grid values, or -inf if none.
  auto best_b = [&]() {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (NodeIndex i = 0; i < n; ++i) {
      if (i == pair.b) continue;
      double rest = 0.0;
      bool touches_b = false;
      for (NodeIndex k : g.neighbors(i)) {
        if (k == pair.b) {
          touches_b = true;
          continue;
        }
        const double jump = f[k] - f[i];
        rest += jump * jump;
      }
      if (rest > 1.0) return -std::numeric_limits<double>::infinity();
      if (touches_b) {
        const double r = std::sqrt(1.0 - rest);
        lo = std::max(lo, f[i] - r);
        hi = std::min(hi, f[i] + r);
      }
    }
    // Node b: v x^2 - 2 S x + Q <= 1.
    double v = 0.0;
    double s = 0.0;
    double sq = 0.0;
    for (NodeIndex k : g.neighbors(pair.b)) {
      v += 1.0;
      s += f[k];
      sq += f[k] * f[k];
    }
    const double disc = s * s - v * (sq - 1.0);
    if (disc < 0.0) return -std::numeric_limits<double>::infinity();
    lo = std::max(lo, (s - std::sqrt(disc)) / v);
    hi = std::min(hi, (s + std::sqrt(disc)) / v);
    return lo <= hi ? hi : -std::numeric_limits<double>::infinity();
  };

  if (q == 0) return best_b();

  constexpr std::size_t points = 41;  // per axis and round
  std::vector<double> center(q, 0.0);
  std::vector<double> half(q);
  for (std::size_t j = 0; j < q; ++j) half[j] = static_cast<double>(*dist[grid_nodes[j]]);

  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> best_point(center);
  std::vector<std::size_t> counter(q);

  for (int round = 0;; ++round) {
    double step_max = 0.0;
    std::vector<double> step(q);
    for (std::size_t j = 0; j < q; ++j) {
      step[j] = 2.0 * half[j] / static_cast<double>(points - 1);
      step_max = std::max(step_max, step[j]);
    }
    std::fill(counter.begin(), counter.end(), 0);
    while (true) {
      for (std::size_t j = 0; j < q; ++j) {
        f[grid_nodes[j]] = center[j] - half[j] + static_cast<double>(counter[j]) * step[j];
      }
      const double value = best_b();
      if (value > best) {
        best = value;
        for (std::size_t j = 0; j < q; ++j) best_point[j] = f[grid_nodes[j]];
      }
      std::size_t j = 0;
      while (j < q && ++counter[j] == points) counter[j++] = 0;
      if (j == q) break;
    }
    if (round >= 2 && step_max <= resolution / 10.0) break;
    if (round > 40) break;
    center = best_point;
    for (double& h : half) h /= 10.0;
  }
  return best;
}

DistanceMatrix distance_matrix(const Graph& g, const SolverOptions& options, std::size_t workers) {
  const std::size_t n = g.node_count();
  DistanceMatrix out;
  out.distance = Eigen::MatrixXd::Zero(idx(n), idx(n));
  out.certified.setConstant(idx(n), idx(n), true);

  std::vector<NodePair> pairs;
  for (NodeIndex i = 0; i < n; ++i)
    for (NodeIndex k = i + 1; k < n; ++k) pairs.push_back({i, k});

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(pairs.size(), 1));

  // Workers write disjoint matrix cells.
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j = next++; j < pairs.size(); j = next++) {
      const auto [a, b] = pairs[j];
      const auto r = connes_distance(g, {a, b}, options);
      out.distance(idx(a), idx(b)) = r.distance;
      out.distance(idx(b), idx(a)) = r.distance;
      out.certified(idx(a), idx(b)) = r.certified;
      out.certified(idx(b), idx(a)) = r.certified;
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  return out;
}

MetricViolation metric_violation(const Eigen::MatrixXd& d) {
  MetricViolation v;
  const Index n = d.rows();
  v.min_off_diagonal = n > 1 ? std::numeric_limits<double>::infinity() : 0.0;
  for (Index i = 0; i < n; ++i) {
    v.max_diagonal = std::max(v.max_diagonal, std::abs(d(i, i)));
    for (Index k = 0; k < n; ++k) {
      if (i != k) v.min_off_diagonal = std::min(v.min_off_diagonal, d(i, k));
      v.asymmetry = std::max(v.asymmetry, std::abs(d(i, k) - d(k, i)));
      for (Index j = 0; j < n; ++j) v.triangle = std::max(v.triangle, d(i, k) - d(i, j) - d(j, k));
    }
  }
  return v;
}

ComparisonReport comparison_suite(const Graph& g, NodePair pair, std::size_t samples, std::uint64_t seed,
                                  const SolverOptions& options, double tol) {
  ComparisonReport report;
  report.connes = connes_distance(g, pair, options).distance;
  report.combinatorial = combinatorial_distance(g, pair);
  report.min_path = shortest_path(g, pair);
  report.min_path_closed_form = lattice_closed_form(report.combinatorial);

  auto solve_on = [&](const std::vector<NodeIndex>& nodes) {
    const auto sub = induced_subgraph(g, nodes);
    const NodePair local{*sub.local_index(pair.a), *sub.local_index(pair.b)};
    return connes_distance(sub.graph, local, options).distance;
  };
  report.min_path_connes = pair.a == pair.b ? 0.0 : solve_on(report.min_path);
  report.bounded_by_combinatorial = report.connes <= static_cast<double>(report.combinatorial) + tol;
  report.bounded_by_min_path = report.connes <= report.min_path_connes + tol;
  if (is_tree(g)) report.tree_equality = std::abs(report.connes - report.min_path_connes) <= tol;

  // Random connected induced subgraphs that keep the minimal path.
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(0.5);
  for (std::size_t s = 0; s < samples * 8 && report.subgraphs.size() < samples; ++s) {
    std::vector<NodeIndex> nodes = report.min_path;
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
      if (std::find(report.min_path.begin(), report.min_path.end(), i) == report.min_path.end() && keep(rng)) {
        nodes.push_back(i);
      }
    }
    const auto sub = induced_subgraph(g, nodes);
    if (!sub.graph.connected()) continue;
    SubgraphComparison cmp;
    cmp.nodes = sub.original_index;
    cmp.distance = solve_on(cmp.nodes);
    cmp.restriction_bound = report.connes <= cmp.distance + tol;
    cmp.reverse_bound = cmp.distance <= report.connes + tol;
    report.subgraphs.push_back(std::move(cmp));
  }
  return report;
}

bool scale_normalization_check(const Graph& g, const NodeVector& f, double tol) {
  const double c = commutator_norm(g, f);
  if (!(c > 0.0)) throw DegenerateInput("function is constant: ||[D,f]|| = 0");
  const NodeVector scaled(f.values() / c);
  if (std::abs(commutator_norm(g, scaled) - 1.0) > tol) return false;
  for (NodeIndex i = 0; i < f.size(); ++i) {
    for (NodeIndex k = 0; k < f.size(); ++k) {
      const double expected = (f[k] - f[i]) / c;
      if (std::abs((scaled[k] - scaled[i]) - expected) > tol * std::max(1.0, std::abs(expected))) return false;
    }
  }
  return true;
}

}  // namespace ncg
