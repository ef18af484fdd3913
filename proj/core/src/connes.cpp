#include "ncg/connes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "ncg/error.hpp"

namespace ncg {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

Eigen::VectorXd jump_energies(const Graph& g, const Eigen::VectorXd& f) {
  Eigen::VectorXd a(idx(g.node_count()));
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    double sum = 0.0;
    for (NodeIndex k : g.neighbors(i)) {
      const double jump = f[idx(k)] - f[idx(i)];
      sum += jump * jump;
    }
    a[idx(i)] = sum;
  }
  return a;
}

// Barrier objective  f_b - f_a + mu * sum_i log(1 - a_i(f))  in full
// coordinates; the gauge node a never moves.
class BarrierProblem {
 public:
  BarrierProblem(const Graph& g, NodePair pair) : g_(g), pair_(pair) {
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
      if (i != pair.a) free_.push_back(i);
    }
  }

  // -inf outside the strictly feasible region.
  double value(const Eigen::VectorXd& f, double mu) const {
    const Eigen::VectorXd a = jump_energies(g_, f);
    double barrier = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
      const double s = 1.0 - a[i];
      if (!(s > 0.0)) return -std::numeric_limits<double>::infinity();
      barrier += std::log(s);
    }
    return f[idx(pair_.b)] - f[idx(pair_.a)] + mu * barrier;
  }

  // (e_b - e_a) - sum_i w_i grad a_i(f).
  Eigen::VectorXd residual(const Eigen::VectorXd& f, const Eigen::VectorXd& weights) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(idx(g_.node_count()));
    r[idx(pair_.b)] += 1.0;
    r[idx(pair_.a)] -= 1.0;
    for (NodeIndex i = 0; i < g_.node_count(); ++i) {
      const double w = weights[idx(i)];
      if (w == 0.0) continue;
      for (NodeIndex k : g_.neighbors(i)) {
        const double jump = f[idx(k)] - f[idx(i)];
        r[idx(k)] -= 2.0 * w * jump;
        r[idx(i)] += 2.0 * w * jump;
      }
    }
    return r;
  }

  // Negated Hessian: sum_i mu/s_i^2 grad a_i grad a_i^T + mu/s_i hess a_i.
  Eigen::MatrixXd curvature(const Eigen::VectorXd& f, const Eigen::VectorXd& slack, double mu) const {
    const std::size_t n = g_.node_count();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(idx(n), idx(n));
    std::vector<std::pair<Index, double>> grad;
    for (NodeIndex i = 0; i < n; ++i) {
      const double s = slack[idx(i)];
      const double outer = mu / (s * s);
      const double inner = 2.0 * mu / s;  // hess (f_k - f_i)^2 = 2 (e_k - e_i)(e_k - e_i)^T
      grad.clear();
      double self = 0.0;
      for (NodeIndex k : g_.neighbors(i)) {
        const double jump = f[idx(k)] - f[idx(i)];
        grad.emplace_back(idx(k), 2.0 * jump);
        self -= 2.0 * jump;
        h(idx(k), idx(k)) += inner;
        h(idx(i), idx(i)) += inner;
        h(idx(k), idx(i)) -= inner;
        h(idx(i), idx(k)) -= inner;
      }
      grad.emplace_back(idx(i), self);
      for (const auto& [r, gr] : grad)
        for (const auto& [c, gc] : grad) h(r, c) += outer * gr * gc;
    }
    return h;
  }

  // grad a_i(f) in full coordinates.
  Eigen::VectorXd constraint_gradient(const Eigen::VectorXd& f, NodeIndex i) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(idx(g_.node_count()));
    for (NodeIndex k : g_.neighbors(i)) {
      const double jump = f[idx(k)] - f[idx(i)];
      out[idx(k)] += 2.0 * jump;
      out[idx(i)] -= 2.0 * jump;
    }
    return out;
  }

  // h += weight * hess a_i (constant in f).
  void add_constraint_hessian(Eigen::MatrixXd& h, NodeIndex i, double weight) const {
    for (NodeIndex k : g_.neighbors(i)) {
      h(idx(k), idx(k)) += 2.0 * weight;
      h(idx(i), idx(i)) += 2.0 * weight;
      h(idx(k), idx(i)) -= 2.0 * weight;
      h(idx(i), idx(k)) -= 2.0 * weight;
    }
  }

  const Graph& graph() const { return g_; }
  NodePair pair() const { return pair_; }
  const std::vector<NodeIndex>& free() const { return free_; }

 private:
  const Graph& g_;
  NodePair pair_;
  std::vector<NodeIndex> free_;
};

// Damped Newton centering for one barrier weight; returns the step count.
std::size_t center(const BarrierProblem& problem, Eigen::VectorXd& f, double mu, std::size_t max_steps,
                   double grad_tol) {
  const auto& free = problem.free();
  const Index q = idx(free.size());
  double phi = problem.value(f, mu);
  std::size_t steps = 0;

  auto reduced_gradient = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& slack) {
    const Eigen::VectorXd full = problem.residual(x, mu * slack.cwiseInverse());
    Eigen::VectorXd out(q);
    for (Index j = 0; j < q; ++j) out[j] = full[idx(free[static_cast<std::size_t>(j)])];
    return out;
  };

  Eigen::VectorXd slack = Eigen::VectorXd::Ones(idx(f.size())) - jump_energies(problem.graph(), f);
  Eigen::VectorXd grad = reduced_gradient(f, slack);

  while (steps < max_steps && grad.norm() > grad_tol) {
    const Eigen::MatrixXd full_h = problem.curvature(f, slack, mu);
    Eigen::MatrixXd h(q, q);
    for (Index r = 0; r < q; ++r)
      for (Index c = 0; c < q; ++c) h(r, c) = full_h(idx(free[static_cast<std::size_t>(r)]), idx(free[static_cast<std::size_t>(c)]));

    const Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    if (ldlt.info() != Eigen::Success) break;
    const Eigen::VectorXd dir = ldlt.solve(grad);
    const double decrement = grad.dot(dir);
    if (!(decrement > 1e-24)) break;

    // Backtrack into the strictly feasible region, then until either the
    // Armijo condition holds or the gradient shrinks (the latter takes over
    // once objective differences drown in rounding).
    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial = f;
    Eigen::VectorXd trial_slack;
    Eigen::VectorXd trial_grad;
    for (int halvings = 0; halvings < 80; ++halvings, t *= 0.5) {
      for (Index j = 0; j < q; ++j) trial[idx(free[static_cast<std::size_t>(j)])] = f[idx(free[static_cast<std::size_t>(j)])] + t * dir[j];
      trial_slack = Eigen::VectorXd::Ones(idx(f.size())) - jump_energies(problem.graph(), trial);
      if (!(trial_slack.minCoeff() > 0.0)) continue;
      const double trial_phi = problem.value(trial, mu);
      trial_grad = reduced_gradient(trial, trial_slack);
      const bool armijo = trial_phi > phi && trial_phi >= phi + 0.25 * t * decrement;
      if (armijo || trial_grad.norm() < grad.norm()) {
        accepted = true;
        phi = trial_phi;
        break;
      }
    }
    if (!accepted) break;
    f = trial;
    slack = trial_slack;
    grad = trial_grad;
    ++steps;
  }
  return steps;
}

struct Certificate {
  double stationarity = 0.0;
  double complementarity = 0.0;
  double infeasibility = 0.0;
  double duality_gap = 0.0;

  double kkt() const { return std::max({stationarity, complementarity, infeasibility}); }
};

Certificate certify(const BarrierProblem& problem, const Eigen::VectorXd& f, const Eigen::VectorXd& lambda) {
  const Eigen::VectorXd a = jump_energies(problem.graph(), f);
  Certificate c;
  c.stationarity = problem.residual(f, lambda).norm();
  for (Index i = 0; i < a.size(); ++i) {
    const double slack = 1.0 - a[i];
    c.complementarity = std::max(c.complementarity, std::abs(lambda[i] * slack));
    c.duality_gap += lambda[i] * slack;
  }
  c.infeasibility = std::max(0.0, a.maxCoeff() - 1.0);
  return c;
}

struct Candidate {
  Eigen::VectorXd f;
  Eigen::VectorXd lambda;
};

// Minimum-norm least-squares solution; singular values below 1e-10 of the
// largest count as zero.
Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  return svd.solve(rhs);
}

// Least-squares multipliers for a fixed feasible point: fits e_b - e_a by the
// gradients of the near-active constraints. Avoids mu / (1 - a_i), which
// loses digits once the slacks approach rounding level.
Eigen::VectorXd refit_multipliers(const BarrierProblem& problem, const Eigen::VectorXd& f, double active_slack) {
  const Eigen::VectorXd a = jump_energies(problem.graph(), f);
  std::vector<NodeIndex> near;
  for (NodeIndex i = 0; i < static_cast<std::size_t>(a.size()); ++i) {
    if (1.0 - a[idx(i)] <= active_slack) near.push_back(i);
  }
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(f.size());
  if (near.empty()) return lambda;
  Eigen::MatrixXd grads(f.size(), idx(near.size()));
  for (std::size_t j = 0; j < near.size(); ++j) grads.col(idx(j)) = problem.constraint_gradient(f, near[j]);
  const Eigen::VectorXd fit = min_norm_solve(grads, problem.residual(f, Eigen::VectorXd::Zero(f.size())));
  for (std::size_t j = 0; j < near.size(); ++j) lambda[idx(near[j])] = std::max(fit[idx(j)], 0.0);
  return lambda;
}

// Newton iteration on the KKT equations of the near-active constraints:
//   (e_b - e_a) - sum_{i in A} lambda_i grad a_i(f) = 0,   a_i(f) = 1 (i in A),
// with minimum-norm least-squares steps, since the active gradients need not
// be independent. Constraints whose multiplier turns negative are released.
std::optional<Candidate> polish(const BarrierProblem& problem, const Eigen::VectorXd& f0,
                                const Eigen::VectorXd& lambda0, double active_slack, std::size_t& iterations) {
  const auto& free = problem.free();
  const Index q = idx(free.size());
  const Eigen::VectorXd a0 = jump_energies(problem.graph(), f0);
  std::vector<NodeIndex> active;
  for (NodeIndex i = 0; i < static_cast<std::size_t>(a0.size()); ++i) {
    if (1.0 - a0[idx(i)] <= active_slack) active.push_back(i);
  }

  for (int attempt = 0; attempt < 8 && !active.empty(); ++attempt) {
    const Index p = idx(active.size());
    Eigen::VectorXd f = f0;
    Eigen::VectorXd lambda(p);
    for (Index j = 0; j < p; ++j) lambda[j] = lambda0[idx(active[static_cast<std::size_t>(j)])];

    auto residual = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& lam) {
      Eigen::VectorXd weights = Eigen::VectorXd::Zero(x.size());
      for (Index j = 0; j < p; ++j) weights[idx(active[static_cast<std::size_t>(j)])] = lam[j];
      const Eigen::VectorXd full = problem.residual(x, weights);
      const Eigen::VectorXd a = jump_energies(problem.graph(), x);
      Eigen::VectorXd r(q + p);
      for (Index j = 0; j < q; ++j) r[j] = full[idx(free[static_cast<std::size_t>(j)])];
      for (Index j = 0; j < p; ++j) r[q + j] = 1.0 - a[idx(active[static_cast<std::size_t>(j)])];
      return r;
    };

    Eigen::VectorXd r = residual(f, lambda);
    double best = r.norm();
    int stalls = 0;
    for (int it = 0; it < 40 && best > 1e-15 && stalls < 3; ++it) {
      Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(q + p, q + p);
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(f.size(), f.size());
      for (Index j = 0; j < p; ++j) problem.add_constraint_hessian(h, active[static_cast<std::size_t>(j)], lambda[j]);
      for (Index r0 = 0; r0 < q; ++r0)
        for (Index c0 = 0; c0 < q; ++c0)
          jac(r0, c0) = -h(idx(free[static_cast<std::size_t>(r0)]), idx(free[static_cast<std::size_t>(c0)]));
      for (Index j = 0; j < p; ++j) {
        const Eigen::VectorXd grad = problem.constraint_gradient(f, active[static_cast<std::size_t>(j)]);
        for (Index r0 = 0; r0 < q; ++r0) {
          const double gv = grad[idx(free[static_cast<std::size_t>(r0)])];
          jac(r0, q + j) = -gv;
          jac(q + j, r0) = -gv;
        }
      }
      // Near-null directions of a degenerate vertex are treated as null.
      const Eigen::VectorXd step = min_norm_solve(jac, -r);
      Eigen::VectorXd trial_f = f;
      for (Index j = 0; j < q; ++j) trial_f[idx(free[static_cast<std::size_t>(j)])] += step[j];
      const Eigen::VectorXd trial_lambda = lambda + step.tail(p);
      const Eigen::VectorXd trial_r = residual(trial_f, trial_lambda);
      ++iterations;
      if (!(trial_r.norm() < best)) {
        ++stalls;
        if (trial_r.norm() > 10.0 * best) break;
      } else {
        stalls = 0;
        best = trial_r.norm();
      }
      f = trial_f;
      lambda = trial_lambda;
      r = trial_r;
    }

    // Multipliers within the residual of zero count as zero.
    const double noise = std::max(1e-9, 10.0 * best);
    std::vector<NodeIndex> keep;
    for (Index j = 0; j < p; ++j) {
      if (lambda[j] >= -noise) keep.push_back(active[static_cast<std::size_t>(j)]);
    }
    // Degenerate vertices let the Newton iterate slide along directions the
    // active set does not see; constraints it crosses join the active set.
    const Eigen::VectorXd a = jump_energies(problem.graph(), f);
    bool grew = false;
    for (NodeIndex i = 0; i < static_cast<std::size_t>(a.size()); ++i) {
      if (a[idx(i)] > 1.0 + 1e-12 && std::find(active.begin(), active.end(), i) == active.end()) {
        keep.push_back(i);
        grew = true;
      }
    }
    if (grew) {
      std::sort(keep.begin(), keep.end());
      active = std::move(keep);
      continue;
    }
    if (keep.size() == active.size()) {
      Candidate out{f, Eigen::VectorXd::Zero(f.size())};
      for (Index j = 0; j < p; ++j) out.lambda[idx(active[static_cast<std::size_t>(j)])] = std::max(lambda[j], 0.0);
      return out;
    }
    active = std::move(keep);
  }
  return std::nullopt;
}

}  // namespace

double ConstraintProfile::sup_root() const {
  return values.size() == 0 ? 0.0 : std::sqrt(values.maxCoeff());
}

ConstraintProfile constraint_profile(const Graph& g, const NodeVector& f) {
  if (f.size() != g.node_count()) throw LengthMismatch(g.node_count(), f.size());
  return {jump_energies(g, f.values())};
}

double commutator_norm(const Graph& g, const NodeVector& f) { return constraint_profile(g, f).sup_root(); }

ConnesResult connes_distance(const Graph& g, NodePair pair, const SolverOptions& options) {
  const std::size_t n = g.node_count();
  if (pair.a >= n || pair.b >= n) throw InvalidArgument("node pair out of range");
  if (!g.connected()) throw InvalidGraph("Connes distance needs a connected graph");
  if (!(options.tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (!(options.mu_factor > 0.0 && options.mu_factor < 1.0) || !(options.mu_final > 0.0) ||
      !(options.mu_initial >= options.mu_final)) {
    throw InvalidArgument("invalid barrier schedule");
  }

  ConnesResult result;
  if (pair.a == pair.b) {
    result.optimizer = NodeVector::zero(n);
    result.slacks = {Eigen::VectorXd::Zero(idx(n))};
    result.multipliers = Eigen::VectorXd::Zero(idx(n));
    result.certified = true;
    return result;
  }

  Eigen::VectorXd f = Eigen::VectorXd::Zero(idx(n));
  if (options.start) {
    if (options.start->size() != n) throw LengthMismatch(n, options.start->size());
    f = options.start->values().array() - (*options.start)[pair.a];
    if (!(jump_energies(g, f).maxCoeff() < 1.0)) throw InvalidArgument("start point is not strictly feasible");
  }

  const BarrierProblem problem(g, pair);
  double mu = options.mu_initial;
  while (true) {
    const bool last = mu <= options.mu_final;
    result.iterations += center(problem, f, mu, options.max_newton_per_stage, 1e-12);
    if (last) break;
    mu = std::max(mu * options.mu_factor, options.mu_final);
  }

  const Eigen::VectorXd slack = Eigen::VectorXd::Ones(idx(n)) - jump_energies(g, f);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(idx(n));
  for (Index i = 0; i < slack.size(); ++i) {
    if (slack[i] > 0.0) lambda[i] = mu / slack[i];
  }
  Certificate cert = certify(problem, f, lambda);
  const double barrier_gap = cert.duality_gap;
  {
    Eigen::VectorXd refit = refit_multipliers(problem, f, options.active_slack);
    const Certificate refit_cert = certify(problem, f, refit);
    if (refit_cert.kkt() < cert.kkt()) {
      lambda = std::move(refit);
      cert = refit_cert;
    }
  }

  if (const auto polished = polish(problem, f, lambda, options.active_slack, result.iterations)) {
    const Certificate polished_cert = certify(problem, polished->f, polished->lambda);
    const double gain = (polished->f[idx(pair.b)] - polished->f[idx(pair.a)]) - (f[idx(pair.b)] - f[idx(pair.a)]);
    // The barrier iterate is feasible and within its duality gap of the
    // optimum, so an accepted polish can only raise the objective.
    if (polished_cert.kkt() < cert.kkt() && gain >= -1e-12 && gain <= barrier_gap + 1e-9) {
      f = polished->f;
      lambda = polished->lambda;
      cert = polished_cert;
    }
  }

  const Eigen::VectorXd a = jump_energies(g, f);
  result.distance = f[idx(pair.b)] - f[idx(pair.a)];
  result.optimizer = NodeVector(f);
  result.slacks = {a};
  result.multipliers = lambda;
  result.stationarity = cert.stationarity;
  result.complementarity = cert.complementarity;
  result.infeasibility = cert.infeasibility;
  result.duality_gap = cert.duality_gap;
  result.kkt_residual = cert.kkt();
  result.certified = result.kkt_residual <= options.tol && a.maxCoeff() <= 1.0 + options.tol;
  return result;
}

std::string to_json(const ConnesResult& result) {
  auto as_array = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  const nlohmann::json doc{
      {"distance", result.distance},
      {"certified", result.certified},
      {"kkt_residual", result.kkt_residual},
      {"iterations", result.iterations},
      {"f", as_array(result.optimizer.values())},
      {"slacks", as_array(result.slacks.values)},
      {"multipliers", as_array(result.multipliers)},
      {"duality_gap", result.duality_gap},
  };
  return doc.dump();
}

NodeVector random_feasible_start(const Graph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> level(0.1, 0.9);
  Eigen::VectorXd f(idx(g.node_count()));
  for (Index i = 0; i < f.size(); ++i) f[i] = normal(rng);
  const double peak = jump_energies(g, f).maxCoeff();
  if (peak > 0.0) f *= std::sqrt(level(rng) / peak);
  return NodeVector(std::move(f));
}

}  // namespace ncg
