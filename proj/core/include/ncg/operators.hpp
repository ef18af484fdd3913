#ifndef NCG_OPERATORS_HPP
#define NCG_OPERATORS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ncg/graph.hpp"
#include "ncg/linear_map.hpp"

namespace ncg {

/// Function on nodes: element of H0 in the indicator basis n_i.
class NodeVector {
 public:
  NodeVector() = default;
  explicit NodeVector(Eigen::VectorXd values);
  NodeVector(std::initializer_list<double> values);
  static NodeVector zero(std::size_t n) { return NodeVector(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))); }
  static NodeVector constant(std::size_t n, double c) {
    return NodeVector(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), c));
  }

  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  double operator[](NodeIndex i) const { return values_[static_cast<Eigen::Index>(i)]; }
  const Eigen::VectorXd& values() const noexcept { return values_; }

 private:
  Eigen::VectorXd values_;
};

/// Function on directed edges: element of H1 in the orthonormal basis d_ik.
/// The antisymmetric flag marks membership in H1^a (value(i,k) = -value(k,i)).
class EdgeVector {
 public:
  EdgeVector() = default;
  EdgeVector(Eigen::VectorXd values, bool antisymmetric);
  static EdgeVector zero(const Graph& g) {
    return {Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.directed_edge_count())), true};
  }
  /// Basis vector d_ik; throws if i and k are not adjacent.
  static EdgeVector basis(const Graph& g, NodeIndex tail, NodeIndex head);
  /// Oriented bond b_ik = d_ik - d_ki.
  static EdgeVector oriented_bond(const Graph& g, NodeIndex tail, NodeIndex head);

  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  double operator[](EdgeIndex e) const { return values_[static_cast<Eigen::Index>(e)]; }
  double at(const Graph& g, NodeIndex tail, NodeIndex head) const;
  const Eigen::VectorXd& values() const noexcept { return values_; }
  bool antisymmetric() const noexcept { return antisymmetric_; }

  /// Checks value(i,k) = -value(k,i) on every bond, independent of the flag.
  bool is_antisymmetric(const Graph& g, double tol = 0.0) const;

 private:
  Eigen::VectorXd values_;
  bool antisymmetric_ = false;
};

// Operator application. All throw LengthMismatch on size errors.

/// (df)(i,k) = f_k - f_i. The result is flagged antisymmetric.
EdgeVector apply_d(const Graph& g, const NodeVector& f);
/// (d1 f)(i,k) = f_k: n_i -> sum_k d_ki.
EdgeVector apply_d1(const Graph& g, const NodeVector& f);
/// (d2 f)(i,k) = f_i: n_i -> sum_k d_ik.
EdgeVector apply_d2(const Graph& g, const NodeVector& f);
/// delta1: d_ik -> n_k (terminal node). This is the boundary map delta.
NodeVector apply_delta1(const Graph& g, const EdgeVector& e);
/// delta2: d_ik -> n_i (initial node).
NodeVector apply_delta2(const Graph& g, const EdgeVector& e);
/// d* = delta1 - delta2; equals 2 delta on H1^a.
NodeVector apply_adjoint_d(const Graph& g, const EdgeVector& e);

// Matrix assembly. H0 is indexed by node, H1 by directed edge.

LinearMap d_map(const Graph& g);
LinearMap d1_map(const Graph& g);
LinearMap d2_map(const Graph& g);
LinearMap delta1_map(const Graph& g);
LinearMap delta2_map(const Graph& g);
LinearMap adjacency_map(const Graph& g);
LinearMap degree_map(const Graph& g);
/// Delta = A - V; -Delta is positive semidefinite.
LinearMap laplacian_map(const Graph& g);

/// Orientation of every bond for the incidence matrix, indexed like
/// Graph::bonds(). `true` points the bond from its larger to its smaller
/// endpoint; the default (all false) points toward the larger index.
using Orientation = std::vector<bool>;

/// n x (bond count) incidence matrix: column j has -1 at the initial node and
/// +1 at the terminal node of bond j. B B^T = V - A for every orientation.
LinearMap incidence_map(const Graph& g, const Orientation& orientation = {});

struct DiracOperator {
  LinearMap d_block;       // H0 -> H1
  LinearMap d_star_block;  // H1 -> H0
  LinearMap assembled;     // on H = H0 (+) H1, size (n+m)^2

  std::size_t node_count = 0;
  std::size_t edge_count = 0;

  /// Upper-left n x n and lower-right m x m blocks of D^2 (d*d and dd*).
  LinearMap square_upper_block() const;
  LinearMap square_lower_block() const;
};

/// D = [[0, d*], [d, 0]] on H0 (+) H1.
DiracOperator dirac_operator(const Graph& g);

/// chi = +1 on H0, -1 on H1.
LinearMap chirality_map(const Graph& g);

/// Complex conjugation on H. Identity on real vectors.
Eigen::VectorXd conjugation_J(const Eigen::VectorXd& x);
Eigen::VectorXcd conjugation_J(const Eigen::VectorXcd& x);

/// Left action of f on H: f_i on n_i and f_i on d_ik.
LinearMap function_representation(const Graph& g, const NodeVector& f);
/// Right action of f on H: f_i on n_i and f_k on d_ik.
LinearMap right_function_representation(const Graph& g, const NodeVector& f);

/// [D, f] = D rep(f) - rep(f) D. Its off-diagonal blocks are [d,f]
/// (d_ik component (f_k - f_i) f'_k) and [d*,f] = -[d,f]^T.
LinearMap commutator_Df(const Graph& g, const NodeVector& f);

/// Closed oriented walk v_0 -> v_1 -> ... -> v_{L-1} -> v_0 as the sum of
/// its oriented bonds. Throws if consecutive nodes are not adjacent.
EdgeVector cycle_vector(const Graph& g, std::span<const NodeIndex> cycle);

/// Split/join vectors on H = H0 (+) H1.
Eigen::VectorXd join(const NodeVector& f, const EdgeVector& e);

struct IdentityCheck {
  std::string name;
  bool passed = false;
  double deviation = 0.0;
};

/// The exact operator identities of the calculus, evaluated on g:
/// d*d = -2 Delta, d1*d1 = V, d2*d2 = V, d1*d2 = A, d = d1 - d2,
/// d* = delta1 - delta2, B B^T = V - A, chi D + D chi = 0, and the
/// block structure of D^2. Integer-valued identities are compared exactly.
std::vector<IdentityCheck> check_operator_identities(const Graph& g);

}  // namespace ncg

#endif  // NCG_OPERATORS_HPP
