#include "ncg/operators.hpp"

#include <cmath>

#include "ncg/error.hpp"

namespace ncg {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void require_nodes(const Graph& g, const NodeVector& f) {
  if (f.size() != g.node_count()) throw LengthMismatch(g.node_count(), f.size());
}

void require_edges(const Graph& g, const EdgeVector& e) {
  if (e.size() != g.directed_edge_count()) throw LengthMismatch(g.directed_edge_count(), e.size());
}

// Places `block` into a larger matrix at offset (row0, col0).
void append_block(std::vector<Entry>& out, const LinearMap& block, std::size_t row0, std::size_t col0) {
  for (const auto& e : block.entries()) out.push_back({e.row + row0, e.col + col0, e.value});
}

LinearMap block_of(const LinearMap& m, std::size_t row0, std::size_t col0, std::size_t rows,
                   std::size_t cols, Space domain, Space codomain) {
  std::vector<Entry> out;
  for (const auto& e : m.entries()) {
    if (e.row >= row0 && e.row < row0 + rows && e.col >= col0 && e.col < col0 + cols) {
      out.push_back({e.row - row0, e.col - col0, e.value});
    }
  }
  return LinearMap::from_entries(rows, cols, domain, codomain, out);
}

}  // namespace

NodeVector::NodeVector(Eigen::VectorXd values) : values_(std::move(values)) {
  if (!values_.allFinite()) throw InvalidArgument("node vector has non-finite entries");
}

NodeVector::NodeVector(std::initializer_list<double> values)
    : NodeVector(Eigen::Map<const Eigen::VectorXd>(values.begin(), idx(values.size()))) {}

EdgeVector::EdgeVector(Eigen::VectorXd values, bool antisymmetric)
    : values_(std::move(values)), antisymmetric_(antisymmetric) {
  if (!values_.allFinite()) throw InvalidArgument("edge vector has non-finite entries");
}

EdgeVector EdgeVector::basis(const Graph& g, NodeIndex tail, NodeIndex head) {
  const auto e = g.edge_index(tail, head);
  if (!e) throw InvalidArgument("no directed edge (" + std::to_string(tail) + "," + std::to_string(head) + ")");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(idx(g.directed_edge_count()));
  v[idx(*e)] = 1.0;
  return {std::move(v), false};
}

EdgeVector EdgeVector::oriented_bond(const Graph& g, NodeIndex tail, NodeIndex head) {
  const auto e = g.edge_index(tail, head);
  if (!e) throw InvalidArgument("no bond {" + std::to_string(tail) + "," + std::to_string(head) + "}");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(idx(g.directed_edge_count()));
  v[idx(*e)] = 1.0;
  v[idx(g.reverse(*e))] = -1.0;
  return {std::move(v), true};
}

double EdgeVector::at(const Graph& g, NodeIndex tail, NodeIndex head) const {
  require_edges(g, *this);
  const auto e = g.edge_index(tail, head);
  if (!e) throw InvalidArgument("no directed edge (" + std::to_string(tail) + "," + std::to_string(head) + ")");
  return values_[idx(*e)];
}

bool EdgeVector::is_antisymmetric(const Graph& g, double tol) const {
  require_edges(g, *this);
  for (EdgeIndex e = 0; e < size(); ++e) {
    if (std::abs(values_[idx(e)] + values_[idx(g.reverse(e))]) > tol) return false;
  }
  return true;
}

EdgeVector apply_d(const Graph& g, const NodeVector& f) {
  require_nodes(g, f);
  Eigen::VectorXd out(idx(g.directed_edge_count()));
  for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e) {
    const auto [i, k] = g.edge(e);
    out[idx(e)] = f[k] - f[i];
  }
  return {std::move(out), true};
}

EdgeVector apply_d1(const Graph& g, const NodeVector& f) {
  require_nodes(g, f);
  Eigen::VectorXd out(idx(g.directed_edge_count()));
  for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e) out[idx(e)] = f[g.edge(e).head];
  return {std::move(out), false};
}

EdgeVector apply_d2(const Graph& g, const NodeVector& f) {
  require_nodes(g, f);
  Eigen::VectorXd out(idx(g.directed_edge_count()));
  for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e) out[idx(e)] = f[g.edge(e).tail];
  return {std::move(out), false};
}

NodeVector apply_delta1(const Graph& g, const EdgeVector& e) {
  require_edges(g, e);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(idx(g.node_count()));
  for (EdgeIndex j = 0; j < e.size(); ++j) out[idx(g.edge(j).head)] += e[j];
  return NodeVector(std::move(out));
}

NodeVector apply_delta2(const Graph& g, const EdgeVector& e) {
  require_edges(g, e);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(idx(g.node_count()));
  for (EdgeIndex j = 0; j < e.size(); ++j) out[idx(g.edge(j).tail)] += e[j];
  return NodeVector(std::move(out));
}

NodeVector apply_adjoint_d(const Graph& g, const EdgeVector& e) {
  require_edges(g, e);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(idx(g.node_count()));
  for (EdgeIndex j = 0; j < e.size(); ++j) {
    const auto [i, k] = g.edge(j);
    out[idx(k)] += e[j];
    out[idx(i)] -= e[j];
  }
  return NodeVector(std::move(out));
}

LinearMap d_map(const Graph& g) {
  std::vector<Entry> entries;
  entries.reserve(2 * g.directed_edge_count());
  for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e) {
    const auto [i, k] = g.edge(e);
    entries.push_back({e, k, 1.0});
    entries.push_back({e, i, -1.0});
  }
  return LinearMap::from_entries(g.directed_edge_count(), g.node_count(), Space::H0, Space::H1, entries);
}

LinearMap d1_map(const Graph& g) {
  std::vector<Entry> entries;
  for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e) entries.push_back({e, g.edge(e).head, 1.0});
  return LinearMap::from_entries(g.directed_edge_count(), g.node_count(), Space::H0, Space::H1, entries);
}

LinearMap d2_map(const Graph& g) {
  std::vector<Entry> entries;
  for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e) entries.push_back({e, g.edge(e).tail, 1.0});
  return LinearMap::from_entries(g.directed_edge_count(), g.node_count(), Space::H0, Space::H1, entries);
}

LinearMap delta1_map(const Graph& g) {
  std::vector<Entry> entries;
  for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e) entries.push_back({g.edge(e).head, e, 1.0});
  return LinearMap::from_entries(g.node_count(), g.directed_edge_count(), Space::H1, Space::H0, entries);
}

LinearMap delta2_map(const Graph& g) {
  std::vector<Entry> entries;
  for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e) entries.push_back({g.edge(e).tail, e, 1.0});
  return LinearMap::from_entries(g.node_count(), g.directed_edge_count(), Space::H1, Space::H0, entries);
}

LinearMap adjacency_map(const Graph& g) {
  std::vector<Entry> entries;
  for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e) {
    const auto [i, k] = g.edge(e);
    entries.push_back({i, k, 1.0});
  }
  return LinearMap::from_entries(g.node_count(), g.node_count(), Space::H0, Space::H0, entries);
}

LinearMap degree_map(const Graph& g) {
  Eigen::VectorXd v(idx(g.node_count()));
  for (NodeIndex i = 0; i < g.node_count(); ++i) v[idx(i)] = static_cast<double>(g.degree(i));
  return LinearMap::diagonal(v, Space::H0);
}

LinearMap laplacian_map(const Graph& g) { return adjacency_map(g) - degree_map(g); }

LinearMap incidence_map(const Graph& g, const Orientation& orientation) {
  const auto bonds = g.bonds();
  if (!orientation.empty() && orientation.size() != bonds.size()) {
    throw LengthMismatch(bonds.size(), orientation.size());
  }
  std::vector<Entry> entries;
  for (std::size_t j = 0; j < bonds.size(); ++j) {
    auto [initial, terminal] = bonds[j];
    if (!orientation.empty() && orientation[j]) std::swap(initial, terminal);
    entries.push_back({initial, j, -1.0});
    entries.push_back({terminal, j, 1.0});
  }
  return LinearMap::from_entries(g.node_count(), bonds.size(), Space::H1, Space::H0, entries);
}

LinearMap DiracOperator::square_upper_block() const {
  const LinearMap sq = assembled * assembled;
  return block_of(sq, 0, 0, node_count, node_count, Space::H0, Space::H0);
}

LinearMap DiracOperator::square_lower_block() const {
  const LinearMap sq = assembled * assembled;
  return block_of(sq, node_count, node_count, edge_count, edge_count, Space::H1, Space::H1);
}

DiracOperator dirac_operator(const Graph& g) {
  DiracOperator dirac;
  dirac.node_count = g.node_count();
  dirac.edge_count = g.directed_edge_count();
  dirac.d_block = d_map(g);
  dirac.d_star_block = dirac.d_block.adjoint();

  std::vector<Entry> entries;
  append_block(entries, dirac.d_star_block, 0, dirac.node_count);
  append_block(entries, dirac.d_block, dirac.node_count, 0);
  const std::size_t size = dirac.node_count + dirac.edge_count;
  dirac.assembled = LinearMap::from_entries(size, size, Space::H, Space::H, entries);
  return dirac;
}

LinearMap chirality_map(const Graph& g) {
  Eigen::VectorXd diag(idx(g.node_count() + g.directed_edge_count()));
  diag.head(idx(g.node_count())).setOnes();
  diag.tail(idx(g.directed_edge_count())).setConstant(-1.0);
  return LinearMap::diagonal(diag, Space::H);
}

Eigen::VectorXd conjugation_J(const Eigen::VectorXd& x) { return x; }

Eigen::VectorXcd conjugation_J(const Eigen::VectorXcd& x) { return x.conjugate(); }

LinearMap function_representation(const Graph& g, const NodeVector& f) {
  require_nodes(g, f);
  Eigen::VectorXd diag(idx(g.node_count() + g.directed_edge_count()));
  diag.head(idx(g.node_count())) = f.values();
  for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e) diag[idx(g.node_count() + e)] = f[g.edge(e).tail];
  return LinearMap::diagonal(diag, Space::H);
}

LinearMap right_function_representation(const Graph& g, const NodeVector& f) {
  require_nodes(g, f);
  Eigen::VectorXd diag(idx(g.node_count() + g.directed_edge_count()));
  diag.head(idx(g.node_count())) = f.values();
  for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e) diag[idx(g.node_count() + e)] = f[g.edge(e).head];
  return LinearMap::diagonal(diag, Space::H);
}

LinearMap commutator_Df(const Graph& g, const NodeVector& f) {
  const auto dirac = dirac_operator(g);
  const auto rep = function_representation(g, f);
  return dirac.assembled * rep - rep * dirac.assembled;
}

EdgeVector cycle_vector(const Graph& g, std::span<const NodeIndex> cycle) {
  if (cycle.size() < 3) throw InvalidArgument("a cycle needs at least three nodes");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(idx(g.directed_edge_count()));
  for (std::size_t l = 0; l < cycle.size(); ++l) {
    const NodeIndex from = cycle[l];
    const NodeIndex to = cycle[(l + 1) % cycle.size()];
    const auto e = g.edge_index(from, to);
    if (!e) throw InvalidArgument("cycle step " + std::to_string(from) + "->" + std::to_string(to) + " is not a bond");
    v[idx(*e)] += 1.0;
    v[idx(g.reverse(*e))] -= 1.0;
  }
  return {std::move(v), true};
}

Eigen::VectorXd join(const NodeVector& f, const EdgeVector& e) {
  Eigen::VectorXd out(idx(f.size() + e.size()));
  out << f.values(), e.values();
  return out;
}

std::vector<IdentityCheck> check_operator_identities(const Graph& g) {
  const auto d = d_map(g);
  const auto d1 = d1_map(g);
  const auto d2 = d2_map(g);
  const auto a = adjacency_map(g);
  const auto v = degree_map(g);
  const auto lap = laplacian_map(g);
  const auto b = incidence_map(g);
  const auto dirac = dirac_operator(g);
  const auto chi = chirality_map(g);

  std::vector<IdentityCheck> checks;
  auto exact = [&checks](std::string name, const LinearMap& lhs, const LinearMap& rhs) {
    const double dev = (lhs - rhs).max_abs();
    checks.push_back({std::move(name), lhs == rhs, dev});
  };

  exact("d*d = -2Δ", d.adjoint() * d, -2.0 * lap);
  exact("d1*d1 = V", d1.adjoint() * d1, v);
  exact("d2*d2 = V", d2.adjoint() * d2, v);
  exact("d1*d2 = A", d1.adjoint() * d2, a);
  exact("d = d1 - d2", d, d1 - d2);
  exact("d* = δ1 - δ2", d.adjoint(), delta1_map(g) - delta2_map(g));
  exact("B·Bᵗ = V - A", b * b.adjoint(), v - a);
  exact("χD + Dχ = 0", chi * dirac.assembled + dirac.assembled * chi,
        LinearMap(Space::H, Space::H, LinearMap::Matrix(dirac.assembled.rows(), dirac.assembled.cols())));
  exact("D² upper block = -2Δ", dirac.square_upper_block(), -2.0 * lap);

  // Off-diagonal blocks of D^2 vanish.
  const LinearMap sq = dirac.assembled * dirac.assembled;
  const auto upper_right = block_of(sq, 0, g.node_count(), g.node_count(), g.directed_edge_count(), Space::H1, Space::H0);
  const auto lower_left = block_of(sq, g.node_count(), 0, g.directed_edge_count(), g.node_count(), Space::H0, Space::H1);
  const double off = std::max(upper_right.max_abs(), lower_left.max_abs());
  checks.push_back({"D² block diagonal", off == 0.0, off});
  return checks;
}

}  // namespace ncg
