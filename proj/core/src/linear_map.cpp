#include "ncg/linear_map.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <utility>

#include "ncg/error.hpp"

namespace ncg {

namespace {

LinearMap::Matrix pruned(LinearMap::Matrix m) {
  m.prune(0.0, 0.0);
  m.makeCompressed();
  return m;
}

void require_same_shape(const LinearMap& lhs, const LinearMap& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() || lhs.domain() != rhs.domain() ||
      lhs.codomain() != rhs.codomain()) {
    throw InvalidArgument("linear maps have different shapes or spaces");
  }
}

}  // namespace

std::string_view to_string(Space s) {
  switch (s) {
    case Space::H0: return "H0";
    case Space::H1: return "H1";
    case Space::H: return "H";
  }
  return "?";
}

LinearMap::LinearMap(Space domain, Space codomain, Matrix matrix)
    : domain_(domain), codomain_(codomain), matrix_(pruned(std::move(matrix))) {}

LinearMap LinearMap::from_entries(std::size_t rows, std::size_t cols, Space domain, Space codomain,
                                  const std::vector<Entry>& entries) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.row >= rows || e.col >= cols) throw InvalidArgument("matrix entry out of range");
    if (!seen.emplace(e.row, e.col).second) {
      throw InvalidArgument("duplicate matrix entry (" + std::to_string(e.row) + "," +
                            std::to_string(e.col) + ")");
    }
    triplets.emplace_back(static_cast<int>(e.row), static_cast<int>(e.col), e.value);
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return {domain, codomain, std::move(m)};
}

LinearMap LinearMap::identity(std::size_t size, Space space) {
  Matrix m(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  m.setIdentity();
  return {space, space, std::move(m)};
}

LinearMap LinearMap::diagonal(const Eigen::VectorXd& diag, Space space) {
  std::vector<Entry> entries;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (diag[i] != 0.0) entries.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i), diag[i]});
  }
  const auto n = static_cast<std::size_t>(diag.size());
  return from_entries(n, n, space, space, entries);
}

double LinearMap::coeff(std::size_t row, std::size_t col) const {
  if (row >= rows() || col >= cols()) throw InvalidArgument("coefficient index out of range");
  return matrix_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

std::vector<Entry> LinearMap::entries() const {
  std::vector<Entry> out;
  out.reserve(nonzeros());
  for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r) {
    for (Matrix::InnerIterator it(matrix_, r); it; ++it) {
      out.push_back({static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()), it.value()});
    }
  }
  return out;
}

LinearMap LinearMap::adjoint() const {
  return {codomain_, domain_, Matrix(matrix_.transpose())};
}

Eigen::VectorXd LinearMap::apply(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != cols()) throw LengthMismatch(cols(), static_cast<std::size_t>(x.size()));
  return matrix_ * x;
}

double LinearMap::asymmetry() const {
  if (!is_square()) throw InvalidArgument("asymmetry of a non-square map");
  const Matrix diff = matrix_ - Matrix(matrix_.transpose());
  double worst = 0.0;
  for (Eigen::Index r = 0; r < diff.outerSize(); ++r)
    for (Matrix::InnerIterator it(diff, r); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

double LinearMap::max_abs() const {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r)
    for (Matrix::InnerIterator it(matrix_, r); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

void LinearMap::write_coordinate(std::ostream& out) const {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& e : entries()) out << e.row << ' ' << e.col << ' ' << e.value << '\n';
  out.precision(old_precision);
}

LinearMap operator*(const LinearMap& lhs, const LinearMap& rhs) {
  if (lhs.cols() != rhs.rows() || lhs.domain() != rhs.codomain()) {
    throw InvalidArgument("cannot compose maps " + std::string(to_string(rhs.domain())) + "->" +
                          std::string(to_string(rhs.codomain())) + " and " +
                          std::string(to_string(lhs.domain())) + "->" +
                          std::string(to_string(lhs.codomain())));
  }
  return {rhs.domain(), lhs.codomain(), LinearMap::Matrix(lhs.matrix() * rhs.matrix())};
}

LinearMap operator+(const LinearMap& lhs, const LinearMap& rhs) {
  require_same_shape(lhs, rhs);
  return {lhs.domain(), lhs.codomain(), LinearMap::Matrix(lhs.matrix() + rhs.matrix())};
}

LinearMap operator-(const LinearMap& lhs, const LinearMap& rhs) {
  require_same_shape(lhs, rhs);
  return {lhs.domain(), lhs.codomain(), LinearMap::Matrix(lhs.matrix() - rhs.matrix())};
}

LinearMap operator*(double scalar, const LinearMap& m) {
  return {m.domain(), m.codomain(), LinearMap::Matrix(scalar * m.matrix())};
}

bool operator==(const LinearMap& lhs, const LinearMap& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() || lhs.domain() != rhs.domain() ||
      lhs.codomain() != rhs.codomain()) {
    return false;
  }
  const LinearMap::Matrix diff = lhs.matrix() - rhs.matrix();
  for (Eigen::Index r = 0; r < diff.outerSize(); ++r)
    for (LinearMap::Matrix::InnerIterator it(diff, r); it; ++it)
      if (it.value() != 0.0) return false;
  return true;
}

}  // namespace ncg
