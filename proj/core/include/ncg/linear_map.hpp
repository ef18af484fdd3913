#ifndef NCG_LINEAR_MAP_HPP
#define NCG_LINEAR_MAP_HPP

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace ncg {

/// The spaces operators act between: node functions, directed-edge
/// functions, and their direct sum.
enum class Space { H0, H1, H };

std::string_view to_string(Space s);

struct Entry {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

/**
 * Sparse matrix of an operator between two of the spaces above.
 *
 * Entries are unique per (row, col); explicit zeros are dropped. The adjoint
 * is the structural transpose with domain and codomain swapped, so
 * adjoint(adjoint(M)) == M exactly.
 */
class LinearMap {
 public:
  using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  LinearMap() = default;
  LinearMap(Space domain, Space codomain, Matrix matrix);

  /// Throws InvalidArgument on out-of-range or repeated (row, col).
  static LinearMap from_entries(std::size_t rows, std::size_t cols, Space domain, Space codomain,
                                const std::vector<Entry>& entries);
  static LinearMap identity(std::size_t size, Space space);
  static LinearMap diagonal(const Eigen::VectorXd& diag, Space space);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(matrix_.cols()); }
  Space domain() const noexcept { return domain_; }
  Space codomain() const noexcept { return codomain_; }
  const Matrix& matrix() const noexcept { return matrix_; }

  double coeff(std::size_t row, std::size_t col) const;
  /// Nonzero entries in row-major order.
  std::vector<Entry> entries() const;
  std::size_t nonzeros() const noexcept { return static_cast<std::size_t>(matrix_.nonZeros()); }

  LinearMap adjoint() const;
  Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(matrix_); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

  bool is_square() const noexcept { return rows() == cols(); }
  /// Largest |M - M^T| entry; requires a square map.
  double asymmetry() const;
  bool is_symmetric(double tol = 0.0) const { return is_square() && asymmetry() <= tol; }
  /// Largest absolute entry.
  double max_abs() const;
  bool is_zero(double tol = 0.0) const { return max_abs() <= tol; }

  /// Coordinate text: "row col value" per line, 0-based, full precision.
  void write_coordinate(std::ostream& out) const;

  friend LinearMap operator*(const LinearMap& lhs, const LinearMap& rhs);
  friend LinearMap operator+(const LinearMap& lhs, const LinearMap& rhs);
  friend LinearMap operator-(const LinearMap& lhs, const LinearMap& rhs);
  friend LinearMap operator*(double scalar, const LinearMap& m);
  /// Exact entrywise equality (tags included).
  friend bool operator==(const LinearMap& lhs, const LinearMap& rhs);

 private:
  Space domain_ = Space::H0;
  Space codomain_ = Space::H0;
  Matrix matrix_;
};

}  // namespace ncg

#endif  // NCG_LINEAR_MAP_HPP
