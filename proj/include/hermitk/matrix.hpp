#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hermitk/ring.hpp"

namespace hermitk {

/// Dense row-major matrix over a single ring.
class Matrix {
 public:
  Matrix(Ring ring, std::size_t rows, std::size_t cols);

  static Matrix identity(const Ring& ring, std::size_t n);
  static Matrix from_ints(const Ring& ring, const std::vector<std::vector<long>>& rows);
  /// Throws ParseError naming the offending entry.
  static Matrix parse(const Ring& ring, const std::vector<std::vector<std::string>>& rows);
  /// Every row must have `cols` entries.
  static Matrix from_rows(const Ring& ring, std::size_t cols, const std::vector<std::vector<Element>>& rows);

  const Ring& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  const Element& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
  Element& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  /// Assign with a ring check.
  void set(std::size_t i, std::size_t j, Element v);

  bool is_zero() const;
  bool is_identity() const;
  Matrix transpose() const;
  Matrix submatrix(const std::vector<std::size_t>& row_idx, const std::vector<std::size_t>& col_idx) const;
  Matrix column(std::size_t j) const;
  Matrix scaled(const Element& c) const;

  /// Replace every variable of the ring by an element of `target`.
  Matrix substitute(const Ring& target, std::span<const Element> values) const;
  Matrix coerce(const Ring& target) const;

  std::vector<std::vector<std::string>> to_strings() const;
  std::string to_string() const;

  Matrix operator-() const;
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b);
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

 private:
  Ring ring_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Element> e_;
};

inline std::ostream& operator<<(std::ostream& os, const Matrix& m) { return os << m.to_string(); }

Matrix block_diag(const Matrix& a, const Matrix& b);
Matrix block_diag(const std::vector<Matrix>& blocks, const Ring& ring);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);

/// Position of the first entry (row-major) where a and b differ.
std::optional<std::pair<std::size_t, std::size_t>> first_mismatch(const Matrix& a, const Matrix& b);

/// Bareiss elimination over Z, Q and F_p; Berkowitz (division free) over
/// everything else. Throws NonSquare.
Element determinant(const Matrix& m);

/// Coefficients c_0 = 1, c_1, ..., c_n of det(xI - m) by Berkowitz.
std::vector<Element> characteristic_coefficients(const Matrix& m);

/// adj(m) with m * adj(m) = det(m) * I, via Cayley-Hamilton.
Matrix adjugate(const Matrix& m);

/// Throws NotAUnit when det(m) is not a unit, NonSquare when m is not square.
Matrix inverse_if_unit(const Matrix& m);

/// Pivot column indices of the reduced row echelon form. Field only.
std::vector<std::size_t> pivot_columns(const Matrix& m);
std::size_t rank(const Matrix& m);

}  // namespace hermitk
