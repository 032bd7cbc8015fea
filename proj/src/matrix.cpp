#include "hermitk/matrix.hpp"

#include <sstream>

namespace hermitk {

Matrix::Matrix(Ring ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), e_(rows * cols, Element(ring_)) {}

Matrix Matrix::identity(const Ring& ring, std::size_t n) {
  Matrix m(ring, n, n);
  Element one = ring.one();
  for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
  return m;
}

Matrix Matrix::from_ints(const Ring& ring, const std::vector<std::vector<long>>& rows) {
  std::size_t c = rows.empty() ? 0 : rows[0].size();
  Matrix m(ring, rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = ring.from_int(rows[i][j]);
  }
  return m;
}

Matrix Matrix::parse(const Ring& ring, const std::vector<std::vector<std::string>>& rows) {
  std::size_t c = rows.empty() ? 0 : rows[0].size();
  Matrix m(ring, rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                             " entries, expected " + std::to_string(c));
    }
    for (std::size_t j = 0; j < c; ++j) {
      try {
        m(i, j) = Element::parse(ring, rows[i][j]);
      } catch (const Error& e) {
        throw Error(ErrorCode::ParseError,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) + ") " + e.what());
      }
    }
  }
  return m;
}

Matrix Matrix::from_rows(const Ring& ring, std::size_t cols, const std::vector<std::vector<Element>>& rows) {
  Matrix m(ring, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

void Matrix::set(std::size_t i, std::size_t j, Element v) {
  if (v.ring() != ring_) throw Error(ErrorCode::RingMismatch, "entry ring differs from matrix ring");
  e_.at(i * cols_ + j) = std::move(v);
}

bool Matrix::is_zero() const {
  for (const auto& x : e_) {
    if (!x.is_zero()) return false;
  }
  return true;
}

bool Matrix::is_identity() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      const Element& x = (*this)(i, j);
      if (i == j ? !x.is_one() : !x.is_zero()) return false;
    }
  }
  return true;
}

Matrix Matrix::transpose() const {
  Matrix t(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

Matrix Matrix::submatrix(const std::vector<std::size_t>& row_idx, const std::vector<std::size_t>& col_idx) const {
  Matrix s(ring_, row_idx.size(), col_idx.size());
  for (std::size_t i = 0; i < row_idx.size(); ++i) {
    for (std::size_t j = 0; j < col_idx.size(); ++j) s(i, j) = e_.at(row_idx[i] * cols_ + col_idx[j]);
  }
  return s;
}

Matrix Matrix::column(std::size_t j) const {
  Matrix c(ring_, rows_, 1);
  for (std::size_t i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
  return c;
}

Matrix Matrix::scaled(const Element& c) const {
  Matrix out(ring_, rows_, cols_);
  if (c.is_zero()) return out;
  for (std::size_t k = 0; k < e_.size(); ++k) {
    if (!e_[k].is_zero()) out.e_[k] = e_[k] * c;
  }
  return out;
}

Matrix Matrix::substitute(const Ring& target, std::span<const Element> values) const {
  Matrix out(target, rows_, cols_);
  for (std::size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k].substitute(target, values);
  return out;
}

Matrix Matrix::coerce(const Ring& target) const {
  if (target == ring_) return *this;
  Matrix out(target, rows_, cols_);
  for (std::size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k].coerce(target);
  return out;
}

std::vector<std::vector<std::string>> Matrix::to_strings() const {
  std::vector<std::vector<std::string>> out(rows_, std::vector<std::string>(cols_));
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j).to_string();
  }
  return out;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << ",";
    os << "[";
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ",";
      os << (*this)(i, j).to_string();
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

Matrix Matrix::operator-() const {
  Matrix out(*this);
  for (auto& x : out.e_) {
    if (!x.is_zero()) x = -x;
  }
  return out;
}

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.ring() != b.ring()) throw Error(ErrorCode::RingMismatch, std::string(op) + ": matrices over different rings");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(op) + ": shapes differ");
  }
}

}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add");
  Matrix out(a);
  for (std::size_t k = 0; k < out.e_.size(); ++k) {
    if (!b.e_[k].is_zero()) out.e_[k] = out.e_[k] + b.e_[k];
  }
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "subtract");
  Matrix out(a);
  for (std::size_t k = 0; k < out.e_.size(); ++k) {
    if (!b.e_[k].is_zero()) out.e_[k] = out.e_[k] - b.e_[k];
  }
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.ring_ != b.ring_) throw Error(ErrorCode::RingMismatch, "multiply: matrices over different rings");
  if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "multiply: inner dimensions differ");
  Matrix out(a.ring_, a.rows_, b.cols_);
  // i-k-j order so zero entries of a skip whole rows of b.
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Element& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Element& y = b(k, j);
        if (y.is_zero()) continue;
        out(i, j) += x * y;
      }
    }
  }
  return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.ring_ == b.ring_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  if (a.ring() != b.ring()) throw Error(ErrorCode::RingMismatch, "block_diag: matrices over different rings");
  Matrix out(a.ring(), a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  }
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, a.cols() + j) = b(i, j);
  }
  return out;
}

Matrix block_diag(const std::vector<Matrix>& blocks, const Ring& ring) {
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    if (b.ring() != ring) throw Error(ErrorCode::RingMismatch, "block_diag: block over a different ring");
    r += b.rows();
    c += b.cols();
  }
  Matrix out(ring, r, c);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i) {
      for (std::size_t j = 0; j < b.cols(); ++j) out(r0 + i, c0 + j) = b(i, j);
    }
    r0 += b.rows();
    c0 += b.cols();
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  if (a.ring() != b.ring()) throw Error(ErrorCode::RingMismatch, "kron: matrices over different rings");
  Matrix out(a.ring(), a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Element& x = a(i, j);
      if (x.is_zero()) continue;
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) {
          if (!b(k, l).is_zero()) out(i * b.rows() + k, j * b.cols() + l) = x * b(k, l);
        }
      }
    }
  }
  return out;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.ring() != b.ring()) throw Error(ErrorCode::RingMismatch, "hstack: matrices over different rings");
  if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "hstack: row counts differ");
  Matrix out(a.ring(), a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.ring() != b.ring()) throw Error(ErrorCode::RingMismatch, "vstack: matrices over different rings");
  if (a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "vstack: column counts differ");
  Matrix out(a.ring(), a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  }
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, j) = b(i, j);
  }
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> first_mismatch(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::make_pair(std::size_t{0}, std::size_t{0});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) != b(i, j)) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

namespace {

bool bareiss_applies(const Ring& r) {
  if (r.num_variables() != 0) return false;
  return r.coeff_kind() != CoeffKind::ModularRing || r.is_field();
}

/// Exact quotient in a scalar domain; the caller guarantees divisibility.
Element exact_div(const Element& a, const Element& b) {
  const Ring& r = a.ring();
  if (r.coeff_kind() == CoeffKind::Integers) {
    mpz_class q = a.constant_value()->get_num() / b.constant_value()->get_num();
    return r.from_mpz(q);
  }
  return a * b.inverse();
}

Element bareiss_det(Matrix a) {
  const Ring& r = a.ring();
  const std::size_t n = a.rows();
  Element prev = r.one();
  Element sign = r.one();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k).is_zero()) {
      std::size_t p = k + 1;
      while (p < n && a(p, k).is_zero()) ++p;
      if (p == n) return r.zero();
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Element num = a(k, k) * a(i, j) - a(i, k) * a(k, j);
        a(i, j) = exact_div(num, prev);
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

}  // namespace

std::vector<Element> characteristic_coefficients(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::NonSquare, "characteristic polynomial of a non-square matrix");
  const Ring& ring = m.ring();
  const std::size_t n = m.rows();
  std::vector<Element> vect{ring.one()};
  for (std::size_t r = 0; r < n; ++r) {
    // Toeplitz column for the leading (r+1)x(r+1) block.
    std::vector<Element> col;
    col.reserve(r + 2);
    col.push_back(ring.one());
    col.push_back(-m(r, r));
    std::vector<Element> v(r, Element(ring));
    for (std::size_t i = 0; i < r; ++i) v[i] = m(i, r);
    for (std::size_t k = 0; k < r; ++k) {
      Element s(ring);
      for (std::size_t j = 0; j < r; ++j) {
        if (!v[j].is_zero() && !m(r, j).is_zero()) s += m(r, j) * v[j];
      }
      col.push_back(-s);
      if (k + 1 < r) {
        std::vector<Element> w(r, Element(ring));
        for (std::size_t i = 0; i < r; ++i) {
          for (std::size_t j = 0; j < r; ++j) {
            if (!v[j].is_zero() && !m(i, j).is_zero()) w[i] += m(i, j) * v[j];
          }
        }
        v = std::move(w);
      }
    }
    std::vector<Element> next(r + 2, Element(ring));
    for (std::size_t i = 0; i < r + 2; ++i) {
      for (std::size_t j = 0; j <= i && j < vect.size(); ++j) {
        if (!col[i - j].is_zero() && !vect[j].is_zero()) next[i] += col[i - j] * vect[j];
      }
    }
    vect = std::move(next);
  }
  return vect;
}

Element determinant(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::NonSquare, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return m.ring().one();
  if (bareiss_applies(m.ring())) return bareiss_det(m);
  Element c = characteristic_coefficients(m)[n];
  return n % 2 == 0 ? c : -c;
}

Matrix adjugate(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::NonSquare, "adjugate of a non-square matrix");
  const std::size_t n = m.rows();
  const Ring& ring = m.ring();
  if (n == 0) return Matrix(ring, 0, 0);
  auto c = characteristic_coefficients(m);
  Matrix b = Matrix::identity(ring, n);
  for (std::size_t k = 1; k < n; ++k) {
    b = m * b;
    for (std::size_t i = 0; i < n; ++i) b(i, i) += c[k];
  }
  return n % 2 == 1 ? b : -b;
}

namespace {

/// Gauss-Jordan over a field; nullopt when singular.
std::optional<Matrix> field_inverse(const Matrix& m) {
  const Ring& ring = m.ring();
  const std::size_t n = m.rows();
  Matrix a(m);
  Matrix inv = Matrix::identity(ring, n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k).is_zero()) ++p;
    if (p == n) return std::nullopt;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(p, j));
        std::swap(inv(k, j), inv(p, j));
      }
    }
    Element piv = a(k, k).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      if (!a(k, j).is_zero()) a(k, j) *= piv;
      if (!inv(k, j).is_zero()) inv(k, j) *= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k).is_zero()) continue;
      Element f = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        if (!a(k, j).is_zero()) a(i, j) -= f * a(k, j);
        if (!inv(k, j).is_zero()) inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

}  // namespace

Matrix inverse_if_unit(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::NonSquare, "inverse of a non-square matrix");
  const Ring& ring = m.ring();
  if (ring.is_field()) {
    auto inv = field_inverse(m);
    if (!inv) throw Error(ErrorCode::NotAUnit, "determinant 0 is not a unit in " + ring.to_string());
    return *inv;
  }
  if (ring.kind() == RingKind::Integers) {
    Element d = determinant(m);
    if (!d.is_unit()) throw Error(ErrorCode::NotAUnit, "determinant " + d.to_string() + " is not a unit in ZZ");
    return field_inverse(m.coerce(Ring::rationals()))->coerce(ring);
  }
  Element d = determinant(m);
  if (!d.is_unit()) {
    throw Error(ErrorCode::NotAUnit, "determinant " + d.to_string() + " is not a unit in " + ring.to_string());
  }
  return adjugate(m).scaled(d.inverse());
}

std::vector<std::size_t> pivot_columns(const Matrix& m) {
  if (!m.ring().is_field()) throw Error(ErrorCode::NotAField, "row reduction needs a field");
  Matrix a(m);
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && a(p, col).is_zero()) ++p;
    if (p == a.rows()) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(row, j), a(p, j));
    Element piv = a(row, col).inverse();
    for (std::size_t i = row + 1; i < a.rows(); ++i) {
      if (a(i, col).is_zero()) continue;
      Element f = a(i, col) * piv;
      for (std::size_t j = col; j < a.cols(); ++j) {
        if (!a(row, j).is_zero()) a(i, j) -= f * a(row, j);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t rank(const Matrix& m) { return pivot_columns(m).size(); }

}  // namespace hermitk
