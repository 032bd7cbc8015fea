#include "hermitk/sp_group.hpp"

#include <array>

namespace hermitk {

Matrix standard_j(std::size_t n, const Ring& ring) {
  Matrix j(ring, 2 * n, 2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    j(2 * k, 2 * k + 1) = ring.one();
    j(2 * k + 1, 2 * k) = -ring.one();
  }
  return j;
}

bool is_symplectic(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::NonSquare, "symplectic test needs a square matrix");
  if (m.rows() % 2 != 0) throw Error(ErrorCode::OddSize, "size " + std::to_string(m.rows()) + " is odd");
  Matrix j = standard_j(m.rows() / 2, m.ring());
  return m.transpose() * j * m == j;
}

SymplecticMatrix SymplecticMatrix::from(Matrix m) {
  if (!is_symplectic(m)) throw Error(ErrorCode::NotSymplectic, m.to_string() + " does not preserve J");
  return SymplecticMatrix(std::move(m));
}

SymplecticMatrix SymplecticMatrix::identity(std::size_t size, const Ring& ring) {
  return from(Matrix::identity(ring, size));
}

SymplecticMatrix stabilize(const SymplecticMatrix& a) {
  const Ring& r = a.ring();
  Matrix rot(r, 2, 2);
  rot(0, 1) = -r.one();
  rot(1, 0) = r.one();
  return SymplecticMatrix::from(block_diag(a.matrix(), rot));
}

SymplecticMatrix block_swap(std::size_t n, std::size_t m, const Ring& ring) {
  const std::size_t size = 2 * (n + m);
  Matrix p(ring, size, size);
  for (std::size_t k = 0; k < size; ++k) {
    std::size_t to = k < 2 * m ? 2 * n + k : k - 2 * m;
    p(to, k) = ring.one();
  }
  return SymplecticMatrix::from(std::move(p));
}

Matrix Transvection::nilpotent() const {
  Matrix jv = standard_j(v.rows() / 2, v.ring()) * v;
  return (v * jv.transpose()).scaled(lambda);
}

Matrix Transvection::matrix() const { return Matrix::identity(v.ring(), v.rows()) + nilpotent(); }

Matrix product(const std::vector<Transvection>& factors, std::size_t size, const Ring& ring) {
  Matrix out = Matrix::identity(ring, size);
  for (const auto& t : factors) out = out * t.matrix();
  return out;
}

namespace {

enum class PlaneBlock { Zero, Identity, MinusIdentity, Rotation, MinusRotation, Other };

PlaneBlock classify(const Matrix& m, std::size_t bi, std::size_t bj) {
  const Element& a = m(2 * bi, 2 * bj);
  const Element& b = m(2 * bi, 2 * bj + 1);
  const Element& c = m(2 * bi + 1, 2 * bj);
  const Element& d = m(2 * bi + 1, 2 * bj + 1);
  const Element one = m.ring().one();
  if (a.is_zero() && b.is_zero() && c.is_zero() && d.is_zero()) return PlaneBlock::Zero;
  if (b.is_zero() && c.is_zero() && a == d) {
    if (a == one) return PlaneBlock::Identity;
    if (a == -one) return PlaneBlock::MinusIdentity;
  }
  if (a.is_zero() && d.is_zero() && b == -c) {
    if (c == one) return PlaneBlock::Rotation;
    if (c == -one) return PlaneBlock::MinusRotation;
  }
  return PlaneBlock::Other;
}

Matrix unit_vector(std::size_t size, std::size_t k, const Ring& ring) {
  Matrix v(ring, size, 1);
  v(k, 0) = ring.one();
  return v;
}

// Rotation by sign s: [[0,-s],[s,0]] = T_e(s) T_f(s) T_e(s).
void append_rotation(std::vector<Transvection>& out, std::size_t size, std::size_t plane, long s, const Ring& ring) {
  Element l = ring.from_int(s);
  out.push_back({unit_vector(size, 2 * plane, ring), l});
  out.push_back({unit_vector(size, 2 * plane + 1, ring), l});
  out.push_back({unit_vector(size, 2 * plane, ring), l});
}

// Exchanges planes a and b: e_a <-> e_b, f_a <-> f_b.
void append_plane_swap(std::vector<Transvection>& out, std::size_t size, std::size_t a, std::size_t b,
                       const Ring& ring) {
  // Coefficients on (e_a, f_a, e_b, f_b) and the scalar of each factor.
  static constexpr std::array<std::pair<std::array<long, 4>, long>, 7> word{{
      {{0, 0, 0, 1}, 1},
      {{0, 0, 1, -1}, 1},
      {{0, 1, 0, -1}, -1},
      {{1, 0, 0, 0}, -1},
      {{0, 1, -1, 0}, -1},
      {{0, 0, 0, 1}, -1},
      {{1, 0, -1, 0}, -1},
  }};
  const std::array<std::size_t, 4> idx{2 * a, 2 * a + 1, 2 * b, 2 * b + 1};
  for (const auto& [coeffs, l] : word) {
    Matrix v(ring, size, 1);
    for (std::size_t k = 0; k < 4; ++k) v(idx[k], 0) = ring.from_int(coeffs[k]);
    out.push_back({std::move(v), ring.from_int(l)});
  }
}

}  // namespace

std::vector<Transvection> factor_into_transvections(const SymplecticMatrix& p) {
  const Ring& ring = p.ring();
  const std::size_t size = p.size();
  const std::size_t planes = size / 2;
  Matrix cur = p.matrix();
  // cur * S_1 * ... * S_r = D, so p = D * S_r * ... * S_1.
  std::vector<std::pair<std::size_t, std::size_t>> swaps;
  for (std::size_t k = 0; k < planes; ++k) {
    std::size_t found = planes;
    for (std::size_t j = 0; j < planes; ++j) {
      PlaneBlock b = classify(cur, k, j);
      if (b == PlaneBlock::Other) {
        throw Error(ErrorCode::UnsupportedInput, "block (" + std::to_string(k) + "," + std::to_string(j) +
                                                     ") is not a signed plane permutation");
      }
      if (b == PlaneBlock::Zero) continue;
      if (found != planes) throw Error(ErrorCode::UnsupportedInput, "block row " + std::to_string(k) + " has two nonzero blocks");
      found = j;
    }
    if (found == planes) throw Error(ErrorCode::UnsupportedInput, "block row " + std::to_string(k) + " is zero");
    if (found < k) throw Error(ErrorCode::UnsupportedInput, "two block rows share block column " + std::to_string(found));
    if (found != k) {
      Matrix s = Matrix::identity(ring, size);
      for (std::size_t c : {std::size_t{0}, std::size_t{1}}) {
        s(2 * k + c, 2 * k + c) = ring.zero();
        s(2 * found + c, 2 * found + c) = ring.zero();
        s(2 * k + c, 2 * found + c) = ring.one();
        s(2 * found + c, 2 * k + c) = ring.one();
      }
      cur = cur * s;
      swaps.emplace_back(k, found);
    }
  }
  std::vector<Transvection> out;
  for (std::size_t k = 0; k < planes; ++k) {
    switch (classify(cur, k, k)) {
      case PlaneBlock::Identity: break;
      case PlaneBlock::Rotation: append_rotation(out, size, k, 1, ring); break;
      case PlaneBlock::MinusRotation: append_rotation(out, size, k, -1, ring); break;
      case PlaneBlock::MinusIdentity:
        append_rotation(out, size, k, 1, ring);
        append_rotation(out, size, k, 1, ring);
        break;
      default: throw Error(ErrorCode::InvariantViolated, "diagonal block did not reduce");
    }
  }
  for (auto it = swaps.rbegin(); it != swaps.rend(); ++it) append_plane_swap(out, size, it->first, it->second, ring);
  if (product(out, size, ring) != p.matrix()) {
    throw Error(ErrorCode::InvariantViolated, "transvection product does not reproduce the input");
  }
  return out;
}

Matrix HomotopyPath::evaluate(const Element& value) const {
  std::vector<Element> values;
  for (std::size_t k = 0; k < base_ring.num_variables(); ++k) values.push_back(base_ring.variable(k));
  values.push_back(value);
  Matrix out = Matrix::identity(base_ring, size);
  for (const auto& f : paths) out = out * f.substitute(base_ring, values);
  return out;
}

HomotopyPath homotopy_witness(const std::vector<Transvection>& factors, std::size_t size, const Ring& ring) {
  std::string name = "t";
  while (ring.variable_index(name)) name += "_";
  Ring ext = ring.adjoin({name});
  HomotopyPath h{factors, size, ring, name, ext, {}};
  const Element t = ext.variable(name);
  const Matrix j = standard_j(size / 2, ext);
  const Matrix id = Matrix::identity(ext, size);
  std::vector<Element> at_zero, at_one;
  for (std::size_t k = 0; k < ring.num_variables(); ++k) {
    at_zero.push_back(ring.variable(k));
    at_one.push_back(ring.variable(k));
  }
  at_zero.push_back(ring.zero());
  at_one.push_back(ring.one());
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const Transvection& f = factors[k];
    if (f.v.ring() != ring || f.lambda.ring() != ring) throw Error(ErrorCode::RingMismatch, "factor over another ring");
    if (f.v.rows() != size || f.v.cols() != 1) throw Error(ErrorCode::DimensionMismatch, "factor vector has the wrong shape");
    Matrix n = f.nilpotent();
    if (!(n * n).is_zero()) throw Error(ErrorCode::InvariantViolated, "factor " + std::to_string(k) + " is not unipotent");
    Matrix path = id + n.coerce(ext).scaled(t);
    std::string where = "path " + std::to_string(k);
    if (path.transpose() * j * path != j) throw Error(ErrorCode::InvariantViolated, where + " leaves Sp over " + ext.to_string());
    if (!path.substitute(ring, at_zero).is_identity()) throw Error(ErrorCode::InvariantViolated, where + " does not start at I");
    if (path.substitute(ring, at_one) != f.matrix()) throw Error(ErrorCode::InvariantViolated, where + " does not end at the factor");
    h.paths.push_back(std::move(path));
  }
  return h;
}

}  // namespace hermitk
