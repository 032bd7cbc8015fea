#include "hermitk/forms.hpp"

namespace hermitk {

std::string_view to_string(FormFlavor f) { return f == FormFlavor::Symmetric ? "symmetric" : "alternating"; }

FormFlavor tensor_flavor(FormFlavor a, FormFlavor b) {
  return a == b ? FormFlavor::Symmetric : FormFlavor::Alternating;
}

namespace {

std::string at(std::size_t i, std::size_t j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

}  // namespace

BilinearSpace::BilinearSpace(FormFlavor flavor, Matrix gram) : flavor_(flavor), gram_(std::move(gram)) {
  if (!gram_.is_square()) throw Error(ErrorCode::NonSquare, "Gram matrix must be square");
  const std::size_t n = gram_.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (flavor_ == FormFlavor::Alternating && !gram_(i, i).is_zero()) {
      throw Error(ErrorCode::NotAlternating, "nonzero diagonal entry at " + at(i, i));
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (flavor_ == FormFlavor::Symmetric && gram_(i, j) != gram_(j, i)) {
        throw Error(ErrorCode::NotSymmetric, "entries " + at(i, j) + " and " + at(j, i) + " differ");
      }
      if (flavor_ == FormFlavor::Alternating && gram_(i, j) != -gram_(j, i)) {
        throw Error(ErrorCode::NotAlternating, "entries " + at(i, j) + " and " + at(j, i) + " are not opposite");
      }
    }
  }
}

bool BilinearSpace::is_unimodular() const { return determinant(gram_).is_unit(); }

void BilinearSpace::require_unimodular() const {
  Element d = determinant(gram_);
  if (!d.is_unit()) {
    throw Error(ErrorCode::NotUnimodular, "determinant " + d.to_string() + " is not a unit in " + ring().to_string());
  }
}

Element BilinearSpace::pair(const Matrix& x, const Matrix& y) const {
  Matrix v = x.transpose() * gram_ * y;
  return v(0, 0);
}

Isometry check_isometry(const BilinearSpace& a, const BilinearSpace& b, const Matrix& t) {
  if (a.ring() != b.ring() || t.ring() != a.ring()) {
    throw Error(ErrorCode::RingMismatch, "isometry data over different rings");
  }
  if (t.rows() != a.rank() || t.cols() != b.rank()) {
    throw Error(ErrorCode::DimensionMismatch, "witness shape does not match source and target ranks");
  }
  if (a.rank() != b.rank()) throw Error(ErrorCode::NotInvertible, "source and target ranks differ");
  Element d = determinant(t);
  if (!d.is_unit()) throw Error(ErrorCode::NotInvertible, "witness determinant " + d.to_string() + " is not a unit");
  Matrix lhs = t.transpose() * a.gram() * t;
  if (auto bad = first_mismatch(lhs, b.gram())) {
    throw Error(ErrorCode::CongruenceFails, "entry " + at(bad->first, bad->second) + ": got " +
                                                lhs(bad->first, bad->second).to_string() + ", expected " +
                                                b.gram()(bad->first, bad->second).to_string());
  }
  return Isometry(a, b, t);
}

Isometry Isometry::then(const Isometry& next) const {
  if (!(target_ == next.source_)) throw Error(ErrorCode::DimensionMismatch, "isometries do not compose");
  return check_isometry(source_, next.target_, witness_ * next.witness_);
}

Isometry Isometry::inverse() const { return check_isometry(target_, source_, inverse_if_unit(witness_)); }

BilinearSpace hyperbolic(FormFlavor flavor, std::size_t n, const Ring& ring) {
  Matrix g(ring, 2 * n, 2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    g(2 * k, 2 * k + 1) = ring.one();
    g(2 * k + 1, 2 * k) = flavor == FormFlavor::Symmetric ? ring.one() : -ring.one();
  }
  return BilinearSpace(flavor, std::move(g));
}

BilinearSpace orthogonal_sum(const BilinearSpace& a, const BilinearSpace& b) {
  if (a.ring() != b.ring()) throw Error(ErrorCode::RingMismatch, a.ring().to_string() + " vs " + b.ring().to_string());
  if (a.flavor() != b.flavor()) throw Error(ErrorCode::FlavorMismatch, "orthogonal sum of different flavors");
  return BilinearSpace(a.flavor(), block_diag(a.gram(), b.gram()));
}

BilinearSpace tensor_product(const BilinearSpace& a, const BilinearSpace& b) {
  if (a.ring() != b.ring()) throw Error(ErrorCode::RingMismatch, a.ring().to_string() + " vs " + b.ring().to_string());
  return BilinearSpace(tensor_flavor(a.flavor(), b.flavor()), kron(a.gram(), b.gram()));
}

Isometry orthogonal_sum(const Isometry& a, const Isometry& b) {
  return check_isometry(orthogonal_sum(a.source(), b.source()), orthogonal_sum(a.target(), b.target()),
                        block_diag(a.witness(), b.witness()));
}

Isometry tensor_product(const Isometry& a, const Isometry& b) {
  return check_isometry(tensor_product(a.source(), b.source()), tensor_product(a.target(), b.target()),
                        kron(a.witness(), b.witness()));
}

Matrix lower_decompose(const Matrix& m) {
  BilinearSpace check(FormFlavor::Alternating, m);
  Matrix l(m.ring(), m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < i; ++j) l(i, j) = m(i, j);
  }
  return l;
}

Isometry embed_into_hyperbolic(const BilinearSpace& s) {
  if (s.flavor() != FormFlavor::Alternating) throw Error(ErrorCode::NotAlternating, "embedding needs an alternating form");
  s.require_unimodular();
  const Ring& ring = s.ring();
  const std::size_t n = s.rank();
  Matrix l = lower_decompose(inverse_if_unit(s.gram()));
  Matrix id = Matrix::identity(ring, n);
  Matrix w = vstack(hstack(l, id), hstack(l.transpose(), id));
  BilinearSpace source(FormFlavor::Alternating, block_diag(s.gram(), -s.gram()));
  BilinearSpace target(FormFlavor::Alternating, vstack(hstack(Matrix(ring, n, n), -id), hstack(id, Matrix(ring, n, n))));
  return check_isometry(source, target, w);
}

Isometry standardize_symplectic(const BilinearSpace& s) {
  if (s.flavor() != FormFlavor::Alternating) {
    throw Error(ErrorCode::NotAlternating, "standardization needs an alternating form");
  }
  // No separate unimodularity test: a degenerate form always runs out of
  // unit pivots, so it surfaces as NoUnitPivot with the offending block.
  const Ring& ring = s.ring();
  const std::size_t n = s.rank();
  const Matrix& g = s.gram();
  std::vector<Matrix> basis;
  for (std::size_t k = 0; k < n; ++k) {
    Matrix v(ring, n, 1);
    v(k, 0) = ring.one();
    basis.push_back(std::move(v));
  }
  std::vector<Matrix> out;
  while (!basis.empty()) {
    const std::size_t m = basis.size();
    // Residual Gram of the remaining vectors.
    Matrix r(ring, m, m);
    std::vector<Matrix> gv;
    gv.reserve(m);
    for (const auto& v : basis) gv.push_back(g * v);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) r(i, j) = (basis[i].transpose() * gv[j])(0, 0);
    }
    std::optional<std::pair<std::size_t, std::size_t>> pivot;
    for (std::size_t i = 0; i < m && !pivot; ++i) {
      for (std::size_t j = 0; j < m && !pivot; ++j) {
        if (r(i, j).is_unit()) pivot = std::make_pair(i, j);
      }
    }
    if (!pivot) throw Error(ErrorCode::NoUnitPivot, "residual block " + r.to_string() + " has no unit entry");
    auto [i, j] = *pivot;
    Matrix e = basis[i];
    Matrix f = basis[j].scaled(r(i, j).inverse());
    Matrix ge = g * e, gf = g * f;
    std::vector<Matrix> rest;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == i || k == j) continue;
      const Matrix& w = basis[k];
      Element wf = (w.transpose() * gf)(0, 0);
      Element we = (w.transpose() * ge)(0, 0);
      rest.push_back(w - e.scaled(wf) + f.scaled(we));
    }
    out.push_back(std::move(e));
    out.push_back(std::move(f));
    basis = std::move(rest);
  }
  Matrix w(ring, n, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) w(i, k) = out[k](i, 0);
  }
  return check_isometry(s, hyperbolic(FormFlavor::Alternating, n / 2, ring), w);
}

BilinearSpace hyperbolic_of_rank(std::size_t q_rank, const Ring& ring) {
  Matrix g(ring, 2 * q_rank, 2 * q_rank);
  for (std::size_t k = 0; k < q_rank; ++k) {
    g(k, q_rank + k) = ring.one();
    g(q_rank + k, k) = -ring.one();
  }
  return BilinearSpace(FormFlavor::Alternating, std::move(g));
}

Isometry hyperbolic_of_rank_to_standard(std::size_t q_rank, const Ring& ring) {
  Matrix w(ring, 2 * q_rank, 2 * q_rank);
  for (std::size_t k = 0; k < q_rank; ++k) {
    w(k, 2 * k) = ring.one();
    w(q_rank + k, 2 * k + 1) = ring.one();
  }
  return check_isometry(hyperbolic_of_rank(q_rank, ring), hyperbolic(FormFlavor::Alternating, q_rank, ring), w);
}

Isometry lagrangian_target_to_standard(std::size_t k, const Ring& ring) {
  Matrix id = Matrix::identity(ring, k), zero(ring, k, k);
  BilinearSpace src(FormFlavor::Alternating, vstack(hstack(zero, -id), hstack(id, zero)));
  Matrix w(ring, 2 * k, 2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    w(k + i, 2 * i) = ring.one();
    w(i, 2 * i + 1) = ring.one();
  }
  return check_isometry(src, hyperbolic(FormFlavor::Alternating, k, ring), w);
}

std::optional<Isometry> pair_to_hyperbolic(const BilinearSpace& s) {
  const Ring& ring = s.ring();
  const std::size_t n = s.rank();
  if (n % 2 != 0) return std::nullopt;
  std::vector<std::size_t> partner(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (s.gram()(i, j).is_zero()) continue;
      if (partner[i] != n || i == j || !s.gram()(i, j).is_unit()) return std::nullopt;
      partner[i] = j;
    }
    if (partner[i] == n) return std::nullopt;
  }
  Matrix w(ring, n, n);
  std::size_t plane = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t p = partner[i];
    if (partner[p] != i) return std::nullopt;
    if (p < i) continue;
    w(i, 2 * plane) = ring.one();
    w(p, 2 * plane + 1) = s.gram()(i, p).inverse();
    ++plane;
  }
  return check_isometry(s, hyperbolic(s.flavor(), n / 2, ring), w);
}

Isometry tensor_hyperbolic_isometry(std::size_t n, std::size_t m, const Ring& ring) {
  BilinearSpace t = tensor_product(hyperbolic(FormFlavor::Alternating, n, ring),
                                   hyperbolic(FormFlavor::Alternating, m, ring));
  auto iso = pair_to_hyperbolic(t);
  if (!iso) throw Error(ErrorCode::InvariantViolated, "tensor of hyperbolic spaces is not a signed pairing");
  return *iso;
}

}  // namespace hermitk
