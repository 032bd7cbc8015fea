#include "hermitk/sampling.hpp"

namespace hermitk {

namespace {

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

Matrix standard_j(const Ring& ring, std::size_t size) {
  Matrix j(ring, size, size);
  for (std::size_t k = 0; k + 1 < size; k += 2) {
    j(k, k + 1) = ring.one();
    j(k + 1, k) = -ring.one();
  }
  return j;
}

}  // namespace

Element random_scalar(const Ring& ring, Rng& rng, long bound) {
  switch (ring.coeff_kind()) {
    case CoeffKind::Integers:
      return ring.from_int(uniform(rng, -bound, bound));
    case CoeffKind::Rationals:
      return ring.from_rational(mpq_class(uniform(rng, -bound, bound), uniform(rng, 1, bound)));
    case CoeffKind::PrimeField:
    case CoeffKind::ModularRing: {
      long n = ring.modulus().fits_slong_p() ? ring.modulus().get_si() : 1000003;
      return ring.from_int(uniform(rng, 0, n - 1));
    }
  }
  return ring.zero();
}

Element random_element(const Ring& ring, Rng& rng, long bound, int max_terms, int max_exp) {
  const Ring scalars = ring.scalar_ring();
  std::vector<Term> terms;
  int count = static_cast<int>(uniform(rng, 0, max_terms));
  for (int k = 0; k < count; ++k) {
    Monomial m(ring.num_variables(), 0);
    for (std::size_t v = 0; v < m.size(); ++v) {
      m[v] = static_cast<int>(uniform(rng, ring.is_inverted(v) ? -max_exp : 0, max_exp));
    }
    auto c = random_scalar(scalars, rng, bound).constant_value();
    terms.push_back(Term{std::move(m), *c});
  }
  return Element::from_terms(ring, std::move(terms));
}

Matrix random_matrix(const Ring& ring, std::size_t rows, std::size_t cols, Rng& rng, long bound) {
  Matrix m(ring, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_element(ring, rng, bound, ring.num_variables() ? 2 : 1, 1);
  }
  return m;
}

Matrix random_unimodular(const Ring& ring, std::size_t n, Rng& rng, int steps) {
  Matrix m = Matrix::identity(ring, n);
  if (n == 0) return m;
  if (steps == 0) steps = static_cast<int>(3 * n);
  if (ring.is_field()) {
    for (std::size_t i = 0; i < n; ++i) {
      Element d = random_scalar(ring, rng, 3);
      while (d.is_zero()) d = random_scalar(ring, rng, 3);
      m(i, i) = d;
    }
  }
  for (int s = 0; s < steps; ++s) {
    std::size_t i = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    std::size_t j = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    if (i == j) continue;
    Element c = random_scalar(ring.scalar_ring(), rng, 2).coerce(ring);
    if (c.is_zero()) continue;
    // Row operation r_i += c * r_j.
    for (std::size_t k = 0; k < n; ++k) {
      if (!m(j, k).is_zero()) m(i, k) += c * m(j, k);
    }
  }
  return m;
}

Matrix random_alternating_unimodular(const Ring& ring, std::size_t size, Rng& rng) {
  if (size % 2 != 0) throw Error(ErrorCode::OddSize, "alternating unimodular forms have even size");
  Matrix m = random_unimodular(ring, size, rng);
  return m.transpose() * standard_j(ring, size) * m;
}

Matrix random_symplectic(const Ring& ring, std::size_t n, Rng& rng, int count) {
  Matrix j = standard_j(ring, 2 * n);
  Matrix a = Matrix::identity(ring, 2 * n);
  for (int s = 0; s < count; ++s) {
    Matrix v(ring, 2 * n, 1);
    for (std::size_t k = 0; k < 2 * n; ++k) v(k, 0) = random_scalar(ring.scalar_ring(), rng, 1).coerce(ring);
    Element lambda = random_scalar(ring.scalar_ring(), rng, 2).coerce(ring);
    Matrix t = Matrix::identity(ring, 2 * n) + (v * (j * v).transpose()).scaled(lambda);
    a = a * t;
  }
  return a;
}

}  // namespace hermitk
