#include "hermitk/gw.hpp"

#include <algorithm>

namespace hermitk {

namespace {

using Vectors = std::vector<Matrix>;

Matrix unit_vector(const Ring& ring, std::size_t n, std::size_t k) {
  Matrix v(ring, n, 1);
  v(k, 0) = ring.one();
  return v;
}

Vectors standard_basis(const Ring& ring, std::size_t n) {
  Vectors out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(unit_vector(ring, n, k));
  return out;
}

Matrix as_columns(const Ring& ring, std::size_t n, const Vectors& cols) {
  Matrix m(ring, n, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) m(i, j) = cols[j](i, 0);
  }
  return m;
}

Element form(const Matrix& g, const Matrix& x, const Matrix& y) { return (x.transpose() * (g * y))(0, 0); }

bool is_finite_field(const Ring& r) {
  return r.num_variables() == 0 && r.coeff_kind() != CoeffKind::Rationals && r.is_field();
}

bool is_rationals(const Ring& r) { return r.kind() == RingKind::Rationals; }

void require_odd_field(const Ring& r) {
  if (!r.is_field()) throw Error(ErrorCode::NotAField, r.to_string() + " is not a field");
  if (r.modulus() == 2) throw Error(ErrorCode::CharacteristicTwo, "symmetric forms need 2 to be a unit");
}

struct Diagonal {
  Vectors basis;
  std::vector<Element> values;
};

/// Orthogonal basis of span(start) with respect to g; zero values last.
Diagonal diagonalize_span(const Matrix& g, Vectors basis) {
  Diagonal out;
  Vectors radical;
  while (!basis.empty()) {
    const std::size_t m = basis.size();
    std::optional<Matrix> v;
    std::size_t drop = m;
    for (std::size_t i = 0; i < m && !v; ++i) {
      if (!form(g, basis[i], basis[i]).is_zero()) {
        v = basis[i];
        drop = i;
      }
    }
    for (std::size_t i = 0; i < m && !v; ++i) {
      for (std::size_t j = i + 1; j < m && !v; ++j) {
        if (!form(g, basis[i], basis[j]).is_zero()) {
          v = basis[i] + basis[j];
          drop = i;
        }
      }
    }
    if (!v) {
      for (auto& b : basis) radical.push_back(std::move(b));
      break;
    }
    Element q = form(g, *v, *v);
    Element qi = q.inverse();
    Vectors rest;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == drop) continue;
      Element c = form(g, basis[k], *v) * qi;
      rest.push_back(c.is_zero() ? basis[k] : basis[k] - v->scaled(c));
    }
    out.basis.push_back(*v);
    out.values.push_back(q);
    basis = std::move(rest);
  }
  for (auto& r : radical) {
    out.basis.push_back(std::move(r));
    out.values.push_back(g.ring().zero());
  }
  return out;
}

// --- scalar helpers over F_p and Q -----------------------------------------

mpz_class residue(const Element& x) { return x.constant_value()->get_num(); }

/// Square root modulo an odd prime (Tonelli-Shanks).
std::optional<mpz_class> sqrt_mod(mpz_class a, const mpz_class& p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return mpz_class(0);
  if (mpz_legendre(a.get_mpz_t(), p.get_mpz_t()) != 1) return std::nullopt;
  mpz_class q = p - 1;
  unsigned long s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  mpz_class z = 2;
  while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
  mpz_class c, r, t, e;
  mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  e = (q + 1) / 2;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  unsigned long m = s;
  while (t != 1) {
    unsigned long i = 0;
    mpz_class tt = t;
    while (tt != 1) {
      tt = (tt * tt) % p;
      ++i;
    }
    mpz_class b = c;
    for (unsigned long k = 0; k + i + 1 < m; ++k) b = (b * b) % p;
    r = (r * b) % p;
    c = (b * b) % p;
    t = (t * c) % p;
    m = i;
  }
  return r;
}

std::optional<Element> field_sqrt(const Element& x) {
  const Ring& r = x.ring();
  if (is_rationals(r)) {
    mpq_class q = *x.constant_value();
    if (q < 0) return std::nullopt;
    if (!mpz_perfect_square_p(q.get_num().get_mpz_t()) || !mpz_perfect_square_p(q.get_den().get_mpz_t())) {
      return std::nullopt;
    }
    mpz_class a, b;
    mpz_sqrt(a.get_mpz_t(), q.get_num().get_mpz_t());
    mpz_sqrt(b.get_mpz_t(), q.get_den().get_mpz_t());
    return r.from_rational(mpq_class(a, b));
  }
  auto s = sqrt_mod(residue(x), r.modulus());
  if (!s) return std::nullopt;
  return r.from_mpz(*s);
}

bool is_square(const Element& x) { return field_sqrt(x).has_value(); }

/// m = root^2 * core with core square-free (trial division; large cofactors
/// are left in the core, which keeps the identity exact).
std::pair<mpz_class, mpz_class> squarefree_split(mpz_class m) {
  mpz_class root = 1, core = 1;
  if (m < 0) {
    core = -1;
    m = -m;
  }
  for (unsigned long p = 2; p < 100000 && mpz_class(p) * p <= m; ++p) {
    while (m % (p * p) == 0) {
      m /= p * p;
      root *= p;
    }
    if (m % p == 0) {
      m /= p;
      core *= p;
    }
  }
  if (mpz_perfect_square_p(m.get_mpz_t())) {
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), m.get_mpz_t());
    root *= s;
  } else {
    core *= m;
  }
  return {root, core};
}

/// Rescale a diagonal basis over Q so every value is a square-free integer.
void squarefree_values(Diagonal& d) {
  const Ring& r = d.values.empty() ? Ring::rationals() : d.values[0].ring();
  for (std::size_t k = 0; k < d.values.size(); ++k) {
    if (d.values[k].is_zero()) continue;
    mpq_class q = *d.values[k].constant_value();
    // q = (num*den)/den^2; scale by den, then strip the square root.
    mpz_class nd = q.get_num() * q.get_den();
    auto [root, core] = squarefree_split(nd);
    mpq_class scale(q.get_den(), root);
    scale.canonicalize();
    d.basis[k] = d.basis[k].scaled(r.from_rational(scale));
    d.values[k] = r.from_mpz(core);
  }
}

/// Solve a*x^2 + b*y^2 = c over F_p with a, b nonzero.
std::pair<Element, Element> solve_two_squares(const Element& a, const Element& b, const Element& c) {
  const Ring& r = a.ring();
  const mpz_class& p = r.modulus();
  Element bi = b.inverse();
  for (mpz_class x = 0; x < p; ++x) {
    Element ex = r.from_mpz(x);
    Element t = (c - a * ex * ex) * bi;
    if (auto y = field_sqrt(t)) return {ex, *y};
  }
  throw Error(ErrorCode::InvariantViolated, "no solution of a*x^2+b*y^2=c over " + r.to_string());
}

/// Coefficients of an isotropic vector for the diagonal form with the given
/// nonzero values, or nullopt when anisotropic.
std::optional<std::vector<Element>> isotropic_in_diagonal(const std::vector<Element>& a, long bound) {
  const std::size_t m = a.size();
  if (m < 2) return std::nullopt;
  const Ring& r = a[0].ring();
  auto vec = [&](std::vector<std::pair<std::size_t, Element>> entries) {
    std::vector<Element> x(m, r.zero());
    for (auto& [i, v] : entries) x[i] = v;
    return x;
  };
  // Pairs are decided exactly over both fields.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (auto s = field_sqrt(-a[j] * a[i].inverse())) return vec({{i, *s}, {j, r.one()}});
    }
  }
  if (is_finite_field(r)) {
    if (m < 3) return std::nullopt;
    auto [x, y] = solve_two_squares(a[0], a[1], -a[2]);
    return vec({{0, x}, {1, y}, {2, r.one()}});
  }
  if (m == 2) return std::nullopt;
  bool has_pos = false, has_neg = false;
  for (const auto& v : a) {
    (*v.constant_value() > 0 ? has_pos : has_neg) = true;
  }
  if (!(has_pos && has_neg)) return std::nullopt;
  std::vector<mpz_class> z;
  for (const auto& v : a) z.push_back(v.constant_value()->get_num());
  // a_i x^2 = -(sum a_j y_j^2): x rational iff -a_i * sum is a square.
  auto try_solve = [&](std::size_t i, const std::vector<std::size_t>& idx,
                       const std::vector<long>& ys) -> std::optional<std::vector<Element>> {
    mpz_class s = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) s += z[idx[k]] * ys[k] * ys[k];
    mpz_class t = -s * z[i];
    if (t < 0 || !mpz_perfect_square_p(t.get_mpz_t())) return std::nullopt;
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), t.get_mpz_t());
    std::vector<Element> x(m, r.zero());
    x[i] = r.from_rational(mpq_class(root, abs(z[i])));
    for (std::size_t k = 0; k < idx.size(); ++k) x[idx[k]] = r.from_int(ys[k]);
    return x;
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = j + 1; k < m; ++k) {
        if (i == j || i == k) continue;
        for (long y = 0; y <= bound; ++y) {
          for (long w = (y == 0 ? 1 : 0); w <= bound; ++w) {
            if (auto x = try_solve(i, {j, k}, {y, w})) return x;
          }
        }
      }
    }
  }
  if (m >= 4) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = j + 1; k < m; ++k) {
          for (std::size_t l = k + 1; l < m; ++l) {
            if (i == j || i == k || i == l) continue;
            for (long y = 1; y <= bound; ++y) {
              for (long w = 1; w <= bound; ++w) {
                for (long u = 1; u <= bound; ++u) {
                  if (auto x = try_solve(i, {j, k, l}, {y, w, u})) return x;
                }
              }
            }
          }
        }
      }
    }
  }
  throw Error(ErrorCode::SearchExhausted,
              "no isotropic vector with coefficients of height <= " + std::to_string(bound) + " for an indefinite form of rank " +
                  std::to_string(m));
}

Isometry identity_isometry(const BilinearSpace& s) {
  return check_isometry(s, s, Matrix::identity(s.ring(), s.rank()));
}

Matrix diagonal_matrix(const Ring& ring, const std::vector<Element>& values) {
  Matrix d(ring, values.size(), values.size());
  for (std::size_t k = 0; k < values.size(); ++k) d(k, k) = values[k];
  return d;
}

/// Over F_p: s -> <1,...,1,D,0,...,0> with D = 1 or the least non-residue.
Isometry canonical_finite_field(const BilinearSpace& s) {
  const Ring& r = s.ring();
  Diagonal d = diagonalize_span(s.gram(), standard_basis(r, s.rank()));
  std::size_t m = 0;
  while (m < d.values.size() && !d.values[m].is_zero()) ++m;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    // <a,b> = <1,ab>: u = x e + y f with a x^2 + b y^2 = 1, w = -b y e + a x f.
    const Element a = d.values[k], b = d.values[k + 1];
    auto [x, y] = solve_two_squares(a, b, r.one());
    Matrix u = d.basis[k].scaled(x) + d.basis[k + 1].scaled(y);
    Matrix w = d.basis[k].scaled(-b * y) + d.basis[k + 1].scaled(a * x);
    d.basis[k] = u;
    d.basis[k + 1] = w;
    d.values[k] = r.one();
    d.values[k + 1] = a * b;
  }
  if (m > 0) {
    Element target = r.one();
    if (!is_square(d.values[m - 1])) {
      Element n0 = r.from_int(2);
      while (is_square(n0)) n0 += r.one();
      target = n0;
    }
    Element s2 = *field_sqrt(target * d.values[m - 1].inverse());
    d.basis[m - 1] = d.basis[m - 1].scaled(s2);
    d.values[m - 1] = target;
  }
  BilinearSpace canon(FormFlavor::Symmetric, diagonal_matrix(r, d.values));
  return check_isometry(s, canon, as_columns(r, s.rank(), d.basis));
}

/// Over Q: s -> diagonal of square-free integers sorted ascending (zeros
/// included in the order).
Isometry canonical_rational_diagonal(const BilinearSpace& s) {
  const Ring& r = s.ring();
  Diagonal d = diagonalize_span(s.gram(), standard_basis(r, s.rank()));
  squarefree_values(d);
  std::vector<std::size_t> order(d.values.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return *d.values[x].constant_value() < *d.values[y].constant_value();
  });
  Vectors basis;
  std::vector<Element> values;
  for (std::size_t k : order) {
    basis.push_back(d.basis[k]);
    values.push_back(d.values[k]);
  }
  BilinearSpace canon(FormFlavor::Symmetric, diagonal_matrix(r, values));
  return check_isometry(s, canon, as_columns(r, s.rank(), basis));
}

long signature_of(const BilinearSpace& s) {
  Diagonal d = diagonalize_span(s.gram(), standard_basis(s.ring(), s.rank()));
  long sig = 0;
  for (const auto& v : d.values) {
    if (v.is_zero()) continue;
    sig += *v.constant_value() > 0 ? 1 : -1;
  }
  return sig;
}

std::size_t corank_of(const BilinearSpace& s) {
  Diagonal d = diagonalize_span(s.gram(), standard_basis(s.ring(), s.rank()));
  return static_cast<std::size_t>(std::count_if(d.values.begin(), d.values.end(), [](const Element& v) { return v.is_zero(); }));
}

IsometryDecision equal(Isometry a_to_c, const Isometry& b_to_c, std::string reason) {
  return IsometryDecision{Verdict::Equal, a_to_c.then(b_to_c.inverse()), std::move(reason)};
}

IsometryDecision distinct(std::string reason) { return IsometryDecision{Verdict::Distinct, std::nullopt, std::move(reason)}; }

IsometryDecision unknown(std::string reason) { return IsometryDecision{Verdict::Unknown, std::nullopt, std::move(reason)}; }

IsometryDecision decide_symmetric_rational(const BilinearSpace& a, const BilinearSpace& b) {
  if (corank_of(a) != corank_of(b)) return distinct("corank");
  if (signature_of(a) != signature_of(b)) return distinct("signature");
  Element da = determinant(a.gram()), db = determinant(b.gram());
  if (da.is_zero() != db.is_zero() || (!da.is_zero() && !is_square(da * db.inverse()))) {
    return distinct("determinant square class");
  }
  Isometry ca = canonical_rational_diagonal(a), cb = canonical_rational_diagonal(b);
  if (ca.target() == cb.target()) return equal(ca, cb, "square-free diagonal forms agree");
  if (!a.is_unimodular()) return unknown("degenerate forms with different diagonal representatives");
  try {
    WittDecomposition wa = witt_decompose(a), wb = witt_decompose(b);
    if (wa.hyperbolic_count == wb.hyperbolic_count) {
      Isometry aa = canonical_rational_diagonal(wa.anisotropic), ab = canonical_rational_diagonal(wb.anisotropic);
      if (aa.target() == ab.target()) {
        Isometry hyp = identity_isometry(hyperbolic(FormFlavor::Symmetric, wa.hyperbolic_count, a.ring()));
        return equal(wa.witness.then(orthogonal_sum(hyp, aa)), wb.witness.then(orthogonal_sum(hyp, ab)),
                     "Witt decompositions agree");
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SearchExhausted) throw;
  }
  return unknown("rank, signature and determinant agree; no certificate found over QQ");
}

}  // namespace

Isometry diagonalize_symmetric(const BilinearSpace& s) {
  if (s.flavor() != FormFlavor::Symmetric) throw Error(ErrorCode::NotSymmetric, "diagonalization needs a symmetric form");
  require_odd_field(s.ring());
  Diagonal d = diagonalize_span(s.gram(), standard_basis(s.ring(), s.rank()));
  BilinearSpace target(FormFlavor::Symmetric, diagonal_matrix(s.ring(), d.values));
  return check_isometry(s, target, as_columns(s.ring(), s.rank(), d.basis));
}

WittDecomposition witt_decompose(const BilinearSpace& s, long height_bound) {
  if (s.flavor() != FormFlavor::Symmetric) throw Error(ErrorCode::NotSymmetric, "Witt decomposition needs a symmetric form");
  const Ring& r = s.ring();
  require_odd_field(r);
  s.require_unimodular();
  const Matrix& g = s.gram();
  const std::size_t n = s.rank();
  const Element half = r.from_int(2).inverse();
  Vectors planes;
  Vectors basis = standard_basis(r, n);
  std::size_t h = 0;
  for (;;) {
    Diagonal d = diagonalize_span(g, basis);
    if (is_rationals(r)) squarefree_values(d);
    auto x = isotropic_in_diagonal(d.values, height_bound);
    if (!x) {
      basis = std::move(d.basis);
      break;
    }
    Matrix v(r, n, 1);
    for (std::size_t k = 0; k < x->size(); ++k) {
      if (!(*x)[k].is_zero()) v = v + d.basis[k].scaled((*x)[k]);
    }
    // Partner index k with B(v, d_k) = x_k a_k != 0; drop a second support index l.
    std::size_t k = 0;
    while ((*x)[k].is_zero()) ++k;
    std::size_t l = k + 1;
    while ((*x)[l].is_zero()) ++l;
    Matrix w = d.basis[k].scaled(((*x)[k] * d.values[k]).inverse());
    Matrix wp = w - v.scaled(form(g, w, w) * half);
    Vectors rest;
    for (std::size_t j = 0; j < d.basis.size(); ++j) {
      if (j == k || j == l) continue;
      const Matrix& y = d.basis[j];
      rest.push_back(y - v.scaled(form(g, y, wp)) - wp.scaled(form(g, y, v)));
    }
    planes.push_back(std::move(v));
    planes.push_back(std::move(wp));
    basis = std::move(rest);
    ++h;
  }
  Vectors all = planes;
  all.insert(all.end(), basis.begin(), basis.end());
  Matrix aniso_basis = as_columns(r, n, basis);
  BilinearSpace aniso(FormFlavor::Symmetric, aniso_basis.transpose() * g * aniso_basis);
  BilinearSpace target = orthogonal_sum(hyperbolic(FormFlavor::Symmetric, h, r), aniso);
  return WittDecomposition{h, aniso, check_isometry(s, target, as_columns(r, n, all))};
}

bool has_isotropic_vector_brute_force(const Matrix& gram) {
  const Ring& r = gram.ring();
  if (!is_finite_field(r)) throw Error(ErrorCode::NotAField, "brute-force enumeration needs a finite field");
  const long p = r.modulus().get_si();
  const std::size_t n = gram.rows();
  std::vector<long> x(n, 0);
  for (;;) {
    std::size_t i = 0;
    while (i < n && x[i] == p - 1) x[i++] = 0;
    if (i == n) return false;
    ++x[i];
    mpz_class q = 0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) q += x[a] * residue(gram(a, b)) * x[b];
    }
    if (q % r.modulus() == 0) return true;
  }
}

IsometryDecision decide_isometry(const BilinearSpace& a, const BilinearSpace& b) {
  if (a.ring() != b.ring()) throw Error(ErrorCode::RingMismatch, a.ring().to_string() + " vs " + b.ring().to_string());
  if (a.flavor() != b.flavor()) throw Error(ErrorCode::FlavorMismatch, "isometry between different flavors");
  const Ring& r = a.ring();
  if (a.rank() != b.rank()) return distinct("rank");
  if (a.gram() == b.gram()) return IsometryDecision{Verdict::Equal, identity_isometry(a), "identical Gram matrices"};
  const bool ua = a.is_unimodular(), ub = b.is_unimodular();
  if (ua != ub) return distinct("unimodularity");

  if (a.flavor() == FormFlavor::Alternating) {
    if (ua) {
      try {
        return equal(standardize_symplectic(a), standardize_symplectic(b), "both standardize to the hyperbolic form");
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoUnitPivot) throw;
      }
      return unknown("standardization found no unit pivot over " + r.to_string());
    }
    if (r.is_field()) {
      if (rank(a.gram()) != rank(b.gram())) return distinct("rank of the Gram matrix");
    }
    return unknown("degenerate alternating forms");
  }

  if (is_finite_field(r) && r.modulus() != 2) {
    if (corank_of(a) != corank_of(b)) return distinct("corank");
    Isometry ca = canonical_finite_field(a), cb = canonical_finite_field(b);
    if (ca.target() == cb.target()) return equal(ca, cb, "canonical forms agree");
    return distinct("discriminant");
  }
  if (is_rationals(r)) return decide_symmetric_rational(a, b);
  if (ua) {
    auto pa = pair_to_hyperbolic(a), pb = pair_to_hyperbolic(b);
    if (pa && pb) return equal(*pa, *pb, "both pair to the hyperbolic form");
  }
  if (r.kind() == RingKind::Integers) {
    if (determinant(a.gram()) != determinant(b.gram())) return distinct("determinant");
    auto over_q = decide_symmetric_rational(BilinearSpace(a.flavor(), a.gram().coerce(Ring::rationals())),
                                            BilinearSpace(b.flavor(), b.gram().coerce(Ring::rationals())));
    if (over_q.verdict == Verdict::Distinct) return distinct(over_q.reason + " over QQ");
  }
  return unknown("no decision procedure for symmetric forms over " + r.to_string());
}

BilinearSpace negated(const BilinearSpace& b) { return BilinearSpace(b.flavor(), -b.gram()); }

Isometry metabolic_complement(const BilinearSpace& b) {
  b.require_unimodular();
  const Ring& r = b.ring();
  const std::size_t n = b.rank();
  if (b.flavor() == FormFlavor::Alternating) {
    return embed_into_hyperbolic(b).then(lagrangian_target_to_standard(n, r));
  }
  Element two = r.from_int(2);
  if (!two.is_unit()) throw Error(ErrorCode::CharacteristicTwo, "symmetric metabolic splitting needs 2 to be a unit");
  // u_i = (e_i, e_i), v_i = (B^-1 e_i, -B^-1 e_i) / 2.
  Matrix binv = inverse_if_unit(b.gram()).scaled(two.inverse());
  Matrix w(r, 2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    w(i, 2 * i) = r.one();
    w(n + i, 2 * i) = r.one();
    for (std::size_t k = 0; k < n; ++k) {
      w(k, 2 * i + 1) = binv(k, i);
      w(n + k, 2 * i + 1) = -binv(k, i);
    }
  }
  return check_isometry(orthogonal_sum(b, negated(b)), hyperbolic(FormFlavor::Symmetric, n, r), w);
}

GWClass GWClass::of(const BilinearSpace& s) {
  GWClass c(s.ring(), s.flavor());
  c.plus.push_back(s);
  return c;
}

namespace {

void require_compatible(const GWClass& x, const GWClass& y) {
  if (x.ring != y.ring) throw Error(ErrorCode::RingMismatch, x.ring.to_string() + " vs " + y.ring.to_string());
  if (x.flavor != y.flavor) throw Error(ErrorCode::FlavorMismatch, "classes of different flavors");
}

void require_members(const GWClass& x) {
  for (const auto* side : {&x.plus, &x.minus}) {
    for (const auto& s : *side) {
      if (s.ring() != x.ring) throw Error(ErrorCode::RingMismatch, "class member over " + s.ring().to_string());
      if (s.flavor() != x.flavor) throw Error(ErrorCode::FlavorMismatch, "class member of the wrong flavor");
    }
  }
}

/// Number of hyperbolic planes s is certified to be, if any.
std::optional<std::size_t> hyperbolic_count_of(const BilinearSpace& s) {
  if (s.rank() % 2 != 0 || !s.is_unimodular()) return std::nullopt;
  if (s.flavor() == FormFlavor::Alternating) {
    try {
      standardize_symplectic(s);
      return s.rank() / 2;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoUnitPivot) throw;
    }
    return std::nullopt;
  }
  if (pair_to_hyperbolic(s)) return s.rank() / 2;
  return std::nullopt;
}

/// Replace items by hyperbolic copies and anisotropic residues where that is
/// certified. Returns the number of planes split off.
std::size_t split_side(std::vector<BilinearSpace>& side) {
  std::size_t planes = 0;
  std::vector<BilinearSpace> kept;
  for (auto& s : side) {
    if (s.rank() == 0) continue;
    if (auto h = hyperbolic_count_of(s)) {
      planes += *h;
      continue;
    }
    const Ring& r = s.ring();
    if (s.flavor() == FormFlavor::Symmetric && r.is_field() && r.modulus() != 2 && s.is_unimodular()) {
      try {
        WittDecomposition w = witt_decompose(s);
        planes += w.hyperbolic_count;
        if (w.anisotropic.rank() > 0) kept.push_back(w.anisotropic);
        continue;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SearchExhausted) throw;
      }
    }
    kept.push_back(std::move(s));
  }
  side = std::move(kept);
  return planes;
}

}  // namespace

GWClass gw_add(const GWClass& x, const GWClass& y) {
  require_compatible(x, y);
  GWClass out = x;
  out.plus.insert(out.plus.end(), y.plus.begin(), y.plus.end());
  out.minus.insert(out.minus.end(), y.minus.begin(), y.minus.end());
  return gw_normalize(out);
}

GWClass gw_negate(const GWClass& x) {
  GWClass out(x.ring, x.flavor);
  out.plus = x.minus;
  out.minus = x.plus;
  return out;
}

GWClass gw_normalize(const GWClass& x) {
  require_members(x);
  GWClass out(x.ring, x.flavor);
  out.plus = x.plus;
  // [P] - [B] = [P + C] - [B + C] with B + C hyperbolic.
  std::size_t minus_planes = 0;
  for (const auto& b : x.minus) {
    if (b.rank() == 0) continue;
    if (auto h = hyperbolic_count_of(b)) {
      minus_planes += *h;
      continue;
    }
    try {
      metabolic_complement(b);
      out.plus.push_back(negated(b));
      minus_planes += b.rank();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotUnimodular && e.code() != ErrorCode::CharacteristicTwo) throw;
      out.minus.push_back(b);
    }
  }
  // Over fields the sides are merged into single forms first, so the
  // residue after splitting is the anisotropic part of the whole side.
  if (x.ring.is_field() && (x.flavor == FormFlavor::Alternating || x.ring.modulus() != 2)) {
    for (auto* side : {&out.plus, &out.minus}) {
      if (side->size() < 2) continue;
      BilinearSpace merged = (*side)[0];
      for (std::size_t k = 1; k < side->size(); ++k) merged = orthogonal_sum(merged, (*side)[k]);
      *side = {merged};
    }
  }
  std::size_t plus_planes = split_side(out.plus);
  minus_planes += split_side(out.minus);
  // Certified cancellation of the remaining pairs.
  for (std::size_t i = 0; i < out.plus.size();) {
    bool cancelled = false;
    for (std::size_t j = 0; j < out.minus.size(); ++j) {
      if (decide_isometry(out.plus[i], out.minus[j]).verdict == Verdict::Equal) {
        out.plus.erase(out.plus.begin() + static_cast<long>(i));
        out.minus.erase(out.minus.begin() + static_cast<long>(j));
        cancelled = true;
        break;
      }
    }
    if (!cancelled) ++i;
  }
  const std::size_t common = std::min(plus_planes, minus_planes);
  BilinearSpace plane = hyperbolic(x.flavor, 1, x.ring);
  for (std::size_t k = common; k < plus_planes; ++k) out.plus.push_back(plane);
  for (std::size_t k = common; k < minus_planes; ++k) out.minus.push_back(plane);
  return out;
}

bool gw_equal(const GWClass& x, const GWClass& y) { return gw_normalize(gw_add(x, gw_negate(y))).empty(); }

GWInvariants invariants(const GWClass& x) {
  GWInvariants inv;
  GWClass n = gw_normalize(x);
  BilinearSpace plane = hyperbolic(x.flavor, 1, x.ring);
  long k = 0;
  bool all_planes = true;
  for (const auto& s : n.plus) {
    inv.virtual_rank += static_cast<long>(s.rank());
    all_planes = all_planes && s == plane;
    ++k;
  }
  for (const auto& s : n.minus) {
    inv.virtual_rank -= static_cast<long>(s.rank());
    all_planes = all_planes && s == plane;
    --k;
  }
  if (all_planes) inv.hyperbolic_multiple = k;
  if (is_rationals(x.ring) && x.flavor == FormFlavor::Symmetric) {
    long sig = 0;
    for (const auto& s : n.plus) sig += signature_of(s);
    for (const auto& s : n.minus) sig -= signature_of(s);
    inv.signature = sig;
  }
  return inv;
}

GWClass ksp0_class(long i, const BilinearSpace& a) {
  if (a.flavor() != FormFlavor::Alternating) throw Error(ErrorCode::NotAlternating, "KSp0 classes need an alternating form");
  if (a.rank() % 2 != 0) throw Error(ErrorCode::OddRank, "rank " + std::to_string(a.rank()) + " is odd");
  a.require_unimodular();
  GWClass c = GWClass::of(a);
  const long k = static_cast<long>(a.rank() / 2) - i;
  BilinearSpace plane = hyperbolic(FormFlavor::Alternating, 1, a.ring());
  for (long j = 0; j < std::abs(k); ++j) (k > 0 ? c.minus : c.plus).push_back(plane);
  return gw_normalize(c);
}

bool stable_isometry_test(const BilinearSpace& a, const BilinearSpace& b, std::size_t max_stab) {
  if (a.ring() != b.ring()) throw Error(ErrorCode::RingMismatch, a.ring().to_string() + " vs " + b.ring().to_string());
  if (a.flavor() != b.flavor()) throw Error(ErrorCode::FlavorMismatch, "stable isometry between different flavors");
  if (a.rank() != b.rank()) return false;
  std::string last;
  for (std::size_t p = 0; p <= max_stab; ++p) {
    BilinearSpace h = hyperbolic(a.flavor(), p, a.ring());
    IsometryDecision d = decide_isometry(orthogonal_sum(a, h), orthogonal_sum(b, h));
    if (d.verdict == Verdict::Equal) return true;
    if (d.verdict == Verdict::Distinct) return false;
    last = d.reason;
  }
  throw Error(ErrorCode::Undecidable, "no certificate up to " + std::to_string(max_stab) + " stabilizations: " + last);
}

}  // namespace hermitk
