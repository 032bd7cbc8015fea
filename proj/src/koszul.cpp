#include "hermitk/koszul.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <tuple>

namespace hermitk {

namespace {

std::string deg(int k) { return "degree " + std::to_string(k); }

Matrix reversal(const Ring& ring, std::size_t n) {
  Matrix r(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) r(i, n - 1 - i) = ring.one();
  return r;
}

// Rev m^T Rev: the matrix of the dual map on reversed dual bases.
Matrix dual_transpose(const Matrix& m) {
  return reversal(m.ring(), m.cols()) * m.transpose() * reversal(m.ring(), m.rows());
}

std::size_t idx(int k, int lo) { return static_cast<std::size_t>(k - lo); }

}  // namespace

ChainComplex ChainComplex::make(Ring ring, int lo, std::vector<std::size_t> ranks, std::vector<Matrix> differentials) {
  if (ranks.empty()) throw Error(ErrorCode::DimensionMismatch, "a complex needs at least one degree");
  if (differentials.size() + 1 != ranks.size()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(ranks.size()) + " degrees need " +
                                                  std::to_string(ranks.size() - 1) + " differentials");
  }
  for (std::size_t i = 0; i < differentials.size(); ++i) {
    const Matrix& d = differentials[i];
    const int k = lo + 1 + static_cast<int>(i);
    if (d.ring() != ring) throw Error(ErrorCode::RingMismatch, "differential in " + deg(k) + " over another ring");
    if (d.rows() != ranks[i] || d.cols() != ranks[i + 1]) {
      throw Error(ErrorCode::DimensionMismatch, "differential in " + deg(k) + " has the wrong shape");
    }
    if (i > 0 && !(differentials[i - 1] * d).is_zero()) {
      throw Error(ErrorCode::InvariantViolated, "d(" + std::to_string(k - 1) + ") d(" + std::to_string(k) + ") != 0");
    }
  }
  return ChainComplex(std::move(ring), lo, std::move(ranks), std::move(differentials));
}

std::size_t ChainComplex::rank(int k) const { return k < lo_ || k > hi() ? 0 : ranks_[idx(k, lo_)]; }

Matrix ChainComplex::d(int k) const {
  if (k <= lo_ || k > hi()) return Matrix(ring_, rank(k - 1), rank(k));
  return diffs_[idx(k, lo_) - 1];
}

ChainComplex ChainComplex::coerce(const Ring& target) const {
  std::vector<Matrix> ds;
  for (const auto& d : diffs_) ds.push_back(d.coerce(target));
  return make(target, lo_, ranks_, std::move(ds));
}

bool operator==(const ChainComplex& a, const ChainComplex& b) {
  return a.ring_ == b.ring_ && a.lo_ == b.lo_ && a.ranks_ == b.ranks_ && a.diffs_ == b.diffs_;
}

ChainMap ChainMap::make(ChainComplex source, ChainComplex target, std::vector<Matrix> components) {
  if (source.lo() != target.lo() || source.hi() != target.hi()) {
    throw Error(ErrorCode::DimensionMismatch, "chain map between different degree ranges");
  }
  if (components.size() != source.ranks().size()) throw Error(ErrorCode::DimensionMismatch, "one component per degree");
  for (int k = source.lo(); k <= source.hi(); ++k) {
    const Matrix& g = components[idx(k, source.lo())];
    if (g.rows() != target.rank(k) || g.cols() != source.rank(k)) {
      throw Error(ErrorCode::DimensionMismatch, "component in " + deg(k) + " has the wrong shape");
    }
    if (k > source.lo()) {
      const Matrix& below = components[idx(k - 1, source.lo())];
      if (below * source.d(k) != target.d(k) * g) {
        throw Error(ErrorCode::InvariantViolated, "square in " + deg(k) + " does not commute");
      }
    }
  }
  return ChainMap(std::move(source), std::move(target), std::move(components));
}

ChainComplex dual_shifted(const ChainComplex& c, int n) {
  const int lo = n - c.hi();
  std::vector<std::size_t> ranks;
  std::vector<Matrix> ds;
  for (int k = lo; k <= n - c.lo(); ++k) {
    ranks.push_back(c.rank(n - k));
    if (k > lo) ds.push_back(-dual_transpose(c.d(n - k + 1)));
  }
  return ChainComplex::make(c.ring(), lo, std::move(ranks), std::move(ds));
}

ChainMap double_dual_identification(const ChainComplex& c, int n) {
  std::vector<Matrix> ids;
  for (int k = c.lo(); k <= c.hi(); ++k) ids.push_back(Matrix::identity(c.ring(), c.rank(k)));
  return ChainMap::make(c, dual_shifted(dual_shifted(c, n), n), std::move(ids));
}

int duality_sign(int n) {
  const long e = static_cast<long>(n) * (n + 1) / 2;
  return e % 2 == 0 ? 1 : -1;
}

DualityForm DualityForm::make(const ChainComplex& c, int shift, int epsilon, std::vector<Matrix> components) {
  if (shift != c.lo() + c.hi()) {
    throw Error(ErrorCode::DimensionMismatch, "shift " + std::to_string(shift) + " does not match degrees " +
                                                  std::to_string(c.lo()) + ".." + std::to_string(c.hi()));
  }
  if (epsilon != 1 && epsilon != -1) throw Error(ErrorCode::InvariantViolated, "epsilon must be 1 or -1");
  ChainMap m = ChainMap::make(c, dual_shifted(c, shift), std::move(components));
  for (int k = c.lo(); k <= c.hi(); ++k) {
    const Matrix& phi = m.component(k);
    if (!determinant(phi).is_unit()) throw Error(ErrorCode::NotInvertible, "component in " + deg(k) + " is not invertible");
    if (dual_transpose(m.component(shift - k)) != phi.scaled(c.ring().from_int(epsilon))) {
      throw Error(ErrorCode::InvariantViolated, "form is not " + std::string(epsilon == 1 ? "" : "anti-") +
                                                    "symmetric in " + deg(k));
    }
  }
  return DualityForm(std::move(m), shift, epsilon);
}

std::vector<std::vector<std::size_t>> wedge_basis(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> s(k);
  std::iota(s.begin(), s.end(), 0);
  for (;;) {
    out.push_back(s);
    std::size_t i = k;
    while (i > 0 && s[i - 1] == n - k + i - 1) --i;
    if (i == 0) return out;
    ++s[i - 1];
    for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

namespace {

std::size_t position(const std::vector<std::vector<std::size_t>>& basis, const std::vector<std::size_t>& s) {
  return static_cast<std::size_t>(std::lower_bound(basis.begin(), basis.end(), s) - basis.begin());
}

Ring with_variables(const Ring& base, const std::vector<std::string>& names) {
  std::vector<std::string> fresh;
  for (const auto& v : names) {
    if (!base.variable_index(v)) fresh.push_back(v);
  }
  return fresh.empty() ? base : base.adjoin(fresh);
}

// Sign of the permutation sorting s with i inserted: (-1)^#{x in s : x < i}.
long insertion_sign(const std::vector<std::size_t>& s, std::size_t i) {
  std::size_t below = 0;
  for (auto x : s) below += x < i;
  return below % 2 == 0 ? 1 : -1;
}

}  // namespace

ChainComplex koszul_complex(const Ring& base, const std::vector<std::string>& variables) {
  const Ring ring = with_variables(base, variables);
  const std::size_t n = variables.size();
  std::vector<Element> t;
  for (const auto& v : variables) t.push_back(ring.variable(v));
  std::vector<std::size_t> ranks;
  std::vector<Matrix> ds;
  for (std::size_t k = 0; k <= n; ++k) {
    auto basis = wedge_basis(n, k);
    ranks.push_back(basis.size());
    if (k == 0) continue;
    auto lower = wedge_basis(n, k - 1);
    Matrix d(ring, lower.size(), basis.size());
    for (std::size_t c = 0; c < basis.size(); ++c) {
      for (std::size_t j = 0; j < k; ++j) {
        std::vector<std::size_t> rest = basis[c];
        rest.erase(rest.begin() + static_cast<long>(j));
        Element term = t[basis[c][j]];
        d(position(lower, rest), c) += j % 2 == 0 ? term : -term;
      }
    }
    ds.push_back(std::move(d));
  }
  return ChainComplex::make(ring, 0, std::move(ranks), std::move(ds));
}

std::vector<std::string> default_koszul_variables(std::size_t n) {
  if (n == 1) return {"t"};
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("t" + std::to_string(i));
  return out;
}

ChainComplex koszul_complex(std::size_t n, const Ring& base) { return koszul_complex(base, default_koszul_variables(n)); }

std::vector<std::pair<int, int>> koszul_relabeling(std::size_t n) {
  std::vector<std::pair<int, int>> out;
  for (int k = static_cast<int>(n); k >= 0; --k) out.emplace_back(k, static_cast<int>(n) - k);
  return out;
}

DualityForm theta_form(const ChainComplex& koszul, std::size_t n) {
  if (koszul.lo() != 0 || koszul.hi() != static_cast<int>(n)) {
    throw Error(ErrorCode::DimensionMismatch, "theta form needs a Koszul complex in degrees 0.." + std::to_string(n));
  }
  const Ring& ring = koszul.ring();
  std::vector<Matrix> comps;
  for (std::size_t k = 0; k <= n; ++k) {
    auto xs = wedge_basis(n, k);
    auto ys = wedge_basis(n, n - k);
    const long c = duality_sign(static_cast<int>(k));
    // Row r pairs against ys[|ys| - 1 - r]: the reversed dual basis.
    Matrix m(ring, ys.size(), xs.size());
    for (std::size_t a = 0; a < xs.size(); ++a) {
      for (std::size_t b = 0; b < ys.size(); ++b) {
        std::vector<std::size_t> all = xs[a];
        all.insert(all.end(), ys[b].begin(), ys[b].end());
        std::vector<std::size_t> sorted = all;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
        long inversions = 0;
        for (std::size_t i = 0; i < all.size(); ++i) {
          for (std::size_t j = i + 1; j < all.size(); ++j) inversions += all[i] > all[j];
        }
        const long sign = (inversions % 2 == 0 ? 1 : -1) * c;
        m(ys.size() - 1 - b, a) = ring.from_int(sign);
      }
    }
    comps.push_back(std::move(m));
  }
  const int sn = static_cast<int>(n);
  return DualityForm::make(koszul, sn, duality_sign(sn), std::move(comps));
}

FormedComplex thom_class(const Ring& base, const std::vector<std::string>& variables) {
  ChainComplex k = koszul_complex(base, variables);
  return {k, theta_form(k, variables.size())};
}

FormedComplex thom_class_trivial_line(const Ring& base, const std::string& variable) {
  return thom_class(base, {variable});
}

FormedComplex unit_complex(const Ring& ring) {
  ChainComplex c = ChainComplex::make(ring, 0, {1}, {});
  return {c, DualityForm::make(c, 0, 1, {Matrix::identity(ring, 1)})};
}

std::optional<int> homotopy_defect(const ChainComplex& c, const std::vector<Matrix>& h) {
  auto comp = [&](int k) {
    if (k < c.lo() || k > c.hi()) return Matrix(c.ring(), c.rank(k + 1), c.rank(k));
    return h[idx(k, c.lo())];
  };
  for (int k = c.lo(); k <= c.hi(); ++k) {
    Matrix lhs = c.d(k + 1) * comp(k) + comp(k - 1) * c.d(k);
    if (!lhs.is_identity()) return k;
  }
  return std::nullopt;
}

ContractingHomotopy contracting_homotopy(const Ring& base, const std::vector<std::string>& variables, std::size_t i) {
  const std::size_t n = variables.size();
  if (i < 1 || i > n) {
    throw Error(ErrorCode::DimensionMismatch, "variable index " + std::to_string(i) + " outside 1.." + std::to_string(n));
  }
  const std::string& name = variables[i - 1];
  Ring ring = with_variables(base, variables).invert_variable(name);
  ChainComplex c = koszul_complex(ring, variables);
  const Element inv = ring.variable(name).inverse();
  const std::size_t e = i - 1;
  std::vector<Matrix> h;
  for (std::size_t k = 0; k <= n; ++k) {
    auto basis = wedge_basis(n, k);
    auto upper = wedge_basis(n, k + 1);
    Matrix m(ring, upper.size(), basis.size());
    for (std::size_t col = 0; col < basis.size(); ++col) {
      const auto& s = basis[col];
      if (std::find(s.begin(), s.end(), e) != s.end()) continue;
      std::vector<std::size_t> bigger = s;
      bigger.insert(std::upper_bound(bigger.begin(), bigger.end(), e), e);
      m(position(upper, bigger), col) = insertion_sign(s, e) == 1 ? inv : -inv;
    }
    h.push_back(std::move(m));
  }
  if (auto bad = homotopy_defect(c, h)) {
    throw Error(ErrorCode::InvariantViolated, "d h + h d != id in " + deg(*bad));
  }
  return {c, std::move(h)};
}

ContractingHomotopy contracting_homotopy(std::size_t n, std::size_t i, const Ring& base) {
  return contracting_homotopy(base, default_koszul_variables(n), i);
}

namespace {

// Rename the variables of r listed in `rename`, keeping order and inversion.
std::pair<Ring, std::vector<Element>> renamed(const Ring& r, const std::map<std::string, std::string>& rename) {
  std::vector<std::string> names;
  for (const auto& v : r.variables()) {
    auto it = rename.find(v);
    names.push_back(it == rename.end() ? v : it->second);
  }
  Ring out = names.empty() ? r.scalar_ring() : r.scalar_ring().adjoin(names);
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (r.is_inverted(k)) out = out.invert_variable(names[k]);
  }
  std::vector<Element> values;
  for (const auto& v : names) values.push_back(out.variable(v));
  return {out, values};
}

ChainComplex substitute_complex(const ChainComplex& c, const Ring& target, const std::vector<Element>& values) {
  std::vector<Matrix> ds;
  for (const auto& d : c.differentials()) ds.push_back(d.substitute(target, values));
  return ChainComplex::make(target, c.lo(), c.ranks(), std::move(ds));
}

FormedComplex move_to(const FormedComplex& f, const Ring& target, const std::vector<Element>& values) {
  ChainComplex c = substitute_complex(f.complex, target, values);
  std::vector<Matrix> comps;
  for (const auto& m : f.form.components()) comps.push_back(m.substitute(target, values));
  return {c, DualityForm::make(c, f.form.shift(), f.form.epsilon(), std::move(comps))};
}

// Basis label of a degree-k summand element of a tensor complex.
struct TensorIndex {
  int a;
  std::size_t i, j;
};

// Degree-k basis of C (x) D: summands by a ascending, Kronecker order within.
std::vector<TensorIndex> tensor_basis(const ChainComplex& c, const ChainComplex& d, int k) {
  std::vector<TensorIndex> out;
  for (int a = c.lo(); a <= c.hi(); ++a) {
    for (std::size_t i = 0; i < c.rank(a); ++i) {
      for (std::size_t j = 0; j < d.rank(k - a); ++j) out.push_back({a, i, j});
    }
  }
  return out;
}

std::size_t find_index(const std::vector<TensorIndex>& basis, int a, std::size_t i, std::size_t j) {
  for (std::size_t p = 0; p < basis.size(); ++p) {
    if (basis[p].a == a && basis[p].i == i && basis[p].j == j) return p;
  }
  throw Error(ErrorCode::InvariantViolated, "tensor basis element not found");
}

long parity(long e) { return e % 2 == 0 ? 1 : -1; }

Element with_sign(const Element& e, long s) { return s == 1 ? e : -e; }

}  // namespace

FormedComplex tensor_with_forms(const FormedComplex& a, const FormedComplex& b) {
  std::map<std::string, std::string> ra, rb;
  for (const auto& v : a.complex.ring().variables()) {
    if (b.complex.ring().variable_index(v)) {
      ra[v] = v + "0";
      rb[v] = v + "1";
    }
  }
  auto [ring_a, vals_a] = renamed(a.complex.ring(), ra);
  auto [ring_b, vals_b] = renamed(b.complex.ring(), rb);
  Ring ring = merge_rings(ring_a, ring_b);
  if (ring.num_variables() != ring_a.num_variables() + ring_b.num_variables()) {
    throw Error(ErrorCode::RingMismatch, "variable names still collide after renaming");
  }
  std::vector<Element> va, vb;
  for (const auto& v : ring_a.variables()) va.push_back(ring.variable(v));
  for (const auto& v : ring_b.variables()) vb.push_back(ring.variable(v));
  for (auto& e : vals_a) e = e.substitute(ring, va);
  for (auto& e : vals_b) e = e.substitute(ring, vb);
  const FormedComplex x = move_to(a, ring, vals_a);
  const FormedComplex y = move_to(b, ring, vals_b);
  const ChainComplex& c = x.complex;
  const ChainComplex& d = y.complex;

  const int lo = c.lo() + d.lo(), hi = c.hi() + d.hi();
  std::vector<std::vector<TensorIndex>> bases;
  std::vector<std::size_t> ranks;
  for (int k = lo; k <= hi; ++k) {
    bases.push_back(tensor_basis(c, d, k));
    ranks.push_back(bases.back().size());
  }
  std::vector<Matrix> ds;
  for (int k = lo + 1; k <= hi; ++k) {
    const auto& src = bases[idx(k, lo)];
    const auto& dst = bases[idx(k - 1, lo)];
    Matrix m(ring, dst.size(), src.size());
    for (std::size_t col = 0; col < src.size(); ++col) {
      const auto [p, i, j] = src[col];
      const int q = k - p;
      Matrix dc = c.d(p), dd = d.d(q);
      for (std::size_t r = 0; r < dc.rows(); ++r) {
        if (!dc(r, i).is_zero()) m(find_index(dst, p - 1, r, j), col) += dc(r, i);
      }
      for (std::size_t r = 0; r < dd.rows(); ++r) {
        if (!dd(r, j).is_zero()) m(find_index(dst, p, i, r), col) += with_sign(dd(r, j), parity(p));
      }
    }
    ds.push_back(std::move(m));
  }
  ChainComplex t = ChainComplex::make(ring, lo, ranks, std::move(ds));

  const int n1 = x.form.shift(), n2 = y.form.shift(), n = n1 + n2;
  std::vector<Matrix> comps;
  for (int k = lo; k <= hi; ++k) {
    const auto& src = bases[idx(k, lo)];
    const auto& partner = bases[idx(n - k, lo)];
    Matrix m(ring, partner.size(), src.size());
    for (std::size_t col = 0; col < src.size(); ++col) {
      const auto [p, i, j] = src[col];
      const int q = k - p;
      const Matrix& tc = x.form.component(p);
      const Matrix& td = y.form.component(q);
      for (std::size_t r1 = 0; r1 < tc.rows(); ++r1) {
        if (tc(r1, i).is_zero()) continue;
        for (std::size_t r2 = 0; r2 < td.rows(); ++r2) {
          if (td(r2, j).is_zero()) continue;
          // Row r1 of theta_c(p) pairs against element rows-1-r1 of C_(n1-p).
          std::size_t target = find_index(partner, n1 - p, tc.rows() - 1 - r1, td.rows() - 1 - r2);
          m(partner.size() - 1 - target, col) = with_sign(tc(r1, i) * td(r2, j), parity(static_cast<long>(n1) * q));
        }
      }
    }
    comps.push_back(std::move(m));
  }
  return {t, DualityForm::make(t, n, duality_sign(n), std::move(comps))};
}

ChainMap associator(const FormedComplex& a, const FormedComplex& b, const FormedComplex& c) {
  FormedComplex left = tensor_with_forms(tensor_with_forms(a, b), c);
  FormedComplex right = tensor_with_forms(a, tensor_with_forms(b, c));
  const ChainComplex& l = left.complex;
  const ChainComplex& r = right.complex;
  if (l.ring() != r.ring()) throw Error(ErrorCode::RingMismatch, "associations land in different rings");
  const ChainComplex& ca = a.complex;
  const ChainComplex& cb = b.complex;
  const ChainComplex& cc = c.complex;
  // Both sides list triples (x, y, z); record the position of each triple.
  using Triple = std::tuple<int, std::size_t, int, std::size_t, std::size_t>;
  auto left_labels = [&](int k) {
    std::vector<Triple> out;
    for (int ab = ca.lo() + cb.lo(); ab <= ca.hi() + cb.hi(); ++ab) {
      for (int p = ca.lo(); p <= ca.hi(); ++p) {
        for (std::size_t i = 0; i < ca.rank(p); ++i) {
          for (std::size_t j = 0; j < cb.rank(ab - p); ++j) {
            for (std::size_t m = 0; m < cc.rank(k - ab); ++m) out.emplace_back(p, i, ab - p, j, m);
          }
        }
      }
    }
    return out;
  };
  auto right_labels = [&](int k) {
    std::vector<Triple> out;
    for (int p = ca.lo(); p <= ca.hi(); ++p) {
      for (std::size_t i = 0; i < ca.rank(p); ++i) {
        for (int q = cb.lo(); q <= cb.hi(); ++q) {
          for (std::size_t j = 0; j < cb.rank(q); ++j) {
            for (std::size_t m = 0; m < cc.rank(k - p - q); ++m) out.emplace_back(p, i, q, j, m);
          }
        }
      }
    }
    return out;
  };
  std::vector<Matrix> comps;
  for (int k = l.lo(); k <= l.hi(); ++k) {
    auto ls = left_labels(k), rs = right_labels(k);
    if (ls.size() != l.rank(k) || rs.size() != r.rank(k)) throw Error(ErrorCode::InvariantViolated, "rank mismatch in " + deg(k));
    Matrix m(l.ring(), rs.size(), ls.size());
    for (std::size_t col = 0; col < ls.size(); ++col) {
      auto it = std::find(rs.begin(), rs.end(), ls[col]);
      m(static_cast<std::size_t>(it - rs.begin()), col) = l.ring().one();
    }
    comps.push_back(std::move(m));
  }
  ChainMap map = ChainMap::make(l, r, std::move(comps));
  const int n = left.form.shift();
  for (int k = l.lo(); k <= l.hi(); ++k) {
    if (dual_transpose(map.component(n - k)) * right.form.component(k) * map.component(k) != left.form.component(k)) {
      throw Error(ErrorCode::InvariantViolated, "reassociation does not preserve the form in " + deg(k));
    }
  }
  return map;
}

FormedComplex borel_class_chart(const Ring& base) {
  Ring ring = with_variables(base, {"t0", "t1"});
  const Element t0 = ring.variable("t0"), t1 = ring.variable("t1");
  Matrix d1 = Matrix::from_rows(ring, 2, {{t0, t1}});
  Matrix d2 = Matrix::from_rows(ring, 1, {{-t1}, {t0}});
  ChainComplex c = ChainComplex::make(ring, 0, {1, 2, 1}, {d1, d2});
  Matrix middle = Matrix::from_ints(ring, {{-1, 0}, {0, 1}});
  return {c, DualityForm::make(c, 2, -1, {Matrix::identity(ring, 1), middle, -Matrix::identity(ring, 1)})};
}

namespace {

// All signed permutation matrices of size r: column j is s_j e_pi(j).
std::vector<Matrix> signed_permutations(const Ring& ring, std::size_t r) {
  std::vector<Matrix> out;
  std::vector<std::size_t> perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (std::size_t signs = 0; signs < (std::size_t{1} << r); ++signs) {
      Matrix m(ring, r, r);
      for (std::size_t j = 0; j < r; ++j) m(perm[j], j) = (signs >> j) & 1 ? -ring.one() : ring.one();
      out.push_back(std::move(m));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

FormIsomorphism find_form_isomorphism(const FormedComplex& source, const FormedComplex& target) {
  const ChainComplex& s = source.complex;
  const ChainComplex& t = target.complex;
  if (s.ring() != t.ring() || s.lo() != t.lo() || s.hi() != t.hi() || s.ranks() != t.ranks() ||
      source.form.shift() != target.form.shift()) {
    throw Error(ErrorCode::NoMatchFound, "complexes differ in ring, degrees or ranks");
  }
  const int lo = s.lo(), hi = s.hi(), n = source.form.shift();
  for (int k = lo; k <= hi; ++k) {
    if (s.rank(k) > 4) throw Error(ErrorCode::UnsupportedInput, "search is limited to rank 4 per degree");
  }
  std::vector<std::vector<Matrix>> choices;
  for (int k = lo; k <= hi; ++k) choices.push_back(signed_permutations(s.ring(), s.rank(k)));
  std::vector<Matrix> picked;
  std::function<bool(int)> search = [&](int k) -> bool {
    if (k > hi) return true;
    for (const Matrix& g : choices[idx(k, lo)]) {
      if (k > lo && picked.back() * s.d(k) != t.d(k) * g) continue;
      picked.push_back(g);
      bool ok = true;
      // The form condition links degrees k and n-k; test once both are fixed.
      for (int j = lo; j <= k && ok; ++j) {
        const int partner = n - j;
        if (partner < lo || partner > k || (partner != k && j != k)) continue;
        ok = dual_transpose(picked[idx(partner, lo)]) * target.form.component(j) * picked[idx(j, lo)] ==
             source.form.component(j);
        if (ok && partner != j) {
          ok = dual_transpose(picked[idx(j, lo)]) * target.form.component(partner) * picked[idx(partner, lo)] ==
               source.form.component(partner);
        }
      }
      if (ok && search(k + 1)) return true;
      picked.pop_back();
    }
    return false;
  };
  if (!search(lo)) throw Error(ErrorCode::NoMatchFound, "no signed permutation isomorphism of forms");
  return {ChainMap::make(s, t, picked)};
}

FormIsomorphism compare_borel_thom(const Ring& base) {
  FormedComplex th = thom_class_trivial_line(base, "t");
  return find_form_isomorphism(tensor_with_forms(th, th), borel_class_chart(base));
}

}  // namespace hermitk
