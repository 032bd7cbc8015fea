#include "hermitk/grassmann.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace hermitk {

namespace {

std::string coordinate_name(std::size_t row, std::size_t col, bool wide) {
  return "x" + std::to_string(row) + (wide ? "_" : "") + std::to_string(col);
}

Matrix unit_columns(const Ring& ring, std::size_t size, const std::vector<std::size_t>& cols) {
  Matrix m(ring, size, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m(cols[j], j) = ring.one();
  return m;
}

std::vector<std::size_t> plane_coordinates(const std::vector<std::size_t>& planes) {
  std::vector<std::size_t> out;
  for (std::size_t p : planes) {
    out.push_back(2 * p);
    out.push_back(2 * p + 1);
  }
  return out;
}

// Certifies B^T G C = 0 and builds the witness u + complement -> ambient.
OrthogonalDecomposition assemble(const BilinearSpace& ambient, Matrix b, Matrix c) {
  const Matrix& g = ambient.gram();
  if (b.rows() != ambient.rank() || c.rows() != ambient.rank() || b.cols() + c.cols() != ambient.rank()) {
    throw Error(ErrorCode::DimensionMismatch, "decomposition bases do not fill the ambient space");
  }
  if (!(b.transpose() * g * c).is_zero()) {
    throw Error(ErrorCode::InvariantViolated, "complement is not orthogonal to U");
  }
  BilinearSpace u(ambient.flavor(), b.transpose() * g * b);
  if (!u.is_unimodular()) throw Error(ErrorCode::NotInMembershipLocus, "restricted form is degenerate");
  BilinearSpace comp(ambient.flavor(), c.transpose() * g * c);
  Isometry w = check_isometry(ambient, orthogonal_sum(u, comp), hstack(b, c)).inverse();
  return OrthogonalDecomposition{ambient, std::move(b), std::move(c), std::move(u), std::move(comp), std::move(w)};
}

Isometry identity_isometry(const BilinearSpace& s) {
  return check_isometry(s, s, Matrix::identity(s.ring(), s.rank()));
}

bool same_span(const Matrix& a, const Matrix& b) {
  std::size_t ra = rank(a);
  return ra == rank(b) && rank(hstack(a, b)) == ra;
}

// Planes of the H^k copy inside P = first copy + second copy, each `half`
// planes: the last k planes of the first copy, spilling into the front of
// the second copy once k exceeds half.
std::vector<std::size_t> selected_planes(std::size_t k, std::size_t half) {
  std::vector<std::size_t> out;
  if (k <= half) {
    for (std::size_t p = half - k; p < half; ++p) out.push_back(p);
  } else {
    for (std::size_t p = 0; p < k; ++p) out.push_back(p);
  }
  return out;
}

struct Layout {
  StructureKind kind;
  std::size_t n;
  long i;
  std::size_t planes;  // planes of P
  std::size_t half;
  FormFlavor outer;
  FormFlavor total;
  std::size_t k2;
  std::size_t k4;
};

Layout make_layout(StructureKind kind, std::size_t n, long i) {
  const long ln = static_cast<long>(n);
  if (n == 0 || n > kMaxStructureScale) {
    throw Error(ErrorCode::UnsupportedScale, "scale " + std::to_string(n) + " outside 1.." +
                                                 std::to_string(kMaxStructureScale));
  }
  if (i < -ln || i > ln) throw Error(ErrorCode::DimensionMismatch, "index i outside [-n, n]");
  if (kind == StructureKind::Hgr) {
    return Layout{kind, n, i, 2 * n, n, FormFlavor::Alternating, FormFlavor::Symmetric,
                  static_cast<std::size_t>(ln - i), static_cast<std::size_t>(ln + i)};
  }
  if (n % 2 != 0) throw Error(ErrorCode::UnsupportedScale, "real Grassmannian scale must be even");
  if ((ln - i) % 2 != 0) throw Error(ErrorCode::DimensionMismatch, "i must have the parity of n");
  return Layout{kind, n, i, n, n / 2, FormFlavor::Symmetric, FormFlavor::Alternating,
                static_cast<std::size_t>((ln - i) / 2), static_cast<std::size_t>((ln + i) / 2)};
}

// Blocks (s, p) that form the leading half of the standard target.
bool distinguished_block(const Layout& l, std::size_t s, std::size_t p) {
  bool first = p < l.half;
  return s == 2 ? !first : first;
}

void check_point(const OrthogonalDecomposition& d, const BilinearSpace& expected, std::size_t u_rank,
                 const char* what) {
  if (!(d.ambient == expected)) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " ambient is not the expected hyperbolic space");
  }
  if (d.u.rank() != u_rank) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has the wrong rank");
  if (!d.u.is_unimodular() || !d.complement.is_unimodular()) {
    throw Error(ErrorCode::NotInMembershipLocus, std::string(what) + " is outside the membership locus");
  }
}

std::optional<FrontPermutation> front_permutation(const BilinearSpace& target, const std::vector<std::size_t>& planes) {
  const Ring& ring = target.ring();
  const std::size_t total = target.rank() / 2;
  std::vector<bool> chosen(total, false);
  for (std::size_t p : planes) chosen[p] = true;
  std::vector<std::size_t> order(planes.begin(), planes.end());
  for (std::size_t p = 0; p < total; ++p) {
    if (!chosen[p]) order.push_back(p);
  }
  Matrix m = unit_columns(ring, target.rank(), plane_coordinates(order));
  SymplecticMatrix perm = SymplecticMatrix::from(m);
  Isometry iso = check_isometry(target, target, m);
  auto factors = factor_into_transvections(perm);
  HomotopyPath path = homotopy_witness(factors, perm.size(), ring);
  return FrontPermutation{std::move(perm), std::move(iso), std::move(factors), std::move(path)};
}

// Planes of the target spanned by the image when it is a coordinate subspace.
std::optional<std::vector<std::size_t>> coordinate_planes_of(const Matrix& image) {
  std::vector<bool> used(image.rows(), false);
  std::size_t count = 0;
  for (std::size_t r = 0; r < image.rows(); ++r) {
    for (std::size_t c = 0; c < image.cols(); ++c) {
      if (!image(r, c).is_zero()) {
        used[r] = true;
        ++count;
        break;
      }
    }
  }
  if (count != rank(image)) return std::nullopt;
  std::vector<std::size_t> planes;
  for (std::size_t p = 0; 2 * p < image.rows(); ++p) {
    if (used[2 * p] != used[2 * p + 1]) return std::nullopt;
    if (used[2 * p]) planes.push_back(p);
  }
  return planes;
}

StructureSubspace build(const Layout& l, const OrthogonalDecomposition& u, const OrthogonalDecomposition& hp1) {
  const Ring& ring = u.ambient.ring();
  if (hp1.ambient.ring() != ring) throw Error(ErrorCode::RingMismatch, "samples live over different rings");
  if (!ring.is_field()) throw Error(ErrorCode::NotAField, "structure subspaces are evaluated over a field");
  BilinearSpace p_space = hyperbolic(l.outer, l.planes, ring);
  check_point(u, p_space, l.kind == StructureKind::Hgr ? 2 * l.n : l.n, "Grassmannian sample");
  BilinearSpace h_minus = hyperbolic(FormFlavor::Alternating, 1, ring);
  check_point(hp1, hyperbolic(FormFlavor::Alternating, 2, ring), 2, "HP1 sample");

  const std::vector<BilinearSpace> x{hp1.u, hp1.complement, h_minus, h_minus};
  const std::size_t psize = 2 * l.planes;
  const Matrix i2 = Matrix::identity(ring, 2);
  const std::vector<Matrix> pieces{
      kron(u.u_basis, i2),
      kron(unit_columns(ring, psize, plane_coordinates(selected_planes(l.k2, l.half))), i2),
      kron(u.complement_basis, i2),
      kron(unit_columns(ring, psize, plane_coordinates(selected_planes(l.k4, l.half))), i2),
  };

  std::vector<Matrix> ambient_blocks;
  for (const auto& xs : x) ambient_blocks.push_back(kron(p_space.gram(), xs.gram()));
  BilinearSpace ambient(l.total, block_diag(ambient_blocks, ring));

  std::size_t sub_rank = 0;
  for (const auto& piece : pieces) sub_rank += piece.cols();
  Matrix basis(ring, ambient.rank(), sub_rank);
  for (std::size_t k = 0, rows = 0, cols = 0; k < pieces.size(); ++k) {
    for (std::size_t r = 0; r < pieces[k].rows(); ++r) {
      for (std::size_t c = 0; c < pieces[k].cols(); ++c) basis(rows + r, cols + c) = pieces[k](r, c);
    }
    rows += pieces[k].rows();
    cols += pieces[k].cols();
  }

  // Block isometries and the slot of each block in the standard target.
  const std::size_t blocks = 4 * l.planes;
  std::vector<std::size_t> slots(blocks);
  std::size_t next = 0;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t s = 0; s < 4; ++s) {
      for (std::size_t p = 0; p < l.planes; ++p) {
        if (distinguished_block(l, s, p) == (pass == 0)) slots[s * l.planes + p] = next++;
      }
    }
  }
  BilinearSpace plane = hyperbolic(l.outer, 1, ring);
  Matrix t(ring, ambient.rank(), ambient.rank());
  for (std::size_t s = 0; s < 4; ++s) {
    auto w = pair_to_hyperbolic(tensor_product(plane, x[s]));
    if (!w) throw Error(ErrorCode::InvariantViolated, "block form is not a signed pairing");
    for (std::size_t p = 0; p < l.planes; ++p) {
      std::size_t b = s * l.planes + p;
      for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) t(4 * b + r, 4 * slots[b] + c) = w->witness()(r, c);
      }
    }
  }
  BilinearSpace standard = hyperbolic(l.total, ambient.rank() / 2, ring);
  Isometry to_standard = check_isometry(ambient, standard, t);

  BilinearSpace restricted(l.total, basis.transpose() * ambient.gram() * basis);
  if (!restricted.is_unimodular()) throw Error(ErrorCode::InvariantViolated, "restricted form is degenerate");

  std::optional<Isometry> restricted_std;
  if (l.kind == StructureKind::Rgr) {
    restricted_std = standardize_symplectic(restricted);
  } else {
    // Standardize each tensor factor, then the Kronecker pairing is signed.
    BilinearSpace h2 = hyperbolic(FormFlavor::Alternating, l.k2, ring);
    BilinearSpace h4 = hyperbolic(FormFlavor::Alternating, l.k4, ring);
    std::vector<Isometry> parts{
        tensor_product(standardize_symplectic(u.u), standardize_symplectic(hp1.u)),
        tensor_product(identity_isometry(h2), standardize_symplectic(hp1.complement)),
        tensor_product(standardize_symplectic(u.complement), identity_isometry(h_minus)),
        tensor_product(identity_isometry(h4), identity_isometry(h_minus)),
    };
    std::vector<Matrix> ws;
    std::vector<Matrix> grams;
    for (const auto& part : parts) {
      if (part.source().rank() == 0) continue;
      ws.push_back(part.witness());
      grams.push_back(part.target().gram());
    }
    Matrix w1 = block_diag(ws, ring);
    auto paired = pair_to_hyperbolic(BilinearSpace(l.total, block_diag(grams, ring)));
    if (!paired) throw Error(ErrorCode::InvariantViolated, "standardized summands are not a signed pairing");
    restricted_std = check_isometry(restricted, paired->target(), w1 * paired->witness());
  }

  Matrix image = inverse_if_unit(t) * basis;
  StructureSubspace out{l.kind,
                        l.n,
                        l.i,
                        ambient,
                        to_standard,
                        basis,
                        image,
                        restricted,
                        *restricted_std,
                        std::move(slots),
                        coordinate_planes_of(image),
                        std::nullopt};
  if (out.coordinate_planes && !out.distinguished_pattern()) {
    out.to_front = front_permutation(standard, *out.coordinate_planes);
  }
  return out;
}

}  // namespace

Chart make_chart(std::size_t r, std::size_t n, std::vector<std::size_t> pivots, const Ring& base) {
  if (pivots.size() != r || r > n) throw Error(ErrorCode::BadPivot, "need exactly r pivots with r <= n");
  std::sort(pivots.begin(), pivots.end());
  for (std::size_t k = 0; k < r; ++k) {
    if (pivots[k] < 1 || pivots[k] > n) throw Error(ErrorCode::BadPivot, "pivot outside 1..n");
    if (k > 0 && pivots[k] == pivots[k - 1]) throw Error(ErrorCode::BadPivot, "repeated pivot");
  }
  const bool wide = n > 9 || r > 9;
  std::vector<std::string> vars;
  for (std::size_t row = 1; row <= n; ++row) {
    if (std::binary_search(pivots.begin(), pivots.end(), row)) continue;
    for (std::size_t col = 1; col <= r; ++col) vars.push_back(coordinate_name(row, col, wide));
  }
  Ring ring = base.adjoin(vars);
  return Chart{r, n, std::move(pivots), base, std::move(ring), std::move(vars)};
}

Chart leading_chart(std::size_t r, std::size_t n, const Ring& base) {
  std::vector<std::size_t> pivots(r);
  std::iota(pivots.begin(), pivots.end(), 1);
  return make_chart(r, n, std::move(pivots), base);
}

Matrix TautologicalFamily::restricted_gram() const {
  return basis.transpose() * ambient.gram().coerce(chart.ring) * basis;
}

TautologicalFamily tautological_on_chart(std::size_t r, std::size_t n, std::vector<std::size_t> pivots,
                                         const BilinearSpace& ambient) {
  Chart chart = make_chart(r, n, std::move(pivots), ambient.ring());
  if (ambient.rank() != n) throw Error(ErrorCode::DimensionMismatch, "ambient rank differs from n");
  Matrix basis(chart.ring, n, r);
  std::size_t var = 0, pivot = 0;
  for (std::size_t row = 0; row < n; ++row) {
    if (pivot < r && chart.pivots[pivot] == row + 1) {
      basis(row, pivot++) = chart.ring.one();
      continue;
    }
    for (std::size_t col = 0; col < r; ++col) basis(row, col) = chart.ring.variable(chart.variables[var++]);
  }
  return TautologicalFamily{std::move(chart), std::move(basis), ambient};
}

PointSample make_sample(const Chart& chart, std::vector<Element> values) {
  if (values.size() != chart.variables.size()) {
    throw Error(ErrorCode::DimensionMismatch, "sample needs one value per chart coordinate");
  }
  for (const auto& v : values) {
    if (v.ring() != chart.base) throw Error(ErrorCode::RingMismatch, "sample value outside the base ring");
  }
  return PointSample{chart, std::move(values)};
}

PointSample origin(const Chart& chart) {
  return make_sample(chart, std::vector<Element>(chart.variables.size(), chart.base.zero()));
}

PointSample random_sample(const Chart& chart, Rng& rng) {
  std::vector<Element> values;
  for (std::size_t k = 0; k < chart.variables.size(); ++k) values.push_back(random_scalar(chart.base, rng));
  return make_sample(chart, std::move(values));
}

Matrix evaluate_basis(const TautologicalFamily& f, const PointSample& p) {
  if (p.chart.variables != f.chart.variables || p.chart.base != f.chart.base) {
    throw Error(ErrorCode::RingMismatch, "sample belongs to another chart");
  }
  std::vector<Element> values;
  for (std::size_t k = 0; k < f.chart.base.num_variables(); ++k) values.push_back(f.chart.base.variable(k));
  values.insert(values.end(), p.values.begin(), p.values.end());
  return f.basis.substitute(f.chart.base, values);
}

bool form_membership(const TautologicalFamily& f, const PointSample& p) {
  Matrix b = evaluate_basis(f, p);
  return determinant(b.transpose() * f.ambient.gram() * b).is_unit();
}

OrthogonalDecomposition orthogonal_complement(const TautologicalFamily& f, const PointSample& p) {
  const Ring& ring = f.ambient.ring();
  if (!ring.is_field()) throw Error(ErrorCode::NotAField, "complement via row reduction needs a field");
  Matrix b = evaluate_basis(f, p);
  const Matrix& g = f.ambient.gram();
  Matrix m = b.transpose() * g * b;
  if (!determinant(m).is_unit()) throw Error(ErrorCode::NotInMembershipLocus, "restricted form is degenerate");
  Matrix proj = Matrix::identity(ring, g.rows()) - b * inverse_if_unit(m) * b.transpose() * g;
  Matrix c = proj.submatrix([&] {
    std::vector<std::size_t> all(proj.rows());
    std::iota(all.begin(), all.end(), 0);
    return all;
  }(), pivot_columns(proj));
  return assemble(f.ambient, std::move(b), std::move(c));
}

OrthogonalDecomposition coordinate_decomposition(const BilinearSpace& ambient, const std::vector<std::size_t>& columns) {
  std::set<std::size_t> chosen(columns.begin(), columns.end());
  if (chosen.size() != columns.size() || (!chosen.empty() && *chosen.rbegin() >= ambient.rank())) {
    throw Error(ErrorCode::DimensionMismatch, "coordinate columns repeat or leave the ambient space");
  }
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < ambient.rank(); ++k) {
    if (!chosen.count(k)) rest.push_back(k);
  }
  return assemble(ambient, unit_columns(ambient.ring(), ambient.rank(), columns),
                  unit_columns(ambient.ring(), ambient.rank(), rest));
}

OrthogonalDecomposition random_member(const BilinearSpace& ambient, std::size_t r, Rng& rng) {
  std::vector<std::size_t> pivots(r);
  std::iota(pivots.begin(), pivots.end(), 1);
  TautologicalFamily f = tautological_on_chart(r, ambient.rank(), pivots, ambient);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    PointSample p = random_sample(f.chart, rng);
    if (form_membership(f, p)) return orthogonal_complement(f, p);
  }
  throw Error(ErrorCode::SearchExhausted, "no sample in the membership locus after 1000 draws");
}

bool GaActionReport::ok() const {
  if (!unit_law || !action_law || !phi_invariant || !fixed_point_equations || samples.empty()) return false;
  return std::all_of(samples.begin(), samples.end(), [](const GaSampleCheck& c) { return c.moved; });
}

GaActionReport ga_action_verify(std::size_t samples, std::uint64_t seed) {
  const Ring q = Ring::polynomial(Ring::rationals(), {"a1", "a2", "b1", "b2", "r", "s", "t"});
  using Point = std::vector<Element>;
  auto phi = [](const Point& x) { return x[0] * x[3] - x[1] * x[2]; };
  auto act = [&](const Element& t, const Point& x) {
    Element one = t.ring().one();
    return Point{x[0], x[1], x[2] + t * x[0], x[3] + t * x[1], x[4] + t * (one - phi(x))};
  };
  Point x{q.variable("a1"), q.variable("a2"), q.variable("b1"), q.variable("b2"), q.variable("r")};
  Element s = q.variable("s"), t = q.variable("t");

  GaActionReport rep;
  rep.unit_law = act(q.zero(), x) == x;
  rep.action_law = act(s, act(t, x)) == act(s + t, x);
  rep.phi_invariant = phi(act(t, x)) == phi(x);
  Point moved = act(t, x);
  Point expected{q.zero(), q.zero(), t * x[0], t * x[1], t * (q.one() - phi(x))};
  rep.fixed_point_equations = true;
  for (std::size_t k = 0; k < x.size(); ++k) rep.fixed_point_equations &= (moved[k] - x[k]) == expected[k];

  const Ring f = Ring::prime_field(101);
  Rng rng(seed);
  std::uniform_int_distribution<long> coord(0, 100);
  auto check = [&](std::vector<long> pt, long tv) {
    Point p;
    for (long v : pt) p.push_back(f.from_int(v));
    GaSampleCheck c{std::move(pt), tv, act(f.from_int(tv), p) != p};
    rep.samples.push_back(std::move(c));
  };
  check({1, 0, 0, 0, 0}, 1);
  while (rep.samples.size() < samples + 1) {
    std::vector<long> pt(5);
    for (auto& v : pt) v = coord(rng);
    long tv = coord(rng);
    bool a_zero = pt[0] == 0 && pt[1] == 0;
    bool phi_one = ((pt[0] * pt[3] - pt[1] * pt[2]) % 101 + 101) % 101 == 1;
    if (tv == 0 || (a_zero && phi_one)) continue;
    check(std::move(pt), tv);
  }
  return rep;
}

bool StructureSubspace::distinguished_pattern() const {
  const std::size_t half = image_basis.rows() / 2;
  if (image_basis.cols() != half) return false;
  for (std::size_t r = half; r < image_basis.rows(); ++r) {
    for (std::size_t c = 0; c < half; ++c) {
      if (!image_basis(r, c).is_zero()) return false;
    }
  }
  return rank(image_basis) == half;
}

StructureSubspace structure_subspace_hgr(std::size_t n, long i, const OrthogonalDecomposition& u,
                                         const OrthogonalDecomposition& hp1) {
  return build(make_layout(StructureKind::Hgr, n, i), u, hp1);
}

StructureSubspace structure_subspace_rgr(std::size_t n, long i, const OrthogonalDecomposition& v,
                                         const OrthogonalDecomposition& hp1) {
  return build(make_layout(StructureKind::Rgr, n, i), v, hp1);
}

OrthogonalDecomposition distinguished_hgr(std::size_t n, const Ring& ring) {
  std::vector<std::size_t> cols(2 * n);
  std::iota(cols.begin(), cols.end(), 0);
  return coordinate_decomposition(hyperbolic(FormFlavor::Alternating, 2 * n, ring), cols);
}

OrthogonalDecomposition distinguished_rgr(std::size_t n, const Ring& ring) {
  std::vector<std::size_t> cols(n);
  std::iota(cols.begin(), cols.end(), 0);
  return coordinate_decomposition(hyperbolic(FormFlavor::Symmetric, n, ring), cols);
}

OrthogonalDecomposition distinguished_hp1(const Ring& ring) {
  return coordinate_decomposition(hyperbolic(FormFlavor::Alternating, 2, ring), {0, 1});
}

OrthogonalDecomposition stabilize_hgr_point(const OrthogonalDecomposition& u) {
  const Ring& ring = u.ambient.ring();
  const std::size_t planes = u.ambient.rank() / 2;
  if (planes % 2 != 0 || !(u.ambient == hyperbolic(FormFlavor::Alternating, planes, ring))) {
    throw Error(ErrorCode::DimensionMismatch, "stabilization expects H_-^n + H_-^n");
  }
  const std::size_t n = planes / 2;
  const std::size_t size = 2 * planes + 4;
  const std::size_t a = n, b = 2 * n + 1;
  auto move = [&](const Matrix& m, std::size_t plane) {
    Matrix out(ring, size, m.cols() + 2);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      std::size_t target = r < 2 * n ? r : r + 2;
      for (std::size_t c = 0; c < m.cols(); ++c) out(target, c) = m(r, c);
    }
    out(2 * plane, m.cols()) = ring.one();
    out(2 * plane + 1, m.cols() + 1) = ring.one();
    return out;
  };
  return assemble(hyperbolic(FormFlavor::Alternating, planes + 2, ring), move(u.u_basis, a),
                  move(u.complement_basis, b));
}

StabilizationCheck check_hgr_stabilization(std::size_t n, long i, const OrthogonalDecomposition& u,
                                           const OrthogonalDecomposition& hp1) {
  StructureSubspace low = structure_subspace_hgr(n, i, u, hp1);
  StructureSubspace high = structure_subspace_hgr(n + 1, i, stabilize_hgr_point(u), hp1);
  const Ring& ring = u.ambient.ring();
  const std::size_t old_planes = 2 * n, new_planes = 2 * n + 2;
  const std::size_t half_blocks = 4 * n;  // distinguished blocks at level n
  const std::size_t a = n, b = 2 * n + 1;

  // Position of a level-n slot inside the stabilized target
  // [first half, 4 new subspace blocks, second half, 4 new complement blocks].
  auto stabilized_slot = [&](std::size_t slot) { return slot < half_blocks ? slot : slot + 4; };
  std::vector<std::size_t> position(4 * new_planes);
  for (std::size_t s = 0; s < 4; ++s) {
    std::size_t in = s == 2 ? b : a;
    std::size_t out = s == 2 ? a : b;
    for (std::size_t p = 0; p < new_planes; ++p) {
      std::size_t slot = high.slots[s * new_planes + p];
      if (p == in) {
        position[slot] = half_blocks + s;
      } else if (p == out) {
        position[slot] = 2 * half_blocks + 4 + s;
      } else {
        std::size_t old_p = p < a ? p : p - 1;
        position[slot] = stabilized_slot(low.slots[s * old_planes + old_p]);
      }
    }
  }
  const std::size_t size = high.image_basis.rows();
  Matrix pi(ring, size, size);
  for (std::size_t slot = 0; slot < position.size(); ++slot) {
    for (std::size_t k = 0; k < 4; ++k) pi(4 * position[slot] + k, 4 * slot + k) = ring.one();
  }
  SymplecticMatrix perm = SymplecticMatrix::from(pi);

  Matrix stab(ring, size, low.image_basis.cols() + 16);
  for (std::size_t r = 0; r < low.image_basis.rows(); ++r) {
    std::size_t target = r < 4 * half_blocks ? r : r + 16;
    for (std::size_t c = 0; c < low.image_basis.cols(); ++c) stab(target, c) = low.image_basis(r, c);
  }
  for (std::size_t k = 0; k < 16; ++k) stab(4 * half_blocks + k, low.image_basis.cols() + k) = ring.one();

  return StabilizationCheck{perm, same_span(pi * high.image_basis, stab)};
}

}  // namespace hermitk
