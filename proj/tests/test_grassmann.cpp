#include <gtest/gtest.h>

#include <functional>

#include "hermitk/grassmann.hpp"

using namespace hermitk;

namespace {

const Ring Z = Ring::integers();
const Ring Q = Ring::rationals();
const Ring F101 = Ring::prime_field(101);

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvariantViolated;
}

BilinearSpace hminus(std::size_t n, const Ring& r) { return hyperbolic(FormFlavor::Alternating, n, r); }

// Symplectic pairing of two coordinate vectors summed plane by plane.
Element omega(const std::vector<Element>& x, const std::vector<Element>& y) {
  Element out = x[0].ring().zero();
  for (std::size_t k = 0; k + 1 < x.size(); k += 2) out += x[k] * y[k + 1] - x[k + 1] * y[k];
  return out;
}

std::vector<Element> column(const Matrix& m, std::size_t c) {
  std::vector<Element> out;
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(m(r, c));
  return out;
}

bool lower_half_zero(const Matrix& m) {
  for (std::size_t r = m.rows() / 2; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (!m(r, c).is_zero()) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Grassmann, ChartExample) {
  TautologicalFamily f = tautological_on_chart(2, 4, {3, 4}, hminus(2, Q));
  const Ring& r = f.chart.ring;
  EXPECT_EQ(f.chart.variables, (std::vector<std::string>{"x11", "x12", "x21", "x22"}));
  Matrix expected = Matrix::from_rows(r, 2, {{r.variable("x11"), r.variable("x12")},
                                             {r.variable("x21"), r.variable("x22")},
                                             {r.one(), r.zero()},
                                             {r.zero(), r.one()}});
  EXPECT_EQ(f.basis, expected);
  PointSample zero = origin(f.chart);
  EXPECT_EQ(evaluate_basis(f, zero), Matrix::from_ints(Q, {{0, 0}, {0, 0}, {1, 0}, {0, 1}}));
  Matrix b = evaluate_basis(f, zero);
  EXPECT_EQ(b.transpose() * f.ambient.gram() * b, Matrix::from_ints(Q, {{0, 1}, {-1, 0}}));
}

TEST(Grassmann, WideChartNames) {
  Chart c = leading_chart(1, 11, Q);
  EXPECT_EQ(c.variables.front(), "x2_1");
  EXPECT_EQ(c.variables.back(), "x11_1");
  EXPECT_EQ(c.ring.num_variables(), 10u);
}

TEST(Grassmann, BadPivots) {
  EXPECT_EQ(code_of([] { make_chart(2, 4, {1, 1}, Q); }), ErrorCode::BadPivot);
  EXPECT_EQ(code_of([] { make_chart(2, 4, {0, 2}, Q); }), ErrorCode::BadPivot);
  EXPECT_EQ(code_of([] { make_chart(2, 4, {1, 5}, Q); }), ErrorCode::BadPivot);
  EXPECT_EQ(code_of([] { make_chart(2, 4, {1, 2, 3}, Q); }), ErrorCode::BadPivot);
  EXPECT_EQ(code_of([] { tautological_on_chart(2, 4, {1, 2}, hminus(3, Q)); }), ErrorCode::DimensionMismatch);
}

TEST(Grassmann, RestrictedGramKeepsFlavorSymbolically) {
  for (std::size_t n = 2; n <= 6; n += 2) {
    for (std::size_t r = 1; r < n; ++r) {
      TautologicalFamily alt = tautological_on_chart(r, n, [&] {
        std::vector<std::size_t> p;
        for (std::size_t k = 0; k < r; ++k) p.push_back(n - k);
        return p;
      }(), hminus(n / 2, Q));
      EXPECT_NO_THROW(BilinearSpace(FormFlavor::Alternating, alt.restricted_gram()));
      TautologicalFamily sym = tautological_on_chart(r, n, [&] {
        std::vector<std::size_t> p;
        for (std::size_t k = 1; k <= r; ++k) p.push_back(k);
        return p;
      }(), hyperbolic(FormFlavor::Symmetric, n / 2, Q));
      EXPECT_NO_THROW(BilinearSpace(FormFlavor::Symmetric, sym.restricted_gram()));
    }
  }
}

TEST(Grassmann, MembershipAgainstDirectPairing) {
  TautologicalFamily f = tautological_on_chart(2, 4, {3, 4}, hminus(2, Q));
  auto at = [&](std::vector<long> v) {
    std::vector<Element> e;
    for (long x : v) e.push_back(Q.from_int(x));
    return make_sample(f.chart, e);
  };
  EXPECT_TRUE(form_membership(f, origin(f.chart)));
  // x11 = 1, x22 = -1: columns (1,0,1,0), (0,-1,0,1) pair to -1 + 1 = 0.
  EXPECT_FALSE(form_membership(f, at({1, 0, 0, -1})));
  // x11 = 1: U = span(e1 + e3, e4), pairing 1.
  EXPECT_TRUE(form_membership(f, at({1, 0, 0, 0})));
  Rng rng(5);
  for (int k = 0; k < 40; ++k) {
    PointSample p = random_sample(f.chart, rng);
    Matrix b = evaluate_basis(f, p);
    EXPECT_EQ(form_membership(f, p), !omega(column(b, 0), column(b, 1)).is_zero());
  }
}

TEST(Grassmann, ComplementAtOrigin) {
  TautologicalFamily f = tautological_on_chart(2, 4, {3, 4}, hminus(2, Q));
  OrthogonalDecomposition d = orthogonal_complement(f, origin(f.chart));
  EXPECT_EQ(d.complement_basis, Matrix::from_ints(Q, {{1, 0}, {0, 1}, {0, 0}, {0, 0}}));
  EXPECT_EQ(d.u.rank() + d.complement.rank(), 4u);
  EXPECT_EQ(d.witness.target(), hminus(2, Q));
  // Ordering U first makes the witness a block permutation.
  EXPECT_EQ(d.witness.witness(), Matrix::from_ints(Q, {{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}}));
}

TEST(Grassmann, ComplementAtRandomSamples) {
  Rng rng(11);
  for (const Ring& r : {Q, F101}) {
    for (std::size_t planes = 2; planes <= 3; ++planes) {
      TautologicalFamily f = tautological_on_chart(2, 2 * planes, {1, 2}, hminus(planes, r));
      int hits = 0;
      for (int k = 0; k < 30; ++k) {
        PointSample p = random_sample(f.chart, rng);
        if (!form_membership(f, p)) {
          EXPECT_EQ(code_of([&] { orthogonal_complement(f, p); }), ErrorCode::NotInMembershipLocus);
          continue;
        }
        ++hits;
        OrthogonalDecomposition d = orthogonal_complement(f, p);
        EXPECT_EQ(d.u.rank() + d.complement.rank(), 2 * planes);
        EXPECT_TRUE((d.u_basis.transpose() * f.ambient.gram() * d.complement_basis).is_zero());
        EXPECT_TRUE(d.complement.is_unimodular());
        for (std::size_t c = 0; c < d.complement_basis.cols(); ++c) {
          for (std::size_t u = 0; u < d.u_basis.cols(); ++u) {
            EXPECT_TRUE(omega(column(d.u_basis, u), column(d.complement_basis, c)).is_zero());
          }
        }
      }
      EXPECT_GT(hits, 0);
    }
  }
}

TEST(Grassmann, ComplementNeedsField) {
  TautologicalFamily f = tautological_on_chart(2, 4, {3, 4}, hminus(2, Z));
  EXPECT_EQ(code_of([&] { orthogonal_complement(f, origin(f.chart)); }), ErrorCode::NotAField);
}

TEST(Grassmann, GaAction) {
  GaActionReport rep = ga_action_verify(20, 3);
  EXPECT_TRUE(rep.unit_law);
  EXPECT_TRUE(rep.action_law);
  EXPECT_TRUE(rep.phi_invariant);
  EXPECT_TRUE(rep.fixed_point_equations);
  ASSERT_EQ(rep.samples.size(), 21u);
  EXPECT_EQ(rep.samples[0].point, (std::vector<long>{1, 0, 0, 0, 0}));
  EXPECT_EQ(rep.samples[0].t, 1);
  EXPECT_TRUE(rep.ok());
  // The moved point of the first sample is (1, 0, 1, 0, 1) by hand.
  for (const auto& s : rep.samples) {
    long a1 = s.point[0], a2 = s.point[1], b1 = s.point[2], b2 = s.point[3];
    long phi = ((a1 * b2 - a2 * b1) % 101 + 101) % 101;
    bool stays = (s.t * a1) % 101 == 0 && (s.t * a2) % 101 == 0 && (s.t * (1 - phi)) % 101 == 0;
    EXPECT_EQ(s.moved, !stays);
  }
}

TEST(Grassmann, HgrDistinguished) {
  for (long i = -1; i <= 1; ++i) {
    StructureSubspace s = structure_subspace_hgr(1, i, distinguished_hgr(1, F101), distinguished_hp1(F101));
    EXPECT_EQ(s.ambient.rank(), 32u);
    EXPECT_EQ(s.restricted.rank(), 16u);
    EXPECT_EQ(s.restricted.flavor(), FormFlavor::Symmetric);
    EXPECT_EQ(s.ambient_to_standard.target(), hyperbolic(FormFlavor::Symmetric, 16, F101));
    EXPECT_EQ(s.restricted_to_standard.target(), hyperbolic(FormFlavor::Symmetric, 8, F101));
    EXPECT_EQ(s.ambient_to_standard.witness() * s.image_basis, s.subspace_basis);
    ASSERT_TRUE(s.coordinate_planes.has_value());
    EXPECT_EQ(s.coordinate_planes->size(), 8u);
    if (i == 0) {
      EXPECT_TRUE(s.distinguished_pattern());
      EXPECT_TRUE(lower_half_zero(s.image_basis));
      EXPECT_FALSE(s.to_front.has_value());
      continue;
    }
    EXPECT_FALSE(s.distinguished_pattern());
    ASSERT_TRUE(s.to_front.has_value());
    const Matrix& p = s.to_front->permutation.matrix();
    EXPECT_TRUE(lower_half_zero(p.transpose() * s.image_basis));
    EXPECT_EQ(s.to_front->homotopy.evaluate(F101.one()), p);
    EXPECT_TRUE(s.to_front->homotopy.evaluate(F101.zero()).is_identity());
  }
}

TEST(Grassmann, HgrRandomSamples) {
  Rng rng(17);
  for (long i = -1; i <= 1; ++i) {
    for (int k = 0; k < 20; ++k) {
      OrthogonalDecomposition u = random_member(hminus(2, F101), 2, rng);
      OrthogonalDecomposition h = random_member(hminus(2, F101), 2, rng);
      StructureSubspace s = structure_subspace_hgr(1, i, u, h);
      EXPECT_EQ(rank(s.subspace_basis), 16u);
      EXPECT_EQ(s.restricted.flavor(), FormFlavor::Symmetric);
      EXPECT_TRUE(determinant(s.restricted.gram()).is_unit());
      EXPECT_EQ(s.restricted_to_standard.target(), hyperbolic(FormFlavor::Symmetric, 8, F101));
    }
  }
}

TEST(Grassmann, HgrAtBasePointOfHp1) {
  // U2 = H_- + 0 with a random U: the restricted form is still H_+^8.
  Rng rng(19);
  for (int k = 0; k < 5; ++k) {
    OrthogonalDecomposition u = random_member(hminus(2, Q), 2, rng);
    StructureSubspace s = structure_subspace_hgr(1, 0, u, distinguished_hp1(Q));
    EXPECT_EQ(s.restricted_to_standard.target(), hyperbolic(FormFlavor::Symmetric, 8, Q));
  }
}

TEST(Grassmann, RgrDistinguishedAndRandom) {
  Rng rng(23);
  for (long i = -2; i <= 2; i += 2) {
    StructureSubspace d = structure_subspace_rgr(2, i, distinguished_rgr(2, F101), distinguished_hp1(F101));
    EXPECT_EQ(d.ambient.rank(), 32u);
    EXPECT_EQ(d.restricted.rank(), 16u);
    EXPECT_EQ(d.restricted.flavor(), FormFlavor::Alternating);
    EXPECT_EQ(d.distinguished_pattern(), i == 0);
    ASSERT_TRUE(d.coordinate_planes.has_value());
    if (i != 0) {
      ASSERT_TRUE(d.to_front.has_value());
      EXPECT_TRUE(lower_half_zero(d.to_front->permutation.matrix().transpose() * d.image_basis));
    }
    for (int k = 0; k < 20; ++k) {
      OrthogonalDecomposition v = random_member(hyperbolic(FormFlavor::Symmetric, 2, F101), 2, rng);
      OrthogonalDecomposition h = random_member(hminus(2, F101), 2, rng);
      StructureSubspace s = structure_subspace_rgr(2, i, v, h);
      EXPECT_EQ(rank(s.subspace_basis), 16u);
      EXPECT_TRUE(determinant(s.restricted.gram()).is_unit());
      EXPECT_EQ(s.restricted_to_standard.target(), hyperbolic(FormFlavor::Alternating, 8, F101));
    }
  }
}

TEST(Grassmann, StructureRejectsBadInput) {
  auto u = distinguished_hgr(1, F101);
  auto h = distinguished_hp1(F101);
  EXPECT_EQ(code_of([&] { structure_subspace_hgr(3, 0, u, h); }), ErrorCode::UnsupportedScale);
  EXPECT_EQ(code_of([&] { structure_subspace_hgr(1, 2, u, h); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { structure_subspace_hgr(2, 0, u, h); }), ErrorCode::DimensionMismatch);
  auto v = distinguished_rgr(2, F101);
  EXPECT_EQ(code_of([&] { structure_subspace_rgr(1, 1, v, h); }), ErrorCode::UnsupportedScale);
  EXPECT_EQ(code_of([&] { structure_subspace_rgr(2, 1, v, h); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { structure_subspace_hgr(1, 0, u, distinguished_hp1(Q)); }), ErrorCode::RingMismatch);
}

TEST(Grassmann, StabilizedPoint) {
  OrthogonalDecomposition u = stabilize_hgr_point(distinguished_hgr(1, Q));
  // New plane order: old plane 0, A, old plane 1, B.
  EXPECT_EQ(column(u.u_basis, 2)[2], Q.one());
  EXPECT_EQ(column(u.complement_basis, 0)[4], Q.one());
  EXPECT_EQ(column(u.complement_basis, 2)[6], Q.one());
}

TEST(Grassmann, StabilizationCompatibility) {
  Rng rng(29);
  for (long i = -1; i <= 1; ++i) {
    StabilizationCheck c = check_hgr_stabilization(1, i, distinguished_hgr(1, F101), distinguished_hp1(F101));
    EXPECT_TRUE(c.spans_agree) << "i = " << i;
    EXPECT_EQ(c.permutation.size(), 64u);
    OrthogonalDecomposition u = random_member(hminus(2, F101), 2, rng);
    OrthogonalDecomposition h = random_member(hminus(2, F101), 2, rng);
    EXPECT_TRUE(check_hgr_stabilization(1, i, u, h).spans_agree) << "i = " << i;
  }
}
