#include <gtest/gtest.h>

#include "hermitk/matrix.hpp"
#include "hermitk/sampling.hpp"

using namespace hermitk;

namespace {

// Laplace expansion along the first row; independent of the library's
// elimination routines.
Element cofactor_det(const Matrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return m.ring().one();
  if (n == 1) return m(0, 0);
  Element acc = m.ring().zero();
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j).is_zero()) continue;
    std::vector<std::size_t> rows, cols;
    for (std::size_t i = 1; i < n; ++i) rows.push_back(i);
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) cols.push_back(k);
    }
    Element term = m(0, j) * cofactor_det(m.submatrix(rows, cols));
    acc = j % 2 == 0 ? acc + term : acc - term;
  }
  return acc;
}

std::vector<Ring> test_rings() {
  Ring q = Ring::rationals();
  return {Ring::integers(),
          q,
          Ring::prime_field(5),
          Ring::modular(12),
          Ring::polynomial(q, {"t"}),
          Ring::polynomial(Ring::modular(4), {"t"}),
          Ring::polynomial(q, {"t0", "t1"}).invert_variable("t0")};
}

Matrix ints(const Ring& r, std::vector<std::vector<long>> rows) { return Matrix::from_ints(r, rows); }

}  // namespace

TEST(Ring, DescriptorNames) {
  EXPECT_EQ(Ring::integers().to_string(), "ZZ");
  EXPECT_EQ(Ring::prime_field(7).to_string(), "GF(7)");
  EXPECT_EQ(Ring::modular(12).to_string(), "ZZ/12");
  Ring r = Ring::polynomial(Ring::rationals(), {"t0", "t1"}).invert_variable("t0");
  EXPECT_EQ(r.to_string(), "QQ[t0,t1][t0^-1]");
  EXPECT_EQ(r.kind(), RingKind::Localized);
  EXPECT_THROW(Ring::prime_field(12), Error);
}

TEST(Ring, IsUnitExamples) {
  EXPECT_TRUE(Ring::rationals().from_int(2).is_unit());
  EXPECT_FALSE(Ring::integers().from_int(2).is_unit());
  Ring loc = invert_variable(Ring::polynomial(Ring::rationals(), {"t"}), "t");
  EXPECT_TRUE(is_unit(loc.variable("t")));
  EXPECT_FALSE(Ring::polynomial(Ring::rationals(), {"t"}).variable("t").is_unit());
  EXPECT_TRUE(Ring::modular(12).from_int(5).is_unit());
  EXPECT_FALSE(Ring::modular(12).from_int(4).is_unit());
  EXPECT_TRUE(loc.variable("t").pow(2).is_unit());
  EXPECT_FALSE((loc.variable("t") + loc.one()).is_unit());
}

TEST(Ring, NilpotentPerturbationOverModularIsUnit) {
  Ring r = Ring::polynomial(Ring::modular(4), {"t"});
  Element x = Element::parse(r, "1+2*t");
  ASSERT_TRUE(x.is_unit());
  EXPECT_EQ(x.inverse(), Element::parse(r, "1-2*t"));
  Ring r12 = Ring::polynomial(Ring::modular(12), {"t"});
  Element y = Element::parse(r12, "5+6*t");
  ASSERT_TRUE(y.is_unit());
  EXPECT_TRUE((y * y.inverse()).is_one());
  EXPECT_FALSE(Element::parse(r12, "5+3*t").is_unit());
}

TEST(Ring, InvertVariable) {
  Ring qt = Ring::polynomial(Ring::rationals(), {"t"});
  Ring loc = invert_variable(qt, "t");
  EXPECT_EQ(loc.invert_variable("t"), loc);
  EXPECT_THROW(invert_variable(qt, "s"), Error);
  EXPECT_THROW(invert_variable(Ring::rationals(), "t"), Error);
  Ring q2 = Ring::polynomial(Ring::rationals(), {"t0", "t1"}).invert_variable("t0");
  Element t0 = q2.variable("t0");
  EXPECT_TRUE((t0 * t0.inverse()).is_one());
  EXPECT_EQ(t0.inverse().to_string(), "t0^-1");
}

TEST(Ring, NegativeExponentOutsideInvertedSetIsAnError) {
  Ring qt = Ring::polynomial(Ring::rationals(), {"t"});
  EXPECT_THROW(qt.variable("t").inverse(), Error);
  EXPECT_THROW(Element::from_terms(qt, {Term{{-1}, mpq_class(1)}}), Error);
}

TEST(Ring, PrintingIsDescending) {
  Ring r = Ring::polynomial(Ring::integers(), {"t0", "t1"});
  Element x = Element::parse(r, "5 - 3*t1 + t0^2");
  EXPECT_EQ(x.to_string(), "t0^2-3*t1+5");
  Ring q = Ring::polynomial(Ring::rationals(), {"t"});
  EXPECT_EQ(Element::parse(q, "-3/2*t").to_string(), "-3/2*t");
  EXPECT_EQ(Element::parse(q, "t - t").to_string(), "0");
}

TEST(Ring, ParseRejectsMalformedEntriesWithPosition) {
  Ring r = Ring::polynomial(Ring::integers(), {"t"});
  for (const char* bad : {"", "1+", "2**t", "s", "t^-1", "1/2", "3 t", "(t)"}) {
    try {
      Element::parse(r, bad);
      ADD_FAILURE() << "accepted " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError) << bad;
      EXPECT_NE(std::string(e.what()).find("position"), std::string::npos) << bad;
    }
  }
  EXPECT_THROW(Element::parse(Ring::modular(6), "1/2"), Error);
  EXPECT_EQ(Element::parse(Ring::prime_field(5), "1/2").to_string(), "3");
}

TEST(Ring, ParsePrintRoundTrip) {
  Rng rng(7);
  for (const Ring& r : test_rings()) {
    for (int k = 0; k < 200; ++k) {
      Element x = random_element(r, rng);
      EXPECT_EQ(Element::parse(r, x.to_string()), x) << x.to_string() << " in " << r.to_string();
    }
  }
}

TEST(Ring, CanonicalZero) {
  Rng rng(11);
  for (const Ring& r : test_rings()) {
    for (int k = 0; k < 1000; ++k) {
      Element x = random_element(r, rng);
      Element z = x - x;
      EXPECT_TRUE(z.is_zero());
      EXPECT_EQ(z, r.zero());
      EXPECT_TRUE(z.terms().empty());
    }
  }
}

TEST(Ring, RingAxiomsOnSamples) {
  Rng rng(3);
  for (const Ring& r : test_rings()) {
    for (int k = 0; k < 100; ++k) {
      Element a = random_element(r, rng), b = random_element(r, rng), c = random_element(r, rng);
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * b, b * a);
      EXPECT_EQ(a + (-a), r.zero());
    }
  }
}

TEST(Ring, LocalizationPreservesOperations) {
  Ring qt = Ring::polynomial(Ring::rationals(), {"t"});
  Ring loc = invert_variable(qt, "t");
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    Element a = random_element(qt, rng), b = random_element(qt, rng);
    EXPECT_EQ((a + b).coerce(loc), a.coerce(loc) + b.coerce(loc));
    EXPECT_EQ((a * b).coerce(loc), a.coerce(loc) * b.coerce(loc));
  }
}

TEST(Matrix, DeterminantExamples) {
  Ring z = Ring::integers();
  EXPECT_EQ(determinant(ints(z, {{0, 1}, {-1, 0}})), z.one());
  EXPECT_EQ(determinant(ints(z, {{0, 1}, {1, 0}})), z.from_int(-1));
  Ring qt = Ring::polynomial(Ring::rationals(), {"t"});
  Matrix m = Matrix::parse(qt, {{"t", "1"}, {"0", "t"}});
  EXPECT_EQ(determinant(m), cofactor_det(m));
  EXPECT_EQ(determinant(m).to_string(), "t^2");
  EXPECT_THROW(determinant(Matrix(z, 2, 3)), Error);
  EXPECT_EQ(determinant(Matrix(z, 0, 0)), z.one());
}

TEST(Matrix, DeterminantMatchesCofactorOracle) {
  Rng rng(17);
  for (const Ring& r : test_rings()) {
    for (std::size_t n = 1; n <= 5; ++n) {
      for (int k = 0; k < 6; ++k) {
        Matrix m = random_matrix(r, n, n, rng);
        EXPECT_EQ(determinant(m), cofactor_det(m)) << r.to_string() << " " << m.to_string();
      }
    }
  }
}

TEST(Matrix, DeterminantIsMultiplicative) {
  Rng rng(19);
  for (const Ring& r : test_rings()) {
    for (std::size_t n = 1; n <= 6; ++n) {
      Matrix a = random_matrix(r, n, n, rng), b = random_matrix(r, n, n, rng);
      EXPECT_EQ(determinant(a * b), determinant(a) * determinant(b)) << r.to_string() << " n=" << n;
    }
  }
}

TEST(Matrix, AdjugateIdentity) {
  Rng rng(23);
  for (const Ring& r : test_rings()) {
    for (std::size_t n = 1; n <= 5; ++n) {
      Matrix m = random_matrix(r, n, n, rng);
      Matrix lhs = m * adjugate(m);
      EXPECT_EQ(lhs, Matrix::identity(r, n).scaled(determinant(m)));
    }
  }
}

TEST(Matrix, InverseExamples) {
  Ring z = Ring::integers();
  EXPECT_EQ(inverse_if_unit(ints(z, {{0, 1}, {-1, 0}})), ints(z, {{0, -1}, {1, 0}}));
  Ring qt = Ring::polynomial(Ring::rationals(), {"t"});
  Matrix u = Matrix::parse(qt, {{"1", "t"}, {"0", "1"}});
  Matrix ui = inverse_if_unit(u);
  EXPECT_EQ(ui, Matrix::parse(qt, {{"1", "-t"}, {"0", "1"}}));
  EXPECT_TRUE((u * ui).is_identity());
  try {
    inverse_if_unit(Matrix::parse(qt, {{"t", "0"}, {"0", "t"}}));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAUnit);
  }
}

TEST(Matrix, InverseOfRandomUnimodular) {
  Rng rng(29);
  for (const Ring& r : test_rings()) {
    for (std::size_t n = 1; n <= 6; ++n) {
      Matrix m = random_unimodular(r, n, rng);
      Matrix inv = inverse_if_unit(m);
      EXPECT_TRUE((inv * m).is_identity()) << r.to_string();
      EXPECT_TRUE((m * inv).is_identity()) << r.to_string();
    }
  }
}

TEST(Matrix, KroneckerAndBlocks) {
  Ring z = Ring::integers();
  Matrix j = ints(z, {{0, 1}, {-1, 0}});
  Matrix jj = kron(j, j);
  EXPECT_EQ(jj, ints(z, {{0, 0, 0, 1}, {0, 0, -1, 0}, {0, -1, 0, 0}, {1, 0, 0, 0}}));
  EXPECT_EQ(block_diag(j, j).rows(), 4u);
  EXPECT_EQ(determinant(block_diag(j, j)), z.one());
  EXPECT_FALSE(first_mismatch(jj, jj));
  EXPECT_EQ(first_mismatch(j, -j)->second, 1u);
}

TEST(Matrix, RankOverField) {
  Ring f = Ring::prime_field(5);
  EXPECT_EQ(rank(Matrix::from_ints(f, {{1, 2}, {2, 4}})), 1u);
  EXPECT_EQ(rank(Matrix::from_ints(f, {{1, 2}, {2, 3}})), 2u);
  EXPECT_THROW(rank(Matrix::from_ints(Ring::integers(), {{1}})), Error);
}
