#include <gtest/gtest.h>

#include <functional>

#include "hermitk/io.hpp"

using namespace hermitk;
using io::Json;

namespace {

const Ring Q = Ring::rationals();

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvariantViolated;
}

}  // namespace

TEST(Io, RingNames) {
  EXPECT_EQ(io::parse_ring_name("ZZ"), Ring::integers());
  EXPECT_EQ(io::parse_ring_name("QQ"), Q);
  EXPECT_EQ(io::parse_ring_name("GF(5)"), Ring::prime_field(5));
  EXPECT_EQ(io::parse_ring_name("F7"), Ring::prime_field(7));
  EXPECT_EQ(io::parse_ring_name("ZZ/6"), Ring::modular(6));
  Ring laurent = Ring::polynomial(Q, {"t0", "t1"}).invert_variable("t0");
  EXPECT_EQ(io::parse_ring_name(laurent.to_string()), laurent);
  for (const char* bad : {"", "RR", "GF(x)", "QQ[t", "QQ[t][s]", "QQ[t]x", "ZZ/1"}) {
    EXPECT_EQ(code_of([&] { io::parse_ring_name(bad); }), ErrorCode::ParseError) << bad;
  }
}

TEST(Io, RingDescriptorRoundTrip) {
  for (const Ring& r : {Ring::integers(), Q, Ring::prime_field(101), Ring::modular(12),
                        Ring::polynomial(Ring::prime_field(5), {"a", "b"}).invert_variable("b")}) {
    EXPECT_EQ(io::ring_from_json(io::to_json(r)), r);
  }
  EXPECT_EQ(io::to_json(Ring::prime_field(5)), (Json{{"coefficients", "GF"}, {"modulus", 5}}));
  EXPECT_EQ(io::ring_from_json(Json("QQ[t]")), Ring::polynomial(Q, {"t"}));
  EXPECT_EQ(code_of([] { io::ring_from_json(Json{{"coefficients", "RR"}}); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::ring_from_json(Json{{"variables", {"t"}}}); }), ErrorCode::ParseError);
}

TEST(Io, MatrixExchange) {
  Ring r = Ring::polynomial(Q, {"x", "y"});
  Json doc = Json::parse(R"({"ring": "QQ[x,y]", "rows": [["1/2", "x^2*y-3"], ["0", "-x"]]})");
  Matrix m = io::matrix_from_json(doc);
  EXPECT_EQ(m(0, 0), Q.from_rational(mpq_class(1, 2)).coerce(r));
  EXPECT_EQ(io::matrix_from_json(io::to_json(m)), m);
  Json ints = Json::parse(R"({"ring": "ZZ", "rows": [[1, 2], [3, 4]]})");
  EXPECT_EQ(io::matrix_from_json(ints), Matrix::from_ints(Ring::integers(), {{1, 2}, {3, 4}}));
  Json ragged = Json::parse(R"({"ring": "QQ", "rows": [["1", "2"], ["3"]]})");
  EXPECT_EQ(code_of([&] { io::matrix_from_json(ragged); }), ErrorCode::ParseError);
  Json garbage = Json::parse(R"({"ring": "QQ", "rows": [["1+"]]})");
  EXPECT_EQ(code_of([&] { io::matrix_from_json(garbage); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::matrix_from_json(Json{{"rows", Json::array()}}); }), ErrorCode::ParseError);
}

TEST(Io, SpaceAndIsometry) {
  BilinearSpace h = hyperbolic(FormFlavor::Alternating, 2, Q);
  EXPECT_EQ(io::space_from_json(io::to_json(h)), h);
  Json wrong = io::to_json(h);
  wrong["flavor"] = "symmetric";
  EXPECT_EQ(code_of([&] { io::space_from_json(wrong); }), ErrorCode::NotSymmetric);
  Isometry iso = embed_into_hyperbolic(BilinearSpace(FormFlavor::Alternating, Matrix::from_ints(Q, {{0, 2}, {-2, 0}})));
  Isometry back = io::isometry_from_json(io::to_json(iso));
  EXPECT_EQ(back.witness(), iso.witness());
  // Loading re-verifies: a tampered witness is rejected.
  Json tampered = io::to_json(iso);
  tampered["witness"]["rows"][0][0] = "7";
  EXPECT_NE(code_of([&] { io::isometry_from_json(tampered); }), ErrorCode::ParseError);
}

TEST(Io, ComplexRoundTrip) {
  for (std::size_t n = 1; n <= 3; ++n) {
    FormedComplex t = thom_class(Q, default_koszul_variables(n));
    EXPECT_EQ(io::complex_from_json(io::to_json(t.complex)), t.complex);
    DualityForm f = io::form_from_json(io::to_json(t.form));
    EXPECT_EQ(f.components(), t.form.components());
  }
  Json bad = io::to_json(koszul_complex(2, Q));
  bad["differentials"][1][0][0] = "t1";
  EXPECT_EQ(code_of([&] { io::complex_from_json(bad); }), ErrorCode::InvariantViolated);
  Json short_ranks = io::to_json(koszul_complex(2, Q));
  short_ranks["ranks"] = {1, 2};
  EXPECT_EQ(code_of([&] { io::complex_from_json(short_ranks); }), ErrorCode::ParseError);
}

TEST(Io, FormRejectsTampering) {
  Json doc = io::to_json(thom_class_trivial_line(Q).form);
  Json sign = doc;
  sign["components"][1][0][0] = "1";
  EXPECT_THROW(io::form_from_json(sign), Error);
  Json dual = doc;
  dual["dual_differentials"][0][0][0] = "t";
  EXPECT_EQ(code_of([&] { io::form_from_json(dual); }), ErrorCode::InvariantViolated);
}

// Displayed diagrams, read off by hand: the line has rows t over -t with
// verticals 1 (degree 0) and -1 (degree 1); the chart complex has rows
// (t0, t1) over (-t1, -t0).
TEST(Io, GoldenThomLine) {
  EXPECT_EQ(io::canonical(io::to_json(thom_class_trivial_line(Q).form)),
            R"({"components":[[["1"]],[["-1"]]],"degrees":[0,1],"differentials":[[["t"]]],)"
            R"("dual_differentials":[[["-t"]]],"epsilon":-1,"ranks":[1,1],)"
            R"("ring":{"coefficients":"QQ","variables":["t"]},"shift":1})");
}

TEST(Io, GoldenBorelChart) {
  EXPECT_EQ(io::canonical(io::to_json(borel_class_chart(Q).form)),
            R"({"components":[[["1"]],[["-1","0"],["0","1"]],[["-1"]]],"degrees":[0,2],)"
            R"("differentials":[[["t0","t1"]],[["-t1"],["t0"]]],)"
            R"("dual_differentials":[[["-t0","t1"]],[["-t1"],["-t0"]]],"epsilon":-1,"ranks":[1,2,1],)"
            R"("ring":{"coefficients":"QQ","variables":["t0","t1"]},"shift":2})");
}

TEST(Io, TransvectionList) {
  Transvection t{Matrix::from_ints(Q, {{1}, {0}}), Q.from_int(-1)};
  EXPECT_EQ(io::to_json(std::vector<Transvection>{t}), Json::parse(R"([{"v": ["1", "0"], "lambda": "-1"}])"));
}
