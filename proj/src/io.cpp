#include "hermitk/io.hpp"

#include <cctype>
#include <charconv>

namespace hermitk::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    bad(std::string(what) + ": " + e.what());
  }
}

std::uint64_t parse_count(std::string_view s, std::string_view whole) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 2) bad("bad modulus in ring \"" + std::string(whole) + "\"");
  return v;
}

std::vector<std::string> split_list(std::string_view body) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t comma = body.find(',', start);
    if (comma == std::string_view::npos) comma = body.size();
    out.emplace_back(body.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

Ring base_ring(std::string_view b, std::string_view whole) {
  if (b == "ZZ" || b == "Z") return Ring::integers();
  if (b == "QQ" || b == "Q") return Ring::rationals();
  if (b.rfind("GF(", 0) == 0 && b.back() == ')') return Ring::prime_field(parse_count(b.substr(3, b.size() - 4), whole));
  if (b.rfind("GF", 0) == 0) return Ring::prime_field(parse_count(b.substr(2), whole));
  if (b.rfind("ZZ/", 0) == 0) return Ring::modular(parse_count(b.substr(3), whole));
  if (b.rfind("Z/", 0) == 0) return Ring::modular(parse_count(b.substr(2), whole));
  if (b.rfind("F", 0) == 0 && b.size() > 1 && std::isdigit(static_cast<unsigned char>(b[1]))) {
    return Ring::prime_field(parse_count(b.substr(1), whole));
  }
  bad("unknown coefficient ring \"" + std::string(whole) + "\"");
}

Ring make_ring(Ring base, const std::vector<std::string>& vars, const std::vector<std::string>& inverted) {
  Ring r = vars.empty() ? base : Ring::polynomial(base, vars);
  for (const auto& v : inverted) {
    if (!r.variable_index(v)) bad("inverted variable \"" + v + "\" is not a ring variable");
    r = r.invert_variable(v);
  }
  return r;
}

std::vector<std::vector<std::string>> string_rows(const Json& rows) {
  if (!rows.is_array()) bad("rows must be an array of arrays");
  std::vector<std::vector<std::string>> out;
  for (const auto& row : rows) {
    if (!row.is_array()) bad("rows must be an array of arrays");
    std::vector<std::string> r;
    for (const auto& e : row) {
      if (e.is_string()) {
        r.push_back(e.get<std::string>());
      } else if (e.is_number_integer()) {
        r.push_back(std::to_string(e.get<long long>()));
      } else {
        bad("matrix entries must be strings or integers");
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

FormFlavor flavor_from(const Json& j) {
  std::string f = guarded("flavor", [&] { return j.at("flavor").get<std::string>(); });
  if (f == "symmetric") return FormFlavor::Symmetric;
  if (f == "alternating") return FormFlavor::Alternating;
  bad("unknown flavor \"" + f + "\"");
}

struct ComplexParts {
  Ring ring;
  int lo;
  std::vector<std::size_t> ranks;
  std::vector<Matrix> diffs;
};

ComplexParts complex_parts(const Json& j) {
  return guarded("complex", [&] {
    Ring ring = ring_from_json(j.at("ring"));
    auto degrees = j.at("degrees").get<std::vector<int>>();
    if (degrees.size() != 2) bad("degrees must be [lo, hi]");
    auto ranks = j.at("ranks").get<std::vector<std::size_t>>();
    if (static_cast<long>(ranks.size()) != degrees[1] - degrees[0] + 1) bad("ranks do not cover the degree range");
    const Json& d = j.at("differentials");
    if (!d.is_array() || d.size() + 1 != ranks.size()) bad("need one differential per adjacent degree pair");
    std::vector<Matrix> diffs;
    for (std::size_t k = 0; k < d.size(); ++k) {
      const Json& rows = d[k].is_object() ? d[k].at("rows") : d[k];
      diffs.push_back(rows_from_json(ring, rows, ranks[k], ranks[k + 1]));
    }
    return ComplexParts{ring, degrees[0], std::move(ranks), std::move(diffs)};
  });
}

}  // namespace

Ring parse_ring_name(std::string_view text) {
  std::size_t open = text.find('[');
  Ring base = base_ring(text.substr(0, open), text);
  if (open == std::string_view::npos) return base;
  std::size_t close = text.find(']', open);
  if (close == std::string_view::npos) bad("unclosed variable list in ring \"" + std::string(text) + "\"");
  std::vector<std::string> vars = split_list(text.substr(open + 1, close - open - 1));
  std::vector<std::string> inverted;
  std::string_view rest = text.substr(close + 1);
  if (!rest.empty()) {
    if (rest.front() != '[' || rest.back() != ']') bad("trailing text in ring \"" + std::string(text) + "\"");
    for (auto& v : split_list(rest.substr(1, rest.size() - 2))) {
      if (v.size() < 4 || v.compare(v.size() - 3, 3, "^-1") != 0) bad("inverted entry \"" + v + "\" lacks ^-1");
      inverted.push_back(v.substr(0, v.size() - 3));
    }
  }
  for (const auto& v : vars) {
    if (v.empty()) bad("empty variable name in ring \"" + std::string(text) + "\"");
  }
  return make_ring(base, vars, inverted);
}

Json to_json(const Ring& r) {
  Json j;
  switch (r.coeff_kind()) {
    case CoeffKind::Integers: j["coefficients"] = "ZZ"; break;
    case CoeffKind::Rationals: j["coefficients"] = "QQ"; break;
    case CoeffKind::PrimeField: j["coefficients"] = "GF"; break;
    case CoeffKind::ModularRing: j["coefficients"] = "ZZ/n"; break;
  }
  if (r.coeff_kind() == CoeffKind::PrimeField || r.coeff_kind() == CoeffKind::ModularRing) {
    j["modulus"] = r.modulus().get_ui();
  }
  if (!r.variables().empty()) j["variables"] = r.variables();
  std::vector<std::string> inv;
  for (std::size_t k = 0; k < r.num_variables(); ++k) {
    if (r.is_inverted(k)) inv.push_back(r.variables()[k]);
  }
  if (!inv.empty()) j["inverted"] = inv;
  return j;
}

Ring ring_from_json(const Json& j) {
  if (j.is_string()) return parse_ring_name(j.get<std::string>());
  return guarded("ring", [&] {
    std::string c = j.at("coefficients").get<std::string>();
    Ring base = Ring::integers();
    if (c == "ZZ") {
      base = Ring::integers();
    } else if (c == "QQ") {
      base = Ring::rationals();
    } else if (c == "GF") {
      base = Ring::prime_field(j.at("modulus").get<std::uint64_t>());
    } else if (c == "ZZ/n") {
      base = Ring::modular(j.at("modulus").get<std::uint64_t>());
    } else {
      bad("unknown coefficients \"" + c + "\"");
    }
    auto vars = j.value("variables", std::vector<std::string>{});
    auto inv = j.value("inverted", std::vector<std::string>{});
    return make_ring(base, vars, inv);
  });
}

Json rows_to_json(const Matrix& m) { return m.to_strings(); }

Matrix rows_from_json(const Ring& ring, const Json& rows, std::size_t nrows, std::size_t ncols) {
  auto s = string_rows(rows);
  if (s.empty() && (nrows == 0 || ncols == 0)) return Matrix(ring, nrows, ncols);
  Matrix m = Matrix::parse(ring, s);
  if (m.rows() != nrows || m.cols() != ncols) {
    throw Error(ErrorCode::DimensionMismatch, "expected a " + std::to_string(nrows) + "x" + std::to_string(ncols) +
                                                  " matrix, got " + std::to_string(m.rows()) + "x" +
                                                  std::to_string(m.cols()));
  }
  return m;
}

Json to_json(const Matrix& m) { return Json{{"ring", to_json(m.ring())}, {"rows", rows_to_json(m)}}; }

Matrix matrix_from_json(const Json& j) {
  return guarded("matrix", [&] { return matrix_from_json(j, ring_from_json(j.at("ring"))); });
}

Matrix matrix_from_json(const Json& j, const Ring& ring) {
  return guarded("matrix", [&] { return Matrix::parse(ring, string_rows(j.at("rows"))); });
}

Json to_json(const BilinearSpace& s) {
  Json j = to_json(s.gram());
  j["flavor"] = std::string(to_string(s.flavor()));
  return j;
}

BilinearSpace space_from_json(const Json& j) { return BilinearSpace(flavor_from(j), matrix_from_json(j)); }

Json to_json(const Isometry& iso) {
  return Json{{"source", to_json(iso.source())}, {"target", to_json(iso.target())}, {"witness", to_json(iso.witness())}};
}

Isometry isometry_from_json(const Json& j) {
  return guarded("isometry", [&] {
    return check_isometry(space_from_json(j.at("source")), space_from_json(j.at("target")),
                          matrix_from_json(j.at("witness")));
  });
}

Json to_json(const ChainComplex& c) {
  Json diffs = Json::array();
  for (const auto& d : c.differentials()) diffs.push_back(rows_to_json(d));
  return Json{{"ring", to_json(c.ring())}, {"degrees", {c.lo(), c.hi()}}, {"ranks", c.ranks()}, {"differentials", diffs}};
}

ChainComplex complex_from_json(const Json& j) {
  ComplexParts p = complex_parts(j);
  return ChainComplex::make(p.ring, p.lo, p.ranks, p.diffs);
}

Json to_json(const DualityForm& f) {
  Json j = to_json(f.complex());
  j["shift"] = f.shift();
  j["epsilon"] = f.epsilon();
  Json comps = Json::array();
  for (const auto& m : f.components()) comps.push_back(rows_to_json(m));
  j["components"] = comps;
  Json dual = Json::array();
  for (const auto& d : f.dual().differentials()) dual.push_back(rows_to_json(d));
  j["dual_differentials"] = dual;
  return j;
}

DualityForm form_from_json(const Json& j) {
  ChainComplex c = complex_from_json(j);
  return guarded("duality form", [&] {
    int shift = j.at("shift").get<int>();
    int epsilon = j.at("epsilon").get<int>();
    const Json& comps = j.at("components");
    if (!comps.is_array() || comps.size() != c.ranks().size()) bad("need one component per degree");
    std::vector<Matrix> ms;
    for (std::size_t k = 0; k < comps.size(); ++k) {
      int deg = c.lo() + static_cast<int>(k);
      ms.push_back(rows_from_json(c.ring(), comps[k], c.rank(shift - deg), c.rank(deg)));
    }
    DualityForm f = DualityForm::make(c, shift, epsilon, std::move(ms));
    if (j.contains("dual_differentials") && j.at("dual_differentials") != to_json(f)["dual_differentials"]) {
      throw Error(ErrorCode::InvariantViolated, "dual_differentials disagree with the dual of the complex");
    }
    return f;
  });
}

Json to_json(const std::vector<Transvection>& factors) {
  Json out = Json::array();
  for (const auto& t : factors) {
    Json v = Json::array();
    for (std::size_t k = 0; k < t.v.rows(); ++k) v.push_back(t.v(k, 0).to_string());
    out.push_back(Json{{"v", v}, {"lambda", t.lambda.to_string()}});
  }
  return out;
}

std::string canonical(const Json& j) { return j.dump(); }

}  // namespace hermitk::io
