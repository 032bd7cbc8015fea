#include "hermitk/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "hermitk/grassmann.hpp"
#include "hermitk/gw.hpp"
#include "hermitk/io.hpp"
#include "hermitk/koszul.hpp"
#include "hermitk/sampling.hpp"
#include "hermitk/sp_group.hpp"

namespace hermitk::cli {

namespace {

using io::Json;

struct Options {
  std::string ring = "QQ";
  bool ring_given = false;
  std::uint64_t seed = 1;
  std::size_t samples = 20;
  std::optional<std::size_t> n;
  std::optional<std::size_t> m;
  std::optional<long> i;
  std::size_t max_stab = 0;
  std::string output = "json";
  std::string input;
  std::string kind = "hgr";
};

struct Check {
  std::string name;
  bool ok = false;
  Json data;
};

struct Report {
  std::string command;
  std::vector<Check> checks;
};

/// Unusable input or flags; maps to exit 2.
struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Context {
 public:
  Context(const Options& o, std::istream& in) : opts(o), in_(in) {}

  const Options& opts;

  Ring ring() const { return ring_or(opts.ring); }

  Ring ring_or(const std::string& fallback) const {
    try {
      return io::parse_ring_name(opts.ring_given ? opts.ring : fallback);
    } catch (const Error& e) {
      throw BadInput(e.what());
    }
  }

  bool has_input() const { return !opts.input.empty(); }

  Json document() const {
    std::string text;
    if (opts.input == "-") {
      std::ostringstream s;
      s << in_.rdbuf();
      text = s.str();
    } else {
      std::ifstream f(opts.input);
      if (!f) throw BadInput("cannot open input file " + opts.input);
      std::ostringstream s;
      s << f.rdbuf();
      text = s.str();
    }
    try {
      return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw BadInput(std::string("input is not JSON: ") + e.what());
    }
  }

 private:
  std::istream& in_;
};

template <class F>
auto load(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw BadInput(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw BadInput(e.what());
  }
}

/// Runs a check body; library errors become a failed record.
Check attempt(const std::string& name, const std::function<Check()>& body) {
  try {
    Check c = body();
    c.name = name;
    return c;
  } catch (const Error& e) {
    return Check{name, false, Json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}};
  }
}

bool passed(const Report& r) {
  return !r.checks.empty() && std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.ok; });
}

Json class_to_json(const GWClass& c) {
  Json plus = Json::array(), minus = Json::array();
  for (const auto& s : c.plus) plus.push_back(io::to_json(s));
  for (const auto& s : c.minus) minus.push_back(io::to_json(s));
  return Json{{"plus", plus}, {"minus", minus}};
}

BilinearSpace random_alternating(const Ring& r, std::size_t size, Rng& rng) {
  return BilinearSpace(FormFlavor::Alternating, random_alternating_unimodular(r, size, rng));
}

// ---- form ----

Report form_embed(const Context& cx) {
  Report rep{"form embed", {}};
  if (cx.has_input()) {
    BilinearSpace s = load([&] { return io::space_from_json(cx.document()); });
    rep.checks.push_back(attempt("certified embedding", [&] {
      return Check{"", true, Json{{"isometry", io::to_json(embed_into_hyperbolic(s))}}};
    }));
    return rep;
  }
  Ring r = cx.ring();
  Rng rng(cx.opts.seed);
  std::size_t failures = 0;
  Json failed = Json::array();
  for (std::size_t k = 0; k < cx.opts.samples; ++k) {
    BilinearSpace s = random_alternating(r, 2 * (1 + k % 4), rng);
    try {
      embed_into_hyperbolic(s);
    } catch (const Error& e) {
      ++failures;
      failed.push_back(Json{{"sample", k}, {"error", e.what()}});
    }
  }
  rep.checks.push_back(Check{"random embeddings", failures == 0,
                             Json{{"ring", r.to_string()}, {"count", cx.opts.samples}, {"failures", failed}}});
  return rep;
}

Report form_tensor(const Context& cx) {
  Report rep{"form tensor", {}};
  Ring r = cx.ring();
  std::size_t n = cx.opts.n.value_or(1), m = cx.opts.m.value_or(n);
  if (n == 0 || m == 0) throw BadInput("--n and --m must be positive");
  rep.checks.push_back(attempt("tensor of hyperbolic spaces", [&] {
    Isometry iso = tensor_hyperbolic_isometry(n, m, r);
    bool ok = iso.target() == hyperbolic(FormFlavor::Symmetric, 2 * n * m, r);
    return Check{"", ok, Json{{"n", n}, {"m", m}, {"isometry", io::to_json(iso)}}};
  }));
  return rep;
}

Report form_standardize(const Context& cx) {
  Report rep{"form standardize", {}};
  std::optional<BilinearSpace> s;
  if (cx.has_input()) {
    s = load([&] { return io::space_from_json(cx.document()); });
  } else {
    Rng rng(cx.opts.seed);
    s = random_alternating(cx.ring(), 2 * cx.opts.n.value_or(2), rng);
  }
  rep.checks.push_back(attempt("symplectic basis", [&] {
    Isometry iso = standardize_symplectic(*s);
    return Check{"", true, Json{{"isometry", io::to_json(iso)}}};
  }));
  return rep;
}

// ---- gw ----

Check ksp0_homomorphism(const Ring& r, std::size_t pairs, Rng& rng) {
  std::size_t bad = 0;
  for (std::size_t k = 0; k < pairs; ++k) {
    BilinearSpace a = random_alternating(r, 2 * (1 + k % 2), rng);
    BilinearSpace b = random_alternating(r, 2 * (1 + (k / 2) % 2), rng);
    long i = static_cast<long>(k % 7) - 3, j = static_cast<long>((k * 3) % 7) - 3;
    if (!gw_equal(ksp0_class(i + j, orthogonal_sum(a, b)), gw_add(ksp0_class(i, a), ksp0_class(j, b)))) ++bad;
  }
  return Check{"", bad == 0, Json{{"pairs", pairs}, {"failures", bad}}};
}

// Every i in [-3, 3] is hit (surjective onto the range) and classes with
// distinct indices differ (injective), over all ranks 2..8.
Check ksp0_range(const Ring& r, Rng& rng) {
  std::vector<std::pair<long, GWClass>> classes;
  std::size_t bad = 0;
  for (long i = -3; i <= 3; ++i) {
    for (std::size_t size = 2; size <= 8; size += 2) {
      GWClass c = ksp0_class(i, random_alternating(r, size, rng));
      if (invariants(c).hyperbolic_multiple != i) ++bad;
      classes.emplace_back(i, std::move(c));
    }
  }
  for (std::size_t a = 0; a < classes.size(); ++a) {
    for (std::size_t b = a + 1; b < classes.size(); ++b) {
      if (gw_equal(classes[a].second, classes[b].second) != (classes[a].first == classes[b].first)) ++bad;
    }
  }
  return Check{"", bad == 0, Json{{"classes", classes.size()}, {"failures", bad}}};
}

Report gw_ksp0(const Context& cx) {
  Report rep{"gw ksp0", {}};
  if (cx.has_input()) {
    BilinearSpace s = load([&] { return io::space_from_json(cx.document()); });
    long i = cx.opts.i.value_or(0);
    rep.checks.push_back(attempt("class", [&] {
      GWClass c = ksp0_class(i, s);
      GWInvariants inv = invariants(c);
      Json data{{"i", i}, {"class", class_to_json(c)}, {"virtual_rank", inv.virtual_rank}};
      if (inv.hyperbolic_multiple) data["hyperbolic_multiple"] = *inv.hyperbolic_multiple;
      bool ok = !s.ring().is_field() || inv.hyperbolic_multiple == i;
      return Check{"", ok, data};
    }));
    return rep;
  }
  Ring r = cx.ring();
  Rng rng(cx.opts.seed);
  rep.checks.push_back(attempt("homomorphism", [&] { return ksp0_homomorphism(r, cx.opts.samples, rng); }));
  rep.checks.push_back(attempt("injective and surjective on [-3,3]", [&] { return ksp0_range(r, rng); }));
  return rep;
}

Report gw_witt(const Context& cx) {
  Report rep{"gw witt", {}};
  Json doc = cx.has_input() ? cx.document() : throw BadInput("gw witt needs --input");
  if (doc.contains("spaces")) {
    auto [a, b] = load([&] {
      return std::pair{io::space_from_json(doc.at("spaces").at(0)), io::space_from_json(doc.at("spaces").at(1))};
    });
    rep.checks.push_back(attempt("stable isometry", [&] {
      bool same = stable_isometry_test(a, b, cx.opts.max_stab);
      return Check{"", true, Json{{"stably_isometric", same}, {"max_stab", cx.opts.max_stab}}};
    }));
    return rep;
  }
  BilinearSpace s = load([&] { return io::space_from_json(doc); });
  rep.checks.push_back(attempt("witt decomposition", [&] {
    WittDecomposition w = witt_decompose(s);
    return Check{"", true,
                 Json{{"hyperbolic_count", w.hyperbolic_count},
                      {"anisotropic", io::to_json(w.anisotropic)},
                      {"isometry", io::to_json(w.witness)}}};
  }));
  return rep;
}

// ---- sp ----

SymplecticMatrix swap_or_input(const Context& cx) {
  if (cx.has_input()) {
    return load([&] { return SymplecticMatrix::from(io::matrix_from_json(cx.document())); });
  }
  std::size_t n = cx.opts.n.value_or(1), m = cx.opts.m.value_or(1);
  if (n == 0 || m == 0) throw BadInput("--n and --m must be positive");
  return block_swap(n, m, cx.ring());
}

Report sp_swap_factor(const Context& cx) {
  Report rep{"sp swap-factor", {}};
  SymplecticMatrix p = swap_or_input(cx);
  rep.checks.push_back(attempt("factorization", [&] {
    auto fs = factor_into_transvections(p);
    bool ok = product(fs, p.size(), p.ring()) == p.matrix();
    return Check{"", ok, Json{{"size", p.size()}, {"factors", io::to_json(fs)}}};
  }));
  return rep;
}

Report sp_homotopy(const Context& cx) {
  Report rep{"sp homotopy", {}};
  SymplecticMatrix p = swap_or_input(cx);
  rep.checks.push_back(attempt("homotopy paths", [&] {
    auto fs = factor_into_transvections(p);
    HomotopyPath h = homotopy_witness(fs, p.size(), p.ring());
    Matrix j = standard_j(p.size() / 2, h.ring);
    std::vector<Element> at0, at1;
    for (std::size_t k = 0; k < h.ring.num_variables(); ++k) {
      bool param = h.ring.variables()[k] == h.parameter;
      Element base_var = param ? p.ring().zero() : p.ring().variable(h.ring.variables()[k]);
      at0.push_back(param ? p.ring().zero() : base_var);
      at1.push_back(param ? p.ring().one() : base_var);
    }
    bool ok = true;
    Json paths = Json::array();
    for (std::size_t k = 0; k < h.paths.size(); ++k) {
      const Matrix& f = h.paths[k];
      ok &= f.transpose() * j * f == j;
      ok &= f.substitute(p.ring(), at0).is_identity();
      ok &= f.substitute(p.ring(), at1) == fs[k].matrix();
      paths.push_back(io::to_json(f));
    }
    ok &= h.evaluate(p.ring().one()) == p.matrix();
    return Check{"", ok, Json{{"parameter", h.parameter}, {"paths", paths}}};
  }));
  return rep;
}

// ---- koszul ----

Check koszul_suite(const Ring& r, std::size_t max_n) {
  Json per = Json::array();
  bool ok = true;
  for (std::size_t n = 1; n <= max_n; ++n) {
    ChainComplex k = koszul_complex(n, r);
    DualityForm f = theta_form(k, n);
    bool sign = f.epsilon() == duality_sign(static_cast<int>(n));
    bool homotopies = true;
    for (std::size_t i = 1; i <= n; ++i) {
      ContractingHomotopy h = contracting_homotopy(n, i, r);
      homotopies &= !homotopy_defect(h.complex, h.components).has_value();
    }
    ok &= sign && homotopies;
    per.push_back(Json{{"n", n}, {"epsilon", f.epsilon()}, {"sign_ok", sign}, {"homotopies_ok", homotopies}});
  }
  return Check{"", ok, Json{{"ring", r.to_string()}, {"ranks", per}}};
}

Report koszul_verify(const Context& cx) {
  Report rep{"koszul verify", {}};
  if (cx.has_input()) {
    Json doc = cx.document();
    if (doc.contains("components")) {
      DualityForm f = load([&] { return io::form_from_json(doc); });
      rep.checks.push_back(Check{"duality form", true, Json{{"shift", f.shift()}, {"epsilon", f.epsilon()}}});
    } else {
      ChainComplex c = load([&] { return io::complex_from_json(doc); });
      rep.checks.push_back(Check{"complex", true, Json{{"degrees", {c.lo(), c.hi()}}}});
    }
    return rep;
  }
  Ring r = cx.ring();
  std::size_t n = cx.opts.n.value_or(4);
  rep.checks.push_back(attempt("koszul suite", [&] { return koszul_suite(r, n); }));
  return rep;
}

Report koszul_thom(const Context& cx) {
  Report rep{"koszul thom", {}};
  Ring r = cx.ring();
  std::size_t n = cx.opts.n.value_or(1);
  if (n == 0) throw BadInput("--n must be positive");
  rep.checks.push_back(attempt("thom class", [&] {
    FormedComplex t = n == 1 ? thom_class_trivial_line(r) : thom_class(r, default_koszul_variables(n));
    Json form = io::to_json(t.form);
    return Check{"", true, Json{{"form", form}, {"canonical", io::canonical(form)}}};
  }));
  return rep;
}

Report koszul_borel(const Context& cx) {
  Report rep{"koszul borel", {}};
  Ring r = cx.ring();
  rep.checks.push_back(attempt("borel class", [&] {
    FormedComplex b = borel_class_chart(r);
    Json form = io::to_json(b.form);
    return Check{"", true, Json{{"form", form}, {"canonical", io::canonical(form)}}};
  }));
  rep.checks.push_back(attempt("comparison with th (x) th", [&] {
    FormIsomorphism iso = compare_borel_thom(r);
    Json comps = Json::array();
    for (const auto& m : iso.map.components()) comps.push_back(io::rows_to_json(m));
    return Check{"", true, Json{{"components", comps}}};
  }));
  return rep;
}

// ---- grass ----

Report grass_ga_check(const Context& cx) {
  Report rep{"grass ga-check", {}};
  GaActionReport g = ga_action_verify(cx.opts.samples, cx.opts.seed);
  rep.checks.push_back(Check{"unit law", g.unit_law, {}});
  rep.checks.push_back(Check{"action law", g.action_law, {}});
  rep.checks.push_back(Check{"phi invariance", g.phi_invariant, {}});
  rep.checks.push_back(Check{"fixed point equations", g.fixed_point_equations, {}});
  std::size_t moved = 0;
  Json samples = Json::array();
  for (const auto& s : g.samples) {
    moved += s.moved;
    samples.push_back(Json{{"point", s.point}, {"t", s.t}, {"moved", s.moved}});
  }
  rep.checks.push_back(Check{"freeness", moved == g.samples.size() && !g.samples.empty(), Json{{"samples", samples}}});
  return rep;
}

Json front_summary(const StructureSubspace& s) {
  Json j{{"distinguished_pattern", s.distinguished_pattern()}};
  if (s.coordinate_planes) j["image_planes"] = *s.coordinate_planes;
  if (s.to_front) {
    std::vector<std::size_t> order;
    const Matrix& p = s.to_front->permutation.matrix();
    for (std::size_t c = 0; c < p.cols(); c += 2) {
      for (std::size_t r = 0; r < p.rows(); r += 2) {
        if (!p(r, c).is_zero() || !p(r + 1, c).is_zero()) order.push_back(r / 2);
      }
    }
    j["plane_order"] = order;
    j["transvections"] = s.to_front->factors.size();
    j["homotopy_parameter"] = s.to_front->homotopy.parameter;
  }
  return j;
}

// Image of the distinguished point is the leading half, directly or after
// the recorded plane permutation whose homotopy runs from I to it.
bool front_certified(const StructureSubspace& s) {
  if (s.distinguished_pattern()) return true;
  if (!s.to_front) return false;
  const Ring& r = s.image_basis.ring();
  const Matrix& p = s.to_front->permutation.matrix();
  Matrix moved = p.transpose() * s.image_basis;
  for (std::size_t row = moved.rows() / 2; row < moved.rows(); ++row) {
    for (std::size_t c = 0; c < moved.cols(); ++c) {
      if (!moved(row, c).is_zero()) return false;
    }
  }
  const HomotopyPath& h = s.to_front->homotopy;
  return h.evaluate(r.one()) == p && h.evaluate(r.zero()).is_identity() &&
         product(s.to_front->factors, p.rows(), r) == p;
}

Report grass_structure_check(const Context& cx) {
  Report rep{"grass structure-check", {}};
  const bool hgr = cx.opts.kind == "hgr";
  if (!hgr && cx.opts.kind != "rgr") throw BadInput("--kind must be hgr or rgr");
  Ring r = cx.ring_or("GF(101)");
  if (!r.is_field()) throw BadInput("structure checks sample over a field");
  const std::size_t n = cx.opts.n.value_or(hgr ? 1 : 2);
  const long ln = static_cast<long>(n);
  if (n == 0 || n > kMaxStructureScale || (!hgr && n % 2 != 0)) {
    throw BadInput("scale n=" + std::to_string(n) + " is not supported");
  }
  std::vector<long> indices;
  if (cx.opts.i) {
    indices.push_back(*cx.opts.i);
  } else {
    for (long i = -ln; i <= ln; i += hgr ? 1 : 2) indices.push_back(i);
  }
  const std::size_t sub_rank = hgr ? 16 * n : 8 * n;
  const FormFlavor flavor = hgr ? FormFlavor::Symmetric : FormFlavor::Alternating;
  BilinearSpace p_space = hgr ? hyperbolic(FormFlavor::Alternating, 2 * n, r) : hyperbolic(FormFlavor::Symmetric, n, r);
  BilinearSpace hp1_space = hyperbolic(FormFlavor::Alternating, 2, r);
  auto build = [&](long i, const OrthogonalDecomposition& u, const OrthogonalDecomposition& h) {
    return hgr ? structure_subspace_hgr(n, i, u, h) : structure_subspace_rgr(n, i, u, h);
  };
  auto shape_ok = [&](const StructureSubspace& s) {
    return s.restricted.rank() == sub_rank && rank(s.subspace_basis) == sub_rank && s.restricted.flavor() == flavor &&
           s.restricted.is_unimodular() && s.ambient.rank() == 2 * sub_rank &&
           s.restricted_to_standard.target() == hyperbolic(flavor, sub_rank / 2, r);
  };
  OrthogonalDecomposition base_u = hgr ? distinguished_hgr(n, r) : distinguished_rgr(n, r);
  OrthogonalDecomposition base_h = distinguished_hp1(r);

  for (long i : indices) {
    const std::string tag = "i=" + std::to_string(i) + ": ";
    std::optional<StructureSubspace> d;
    try {
      d = build(i, base_u, base_h);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DimensionMismatch) throw BadInput(e.what());
      throw;
    }
    rep.checks.push_back(attempt(tag + "distinguished point", [&] {
      Json data = front_summary(*d);
      return Check{"", shape_ok(*d) && front_certified(*d), data};
    }));
    rep.checks.push_back(attempt(tag + "random samples", [&] {
      Rng rng(cx.opts.seed + static_cast<std::uint64_t>(i + 16));
      std::size_t bad = 0;
      for (std::size_t k = 0; k < cx.opts.samples; ++k) {
        OrthogonalDecomposition u = random_member(p_space, hgr ? 2 * n : n, rng);
        OrthogonalDecomposition h = random_member(hp1_space, 2, rng);
        if (!shape_ok(build(i, u, h))) ++bad;
      }
      return Check{"", bad == 0, Json{{"samples", cx.opts.samples}, {"failures", bad}}};
    }));
    rep.checks.push_back(attempt(tag + "base point of HP1", [&] {
      Rng rng(cx.opts.seed + 97 + static_cast<std::uint64_t>(i + 16));
      OrthogonalDecomposition u = random_member(p_space, hgr ? 2 * n : n, rng);
      return Check{"", shape_ok(build(i, u, base_h)), {}};
    }));
    if (hgr && cx.opts.max_stab >= 1 && n + 1 <= kMaxStructureScale) {
      rep.checks.push_back(attempt(tag + "stabilization", [&] {
        Rng rng(cx.opts.seed + 193 + static_cast<std::uint64_t>(i + 16));
        bool at_base = check_hgr_stabilization(n, i, base_u, base_h).spans_agree;
        bool random = check_hgr_stabilization(n, i, random_member(p_space, 2 * n, rng),
                                              random_member(hp1_space, 2, rng))
                          .spans_agree;
        return Check{"", at_base && random, Json{{"distinguished", at_base}, {"random", random}}};
      }));
    }
  }
  return rep;
}

struct Handler {
  std::function<Report(const Context&)> run;
  const char* summary;
};

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"form embed", {form_embed, "Embed an alternating unimodular space into a hyperbolic one"}},
      {"form tensor", {form_tensor, "Isometry from a tensor of alternating hyperbolics to a symmetric one"}},
      {"form standardize", {form_standardize, "Symplectic basis for an alternating unimodular space"}},
      {"gw ksp0", {gw_ksp0, "Grothendieck-Witt classes of shifted symplectic spaces"}},
      {"gw witt", {gw_witt, "Witt decomposition or stable isometry of symmetric spaces"}},
      {"sp swap-factor", {sp_swap_factor, "Factor a block swap into transvections"}},
      {"sp homotopy", {sp_homotopy, "Polynomial paths from the identity to each factor"}},
      {"koszul verify", {koszul_verify, "Recheck a complex or symmetric form document"}},
      {"koszul thom", {koszul_thom, "Thom class of the trivial bundle"}},
      {"koszul borel", {koszul_borel, "Borel class on the chart and its comparison with the Thom class"}},
      {"grass ga-check", {grass_ga_check, "Additive group action laws and freeness samples"}},
      {"grass structure-check", {grass_structure_check, "Structure subspaces over the Grassmannian charts"}},
  };
  return h;
}

Report selftest(const Context& cx) {
  Report rep{"selftest", {}};
  struct Item {
    const char* command;
    const char* ring;
  };
  const Item items[] = {
      {"form embed", "ZZ"},     {"form embed", "GF(5)"},      {"form tensor", "ZZ"},
      {"form standardize", "QQ"}, {"gw ksp0", "GF(5)"},       {"sp swap-factor", "ZZ"},
      {"sp homotopy", "QQ"},    {"koszul verify", "GF(7)"},   {"koszul thom", "QQ"},
      {"koszul borel", "QQ"},   {"grass ga-check", "QQ"},     {"grass structure-check", "GF(101)"},
  };
  for (const auto& item : items) {
    Options o = cx.opts;
    o.input.clear();
    o.ring = item.ring;
    o.ring_given = true;
    o.samples = std::min<std::size_t>(cx.opts.samples, 5);
    std::string name = std::string(item.command) + " [" + item.ring + "]";
    rep.checks.push_back(attempt(name, [&] {
      Context sub(o, std::cin);
      Report r = handlers().at(item.command).run(sub);
      Json failing = Json::array();
      for (const auto& c : r.checks) {
        if (!c.ok) failing.push_back(c.name);
      }
      return Check{"", passed(r), Json{{"checks", r.checks.size()}, {"failing", failing}}};
    }));
  }
  return rep;
}

Json report_json(const Report& r, const Options& o, const std::string& outcome) {
  Json details = Json::array();
  for (const auto& c : r.checks) {
    Json d{{"check", c.name}, {"ok", c.ok}};
    if (!c.data.is_null()) d["data"] = c.data;
    details.push_back(d);
  }
  return Json{{"command", r.command}, {"outcome", outcome}, {"details", details}, {"seed", o.seed},
              {"version", kVersion}};
}

void emit(std::ostream& out, const Json& j, const std::string& format) {
  if (format == "json") {
    out << j.dump(2) << "\n";
    return;
  }
  out << "command: " << j["command"].get<std::string>() << "\n";
  out << "outcome: " << j["outcome"].get<std::string>() << "\n";
  out << "seed: " << j["seed"].get<std::uint64_t>() << "\n";
  out << "version: " << j["version"].get<std::string>() << "\n";
  for (const auto& d : j["details"]) {
    out << "  " << (d["ok"].get<bool>() ? "pass" : "FAIL") << "  " << d["check"].get<std::string>() << "\n";
    if (d.contains("data") && d["data"].contains("error")) {
      out << "        " << d["data"]["message"].get<std::string>() << "\n";
    }
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Options opts;
  CLI::App app{"Exact verification of hermitian K-theory constructions", "hermitk"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--ring", opts.ring, "Coefficient ring: ZZ, QQ, GF(p), ZZ/n, optionally with variables");
  app.add_option("--seed", opts.seed, "Seed for every random sample");
  app.add_option("--samples", opts.samples, "Number of random samples");
  app.add_option("--n", opts.n, "Rank or scale parameter");
  app.add_option("--m", opts.m, "Second rank parameter");
  app.add_option("--i", opts.i, "Index parameter");
  app.add_option("--max-stab", opts.max_stab, "Stabilization bound");
  app.add_option("--output", opts.output, "Report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--input", opts.input, "Input document path, - for standard input");
  app.add_option("--kind", opts.kind, "Grassmannian kind for structure checks")->check(CLI::IsMember({"hgr", "rgr"}));

  std::vector<std::pair<std::string, CLI::App*>> leaves;
  std::map<std::string, CLI::App*> groups;
  for (const auto& [name, h] : handlers()) {
    std::string group = name.substr(0, name.find(' '));
    std::string leaf = name.substr(name.find(' ') + 1);
    if (!groups.count(group)) {
      groups[group] = app.add_subcommand(group, group + " commands");
      groups[group]->require_subcommand(1);
    }
    leaves.emplace_back(name, groups[group]->add_subcommand(leaf, h.summary));
  }
  leaves.emplace_back("selftest", app.add_subcommand("selftest", "Run every check at small size"));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kBadInput;
  }
  opts.ring_given = app.count("--ring") > 0;

  std::string command;
  for (const auto& [name, sub] : leaves) {
    if (sub->parsed()) command = name;
  }
  Context cx(opts, in);
  try {
    Report rep = command == "selftest" ? selftest(cx) : handlers().at(command).run(cx);
    bool ok = passed(rep);
    emit(out, report_json(rep, opts, ok ? "pass" : "fail"), opts.output);
    return ok ? kPass : kFail;
  } catch (const BadInput& e) {
    err << "bad input: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "bad input: " << e.what() << "\n";
  }
  emit(out, report_json(Report{command, {}}, opts, "error"), opts.output);
  return kBadInput;
}

}  // namespace hermitk::cli
