#include "hermitk/ring.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace hermitk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::RingMismatch: return "RingMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::FlavorMismatch: return "FlavorMismatch";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::CongruenceFails: return "CongruenceFails";
    case ErrorCode::NotAlternating: return "NotAlternating";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::NoUnitPivot: return "NoUnitPivot";
    case ErrorCode::CharacteristicTwo: return "CharacteristicTwo";
    case ErrorCode::NotAField: return "NotAField";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::OddRank: return "OddRank";
    case ErrorCode::Undecidable: return "Undecidable";
    case ErrorCode::OddSize: return "OddSize";
    case ErrorCode::NotSymplectic: return "NotSymplectic";
    case ErrorCode::UnsupportedInput: return "UnsupportedInput";
    case ErrorCode::BadPivot: return "BadPivot";
    case ErrorCode::NotInMembershipLocus: return "NotInMembershipLocus";
    case ErrorCode::UnsupportedScale: return "UnsupportedScale";
    case ErrorCode::NoMatchFound: return "NoMatchFound";
    case ErrorCode::InvariantViolated: return "InvariantViolated";
  }
  return "Unknown";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  mpz_class z(static_cast<unsigned long>(n));
  return mpz_probab_prime_p(z.get_mpz_t(), 40) != 0;
}

// ---------------------------------------------------------------------------
// Ring

Ring Ring::integers() {
  static const Ring r(std::make_shared<const Data>(Data{CoeffKind::Integers, 0, {}, {}}));
  return r;
}

Ring Ring::rationals() {
  static const Ring r(std::make_shared<const Data>(Data{CoeffKind::Rationals, 0, {}, {}}));
  return r;
}

Ring Ring::prime_field(std::uint64_t p) {
  if (!is_prime(p)) {
    throw Error(ErrorCode::InvariantViolated, "prime field modulus " + std::to_string(p) + " is not prime");
  }
  return Ring(std::make_shared<const Data>(
      Data{CoeffKind::PrimeField, mpz_class(static_cast<unsigned long>(p)), {}, {}}));
}

Ring Ring::modular(std::uint64_t n) {
  if (n < 2) throw Error(ErrorCode::InvariantViolated, "modulus must be at least 2");
  return Ring(std::make_shared<const Data>(
      Data{CoeffKind::ModularRing, mpz_class(static_cast<unsigned long>(n)), {}, {}}));
}

Ring Ring::polynomial(const Ring& base, std::vector<std::string> variables) {
  if (base.num_variables() != 0) {
    // Flat representation: nesting merges the variable lists.
    return base.adjoin(variables);
  }
  Data d = *base.d_;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (variables[i] == variables[j]) {
        throw Error(ErrorCode::InvariantViolated, "duplicate variable " + variables[i]);
      }
    }
  }
  d.vars = std::move(variables);
  d.inverted.assign(d.vars.size(), false);
  return Ring(std::make_shared<const Data>(std::move(d)));
}

RingKind Ring::kind() const {
  if (d_->vars.empty()) {
    switch (d_->coeff) {
      case CoeffKind::Integers: return RingKind::Integers;
      case CoeffKind::Rationals: return RingKind::Rationals;
      case CoeffKind::PrimeField: return RingKind::PrimeField;
      case CoeffKind::ModularRing: return RingKind::ModularRing;
    }
  }
  for (bool inv : d_->inverted) {
    if (inv) return RingKind::Localized;
  }
  return RingKind::Polynomial;
}

std::optional<std::size_t> Ring::variable_index(std::string_view name) const {
  for (std::size_t i = 0; i < d_->vars.size(); ++i) {
    if (d_->vars[i] == name) return i;
  }
  return std::nullopt;
}

Ring Ring::invert_variable(std::string_view name) const {
  auto idx = variable_index(name);
  if (!idx) throw Error(ErrorCode::UnknownVariable, std::string(name) + " is not a variable of " + to_string());
  if (d_->inverted[*idx]) return *this;
  Data d = *d_;
  d.inverted[*idx] = true;
  return Ring(std::make_shared<const Data>(std::move(d)));
}

Ring Ring::adjoin(const std::vector<std::string>& names) const {
  Data d = *d_;
  for (const auto& n : names) {
    if (variable_index(n) || std::count(names.begin(), names.end(), n) > 1) {
      throw Error(ErrorCode::InvariantViolated, "variable " + n + " already present");
    }
    d.vars.push_back(n);
    d.inverted.push_back(false);
  }
  return Ring(std::make_shared<const Data>(std::move(d)));
}

Ring Ring::scalar_ring() const {
  if (d_->vars.empty()) return *this;
  Data d = *d_;
  d.vars.clear();
  d.inverted.clear();
  return Ring(std::make_shared<const Data>(std::move(d)));
}

bool Ring::is_field() const {
  if (!d_->vars.empty()) return false;
  switch (d_->coeff) {
    case CoeffKind::Integers: return false;
    case CoeffKind::Rationals:
    case CoeffKind::PrimeField: return true;
    case CoeffKind::ModularRing: return mpz_probab_prime_p(d_->modulus.get_mpz_t(), 40) != 0;
  }
  return false;
}

bool Ring::is_domain() const {
  if (d_->coeff != CoeffKind::ModularRing) return true;
  return mpz_probab_prime_p(d_->modulus.get_mpz_t(), 40) != 0;
}

std::string Ring::to_string() const {
  std::string s;
  switch (d_->coeff) {
    case CoeffKind::Integers: s = "ZZ"; break;
    case CoeffKind::Rationals: s = "QQ"; break;
    case CoeffKind::PrimeField: s = "GF(" + d_->modulus.get_str() + ")"; break;
    case CoeffKind::ModularRing: s = "ZZ/" + d_->modulus.get_str(); break;
  }
  if (d_->vars.empty()) return s;
  s += "[";
  for (std::size_t i = 0; i < d_->vars.size(); ++i) {
    if (i) s += ",";
    s += d_->vars[i];
  }
  s += "]";
  std::string inv;
  for (std::size_t i = 0; i < d_->vars.size(); ++i) {
    if (!d_->inverted[i]) continue;
    if (!inv.empty()) inv += ",";
    inv += d_->vars[i] + "^-1";
  }
  if (!inv.empty()) s += "[" + inv + "]";
  return s;
}

mpq_class Ring::normalize_scalar(const mpq_class& v) const {
  switch (d_->coeff) {
    case CoeffKind::Integers:
      if (v.get_den() != 1) {
        throw Error(ErrorCode::NotAUnit, "denominator " + v.get_den().get_str() + " is not a unit in ZZ");
      }
      return v;
    case CoeffKind::Rationals: {
      mpq_class r(v);
      r.canonicalize();
      return r;
    }
    case CoeffKind::PrimeField:
    case CoeffKind::ModularRing: {
      const mpz_class& n = d_->modulus;
      mpz_class num = v.get_num() % n;
      if (num < 0) num += n;
      if (v.get_den() != 1) {
        mpz_class inv;
        mpz_class den = v.get_den() % n;
        if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), n.get_mpz_t()) == 0) {
          throw Error(ErrorCode::NotAUnit, "denominator " + v.get_den().get_str() + " is not a unit mod " + n.get_str());
        }
        num = (num * inv) % n;
      }
      return mpq_class(num);
    }
  }
  return v;
}

Element Ring::zero() const { return Element(*this); }

Element Ring::one() const { return from_int(1); }

Element Ring::from_int(long v) const { return from_rational(mpq_class(v)); }

Element Ring::from_mpz(const mpz_class& v) const { return from_rational(mpq_class(v)); }

Element Ring::from_rational(const mpq_class& v) const {
  std::vector<Term> t;
  t.push_back(Term{Monomial(num_variables(), 0), v});
  return Element::from_terms(*this, std::move(t));
}

Element Ring::variable(std::string_view name) const {
  auto idx = variable_index(name);
  if (!idx) throw Error(ErrorCode::UnknownVariable, std::string(name) + " is not a variable of " + to_string());
  return variable(*idx);
}

Element Ring::variable(std::size_t index) const {
  Monomial m(num_variables(), 0);
  m.at(index) = 1;
  std::vector<Term> t;
  t.push_back(Term{std::move(m), mpq_class(1)});
  return Element::from_terms(*this, std::move(t));
}

bool operator==(const Ring& a, const Ring& b) {
  if (a.d_ == b.d_) return true;
  return a.d_->coeff == b.d_->coeff && a.d_->modulus == b.d_->modulus && a.d_->vars == b.d_->vars &&
         a.d_->inverted == b.d_->inverted;
}

Ring invert_variable(const Ring& r, std::string_view name) {
  if (r.num_variables() == 0) {
    throw Error(ErrorCode::UnknownVariable, "cannot invert " + std::string(name) + " in scalar ring " + r.to_string());
  }
  return r.invert_variable(name);
}

Ring merge_rings(const Ring& a, const Ring& b) {
  if (a.coeff_kind() != b.coeff_kind() || a.modulus() != b.modulus()) {
    throw Error(ErrorCode::RingMismatch, a.to_string() + " vs " + b.to_string());
  }
  if (a == b) return a;
  std::vector<std::string> extra;
  for (const auto& v : b.variables()) {
    if (!a.variable_index(v)) extra.push_back(v);
  }
  Ring r = extra.empty() ? a : (a.num_variables() == 0 ? Ring::polynomial(a, extra) : a.adjoin(extra));
  for (std::size_t i = 0; i < b.num_variables(); ++i) {
    if (b.is_inverted(i)) r = r.invert_variable(b.variables()[i]);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Element

namespace {

bool less_monomial(const Term& a, const Term& b) { return a.exps < b.exps; }

bool scalar_is_unit(const Ring& r, const mpq_class& c) {
  switch (r.coeff_kind()) {
    case CoeffKind::Integers: return c == 1 || c == -1;
    case CoeffKind::Rationals: return c != 0;
    case CoeffKind::PrimeField:
    case CoeffKind::ModularRing: {
      mpz_class g;
      mpz_class num = c.get_num();
      mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), r.modulus().get_mpz_t());
      return g == 1;
    }
  }
  return false;
}

mpq_class scalar_inverse(const Ring& r, const mpq_class& c) {
  if (!scalar_is_unit(r, c)) throw Error(ErrorCode::NotAUnit, c.get_str() + " is not a unit in " + r.to_string());
  return r.normalize_scalar(mpq_class(1) / c);
}

bool monomial_is_invertible(const Ring& r, const Monomial& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] != 0 && !r.is_inverted(i)) return false;
  }
  return true;
}

std::vector<mpz_class> prime_factors(mpz_class n) {
  std::vector<mpz_class> out;
  for (mpz_class p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// Image of the element modulo a prime p dividing the modulus.
std::vector<Term> reduce_mod(const std::vector<Term>& terms, const mpz_class& p) {
  std::vector<Term> out;
  for (const auto& t : terms) {
    mpz_class c = t.coeff.get_num() % p;
    if (c < 0) c += p;
    if (c != 0) out.push_back(Term{t.exps, mpq_class(c)});
  }
  return out;
}

Monomial negate(const Monomial& m) {
  Monomial r(m);
  for (auto& e : r) e = -e;
  return r;
}

}  // namespace

Element Element::from_terms(const Ring& ring, std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), less_monomial);
  Element out(ring);
  out.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.terms_.empty() && out.terms_.back().exps == t.exps) {
      out.terms_.back().coeff += t.coeff;
    } else {
      out.terms_.push_back(std::move(t));
    }
  }
  std::vector<Term> kept;
  kept.reserve(out.terms_.size());
  for (auto& t : out.terms_) {
    mpq_class c = ring.normalize_scalar(t.coeff);
    if (c == 0) continue;
    for (std::size_t i = 0; i < t.exps.size(); ++i) {
      if (t.exps[i] < 0 && !ring.is_inverted(i)) {
        throw Error(ErrorCode::NotAUnit,
                    "negative power of non-inverted variable " + ring.variables()[i] + " in " + ring.to_string());
      }
    }
    kept.push_back(Term{std::move(t.exps), std::move(c)});
  }
  out.terms_ = std::move(kept);
  return out;
}

bool Element::is_one() const {
  if (terms_.size() != 1) return false;
  for (int e : terms_[0].exps) {
    if (e != 0) return false;
  }
  return terms_[0].coeff == 1;
}

std::optional<mpq_class> Element::constant_value() const {
  if (terms_.empty()) return mpq_class(0);
  if (terms_.size() != 1) return std::nullopt;
  for (int e : terms_[0].exps) {
    if (e != 0) return std::nullopt;
  }
  return terms_[0].coeff;
}

bool Element::is_unit() const {
  if (terms_.empty()) return false;
  if (ring_.coeff_kind() != CoeffKind::ModularRing) {
    return terms_.size() == 1 && scalar_is_unit(ring_, terms_[0].coeff) &&
           monomial_is_invertible(ring_, terms_[0].exps);
  }
  // Z/n: unit iff the image modulo every prime divisor is a unit monomial.
  for (const auto& p : prime_factors(ring_.modulus())) {
    auto red = reduce_mod(terms_, p);
    if (red.size() != 1 || !monomial_is_invertible(ring_, red[0].exps)) return false;
  }
  return true;
}

Element Element::inverse() const {
  if (!is_unit()) throw Error(ErrorCode::NotAUnit, to_string() + " is not a unit in " + ring_.to_string());
  if (terms_.size() == 1) {
    const Term& t = terms_[0];
    if (ring_.coeff_kind() != CoeffKind::ModularRing || scalar_is_unit(ring_, t.coeff)) {
      std::vector<Term> out;
      out.push_back(Term{negate(t.exps), scalar_inverse(ring_, t.coeff)});
      return from_terms(ring_, std::move(out));
    }
  }
  // Z/n with zero divisors: build an inverse modulo rad(n) from CRT
  // idempotents, then lift by Newton iteration (1 - xy is nilpotent).
  const mpz_class& n = ring_.modulus();
  std::vector<Term> approx;
  for (const auto& p : prime_factors(n)) {
    mpz_class pk = 1;
    mpz_class rest = n;
    while (rest % p == 0) {
      rest /= p;
      pk *= p;
    }
    mpz_class inv_rest;
    if (rest == 1) {
      inv_rest = 1;
    } else {
      mpz_invert(inv_rest.get_mpz_t(), rest.get_mpz_t(), pk.get_mpz_t());
    }
    mpz_class idem = (rest * inv_rest) % n;
    auto red = reduce_mod(terms_, p);
    mpz_class cinv;
    mpz_class c = red[0].coeff.get_num();
    mpz_invert(cinv.get_mpz_t(), c.get_mpz_t(), p.get_mpz_t());
    approx.push_back(Term{negate(red[0].exps), mpq_class(idem * cinv)});
  }
  Element y = from_terms(ring_, std::move(approx));
  const Element two = ring_.from_int(2);
  for (int iter = 0; iter < 128; ++iter) {
    Element xy = *this * y;
    if (xy.is_one()) return y;
    y = y * (two - xy);
  }
  throw Error(ErrorCode::NotAUnit, "inverse lifting did not converge for " + to_string());
}

Element Element::divide_by_unit(const Element& unit) const { return *this * unit.inverse(); }

Element Element::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  Element result = ring_.one();
  Element base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

namespace {

void check_scalar_map(const Ring& from, const Ring& to) {
  if (from.coeff_kind() == to.coeff_kind() && from.modulus() == to.modulus()) return;
  if (from.coeff_kind() == CoeffKind::Integers) return;
  // Q maps wherever its denominators are units; normalize_scalar enforces it.
  if (from.coeff_kind() == CoeffKind::Rationals) return;
  throw Error(ErrorCode::RingMismatch, "no scalar map from " + from.to_string() + " to " + to.to_string());
}

}  // namespace

Element Element::substitute(const Ring& target, std::span<const Element> values) const {
  if (values.size() != ring_.num_variables()) {
    throw Error(ErrorCode::DimensionMismatch, "substitution needs one value per variable");
  }
  check_scalar_map(ring_, target);
  for (const auto& v : values) {
    if (v.ring() != target) throw Error(ErrorCode::RingMismatch, "substitution value not in target ring");
  }
  Element out(target);
  for (const auto& t : terms_) {
    Element term = target.from_rational(t.coeff);
    for (std::size_t i = 0; i < t.exps.size() && !term.is_zero(); ++i) {
      if (t.exps[i] != 0) term = term * values[i].pow(t.exps[i]);
    }
    out = out + term;
  }
  return out;
}

Element Element::coerce(const Ring& target) const {
  if (ring_ == target) return *this;
  check_scalar_map(ring_, target);
  std::vector<std::size_t> map(ring_.num_variables());
  for (std::size_t i = 0; i < ring_.num_variables(); ++i) {
    auto idx = target.variable_index(ring_.variables()[i]);
    bool used = std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.exps[i] != 0; });
    if (!idx) {
      if (used) {
        throw Error(ErrorCode::UnknownVariable, ring_.variables()[i] + " is not a variable of " + target.to_string());
      }
      map[i] = SIZE_MAX;
    } else {
      map[i] = *idx;
    }
  }
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m(target.num_variables(), 0);
    for (std::size_t i = 0; i < t.exps.size(); ++i) {
      if (map[i] != SIZE_MAX) m[map[i]] = t.exps[i];
    }
    out.push_back(Term{std::move(m), t.coeff});
  }
  return from_terms(target, std::move(out));
}

Element Element::operator-() const {
  Element out(*this);
  for (auto& t : out.terms_) t.coeff = ring_.normalize_scalar(-t.coeff);
  return out;
}

Element operator+(const Element& a, const Element& b) {
  if (a.ring_ != b.ring_) throw Error(ErrorCode::RingMismatch, a.ring_.to_string() + " + " + b.ring_.to_string());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  Element out(a.ring_);
  out.terms_.reserve(a.terms_.size() + b.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < a.terms_.size() || j < b.terms_.size()) {
    if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].exps < b.terms_[j].exps)) {
      out.terms_.push_back(a.terms_[i++]);
    } else if (i == a.terms_.size() || b.terms_[j].exps < a.terms_[i].exps) {
      out.terms_.push_back(b.terms_[j++]);
    } else {
      mpq_class c = a.ring_.normalize_scalar(a.terms_[i].coeff + b.terms_[j].coeff);
      if (c != 0) out.terms_.push_back(Term{a.terms_[i].exps, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

Element operator-(const Element& a, const Element& b) { return a + (-b); }

Element operator*(const Element& a, const Element& b) {
  if (a.ring_ != b.ring_) throw Error(ErrorCode::RingMismatch, a.ring_.to_string() + " * " + b.ring_.to_string());
  if (a.is_zero() || b.is_zero()) return Element(a.ring_);
  if (a.terms_.size() == 1 && b.terms_.size() == 1 && a.ring_.num_variables() == 0) {
    mpq_class c = a.ring_.normalize_scalar(a.terms_[0].coeff * b.terms_[0].coeff);
    Element out(a.ring_);
    if (c != 0) out.terms_.push_back(Term{Monomial{}, std::move(c)});
    return out;
  }
  std::vector<Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      Monomial m(s.exps);
      for (std::size_t k = 0; k < m.size(); ++k) m[k] += t.exps[k];
      prod.push_back(Term{std::move(m), s.coeff * t.coeff});
    }
  }
  return Element::from_terms(a.ring_, std::move(prod));
}

bool operator==(const Element& a, const Element& b) {
  if (a.ring_ != b.ring_) return false;
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].exps != b.terms_[i].exps || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

bool is_unit(const Element& x) { return x.is_unit(); }

std::string Element::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const Term& t = *it;
    mpq_class c = t.coeff;
    bool negative = c < 0;
    if (negative) c = -c;
    std::string factors;
    for (std::size_t i = 0; i < t.exps.size(); ++i) {
      if (t.exps[i] == 0) continue;
      if (!factors.empty()) factors += "*";
      factors += ring_.variables()[i];
      if (t.exps[i] != 1) factors += "^" + std::to_string(t.exps[i]);
    }
    std::string body;
    if (factors.empty()) {
      body = c.get_str();
    } else if (c == 1) {
      body = factors;
    } else {
      body = c.get_str() + "*" + factors;
    }
    if (first) {
      out += negative ? "-" + body : body;
    } else {
      out += negative ? "-" : "+";
      out += body;
    }
    first = false;
  }
  return out;
}

namespace {

class EntryParser {
 public:
  EntryParser(const Ring& ring, std::string_view text) : ring_(ring), s_(text) {}

  Element parse() {
    skip_ws();
    if (pos_ == s_.size()) fail("empty entry");
    std::vector<Term> terms;
    bool negative = false;
    if (peek() == '+' || peek() == '-') {
      negative = peek() == '-';
      ++pos_;
    }
    for (;;) {
      Term t = parse_term();
      if (negative) t.coeff = -t.coeff;
      terms.push_back(std::move(t));
      skip_ws();
      if (pos_ == s_.size()) break;
      char c = peek();
      if (c != '+' && c != '-') fail(std::string("unexpected '") + c + "'");
      negative = c == '-';
      ++pos_;
    }
    try {
      return Element::from_terms(ring_, std::move(terms));
    } catch (const Error& e) {
      fail(e.what());
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseError,
                "at position " + std::to_string(pos_) + " in \"" + std::string(s_) + "\": " + msg);
  }

  char peek() const { return s_[pos_]; }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  mpz_class parse_digits() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return mpz_class(std::string(s_.substr(start, pos_ - start)));
  }

  Term parse_term() {
    Term t{Monomial(ring_.num_variables(), 0), mpq_class(1)};
    bool have_factor = false;
    for (;;) {
      skip_ws();
      if (pos_ == s_.size()) fail("expected a factor");
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        mpz_class num = parse_digits();
        mpz_class den = 1;
        skip_ws();
        if (pos_ < s_.size() && peek() == '/') {
          ++pos_;
          skip_ws();
          den = parse_digits();
          if (den == 0) fail("zero denominator");
        }
        std::size_t at = pos_;
        mpq_class q(num, den);
        q.canonicalize();
        if (ring_.coeff_kind() == CoeffKind::Integers && q.get_den() != 1) {
          pos_ = at;
          fail("non-integral coefficient " + q.get_str() + " in ZZ");
        }
        try {
          ring_.normalize_scalar(q);
        } catch (const Error& e) {
          fail(e.what());
        }
        t.coeff *= q;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                    s_[pos_] == '\'')) {
          ++pos_;
        }
        std::string name(s_.substr(start, pos_ - start));
        auto idx = ring_.variable_index(name);
        if (!idx) {
          pos_ = start;
          fail("unknown variable " + name + " for ring " + ring_.to_string());
        }
        long e = 1;
        skip_ws();
        if (pos_ < s_.size() && peek() == '^') {
          ++pos_;
          skip_ws();
          bool neg = false;
          if (pos_ < s_.size() && peek() == '-') {
            neg = true;
            ++pos_;
          }
          mpz_class d = parse_digits();
          if (!d.fits_sint_p() || d > 1000000) fail("exponent too large");
          e = d.get_si();
          if (neg) e = -e;
        }
        if (e < 0 && !ring_.is_inverted(*idx)) {
          pos_ = start;
          fail("negative exponent on non-inverted variable " + name);
        }
        t.exps[*idx] += static_cast<int>(e);
      } else {
        fail(std::string("unexpected '") + c + "'");
      }
      have_factor = true;
      skip_ws();
      if (pos_ < s_.size() && peek() == '*') {
        ++pos_;
        continue;
      }
      break;
    }
    if (!have_factor) fail("empty term");
    return t;
  }

  const Ring& ring_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Element Element::parse(const Ring& ring, std::string_view text) { return EntryParser(ring, text).parse(); }

}  // namespace hermitk
