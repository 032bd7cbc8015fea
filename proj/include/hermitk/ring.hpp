#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hermitk/error.hpp"

namespace hermitk {

/// Scalar domain underneath every ring. Polynomial and localized rings are
/// flat: a scalar domain plus an ordered list of variables.
enum class CoeffKind { Integers, Rationals, PrimeField, ModularRing };

enum class RingKind { Integers, Rationals, PrimeField, ModularRing, Polynomial, Localized };

class Element;

/// Immutable ring descriptor handle. Copies share the descriptor.
///
/// A ring is a scalar domain (Z, Q, F_p or Z/n) together with an ordered
/// variable list and the subset of variables that have been inverted. With
/// no variables the ring is the scalar domain itself; with variables but
/// nothing inverted it is the polynomial ring; otherwise it is the
/// localization at the product of the inverted variables.
class Ring {
 public:
  static Ring integers();
  static Ring rationals();
  /// Throws InvariantViolated if p is not prime.
  static Ring prime_field(std::uint64_t p);
  static Ring modular(std::uint64_t n);
  static Ring polynomial(const Ring& base, std::vector<std::string> variables);

  RingKind kind() const;
  CoeffKind coeff_kind() const { return d_->coeff; }
  /// Characteristic of the scalar domain; 0 for Z and Q.
  const mpz_class& modulus() const { return d_->modulus; }

  const std::vector<std::string>& variables() const { return d_->vars; }
  std::size_t num_variables() const { return d_->vars.size(); }
  bool is_inverted(std::size_t var) const { return d_->inverted[var]; }
  std::optional<std::size_t> variable_index(std::string_view name) const;

  /// The ring with variable `name` additionally inverted. Idempotent.
  Ring invert_variable(std::string_view name) const;
  /// Adjoin fresh variables after the existing ones.
  Ring adjoin(const std::vector<std::string>& names) const;
  /// Scalar domain with all variables dropped.
  Ring scalar_ring() const;

  bool is_field() const;
  /// True for Z, Q, F_p and polynomial/Laurent rings over them.
  bool is_domain() const;

  /// Human-readable name such as "QQ[t0,t1][t0^-1]".
  std::string to_string() const;

  Element zero() const;
  Element one() const;
  Element from_int(long v) const;
  Element from_mpz(const mpz_class& v) const;
  Element from_rational(const mpq_class& v) const;
  Element variable(std::string_view name) const;
  Element variable(std::size_t index) const;

  /// Bring a raw scalar into canonical form for this ring's scalar domain.
  /// Throws NotAUnit when a denominator is not invertible.
  mpq_class normalize_scalar(const mpq_class& v) const;

  friend bool operator==(const Ring& a, const Ring& b);
  friend bool operator!=(const Ring& a, const Ring& b) { return !(a == b); }

 private:
  struct Data {
    CoeffKind coeff = CoeffKind::Integers;
    mpz_class modulus = 0;
    std::vector<std::string> vars;
    std::vector<bool> inverted;
  };
  explicit Ring(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

/// Exponent vector over the ring's variables. Negative entries are allowed
/// only for inverted variables.
using Monomial = std::vector<int>;

struct Term {
  Monomial exps;
  mpq_class coeff;
};

/// Ring element in canonical form: terms sorted by ascending exponent
/// vector, no zero coefficients, every coefficient normalized for the
/// scalar domain. Equality is therefore structural.
class Element {
 public:
  explicit Element(Ring ring) : ring_(std::move(ring)) {}

  const Ring& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  /// Scalar value when the element is a constant.
  std::optional<mpq_class> constant_value() const;

  bool is_unit() const;
  /// Multiplicative inverse; throws NotAUnit.
  Element inverse() const;
  /// Exact quotient by a unit; throws NotAUnit.
  Element divide_by_unit(const Element& unit) const;
  Element pow(long e) const;

  /// Replace every variable by an element of `target`. Values for
  /// variables carrying negative exponents must be units.
  Element substitute(const Ring& target, std::span<const Element> values) const;
  /// Map into another ring with the same or a compatible scalar domain,
  /// matching variables by name.
  Element coerce(const Ring& target) const;

  std::string to_string() const;
  /// Parse the canonical entry grammar (integers, "a/b", and terms
  /// "c*v1^e1*v2^e2" joined by "+"/"-"). Throws ParseError with position.
  static Element parse(const Ring& ring, std::string_view text);

  Element operator-() const;
  friend Element operator+(const Element& a, const Element& b);
  friend Element operator-(const Element& a, const Element& b);
  friend Element operator*(const Element& a, const Element& b);
  Element& operator+=(const Element& b) { return *this = *this + b; }
  Element& operator-=(const Element& b) { return *this = *this - b; }
  Element& operator*=(const Element& b) { return *this = *this * b; }
  friend bool operator==(const Element& a, const Element& b);
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

  /// Internal constructor from raw terms; sorts, combines and normalizes.
  static Element from_terms(const Ring& ring, std::vector<Term> terms);

 private:
  Ring ring_;
  std::vector<Term> terms_;
};

bool is_unit(const Element& x);
Ring invert_variable(const Ring& r, std::string_view name);

/// Ring containing the variables of both inputs (first ring's order, then
/// the new names of the second). Scalar domains must agree.
Ring merge_rings(const Ring& a, const Ring& b);

inline std::ostream& operator<<(std::ostream& os, const Ring& r) { return os << r.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const Element& e) { return os << e.to_string(); }

bool is_prime(std::uint64_t n);

}  // namespace hermitk
