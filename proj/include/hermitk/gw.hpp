#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hermitk/forms.hpp"

namespace hermitk {

/// Isometry of s onto a diagonal Gram. Degenerate inputs get their zero
/// entries last. Throws NotAField, CharacteristicTwo, NotSymmetric.
Isometry diagonalize_symmetric(const BilinearSpace& s);

struct WittDecomposition {
  std::size_t hyperbolic_count = 0;
  BilinearSpace anisotropic;
  /// s -> hyperbolic(Symmetric, hyperbolic_count) + anisotropic.
  Isometry witness;
};

/// Default coefficient height for the isotropic-vector search over Q.
inline constexpr long kDefaultHeightBound = 50;

/// Split off hyperbolic planes until the residue is anisotropic.
/// Exact over F_p (p odd); over Q exact for definite residues and rank <= 2,
/// otherwise bounded search. Throws SearchExhausted naming the bound.
WittDecomposition witt_decompose(const BilinearSpace& s, long height_bound = kDefaultHeightBound);

/// Isotropic test by exhaustive enumeration of F_p^n. Test oracle for small
/// p and rank; independent of the constructive search.
bool has_isotropic_vector_brute_force(const Matrix& gram);

enum class Verdict { Equal, Distinct, Unknown };

struct IsometryDecision {
  Verdict verdict = Verdict::Unknown;
  /// Present exactly when verdict is Equal.
  std::optional<Isometry> certificate;
  /// Invariant that separated the spaces, or why the question is open.
  std::string reason;
};

/// Ring-gated decision. Distinct verdicts always come from invariants that
/// survive adding hyperbolic planes (rank, unimodularity, determinant square
/// class, signature, discriminant).
IsometryDecision decide_isometry(const BilinearSpace& a, const BilinearSpace& b);

/// Representative of an isometry class. Equality is decided, not structural.
struct IsometryClass {
  BilinearSpace representative;
};

/// Formal difference sum(plus) - sum(minus).
struct GWClass {
  Ring ring;
  FormFlavor flavor;
  std::vector<BilinearSpace> plus;
  std::vector<BilinearSpace> minus;

  GWClass(Ring r, FormFlavor f) : ring(std::move(r)), flavor(f) {}
  static GWClass of(const BilinearSpace& s);
  bool empty() const { return plus.empty() && minus.empty(); }
};

/// Throws FlavorMismatch, RingMismatch.
GWClass gw_add(const GWClass& x, const GWClass& y);
GWClass gw_negate(const GWClass& x);
/// Moves every minus item B to a complement C with B + C hyperbolic,
/// rewrites items that are certified hyperbolic as copies of the plane,
/// then cancels certified-isometric pairs across the sides.
GWClass gw_normalize(const GWClass& x);
/// True when normalize(x - y) is empty.
bool gw_equal(const GWClass& x, const GWClass& y);

struct GWInvariants {
  long virtual_rank = 0;
  /// k with x = k[H] when the normalized class is a multiple of the
  /// hyperbolic plane.
  std::optional<long> hyperbolic_multiple;
  /// Over Q, the signature of the virtual form.
  std::optional<long> signature;
};
GWInvariants invariants(const GWClass& x);

/// [A] - (rank(A)/2 - i)[H_-], normalized. Throws OddRank, NotAlternating.
GWClass ksp0_class(long i, const BilinearSpace& a);

/// True iff a + H^p and b + H^p are certified isometric for some
/// p <= max_stab; false when a stable invariant separates them.
/// Throws Undecidable otherwise.
bool stable_isometry_test(const BilinearSpace& a, const BilinearSpace& b, std::size_t max_stab);

/// b + (-b) -> hyperbolic(flavor, rank b). Alternating uses the hyperbolic
/// embedding; symmetric needs 2 to be a unit. Throws NotUnimodular.
Isometry metabolic_complement(const BilinearSpace& b);

BilinearSpace negated(const BilinearSpace& b);

}  // namespace hermitk
