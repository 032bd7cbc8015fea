#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hermitk/forms.hpp"
#include "hermitk/sampling.hpp"
#include "hermitk/sp_group.hpp"

namespace hermitk {

/// Affine chart of Gr(r, n): subspaces whose rows at the pivot positions
/// form the identity. Pivots are 1-based and increasing. Coordinates are
/// x{row}{col} (1-based, separated by '_' once an index exceeds 9) for the
/// non-pivot rows, row-major.
struct Chart {
  std::size_t r = 0;
  std::size_t n = 0;
  std::vector<std::size_t> pivots;
  Ring base;
  Ring ring;
  std::vector<std::string> variables;
};

/// Throws BadPivot.
Chart make_chart(std::size_t r, std::size_t n, std::vector<std::size_t> pivots, const Ring& base);

/// Pivots 1..r.
Chart leading_chart(std::size_t r, std::size_t n, const Ring& base);

/// Basis matrix n x r over the chart ring with identity pivot rows and the
/// ambient form it restricts.
struct TautologicalFamily {
  Chart chart;
  Matrix basis;
  BilinearSpace ambient;

  /// basis^T gram basis over the chart ring.
  Matrix restricted_gram() const;
};

/// Throws BadPivot, DimensionMismatch (ambient rank != n), RingMismatch.
TautologicalFamily tautological_on_chart(std::size_t r, std::size_t n, std::vector<std::size_t> pivots,
                                         const BilinearSpace& ambient);

/// One value in the base ring per chart coordinate.
struct PointSample {
  Chart chart;
  std::vector<Element> values;
};

/// Throws DimensionMismatch, RingMismatch.
PointSample make_sample(const Chart& chart, std::vector<Element> values);
PointSample origin(const Chart& chart);
PointSample random_sample(const Chart& chart, Rng& rng);

/// Basis of the fiber at p, over the base ring.
Matrix evaluate_basis(const TautologicalFamily& f, const PointSample& p);

/// Restricted Gram at p has a unit determinant.
bool form_membership(const TautologicalFamily& f, const PointSample& p);

/// U + U^perp at a point, with U^perp the image of I - B (B^T G B)^-1 B^T G.
struct OrthogonalDecomposition {
  BilinearSpace ambient;
  Matrix u_basis;
  Matrix complement_basis;
  BilinearSpace u;
  BilinearSpace complement;
  /// u + complement -> ambient.
  Isometry witness;
};

/// Throws NotInMembershipLocus, NotAField.
OrthogonalDecomposition orthogonal_complement(const TautologicalFamily& f, const PointSample& p);

/// Decomposition with U spanned by the given columns of a standard ambient
/// space; the complement is spanned by the remaining coordinates.
OrthogonalDecomposition coordinate_decomposition(const BilinearSpace& ambient, const std::vector<std::size_t>& columns);

/// Random point of the leading chart inside the membership locus.
OrthogonalDecomposition random_member(const BilinearSpace& ambient, std::size_t r, Rng& rng);

struct GaSampleCheck {
  std::vector<long> point;  // a1, a2, b1, b2, r
  long t = 0;
  bool moved = false;
};

/// Action t.(a, b, r) = (a, b + t a, r + t (1 - phi(a, b))), phi = a1 b2 - a2 b1,
/// over Q[a1,a2,b1,b2,r,s,t].
struct GaActionReport {
  bool unit_law = false;
  bool action_law = false;
  bool phi_invariant = false;
  /// t.x - x = (0, t a, t (1 - phi)) coefficientwise.
  bool fixed_point_equations = false;
  std::vector<GaSampleCheck> samples;

  bool ok() const;
};

/// The fixed point a = (1,0), b = 0, r = 0, t = 1 comes first, then `samples`
/// random points over F_101 off the locus a = 0 and phi = 1 with t != 0.
GaActionReport ga_action_verify(std::size_t samples = 20, std::uint64_t seed = 1);

/// Largest n accepted by the structure-subspace constructions.
inline constexpr std::size_t kMaxStructureScale = 2;

enum class StructureKind { Hgr, Rgr };

/// Plane permutation of the standard target moving the image onto the
/// leading planes, with its transvection factors and I + tN paths. The paths
/// live in Sp, also when the target is symmetric.
struct FrontPermutation {
  SymplecticMatrix permutation;
  Isometry isometry;
  std::vector<Transvection> factors;
  HomotopyPath homotopy;
};

/// Subspace (X (x) U2) + (H^(k2) (x) U2^perp) + (X^perp (x) H_-) + (H^(k4) (x) H_-)
/// of the ambient (P (x) U2) + (P (x) U2^perp) + (P (x) H_-) + (P (x) H_-),
/// where P is H_-^(2n) for HGr and H_+^n for RGr. The ambient is split into
/// blocks (summand s, plane p) of rank 4; the distinguished blocks come first
/// in the standard target, each in (s, p) order.
struct StructureSubspace {
  StructureKind kind;
  std::size_t n;
  long i;
  BilinearSpace ambient;
  Isometry ambient_to_standard;
  Matrix subspace_basis;
  /// subspace_basis in the coordinates of the standard target.
  Matrix image_basis;
  BilinearSpace restricted;
  Isometry restricted_to_standard;
  /// slot[b] for block b = s * planes + p.
  std::vector<std::size_t> slots;
  /// Planes of the standard target spanned by the image, when it is a
  /// coordinate subspace.
  std::optional<std::vector<std::size_t>> coordinate_planes;
  std::optional<FrontPermutation> to_front;

  /// Image equals the leading half of the standard target.
  bool distinguished_pattern() const;
};

/// n in 1..kMaxStructureScale, |i| <= n. Throws UnsupportedScale,
/// DimensionMismatch, NotInMembershipLocus.
StructureSubspace structure_subspace_hgr(std::size_t n, long i, const OrthogonalDecomposition& u,
                                         const OrthogonalDecomposition& hp1);
/// n even in 2..kMaxStructureScale, |i| <= n, i = n mod 2.
StructureSubspace structure_subspace_rgr(std::size_t n, long i, const OrthogonalDecomposition& v,
                                         const OrthogonalDecomposition& hp1);

/// Distinguished points: the leading half of H_-^(2n), H_+^n, and H_- + 0 in H_-^2.
OrthogonalDecomposition distinguished_hgr(std::size_t n, const Ring& ring);
OrthogonalDecomposition distinguished_rgr(std::size_t n, const Ring& ring);
OrthogonalDecomposition distinguished_hp1(const Ring& ring);

/// U -> U + H_- along H_-^n + H_-^n -> (H_-^n + H_-) + (H_-^n + H_-), the new
/// plane joining U and the second new plane joining U^perp.
OrthogonalDecomposition stabilize_hgr_point(const OrthogonalDecomposition& u);

struct StabilizationCheck {
  /// Recorded plane permutation of the level n+1 target onto the stabilized
  /// level-n target (V -> V + H_+^8 in (H_+^8n + H_+^8) + (H_+^8n + H_+^8)).
  SymplecticMatrix permutation;
  bool spans_agree = false;
};

StabilizationCheck check_hgr_stabilization(std::size_t n, long i, const OrthogonalDecomposition& u,
                                           const OrthogonalDecomposition& hp1);

}  // namespace hermitk
