#pragma once

#include <string>
#include <vector>

#include "hermitk/matrix.hpp"

namespace hermitk {

/// Gram of the standard alternating form on 2n coordinates, planes
/// interleaved as (e_0, f_0, e_1, f_1, ...).
Matrix standard_j(std::size_t n, const Ring& ring);

/// Exact test m^T J m = J. Throws NonSquare, OddSize.
bool is_symplectic(const Matrix& m);

/// Matrix preserving the standard alternating form. Only constructible
/// through `from`, so every instance has been verified.
class SymplecticMatrix {
 public:
  /// Throws NonSquare, OddSize, NotSymplectic.
  static SymplecticMatrix from(Matrix m);
  static SymplecticMatrix identity(std::size_t size, const Ring& ring);

  const Matrix& matrix() const { return m_; }
  const Ring& ring() const { return m_.ring(); }
  std::size_t size() const { return m_.rows(); }

  friend bool operator==(const SymplecticMatrix& a, const SymplecticMatrix& b) { return a.m_ == b.m_; }

 private:
  explicit SymplecticMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// a + [[0,-1],[1,0]].
SymplecticMatrix stabilize(const SymplecticMatrix& a);

/// Plane permutation P with P (B + A) P^-1 = A + B for A of size 2n and B of
/// size 2m: the first 2m coordinates move to the end.
SymplecticMatrix block_swap(std::size_t n, std::size_t m, const Ring& ring);

/// x -> x + lambda <x,v> v with <x,v> = x^T J v.
struct Transvection {
  Matrix v;
  Element lambda;

  /// I + N with N = lambda v (Jv)^T and N^2 = 0.
  Matrix nilpotent() const;
  Matrix matrix() const;
};

/// Ordered product of the factor matrices; the identity of the given size
/// for an empty list.
Matrix product(const std::vector<Transvection>& factors, std::size_t size, const Ring& ring);

/// Factors a plane-wise signed permutation: each 2x2 block is zero or one
/// of I, -I, R, -R with R = [[0,-1],[1,0]], one nonzero block per block row
/// and column. Plane swaps use a fixed seven-factor word, R and -R three
/// factors each. Throws UnsupportedInput outside that class.
std::vector<Transvection> factor_into_transvections(const SymplecticMatrix& p);

/// Paths F_k(t) = I + t N_k over ring[parameter]. Constructed only by
/// homotopy_witness, which checks F^T J F = J coefficientwise, F(0) = I and
/// F(1) = the factor.
struct HomotopyPath {
  std::vector<Transvection> base;
  std::size_t size = 0;
  Ring base_ring;
  std::string parameter;
  /// base_ring with the parameter adjoined last.
  Ring ring;
  std::vector<Matrix> paths;

  /// Product of the paths at a value in base_ring.
  Matrix evaluate(const Element& value) const;
};

/// The parameter is "t" unless the ring already uses it; then "t_", "t__", ...
/// Throws RingMismatch, DimensionMismatch; InvariantViolated if a check fails.
HomotopyPath homotopy_witness(const std::vector<Transvection>& factors, std::size_t size, const Ring& ring);

}  // namespace hermitk
