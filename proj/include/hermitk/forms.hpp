#pragma once

#include <optional>
#include <string_view>

#include "hermitk/matrix.hpp"

namespace hermitk {

enum class FormFlavor { Symmetric, Alternating };

std::string_view to_string(FormFlavor f);
/// Sym*Sym = Alt*Alt = Sym, mixed products are Alt.
FormFlavor tensor_flavor(FormFlavor a, FormFlavor b);

/// Square Gram matrix satisfying its flavor's shape condition. Alternating
/// means zero diagonal and G^T = -G; the diagonal test keeps it correct in
/// characteristic 2.
class BilinearSpace {
 public:
  /// Throws NonSquare, NotSymmetric or NotAlternating.
  BilinearSpace(FormFlavor flavor, Matrix gram);

  FormFlavor flavor() const { return flavor_; }
  const Matrix& gram() const { return gram_; }
  const Ring& ring() const { return gram_.ring(); }
  std::size_t rank() const { return gram_.rows(); }

  bool is_unimodular() const;
  /// Throws NotUnimodular.
  void require_unimodular() const;

  /// Value of the form on two column vectors.
  Element pair(const Matrix& x, const Matrix& y) const;

  friend bool operator==(const BilinearSpace& a, const BilinearSpace& b) {
    return a.flavor_ == b.flavor_ && a.gram_ == b.gram_;
  }

 private:
  FormFlavor flavor_;
  Matrix gram_;
};

/// Certified isometry: witness is invertible and
/// witness^T * gram(source) * witness = gram(target). Only constructible
/// through check_isometry, so every instance has been verified.
class Isometry {
 public:
  const BilinearSpace& source() const { return source_; }
  const BilinearSpace& target() const { return target_; }
  const Matrix& witness() const { return witness_; }

  /// this: A -> B, next: B -> C; witness is the product.
  Isometry then(const Isometry& next) const;
  Isometry inverse() const;

  friend Isometry check_isometry(const BilinearSpace& a, const BilinearSpace& b, const Matrix& t);

 private:
  Isometry(BilinearSpace s, BilinearSpace t, Matrix w)
      : source_(std::move(s)), target_(std::move(t)), witness_(std::move(w)) {}
  BilinearSpace source_;
  BilinearSpace target_;
  Matrix witness_;
};

/// n copies of [[0,1],[1,0]] (Symmetric) or [[0,1],[-1,0]] (Alternating).
BilinearSpace hyperbolic(FormFlavor flavor, std::size_t n, const Ring& ring);
/// Block-diagonal sum. Throws FlavorMismatch, RingMismatch.
BilinearSpace orthogonal_sum(const BilinearSpace& a, const BilinearSpace& b);
/// Kronecker product. Throws RingMismatch.
BilinearSpace tensor_product(const BilinearSpace& a, const BilinearSpace& b);

/// Throws NotInvertible, or CongruenceFails naming the first bad entry.
Isometry check_isometry(const BilinearSpace& a, const BilinearSpace& b, const Matrix& t);

/// Block sum of two isometries.
Isometry orthogonal_sum(const Isometry& a, const Isometry& b);
/// Kronecker product of two isometries.
Isometry tensor_product(const Isometry& a, const Isometry& b);

/// Strictly lower-triangular L with m = L - L^T. Throws NotAlternating.
Matrix lower_decompose(const Matrix& m);

/// Isometry from diag(S, -S) to [[0,-I],[I,0]] with witness
/// [[L, I],[L^T, I]], L = lower_decompose(S^-1).
/// Throws NotAlternating, NotUnimodular.
Isometry embed_into_hyperbolic(const BilinearSpace& s);

/// Symplectic Gram-Schmidt. Pivot is the first unit entry (row-major) of
/// the residual Gram; witness columns are e1, f1, e2, f2, ...
/// Throws NoUnitPivot carrying the residual block.
Isometry standardize_symplectic(const BilinearSpace& s);

/// Alternating [[0, I_q],[-I_q, 0]].
BilinearSpace hyperbolic_of_rank(std::size_t q_rank, const Ring& ring);
/// hyperbolic_of_rank(q) -> hyperbolic(Alternating, q): columns e1, f1, ...
Isometry hyperbolic_of_rank_to_standard(std::size_t q_rank, const Ring& ring);
/// [[0, -I_k],[I_k, 0]] -> hyperbolic(Alternating, k): columns f1, e1, f2, e2, ...
Isometry lagrangian_target_to_standard(std::size_t k, const Ring& ring);

/// When the Gram has exactly one nonzero entry per row and that entry is
/// an off-diagonal unit, pair each index with its partner and return the
/// isometry onto hyperbolic(flavor, rank/2). Planes are ordered by their
/// smaller index.
std::optional<Isometry> pair_to_hyperbolic(const BilinearSpace& s);

/// H_-^n (x) H_-^m -> H_+^{2nm}.
Isometry tensor_hyperbolic_isometry(std::size_t n, std::size_t m, const Ring& ring);

}  // namespace hermitk
