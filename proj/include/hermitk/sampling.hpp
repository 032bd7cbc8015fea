#pragma once

#include <random>

#include "hermitk/matrix.hpp"

namespace hermitk {

using Rng = std::mt19937_64;

/// Uniform scalar with |numerator| <= bound (residues are uniform over the
/// whole ring for F_p and Z/n). Over Q a denominator in [1, bound] is drawn.
Element random_scalar(const Ring& ring, Rng& rng, long bound = 5);

/// Random element with up to `max_terms` terms and exponents in
/// [-max_exp, max_exp] for inverted variables, [0, max_exp] otherwise.
Element random_element(const Ring& ring, Rng& rng, long bound = 5, int max_terms = 3, int max_exp = 2);

Matrix random_matrix(const Ring& ring, std::size_t rows, std::size_t cols, Rng& rng, long bound = 5);

/// Product of random elementary matrices (and, over fields, a random
/// invertible diagonal); determinant is a unit by construction.
Matrix random_unimodular(const Ring& ring, std::size_t n, Rng& rng, int steps = 0);

/// M^T J M for the standard alternating J of the given even size and a
/// random unimodular M.
Matrix random_alternating_unimodular(const Ring& ring, std::size_t size, Rng& rng);

/// Product of `count` random symplectic transvections of size 2n.
Matrix random_symplectic(const Ring& ring, std::size_t n, Rng& rng, int count = 6);

}  // namespace hermitk
