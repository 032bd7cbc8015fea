#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hermitk/matrix.hpp"

namespace hermitk {

/// Bounded complex of free modules in degrees lo..hi. d(k) maps degree k to
/// degree k-1. d(k) d(k+1) = 0 is checked by `make`; there is no other
/// constructor.
class ChainComplex {
 public:
  /// differentials[i] is d(lo + 1 + i), of shape rank(lo+i) x rank(lo+1+i).
  /// Throws DimensionMismatch, RingMismatch, InvariantViolated.
  static ChainComplex make(Ring ring, int lo, std::vector<std::size_t> ranks, std::vector<Matrix> differentials);

  const Ring& ring() const { return ring_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(ranks_.size()) - 1; }
  /// 0 outside lo..hi.
  std::size_t rank(int k) const;
  const std::vector<std::size_t>& ranks() const { return ranks_; }
  /// Zero matrix of the right shape outside the stored range.
  Matrix d(int k) const;
  const std::vector<Matrix>& differentials() const { return diffs_; }

  /// Same complex with every entry mapped into `target`.
  ChainComplex coerce(const Ring& target) const;

  friend bool operator==(const ChainComplex& a, const ChainComplex& b);

 private:
  ChainComplex(Ring ring, int lo, std::vector<std::size_t> ranks, std::vector<Matrix> diffs)
      : ring_(std::move(ring)), lo_(lo), ranks_(std::move(ranks)), diffs_(std::move(diffs)) {}
  Ring ring_;
  int lo_;
  std::vector<std::size_t> ranks_;
  std::vector<Matrix> diffs_;
};

/// Degree-preserving map between complexes on the same degree range;
/// g(k-1) d(k) = d'(k) g(k) is checked by `make`.
class ChainMap {
 public:
  /// components[i] acts in degree lo + i. Throws DimensionMismatch,
  /// InvariantViolated naming the first square that fails.
  static ChainMap make(ChainComplex source, ChainComplex target, std::vector<Matrix> components);

  const ChainComplex& source() const { return source_; }
  const ChainComplex& target() const { return target_; }
  const Matrix& component(int k) const { return components_[static_cast<std::size_t>(k - source_.lo())]; }
  const std::vector<Matrix>& components() const { return components_; }

 private:
  ChainMap(ChainComplex s, ChainComplex t, std::vector<Matrix> c)
      : source_(std::move(s)), target_(std::move(t)), components_(std::move(c)) {}
  ChainComplex source_;
  ChainComplex target_;
  std::vector<Matrix> components_;
};

/// Degree k is the dual of degree n-k, on the dual basis listed in reverse;
/// the differential in degree k is -Rev d(n-k+1)^T Rev. Dualizing twice with
/// the same n returns the complex unchanged.
ChainComplex dual_shifted(const ChainComplex& c, int n);

/// Identity components from c to dual_shifted(dual_shifted(c, n), n).
ChainMap double_dual_identification(const ChainComplex& c, int n);

/// (-1)^(n(n+1)/2).
int duality_sign(int n);

/// Form phi: C -> dual_shifted(C, n) with n = lo + hi. `make` checks that
/// phi is a chain map, that every component is invertible, and that
/// Rev phi(n-k)^T Rev = epsilon phi(k) in every degree.
class DualityForm {
 public:
  /// Throws DimensionMismatch, NotInvertible, InvariantViolated.
  static DualityForm make(const ChainComplex& c, int shift, int epsilon, std::vector<Matrix> components);

  const ChainComplex& complex() const { return map_.source(); }
  const ChainComplex& dual() const { return map_.target(); }
  int shift() const { return shift_; }
  int epsilon() const { return epsilon_; }
  const Matrix& component(int k) const { return map_.component(k); }
  const std::vector<Matrix>& components() const { return map_.components(); }
  const ChainMap& map() const { return map_; }

 private:
  DualityForm(ChainMap m, int shift, int epsilon) : map_(std::move(m)), shift_(shift), epsilon_(epsilon) {}
  ChainMap map_;
  int shift_;
  int epsilon_;
};

/// Increasing index sets of size k in {0..n-1}, lexicographic.
std::vector<std::vector<std::size_t>> wedge_basis(std::size_t n, std::size_t k);

/// Koszul complex on the named variables, adjoined to base (names already
/// present are reused). Degree k is Lambda^k on the lexicographic wedge
/// basis, d(e_S) = sum_j (-1)^j t_{s_j} e_{S \ s_j}.
ChainComplex koszul_complex(const Ring& base, const std::vector<std::string>& variables);
/// Variables "t" for n = 1, t1..tn otherwise.
ChainComplex koszul_complex(std::size_t n, const Ring& base);
std::vector<std::string> default_koszul_variables(std::size_t n);

/// Stored degree k carries the exterior power that sits in degree n-k of
/// the complex graded by Lambda^(n-i) of the dual bundle; pairs (k, n-k).
std::vector<std::pair<int, int>> koszul_relabeling(std::size_t n);

/// Theta form on a Koszul complex of rank n: component k sends x to
/// y -> c_k <x ^ y> with c_k = (-1)^(k(k+1)/2), <.> the coefficient of the
/// top wedge. epsilon = duality_sign(n).
DualityForm theta_form(const ChainComplex& koszul, std::size_t n);

struct FormedComplex {
  ChainComplex complex;
  DualityForm form;
};

/// (koszul_complex, theta_form) on the given variables.
FormedComplex thom_class(const Ring& base, const std::vector<std::string>& variables);
/// Rank one: "t", differential t, components (-1, 1) in degrees (1, 0).
FormedComplex thom_class_trivial_line(const Ring& base, const std::string& variable = "t");

/// Rank one in degree 0 with form <1>.
FormedComplex unit_complex(const Ring& ring);

/// Degree-raising maps h(k): degree k -> k+1 with d h + h d = id in every
/// degree, checked by the constructing function.
struct ContractingHomotopy {
  ChainComplex complex;
  std::vector<Matrix> components;
};

/// h(w) = t_i^-1 e_i ^ w on koszul_complex(n, base) with t_i inverted;
/// i is 1-based. Throws DimensionMismatch for i outside 1..n.
ContractingHomotopy contracting_homotopy(std::size_t n, std::size_t i, const Ring& base);
/// Same for an explicit variable list; i is 1-based.
ContractingHomotopy contracting_homotopy(const Ring& base, const std::vector<std::string>& variables, std::size_t i);

/// Checks d h + h d = id; returns the first failing degree.
std::optional<int> homotopy_defect(const ChainComplex& c, const std::vector<Matrix>& h);

/// Tensor complex with d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy. Degree-k
/// summands C_a (x) D_(k-a) are ordered by a ascending, Kronecker order
/// within. Variable names present in both rings get suffixes "0" and "1".
/// The form is sign * theta_a (x) theta_b with sign (-1)^(n1 |y|).
FormedComplex tensor_with_forms(const FormedComplex& a, const FormedComplex& b);

/// Permutation components from (a (x) b) (x) c to a (x) (b (x) c); checked
/// as a chain map and as an isometry of the forms.
ChainMap associator(const FormedComplex& a, const FormedComplex& b, const FormedComplex& c);

/// Chart complex R[t0,t1]: d1 = [t0 t1], d2 = (-t1, t0)^T, form components
/// -1, diag(-1, 1), 1 in degrees 2, 1, 0; the dual row reads (-t1, -t0).
FormedComplex borel_class_chart(const Ring& base);

/// Signed permutations phi(k) with phi a chain isomorphism from the source
/// onto the target and Rev phi(n-k)^T Rev theta'(k) phi(k) = theta(k).
struct FormIsomorphism {
  ChainMap map;
};

/// Exhaustive search over signed permutations in each degree. Throws
/// NoMatchFound.
FormIsomorphism find_form_isomorphism(const FormedComplex& source, const FormedComplex& target);

/// th(t0) (x) th(t1) onto borel_class_chart.
FormIsomorphism compare_borel_thom(const Ring& base);

}  // namespace hermitk
