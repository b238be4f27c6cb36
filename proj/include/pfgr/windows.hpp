#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pfgr/bbw.hpp"
#include "pfgr/check.hpp"

// The grade-restriction window: bundles T_{l,m} = Sym^l S^dual (m) on the
// stack [Hom(S,V) x Hom(V, det S) / GL(S)], its two GIT chambers X1 (over
// Gr(2,n)) and X2 (over P^(n-1)), and the graded Hom computations between
// them.
//
// Conventions: O(1) = det S^dual. Linear functions in x transform as S (one
// copy per basis vector of V), linear functions in p as det S^dual (n
// copies). A section of O(-nu) on P^(n-1) is an invariant of (det S^dual)^nu.
namespace pfgr::windows {

struct WindowBundle {
  int l = 0;
  int m = 0;

  std::string name() const;
  auto operator<=>(const WindowBundle&) const = default;
};

// (p- or x-degree, cohomological degree) -> dimension, nonzero only.
using BigradedDims = std::map<std::pair<int, int>, std::int64_t>;

inline constexpr int kFrakXCutoffLimit = 48;

// Ordered by (m, l).
std::vector<WindowBundle> window_generators(int l_bound, int m_bound);

// Ext^*(T_b1, T_b2) on Gr(2,n): ext_schur_pair(l1, l2, m1 - m2, n).
bbw::GradedDims ext_on_grassmannian(WindowBundle b1, WindowBundle b2, int n);

// Hom on X1 = Tot(O(-1)^n over Gr(2,n)), graded by p-degree.
BigradedDims ext_table_X1(WindowBundle b1, WindowBundle b2, int p_cutoff, int n = 7);

struct X2Table {
  BigradedDims dims;
  std::optional<int> max_nu;  // largest det power nu among SL(2)-invariant summands
};

// Hom on X2 (over P^(n-1)), graded by x-degree.
X2Table ext_table_X2(WindowBundle b1, WindowBundle b2, int x_cutoff, int n = 7);

// GL(S)-invariant sections on the whole stack in bidegree (d_x, d_p),
// computed by coefficient extraction from explicit characters.
std::int64_t hom0_at(WindowBundle b1, WindowBundle b2, int d_x, int d_p, int n = 7);

// Keys are (d_x, d_p). Invariants only occur on the line
// d_x = l2 - l1 + 2(m2 - m1) + 2 d_p.
BigradedDims hom0_frakX(WindowBundle b1, WindowBundle b2, int x_cutoff, int p_cutoff, int n = 7);

nlohmann::json to_json(const BigradedDims& g);

// Ext vanishing on Gr(2,n) for non-negative twists 0 <= k <= n-1 and
// 0 <= l, l' <= l_max: nonzero only for l <= l', k = 0, degree 0.
CheckRecord nonnegative_twist_sweep(int n, int l_max);
// Negative twists k in [k_min, -1]: no higher cohomology, plus the
// dominance tail for all k < k_min.
CheckRecord negative_twist_sweep(int n, int l_max, int k_min);

CheckRecord strong_exceptional_check(int l_bound, int m_bound, int n);
CheckRecord x1_persistence_check(int l_bound, int m_bound, int n, int p_cutoff);
CheckRecord x2_persistence_check(int l_bound, int m_bound, int n, int x_cutoff);
CheckRecord hom0_cross_check(int l_bound, int m_bound, int n, int p_cutoff, int x_cutoff);
CheckRecord window_size_check(int l_bound, int m_bound, int n);
// Side-by-side rectangle sizes for even n; informational, always passes.
CheckRecord even_window_candidates(int n);

struct ExceptionalReport {
  bool passed = false;
  int window_size = 0;
  int fibre_generators = 0;
  int n = 0;
  std::vector<CheckRecord> checks;

  nlohmann::json to_json() const;
};

struct ExceptionalOptions {
  int p_cutoff = -1;  // negative skips the X1 table check
  int x_cutoff = -1;  // negative skips the X2 table check
};

ExceptionalReport exceptional_report(int l_bound, int m_bound, int n,
                                     const ExceptionalOptions& opts = {});

}  // namespace pfgr::windows
