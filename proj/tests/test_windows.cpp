#include "doctest.h"

#include "checked.hpp"
#include "pfgr/windows.hpp"

using namespace pfgr;
using namespace pfgr::windows;

TEST_CASE("window generators") {
  CHECK(window_generators(3, 7).size() == 21);
  CHECK(window_generators(2, 5).size() == 10);
  const auto one = window_generators(1, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == WindowBundle{0, 0});
  // Ordered by (m, l).
  const auto g = window_generators(3, 2);
  CHECK(g[1] == WindowBundle{1, 0});
  CHECK(g[3] == WindowBundle{0, 1});
  CHECK_THROWS(window_generators(0, 3));
}

TEST_CASE("X1 table examples") {
  const WindowBundle t00{0, 0}, t10{1, 0};
  CHECK(ext_table_X1(t00, t00, 0) == BigradedDims{{{0, 0}, 1}});
  CHECK(ext_table_X1(t00, t10, 0) == BigradedDims{{{0, 0}, 7}});
  // p-degree 1 from T00 to itself: H^0(O(1)) x C^7 = 21 * 7.
  CHECK(ext_table_X1(t00, t00, 1).at({1, 0}) == 21 * 7);
}

TEST_CASE("X2 table examples") {
  const WindowBundle t00{0, 0}, t06{0, 6};
  const auto same = ext_table_X2(t00, t00, 0);
  CHECK(same.dims == BigradedDims{{{0, 0}, 1}});
  // O -> O(6): invariant det^6 gives O(-6) on P^6, no cohomology at all.
  const auto up = ext_table_X2(t00, t06, 0);
  CHECK(up.dims.empty());
  REQUIRE(up.max_nu);
  CHECK(*up.max_nu == 6);
  // The reverse direction gives O(6): H^0 = C(12,6).
  const auto down = ext_table_X2(t06, t00, 0);
  CHECK(down.dims == BigradedDims{{{0, 0}, binomial(12, 6)}});
  CHECK(*down.max_nu == -6);
}

TEST_CASE("hom0 on the stack") {
  const WindowBundle t00{0, 0}, t01{0, 1}, t10{1, 0};
  CHECK(hom0_at(t00, t00, 0, 0) == 1);
  CHECK(hom0_at(t10, t10, 0, 0) == 1);
  // O -> O(1): nothing at (0,1); the sections live at d_x = 2 and equal Lambda^2 V^dual.
  CHECK(hom0_at(t00, t01, 0, 1) == 0);
  CHECK(hom0_at(t00, t01, 2, 0) == 21);
  // At d_p = 1: H^0(Gr, O(2)) x C^7 = 196 * 7.
  CHECK(hom0_frakX(t00, t01, 4, 1) == BigradedDims{{{2, 0}, 21}, {{4, 1}, 196 * 7}});
  CHECK_THROWS_AS(hom0_at(t00, t00, 100, 0), std::length_error);
}

TEST_CASE("hom0 agrees with the X1 and X2 tables on small cutoffs") {
  const auto r = hom0_cross_check(3, 7, 7, 4, 6);
  CHECK(r.passed);
  CHECK(r.witness["comparisons"].get<int>() == 441 * (5 + 7));
}

TEST_CASE("exceptional report at the default rectangle") {
  const auto rep = exceptional_report(3, 7, 7, {2, 2});
  CHECK(rep.passed);
  CHECK(rep.window_size == 21);
  CHECK(rep.fibre_generators == 3);
  CHECK(rep.n == 7);
}

TEST_CASE("rectangle (3,8) on Gr(2,7) fails") {
  const auto rep = exceptional_report(3, 8, 7);
  CHECK_FALSE(rep.passed);
  const auto& strong = rep.checks.front();
  CHECK_FALSE(strong.passed);
  bool saw_higher = false;
  for (const auto& v : strong.witness["violations"])
    if (v["problem"] == "higher Ext" && v["source"] == "T_{0,7}" && v["target"] == "T_{0,0}") saw_higher = true;
  CHECK(saw_higher);
  CHECK(bbw::ext_schur_pair(0, 0, 7, 7) == bbw::GradedDims{{10, 1}});
}

TEST_CASE("d = 5 rectangle") {
  const auto rep = exceptional_report(2, 5, 5, {4, 4});
  CHECK(rep.passed);
  CHECK(rep.window_size == 10);
  CHECK(rep.fibre_generators == 2);
}

TEST_CASE("Hom0 matrix on Gr is unitriangular in the (m,l) order") {
  const auto r = strong_exceptional_check(3, 7, 7);
  REQUIRE(r.passed);
  const auto& hom = r.witness["hom0_matrix_target_by_source"];
  for (std::size_t i = 0; i < 21; ++i) {
    CHECK(hom[i][i].get<int>() == 1);
    for (std::size_t j = i + 1; j < 21; ++j) CHECK(hom[i][j].get<int>() == 0);
  }
}

TEST_CASE("Ext sweeps") {
  CHECK(nonnegative_twist_sweep(7, 2).passed);
  CHECK(negative_twist_sweep(7, 2, -50).passed);
  CHECK(nonnegative_twist_sweep(5, 1).passed);
  CHECK(negative_twist_sweep(5, 1, -50).passed);
}

TEST_CASE("even d candidates are reported side by side") {
  const auto r = even_window_candidates(6);
  CHECK(r.passed);
  CHECK(r.witness["size_half_d"] == 18);
  CHECK(r.witness["size_half_d_minus_one"] == 12);
}
