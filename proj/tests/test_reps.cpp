#include "doctest.h"

#include <vector>

#include "pfgr/field.hpp"
#include "pfgr/reps.hpp"

using namespace pfgr::reps;

namespace {

// Character of Sym^d of a set of torus weights, by listing monomials.
Character monomial_character(const std::vector<std::pair<int, int>>& weights, int degree) {
  Character out;
  // Enumerate exponent vectors of total degree `degree` recursively.
  auto rec = [&](auto&& self, std::size_t i, int left, int wa, int wb) -> void {
    if (i + 1 == weights.size()) {
      out[{wa + left * weights[i].first, wb + left * weights[i].second}] += 1;
      return;
    }
    for (int e = 0; e <= left; ++e)
      self(self, i + 1, left - e, wa + e * weights[i].first, wb + e * weights[i].second);
  };
  rec(rec, 0, degree, 0, 0);
  return out;
}

// Character of Lambda^t of a set of torus weights, by listing subsets.
Character wedge_character(const std::vector<std::pair<int, int>>& weights, int t) {
  Character out;
  const auto n = weights.size();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != t) continue;
    int a = 0, b = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) a += weights[i].first, b += weights[i].second;
    out[{a, b}] += 1;
  }
  return out;
}

}  // namespace

TEST_CASE("weights are stored dominant") {
  GL2Weight w(-3, 2);
  CHECK(w.a == 2);
  CHECK(w.b == -3);
  CHECK(w.dim() == 6);
  CHECK(w.det_weight() == -1);
}

TEST_CASE("Clebsch-Gordan base case") {
  RepSum expect;
  expect.add(GL2Weight(2, 0), 1);
  expect.add(GL2Weight(1, 1), 1);
  CHECK(decompose_tensor(GL2Weight(1, 0), GL2Weight(1, 0)) == expect);
}

TEST_CASE("Sym^2 S tensor Sym^2 S^dual") {
  RepSum expect;
  expect.add(GL2Weight(2, -2), 1);
  expect.add(GL2Weight(1, -1), 1);
  expect.add(GL2Weight(0, 0), 1);
  const auto got = decompose_tensor(GL2Weight(0, -2), GL2Weight(2, 0));
  CHECK(got == expect);
  CHECK(invariant_multiplicities(got) == std::map<int, std::int64_t>{{0, 1}});
}

TEST_CASE("top summand of Sym^l S tensor Sym^l' S^dual is (l', -l)") {
  for (int l = 0; l <= 5; ++l)
    for (int lp = 0; lp <= 5; ++lp) {
      const auto r = decompose_tensor(GL2Weight(0, -l), GL2Weight(lp, 0));
      CHECK(r.multiplicity(GL2Weight(lp, -l)) == 1);
      // The rest is the (l-1, l'-1) product.
      if (l > 0 && lp > 0) {
        const RepSum rest = decompose_tensor(GL2Weight(0, -(l - 1)), GL2Weight(lp - 1, 0));
        RepSum expect(GL2Weight(lp, -l));
        for (const auto& [w, m] : rest.terms()) expect.add(w, m);
        CHECK(r == expect);
      }
    }
}

TEST_CASE("symmetric powers") {
  const RepSum two(GL2Weight(1, 0), 2);
  CHECK(decompose_sym_power(two, 0) == RepSum(GL2Weight(0, 0)));
  CHECK(decompose_sym_power(RepSum(GL2Weight(1, 0), 7), 1) == RepSum(GL2Weight(1, 0), 7));

  RepSum expect;
  expect.add(GL2Weight(2, 0), 3);
  expect.add(GL2Weight(1, 1), 1);
  CHECK(decompose_sym_power(two, 2) == expect);

  // Monomial enumeration oracle.
  std::vector<std::pair<int, int>> tw;
  for (const auto& [e, c] : character(RepSum(GL2Weight(0, -1), 3)))
    for (int i = 0; i < c; ++i) tw.push_back(e);
  for (int d = 0; d <= 5; ++d)
    CHECK(character(decompose_sym_power(RepSum(GL2Weight(0, -1), 3), d)) == monomial_character(tw, d));

  CHECK_THROWS_AS(decompose_sym_power(two, 25), std::length_error);
}

TEST_CASE("exterior powers of Hom(S, C^c)^dual") {
  CHECK(decompose_exterior_hom(3, 0) == RepSum(GL2Weight(0, 0)));
  CHECK(decompose_exterior_hom(4, 8) == RepSum(GL2Weight(-4, -4)));
  CHECK(decompose_exterior_hom(2, 5).empty());

  for (int c = 1; c <= 4; ++c) {
    std::vector<std::pair<int, int>> w;
    for (int i = 0; i < c; ++i) w.push_back({-1, 0}), w.push_back({0, -1});
    std::int64_t total = 0;
    for (int t = 0; t <= 2 * c; ++t) {
      const auto r = decompose_exterior_hom(c, t);
      CHECK(character(r) == wedge_character(w, t));
      total += r.dim();
    }
    CHECK(total == (std::int64_t{1} << (2 * c)));
  }

  // c = 2: only Sym^0, Sym^1, Sym^2 after restriction to SL(2).
  std::map<int, std::int64_t> seen;
  for (int t = 0; t <= 4; ++t)
    for (const auto& [u, m] : sl2_content(decompose_exterior_hom(2, t))) seen[u] += m;
  CHECK(seen.size() == 3);
  CHECK(seen.rbegin()->first == 2);
}

TEST_CASE("SL(2)-content bound for exterior powers") {
  for (int c = 1; c <= 6; ++c)
    for (int t = 0; t <= 2 * c; ++t)
      for (const auto& [u, m] : sl2_content(decompose_exterior_hom(c, t))) {
        CHECK(u >= 0);
        CHECK(u <= c);
      }
}

TEST_CASE("invariant multiplicities") {
  CHECK(invariant_multiplicities(RepSum(GL2Weight(1, 1))) == std::map<int, std::int64_t>{{1, 1}});
  CHECK(invariant_multiplicities(RepSum(GL2Weight(1, 0))).empty());
}

TEST_CASE("character multiplicativity and dimension additivity on random weights") {
  pfgr::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    GL2Weight u(static_cast<int>(rng.uniform(-20, 20)), static_cast<int>(rng.uniform(-20, 20)));
    GL2Weight v(static_cast<int>(rng.uniform(-20, 20)), static_cast<int>(rng.uniform(-20, 20)));
    const auto r = decompose_tensor(u, v);
    CHECK(character(r) == multiply(character(u), character(v)));
    CHECK(is_symmetric(character(r)));
    std::int64_t dim = 0;
    for (const auto& [w, m] : r.terms()) dim += m * (w.a - w.b + 1);
    CHECK(dim == r.dim());
    CHECK(r.dim() == evaluate_at_identity(character(r)));
    CHECK(r.dim() == u.dim() * v.dim());
  }
}

TEST_CASE("tensor is associative") {
  pfgr::Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto draw = [&] {
      return GL2Weight(static_cast<int>(rng.uniform(-6, 6)), static_cast<int>(rng.uniform(-6, 6)));
    };
    const RepSum u(draw()), v(draw()), w(draw());
    CHECK(tensor(tensor(u, v), w) == tensor(u, tensor(v, w)));
  }
}

TEST_CASE("json round trip") {
  RepSum r;
  r.add(GL2Weight(2, 0), 3);
  r.add(GL2Weight(1, 1), 1);
  const auto j = to_json(r);
  CHECK(j.dump() == "[[1,1,1],[2,0,3]]");
  CHECK(rep_from_json(j) == r);
}

TEST_CASE("peel rejects non-characters") {
  Character bad{{{1, 0}, 1}};
  CHECK_THROWS(peel(bad));
}
