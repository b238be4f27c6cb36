#include "doctest.h"

#include "pfgr/linalg.hpp"
#include "pfgr/mf.hpp"

using namespace pfgr;
using namespace pfgr::mf;

namespace {

// Pascal's triangle, independent of the library's binomial.
std::int64_t choose(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  std::vector<std::int64_t> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<std::int64_t> next(static_cast<std::size_t>(i) + 1, 1);
    for (int j = 1; j < i; ++j) next[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j) - 1] + row[static_cast<std::size_t>(j)];
    row = next;
  }
  return row[static_cast<std::size_t>(k)];
}

Ring plane() { return Ring(PrimeField(kDefaultPrime), {"x1", "x2"}, {{1, 1}, {0, 2}}); }

Poly random_linear(const Ring& r, Rng& rng, const std::vector<std::string>& vars) {
  Poly p;
  for (const auto& v : vars)
    p = add(r, p, scale(r, r.var(v), r.field().from_int(rng.uniform(-20, 20))));
  return p;
}

}  // namespace

TEST_CASE("polynomial arithmetic and monomial enumeration") {
  const Ring r(PrimeField(kDefaultPrime), {"a", "b", "c"}, {{1, 1, 2}, {0, 0, 2}});
  const auto a = r.var("a"), b = r.var("b");
  const auto sq = mul(r, add(r, a, b), add(r, a, b));
  CHECK(sq.size() == 3);
  CHECK(r.str(sub(r, sq, mul(r, a, a))) == "2*a*b + b^2");
  CHECK(is_zero(sub(r, sq, sq)));
  CHECK(homogeneous_degree(r, sq) == Degree{2, 0});
  CHECK_FALSE(homogeneous_degree(r, add(r, a, r.constant(1))));
  for (int t = 0; t <= 6; ++t) {
    // a, b of weight 1 and c of weight 2: sum over the power of c.
    std::int64_t want = 0;
    for (int e = 0; 2 * e <= t; ++e) want += t - 2 * e + 1;
    CHECK(static_cast<std::int64_t>(r.monomials(t).size()) == want);
  }
  const Ring flat(PrimeField(kDefaultPrime), {"x", "y", "z", "w"}, {{1, 1, 1, 1}, {0, 0, 0, 0}});
  for (int t = 0; t <= 5; ++t) CHECK(static_cast<std::int64_t>(flat.monomials(t).size()) == choose(t + 3, 3));
  CHECK(r.monomials_of({4, 2}).size() == 3);  // c*a^2, c*ab, c*b^2
  CHECK_THROWS_AS(Ring(PrimeField(7), {"x"}, {{0}, {0}}), std::invalid_argument);
}

TEST_CASE("mf_verify examples and negative controls") {
  const auto r = plane();
  const auto W = mul(r, r.var("x1"), r.var("x2"));
  PolyMatrix d0(1, 1), d1(1, 1);
  d0(0, 0) = r.var("x2");
  d1(0, 0) = r.var("x1");
  const auto e = make_mf(r, W, {0}, {1}, d0, d1);
  CHECK(mf_verify(r, e).passed);
  CHECK(mf_verify(r, stabilization(r, W)).passed);
  CHECK(mf_verify_check().passed);

  // One composite right, the other wrong.
  PolyMatrix n0(2, 1), n1(1, 2);
  n0(0, 0) = r.var("x1");
  n0(1, 0) = r.var("x2");
  n1(0, 0) = r.var("x2");
  const auto bad = mf_verify(r, make_mf(r, W, {2, 0}, {1}, n0, n1));
  CHECK_FALSE(bad.passed);
  CHECK(bad.witness["composite"] == "d0*d1");
  CHECK(bad.witness["row"] == 1);
  CHECK(bad.witness["value"] == "x2^2");

  // Parity of generators must follow R-charge.
  CHECK(mf_verify(r, make_mf(r, W, {1}, {1}, d0, d1)).failure == "even generator with odd R-charge");
  // Variables of odd R-charge are refused.
  const Ring odd(PrimeField(kDefaultPrime), {"x1", "x2"}, {{1, 1}, {1, 1}});
  PolyMatrix o0(1, 1), o1(1, 1);
  o0(0, 0) = odd.var("x2");
  o1(0, 0) = odd.var("x1");
  CHECK(mf_verify(odd, make_mf(odd, mul(odd, odd.var("x1"), odd.var("x2")), {0}, {1}, o0, o1)).failure ==
        "variable with odd R-charge");
  // An inhomogeneous entry.
  PolyMatrix h0(1, 1), h1(1, 1);
  h0(0, 0) = r.var("x2");
  h1(0, 0) = r.var("x1");
  auto inh = make_mf(r, W, {0}, {1}, h0, h1);
  inh.d1(0, 0) = add(r, r.var("x1"), mul(r, r.var("x1"), r.var("x1")));
  inh.d0(0, 0) = r.constant(0);
  CHECK_FALSE(mf_verify(r, inh).passed);
  CHECK_THROWS_AS(differential_degree(r, r.var("x1")), std::invalid_argument);  // odd internal degree
  CHECK(e.to_json(r).contains("d0"));
}

TEST_CASE("Knorrer base case and point-like objects") {
  const auto r = plane();
  const auto W = mul(r, r.var("x1"), r.var("x2"));
  const auto e = koszul_perturb(r, koszul_complex(r, {r.var("x1")}), W);
  for (int cutoff : {2, 4, 6}) {
    const auto ext = hom_ext_truncated(r, e, e, cutoff);
    CHECK(ext.total() == 1);
    CHECK(ext.stabilized);
    CHECK(ext.by_degree.at(r.zero_degree()) == 1);
  }
  // Two transverse lines: Ext(O_{x1=0}, O_{x2=0}) is one odd class.
  const auto f = koszul_perturb(r, koszul_complex(r, {r.var("x2")}), W);
  const auto ef = hom_ext_truncated(r, e, f, 4);
  CHECK(ef.total() == 1);
  CHECK(ef.by_parity_r.begin()->first.first == 1);
  CHECK(knorrer_base_check(4).passed);
}

TEST_CASE("stabilization is contractible") {
  const auto r = plane();
  const auto W = mul(r, r.var("x1"), r.var("x2"));
  const auto st = stabilization(r, W);
  const auto e = koszul_perturb(r, koszul_complex(r, {r.var("x1")}), W);
  CHECK(hom_ext_truncated(r, st, e, 5).total() == 0);
  CHECK(hom_ext_truncated(r, e, st, 5).total() == 0);
  CHECK(hom_ext_truncated(r, st, st, 5).total() == 0);
  const auto cone = tensor(r, e, stabilization(r, Poly{}, e.s));
  CHECK(mf_verify(r, cone).passed);
  CHECK(cone.rank() == 4);
  CHECK(hom_ext_truncated(r, cone, e, 5).total() == 0);
  CHECK(contractibility_check(4).passed);
}

TEST_CASE("Koszul perturbation examples") {
  const auto r = plane();
  const auto W = mul(r, r.var("x1"), r.var("x2"));
  const auto e = koszul_perturb(r, koszul_complex(r, {r.var("x1")}), W);
  CHECK(e.d0(0, 0) == r.var("x1"));
  CHECK(e.d1(0, 0) == r.var("x2"));
  CHECK(koszul_perturb_check().passed);

  const Ring r3(PrimeField(kDefaultPrime), {"x1", "x2", "x3"}, {{1, 1, 1}, {0, 2, 0}});
  CHECK_THROWS_AS(koszul_perturb(r3, koszul_complex(r3, {r3.var("x1")}), mul(r3, r3.var("x2"), r3.var("x3"))),
                  std::runtime_error);
  GradedComplex broken = koszul_complex(r, {r.var("x1"), r.var("x2")});
  broken.differentials[1](0, 0) = r.var("x1");
  CHECK_FALSE(verify_complex(r, broken).empty());
  CHECK_THROWS_AS(koszul_perturb(r, broken, W), std::invalid_argument);
}

TEST_CASE("property: perturbed Koszul complexes square to W") {
  // x's of R-charge 0, p's of R-charge 2; W = sum f_i g_i with f_i random
  // forms in x and g_i random forms in p.
  const Ring r(PrimeField(kDefaultPrime), {"x1", "x2", "x3", "p1", "p2", "p3"},
               {{1, 1, 1, 1, 1, 1}, {0, 0, 0, 2, 2, 2}});
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t c = 1 + static_cast<std::size_t>(trial % 3);
    std::vector<Poly> f;
    Poly W;
    for (std::size_t i = 0; i < c; ++i) {
      f.push_back(random_linear(r, rng, {"x1", "x2", "x3"}));
      W = add(r, W, mul(r, f.back(), random_linear(r, rng, {"p1", "p2", "p3"})));
    }
    const auto e = koszul_perturb(r, koszul_complex(r, f), W);
    const auto v = mf_verify(r, e);
    CHECK_MESSAGE(v.passed, v.failure);
    CHECK(e.rank() == (std::size_t{1} << c));
    CHECK(mf_verify(r, shift(r, e, 1)).passed);
    CHECK(mf_verify(r, tensor(r, e, stabilization(r, Poly{}, e.s))).passed);
  }
}

TEST_CASE("shift round trip and two-periodicity") {
  const auto r = plane();
  const auto W = mul(r, r.var("x1"), r.var("x2"));
  const auto e = koszul_perturb(r, koszul_complex(r, {r.var("x1")}), W);
  const auto back = shift(r, shift(r, e, 1), -1);
  CHECK(back.even == e.even);
  CHECK(back.odd == e.odd);
  CHECK(back.d0.a == e.d0.a);
  CHECK(back.d1.a == e.d1.a);
  const auto f = koszul_perturb(r, koszul_complex(r, {r.var("x2")}), W);
  const auto base = hom_ext_truncated(r, e, f, 4);
  const auto two = hom_ext_truncated(r, e, shift(r, f, 2), 4);
  REQUIRE(base.by_degree.size() == 1);
  REQUIRE(two.by_degree.size() == 1);
  CHECK(two.by_degree.begin()->first[kRCharge] == base.by_degree.begin()->first[kRCharge] + 2);
  CHECK(periodicity_check(4).passed);
}

TEST_CASE("Knorrer tensor law on three toys") { CHECK(tensor_law_check(4).passed); }

TEST_CASE("Koszul homology of a regular sequence") {
  const Ring r(PrimeField(kDefaultPrime), {"x", "y", "z", "w"}, {{1, 1, 1, 1}, {0, 0, 0, 0}});
  Rng rng(11);
  const std::vector<std::string> vars{"x", "y", "z", "w"};
  const auto h = complex_homology(r, koszul_complex(r, {random_linear(r, rng, vars), random_linear(r, rng, vars)}), 6);
  REQUIRE(h.size() == 3);
  for (int t = 0; t <= 6; ++t) CHECK(h[0].at(t) == choose(t + 1, 1));  // polynomial ring in 2 variables
  CHECK(h[1].empty());
  CHECK(h[2].empty());
}

TEST_CASE("Eagon-Northcott resolution") {
  const auto en4 = eagon_northcott(4, 8);
  CHECK(en4.ranks == std::vector<std::size_t>{1, 6, 8, 3});
  CHECK(en4.complex_failure.empty());
  CHECK(en4.exact);
  CHECK(en4.h0_matches);
  CHECK(en4.sl2_contents[0] == std::map<int, std::int64_t>{{0, 1}});
  CHECK(en4.sl2_contents[1] == std::map<int, std::int64_t>{{0, 6}});
  CHECK(en4.sl2_contents[2] == std::map<int, std::int64_t>{{1, 4}});
  CHECK(en4.sl2_contents[3] == std::map<int, std::int64_t>{{2, 1}});
  CHECK(eagon_northcott(2, 8).ranks == std::vector<std::size_t>{1, 1});
  CHECK(eagon_northcott(3, 6).ranks == std::vector<std::size_t>{1, 3, 2});
  CHECK(eagon_northcott_check(4, 8).passed);
  CHECK(eagon_northcott_check(2, 8).passed);

  // H_0 against a direct Hilbert function: monomials minus the span of
  // minors times monomials, for the 2 x 3 matrix.
  const auto en3 = eagon_northcott(3, 5);
  const Ring r(PrimeField(kDefaultPrime), {"a1", "a2", "a3", "b1", "b2", "b3"}, {{1, 1, 1, 1, 1, 1}, {0, 0, 0, 0, 0, 0}});
  std::vector<Poly> minors;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      minors.push_back(sub(r, mul(r, r.var(static_cast<std::size_t>(i)), r.var(static_cast<std::size_t>(3 + j))),
                           mul(r, r.var(static_cast<std::size_t>(j)), r.var(static_cast<std::size_t>(3 + i)))));
  for (int t = 0; t <= 5; ++t) {
    const auto& monos = r.monomials(t);
    std::map<Monomial, std::size_t> col;
    for (const auto& m : monos) col.emplace(m, col.size());
    std::vector<std::vector<PrimeField::Elem>> rows;
    if (t >= 2)
      for (const auto& mn : minors)
        for (const auto& mu : r.monomials(t - 2)) {
          std::vector<PrimeField::Elem> row(monos.size(), 0);
          for (const auto& [m, c] : mul(r, mn, Poly{{mu, 1}})) row[col.at(m)] = c;
          rows.push_back(row);
        }
    const std::size_t ideal = rows.empty() ? 0 : rank(r.field(), from_rows(r.field(), rows, monos.size()));
    CHECK(en3.homology[0].at(t) == static_cast<std::int64_t>(monos.size() - ideal));
  }
}

TEST_CASE("fibre Ext over a sampled point of Y2") {
  for (int d : {5, 7}) {
    const auto m = geometry::random_model(1, geometry::FieldSpec::prime(101), d);
    const int cutoff = d == 5 ? 4 : 2;
    const auto f = knorrer_fibre(m, cutoff, 3);
    CHECK(f.kernel_dim == 3);
    CHECK(f.lagrangian_dim == static_cast<std::size_t>((d + 3) / 2));
    CHECK(f.gram_normal_form);
    CHECK(f.mf_verified);
    for (int t = 0; t <= cutoff; ++t) {
      // Polynomial ring on Hom(S, K_p), six coordinates.
      CHECK(f.ext.by_internal.at(t) == choose(t + 5, 5));
      // Its SL(2)-invariants: polynomial ring on the three 2x2 minors.
      CHECK(f.sl2_slice.at(t) == (t % 2 == 0 ? choose(t / 2 + 2, 2) : 0));
    }
    CHECK_FALSE(f.ext.stabilized);
    CHECK(f.normal_rank == 3);
    CHECK(f.transverse_homology == 1);
    CHECK(knorrer_rank_check(m, cutoff, 3).passed);
  }
}
