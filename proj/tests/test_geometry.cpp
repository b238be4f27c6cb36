#include "doctest.h"

#include "pfgr/geometry.hpp"

using namespace pfgr;
using namespace pfgr::geometry;

namespace {

const PfaffianModel& model7() {
  static const PfaffianModel m = random_model(1, FieldSpec::prime(101), 7);
  return m;
}

// Determinant by cofactor expansion, independent of the elimination code.
std::int64_t det_mod(const PrimeField& f, const MatrixOf<PrimeField>& m) {
  const auto n = m.rows;
  if (n == 0) return 1;
  std::int64_t s = 0;
  for (std::size_t j = 0; j < n; ++j) {
    MatrixOf<PrimeField> minor = zeros(f, n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = m(r, c);
    const auto term = f.mul(m(0, j), static_cast<PrimeField::Elem>(det_mod(f, minor)));
    s = j % 2 == 0 ? f.add(static_cast<PrimeField::Elem>(s), term) : f.sub(static_cast<PrimeField::Elem>(s), term);
  }
  return s;
}

}  // namespace

TEST_CASE("wedge basis indexing") {
  CHECK(num_pairs(7) == 21);
  CHECK(pair_index(0, 1, 7) == 0);
  CHECK(pair_index(0, 6, 7) == 5);
  CHECK(pair_index(1, 2, 7) == 6);
  CHECK(pair_index(5, 6, 7) == 20);
  CHECK(pair_index(6, 5, 7) == 20);
}

TEST_CASE("model construction rejects bad A") {
  IntMatrix a(7, std::vector<std::int64_t>(21, 1));
  a[3].assign(21, 0);
  CHECK_THROWS_AS(PfaffianModel(7, FieldSpec::prime(101), 1, a), std::invalid_argument);
  CHECK_THROWS_AS(PfaffianModel(6, FieldSpec::prime(101), 1, IntMatrix(6, std::vector<std::int64_t>(15, 1))),
                  std::invalid_argument);
  CHECK_THROWS_AS(random_model(1, FieldSpec::prime(3), 7), std::invalid_argument);
}

TEST_CASE("random model is deterministic and round-trips through JSON") {
  const auto& m = model7();
  CHECK(m.d() == 7);
  const auto again = random_model(1, FieldSpec::prime(101), 7);
  CHECK(again.A() == m.A());
  const auto back = PfaffianModel::from_json(m.to_json());
  CHECK(back.A() == m.A());
  CHECK(back.to_json().dump() == m.to_json().dump());
  CHECK(full_rank_check(m).passed);
}

TEST_CASE("omega_p is antisymmetric with even rank; generic rank is d-1") {
  const auto& m = model7();
  const PrimeField k(101);
  Rng rng(3);
  CHECK_THROWS(omega_at(k, m, VectorOf<PrimeField>(7, 0)));
  for (int s = 0; s < 50; ++s) {
    auto p = random_vector(k, rng, 7);
    p[0] = 1;
    const auto w = omega_at(k, m, p);
    for (std::size_t i = 0; i < 7; ++i)
      for (std::size_t j = 0; j < 7; ++j) CHECK(w(i, j) == k.neg(w(j, i)));
    CHECK(rank(k, w) % 2 == 0);
  }
  VectorOf<PrimeField> p{1, 2, 3, 4, 5, 6, 7};
  CHECK(y2_membership(k, m, p).rank == 6);
  CHECK_FALSE(y2_membership(k, m, p).in_y2);
}

TEST_CASE("Pfaffian squares to the determinant") {
  const PrimeField k(1000003);
  Rng rng(5);
  for (std::size_t n : {2u, 4u, 6u}) {
    MatrixOf<PrimeField> m = zeros(k, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        m(i, j) = random_elem(k, rng);
        m(j, i) = k.neg(m(i, j));
      }
    const auto pf = pfaffian(k, m);
    CHECK(k.mul(pf, pf) == static_cast<PrimeField::Elem>(det_mod(k, m)));
  }
}

TEST_CASE("sub-Pfaffian Jacobian matches interpolation along coordinate lines") {
  const auto& m = model7();
  const PrimeField k(101);
  Rng rng(9);
  auto p = random_vector(k, rng, 7);
  p[0] = 1;
  const auto jac = sub_pfaffian_jacobian(k, m, p);
  // Each sub-Pfaffian is a cubic in p; the linear coefficient of
  // t -> f(p + t e_l) comes from values at t = 0..3 by Lagrange interpolation.
  for (std::size_t l = 0; l < 7; ++l) {
    std::vector<VectorOf<PrimeField>> vals;
    for (int t = 0; t <= 3; ++t) {
      auto pt = p;
      pt[l] = k.add(pt[l], k.from_int(t));
      vals.push_back(sub_pfaffians(k, omega_at(k, m, pt)));
    }
    // f'(0) = (-11 f0 + 18 f1 - 9 f2 + 2 f3) / 6 for a cubic.
    for (std::size_t i = 0; i < 7; ++i) {
      auto s = k.zero();
      const std::int64_t w[4] = {-11, 18, -9, 2};
      for (int t = 0; t <= 3; ++t) s = k.add(s, k.mul(k.from_int(w[t]), vals[static_cast<std::size_t>(t)][i]));
      CHECK(k.div(s, k.from_int(6)) == jac(i, l));
    }
  }
}

TEST_CASE("Y1 membership against direct Pluecker contraction") {
  const auto& m = model7();
  const PrimeField k(101);
  Rng rng(13);
  const auto x = sample_y1_point(k, m, rng, 2'000'000);
  REQUIRE(x);
  CHECK(y1_membership(k, m, x->first, x->second));
  // Contract by hand: sum over i<j of A[r][ij] (x1_i x2_j - x1_j x2_i).
  for (std::size_t r = 0; r < 7; ++r) {
    std::int64_t s = 0;
    for (int i = 0; i < 7; ++i)
      for (int j = i + 1; j < 7; ++j) {
        const std::int64_t minor = static_cast<std::int64_t>(x->first[i]) * x->second[j] -
                                   static_cast<std::int64_t>(x->first[j]) * x->second[i];
        s += m.A()[r][static_cast<std::size_t>(pair_index(i, j, 7))] * minor;
      }
    CHECK(((s % 101) + 101) % 101 == 0);
  }
  CHECK_THROWS(y1_membership(k, m, x->first, x->first));
  CHECK(y1_jacobian_rank(k, m, x->first, x->second) == 7);
}

TEST_CASE("points of Y2 have rank d-3, a 3-dimensional kernel and a rank-8 quadric") {
  const auto& m = model7();
  const PrimeField k(101);
  Rng rng(17);
  const auto p = sample_y2_point(k, m, rng, 100000);
  REQUIRE(p);
  const auto mem = y2_membership(k, m, *p);
  CHECK(mem.rank == 4);
  CHECK(mem.in_y2);
  CHECK_FALSE(mem.singular);
  CHECK(is_zero_vector(k, sub_pfaffians(k, omega_at(k, m, *p))));
  CHECK(kernel_of_omega(k, omega_at(k, m, *p)).rows == 3);
  CHECK(rank(k, quadratic_form(k, m, *p)) == 8);
  CHECK(y2_jacobian_rank(k, m, *p) == 3);
}

TEST_CASE("census partitions projective space and counts the Grassmannian") {
  const auto& m = model7();
  const auto c = rank_census(m, 2);
  CHECK(c.points == 127);
  CHECK(c.rank_counts.at(6) + c.rank_counts.at(4) == 127);
  CHECK(c.rank_counts.at(2) == 0);
  CHECK(c.rank_counts.at(0) == 0);
  CHECK(c.pfaffian_mismatches == 0);
  // (2^7 - 1)(2^6 - 1) / ((2^2 - 1)(2 - 1)).
  CHECK(gaussian_binomial(2, 7, 2) == 2667);
  CHECK(c.grassmannian_points == 2667);
  REQUIRE(c.y1_points);
  CHECK(*c.y1_points == y1_count_by_points(m, 2));
  CHECK(*rank_census(m, 3).y1_points == y1_count_by_points(m, 3));
  CHECK(c.csv().rfind("stratum,count\nrank_6,", 0) == 0);
  for (std::uint32_t q : {2u, 3u, 5u}) CHECK(rank_census(m, q, 100000).singular == 0);
  CHECK_THROWS_AS(rank_census(m, 101, 1000), std::length_error);
}

TEST_CASE("critical locus on constructed points") {
  const auto& m = model7();
  const PrimeField k(101);
  Rng rng(19);
  const auto p = sample_y2_point(k, m, rng, 100000);
  REQUIRE(p);
  const VectorOf<PrimeField> zero(7, 0);
  const auto v0 = critical_test(k, m, zero, zero, *p);
  CHECK(v0.gradient_zero);
  CHECK(v0.conditions());

  const auto kp = kernel_of_omega(k, omega_at(k, m, *p));
  const auto k0 = kp.row(0), k1 = kp.row(1);
  VectorOf<PrimeField> twice(7);
  for (std::size_t i = 0; i < 7; ++i) twice[i] = k.add(k0[i], k0[i]);
  const auto pos = critical_test(k, m, k0, twice, *p);
  CHECK(pos.gradient_zero);
  CHECK(pos.conditions());

  const auto near = critical_test(k, m, k0, k1, *p);
  CHECK(near.image_in_kernel);
  CHECK_FALSE(near.rank_at_most_one);
  CHECK_FALSE(near.gradient_zero);
  CHECK(grad_W(k, m, k0, k1, *p).size() == 21);
}

TEST_CASE("normal map and isotropic extension at a point of Y2") {
  const auto& m = model7();
  const PrimeField k(101);
  Rng rng(23);
  const auto p = sample_y2_point(k, m, rng, 100000);
  REQUIRE(p);
  const auto nm = normal_map(k, m, *p);
  CHECK(nm.jacobian_rank == 3);
  CHECK(nm.rank == 3);
  CHECK(nm.vanishes_at_p);
  CHECK(nm.vanishes_on_tangent);

  const auto omega = omega_at(k, m, *p);
  const auto lag = lagrangian_extension(k, omega);
  CHECK(lag.rows == 5);
  CHECK(is_isotropic(k, omega, lag));

  const auto x = sample_y1_point(k, m, rng, 2'000'000);
  REQUIRE(x);
  const auto ext = kernel_and_extend(k, m, *p, x->first, x->second);
  CHECK(ext.kernel.rows == 3);
  if (ext.transverse) {
    CHECK(ext.lagrangian.rows == 5);
    CHECK(is_isotropic(k, omega, ext.lagrangian));
  }
  VectorOf<PrimeField> generic{1, 0, 0, 0, 0, 0, 0};
  CHECK_THROWS(kernel_and_extend(k, m, generic, x->first, x->second));
}

TEST_CASE("the elliptic-curve case d = 5") {
  const auto m = random_model(1, FieldSpec::prime(101), 5);
  CHECK(m.d() == 5);
  CHECK(census_check(m, {2, 3, 5}).passed);
  CHECK(y1_smoothness_check(m, 10, 2).passed);
  CHECK(y2_smoothness_check(m, 10, 2).passed);
  CHECK(normal_map_check(m, 10, 2).passed);
  CHECK(isotropic_extension_check(m, 5, 2).passed);
}

TEST_CASE("rational field model") {
  const auto m = random_model(4, FieldSpec::rational(), 7, {9, 16, {2, 3, 5}, 5});
  CHECK(full_rank_check(m).passed);
  CHECK(rational_pfaffian_check(m, 20, 1).passed);
  CHECK(sampling_prime(m.field()) == 101);
  const RationalField k;
  const VectorOf<RationalField> p{1, 0, 0, 0, 0, 0, 0};
  CHECK(rank(k, omega_at(k, m, p)) % 2 == 0);
}

TEST_CASE("degenerate A: forms never involving e_7 fail the smoothness certificates") {
  // Columns of wedge pairs containing index 6 are zero, so e_7 lies in every
  // kernel: Y2 becomes the cubic hypersurface Pf_7 = 0.
  const auto& good = model7();
  IntMatrix a = good.A();
  for (auto& row : a)
    for (int i = 0; i < 6; ++i) row[static_cast<std::size_t>(pair_index(i, 6, 7))] = 0;
  const PfaffianModel bad(7, FieldSpec::prime(101), 1, a);
  const auto y2 = y2_smoothness_check(bad, 10, 1);
  CHECK_FALSE(y2.passed);
  CHECK(y2.witness["failures"].size() > 0);
  const auto y1 = y1_smoothness_check(bad, 3, 1);
  CHECK_FALSE(y1.passed);
}

TEST_CASE("underlying scheme probe") {
  const auto r = underlying_scheme_check(model7(), 5);
  CHECK(r.passed);
  const auto& slices = r.witness["slices"];
  CHECK(slices[1]["invariant_dim"] == 0);
  CHECK(slices[2]["invariant_dim"] == 3);
  CHECK(slices[4]["invariant_dim"] == 6);
}
