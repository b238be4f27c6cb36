#include "pfgr/geometry.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "checked.hpp"
#include "pfgr/reps.hpp"

namespace pfgr::geometry {

// ---------------------------------------------------------------------------
// Field specs and the model

std::string FieldSpec::name() const {
  return kind == Kind::rational ? "Q" : "F_" + std::to_string(q);
}

nlohmann::json FieldSpec::to_json() const {
  if (kind == Kind::rational) return {{"kind", "rational"}};
  return {{"kind", "prime"}, {"q", q}};
}

FieldSpec FieldSpec::from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "rational") return rational();
  if (kind == "prime") {
    const auto q = j.at("q").get<std::uint32_t>();
    if (!is_prime(q)) throw std::invalid_argument("field q must be prime");
    return prime(q);
  }
  throw std::invalid_argument("unknown field kind '" + kind + "'");
}

std::uint32_t sampling_prime(const FieldSpec& f) {
  if (f.kind == FieldSpec::Kind::prime && f.q >= 101) return f.q;
  return 101;
}

int num_pairs(int d) { return d * (d - 1) / 2; }

int pair_index(int i, int j, int d) {
  if (i > j) std::swap(i, j);
  // Pairs (0,1), (0,2), ..., (0,d-1), (1,2), ...
  return i * (2 * d - i - 1) / 2 + (j - i - 1);
}

PfaffianModel::PfaffianModel(int d, FieldSpec field, std::uint64_t seed, IntMatrix a, int entry_bound,
                             int attempts)
    : d_(d), field_(field), seed_(seed), a_(std::move(a)), entry_bound_(entry_bound), attempts_(attempts) {
  if (d < 5 || d % 2 == 0) throw std::invalid_argument("d must be odd and at least 5");
  if (field.kind == FieldSpec::Kind::prime && !is_prime(field.q))
    throw std::invalid_argument("field q must be prime");
  if (static_cast<int>(a_.size()) != d) throw std::invalid_argument("A must have d rows");
  for (std::size_t r = 0; r < a_.size(); ++r) {
    if (static_cast<int>(a_[r].size()) != num_pairs(d)) throw std::invalid_argument("A must have C(d,2) columns");
    if (std::all_of(a_[r].begin(), a_[r].end(), [](std::int64_t v) { return v == 0; }))
      throw std::invalid_argument("A has a zero row (not surjective)");
  }
}

nlohmann::json PfaffianModel::to_json() const {
  return {{"d", d_}, {"field", field_.to_json()}, {"seed", seed_}, {"A", a_},
          {"entry_bound", entry_bound_}, {"attempts", attempts_}};
}

PfaffianModel PfaffianModel::from_json(const nlohmann::json& j) {
  return PfaffianModel(j.at("d").get<int>(), FieldSpec::from_json(j.at("field")), j.at("seed").get<std::uint64_t>(),
                       j.at("A").get<IntMatrix>(), j.value("entry_bound", 9), j.value("attempts", 1));
}

// ---------------------------------------------------------------------------
// Basic constructions

namespace {

PrimeField::Elem draw(const PrimeField& k, Rng& rng) { return static_cast<PrimeField::Elem>(rng.below(k.q())); }
RationalField::Elem draw(const RationalField& k, Rng& rng) { return k.from_int(rng.uniform(-20, 20)); }

template <class K>
MatrixOf<K> stack(const K& k, const std::vector<VectorOf<K>>& rows, std::size_t cols) {
  return from_rows(k, rows, cols);
}

template <class K>
std::size_t rank_of_rows(const K& k, const std::vector<VectorOf<K>>& rows, std::size_t cols) {
  if (rows.empty()) return 0;
  return rank(k, stack(k, rows, cols));
}

template <class K>
VectorOf<K> combine(const K& k, const MatrixOf<K>& basis, const VectorOf<K>& coeffs) {
  VectorOf<K> v(basis.cols, k.zero());
  for (std::size_t r = 0; r < basis.rows; ++r)
    for (std::size_t c = 0; c < basis.cols; ++c) v[c] = k.add(v[c], k.mul(coeffs[r], basis(r, c)));
  return v;
}

template <class K>
typename K::Elem bilinear(const K& k, const MatrixOf<K>& omega, const VectorOf<K>& u, const VectorOf<K>& v) {
  return dot(k, u, apply(k, omega, v));
}

template <class K>
MatrixOf<K> without(const K& k, const MatrixOf<K>& m, const std::vector<std::size_t>& drop) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < m.rows; ++i)
    if (std::find(drop.begin(), drop.end(), i) == drop.end()) keep.push_back(i);
  MatrixOf<K> out = zeros(k, keep.size(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) out(i, j) = m(keep[i], keep[j]);
  return out;
}

}  // namespace

template <class K>
typename K::Elem random_elem(const K& k, Rng& rng) {
  return draw(k, rng);
}

template <class K>
VectorOf<K> random_vector(const K& k, Rng& rng, std::size_t n) {
  VectorOf<K> v(n, k.zero());
  for (auto& e : v) e = draw(k, rng);
  return v;
}

template <class K>
MatrixOf<K> a_matrix(const K& k, const PfaffianModel& m) {
  const auto cols = static_cast<std::size_t>(num_pairs(m.d()));
  MatrixOf<K> out = zeros(k, static_cast<std::size_t>(m.d()), cols);
  for (std::size_t r = 0; r < out.rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = k.from_int(m.A()[r][c]);
  return out;
}

template <class K>
MatrixOf<K> omega_at(const K& k, const PfaffianModel& m, const VectorOf<K>& p) {
  const int d = m.d();
  if (static_cast<int>(p.size()) != d) throw std::invalid_argument("p must have d coordinates");
  if (is_zero_vector(k, p)) throw std::invalid_argument("p = 0 is not a point of P(V^dual)");
  MatrixOf<K> w = zeros(k, static_cast<std::size_t>(d), static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      auto s = k.zero();
      const int c = pair_index(i, j, d);
      for (int l = 0; l < d; ++l) {
        const auto a = m.A()[static_cast<std::size_t>(l)][static_cast<std::size_t>(c)];
        if (a != 0) s = k.add(s, k.mul(p[static_cast<std::size_t>(l)], k.from_int(a)));
      }
      w(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = s;
      w(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = k.neg(s);
    }
  return w;
}

template <class K>
typename K::Elem pfaffian(const K& k, const MatrixOf<K>& m) {
  const std::size_t n = m.rows;
  if (n % 2 == 1) throw std::invalid_argument("pfaffian of odd-size matrix");
  if (n == 0) return k.one();
  if (n == 2) return m(0, 1);
  auto s = k.zero();
  for (std::size_t j = 1; j < n; ++j) {
    if (k.is_zero(m(0, j))) continue;
    const auto term = k.mul(m(0, j), pfaffian(k, without(k, m, {0, j})));
    s = j % 2 == 1 ? k.add(s, term) : k.sub(s, term);
  }
  return s;
}

template <class K>
VectorOf<K> sub_pfaffians(const K& k, const MatrixOf<K>& omega) {
  VectorOf<K> out;
  for (std::size_t i = 0; i < omega.rows; ++i) out.push_back(pfaffian(k, without(k, omega, {i})));
  return out;
}

template <class K>
MatrixOf<K> sub_pfaffian_jacobian(const K& k, const PfaffianModel& m, const VectorOf<K>& p) {
  const auto d = static_cast<std::size_t>(m.d());
  const auto omega = omega_at(k, m, p);
  MatrixOf<K> jac = zeros(k, d, d);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<std::size_t> orig;
    for (std::size_t r = 0; r < d; ++r)
      if (r != i) orig.push_back(r);
    const auto sub = without(k, omega, {i});
    // dPf/dm_ab = (-1)^(a+b+1) Pf(M without a, b), 0-indexed a < b.
    for (std::size_t a = 0; a < sub.rows; ++a)
      for (std::size_t b = a + 1; b < sub.rows; ++b) {
        auto c = pfaffian(k, without(k, sub, {a, b}));
        if ((a + b) % 2 == 0) c = k.neg(c);
        if (k.is_zero(c)) continue;
        const auto col = static_cast<std::size_t>(pair_index(static_cast<int>(orig[a]), static_cast<int>(orig[b]), m.d()));
        for (std::size_t l = 0; l < d; ++l) {
          const auto av = m.A()[l][col];
          if (av != 0) jac(i, l) = k.add(jac(i, l), k.mul(c, k.from_int(av)));
        }
      }
  }
  return jac;
}

template <class K>
VectorOf<K> wedge(const K& k, const VectorOf<K>& x1, const VectorOf<K>& x2) {
  const int d = static_cast<int>(x1.size());
  VectorOf<K> out(static_cast<std::size_t>(num_pairs(d)), k.zero());
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      out[static_cast<std::size_t>(pair_index(i, j, d))] =
          k.sub(k.mul(x1[static_cast<std::size_t>(i)], x2[static_cast<std::size_t>(j)]),
                k.mul(x1[static_cast<std::size_t>(j)], x2[static_cast<std::size_t>(i)]));
  return out;
}

template <class K>
VectorOf<K> contract(const K& k, const PfaffianModel& m, const VectorOf<K>& x1, const VectorOf<K>& x2) {
  return apply(k, a_matrix(k, m), wedge(k, x1, x2));
}

template <class K>
Y2Membership y2_membership(const K& k, const PfaffianModel& m, const VectorOf<K>& p) {
  Y2Membership r;
  r.rank = rank(k, omega_at(k, m, p));
  r.in_y2 = static_cast<int>(r.rank) <= m.d() - 3;
  r.singular = static_cast<int>(r.rank) <= m.d() - 5;
  return r;
}

template <class K>
bool y1_membership(const K& k, const PfaffianModel& m, const VectorOf<K>& x1, const VectorOf<K>& x2) {
  if (rank_of_rows(k, {x1, x2}, x1.size()) != 2) throw std::invalid_argument("x must have rank 2");
  return is_zero_vector(k, contract(k, m, x1, x2));
}

namespace {

// Standard basis vectors completing the given rows to a basis.
template <class K>
std::vector<VectorOf<K>> coordinate_complement(const K& k, std::vector<VectorOf<K>> rows, std::size_t n) {
  std::vector<VectorOf<K>> out;
  std::size_t r = rank_of_rows(k, rows, n);
  for (std::size_t i = 0; i < n && r < n; ++i) {
    VectorOf<K> e(n, k.zero());
    e[i] = k.one();
    rows.push_back(e);
    const auto nr = rank_of_rows(k, rows, n);
    if (nr > r) {
      out.push_back(e);
      r = nr;
    } else {
      rows.pop_back();
    }
  }
  return out;
}

}  // namespace

template <class K>
std::size_t y1_jacobian_rank(const K& k, const PfaffianModel& m, const VectorOf<K>& x1, const VectorOf<K>& x2) {
  const auto d = static_cast<std::size_t>(m.d());
  const auto a = a_matrix(k, m);
  const auto comp = coordinate_complement(k, {x1, x2}, d);
  MatrixOf<K> jac = zeros(k, d, 2 * comp.size());
  for (std::size_t c = 0; c < comp.size(); ++c) {
    const auto u = apply(k, a, wedge(k, comp[c], x2));
    const auto v = apply(k, a, wedge(k, x1, comp[c]));
    for (std::size_t r = 0; r < d; ++r) {
      jac(r, 2 * c) = u[r];
      jac(r, 2 * c + 1) = v[r];
    }
  }
  return rank(k, jac);
}

template <class K>
std::size_t y2_jacobian_rank(const K& k, const PfaffianModel& m, const VectorOf<K>& p) {
  return rank(k, sub_pfaffian_jacobian(k, m, p));
}

template <class K>
std::optional<VectorOf<K>> sample_y2_point(const K& k, const PfaffianModel& m, Rng& rng, int max_trials) {
  const auto d = static_cast<std::size_t>(m.d());
  for (int t = 0; t < max_trials; ++t) {
    const auto v = random_vector(k, rng, d);
    if (is_zero_vector(k, v)) continue;
    // Column l of M is omega_{e_l} v.
    MatrixOf<K> mk = zeros(k, d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        if (i == j || k.is_zero(v[j])) continue;
        const auto col = static_cast<std::size_t>(pair_index(static_cast<int>(i), static_cast<int>(j), m.d()));
        for (std::size_t l = 0; l < d; ++l) {
          const auto a = m.A()[l][col];
          if (a == 0) continue;
          const auto term = k.mul(k.from_int(a), v[j]);
          mk(i, l) = i < j ? k.add(mk(i, l), term) : k.sub(mk(i, l), term);
        }
      }
    const auto ker = kernel(k, mk);
    if (ker.rows == 0) continue;
    const auto p = combine(k, ker, random_vector(k, rng, ker.rows));
    if (is_zero_vector(k, p)) continue;
    if (y2_membership(k, m, p).in_y2) return p;
  }
  return std::nullopt;
}

template <class K>
std::optional<std::pair<VectorOf<K>, VectorOf<K>>> sample_y1_point(const K& k, const PfaffianModel& m, Rng& rng,
                                                                   int max_trials) {
  const auto d = static_cast<std::size_t>(m.d());
  const auto a = a_matrix(k, m);
  for (int t = 0; t < max_trials; ++t) {
    const auto x1 = random_vector(k, rng, d);
    if (is_zero_vector(k, x1)) continue;
    // Column j of N is A(x1 ^ e_j).
    MatrixOf<K> n = zeros(k, d, d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < d; ++i) {
        if (i == j || k.is_zero(x1[i])) continue;
        const auto col = static_cast<std::size_t>(pair_index(static_cast<int>(i), static_cast<int>(j), m.d()));
        for (std::size_t r = 0; r < d; ++r) {
          const auto av = a(r, col);
          if (k.is_zero(av)) continue;
          const auto term = k.mul(x1[i], av);
          n(r, j) = i < j ? k.add(n(r, j), term) : k.sub(n(r, j), term);
        }
      }
    if (rank(k, n) + 2 > d) continue;
    const auto ker = kernel(k, n);
    for (int attempt = 0; attempt < 8; ++attempt) {
      const auto x2 = combine(k, ker, random_vector(k, rng, ker.rows));
      if (rank_of_rows(k, {x1, x2}, d) == 2) return std::make_pair(x1, x2);
    }
  }
  return std::nullopt;
}

template <class K>
MatrixOf<K> kernel_of_omega(const K& k, const MatrixOf<K>& omega) {
  return kernel(k, omega);
}

template <class K>
bool is_isotropic(const K& k, const MatrixOf<K>& omega, const MatrixOf<K>& basis) {
  for (std::size_t i = 0; i < basis.rows; ++i)
    for (std::size_t j = i + 1; j < basis.rows; ++j)
      if (!k.is_zero(bilinear(k, omega, basis.row(i), basis.row(j)))) return false;
  return true;
}

template <class K>
MatrixOf<K> lagrangian_extension(const K& k, const MatrixOf<K>& omega) {
  const auto n = omega.cols;
  const auto ker = kernel(k, omega);
  std::vector<VectorOf<K>> basis;
  for (std::size_t r = 0; r < ker.rows; ++r) basis.push_back(ker.row(r));
  for (;;) {
    std::vector<VectorOf<K>> constraints;
    for (const auto& l : basis) constraints.push_back(apply(k, omega, l));
    const auto perp = kernel(k, stack(k, constraints, n));
    bool grown = false;
    for (std::size_t r = 0; r < perp.rows && !grown; ++r) {
      basis.push_back(perp.row(r));
      if (rank_of_rows(k, basis, n) == basis.size()) {
        grown = true;
      } else {
        basis.pop_back();
      }
    }
    if (!grown) break;
  }
  return stack(k, basis, n);
}

template <class K>
KernelExtension<K> kernel_and_extend(const K& k, const PfaffianModel& m, const VectorOf<K>& p,
                                     const VectorOf<K>& x1, const VectorOf<K>& x2) {
  const auto omega = omega_at(k, m, p);
  if (static_cast<int>(rank(k, omega)) != m.d() - 3) throw std::invalid_argument("p is not a smooth-rank point of Y2");
  if (!y1_membership(k, m, x1, x2)) throw std::invalid_argument("x is not a point of Y1");
  KernelExtension<K> out;
  out.kernel = kernel(k, omega);
  std::vector<VectorOf<K>> rows;
  for (std::size_t r = 0; r < out.kernel.rows; ++r) rows.push_back(out.kernel.row(r));
  rows.push_back(x1);
  rows.push_back(x2);
  const auto n = static_cast<std::size_t>(m.d());
  out.transverse = rank_of_rows(k, rows, n) == rows.size();
  out.lagrangian = out.transverse ? stack(k, rows, n) : zeros(k, 0, n);
  return out;
}

template <class K>
VectorOf<K> grad_W(const K& k, const PfaffianModel& m, const VectorOf<K>& x1, const VectorOf<K>& x2,
                   const VectorOf<K>& p) {
  const auto omega = omega_at(k, m, p);
  VectorOf<K> g = apply(k, omega, x2);
  for (const auto& e : apply(k, omega, x1)) g.push_back(k.neg(e));
  for (const auto& e : contract(k, m, x1, x2)) g.push_back(e);
  return g;
}

template <class K>
typename K::Elem eval_W(const K& k, const PfaffianModel& m, const VectorOf<K>& x1, const VectorOf<K>& x2,
                        const VectorOf<K>& p) {
  return dot(k, p, contract(k, m, x1, x2));
}

template <class K>
CriticalVerdict critical_test(const K& k, const PfaffianModel& m, const VectorOf<K>& x1, const VectorOf<K>& x2,
                              const VectorOf<K>& p) {
  CriticalVerdict v;
  v.gradient_zero = is_zero_vector(k, grad_W(k, m, x1, x2, p));
  const auto omega = omega_at(k, m, p);
  v.image_in_kernel = is_zero_vector(k, apply(k, omega, x1)) && is_zero_vector(k, apply(k, omega, x2));
  v.rank_at_most_one = rank_of_rows(k, {x1, x2}, x1.size()) <= 1;
  return v;
}

template <class K>
MatrixOf<K> quadratic_form(const K& k, const PfaffianModel& m, const VectorOf<K>& p) {
  const auto d = static_cast<std::size_t>(m.d());
  const auto omega = omega_at(k, m, p);
  // W(z) for z = (x1, x2) in Hom(S,V).
  const auto w = [&](const VectorOf<K>& z) {
    auto s = k.zero();
    for (std::size_t i = 0; i < d; ++i) {
      if (k.is_zero(z[i])) continue;
      for (std::size_t j = 0; j < d; ++j)
        if (!k.is_zero(z[d + j])) s = k.add(s, k.mul(z[i], k.mul(omega(i, j), z[d + j])));
    }
    return s;
  };
  const std::size_t n = 2 * d;
  std::vector<typename K::Elem> single(n, k.zero());
  for (std::size_t a = 0; a < n; ++a) {
    VectorOf<K> e(n, k.zero());
    e[a] = k.one();
    single[a] = w(e);
  }
  MatrixOf<K> q = zeros(k, n, n);
  for (std::size_t a = 0; a < n; ++a) {
    q(a, a) = k.add(single[a], single[a]);
    for (std::size_t b = a + 1; b < n; ++b) {
      VectorOf<K> e(n, k.zero());
      e[a] = k.one();
      e[b] = k.one();
      q(a, b) = q(b, a) = k.sub(k.sub(w(e), single[a]), single[b]);
    }
  }
  return q;
}

// R(q) = (omega_q(k_a, k_b))_{a<b}; omega is linear in q, so R(0) = 0.
template <class K>
VectorOf<K> normal_map_image(const K& k, const PfaffianModel& m, const MatrixOf<K>& kp, const VectorOf<K>& q) {
  if (is_zero_vector(k, q)) return VectorOf<K>(kp.rows * (kp.rows - 1) / 2, k.zero());
  VectorOf<K> v;
  const auto om = omega_at(k, m, q);
  for (std::size_t a = 0; a < kp.rows; ++a)
    for (std::size_t b = a + 1; b < kp.rows; ++b) v.push_back(bilinear(k, om, kp.row(a), kp.row(b)));
  return v;
}

template <class K>
MatrixOf<K> normal_map_matrix(const K& k, const PfaffianModel& m, const VectorOf<K>& p) {
  const auto d = static_cast<std::size_t>(m.d());
  const auto tangent = kernel(k, sub_pfaffian_jacobian(k, m, p));
  std::vector<VectorOf<K>> tangent_rows;
  for (std::size_t r = 0; r < tangent.rows; ++r) tangent_rows.push_back(tangent.row(r));
  const auto normal = coordinate_complement(k, tangent_rows, d);
  const auto kp = kernel(k, omega_at(k, m, p));
  std::vector<VectorOf<K>> images;
  for (const auto& q : normal) images.push_back(normal_map_image(k, m, kp, q));
  if (images.empty()) return zeros(k, 0, kp.rows * (kp.rows - 1) / 2);
  return from_rows(k, images, images.front().size());
}

template <class K>
NormalMapResult normal_map(const K& k, const PfaffianModel& m, const VectorOf<K>& p) {
  NormalMapResult out;
  const auto jac = sub_pfaffian_jacobian(k, m, p);
  out.jacobian_rank = rank(k, jac);
  const auto tangent = kernel(k, jac);
  const auto kp = kernel(k, omega_at(k, m, p));
  const auto images = normal_map_matrix(k, m, p);
  out.rank = images.rows == 0 ? 0 : rank(k, images);
  out.vanishes_at_p = is_zero_vector(k, normal_map_image(k, m, kp, p));
  out.vanishes_on_tangent = true;
  for (std::size_t r = 0; r < tangent.rows; ++r)
    if (!is_zero_vector(k, normal_map_image(k, m, kp, tangent.row(r)))) out.vanishes_on_tangent = false;
  return out;
}

template <class K>
std::vector<SchemeSlice> underlying_scheme_probe(const K& k, const PfaffianModel& m, const VectorOf<K>& p, Rng& rng,
                                                 int max_degree) {
  const auto d = static_cast<std::size_t>(m.d());
  const auto kp = kernel(k, omega_at(k, m, p));
  const auto c = kp.rows;
  // Columns k_a ^ k_b, used to read off the minors of x = coeffs * K_p.
  std::vector<std::pair<std::size_t, std::size_t>> ab;
  for (std::size_t a = 0; a < c; ++a)
    for (std::size_t b = a + 1; b < c; ++b) ab.push_back({a, b});
  MatrixOf<K> wedges = zeros(k, static_cast<std::size_t>(num_pairs(m.d())), ab.size());
  for (std::size_t t = 0; t < ab.size(); ++t) {
    const auto w = wedge(k, kp.row(ab[t].first), kp.row(ab[t].second));
    for (std::size_t r = 0; r < w.size(); ++r) wedges(r, t) = w[r];
  }
  const auto minors_at_random_point = [&]() {
    const auto x1 = combine(k, kp, random_vector(k, rng, c));
    const auto x2 = combine(k, kp, random_vector(k, rng, c));
    const auto sol = solve(k, wedges, wedge(k, x1, x2));
    if (!sol) throw std::logic_error("x1 ^ x2 outside Lambda^2 K_p");
    (void)d;
    return *sol;
  };

  std::vector<SchemeSlice> out;
  for (int t = 0; t <= max_degree; ++t) {
    SchemeSlice s;
    s.degree = t;
    s.invariant_dim = reps::sl2_invariant_dim(
        reps::decompose_sym_power(reps::RepSum(reps::GL2Weight(0, -1), static_cast<std::int64_t>(c)), t));
    s.expected = t % 2 == 0 ? binomial(t / 2 + static_cast<std::int64_t>(ab.size()) - 1, t / 2) : 0;
    if (t % 2 == 0) {
      // Exponent vectors of degree t/2 in the minors.
      std::vector<std::vector<int>> monos;
      std::vector<int> cur(ab.size(), 0);
      const auto rec = [&](auto&& self, std::size_t i, int left) -> void {
        if (i + 1 == ab.size()) {
          cur[i] = left;
          monos.push_back(cur);
          return;
        }
        for (int e = left; e >= 0; --e) {
          cur[i] = e;
          self(self, i + 1, left - e);
        }
      };
      rec(rec, 0, t / 2);
      const std::size_t points = monos.size() + 10;
      MatrixOf<K> ev = zeros(k, points, monos.size());
      for (std::size_t r = 0; r < points; ++r) {
        const auto mv = minors_at_random_point();
        for (std::size_t col = 0; col < monos.size(); ++col) {
          auto v = k.one();
          for (std::size_t i = 0; i < ab.size(); ++i)
            for (int e = 0; e < monos[col][i]; ++e) v = k.mul(v, mv[i]);
          ev(r, col) = v;
        }
      }
      s.minors_rank = static_cast<std::int64_t>(rank(k, ev));
    }
    out.push_back(s);
  }
  return out;
}

#define PFGR_INSTANTIATE(K)                                                                                        \
  template K::Elem random_elem<K>(const K&, Rng&);                                                                 \
  template VectorOf<K> random_vector<K>(const K&, Rng&, std::size_t);                                              \
  template MatrixOf<K> a_matrix<K>(const K&, const PfaffianModel&);                                                \
  template MatrixOf<K> omega_at<K>(const K&, const PfaffianModel&, const VectorOf<K>&);                            \
  template K::Elem pfaffian<K>(const K&, const MatrixOf<K>&);                                                      \
  template VectorOf<K> sub_pfaffians<K>(const K&, const MatrixOf<K>&);                                             \
  template MatrixOf<K> sub_pfaffian_jacobian<K>(const K&, const PfaffianModel&, const VectorOf<K>&);               \
  template VectorOf<K> wedge<K>(const K&, const VectorOf<K>&, const VectorOf<K>&);                                 \
  template VectorOf<K> contract<K>(const K&, const PfaffianModel&, const VectorOf<K>&, const VectorOf<K>&);        \
  template Y2Membership y2_membership<K>(const K&, const PfaffianModel&, const VectorOf<K>&);                       \
  template bool y1_membership<K>(const K&, const PfaffianModel&, const VectorOf<K>&, const VectorOf<K>&);          \
  template std::size_t y1_jacobian_rank<K>(const K&, const PfaffianModel&, const VectorOf<K>&, const VectorOf<K>&); \
  template std::size_t y2_jacobian_rank<K>(const K&, const PfaffianModel&, const VectorOf<K>&);                    \
  template std::optional<VectorOf<K>> sample_y2_point<K>(const K&, const PfaffianModel&, Rng&, int);               \
  template std::optional<std::pair<VectorOf<K>, VectorOf<K>>> sample_y1_point<K>(const K&, const PfaffianModel&,   \
                                                                                 Rng&, int);                       \
  template MatrixOf<K> kernel_of_omega<K>(const K&, const MatrixOf<K>&);                                           \
  template MatrixOf<K> lagrangian_extension<K>(const K&, const MatrixOf<K>&);                                      \
  template bool is_isotropic<K>(const K&, const MatrixOf<K>&, const MatrixOf<K>&);                                 \
  template KernelExtension<K> kernel_and_extend<K>(const K&, const PfaffianModel&, const VectorOf<K>&,             \
                                                   const VectorOf<K>&, const VectorOf<K>&);                        \
  template VectorOf<K> grad_W<K>(const K&, const PfaffianModel&, const VectorOf<K>&, const VectorOf<K>&,           \
                                 const VectorOf<K>&);                                                              \
  template K::Elem eval_W<K>(const K&, const PfaffianModel&, const VectorOf<K>&, const VectorOf<K>&,               \
                             const VectorOf<K>&);                                                                  \
  template CriticalVerdict critical_test<K>(const K&, const PfaffianModel&, const VectorOf<K>&, const VectorOf<K>&, \
                                            const VectorOf<K>&);                                                   \
  template MatrixOf<K> quadratic_form<K>(const K&, const PfaffianModel&, const VectorOf<K>&);                      \
  template NormalMapResult normal_map<K>(const K&, const PfaffianModel&, const VectorOf<K>&);                      \
  template MatrixOf<K> normal_map_matrix<K>(const K&, const PfaffianModel&, const VectorOf<K>&);                  \
  template std::vector<SchemeSlice> underlying_scheme_probe<K>(const K&, const PfaffianModel&, const VectorOf<K>&, \
                                                               Rng&, int);

PFGR_INSTANTIATE(PrimeField)
PFGR_INSTANTIATE(RationalField)
#undef PFGR_INSTANTIATE

// ---------------------------------------------------------------------------
// Censuses over small prime fields

std::int64_t gaussian_binomial(std::uint32_t q, int n, int k) {
  if (k < 0 || k > n) return 0;
  __int128 num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    __int128 a = 1, b = 1;
    for (int e = 0; e < n - i; ++e) a *= q;
    for (int e = 0; e < i + 1; ++e) b *= q;
    num *= a - 1;
    den *= b - 1;
  }
  if (num / den > INT64_MAX) throw std::overflow_error("gaussian binomial exceeds int64");
  return static_cast<std::int64_t>(num / den);
}

namespace {

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r = checked_mul(r, b);
  return r;
}

// Calls fn(v) for one normalized representative of every point of P^(n-1)(F_q).
template <class Fn>
void for_each_projective_point(std::uint32_t q, int n, Fn&& fn) {
  std::vector<std::uint32_t> v(static_cast<std::size_t>(n), 0);
  for (int lead = 0; lead < n; ++lead) {
    std::fill(v.begin(), v.end(), 0);
    v[static_cast<std::size_t>(lead)] = 1;
    const int free = n - 1 - lead;
    const std::int64_t total = ipow(q, free);
    for (std::int64_t code = 0; code < total; ++code) {
      std::int64_t c = code;
      for (int i = lead + 1; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(c % q);
        c /= q;
      }
      fn(v);
    }
  }
}

}  // namespace

Census rank_census(const PfaffianModel& m, std::uint32_t q, std::int64_t budget) {
  const PrimeField f(q);
  const int d = m.d();
  const auto np = static_cast<std::size_t>(num_pairs(d));
  Census out;
  out.q = q;
  out.a_full_rank = static_cast<int>(rank(f, a_matrix(f, m))) == d;
  const std::int64_t proj_points = (ipow(q, d) - 1) / (q - 1);
  if (proj_points > budget) throw std::length_error("census of P^(d-1)(F_q) exceeds enumeration budget");

  for (int r = 0; r < d; r += 2) out.rank_counts[r] = 0;
  for_each_projective_point(q, d, [&](const std::vector<std::uint32_t>& v) {
    ++out.points;
    // omega_at rejects p = 0, which never occurs for normalized points.
    const auto omega = omega_at(f, m, v);
    const auto rk = static_cast<int>(rank(f, omega));
    ++out.rank_counts[rk];
    if (rk <= d - 5) ++out.singular;
    const auto pf = sub_pfaffians(f, omega);
    const bool vanish = is_zero_vector(f, pf);
    if (vanish != (rk <= d - 3)) ++out.pfaffian_mismatches;
  });

  const auto gr = gaussian_binomial(q, d, 2);
  if (gr > budget) return out;
  out.grassmannian_points = 0;
  out.y1_points = 0;
  // A mod q, column-major by wedge index for the inner loop.
  std::vector<std::uint32_t> a(static_cast<std::size_t>(d) * np);
  for (int r = 0; r < d; ++r)
    for (std::size_t c = 0; c < np; ++c) a[c * static_cast<std::size_t>(d) + static_cast<std::size_t>(r)] = f.from_int(m.A()[static_cast<std::size_t>(r)][c]);
  std::vector<std::uint32_t> x1(static_cast<std::size_t>(d)), x2(static_cast<std::size_t>(d)), minors(np);
  std::vector<std::uint64_t> acc(static_cast<std::size_t>(d));
  // Reduced row echelon 2 x d matrices with pivots i < j.
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      std::vector<int> free1, free2;
      for (int c = i + 1; c < d; ++c)
        if (c != j) free1.push_back(c);
      for (int c = j + 1; c < d; ++c) free2.push_back(c);
      const std::int64_t n1 = ipow(q, static_cast<int>(free1.size())), n2 = ipow(q, static_cast<int>(free2.size()));
      for (std::int64_t c1 = 0; c1 < n1; ++c1) {
        std::fill(x1.begin(), x1.end(), 0);
        x1[static_cast<std::size_t>(i)] = 1;
        std::int64_t t = c1;
        for (int c : free1) x1[static_cast<std::size_t>(c)] = static_cast<std::uint32_t>(t % q), t /= q;
        for (std::int64_t c2 = 0; c2 < n2; ++c2) {
          std::fill(x2.begin(), x2.end(), 0);
          x2[static_cast<std::size_t>(j)] = 1;
          t = c2;
          for (int c : free2) x2[static_cast<std::size_t>(c)] = static_cast<std::uint32_t>(t % q), t /= q;
          ++*out.grassmannian_points;
          for (int s = 0; s < d; ++s)
            for (int u = s + 1; u < d; ++u)
              minors[static_cast<std::size_t>(pair_index(s, u, d))] = static_cast<std::uint32_t>(
                  (static_cast<std::uint64_t>(x1[static_cast<std::size_t>(s)]) * x2[static_cast<std::size_t>(u)] + q * q -
                   static_cast<std::uint64_t>(x1[static_cast<std::size_t>(u)]) * x2[static_cast<std::size_t>(s)]) % q);
          std::fill(acc.begin(), acc.end(), 0);
          for (std::size_t c = 0; c < np; ++c) {
            if (minors[c] == 0) continue;
            for (std::size_t r = 0; r < static_cast<std::size_t>(d); ++r) acc[r] += static_cast<std::uint64_t>(a[c * static_cast<std::size_t>(d) + r]) * minors[c];
          }
          bool zero = true;
          for (auto s : acc)
            if (s % q != 0) zero = false;
          if (zero) ++*out.y1_points;
        }
      }
    }
  return out;
}

std::int64_t y1_count_by_points(const PfaffianModel& m, std::uint32_t q) {
  const PrimeField f(q);
  const auto d = static_cast<std::size_t>(m.d());
  const auto a = a_matrix(f, m);
  std::int64_t incidences = 0;
  for_each_projective_point(q, m.d(), [&](const std::vector<std::uint32_t>& x1) {
    MatrixOf<PrimeField> n = zeros(f, d, d);
    for (std::size_t j = 0; j < d; ++j) {
      VectorOf<PrimeField> e(d, 0);
      e[j] = 1;
      const auto col = apply(f, a, wedge(f, x1, e));
      for (std::size_t r = 0; r < d; ++r) n(r, j) = col[r];
    }
    const auto k = static_cast<int>(d - rank(f, n));
    incidences += (ipow(q, k - 1) - 1) / (q - 1);
  });
  if (incidences % (q + 1) != 0) throw std::logic_error("line incidence count not divisible by q + 1");
  return incidences / (q + 1);
}

std::string Census::csv() const {
  std::ostringstream os;
  os << "stratum,count\n";
  for (auto it = rank_counts.rbegin(); it != rank_counts.rend(); ++it)
    os << "rank_" << it->first << "," << it->second << "\n";
  os << "pfaffian_mismatch," << pfaffian_mismatches << "\n";
  if (grassmannian_points) os << "grassmannian," << *grassmannian_points << "\n";
  if (y1_points) os << "y1," << *y1_points << "\n";
  return os.str();
}

nlohmann::json Census::to_json() const {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [r, c] : rank_counts) counts["rank_" + std::to_string(r)] = c;
  nlohmann::json j = {{"q", q}, {"a_full_rank", a_full_rank}, {"points", points}, {"rank_counts", counts},
                      {"singular", singular}, {"pfaffian_mismatches", pfaffian_mismatches}};
  j["grassmannian_points"] = grassmannian_points ? nlohmann::json(*grassmannian_points) : nlohmann::json();
  j["y1_points"] = y1_points ? nlohmann::json(*y1_points) : nlohmann::json();
  return j;
}

// ---------------------------------------------------------------------------
// Checks

namespace {

template <class K>
nlohmann::json vec_json(const K& k, const VectorOf<K>& v) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : v) j.push_back(k.str(e));
  return j;
}

nlohmann::json model_params(const PfaffianModel& m) {
  return {{"d", m.d()}, {"field", m.field().name()}, {"seed", m.seed()},
          {"sampling_field", "F_" + std::to_string(sampling_prime(m.field()))}};
}

// Expected trials per Y1 hit grow like q^2; allow a wide margin.
int y1_trial_budget(std::uint32_t q) { return static_cast<int>(std::min<std::int64_t>(60LL * q * q, 2'000'000)); }
int y2_trial_budget(std::uint32_t q) { return static_cast<int>(std::min<std::int64_t>(60LL * q, 2'000'000)); }

constexpr std::size_t kMaxWitnesses = 5;

}  // namespace

CheckRecord full_rank_check(const PfaffianModel& m) {
  CheckRecord r;
  r.check_name = "a_surjective";
  r.anchor = "A: Lambda^2 V -> V is surjective";
  r.parameters = model_params(m);
  std::size_t rk;
  if (m.field().kind == FieldSpec::Kind::rational) {
    const RationalField k;
    rk = rank(k, a_matrix(k, m));
  } else {
    const PrimeField k(m.field().q);
    rk = rank(k, a_matrix(k, m));
  }
  r.passed = static_cast<int>(rk) == m.d();
  r.witness = {{"rank", rk}};
  return r;
}

CheckRecord census_check(const PfaffianModel& m, const std::vector<std::uint32_t>& qs) {
  CheckRecord r;
  r.check_name = "singular_stratum_census";
  r.anchor = "the linear section of the Pfaffian locus avoids the rank <= d-5 stratum";
  r.parameters = model_params(m);
  r.parameters["census_q"] = qs;
  r.passed = true;
  nlohmann::json per_q = nlohmann::json::array();
  for (auto q : qs) {
    const auto c = rank_census(m, q);
    std::int64_t partition = 0;
    for (const auto& [rk, n] : c.rank_counts) partition += n;
    const bool ok = c.a_full_rank && c.singular == 0 && c.pfaffian_mismatches == 0 && partition == c.points &&
                    c.points == (ipow(q, m.d()) - 1) / (q - 1) &&
                    (!c.grassmannian_points || *c.grassmannian_points == gaussian_binomial(q, m.d(), 2));
    r.passed = r.passed && ok;
    auto j = c.to_json();
    j["ok"] = ok;
    per_q.push_back(j);
  }
  r.witness = {{"censuses", per_q}};
  return r;
}

CheckRecord y1_smoothness_check(const PfaffianModel& m, int samples, std::uint64_t seed) {
  const auto q = sampling_prime(m.field());
  const PrimeField k(q);
  Rng rng(seed ^ 0x5931);
  CheckRecord r;
  r.check_name = "y1_smoothness_samples";
  r.anchor = "Y1 is smooth: the d Pluecker conditions have independent differentials on Gr(2,d)";
  r.parameters = model_params(m);
  r.parameters["samples"] = samples;
  std::map<std::size_t, int> ranks;
  nlohmann::json failures = nlohmann::json::array();
  int found = 0;
  for (int s = 0; s < samples; ++s) {
    const auto pt = sample_y1_point(k, m, rng, y1_trial_budget(q));
    if (!pt) break;
    ++found;
    const auto rk = y1_jacobian_rank(k, m, pt->first, pt->second);
    ++ranks[rk];
    if (static_cast<int>(rk) != m.d() && failures.size() < kMaxWitnesses)
      failures.push_back({{"x1", vec_json(k, pt->first)}, {"x2", vec_json(k, pt->second)}, {"rank", rk}});
  }
  r.passed = found == samples && ranks.size() == 1 && static_cast<int>(ranks.begin()->first) == m.d();
  r.witness = {{"found", found}, {"expected_rank", m.d()}, {"rank_histogram", ranks}, {"failures", failures}};
  if (found < samples) r.witness["note"] = "point search exhausted its budget";
  return r;
}

CheckRecord y2_smoothness_check(const PfaffianModel& m, int samples, std::uint64_t seed) {
  const auto q = sampling_prime(m.field());
  const PrimeField k(q);
  Rng rng(seed ^ 0x5932);
  CheckRecord r;
  r.check_name = "y2_smoothness_samples";
  r.anchor = "Y2 is smooth: the sub-Pfaffian Jacobian has rank 3 on Y2";
  r.parameters = model_params(m);
  r.parameters["samples"] = samples;
  std::map<std::size_t, int> ranks;
  nlohmann::json failures = nlohmann::json::array();
  int found = 0;
  for (int s = 0; s < samples; ++s) {
    const auto p = sample_y2_point(k, m, rng, y2_trial_budget(q));
    if (!p) break;
    ++found;
    const auto rk = y2_jacobian_rank(k, m, *p);
    ++ranks[rk];
    if (rk != 3 && failures.size() < kMaxWitnesses) failures.push_back({{"p", vec_json(k, *p)}, {"rank", rk}});
  }
  r.passed = found == samples && ranks.size() == 1 && ranks.begin()->first == 3;
  r.witness = {{"found", found}, {"expected_rank", 3}, {"rank_histogram", ranks}, {"failures", failures}};
  if (found < samples) r.witness["note"] = "point search exhausted its budget";
  return r;
}

CheckRecord rank_doubling_check(const PfaffianModel& m, int random_points, int y2_points, std::uint64_t seed) {
  const auto q = sampling_prime(m.field());
  const PrimeField k(q);
  Rng rng(seed ^ 0x5933);
  CheckRecord r;
  r.check_name = "w_rank_doubling";
  r.anchor = "rank W_p = 2 rank omega_p, and rank omega_p is even";
  r.parameters = model_params(m);
  r.parameters["random_points"] = random_points;
  r.parameters["y2_points"] = y2_points;
  std::map<std::string, int> pairs;
  nlohmann::json failures = nlohmann::json::array();
  int tested = 0;
  const auto test = [&](const VectorOf<PrimeField>& p) {
    ++tested;
    const auto ro = rank(k, omega_at(k, m, p));
    const auto rq = rank(k, quadratic_form(k, m, p));
    ++pairs[std::to_string(ro) + "->" + std::to_string(rq)];
    if ((rq != 2 * ro || ro % 2 != 0) && failures.size() < kMaxWitnesses)
      failures.push_back({{"p", vec_json(k, p)}, {"rank_omega", ro}, {"rank_W", rq}});
    return rq == 2 * ro && ro % 2 == 0;
  };
  bool ok = true;
  for (int s = 0; s < random_points; ++s) {
    auto p = random_vector(k, rng, static_cast<std::size_t>(m.d()));
    if (is_zero_vector(k, p)) p[0] = 1;
    ok = test(p) && ok;
  }
  int y2_found = 0;
  for (int s = 0; s < y2_points; ++s) {
    const auto p = sample_y2_point(k, m, rng, y2_trial_budget(q));
    if (!p) break;
    ++y2_found;
    ok = test(*p) && ok;
  }
  r.passed = ok && y2_found == y2_points;
  r.witness = {{"tested", tested}, {"y2_found", y2_found}, {"rank_omega_to_rank_W", pairs}, {"failures", failures}};
  return r;
}

CheckRecord critical_locus_check(const PfaffianModel& m, int positives, int near_misses, int random_points,
                                 std::uint64_t seed) {
  const auto q = sampling_prime(m.field());
  const PrimeField k(q);
  const auto d = static_cast<std::size_t>(m.d());
  Rng rng(seed ^ 0x5934);
  CheckRecord r;
  r.check_name = "critical_locus_equivalence";
  r.anchor = "dW(x,p) = 0 iff Im(x) lies in ker omega_p and rank x <= 1";
  r.parameters = model_params(m);
  r.parameters["positives"] = positives;
  r.parameters["near_misses"] = near_misses;
  r.parameters["random_points"] = random_points;

  std::vector<VectorOf<PrimeField>> pool;
  for (int s = 0; s < 64; ++s)
    if (auto p = sample_y2_point(k, m, rng, y2_trial_budget(q))) pool.push_back(*p);
  if (pool.empty()) {
    r.passed = false;
    r.witness = {{"note", "no points of Y2 found"}};
    return r;
  }

  int disagreements = 0, positives_not_critical = 0, near_misses_critical = 0, random_critical = 0;
  nlohmann::json failures = nlohmann::json::array();
  const auto record = [&](const char* set, const VectorOf<PrimeField>& x1, const VectorOf<PrimeField>& x2,
                          const VectorOf<PrimeField>& p, bool expect_critical) {
    const auto v = critical_test(k, m, x1, x2, p);
    const bool bad_equiv = v.gradient_zero != v.conditions();
    const bool bad_expect = v.gradient_zero != expect_critical;
    disagreements += bad_equiv;
    if ((bad_equiv || bad_expect) && failures.size() < kMaxWitnesses)
      failures.push_back({{"set", set}, {"x1", vec_json(k, x1)}, {"x2", vec_json(k, x2)}, {"p", vec_json(k, p)},
                          {"gradient_zero", v.gradient_zero}, {"conditions", v.conditions()}});
    return v.gradient_zero;
  };
  const auto nonzero_scalar = [&] { return static_cast<PrimeField::Elem>(1 + rng.below(q - 1)); };
  const auto random_p = [&] {
    auto p = random_vector(k, rng, d);
    if (is_zero_vector(k, p)) p[0] = 1;
    return p;
  };
  const auto scale = [&](const VectorOf<PrimeField>& v, PrimeField::Elem c) {
    VectorOf<PrimeField> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = k.mul(c, v[i]);
    return out;
  };

  for (int s = 0; s < positives; ++s) {
    // Alternate between Y2 (3-dim kernel) and generic p (1-dim kernel).
    const auto p = s % 2 == 0 ? pool[static_cast<std::size_t>(s / 2) % pool.size()] : random_p();
    const auto kp = kernel(k, omega_at(k, m, p));
    VectorOf<PrimeField> x1(d, 0), x2(d, 0);
    if (s % 50 != 49) {
      const auto v = combine(k, kp, random_vector(k, rng, kp.rows));
      x1 = scale(v, random_elem(k, rng));
      x2 = scale(v, random_elem(k, rng));
    }
    if (!record("positive", x1, x2, p, true)) ++positives_not_critical;
  }
  for (int s = 0; s < near_misses; ++s) {
    VectorOf<PrimeField> x1, x2, p;
    if (s % 2 == 0) {
      // Rank 2 with image inside K_p.
      p = pool[static_cast<std::size_t>(s / 2) % pool.size()];
      const auto kp = kernel(k, omega_at(k, m, p));
      do {
        x1 = combine(k, kp, random_vector(k, rng, kp.rows));
        x2 = combine(k, kp, random_vector(k, rng, kp.rows));
      } while (rank_of_rows(k, {x1, x2}, d) != 2);
    } else {
      // Rank 1 with image outside K_p.
      p = (s / 2) % 2 == 0 ? pool[static_cast<std::size_t>(s / 2) % pool.size()] : random_p();
      const auto omega = omega_at(k, m, p);
      VectorOf<PrimeField> v;
      do {
        v = random_vector(k, rng, d);
      } while (is_zero_vector(k, apply(k, omega, v)));
      x1 = scale(v, nonzero_scalar());
      x2 = scale(v, random_elem(k, rng));
    }
    if (record("near_miss", x1, x2, p, false)) ++near_misses_critical;
  }
  for (int s = 0; s < random_points; ++s) {
    const auto x1 = random_vector(k, rng, d), x2 = random_vector(k, rng, d);
    const auto p = random_p();
    const auto v = critical_test(k, m, x1, x2, p);
    if (v.gradient_zero != v.conditions()) {
      ++disagreements;
      if (failures.size() < kMaxWitnesses)
        failures.push_back({{"set", "random"}, {"x1", vec_json(k, x1)}, {"x2", vec_json(k, x2)}, {"p", vec_json(k, p)}});
    }
    random_critical += v.gradient_zero;
  }
  r.passed = disagreements == 0 && positives_not_critical == 0 && near_misses_critical == 0;
  r.witness = {{"disagreements", disagreements},
               {"positives_not_critical", positives_not_critical},
               {"near_misses_critical", near_misses_critical},
               {"random_critical", random_critical},
               {"y2_pool", pool.size()},
               {"failures", failures}};
  return r;
}

CheckRecord normal_map_check(const PfaffianModel& m, int samples, std::uint64_t seed) {
  const auto q = sampling_prime(m.field());
  const PrimeField k(q);
  Rng rng(seed ^ 0x5935);
  CheckRecord r;
  r.check_name = "normal_map_isomorphism";
  r.anchor = "dW induces an isomorphism N_{Y2/P} -> Hom(Lambda^2 K_p, Lambda^2 S) (both of dimension 3)";
  r.parameters = model_params(m);
  r.parameters["samples"] = samples;
  std::map<std::size_t, int> ranks;
  int found = 0, not_smooth = 0, not_vanishing = 0;
  nlohmann::json failures = nlohmann::json::array();
  for (int s = 0; s < samples; ++s) {
    const auto p = sample_y2_point(k, m, rng, y2_trial_budget(q));
    if (!p) break;
    ++found;
    const auto nm = normal_map(k, m, *p);
    ++ranks[nm.rank];
    const bool smooth = nm.jacobian_rank == 3;
    not_smooth += !smooth;
    const bool vanish = nm.vanishes_at_p && nm.vanishes_on_tangent;
    not_vanishing += !vanish;
    if ((!smooth || !vanish || nm.rank != 3) && failures.size() < kMaxWitnesses)
      failures.push_back({{"p", vec_json(k, *p)}, {"jacobian_rank", nm.jacobian_rank}, {"rank", nm.rank},
                          {"vanishes_at_p", nm.vanishes_at_p}, {"vanishes_on_tangent", nm.vanishes_on_tangent}});
  }
  r.passed = found == samples && not_smooth == 0 && not_vanishing == 0 && ranks.size() == 1 &&
             ranks.begin()->first == 3;
  r.witness = {{"found", found}, {"rank_histogram", ranks}, {"smoothness_precondition_failures", not_smooth},
               {"tangent_vanishing_failures", not_vanishing}, {"failures", failures}};
  return r;
}

CheckRecord isotropic_extension_check(const PfaffianModel& m, int samples, std::uint64_t seed) {
  const auto q = sampling_prime(m.field());
  const PrimeField k(q);
  const auto d = static_cast<std::size_t>(m.d());
  Rng rng(seed ^ 0x5936);
  CheckRecord r;
  r.check_name = "isotropic_extension";
  r.anchor = "L_p = K_p + Im(x) is maximal isotropic where K_p meets Im(x) trivially; W vanishes on Hom(S, L_p)";
  r.parameters = model_params(m);
  r.parameters["samples"] = samples;
  const std::size_t lag_dim = (d + 3) / 2;
  int tested = 0, transverse = 0, greedy_ok = 0, bad = 0;
  nlohmann::json failures = nlohmann::json::array();
  for (int s = 0; s < samples; ++s) {
    const auto p = sample_y2_point(k, m, rng, y2_trial_budget(q));
    if (!p) break;
    const auto omega = omega_at(k, m, *p);
    if (static_cast<int>(rank(k, omega)) != m.d() - 3) continue;
    ++tested;
    bool ok = true;
    const auto kp = kernel(k, omega);
    ok = ok && kp.rows == 3;
    // Greedy completion of the kernel.
    const auto lag = lagrangian_extension(k, omega);
    const bool greedy = lag.rows == lag_dim && is_isotropic(k, omega, lag);
    greedy_ok += greedy;
    ok = ok && greedy;
    // W vanishes on Hom(S, L) and on rank-one maps into K_p.
    for (int t = 0; t < 4; ++t) {
      const auto x1 = combine(k, lag, random_vector(k, rng, lag.rows));
      const auto x2 = combine(k, lag, random_vector(k, rng, lag.rows));
      ok = ok && k.is_zero(eval_W(k, m, x1, x2, *p));
      const auto v = combine(k, kp, random_vector(k, rng, kp.rows));
      VectorOf<PrimeField> w(d);
      const auto c = random_elem(k, rng);
      for (std::size_t i = 0; i < d; ++i) w[i] = k.mul(c, v[i]);
      ok = ok && k.is_zero(eval_W(k, m, v, w, *p));
    }
    // K_p + Im(x) for x in Y1; only dimensionally possible when 3 + 2 = (d+3)/2.
    if (lag_dim == 5) {
      if (const auto x = sample_y1_point(k, m, rng, y1_trial_budget(q))) {
        const auto ext = kernel_and_extend(k, m, *p, x->first, x->second);
        if (ext.transverse) {
          ++transverse;
          ok = ok && ext.lagrangian.rows == 5 && is_isotropic(k, omega, ext.lagrangian);
        }
      }
    }
    if (!ok) {
      ++bad;
      if (failures.size() < kMaxWitnesses) failures.push_back({{"p", vec_json(k, *p)}});
    }
  }
  r.passed = tested == samples && bad == 0 && (lag_dim != 5 || transverse > 0);
  r.witness = {{"tested", tested}, {"lagrangian_dim", lag_dim}, {"greedy_extensions_ok", greedy_ok},
               {"transverse_kernel_plus_image", transverse}, {"failures", failures}};
  if (lag_dim != 5) r.witness["note"] = "dim K_p + 2 exceeds the maximal isotropic dimension; greedy extension only";
  return r;
}

CheckRecord underlying_scheme_check(const PfaffianModel& m, std::uint64_t seed) {
  const auto q = sampling_prime(m.field());
  const PrimeField k(q);
  Rng rng(seed ^ 0x5937);
  CheckRecord r;
  r.check_name = "underlying_scheme_invariants";
  r.anchor = "SL(2)-invariants on Hom(S, K_p) form a polynomial ring on the three 2x2 minors";
  r.parameters = model_params(m);
  r.parameters["max_degree"] = 6;
  const auto p = sample_y2_point(k, m, rng, y2_trial_budget(q));
  if (!p) {
    r.passed = false;
    r.witness = {{"note", "no points of Y2 found"}};
    return r;
  }
  const auto slices = underlying_scheme_probe(k, m, *p, rng, 6);
  nlohmann::json rows = nlohmann::json::array();
  r.passed = true;
  for (const auto& s : slices) {
    const bool ok = s.invariant_dim == s.expected && s.minors_rank == s.expected;
    r.passed = r.passed && ok;
    rows.push_back({{"degree", s.degree}, {"invariant_dim", s.invariant_dim}, {"minors_rank", s.minors_rank},
                    {"expected", s.expected}});
  }
  r.witness = {{"p", vec_json(k, *p)}, {"slices", rows}};
  return r;
}

CheckRecord rational_pfaffian_check(const PfaffianModel& m, int samples, std::uint64_t seed) {
  const RationalField k;
  Rng rng(seed ^ 0x5938);
  CheckRecord r;
  r.check_name = "rational_pfaffian_consistency";
  r.anchor = "rank omega_p <= d-3 iff all principal sub-Pfaffians vanish";
  r.parameters = model_params(m);
  r.parameters["samples"] = samples;
  std::map<std::size_t, int> ranks;
  int mismatches = 0;
  for (int s = 0; s < samples; ++s) {
    auto p = random_vector(k, rng, static_cast<std::size_t>(m.d()));
    if (is_zero_vector(k, p)) p[0] = 1;
    const auto omega = omega_at(k, m, p);
    const auto rk = rank(k, omega);
    ++ranks[rk];
    const bool vanish = is_zero_vector(k, sub_pfaffians(k, omega));
    if (vanish != (static_cast<int>(rk) <= m.d() - 3)) ++mismatches;
  }
  r.passed = mismatches == 0;
  r.witness = {{"rank_histogram", ranks}, {"mismatches", mismatches}};
  return r;
}

// ---------------------------------------------------------------------------
// Model generation

std::vector<CheckRecord> model_certificates(const PfaffianModel& m, const ModelOptions& opts) {
  std::vector<CheckRecord> out;
  out.push_back(full_rank_check(m));
  CheckRecord census;
  census.check_name = "singular_stratum_census_quick";
  census.anchor = "the linear section of the Pfaffian locus avoids the rank <= d-5 stratum";
  census.passed = true;
  nlohmann::json per_q = nlohmann::json::array();
  for (auto q : opts.census_qs) {
    // Projective census only; the Grassmannian sweep is for reporting.
    const auto c = rank_census(m, q, /*budget=*/(ipow(q, m.d()) - 1) / (q - 1));
    const bool ok = c.a_full_rank && c.singular == 0 && c.pfaffian_mismatches == 0;
    census.passed = census.passed && ok;
    per_q.push_back({{"q", q}, {"ok", ok}});
  }
  census.witness = {{"censuses", per_q}};
  out.push_back(census);
  if (opts.smoothness_samples > 0) {
    out.push_back(y1_smoothness_check(m, opts.smoothness_samples, m.seed()));
    out.push_back(y2_smoothness_check(m, opts.smoothness_samples, m.seed()));
  }
  return out;
}

PfaffianModel random_model(std::uint64_t seed, FieldSpec field, int d, const ModelOptions& opts) {
  if (d < 5 || d % 2 == 0) throw std::invalid_argument("d must be odd and at least 5");
  if (field.kind == FieldSpec::Kind::prime && (field.q < 5 || !is_prime(field.q)))
    throw std::invalid_argument("field must be Q or F_q with q >= 5 prime");
  if (opts.entry_bound < 1) throw std::invalid_argument("entry bound must be positive");
  Rng master(seed);
  std::string last_failure = "none";
  for (int attempt = 1; attempt <= opts.max_attempts; ++attempt) {
    Rng rng = master.fork(static_cast<std::uint64_t>(attempt));
    IntMatrix a(static_cast<std::size_t>(d), std::vector<std::int64_t>(static_cast<std::size_t>(num_pairs(d))));
    for (auto& row : a)
      for (auto& e : row) e = rng.uniform(-opts.entry_bound, opts.entry_bound);
    std::optional<PfaffianModel> cand;
    try {
      cand.emplace(d, field, seed, std::move(a), opts.entry_bound, attempt);
    } catch (const std::invalid_argument& e) {
      last_failure = e.what();
      continue;
    }
    bool ok = true;
    for (const auto& c : model_certificates(*cand, opts))
      if (!c.passed) {
        ok = false;
        last_failure = c.check_name;
        break;
      }
    if (ok) return *cand;
  }
  throw std::runtime_error("no generic A found in " + std::to_string(opts.max_attempts) +
                           " attempts; last failing certificate: " + last_failure);
}

}  // namespace pfgr::geometry
