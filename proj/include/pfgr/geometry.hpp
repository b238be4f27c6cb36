#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pfgr/check.hpp"
#include "pfgr/field.hpp"
#include "pfgr/linalg.hpp"

// A: Lambda^2 V -> V with dim V = d odd, the pencil of 2-forms
// omega_p = p o A for p in P(V^dual), the rank strata
//   Y2 = {rank omega_p <= d-3} in P^(d-1),  Y1 = {U in Gr(2,V) : A(Lambda^2 U) = 0},
// and the superpotential W(x, p) = p(A(x1 ^ x2)) = x1^T omega_p x2 on Hom(S,V) x V^dual.
//
// Exact arithmetic throughout: K is PrimeField or RationalField.
namespace pfgr::geometry {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

struct FieldSpec {
  enum class Kind { prime, rational };
  Kind kind = Kind::prime;
  std::uint32_t q = 101;

  static FieldSpec prime(std::uint32_t q) { return {Kind::prime, q}; }
  static FieldSpec rational() { return {Kind::rational, 0}; }
  std::string name() const;
  nlohmann::json to_json() const;
  static FieldSpec from_json(const nlohmann::json& j);
  bool operator==(const FieldSpec&) const = default;
};

// Prime used for point sampling: the model's q when q >= 101, else 101.
// Tiny fields have too few points, and rational points of Y1, Y2 are not
// reachable by random search.
std::uint32_t sampling_prime(const FieldSpec& f);

class PfaffianModel {
 public:
  // Throws std::invalid_argument on bad shape, even or small d, or a zero row.
  PfaffianModel(int d, FieldSpec field, std::uint64_t seed, IntMatrix a, int entry_bound = 9,
                int attempts = 1);

  int d() const { return d_; }
  const FieldSpec& field() const { return field_; }
  std::uint64_t seed() const { return seed_; }
  const IntMatrix& A() const { return a_; }
  int entry_bound() const { return entry_bound_; }
  int attempts() const { return attempts_; }

  nlohmann::json to_json() const;
  static PfaffianModel from_json(const nlohmann::json& j);

 private:
  int d_;
  FieldSpec field_;
  std::uint64_t seed_;
  IntMatrix a_;
  int entry_bound_;
  int attempts_;
};

// Wedge basis e_i ^ e_j, i < j, in lexicographic order.
int num_pairs(int d);
int pair_index(int i, int j, int d);

template <class K>
typename K::Elem random_elem(const K& k, Rng& rng);
template <class K>
VectorOf<K> random_vector(const K& k, Rng& rng, std::size_t n);

template <class K>
MatrixOf<K> a_matrix(const K& k, const PfaffianModel& m);

// Throws std::invalid_argument for p = 0.
template <class K>
MatrixOf<K> omega_at(const K& k, const PfaffianModel& m, const VectorOf<K>& p);

// Pfaffian of an even-size antisymmetric matrix, by row expansion.
template <class K>
typename K::Elem pfaffian(const K& k, const MatrixOf<K>& m);

// The d principal (d-1)x(d-1) sub-Pfaffians of omega (d odd); entry i omits index i.
template <class K>
VectorOf<K> sub_pfaffians(const K& k, const MatrixOf<K>& omega);

// d x d matrix: row i is the gradient in p of the i-th sub-Pfaffian of omega_p.
template <class K>
MatrixOf<K> sub_pfaffian_jacobian(const K& k, const PfaffianModel& m, const VectorOf<K>& p);

template <class K>
VectorOf<K> wedge(const K& k, const VectorOf<K>& x1, const VectorOf<K>& x2);
// A(x1 ^ x2).
template <class K>
VectorOf<K> contract(const K& k, const PfaffianModel& m, const VectorOf<K>& x1, const VectorOf<K>& x2);

struct Y2Membership {
  std::size_t rank = 0;
  bool in_y2 = false;     // rank <= d-3
  bool singular = false;  // rank <= d-5
};

template <class K>
Y2Membership y2_membership(const K& k, const PfaffianModel& m, const VectorOf<K>& p);
// Throws std::invalid_argument unless x1, x2 are independent.
template <class K>
bool y1_membership(const K& k, const PfaffianModel& m, const VectorOf<K>& x1, const VectorOf<K>& x2);

// Rank of the d x 2(d-2) derivative of U -> A(Lambda^2 U) along the tangent
// space of Gr(2,d) at span(x1,x2). Smooth points of Y1 have rank d.
template <class K>
std::size_t y1_jacobian_rank(const K& k, const PfaffianModel& m, const VectorOf<K>& x1,
                             const VectorOf<K>& x2);
// Smooth points of Y2 have rank 3.
template <class K>
std::size_t y2_jacobian_rank(const K& k, const PfaffianModel& m, const VectorOf<K>& p);

// Random search: pick k in V, solve omega_p k = 0 for p, keep p if it lies on Y2.
template <class K>
std::optional<VectorOf<K>> sample_y2_point(const K& k, const PfaffianModel& m, Rng& rng, int max_trials);
// Random search: pick x1, keep it if x2 -> A(x1 ^ x2) has a second kernel direction.
template <class K>
std::optional<std::pair<VectorOf<K>, VectorOf<K>>> sample_y1_point(const K& k, const PfaffianModel& m,
                                                                   Rng& rng, int max_trials);

// Basis rows of the kernel of omega_p.
template <class K>
MatrixOf<K> kernel_of_omega(const K& k, const MatrixOf<K>& omega);
// Maximal isotropic subspace containing the kernel: repeatedly add a vector
// of L^perp not in L. Dimension (d + dim ker)/2.
template <class K>
MatrixOf<K> lagrangian_extension(const K& k, const MatrixOf<K>& omega);
template <class K>
bool is_isotropic(const K& k, const MatrixOf<K>& omega, const MatrixOf<K>& basis);

template <class K>
struct KernelExtension {
  MatrixOf<K> kernel;      // K_p, dim 3
  MatrixOf<K> lagrangian;  // K_p + Im(x), empty when K_p meets Im(x)
  bool transverse = false;
};

// Requires rank omega_p = d-3 and x in Y1; throws std::invalid_argument otherwise.
template <class K>
KernelExtension<K> kernel_and_extend(const K& k, const PfaffianModel& m, const VectorOf<K>& p,
                                     const VectorOf<K>& x1, const VectorOf<K>& x2);

// Partials of W in the order (x1, x2, p): (omega x2, -omega x1, A(x1 ^ x2)).
template <class K>
VectorOf<K> grad_W(const K& k, const PfaffianModel& m, const VectorOf<K>& x1, const VectorOf<K>& x2,
                   const VectorOf<K>& p);
template <class K>
typename K::Elem eval_W(const K& k, const PfaffianModel& m, const VectorOf<K>& x1, const VectorOf<K>& x2,
                        const VectorOf<K>& p);

struct CriticalVerdict {
  bool gradient_zero = false;
  bool image_in_kernel = false;
  bool rank_at_most_one = false;
  bool conditions() const { return image_in_kernel && rank_at_most_one; }
};

template <class K>
CriticalVerdict critical_test(const K& k, const PfaffianModel& m, const VectorOf<K>& x1,
                              const VectorOf<K>& x2, const VectorOf<K>& p);

// Symmetric 2d x 2d matrix of the quadratic form W_p on Hom(S,V), by
// polarization of W evaluations (needs char != 2).
template <class K>
MatrixOf<K> quadratic_form(const K& k, const PfaffianModel& m, const VectorOf<K>& p);

struct NormalMapResult {
  std::size_t jacobian_rank = 0;
  std::size_t rank = 0;  // rank of N -> Hom(Lambda^2 K_p, C), expected 3
  bool vanishes_at_p = false;
  bool vanishes_on_tangent = false;
};

// q -> (omega_q(k_a, k_b))_{a<b} on a complement of the tangent space at p.
template <class K>
NormalMapResult normal_map(const K& k, const PfaffianModel& m, const VectorOf<K>& p);
// Rows: R(q) for q running over a coordinate complement of the tangent space.
template <class K>
MatrixOf<K> normal_map_matrix(const K& k, const PfaffianModel& m, const VectorOf<K>& p);

struct SchemeSlice {
  int degree = 0;
  std::int64_t invariant_dim = 0;  // from GL(2) characters
  std::int64_t minors_rank = 0;    // span of monomials in the three 2x2 minors
  std::int64_t expected = 0;       // polynomial ring on three degree-2 generators
};

// SL(2)-invariant functions on Hom(S, K_p) up to max_degree.
template <class K>
std::vector<SchemeSlice> underlying_scheme_probe(const K& k, const PfaffianModel& m, const VectorOf<K>& p,
                                                 Rng& rng, int max_degree = 6);

struct Census {
  std::uint32_t q = 0;
  bool a_full_rank = false;
  std::int64_t points = 0;
  std::map<int, std::int64_t> rank_counts;
  std::int64_t pfaffian_mismatches = 0;  // rank <= d-3 disagreeing with sub-Pfaffian vanishing
  std::int64_t singular = 0;             // rank <= d-5
  std::optional<std::int64_t> grassmannian_points;
  std::optional<std::int64_t> y1_points;

  std::string csv() const;
  nlohmann::json to_json() const;
};

inline constexpr std::int64_t kCensusBudget = 20'000'000;

// Exact counts over P^(d-1)(F_q) and, within budget, Gr(2,d)(F_q). Throws
// std::length_error when P^(d-1)(F_q) alone exceeds the budget.
Census rank_census(const PfaffianModel& m, std::uint32_t q, std::int64_t budget = kCensusBudget);

// #Gr(k, n)(F_q).
std::int64_t gaussian_binomial(std::uint32_t q, int n, int k);
// #Y1(F_q) from lines through points: sum over x1 of the projectivized
// kernel of x2 -> A(x1 ^ x2) modulo x1, divided by q + 1.
std::int64_t y1_count_by_points(const PfaffianModel& m, std::uint32_t q);

struct ModelOptions {
  int entry_bound = 9;
  int max_attempts = 64;
  std::vector<std::uint32_t> census_qs{2, 3, 5};
  int smoothness_samples = 20;
};

// Certificates run on a candidate A: full row rank over the field and mod
// each census prime, empty singular census, Y1/Y2 smoothness samples.
std::vector<CheckRecord> model_certificates(const PfaffianModel& m, const ModelOptions& opts);

// Deterministic in (seed, field, d). Throws std::runtime_error naming the
// last failing certificate when max_attempts candidates all fail.
PfaffianModel random_model(std::uint64_t seed, FieldSpec field, int d = 7, const ModelOptions& opts = {});

// Suite-level checks; sampling runs over F_sampling_prime(field).
CheckRecord full_rank_check(const PfaffianModel& m);
CheckRecord census_check(const PfaffianModel& m, const std::vector<std::uint32_t>& qs);
CheckRecord y1_smoothness_check(const PfaffianModel& m, int samples, std::uint64_t seed);
CheckRecord y2_smoothness_check(const PfaffianModel& m, int samples, std::uint64_t seed);
CheckRecord rank_doubling_check(const PfaffianModel& m, int random_points, int y2_points, std::uint64_t seed);
CheckRecord critical_locus_check(const PfaffianModel& m, int positives, int near_misses, int random_points,
                                 std::uint64_t seed);
CheckRecord normal_map_check(const PfaffianModel& m, int samples, std::uint64_t seed);
CheckRecord isotropic_extension_check(const PfaffianModel& m, int samples, std::uint64_t seed);
CheckRecord underlying_scheme_check(const PfaffianModel& m, std::uint64_t seed);
// Over Q only: random rational p, rank <= d-3 iff sub-Pfaffians vanish.
CheckRecord rational_pfaffian_check(const PfaffianModel& m, int samples, std::uint64_t seed);

}  // namespace pfgr::geometry
