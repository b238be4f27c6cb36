#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <utility>

#include "json.hpp"

// Representation ring of GL(2). A weight (a,b) names the irreducible with
// highest weight (a,b) with respect to a fixed defining representation; the
// meaning of (1,0) is up to the caller. Elsewhere in this library (1,0) is
// S^dual, so the Schur functor Sigma^(a,b) S^dual.
namespace pfgr::reps {

inline constexpr int kDefaultSymCutoff = 24;

struct GL2Weight {
  int a = 0;
  int b = 0;

  GL2Weight() = default;
  // Normalizes to dominant order a >= b.
  GL2Weight(int x, int y) : a(x >= y ? x : y), b(x >= y ? y : x) {}

  std::int64_t dim() const { return static_cast<std::int64_t>(a) - b + 1; }
  int det_weight() const { return a + b; }
  // Highest weight of the SL(2) restriction, i.e. Sym^u.
  int sl2_highest() const { return a - b; }

  auto operator<=>(const GL2Weight&) const = default;
};

// Laurent polynomial in z1, z2: exponent pair -> coefficient.
using Character = std::map<std::pair<int, int>, std::int64_t>;

class RepSum {
 public:
  RepSum() = default;
  RepSum(GL2Weight w, std::int64_t mult = 1) { add(w, mult); }

  // Multiplicities must stay non-negative; zero entries are dropped.
  void add(GL2Weight w, std::int64_t mult);
  void add(const RepSum& other, std::int64_t scale = 1);

  const std::map<GL2Weight, std::int64_t>& terms() const { return terms_; }
  std::int64_t multiplicity(GL2Weight w) const;
  bool empty() const { return terms_.empty(); }
  std::int64_t dim() const;

  bool operator==(const RepSum&) const = default;

 private:
  std::map<GL2Weight, std::int64_t> terms_;
};

Character character(GL2Weight w);
Character character(const RepSum& r);
Character multiply(const Character& x, const Character& y);
bool is_symmetric(const Character& c);
std::int64_t evaluate_at_identity(const Character& c);

// Greedy highest-weight peeling. Throws if the input is not the character
// of an honest representation.
RepSum peel(Character c);

RepSum decompose_tensor(GL2Weight w1, GL2Weight w2);
RepSum tensor(const RepSum& x, const RepSum& y);

// Sym^degree(base). Throws std::length_error beyond the cutoff.
RepSum decompose_sym_power(const RepSum& base, int degree, int cutoff = kDefaultSymCutoff);
Character sym_power_character(const Character& base, int degree);

// Lambda^t of c copies of the dual defining representation, i.e. of
// Hom(S, C^c)^dual when (1,0) is S^dual: weights (0,-1) and (-1,0), c times
// each. Zero for t > 2c.
RepSum decompose_exterior_hom(int c, int t);

// nu -> multiplicity of (nu, nu).
std::map<int, std::int64_t> invariant_multiplicities(const RepSum& r);
// u -> multiplicity of Sym^u after restriction to SL(2).
std::map<int, std::int64_t> sl2_content(const RepSum& r);
// Dimension of SL(2)-invariants, i.e. total multiplicity of all (nu, nu).
std::int64_t sl2_invariant_dim(const RepSum& r);

// Sorted [a, b, multiplicity] triples.
nlohmann::json to_json(const RepSum& r);
RepSum rep_from_json(const nlohmann::json& j);

}  // namespace pfgr::reps
