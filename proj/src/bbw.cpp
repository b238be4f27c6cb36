#include "pfgr/bbw.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "checked.hpp"

namespace pfgr::bbw {

GradedDims CohomologyResult::graded() const {
  if (zero) return {};
  return {{degree, dimension}};
}

bool is_dominant(const GLnWeight& w) {
  return std::is_sorted(w.begin(), w.end(), std::greater<int>());
}

std::int64_t weyl_dimension(const GLnWeight& w) {
  if (!is_dominant(w)) throw std::invalid_argument("weyl_dimension: weight is not dominant");
  using boost::multiprecision::cpp_int;
  cpp_int num = 1, den = 1;
  const auto n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      num *= cpp_int(w[i] - w[j] + static_cast<int>(j - i));
      den *= cpp_int(static_cast<int>(j - i));
    }
  }
  if (num % den != 0) throw std::logic_error("weyl_dimension: non-integral quotient");
  cpp_int q = num / den;
  if (q > INT64_MAX) throw std::overflow_error("weyl_dimension exceeds int64");
  return static_cast<std::int64_t>(q);
}

CohomologyResult bbw_cohomology(int a, int b, int n) {
  if (n < 3) throw std::invalid_argument("bbw_cohomology needs n >= 3");
  if (a < b) std::swap(a, b);
  GLnWeight v(static_cast<std::size_t>(n), 0);
  v[0] = a;
  v[1] = b;
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] += n - 1 - i;

  // Length of the sorting permutation = number of inversions.
  int inversions = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto vi = v[static_cast<std::size_t>(i)], vj = v[static_cast<std::size_t>(j)];
      if (vi == vj) return {};
      if (vi < vj) ++inversions;
    }
  }
  std::sort(v.begin(), v.end(), std::greater<int>());
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= n - 1 - i;

  CohomologyResult r;
  r.zero = false;
  r.degree = inversions;
  r.dimension = weyl_dimension(v);
  r.weight = std::move(v);
  return r;
}

void add_into(GradedDims& into, const GradedDims& from, std::int64_t scale) {
  for (const auto& [deg, dim] : from) {
    auto& slot = into[deg];
    slot = checked_add(slot, checked_mul(dim, scale));
    if (slot == 0) into.erase(deg);
  }
}

GradedDims cohomology_of(const reps::RepSum& bundle, int n) {
  GradedDims out;
  for (const auto& [w, m] : bundle.terms()) add_into(out, bbw_cohomology(w.a, w.b, n).graded(), m);
  return out;
}

GradedDims ext_schur_pair(int l, int lp, int k, int n) {
  if (l < 0 || lp < 0) throw std::invalid_argument("ext_schur_pair: negative symmetric power");
  // In S^dual weights: Sym^l S = (0,-l), Sym^lp S^dual = (lp,0), O(-k) = (-k,-k).
  const auto pair = reps::decompose_tensor(reps::GL2Weight(0, -l), reps::GL2Weight(lp, 0));
  const auto twisted = reps::tensor(pair, reps::RepSum(reps::GL2Weight(-k, -k)));
  return cohomology_of(twisted, n);
}

GradedDims projective_cohomology(int n, int d) {
  if (n < 0) throw std::invalid_argument("projective_cohomology: negative dimension");
  if (d >= 0) return {{0, binomial(d + n, n)}};
  if (d <= -n - 1) return {{n, binomial(-d - 1, n)}};
  return {};
}

nlohmann::json to_json(const GradedDims& g) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [deg, dim] : g) j.push_back({deg, dim});
  return j;
}

}  // namespace pfgr::bbw
