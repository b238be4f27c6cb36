#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "json.hpp"
#include "pfgr/reps.hpp"

// Cohomology of homogeneous bundles Sigma^(a,b) S^dual on Gr(2,n), where S is
// the tautological rank-2 subbundle and O(1) = det S^dual.
namespace pfgr::bbw {

using GLnWeight = std::vector<int>;
// degree -> dimension, nonzero entries only.
using GradedDims = std::map<int, std::int64_t>;

struct CohomologyResult {
  bool zero = true;
  int degree = 0;
  GLnWeight weight;  // dominant GL(n) weight of the surviving representation
  std::int64_t dimension = 0;

  GradedDims graded() const;
};

bool is_dominant(const GLnWeight& w);
// Weyl dimension formula; throws on non-dominant input or int64 overflow.
std::int64_t weyl_dimension(const GLnWeight& w);

CohomologyResult bbw_cohomology(int a, int b, int n);

// Sum of bbw_cohomology over the summands of a GL(2) representation.
GradedDims cohomology_of(const reps::RepSum& bundle, int n);

// H^*(Gr(2,n), Sym^l S (x) Sym^lp S^dual (x) O(-k)).
GradedDims ext_schur_pair(int l, int lp, int k, int n);

// H^*(P^n, O(d)).
GradedDims projective_cohomology(int n, int d);

void add_into(GradedDims& into, const GradedDims& from, std::int64_t scale = 1);

// Sorted [degree, dimension] pairs.
nlohmann::json to_json(const GradedDims& g);

}  // namespace pfgr::bbw
