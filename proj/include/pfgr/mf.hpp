#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pfgr/check.hpp"
#include "pfgr/geometry.hpp"
#include "pfgr/poly.hpp"

// Graded matrix factorizations: free modules E0 (even) and E1 (odd) with
// d0: E1 -> E0 and d1: E0 -> E1 such that d0 d1 = W and d1 d0 = W.
// Generator degrees carry every grading of the ring; d has degree s, where s
// is half the degree of W (R-charge 1).
namespace pfgr::mf {

inline constexpr std::uint32_t kDefaultPrime = 32003;

struct MatrixFactorization {
  Poly W;
  Degree s;  // degree of the differential
  std::vector<Degree> even;
  std::vector<Degree> odd;
  PolyMatrix d0;  // odd -> even
  PolyMatrix d1;  // even -> odd

  std::size_t rank() const { return even.size() + odd.size(); }
  nlohmann::json to_json(const Ring& r) const;
};

// Degree of the differential: half the degree of W in every grading. For
// W = 0 it is 1 in the internal and R gradings and 0 on tori. Throws
// std::invalid_argument for inhomogeneous W or an odd degree.
Degree differential_degree(const Ring& r, const Poly& W);

// Builds a factorization from R-charges alone; the other gradings of the
// generators are propagated along nonzero entries, each connected block
// anchored at 0. Inconsistent entries are left for mf_verify to report.
// s defaults to differential_degree(W).
MatrixFactorization make_mf(const Ring& r, Poly W, const std::vector<int>& even_r, const std::vector<int>& odd_r,
                            PolyMatrix d0, PolyMatrix d1, std::optional<Degree> s = std::nullopt);

struct MfVerdict {
  bool passed = false;
  std::string failure;
  nlohmann::json witness = nlohmann::json::object();
};

// Both composites as polynomial identities, R-charge parity of generators,
// even R-charge of variables, and homogeneity of every entry.
MfVerdict mf_verify(const Ring& r, const MatrixFactorization& e);

// (O[1] <-> O; W, 1). With W = 0 this is the cone of id_O, and s picks the
// differential degree it must share with a tensor partner.
MatrixFactorization stabilization(const Ring& r, const Poly& W, std::optional<Degree> s = std::nullopt);
// R-charge shift by k; odd k swaps the two modules. The differential picks up (-1)^k.
MatrixFactorization shift(const Ring& r, const MatrixFactorization& e, int k);
// Tensor product over the ring; the potential is W_E + W_F.
MatrixFactorization tensor(const Ring& r, const MatrixFactorization& e, const MatrixFactorization& f);

struct ExtResult {
  int cutoff = 0;
  bool stabilized = false;  // nothing in internal degree == cutoff
  std::map<Degree, std::int64_t> by_degree;
  std::map<std::pair<int, int>, std::int64_t> by_parity_r;
  std::map<int, std::int64_t> by_internal;

  std::int64_t total() const;
  nlohmann::json to_json() const;
};

// Homology of Hom(E, F) with the graded commutator, in every multidegree of
// internal degree <= cutoff. Each multidegree is computed exactly.
ExtResult hom_ext_truncated(const Ring& r, const MatrixFactorization& e, const MatrixFactorization& f, int cutoff);

// C_0 <- C_1 <- ... <- C_n with degree-0 differentials.
struct GradedComplex {
  std::vector<std::vector<Degree>> modules;
  std::vector<PolyMatrix> differentials;  // [k-1]: C_k -> C_{k-1}
};

// Empty string when every composite vanishes and every entry is homogeneous
// of the right degree; otherwise a description of the first failure.
std::string verify_complex(const Ring& r, const GradedComplex& c);

// Koszul complex on homogeneous f_1..f_c; C_k has basis e_I, |I| = k, in lexicographic order.
GradedComplex koszul_complex(const Ring& r, const std::vector<Poly>& f);

// Folds C into a factorization of W: d = sum_n t_n with t_0 the differential
// and t_n: C_k -> C_{k+2n-1} solved degree by degree. Throws
// std::runtime_error naming the obstruction when a lift does not exist.
MatrixFactorization koszul_perturb(const Ring& r, const GradedComplex& c, const Poly& W);

// Homology dimensions H_k by internal degree, for internal degree <= cutoff.
std::vector<std::map<int, std::int64_t>> complex_homology(const Ring& r, const GradedComplex& c, int cutoff);

struct EagonNorthcott {
  int columns = 0;
  std::vector<std::size_t> ranks;
  std::vector<std::map<int, std::int64_t>> sl2_contents;  // per term: Sym^u -> multiplicity
  std::vector<std::map<int, std::int64_t>> homology;
  std::string complex_failure;
  bool exact = false;      // H_k = 0 for k >= 1 up to the cutoff
  bool h0_matches = false;  // H_0 = coordinate ring of rank <= 1 matrices
};

// Resolution of the 2x2 minors of a generic 2 x c matrix.
EagonNorthcott eagon_northcott(int columns, int cutoff);

struct KnorrerFibre {
  int d = 0;
  std::uint32_t q = 0;
  std::size_t kernel_dim = 0;
  std::size_t lagrangian_dim = 0;
  bool gram_normal_form = false;
  bool mf_verified = false;
  ExtResult ext;
  std::map<int, std::int64_t> expected_by_internal;  // polynomial ring on Hom(S, K_p)
  std::map<int, std::int64_t> sl2_slice;             // SL(2)-invariant part per internal degree
  std::map<int, std::int64_t> sl2_expected;
  std::int64_t transverse_homology = 0;  // Koszul complex of the normal-map forms
  std::size_t normal_rank = 0;
};

// Fibre over a sampled p in Y2 over F_sampling_prime: change to a Darboux
// basis adapted to K_p in L_p, Koszul-perturb O of Hom(S, L_p) and take its
// self-Ext up to the cutoff.
KnorrerFibre knorrer_fibre(const geometry::PfaffianModel& m, int cutoff, std::uint64_t seed);

// Suite checks.
CheckRecord mf_verify_check();
CheckRecord knorrer_base_check(int cutoff);
CheckRecord contractibility_check(int cutoff);
CheckRecord koszul_perturb_check();
CheckRecord tensor_law_check(int cutoff);
CheckRecord periodicity_check(int cutoff);
CheckRecord eagon_northcott_check(int columns, int cutoff);
CheckRecord knorrer_rank_check(const geometry::PfaffianModel& m, int cutoff, std::uint64_t seed);

}  // namespace pfgr::mf
