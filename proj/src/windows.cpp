#include "pfgr/windows.hpp"

#include <stdexcept>
#include <string>

#include "checked.hpp"
#include "pfgr/reps.hpp"

namespace pfgr::windows {

using reps::GL2Weight;
using reps::RepSum;

std::string WindowBundle::name() const {
  return "T_{" + std::to_string(l) + "," + std::to_string(m) + "}";
}

std::vector<WindowBundle> window_generators(int l_bound, int m_bound) {
  if (l_bound < 1 || m_bound < 1) throw std::invalid_argument("window bounds must be positive");
  std::vector<WindowBundle> out;
  for (int m = 0; m < m_bound; ++m)
    for (int l = 0; l < l_bound; ++l) out.push_back({l, m});
  return out;
}

bbw::GradedDims ext_on_grassmannian(WindowBundle b1, WindowBundle b2, int n) {
  return bbw::ext_schur_pair(b1.l, b2.l, b1.m - b2.m, n);
}

BigradedDims ext_table_X1(WindowBundle b1, WindowBundle b2, int p_cutoff, int n) {
  if (p_cutoff < 0) throw std::invalid_argument("p_cutoff must be non-negative");
  BigradedDims out;
  for (int dp = 0; dp <= p_cutoff; ++dp) {
    // Fibre functions of degree dp: Sym^dp(O(1)^n) = O(dp) (x) C^N(dp).
    const std::int64_t fibre = binomial(dp + n - 1, n - 1);
    for (const auto& [deg, dim] : bbw::ext_schur_pair(b1.l, b2.l, b1.m - b2.m - dp, n))
      out[{dp, deg}] = checked_mul(dim, fibre);
  }
  return out;
}

X2Table ext_table_X2(WindowBundle b1, WindowBundle b2, int x_cutoff, int n) {
  if (x_cutoff < 0) throw std::invalid_argument("x_cutoff must be non-negative");
  // In S^dual weights: Sym^l1 S (x) Sym^l2 S^dual (x) (det S^dual)^(m2 - m1).
  const RepSum pair = reps::tensor(reps::decompose_tensor(GL2Weight(0, -b1.l), GL2Weight(b2.l, 0)),
                                   RepSum(GL2Weight(b2.m - b1.m, b2.m - b1.m)));
  const RepSum x_functions(GL2Weight(0, -1), n);
  X2Table out;
  for (int dx = 0; dx <= x_cutoff; ++dx) {
    const RepSum piece = reps::tensor(pair, reps::decompose_sym_power(x_functions, dx));
    for (const auto& [nu, mult] : reps::invariant_multiplicities(piece)) {
      if (!out.max_nu || nu > *out.max_nu) out.max_nu = nu;
      for (const auto& [deg, dim] : bbw::projective_cohomology(n - 1, -nu)) {
        auto& slot = out.dims[{dx, deg}];
        slot = checked_add(slot, checked_mul(dim, mult));
      }
    }
  }
  return out;
}

namespace {

using reps::Character;

// Only the coefficients at (0,0) and (1,-1) are needed to count invariants,
// so carry full characters but keep them small.
Character sym_l_of_S(int l) {
  Character c;
  for (int i = 0; i <= l; ++i) c[{-i, -(l - i)}] = 1;
  return c;
}

Character twist(const Character& c, int t) {
  Character out;
  for (const auto& [e, v] : c) out[{e.first + t, e.second + t}] = v;
  return out;
}

std::int64_t coefficient(const Character& c, int i, int j) {
  auto it = c.find({i, j});
  return it == c.end() ? 0 : it->second;
}

}  // namespace

std::int64_t hom0_at(WindowBundle b1, WindowBundle b2, int d_x, int d_p, int n) {
  if (d_x < 0 || d_p < 0) return 0;
  if (d_x > kFrakXCutoffLimit || d_p > kFrakXCutoffLimit)
    throw std::length_error("hom0 degree exceeds cutoff limit " + std::to_string(kFrakXCutoffLimit));
  // Total det weight must vanish; skip the character work otherwise.
  if (d_x != b2.l - b1.l + 2 * (b2.m - b1.m) + 2 * d_p) return 0;

  // T_b1^dual = Sym^l1 S (x) (det S)^m1.
  const Character source = twist(sym_l_of_S(b1.l), -b1.m);
  // T_b2 = Sym^l2 S^dual (x) (det S^dual)^m2.
  Character target;
  for (int i = 0; i <= b2.l; ++i) target[{i + b2.m, b2.l - i + b2.m}] = 1;
  // Sym^d_x(S (x) V^dual): choose i factors of weight (-1,0), the rest (0,-1).
  Character xs;
  for (int i = 0; i <= d_x; ++i)
    xs[{-i, -(d_x - i)}] = checked_mul(binomial(i + n - 1, n - 1), binomial(d_x - i + n - 1, n - 1));
  // Sym^d_p(det S^dual (x) V).
  const std::int64_t ps = binomial(d_p + n - 1, n - 1);

  const Character total = twist(reps::multiply(reps::multiply(source, target), xs), d_p);
  // Multiplicity of the trivial irreducible: c(0,0) - c(1,-1).
  return checked_mul(coefficient(total, 0, 0) - coefficient(total, 1, -1), ps);
}

BigradedDims hom0_frakX(WindowBundle b1, WindowBundle b2, int x_cutoff, int p_cutoff, int n) {
  if (x_cutoff < 0 || p_cutoff < 0) throw std::invalid_argument("cutoffs must be non-negative");
  if (x_cutoff > kFrakXCutoffLimit || p_cutoff > kFrakXCutoffLimit)
    throw std::length_error("hom0_frakX cutoff exceeds limit " + std::to_string(kFrakXCutoffLimit));
  BigradedDims out;
  for (int dp = 0; dp <= p_cutoff; ++dp) {
    const int dx = b2.l - b1.l + 2 * (b2.m - b1.m) + 2 * dp;
    if (dx < 0 || dx > x_cutoff) continue;
    if (const auto v = hom0_at(b1, b2, dx, dp, n); v != 0) out[{dx, dp}] = v;
  }
  return out;
}

nlohmann::json to_json(const BigradedDims& g) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [k, v] : g) j.push_back({k.first, k.second, v});
  return j;
}

namespace {

nlohmann::json graded_json(const bbw::GradedDims& g) { return bbw::to_json(g); }

bool has_positive_degree(const bbw::GradedDims& g) {
  for (const auto& [deg, dim] : g)
    if (deg > 0 && dim != 0) return true;
  return false;
}

std::int64_t degree_zero(const bbw::GradedDims& g) {
  auto it = g.find(0);
  return it == g.end() ? 0 : it->second;
}

}  // namespace

CheckRecord nonnegative_twist_sweep(int n, int l_max) {
  CheckRecord r;
  r.check_name = "gr_ext_vanishing_nonnegative_twist";
  r.anchor = "Ext^p(Sym^l S^dual, Sym^l' S^dual(-k)) on Gr(2,n), n odd: nonzero only if l <= l', k = 0, p = 0";
  r.parameters = {{"n", n}, {"l_max", l_max}, {"k_range", {0, n - 1}}};
  int cases = 0;
  nlohmann::json violations = nlohmann::json::array();
  nlohmann::json nonzero = nlohmann::json::array();
  for (int l = 0; l <= l_max; ++l)
    for (int lp = 0; lp <= l_max; ++lp)
      for (int k = 0; k <= n - 1; ++k) {
        ++cases;
        const auto g = bbw::ext_schur_pair(l, lp, k, n);
        if (g.empty()) continue;
        const bool allowed = l <= lp && k == 0 && g.size() == 1 && g.begin()->first == 0;
        const nlohmann::json entry = {{"l", l}, {"lp", lp}, {"k", k}, {"ext", graded_json(g)}};
        if (allowed) {
          // The surviving group is Sym^(l'-l) V^dual.
          const auto expected = binomial(lp - l + n - 1, n - 1);
          if (g.begin()->second != expected) violations.push_back(entry);
          nonzero.push_back(entry);
        } else {
          violations.push_back(entry);
        }
      }
  r.passed = violations.empty();
  r.witness = {{"cases", cases}, {"nonzero_cases", nonzero}, {"violations", violations}};
  return r;
}

CheckRecord negative_twist_sweep(int n, int l_max, int k_min) {
  CheckRecord r;
  r.check_name = "gr_no_higher_ext_negative_twist";
  r.anchor = "Ext^p(Sym^l S^dual, Sym^l' S^dual(-k)) on Gr(2,n) vanishes for p > 0 when k < 0";
  r.parameters = {{"n", n}, {"l_max", l_max}, {"k_range", {k_min, -1}}};
  int cases = 0;
  nlohmann::json violations = nlohmann::json::array();
  for (int l = 0; l <= l_max; ++l)
    for (int lp = 0; lp <= l_max; ++lp)
      for (int k = k_min; k <= -1; ++k) {
        ++cases;
        const auto g = bbw::ext_schur_pair(l, lp, k, n);
        if (has_positive_degree(g))
          violations.push_back({{"l", l}, {"lp", lp}, {"k", k}, {"ext", graded_json(g)}});
      }

  // Tail k < k_min: summands of Sym^l S (x) Sym^l' S^dual (-k) have weights
  // (l' - j - k, j - l - k), 0 <= j <= min(l, l'). The second entry is
  // decreasing in k, so positivity at k = k_min - 1 gives positivity on the
  // whole tail, where (a, b, 0, ..., 0) is dominant and only H^0 survives.
  bool tail_ok = k_min <= -l_max;
  for (int l = 0; l <= l_max && tail_ok; ++l)
    for (int lp = 0; lp <= l_max && tail_ok; ++lp)
      for (int j = 0; j <= std::min(l, lp); ++j) {
        const int k = k_min - 1;
        const int a = lp - j - k, b = j - l - k;
        if (!(a >= b && b > 0)) tail_ok = false;
      }
  // Spot evaluation deeper in the tail.
  for (int k : {k_min - 1, k_min - 17, k_min - 100})
    for (int l = 0; l <= l_max; ++l)
      for (int lp = 0; lp <= l_max; ++lp)
        if (has_positive_degree(bbw::ext_schur_pair(l, lp, k, n))) tail_ok = false;

  r.passed = violations.empty() && tail_ok;
  r.witness = {{"cases", cases}, {"violations", violations}, {"dominance_tail_holds", tail_ok}};
  return r;
}

CheckRecord strong_exceptional_check(int l_bound, int m_bound, int n) {
  CheckRecord r;
  r.check_name = "strong_exceptional_collection";
  r.anchor = "the rectangle Sym^l S^dual(m) is a strong exceptional collection on Gr(2,n)";
  r.parameters = {{"n", n}, {"l_bound", l_bound}, {"m_bound", m_bound}};
  const auto gens = window_generators(l_bound, m_bound);
  const auto count = gens.size();
  // hom[target][source] = dim Hom(E_source, E_target).
  std::vector<std::vector<std::int64_t>> hom(count, std::vector<std::int64_t>(count, 0));
  nlohmann::json violations = nlohmann::json::array();
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j) {
      const auto g = ext_on_grassmannian(gens[i], gens[j], n);
      hom[j][i] = degree_zero(g);
      const auto describe = [&](const char* what) {
        return nlohmann::json{{"problem", what},
                              {"source", gens[i].name()},
                              {"target", gens[j].name()},
                              {"ext", graded_json(g)}};
      };
      if (has_positive_degree(g)) violations.push_back(describe("higher Ext"));
      if (i == j && hom[j][i] != 1) violations.push_back(describe("End is not one-dimensional"));
      if (i > j && !g.empty()) violations.push_back(describe("nonzero Ext from a later to an earlier object"));
    }
  r.passed = violations.empty();
  nlohmann::json w = {{"objects", count}, {"violations", violations}};
  if (count <= 32) w["hom0_matrix_target_by_source"] = hom;
  r.witness = w;
  return r;
}

CheckRecord x1_persistence_check(int l_bound, int m_bound, int n, int p_cutoff) {
  CheckRecord r;
  r.check_name = "x1_no_higher_ext";
  r.anchor = "window generators acquire no higher Ext after restriction to X1";
  r.parameters = {{"n", n}, {"l_bound", l_bound}, {"m_bound", m_bound}, {"p_cutoff", p_cutoff}};
  const auto gens = window_generators(l_bound, m_bound);
  nlohmann::json violations = nlohmann::json::array();
  int pairs = 0;
  for (const auto& b1 : gens)
    for (const auto& b2 : gens) {
      ++pairs;
      for (const auto& [key, dim] : ext_table_X1(b1, b2, p_cutoff, n))
        if (key.second > 0 && dim != 0)
          violations.push_back({{"source", b1.name()}, {"target", b2.name()}, {"d_p", key.first},
                                {"degree", key.second}, {"dim", dim}});
    }
  r.passed = violations.empty();
  r.witness = {{"pairs", pairs}, {"violations", violations}};
  return r;
}

CheckRecord x2_persistence_check(int l_bound, int m_bound, int n, int x_cutoff) {
  CheckRecord r;
  r.check_name = "x2_no_higher_ext";
  r.anchor = "window generators acquire no higher Ext on X2; invariant det powers satisfy nu <= n-1";
  r.parameters = {{"n", n}, {"l_bound", l_bound}, {"m_bound", m_bound}, {"x_cutoff", x_cutoff}};
  const auto gens = window_generators(l_bound, m_bound);
  nlohmann::json violations = nlohmann::json::array();
  std::optional<int> max_nu;
  int pairs = 0;
  for (const auto& b1 : gens)
    for (const auto& b2 : gens) {
      ++pairs;
      const auto t = ext_table_X2(b1, b2, x_cutoff, n);
      if (t.max_nu && (!max_nu || *t.max_nu > *max_nu)) max_nu = t.max_nu;
      if (t.max_nu && *t.max_nu > n - 1)
        violations.push_back({{"source", b1.name()}, {"target", b2.name()}, {"nu", *t.max_nu}});
      for (const auto& [key, dim] : t.dims)
        if (key.second > 0 && dim != 0)
          violations.push_back({{"source", b1.name()}, {"target", b2.name()}, {"d_x", key.first},
                                {"degree", key.second}, {"dim", dim}});
    }
  r.passed = violations.empty();
  r.witness = {{"pairs", pairs}, {"max_nu", max_nu ? nlohmann::json(*max_nu) : nlohmann::json()},
               {"nu_bound", n - 1}, {"violations", violations}};
  return r;
}

CheckRecord hom0_cross_check(int l_bound, int m_bound, int n, int p_cutoff, int x_cutoff) {
  CheckRecord r;
  r.check_name = "hom0_cross_model_agreement";
  r.anchor = "invariant sections agree on the stack, X1 and X2 (unstable loci have codimension >= 2)";
  r.parameters = {{"n", n}, {"l_bound", l_bound}, {"m_bound", m_bound}, {"p_cutoff", p_cutoff},
                  {"x_cutoff", x_cutoff}};
  const auto gens = window_generators(l_bound, m_bound);
  nlohmann::json mismatches = nlohmann::json::array();
  int pairs = 0, comparisons = 0;
  std::int64_t total = 0;
  for (const auto& b1 : gens)
    for (const auto& b2 : gens) {
      ++pairs;
      const int line = b2.l - b1.l + 2 * (b2.m - b1.m);
      const auto x1 = ext_table_X1(b1, b2, p_cutoff, n);
      for (int dp = 0; dp <= p_cutoff; ++dp) {
        ++comparisons;
        auto it = x1.find({dp, 0});
        const std::int64_t lhs = it == x1.end() ? 0 : it->second;
        const std::int64_t rhs = hom0_at(b1, b2, line + 2 * dp, dp, n);
        total += lhs;
        if (lhs != rhs)
          mismatches.push_back({{"source", b1.name()}, {"target", b2.name()}, {"side", "X1"},
                                {"d_p", dp}, {"chamber", lhs}, {"stack", rhs}});
      }
      const auto x2 = ext_table_X2(b1, b2, x_cutoff, n);
      for (int dx = 0; dx <= x_cutoff; ++dx) {
        ++comparisons;
        auto it = x2.dims.find({dx, 0});
        const std::int64_t lhs = it == x2.dims.end() ? 0 : it->second;
        const int twice_dp = dx - line;
        const std::int64_t rhs =
            (twice_dp >= 0 && twice_dp % 2 == 0) ? hom0_at(b1, b2, dx, twice_dp / 2, n) : 0;
        if (lhs != rhs)
          mismatches.push_back({{"source", b1.name()}, {"target", b2.name()}, {"side", "X2"},
                                {"d_x", dx}, {"chamber", lhs}, {"stack", rhs}});
      }
    }
  r.passed = mismatches.empty();
  r.witness = {{"pairs", pairs}, {"comparisons", comparisons}, {"x1_degree0_total", total},
               {"mismatches", mismatches}};
  return r;
}

namespace {

// Distinct SL(2)-contents of the exterior algebra on Hom(S, V/L) with
// dim V/L = c: the irreducible objects the fibre category needs.
int fibre_generator_count(int c) {
  std::map<int, std::int64_t> seen;
  for (int t = 0; t <= 2 * c; ++t)
    for (const auto& [u, m] : reps::sl2_content(reps::decompose_exterior_hom(c, t))) seen[u] += m;
  return static_cast<int>(seen.size());
}

}  // namespace

CheckRecord window_size_check(int l_bound, int m_bound, int n) {
  CheckRecord r;
  r.check_name = "window_size_and_witten_index";
  r.anchor = "window size equals rk K0(Gr(2,n)); fibre generator count equals the Witten index";
  r.parameters = {{"n", n}, {"l_bound", l_bound}, {"m_bound", m_bound}};
  const int size = static_cast<int>(window_generators(l_bound, m_bound).size());
  // Schubert cells of Gr(2,n).
  const auto k0_rank = binomial(n, 2);
  // dim V/L_p for a maximal isotropic L_p containing the 3-dimensional kernel.
  const int quotient = (n - 3) / 2;
  const int fibre = fibre_generator_count(quotient);
  r.passed = n % 2 == 1 && size == k0_rank && fibre == l_bound && m_bound == n;
  r.witness = {{"window_size", size}, {"rank_K0_grassmannian", k0_rank},
               {"fibre_generators", fibre}, {"l_bound", l_bound}, {"m_bound", m_bound}};
  return r;
}

CheckRecord even_window_candidates(int n) {
  CheckRecord r;
  r.check_name = "even_d_window_candidates";
  r.anchor = "for even d the window has l < d/2 while the physics index suggests l < d/2 - 1";
  r.parameters = {{"n", n}};
  r.passed = true;
  r.witness = {{"rectangle_half_d", {n / 2, n}},
               {"size_half_d", (n / 2) * n},
               {"rectangle_half_d_minus_one", {n / 2 - 1, n}},
               {"size_half_d_minus_one", (n / 2 - 1) * n},
               {"rank_K0_grassmannian", binomial(n, 2)},
               {"adjudicated", false}};
  return r;
}

nlohmann::json ExceptionalReport::to_json() const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks)
    checks_json.push_back({{"check_name", c.check_name}, {"parameters", c.parameters},
                           {"verdict", c.passed ? "PASS" : "FAIL"}, {"witness", c.witness}});
  return {{"verdict", passed ? "PASS" : "FAIL"},
          {"sizes", {window_size, fibre_generators, n}},
          {"checks", checks_json}};
}

ExceptionalReport exceptional_report(int l_bound, int m_bound, int n, const ExceptionalOptions& opts) {
  ExceptionalReport rep;
  rep.n = n;
  rep.window_size = l_bound * m_bound;
  rep.checks.push_back(strong_exceptional_check(l_bound, m_bound, n));
  rep.checks.push_back(window_size_check(l_bound, m_bound, n));
  rep.fibre_generators = rep.checks.back().witness.at("fibre_generators").get<int>();
  if (opts.p_cutoff >= 0) rep.checks.push_back(x1_persistence_check(l_bound, m_bound, n, opts.p_cutoff));
  if (opts.x_cutoff >= 0) rep.checks.push_back(x2_persistence_check(l_bound, m_bound, n, opts.x_cutoff));
  rep.passed = true;
  for (const auto& c : rep.checks) rep.passed = rep.passed && c.passed;
  return rep;
}

}  // namespace pfgr::windows
