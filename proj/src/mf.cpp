#include "pfgr/mf.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>

#include "checked.hpp"
#include "pfgr/linalg.hpp"
#include "pfgr/reps.hpp"

namespace pfgr::mf {

namespace {

using nlohmann::json;

// Generators of E0 followed by E1, with the differential as one square matrix.
struct Flat {
  std::vector<Degree> deg;
  std::vector<int> parity;
  PolyMatrix d;
};

Flat flatten(const MatrixFactorization& e) {
  const auto ne = e.even.size(), no = e.odd.size();
  Flat f;
  f.deg = e.even;
  f.deg.insert(f.deg.end(), e.odd.begin(), e.odd.end());
  f.parity.assign(ne, 0);
  f.parity.resize(ne + no, 1);
  f.d = PolyMatrix(ne + no, ne + no);
  for (std::size_t i = 0; i < ne; ++i)
    for (std::size_t j = 0; j < no; ++j) {
      f.d(i, ne + j) = e.d0(i, j);
      f.d(ne + j, i) = e.d1(j, i);
    }
  return f;
}

MatrixFactorization unflatten(Poly W, Degree s, const Flat& f) {
  MatrixFactorization e;
  e.W = std::move(W);
  e.s = std::move(s);
  std::vector<std::size_t> ev, od;
  for (std::size_t i = 0; i < f.deg.size(); ++i) (f.parity[i] == 0 ? ev : od).push_back(i);
  for (auto i : ev) e.even.push_back(f.deg[i]);
  for (auto j : od) e.odd.push_back(f.deg[j]);
  e.d0 = PolyMatrix(ev.size(), od.size());
  e.d1 = PolyMatrix(od.size(), ev.size());
  for (std::size_t a = 0; a < ev.size(); ++a)
    for (std::size_t b = 0; b < od.size(); ++b) {
      e.d0(a, b) = f.d(ev[a], od[b]);
      e.d1(b, a) = f.d(od[b], ev[a]);
    }
  return e;
}

Poly times_monomial(const Ring& r, const Poly& p, const Monomial& mu) {
  Poly out;
  Monomial m(r.nvars());
  for (const auto& [mp, c] : p) {
    for (std::size_t v = 0; v < m.size(); ++v) m[v] = static_cast<std::uint16_t>(mp[v] + mu[v]);
    out.emplace(m, c);
  }
  return out;
}

int mod2(int v) { return ((v % 2) + 2) % 2; }

// Basis of a graded piece: (target generator, source generator, monomial).
struct PieceBasis {
  std::vector<std::tuple<std::size_t, std::size_t, Monomial>> elems;
  std::map<std::tuple<std::size_t, std::size_t, Monomial>, std::size_t> index;

  void add(std::size_t i, std::size_t j, const Monomial& m) {
    index.emplace(std::make_tuple(i, j, m), elems.size());
    elems.emplace_back(i, j, m);
  }
  std::size_t at(std::size_t i, std::size_t j, const Monomial& m) const {
    const auto it = index.find(std::make_tuple(i, j, m));
    if (it == index.end()) throw std::logic_error("graded piece is missing a product term; inhomogeneous input");
    return it->second;
  }
};

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  const auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Factorizations

json MatrixFactorization::to_json(const Ring& r) const {
  json ev = json::array(), od = json::array();
  for (const auto& d : even) ev.push_back(d);
  for (const auto& d : odd) od.push_back(d);
  return {{"W", mf::to_json(r, W)}, {"s", s},        {"even", ev},
          {"odd", od},            {"d0", mf::to_json(r, d0)}, {"d1", mf::to_json(r, d1)}};
}

Degree differential_degree(const Ring& r, const Poly& W) {
  Degree s(r.ngradings(), 0);
  if (W.empty()) {
    s[kInternal] = 1;
    s[kRCharge] = 1;
    return s;
  }
  const auto d = homogeneous_degree(r, W);
  if (!d) throw std::invalid_argument("W is not homogeneous: " + r.str(W));
  for (std::size_t g = 0; g < s.size(); ++g) {
    if ((*d)[g] % 2 != 0) throw std::invalid_argument("W has odd degree in grading " + std::to_string(g));
    s[g] = (*d)[g] / 2;
  }
  return s;
}

MatrixFactorization make_mf(const Ring& r, Poly W, const std::vector<int>& even_r, const std::vector<int>& odd_r,
                            PolyMatrix d0, PolyMatrix d1, std::optional<Degree> s) {
  const auto ne = even_r.size(), no = odd_r.size();
  if (d0.rows != ne || d0.cols != no || d1.rows != no || d1.cols != ne)
    throw std::invalid_argument("d0 must be |even| x |odd| and d1 |odd| x |even|");
  MatrixFactorization e;
  e.s = s ? *s : differential_degree(r, W);
  e.W = std::move(W);
  e.d0 = std::move(d0);
  e.d1 = std::move(d1);
  e.even.assign(ne, r.zero_degree());
  e.odd.assign(no, r.zero_degree());
  for (std::size_t i = 0; i < ne; ++i) e.even[i][kRCharge] = even_r[i];
  for (std::size_t j = 0; j < no; ++j) e.odd[j][kRCharge] = odd_r[j];

  Flat f = flatten(e);
  const auto n = ne + no;
  std::vector<bool> known(n, false);
  const auto entry_degree = [&](const Poly& p) { return r.degree(p.begin()->first); };
  for (std::size_t root = 0; root < n; ++root) {
    if (known[root]) continue;
    known[root] = true;
    std::queue<std::size_t> todo;
    todo.push(root);
    while (!todo.empty()) {
      const auto u = todo.front();
      todo.pop();
      for (std::size_t v = 0; v < n; ++v) {
        if (known[v]) continue;
        const Poly* into = f.d(v, u).empty() ? nullptr : &f.d(v, u);  // u -> v
        const Poly* from = f.d(u, v).empty() ? nullptr : &f.d(u, v);  // v -> u
        if (!into && !from) continue;
        for (std::size_t g = 0; g < r.ngradings(); ++g) {
          if (g == kRCharge) continue;
          f.deg[v][g] = into ? f.deg[u][g] + e.s[g] - entry_degree(*into)[g]
                             : f.deg[u][g] - e.s[g] + entry_degree(*from)[g];
        }
        known[v] = true;
        todo.push(v);
      }
    }
  }
  for (std::size_t i = 0; i < ne; ++i) e.even[i] = f.deg[i];
  for (std::size_t j = 0; j < no; ++j) e.odd[j] = f.deg[ne + j];
  return e;
}

MfVerdict mf_verify(const Ring& r, const MatrixFactorization& e) {
  MfVerdict v;
  const auto fail = [&](std::string why, json w) {
    v.passed = false;
    v.failure = std::move(why);
    v.witness = std::move(w);
    return v;
  };
  const auto ne = e.even.size(), no = e.odd.size();
  if (e.d0.rows != ne || e.d0.cols != no || e.d1.rows != no || e.d1.cols != ne)
    return fail("shape", {{"even", ne}, {"odd", no}});
  if (e.s.size() != r.ngradings()) return fail("differential degree has the wrong length", json::object());
  for (const auto& d : e.even)
    if (d.size() != r.ngradings()) return fail("generator degree has the wrong length", json::object());
  for (const auto& d : e.odd)
    if (d.size() != r.ngradings()) return fail("generator degree has the wrong length", json::object());

  if (!e.W.empty()) {
    Degree expect;
    try {
      expect = differential_degree(r, e.W);
    } catch (const std::invalid_argument& ex) {
      return fail("W is not homogeneous of even degree", {{"W", r.str(e.W)}, {"error", ex.what()}});
    }
    if (expect != e.s) return fail("differential degree is not half the degree of W", {{"s", e.s}, {"half", expect}});
    if (expect[kRCharge] != 1) return fail("W must have R-charge 2", {{"W", r.str(e.W)}});
  } else if (e.s[kRCharge] != 1) {
    return fail("the differential must have R-charge 1", {{"s", e.s}});
  }
  for (std::size_t x = 0; x < r.nvars(); ++x)
    if (r.weight(kRCharge, x) % 2 != 0)
      return fail("variable with odd R-charge", {{"variable", r.names()[x]}, {"r_charge", r.weight(kRCharge, x)}});
  for (std::size_t i = 0; i < ne; ++i)
    if (mod2(e.even[i][kRCharge]) != 0)
      return fail("even generator with odd R-charge", {{"generator", i}, {"r_charge", e.even[i][kRCharge]}});
  for (std::size_t j = 0; j < no; ++j)
    if (mod2(e.odd[j][kRCharge]) != 1)
      return fail("odd generator with even R-charge", {{"generator", j}, {"r_charge", e.odd[j][kRCharge]}});

  const auto check_square = [&](const PolyMatrix& m, const char* name) -> std::optional<json> {
    for (std::size_t i = 0; i < m.rows; ++i)
      for (std::size_t j = 0; j < m.cols; ++j) {
        const Poly want = i == j ? e.W : Poly{};
        if (m(i, j) != want)
          return json{{"composite", name}, {"row", i}, {"col", j}, {"value", r.str(m(i, j))}, {"expected", r.str(want)}};
      }
    return std::nullopt;
  };
  if (auto w = check_square(multiply(r, e.d0, e.d1), "d0*d1")) return fail("d0*d1 != W id", *w);
  if (auto w = check_square(multiply(r, e.d1, e.d0), "d1*d0")) return fail("d1*d0 != W id", *w);

  const auto check_entries = [&](const PolyMatrix& m, const std::vector<Degree>& tgt, const std::vector<Degree>& src,
                                 const char* name) -> std::optional<json> {
    for (std::size_t i = 0; i < m.rows; ++i)
      for (std::size_t j = 0; j < m.cols; ++j) {
        if (m(i, j).empty()) continue;
        const auto want = src[j] + e.s - tgt[i];
        const auto got = homogeneous_degree(r, m(i, j));
        if (!got || *got != want)
          return json{{"matrix", name}, {"row", i}, {"col", j}, {"entry", r.str(m(i, j))}, {"required_degree", want}};
      }
    return std::nullopt;
  };
  if (auto w = check_entries(e.d0, e.even, e.odd, "d0")) return fail("inhomogeneous entry", *w);
  if (auto w = check_entries(e.d1, e.odd, e.even, "d1")) return fail("inhomogeneous entry", *w);
  v.passed = true;
  v.witness = {{"even_rank", ne}, {"odd_rank", no}};
  return v;
}

MatrixFactorization stabilization(const Ring& r, const Poly& W, std::optional<Degree> s) {
  PolyMatrix d0(1, 1), d1(1, 1);
  d0(0, 0) = W;
  d1(0, 0) = r.constant(1);
  return make_mf(r, W, {0}, {1}, std::move(d0), std::move(d1), std::move(s));
}

MatrixFactorization shift(const Ring& r, const MatrixFactorization& e, int k) {
  Flat f = flatten(e);
  for (auto& d : f.deg) d[kRCharge] += k;
  if (k % 2 != 0) {
    for (auto& p : f.parity) p ^= 1;
    f.d = scale(r, f.d, r.field().neg(r.field().one()));
  }
  return unflatten(e.W, e.s, f);
}

MatrixFactorization tensor(const Ring& r, const MatrixFactorization& e, const MatrixFactorization& f) {
  if (e.s != f.s) throw std::invalid_argument("tensor factors need the same differential degree");
  const Flat a = flatten(e), b = flatten(f);
  const auto na = a.deg.size(), nb = b.deg.size();
  Flat t;
  t.d = PolyMatrix(na * nb, na * nb);
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t y = 0; y < nb; ++y) {
      t.deg.push_back(a.deg[x] + b.deg[y]);
      t.parity.push_back(a.parity[x] ^ b.parity[y]);
    }
  const auto minus = r.field().neg(r.field().one());
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t y = 0; y < nb; ++y) {
      const auto col = x * nb + y;
      for (std::size_t x2 = 0; x2 < na; ++x2)
        if (!a.d(x2, x).empty()) t.d(x2 * nb + y, col) = add(r, t.d(x2 * nb + y, col), a.d(x2, x));
      for (std::size_t y2 = 0; y2 < nb; ++y2)
        if (!b.d(y2, y).empty()) {
          const auto term = a.parity[x] ? scale(r, b.d(y2, y), minus) : b.d(y2, y);
          t.d(x * nb + y2, col) = add(r, t.d(x * nb + y2, col), term);
        }
    }
  return unflatten(add(r, e.W, f.W), e.s, t);
}

// ---------------------------------------------------------------------------
// Hom complexes

std::int64_t ExtResult::total() const {
  std::int64_t t = 0;
  for (const auto& [g, n] : by_degree) t += n;
  return t;
}

json ExtResult::to_json() const {
  json deg = json::array(), pr = json::array(), internal = json::object();
  for (const auto& [g, n] : by_degree) deg.push_back({{"degree", g}, {"dim", n}});
  for (const auto& [k, n] : by_parity_r) pr.push_back({{"parity", k.first}, {"r_charge", k.second}, {"dim", n}});
  for (const auto& [t, n] : by_internal) internal[std::to_string(t)] = n;
  return {{"cutoff", cutoff}, {"stabilized", stabilized}, {"total", total()},
          {"by_parity_r", pr}, {"by_internal", internal},      {"by_degree", deg}};
}

ExtResult hom_ext_truncated(const Ring& r, const MatrixFactorization& e, const MatrixFactorization& f, int cutoff) {
  if (e.W != f.W) throw std::invalid_argument("Hom between factorizations of different potentials");
  if (e.s != f.s) throw std::invalid_argument("Hom between factorizations with different differential degrees");
  if (e.s[kInternal] < 1) throw std::invalid_argument("differential must raise the internal degree");
  const Flat src = flatten(e), tgt = flatten(f);
  const auto& s = e.s;
  const auto& k = r.field();
  const auto minus = k.neg(k.one());

  std::map<Degree, PieceBasis> basis_cache;
  const auto basis = [&](const Degree& g) -> const PieceBasis& {
    if (auto it = basis_cache.find(g); it != basis_cache.end()) return it->second;
    PieceBasis b;
    for (std::size_t i = 0; i < tgt.deg.size(); ++i)
      for (std::size_t j = 0; j < src.deg.size(); ++j) {
        const auto need = src.deg[j] + g - tgt.deg[i];
        if (need[kInternal] < 0) continue;
        for (const auto& m : r.monomials_of(need)) b.add(i, j, m);
      }
    return basis_cache.emplace(g, std::move(b)).first->second;
  };
  std::map<Degree, std::size_t> rank_cache;
  // rank of delta: Hom^g -> Hom^(g+s)
  const auto delta_rank = [&](const Degree& g) -> std::size_t {
    if (auto it = rank_cache.find(g); it != rank_cache.end()) return it->second;
    const auto& from = basis(g);
    std::size_t rk = 0;
    if (!from.elems.empty()) {
      const auto& to = basis(g + s);
      if (!to.elems.empty()) {
        auto m = zeros(k, to.elems.size(), from.elems.size());
        for (std::size_t c = 0; c < from.elems.size(); ++c) {
          const auto& [i, j, mu] = from.elems[c];
          const bool odd = (tgt.parity[i] ^ src.parity[j]) != 0;
          for (std::size_t i2 = 0; i2 < tgt.deg.size(); ++i2) {
            if (tgt.d(i2, i).empty()) continue;
            for (const auto& [mono, coeff] : times_monomial(r, tgt.d(i2, i), mu)) {
              auto& cell = m(to.at(i2, j, mono), c);
              cell = k.add(cell, coeff);
            }
          }
          // - (-1)^|phi| phi d_E
          const auto sign = odd ? k.one() : minus;
          for (std::size_t j2 = 0; j2 < src.deg.size(); ++j2) {
            if (src.d(j, j2).empty()) continue;
            for (const auto& [mono, coeff] : times_monomial(r, src.d(j, j2), mu)) {
              auto& cell = m(to.at(i, j2, mono), c);
              cell = k.add(cell, k.mul(sign, coeff));
            }
          }
        }
        rk = rank(k, std::move(m));
      }
    }
    rank_cache.emplace(g, rk);
    return rk;
  };

  std::set<Degree> degrees;
  for (std::size_t i = 0; i < tgt.deg.size(); ++i)
    for (std::size_t j = 0; j < src.deg.size(); ++j) {
      const auto base = tgt.deg[i] - src.deg[j];
      for (int t = 0; base[kInternal] + t <= cutoff; ++t)
        for (const auto& dd : r.degrees_at(t)) degrees.insert(base + dd);
    }

  ExtResult out;
  out.cutoff = cutoff;
  for (const auto& g : degrees) {
    const auto dim = basis(g).elems.size();
    const auto h = static_cast<std::int64_t>(dim) - static_cast<std::int64_t>(delta_rank(g)) -
                   static_cast<std::int64_t>(delta_rank(g - s));
    if (h < 0) throw std::logic_error("negative homology; the Hom complex does not square to zero");
    if (h == 0) continue;
    out.by_degree[g] = h;
    out.by_parity_r[{mod2(g[kRCharge]), g[kRCharge]}] += h;
    out.by_internal[g[kInternal]] += h;
  }
  out.stabilized = out.by_internal.find(cutoff) == out.by_internal.end();
  return out;
}

// ---------------------------------------------------------------------------
// Complexes and the perturbation

std::string verify_complex(const Ring& r, const GradedComplex& c) {
  if (c.modules.empty()) return "no modules";
  if (c.differentials.size() + 1 != c.modules.size()) return "need one differential per consecutive pair";
  for (std::size_t k = 1; k < c.modules.size(); ++k) {
    const auto& d = c.differentials[k - 1];
    if (d.rows != c.modules[k - 1].size() || d.cols != c.modules[k].size())
      return "differential " + std::to_string(k) + " has the wrong shape";
    for (std::size_t i = 0; i < d.rows; ++i)
      for (std::size_t j = 0; j < d.cols; ++j) {
        if (d(i, j).empty()) continue;
        const auto got = homogeneous_degree(r, d(i, j));
        if (!got || *got != c.modules[k][j] - c.modules[k - 1][i])
          return "differential " + std::to_string(k) + " entry (" + std::to_string(i) + "," + std::to_string(j) +
                 ") = " + r.str(d(i, j)) + " is not of degree 0";
      }
  }
  for (std::size_t k = 2; k < c.modules.size(); ++k) {
    const auto comp = multiply(r, c.differentials[k - 2], c.differentials[k - 1]);
    if (!is_zero(comp)) return "composite d" + std::to_string(k - 1) + "*d" + std::to_string(k) + " is nonzero";
  }
  return {};
}

GradedComplex koszul_complex(const Ring& r, const std::vector<Poly>& f) {
  std::vector<Degree> fd;
  for (const auto& p : f) {
    const auto d = homogeneous_degree(r, p);
    if (!d) throw std::invalid_argument("Koszul complex needs nonzero homogeneous elements");
    fd.push_back(*d);
  }
  const auto n = f.size();
  GradedComplex c;
  std::vector<std::vector<std::vector<std::size_t>>> gens;
  for (std::size_t k = 0; k <= n; ++k) {
    gens.push_back(subsets(n, k));
    std::vector<Degree> degs;
    for (const auto& I : gens.back()) {
      Degree d = r.zero_degree();
      for (auto i : I) d = d + fd[i];
      degs.push_back(d);
    }
    c.modules.push_back(std::move(degs));
  }
  const auto minus = r.field().neg(r.field().one());
  for (std::size_t k = 1; k <= n; ++k) {
    std::map<std::vector<std::size_t>, std::size_t> lower;
    for (std::size_t i = 0; i < gens[k - 1].size(); ++i) lower[gens[k - 1][i]] = i;
    PolyMatrix d(gens[k - 1].size(), gens[k].size());
    for (std::size_t j = 0; j < gens[k].size(); ++j) {
      const auto& I = gens[k][j];
      for (std::size_t t = 0; t < I.size(); ++t) {
        auto J = I;
        J.erase(J.begin() + static_cast<std::ptrdiff_t>(t));
        d(lower.at(J), j) = t % 2 == 0 ? f[I[t]] : scale(r, f[I[t]], minus);
      }
    }
    c.differentials.push_back(std::move(d));
  }
  return c;
}

MatrixFactorization koszul_perturb(const Ring& r, const GradedComplex& c, const Poly& W) {
  if (const auto why = verify_complex(r, c); !why.empty()) throw std::invalid_argument("not a complex: " + why);
  const auto s = differential_degree(r, W);
  const int top = static_cast<int>(c.modules.size()) - 1;
  const auto& k = r.field();
  const auto size = [&](int i) { return c.modules[static_cast<std::size_t>(i)].size(); };

  // t[{n, k}]: C_k -> C_{k+2n-1}; n = 0 is the differential.
  std::map<std::pair<int, int>, PolyMatrix> t;
  for (int i = 1; i <= top; ++i) t[{0, i}] = c.differentials[static_cast<std::size_t>(i - 1)];
  const auto get = [&](int n, int i) -> const PolyMatrix* {
    const auto it = t.find({n, i});
    return it == t.end() ? nullptr : &it->second;
  };

  if (!W.empty()) {
    for (int n = 1; 2 * n - 2 <= top; ++n) {
      for (int i = 0; i <= top; ++i) {
        const int mid = i + 2 * n - 2;  // where both sides of the equation land
        const int tg = i + 2 * n - 1;
        if (mid > top) continue;
        // rhs = Phi_n - t_n|C_{i-1} o d_i
        PolyMatrix rhs(size(mid), size(i));
        if (n == 1) rhs = identity_times(r, size(i), W);
        for (int a = 1; a < n; ++a) {
          const int b = n - a;
          const auto* tb = get(b, i);
          const auto* ta = tb ? get(a, i + 2 * b - 1) : nullptr;
          if (ta) rhs = add(r, rhs, scale(r, multiply(r, *ta, *tb), k.neg(k.one())));
        }
        if (i >= 1)
          if (const auto* prev = get(n, i - 1)) {
            rhs = add(r, rhs, scale(r, multiply(r, *prev, c.differentials[static_cast<std::size_t>(i - 1)]),
                                    k.neg(k.one())));
          }
        if (tg > top) {
          if (!is_zero(rhs))
            throw std::runtime_error("koszul_perturb: obstruction at order " + std::to_string(n) + " on C_" +
                                     std::to_string(i) + " (no term to lift into)");
          continue;
        }
        const auto& dtg = c.differentials[static_cast<std::size_t>(tg - 1)];  // C_tg -> C_mid
        PolyMatrix x(size(tg), size(i));
        for (std::size_t g = 0; g < size(i); ++g) {
          // Unknowns: coefficient of monomial mu in column entry h.
          std::vector<std::pair<std::size_t, Monomial>> unknowns;
          for (std::size_t h = 0; h < size(tg); ++h) {
            Degree need = c.modules[static_cast<std::size_t>(i)][g] - c.modules[static_cast<std::size_t>(tg)][h];
            for (std::size_t q = 0; q < need.size(); ++q) need[q] += 2 * n * s[q];
            if (need[kInternal] < 0) continue;
            for (const auto& mu : r.monomials_of(need)) unknowns.emplace_back(h, mu);
          }
          std::map<std::pair<std::size_t, Monomial>, std::size_t> rows;
          std::vector<std::vector<std::pair<std::size_t, PrimeField::Elem>>> cols(unknowns.size());
          const auto row_of = [&](std::size_t h2, const Monomial& m) {
            return rows.emplace(std::make_pair(h2, m), rows.size()).first->second;
          };
          for (std::size_t u = 0; u < unknowns.size(); ++u) {
            const auto& [h, mu] = unknowns[u];
            for (std::size_t h2 = 0; h2 < size(mid); ++h2) {
              if (dtg(h2, h).empty()) continue;
              for (const auto& [m, coeff] : times_monomial(r, dtg(h2, h), mu)) cols[u].emplace_back(row_of(h2, m), coeff);
            }
          }
          std::vector<std::pair<std::size_t, PrimeField::Elem>> b;
          for (std::size_t h2 = 0; h2 < size(mid); ++h2)
            for (const auto& [m, coeff] : rhs(h2, g)) b.emplace_back(row_of(h2, m), coeff);
          auto mat = zeros(k, rows.size(), unknowns.size());
          for (std::size_t u = 0; u < unknowns.size(); ++u)
            for (const auto& [row, coeff] : cols[u]) mat(row, u) = k.add(mat(row, u), coeff);
          std::vector<PrimeField::Elem> bv(rows.size(), 0);
          for (const auto& [row, coeff] : b) bv[row] = k.add(bv[row], coeff);
          const auto sol = solve(k, mat, bv);
          if (!sol)
            throw std::runtime_error("koszul_perturb: obstruction at order " + std::to_string(n) + " on generator " +
                                     std::to_string(g) + " of C_" + std::to_string(i));
          for (std::size_t u = 0; u < unknowns.size(); ++u)
            add_term(r, x(unknowns[u].first, g), unknowns[u].second, (*sol)[u]);
        }
        if (!is_zero(x)) t[{n, i}] = std::move(x);
      }
    }
  }

  // Fold: generator degree cdeg - k s; parity k mod 2.
  Flat f;
  std::vector<std::size_t> offset;
  for (int i = 0; i <= top; ++i) {
    offset.push_back(f.deg.size());
    for (const auto& d : c.modules[static_cast<std::size_t>(i)]) {
      Degree dd = d;
      for (std::size_t q = 0; q < dd.size(); ++q) dd[q] -= i * s[q];
      f.deg.push_back(dd);
      f.parity.push_back(i % 2);
    }
  }
  f.d = PolyMatrix(f.deg.size(), f.deg.size());
  for (const auto& [key, m] : t) {
    const auto [n, i] = key;
    const int to = n == 0 ? i - 1 : i + 2 * n - 1;
    for (std::size_t a = 0; a < m.rows; ++a)
      for (std::size_t b = 0; b < m.cols; ++b)
        if (!m(a, b).empty()) f.d(offset[static_cast<std::size_t>(to)] + a, offset[static_cast<std::size_t>(i)] + b) = m(a, b);
  }
  return unflatten(W, s, f);
}

std::vector<std::map<int, std::int64_t>> complex_homology(const Ring& r, const GradedComplex& c, int cutoff) {
  if (const auto why = verify_complex(r, c); !why.empty()) throw std::invalid_argument("not a complex: " + why);
  const int top = static_cast<int>(c.modules.size()) - 1;
  const auto& k = r.field();
  const auto basis = [&](int i, const Degree& g) {
    PieceBasis b;
    if (i < 0 || i > top) return b;
    const auto& mod = c.modules[static_cast<std::size_t>(i)];
    for (std::size_t h = 0; h < mod.size(); ++h) {
      const auto need = g - mod[h];
      if (need[kInternal] < 0) continue;
      for (const auto& m : r.monomials_of(need)) b.add(h, 0, m);
    }
    return b;
  };
  // rank of d_i: C_i[g] -> C_{i-1}[g]
  const auto d_rank = [&](int i, const Degree& g) -> std::size_t {
    if (i < 1 || i > top) return 0;
    const auto from = basis(i, g), to = basis(i - 1, g);
    if (from.elems.empty() || to.elems.empty()) return 0;
    const auto& d = c.differentials[static_cast<std::size_t>(i - 1)];
    auto m = zeros(k, to.elems.size(), from.elems.size());
    for (std::size_t col = 0; col < from.elems.size(); ++col) {
      const auto& [h, unused, mu] = from.elems[col];
      for (std::size_t h2 = 0; h2 < d.rows; ++h2) {
        if (d(h2, h).empty()) continue;
        for (const auto& [mono, coeff] : times_monomial(r, d(h2, h), mu)) {
          auto& cell = m(to.at(h2, 0, mono), col);
          cell = k.add(cell, coeff);
        }
      }
    }
    return rank(k, std::move(m));
  };
  std::vector<std::map<int, std::int64_t>> out(static_cast<std::size_t>(top + 1));
  for (int i = 0; i <= top; ++i) {
    std::set<Degree> degrees;
    for (const auto& d : c.modules[static_cast<std::size_t>(i)])
      for (int t = 0; d[kInternal] + t <= cutoff; ++t)
        for (const auto& dd : r.degrees_at(t)) degrees.insert(d + dd);
    for (const auto& g : degrees) {
      const auto h = static_cast<std::int64_t>(basis(i, g).elems.size()) -
                     static_cast<std::int64_t>(d_rank(i, g)) - static_cast<std::int64_t>(d_rank(i + 1, g));
      if (h != 0) out[static_cast<std::size_t>(i)][g[kInternal]] += h;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Eagon-Northcott

EagonNorthcott eagon_northcott(int columns, int cutoff) {
  if (columns < 2) throw std::invalid_argument("need at least two columns");
  const auto c = static_cast<std::size_t>(columns);
  // Variables x_{s,j}, s in {1,2}; gradings: internal, R (all 0), two row tori, c column tori.
  std::vector<std::string> names;
  std::vector<std::vector<int>> w(4 + c);
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t j = 0; j < c; ++j) {
      names.push_back("x" + std::to_string(s + 1) + "_" + std::to_string(j + 1));
      w[kInternal].push_back(1);
      w[kRCharge].push_back(0);
      for (std::size_t q = 0; q < 2; ++q) w[2 + q].push_back(q == s ? 1 : 0);
      for (std::size_t q = 0; q < c; ++q) w[4 + q].push_back(q == j ? 1 : 0);
    }
  Ring r(PrimeField(kDefaultPrime), names, w);
  const auto x = [&](std::size_t s, std::size_t j) { return r.var(s * c + j); };

  // C_k, k >= 1: e_I (x) g^alpha with |I| = k + 1, alpha = (alpha_1, alpha_2), |alpha| = k - 1.
  struct Gen {
    std::vector<std::size_t> I;
    int a1 = 0, a2 = 0;
  };
  std::vector<std::vector<Gen>> gens(1);
  gens[0].push_back({});
  GradedComplex cx;
  cx.modules.push_back({r.zero_degree()});
  for (std::size_t k = 1; k + 1 <= c; ++k) {
    std::vector<Gen> g;
    std::vector<Degree> degs;
    for (const auto& I : subsets(c, k + 1))
      for (int a1 = static_cast<int>(k) - 1; a1 >= 0; --a1) {
        const int a2 = static_cast<int>(k) - 1 - a1;
        g.push_back({I, a1, a2});
        Degree d = r.zero_degree();
        d[kInternal] = static_cast<int>(k) + 1;
        d[2] = 1 + a1;
        d[3] = 1 + a2;
        for (auto i : I) d[4 + i] += 1;
        degs.push_back(d);
      }
    gens.push_back(std::move(g));
    cx.modules.push_back(std::move(degs));
  }
  const auto minus = r.field().neg(r.field().one());
  for (std::size_t k = 1; k < gens.size(); ++k) {
    PolyMatrix d(gens[k - 1].size(), gens[k].size());
    for (std::size_t j = 0; j < gens[k].size(); ++j) {
      const auto& G = gens[k][j];
      if (k == 1) {
        const auto a = G.I[0], b = G.I[1];
        d(0, j) = sub(r, mul(r, x(0, a), x(1, b)), mul(r, x(0, b), x(1, a)));
        continue;
      }
      for (std::size_t t = 0; t < G.I.size(); ++t) {
        auto J = G.I;
        J.erase(J.begin() + static_cast<std::ptrdiff_t>(t));
        for (std::size_t s = 0; s < 2; ++s) {
          const int b1 = G.a1 - (s == 0 ? 1 : 0), b2 = G.a2 - (s == 1 ? 1 : 0);
          if (b1 < 0 || b2 < 0) continue;
          std::size_t row = gens[k - 1].size();
          for (std::size_t q = 0; q < gens[k - 1].size(); ++q)
            if (gens[k - 1][q].I == J && gens[k - 1][q].a1 == b1 && gens[k - 1][q].a2 == b2) row = q;
          if (row == gens[k - 1].size()) throw std::logic_error("Eagon-Northcott target missing");
          const auto term = t % 2 == 0 ? x(s, G.I[t]) : scale(r, x(s, G.I[t]), minus);
          d(row, j) = add(r, d(row, j), term);
        }
      }
    }
    cx.differentials.push_back(std::move(d));
  }

  EagonNorthcott out;
  out.columns = columns;
  for (const auto& m : cx.modules) {
    out.ranks.push_back(m.size());
    reps::Character ch;
    for (const auto& d : m) ch[{d[2], d[3]}] += 1;
    out.sl2_contents.push_back(reps::sl2_content(reps::peel(ch)));
  }
  out.complex_failure = verify_complex(r, cx);
  if (!out.complex_failure.empty()) return out;
  out.homology = complex_homology(r, cx, cutoff);
  out.exact = true;
  for (std::size_t i = 1; i < out.homology.size(); ++i)
    if (!out.homology[i].empty()) out.exact = false;
  out.h0_matches = true;
  for (int t = 0; t <= cutoff; ++t) {
    const auto want = checked_mul(t + 1, binomial(t + columns - 1, columns - 1));
    const auto it = out.homology[0].find(t);
    if ((it == out.homology[0].end() ? 0 : it->second) != want) out.h0_matches = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Knorrer fibre

namespace {

using PF = PrimeField;

PF::Elem form(const PF& k, const MatrixOf<PF>& om, const VectorOf<PF>& u, const VectorOf<PF>& v) {
  return dot(k, u, apply(k, om, v));
}

}  // namespace

KnorrerFibre knorrer_fibre(const geometry::PfaffianModel& m, int cutoff, std::uint64_t seed) {
  const auto q = geometry::sampling_prime(m.field());
  const PF k(q);
  Rng rng(seed ^ 0x4b4eULL);
  const auto p = geometry::sample_y2_point(k, m, rng, 200000);
  if (!p) throw std::runtime_error("no point of Y2 found for the fibre check");
  const auto om = geometry::omega_at(k, m, *p);
  const auto kp = geometry::kernel_of_omega(k, om);
  const auto lp = geometry::lagrangian_extension(k, om);
  const auto d = static_cast<std::size_t>(m.d());

  KnorrerFibre out;
  out.d = m.d();
  out.q = q;
  out.kernel_dim = kp.rows;
  out.lagrangian_dim = lp.rows;

  // Darboux basis: kernel, l_i completing it to L_p, m_i dual to the l_i.
  std::vector<VectorOf<PF>> kvec, lvec, mvec;
  for (std::size_t i = 0; i < kp.rows; ++i) kvec.push_back(kp.row(i));
  std::vector<VectorOf<PF>> span = kvec;
  for (std::size_t i = 0; i < lp.rows; ++i) {
    auto trial = span;
    trial.push_back(lp.row(i));
    if (rank(k, from_rows(k, trial, d)) == trial.size()) {
      span = trial;
      lvec.push_back(lp.row(i));
    }
  }
  const auto nl = lvec.size();
  std::vector<VectorOf<PF>> lrows;
  for (const auto& l : lvec) lrows.push_back(apply(k, transpose(k, om), l));  // v -> omega(l, v)
  const auto lmat = nl ? from_rows(k, lrows, d) : zeros(k, 0, d);
  for (std::size_t j = 0; j < nl; ++j) {
    VectorOf<PF> rhs(nl, 0);
    rhs[j] = 1;
    const auto v = solve(k, lmat, rhs);
    if (!v) throw std::runtime_error("omega restricted to L_p x V is degenerate");
    mvec.push_back(*v);
  }
  // m_a += -omega(v_a, v_b) l_b for b > a, making the m's isotropic.
  const auto raw = mvec;
  for (std::size_t a = 0; a < nl; ++a)
    for (std::size_t b = a + 1; b < nl; ++b) {
      const auto c = k.neg(form(k, om, raw[a], raw[b]));
      for (std::size_t x = 0; x < d; ++x) mvec[a][x] = k.add(mvec[a][x], k.mul(c, lvec[b][x]));
    }
  std::vector<VectorOf<PF>> basis = kvec;
  basis.insert(basis.end(), lvec.begin(), lvec.end());
  basis.insert(basis.end(), mvec.begin(), mvec.end());
  out.gram_normal_form = basis.size() == d && rank(k, from_rows(k, basis, d)) == d;
  const auto nk = kvec.size();
  for (std::size_t a = 0; a < basis.size() && out.gram_normal_form; ++a)
    for (std::size_t b = 0; b < basis.size(); ++b) {
      PF::Elem want = 0;
      if (a >= nk && a < nk + nl && b == a + nl) want = 1;
      if (a >= nk + nl && b + nl == a) want = k.neg(1);
      if (form(k, om, basis[a], basis[b]) != want) out.gram_normal_form = false;
    }

  // In the adapted coordinates W_p = sum_i (y1_{l_i} y2_{m_i} - y1_{m_i} y2_{l_i}).
  std::vector<std::string> names;
  const std::size_t ntori = 2 * nl + 2 * nk;
  std::vector<std::vector<int>> w(2 + ntori);
  const auto push_var = [&](std::string name, int rch, std::vector<std::pair<std::size_t, int>> tori) {
    names.push_back(std::move(name));
    w[kInternal].push_back(1);
    w[kRCharge].push_back(rch);
    for (std::size_t t = 0; t < ntori; ++t) w[2 + t].push_back(0);
    for (const auto& [t, val] : tori) w[2 + t].back() = val;
  };
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t a = 0; a < nk; ++a)
      push_var("y" + std::to_string(s + 1) + "_k" + std::to_string(a + 1), 0, {{2 * nl + s * nk + a, 1}});
  for (std::size_t i = 0; i < nl; ++i) {
    const auto idx = std::to_string(i + 1);
    push_var("y1_l" + idx, 0, {{2 * i, -1}});
    push_var("y2_l" + idx, 0, {{2 * i + 1, -1}});
    push_var("y1_m" + idx, 2, {{2 * i + 1, 1}});
    push_var("y2_m" + idx, 2, {{2 * i, 1}});
  }
  const Ring r(k, names, w);
  Poly W;
  std::vector<Poly> eqs;
  for (std::size_t i = 0; i < nl; ++i) {
    const auto idx = std::to_string(i + 1);
    W = add(r, W, mul(r, r.var("y1_l" + idx), r.var("y2_m" + idx)));
    W = sub(r, W, mul(r, r.var("y1_m" + idx), r.var("y2_l" + idx)));
    eqs.push_back(r.var("y1_m" + idx));
    eqs.push_back(r.var("y2_m" + idx));
  }
  const auto e = koszul_perturb(r, koszul_complex(r, eqs), W);
  out.mf_verified = mf_verify(r, e).passed;
  out.ext = hom_ext_truncated(r, e, e, cutoff);

  const auto nker = static_cast<std::int64_t>(2 * nk);
  const auto npairs = static_cast<std::int64_t>(nk * (nk - 1) / 2);
  std::map<int, reps::Character> chars;
  for (const auto& [g, dim] : out.ext.by_degree) {
    int a = 0, b = 0;
    for (std::size_t t = 0; t < nk; ++t) {
      a += g[2 + 2 * nl + t];
      b += g[2 + 2 * nl + nk + t];
    }
    chars[g[kInternal]][{a, b}] += dim;
  }
  for (int t = 0; t <= cutoff; ++t) {
    out.expected_by_internal[t] = binomial(t + nker - 1, nker - 1);
    out.sl2_expected[t] = t % 2 == 0 ? binomial(t / 2 + npairs - 1, npairs - 1) : 0;
    out.sl2_slice[t] = chars.count(t) ? reps::sl2_invariant_dim(reps::peel(chars[t])) : 0;
  }

  // Transverse directions: Koszul complex of the normal-map forms.
  const auto nm = geometry::normal_map_matrix(k, m, *p);
  out.normal_rank = nm.rows ? rank(k, nm) : 0;
  std::vector<std::string> zn;
  std::vector<std::vector<int>> zw(2);
  for (std::size_t b = 0; b < nm.cols; ++b) {
    zn.push_back("z" + std::to_string(b + 1));
    zw[kInternal].push_back(1);
    zw[kRCharge].push_back(0);
  }
  const Ring rz(k, zn, zw);
  std::vector<Poly> forms;
  for (std::size_t a = 0; a < nm.rows; ++a) {
    Poly f;
    for (std::size_t b = 0; b < nm.cols; ++b) f = add(rz, f, scale(rz, rz.var(b), nm(a, b)));
    if (!f.empty()) forms.push_back(f);
  }
  const auto hom = complex_homology(rz, koszul_complex(rz, forms), cutoff);
  for (const auto& byt : hom)
    for (const auto& [t, n] : byt) out.transverse_homology += n;
  return out;
}

// ---------------------------------------------------------------------------
// Suite checks

namespace {

// x1, x2 with R-charges 0 and 2; W = x1 x2.
Ring plane_ring(std::uint32_t q = kDefaultPrime) {
  return Ring(PrimeField(q), {"x1", "x2"}, {{1, 1}, {0, 2}});
}

// a1, a2, b1, b2 with W = a1 b2 - a2 b1 and M = {a2 = b2 = 0}.
Ring quadric_ring() {
  return Ring(PrimeField(kDefaultPrime), {"a1", "a2", "b1", "b2"},
              {{1, 1, 1, 1}, {0, 2, 0, 2}, {-1, 0, 0, 1}, {0, 1, -1, 0}});
}

MatrixFactorization point_like(const Ring& r) {
  const auto W = sub(r, mul(r, r.var("a1"), r.var("b2")), mul(r, r.var("a2"), r.var("b1")));
  return koszul_perturb(r, koszul_complex(r, {r.var("a2"), r.var("b2")}), W);
}

json ext_summary(const ExtResult& e) {
  return {{"total", e.total()}, {"stabilized", e.stabilized}, {"by_parity_r", e.to_json()["by_parity_r"]}};
}

bool concentrated_in_zero(const Ring& r, const ExtResult& e) {
  return e.by_degree.size() == 1 && e.by_degree.begin()->first == r.zero_degree() && e.by_degree.begin()->second == 1;
}

}  // namespace

CheckRecord mf_verify_check() {
  CheckRecord rec;
  rec.check_name = "mf_verify_examples";
  rec.anchor = "(d_E)^2 = W id_E";
  const auto r = plane_ring();
  const auto W = mul(r, r.var("x1"), r.var("x2"));

  PolyMatrix d0(1, 1), d1(1, 1);
  d0(0, 0) = r.var("x2");
  d1(0, 0) = r.var("x1");
  const auto basic = mf_verify(r, make_mf(r, W, {0}, {1}, d0, d1));
  const auto stab = mf_verify(r, stabilization(r, W));

  // d1 d0 = W but d0 d1 != W id.
  PolyMatrix n0(2, 1), n1(1, 2);
  n0(0, 0) = r.var("x1");
  n0(1, 0) = r.var("x2");
  n1(0, 0) = r.var("x2");
  const auto bad = mf_verify(r, make_mf(r, W, {2, 0}, {1}, n0, n1));

  rec.passed = basic.passed && stab.passed && !bad.passed && bad.failure == "d0*d1 != W id";
  rec.witness = {{"basic", basic.passed},
                 {"stabilization", stab.passed},
                 {"negative_control", {{"passed", bad.passed}, {"failure", bad.failure}, {"witness", bad.witness}}}};
  return rec;
}

CheckRecord knorrer_base_check(int cutoff) {
  CheckRecord rec;
  rec.check_name = "knorrer_base_case";
  rec.anchor = "the object E behaves, homologically, like an isolated point";
  rec.parameters = {{"cutoff", cutoff}};
  const auto r = plane_ring();
  const auto W = mul(r, r.var("x1"), r.var("x2"));
  const auto e = koszul_perturb(r, koszul_complex(r, {r.var("x1")}), W);
  const auto ext = hom_ext_truncated(r, e, e, cutoff);

  const auto rq = quadric_ring();
  const auto m = point_like(rq);
  const auto ext_q = hom_ext_truncated(rq, m, m, cutoff);

  // W = 0 on one variable, M the origin: exterior algebra on one generator.
  const Ring r0(PrimeField(kDefaultPrime), {"x"}, {{1}, {0}});
  const auto k0 = koszul_perturb(r0, koszul_complex(r0, {r0.var("x")}), Poly{});
  const auto ext0 = hom_ext_truncated(r0, k0, k0, cutoff);
  const bool exterior = ext0.stabilized && ext0.by_parity_r.size() == 2 && ext0.by_parity_r.at({0, 0}) == 1 &&
                        ext0.by_parity_r.count({1, 1}) && ext0.by_parity_r.at({1, 1}) == 1;

  rec.passed = ext.stabilized && ext.total() == 1 && concentrated_in_zero(r, ext) && ext_q.stabilized &&
               ext_q.total() == 1 && concentrated_in_zero(rq, ext_q) && exterior;
  rec.witness = {{"x1x2", ext_summary(ext)}, {"rank4_quadric", ext_summary(ext_q)}, {"zero_potential", ext_summary(ext0)}};
  return rec;
}

CheckRecord contractibility_check(int cutoff) {
  CheckRecord rec;
  rec.check_name = "stabilization_contractible";
  rec.anchor = "(O[1] -> O; W, 1) is contractible";
  rec.parameters = {{"cutoff", cutoff}};
  const auto r = plane_ring();
  const auto W = mul(r, r.var("x1"), r.var("x2"));
  std::vector<std::pair<std::string, MatrixFactorization>> objects{
      {"O_{x1=0}", koszul_perturb(r, koszul_complex(r, {r.var("x1")}), W)},
      {"O_{x2=0}", koszul_perturb(r, koszul_complex(r, {r.var("x2")}), W)},
      {"stabilization", stabilization(r, W)}};
  std::vector<std::pair<std::string, MatrixFactorization>> cones{{"stabilization", stabilization(r, W)}};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& e = objects[i].second;
    cones.emplace_back(objects[i].first + " (x) cone(id_O)", tensor(r, e, stabilization(r, Poly{}, e.s)));
  }
  rec.passed = true;
  json rows = json::array();
  for (const auto& [cname, c] : cones) {
    const auto v = mf_verify(r, c);
    if (!v.passed) {
      rec.passed = false;
      rows.push_back({{"object", cname}, {"mf_verify", v.failure}});
      continue;
    }
    for (const auto& [oname, o] : objects) {
      const auto a = hom_ext_truncated(r, c, o, cutoff).total();
      const auto b = hom_ext_truncated(r, o, c, cutoff).total();
      if (a != 0 || b != 0) rec.passed = false;
      rows.push_back({{"cone", cname}, {"test_object", oname}, {"ext_from", a}, {"ext_to", b}});
    }
  }
  rec.witness = {{"pairs", rows}};
  return rec;
}

CheckRecord koszul_perturb_check() {
  CheckRecord rec;
  rec.check_name = "koszul_perturbation";
  rec.anchor = "perturb the differential in the resolution of E until it becomes a matrix factorization";
  json w = json::object();
  bool ok = true;

  const auto r = plane_ring();
  const auto W = mul(r, r.var("x1"), r.var("x2"));
  const auto e = koszul_perturb(r, koszul_complex(r, {r.var("x1")}), W);
  const bool periodic = e.d0(0, 0) == r.var("x1") && e.d1(0, 0) == r.var("x2") && mf_verify(r, e).passed;
  ok = ok && periodic;
  w["x1_with_x1x2"] = {{"d0", r.str(e.d0(0, 0))}, {"d1", r.str(e.d1(0, 0))}, {"verified", periodic}};

  // W = sum a_i p_i with a_i of R-charge 0 and p_i of R-charge 2.
  std::vector<std::string> names;
  std::vector<std::vector<int>> wt(2 + 7);
  for (int pass = 0; pass < 2; ++pass)
    for (int i = 0; i < 7; ++i) {
      names.push_back((pass == 0 ? "a" : "p") + std::to_string(i + 1));
      wt[kInternal].push_back(1);
      wt[kRCharge].push_back(pass == 0 ? 0 : 2);
      for (int t = 0; t < 7; ++t) wt[2 + static_cast<std::size_t>(t)].push_back(t == i ? (pass == 0 ? 1 : -1) : 0);
    }
  const Ring r7(PrimeField(kDefaultPrime), names, wt);
  Poly W7;
  std::vector<Poly> as;
  for (int i = 0; i < 7; ++i) {
    as.push_back(r7.var(static_cast<std::size_t>(i)));
    W7 = add(r7, W7, mul(r7, r7.var(static_cast<std::size_t>(i)), r7.var(static_cast<std::size_t>(7 + i))));
  }
  const auto e7 = koszul_perturb(r7, koszul_complex(r7, as), W7);
  const auto v7 = mf_verify(r7, e7);
  ok = ok && v7.passed && e7.rank() == 128;
  w["koszul_7"] = {{"rank", e7.rank()}, {"verified", v7.passed}, {"failure", v7.failure}};

  // Zero potential: the folded complex itself.
  const auto c = koszul_complex(r, {r.var("x1"), r.var("x2")});
  const auto e0 = koszul_perturb(r, c, Poly{});
  const bool unchanged = e0.d0(0, 0) == c.differentials[0](0, 0) && e0.d0(0, 1) == c.differentials[0](0, 1) &&
                         e0.d1(0, 1) == c.differentials[1](0, 0) && e0.d1(1, 1) == c.differentials[1](1, 0) &&
                         e0.d1(0, 0).empty() && e0.d1(1, 0).empty() && mf_verify(r, e0).passed;
  ok = ok && unchanged;
  w["zero_potential_unchanged"] = unchanged;

  // W not killed by the resolved module: the lift must fail.
  const Ring r3(PrimeField(kDefaultPrime), {"x1", "x2", "x3"}, {{1, 1, 1}, {0, 2, 0}});
  std::string obstruction;
  try {
    koszul_perturb(r3, koszul_complex(r3, {r3.var("x1")}), mul(r3, r3.var("x2"), r3.var("x3")));
  } catch (const std::runtime_error& ex) {
    obstruction = ex.what();
  }
  ok = ok && !obstruction.empty();
  w["negative_control_obstruction"] = obstruction;
  rec.passed = ok;
  rec.witness = w;
  return rec;
}

CheckRecord tensor_law_check(int cutoff) {
  CheckRecord rec;
  rec.check_name = "knorrer_tensor_law";
  rec.anchor = "Ext for W + uv equals Ext for W";
  rec.parameters = {{"cutoff", cutoff}};
  const PrimeField k(kDefaultPrime);
  struct Toy {
    std::string name;
    std::vector<std::string> vars;
    std::vector<int> internal, rch;
    std::function<Poly(const Ring&)> W;
    std::string resolved;  // variable cutting out M
    int uv_internal;
  };
  const std::vector<Toy> toys{
      {"x1x2", {"x1", "x2"}, {1, 1}, {0, 2}, [](const Ring& r) { return mul(r, r.var("x1"), r.var("x2")); }, "x1", 1},
      {"x1^2x2", {"x1", "x2"}, {1, 2}, {0, 2},
       [](const Ring& r) { return mul(r, mul(r, r.var("x1"), r.var("x1")), r.var("x2")); }, "x1", 2},
      {"zero", {"x"}, {1}, {0}, [](const Ring&) { return Poly{}; }, "x", 1}};
  rec.passed = true;
  json rows = json::array();
  for (const auto& t : toys) {
    const Ring small(k, t.vars, {t.internal, t.rch});
    const auto e = koszul_perturb(small, koszul_complex(small, {small.var(t.resolved)}), t.W(small));
    const auto base = hom_ext_truncated(small, e, e, cutoff);

    auto vars = t.vars;
    auto internal = t.internal;
    auto rch = t.rch;
    vars.insert(vars.end(), {"u", "v"});
    internal.insert(internal.end(), {t.uv_internal, t.uv_internal});
    rch.insert(rch.end(), {0, 2});
    const Ring big(k, vars, {internal, rch});
    const auto Wb = t.W(big);
    const auto uv = mul(big, big.var("u"), big.var("v"));
    const auto eb = koszul_perturb(big, koszul_complex(big, {big.var(t.resolved)}), Wb);
    const auto ku = koszul_perturb(big, koszul_complex(big, {big.var("u")}), uv);
    const auto prod = tensor(big, eb, ku);
    const auto v = mf_verify(big, prod);
    const auto ext = hom_ext_truncated(big, prod, prod, cutoff);
    const bool same = v.passed && ext.by_degree == base.by_degree;
    if (!same) rec.passed = false;
    rows.push_back({{"W", t.name}, {"base", ext_summary(base)}, {"with_uv", ext_summary(ext)}, {"equal", same}});
  }
  rec.witness = {{"toys", rows}};
  return rec;
}

CheckRecord periodicity_check(int cutoff) {
  CheckRecord rec;
  rec.check_name = "ext_two_periodicity";
  rec.anchor = "E[2] shifts R-charge by 2";
  rec.parameters = {{"cutoff", cutoff}};
  const auto rq = quadric_ring();
  const auto W = sub(rq, mul(rq, rq.var("a1"), rq.var("b2")), mul(rq, rq.var("a2"), rq.var("b1")));
  const auto m = point_like(rq);
  // {a1 = b1 = 0} meets M transversally.
  const auto other = koszul_perturb(rq, koszul_complex(rq, {rq.var("a1"), rq.var("b1")}), W);
  rec.passed = true;
  json rows = json::array();
  for (const auto& [name, f] : std::vector<std::pair<std::string, MatrixFactorization>>{{"O_M", m}, {"O_M'", other}}) {
    const auto base = hom_ext_truncated(rq, m, f, cutoff);
    for (int sh : {1, 2, -2}) {
      const auto shifted = hom_ext_truncated(rq, m, shift(rq, f, sh), cutoff);
      std::map<Degree, std::int64_t> moved;
      for (const auto& [g, n] : base.by_degree) {
        auto h = g;
        h[kRCharge] += sh;
        moved[h] = n;
      }
      const bool ok = base.stabilized && shifted.stabilized && shifted.by_degree == moved && mf_verify(rq, shift(rq, f, sh)).passed;
      if (!ok) rec.passed = false;
      rows.push_back({{"target", name}, {"shift", sh}, {"total", shifted.total()}, {"matches", ok}});
    }
  }
  rec.witness = {{"cases", rows}};
  return rec;
}

CheckRecord eagon_northcott_check(int columns, int cutoff) {
  CheckRecord rec;
  rec.check_name = "eagon_northcott_resolution";
  rec.anchor = "O_Gamma has an Eagon-Northcott resolution";
  rec.parameters = {{"columns", columns}, {"cutoff", cutoff}};
  const auto en = eagon_northcott(columns, cutoff);
  std::vector<std::size_t> want{1};
  std::vector<std::map<int, std::int64_t>> want_content{{{0, 1}}};
  for (int kk = 1; kk + 1 <= columns; ++kk) {
    const auto mult = binomial(columns, kk + 1);
    want.push_back(static_cast<std::size_t>(mult * kk));
    want_content.push_back({{kk - 1, mult}});
  }
  rec.passed = en.complex_failure.empty() && en.ranks == want && en.sl2_contents == want_content && en.exact &&
               en.h0_matches;
  json contents = json::array(), homology = json::array();
  for (const auto& c : en.sl2_contents) {
    json row = json::object();
    for (const auto& [u, n] : c) row["Sym^" + std::to_string(u)] = n;
    contents.push_back(row);
  }
  for (const auto& h : en.homology) {
    json row = json::object();
    for (const auto& [t, n] : h) row[std::to_string(t)] = n;
    homology.push_back(row);
  }
  rec.witness = {{"ranks", en.ranks},     {"expected_ranks", want}, {"sl2_contents", contents},
                 {"homology", homology}, {"exact", en.exact},      {"h0_matches_segre_cone", en.h0_matches},
                 {"complex_failure", en.complex_failure}};
  return rec;
}

CheckRecord knorrer_rank_check(const geometry::PfaffianModel& m, int cutoff, std::uint64_t seed) {
  CheckRecord rec;
  rec.check_name = "knorrer_fibre_ext";
  rec.anchor = "O_Y' -> pi_* Rhom(O_M, O_M) is a quasi-isomorphism (fibrewise)";
  rec.parameters = {{"d", m.d()}, {"cutoff", cutoff}, {"seed", seed}};
  const auto f = knorrer_fibre(m, cutoff, seed);
  std::map<int, std::int64_t> got;
  for (int t = 0; t <= cutoff; ++t) got[t] = f.ext.by_internal.count(t) ? f.ext.by_internal.at(t) : 0;
  const bool even_only = f.ext.by_parity_r.size() == 1 && f.ext.by_parity_r.begin()->first == std::make_pair(0, 0);
  rec.passed = f.gram_normal_form && f.mf_verified && got == f.expected_by_internal && even_only &&
               f.sl2_slice == f.sl2_expected && f.normal_rank == 3 && f.transverse_homology == 1;
  const auto as_obj = [](const std::map<int, std::int64_t>& mm) {
    json j = json::object();
    for (const auto& [t, n] : mm) j[std::to_string(t)] = n;
    return j;
  };
  rec.witness = {{"sampling_field", "F_" + std::to_string(f.q)},
                 {"kernel_dim", f.kernel_dim},
                 {"lagrangian_dim", f.lagrangian_dim},
                 {"gram_normal_form", f.gram_normal_form},
                 {"mf_verified", f.mf_verified},
                 {"ext_by_internal", as_obj(got)},
                 {"expected_polynomial_ring_on_kernel", as_obj(f.expected_by_internal)},
                 {"ext_by_parity_r", f.ext.to_json()["by_parity_r"]},
                 {"stabilized", f.ext.stabilized},
                 {"sl2_invariant_slice", as_obj(f.sl2_slice)},
                 {"sl2_expected_three_quadrics", as_obj(f.sl2_expected)},
                 {"normal_map_rank", f.normal_rank},
                 {"transverse_koszul_homology", f.transverse_homology}};
  return rec;
}

}  // namespace pfgr::mf
