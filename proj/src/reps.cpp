#include "pfgr/reps.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "checked.hpp"

namespace pfgr::reps {

void RepSum::add(GL2Weight w, std::int64_t mult) {
  if (mult == 0) return;
  auto& slot = terms_[w];
  slot = checked_add(slot, mult);
  if (slot < 0) throw std::domain_error("RepSum multiplicity became negative");
  if (slot == 0) terms_.erase(w);
}

void RepSum::add(const RepSum& other, std::int64_t scale) {
  for (const auto& [w, m] : other.terms_) add(w, checked_mul(m, scale));
}

std::int64_t RepSum::multiplicity(GL2Weight w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? 0 : it->second;
}

std::int64_t RepSum::dim() const {
  std::int64_t total = 0;
  for (const auto& [w, m] : terms_) total = checked_add(total, checked_mul(m, w.dim()));
  return total;
}

Character character(GL2Weight w) {
  Character c;
  for (int i = w.b; i <= w.a; ++i) c[{i, w.a + w.b - i}] = 1;
  return c;
}

Character character(const RepSum& r) {
  Character c;
  for (const auto& [w, m] : r.terms()) {
    for (int i = w.b; i <= w.a; ++i) {
      auto& slot = c[{i, w.a + w.b - i}];
      slot = checked_add(slot, m);
    }
  }
  return c;
}

Character multiply(const Character& x, const Character& y) {
  Character out;
  for (const auto& [ex, cx] : x) {
    for (const auto& [ey, cy] : y) {
      auto& slot = out[{ex.first + ey.first, ex.second + ey.second}];
      slot = checked_add(slot, checked_mul(cx, cy));
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

bool is_symmetric(const Character& c) {
  for (const auto& [e, v] : c) {
    auto it = c.find({e.second, e.first});
    if (it == c.end() || it->second != v) return false;
  }
  return true;
}

std::int64_t evaluate_at_identity(const Character& c) {
  std::int64_t s = 0;
  for (const auto& [e, v] : c) s = checked_add(s, v);
  return s;
}

RepSum peel(Character c) {
  std::erase_if(c, [](const auto& kv) { return kv.second == 0; });
  RepSum out;
  while (!c.empty()) {
    // The lexicographically largest exponent is a highest weight.
    const auto [top, coeff] = *c.rbegin();
    if (coeff < 0 || top.first < top.second) {
      throw std::domain_error("peel: not the character of a representation at (" +
                              std::to_string(top.first) + "," + std::to_string(top.second) + ")");
    }
    const GL2Weight w(top.first, top.second);
    out.add(w, coeff);
    for (int i = w.b; i <= w.a; ++i) {
      auto it = c.find({i, w.a + w.b - i});
      if (it == c.end()) throw std::domain_error("peel: missing weight in a string");
      it->second -= coeff;
      if (it->second == 0) c.erase(it);
    }
  }
  return out;
}

RepSum decompose_tensor(GL2Weight w1, GL2Weight w2) {
  return peel(multiply(character(w1), character(w2)));
}

RepSum tensor(const RepSum& x, const RepSum& y) {
  if (x.empty() || y.empty()) return {};
  return peel(multiply(character(x), character(y)));
}

namespace {

// Coefficient series in t, truncated at `degree`, with character coefficients.
using Series = std::vector<Character>;

Character shift(const Character& c, int di, int dj, std::int64_t scale) {
  Character out;
  for (const auto& [e, v] : c) out[{e.first + di, e.second + dj}] = checked_mul(v, scale);
  return out;
}

void accumulate(Character& into, const Character& from) {
  for (const auto& [e, v] : from) {
    auto& slot = into[e];
    slot = checked_add(slot, v);
  }
}

// Multiply the series by prod over the torus weights of a generating factor
// whose t^j coefficient for a weight of multiplicity mu is coeff(mu, j).
template <class Coeff>
Series series_product(const Character& base, int degree, Coeff coeff) {
  Series s(static_cast<std::size_t>(degree) + 1);
  s[0][{0, 0}] = 1;
  for (const auto& [e, mu] : base) {
    if (mu < 0) throw std::domain_error("series_product: negative multiplicity");
    Series next(s.size());
    for (int k = 0; k <= degree; ++k) {
      for (int j = 0; j <= k; ++j) {
        const std::int64_t cj = coeff(mu, j);
        if (cj == 0 || s[static_cast<std::size_t>(k - j)].empty()) continue;
        accumulate(next[static_cast<std::size_t>(k)],
                   shift(s[static_cast<std::size_t>(k - j)], j * e.first, j * e.second, cj));
      }
    }
    s = std::move(next);
  }
  for (auto& c : s) std::erase_if(c, [](const auto& kv) { return kv.second == 0; });
  return s;
}

}  // namespace

Character sym_power_character(const Character& base, int degree) {
  if (degree < 0) throw std::invalid_argument("negative symmetric power");
  // (1 - t z^e)^(-mu) = sum_j C(mu + j - 1, j) t^j z^(j e)
  auto s = series_product(base, degree, [](std::int64_t mu, int j) {
    return j == 0 ? std::int64_t{1} : binomial(mu + j - 1, j);
  });
  return s[static_cast<std::size_t>(degree)];
}

RepSum decompose_sym_power(const RepSum& base, int degree, int cutoff) {
  if (degree < 0) throw std::invalid_argument("negative symmetric power");
  if (degree > cutoff) {
    throw std::length_error("symmetric power degree " + std::to_string(degree) +
                            " exceeds cutoff " + std::to_string(cutoff));
  }
  return peel(sym_power_character(character(base), degree));
}

RepSum decompose_exterior_hom(int c, int t) {
  if (c < 0 || t < 0) throw std::invalid_argument("decompose_exterior_hom: negative argument");
  if (t > 2 * c) return {};
  Character base;
  base[{0, -1}] = c;
  base[{-1, 0}] = c;
  // (1 + t z^e)^mu = sum_j C(mu, j) t^j z^(j e)
  auto s = series_product(base, t, [](std::int64_t mu, int j) { return binomial(mu, j); });
  return peel(s[static_cast<std::size_t>(t)]);
}

std::map<int, std::int64_t> invariant_multiplicities(const RepSum& r) {
  std::map<int, std::int64_t> out;
  for (const auto& [w, m] : r.terms())
    if (w.a == w.b) out[w.a] += m;
  return out;
}

std::map<int, std::int64_t> sl2_content(const RepSum& r) {
  std::map<int, std::int64_t> out;
  for (const auto& [w, m] : r.terms()) out[w.sl2_highest()] += m;
  return out;
}

std::int64_t sl2_invariant_dim(const RepSum& r) {
  std::int64_t s = 0;
  for (const auto& [nu, m] : invariant_multiplicities(r)) s = checked_add(s, m);
  return s;
}

nlohmann::json to_json(const RepSum& r) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [w, m] : r.terms()) j.push_back({w.a, w.b, m});
  return j;
}

RepSum rep_from_json(const nlohmann::json& j) {
  RepSum r;
  for (const auto& t : j) r.add(GL2Weight(t.at(0).get<int>(), t.at(1).get<int>()), t.at(2).get<std::int64_t>());
  return r;
}

}  // namespace pfgr::reps
