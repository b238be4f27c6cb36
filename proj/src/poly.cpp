#include "pfgr/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pfgr::mf {

Ring::Ring(PrimeField field, std::vector<std::string> names, std::vector<std::vector<int>> weights)
    : field_(field), names_(std::move(names)), weights_(std::move(weights)) {
  if (weights_.size() < 2) throw std::invalid_argument("ring needs internal and R-charge gradings");
  for (const auto& w : weights_)
    if (w.size() != names_.size()) throw std::invalid_argument("one weight per variable in every grading");
  for (int w : weights_[kInternal])
    if (w <= 0) throw std::invalid_argument("internal degrees must be positive");
}

std::size_t Ring::index_of(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::invalid_argument("no variable named " + name);
  return static_cast<std::size_t>(it - names_.begin());
}

Poly Ring::var(std::size_t i) const {
  Monomial m(nvars(), 0);
  m.at(i) = 1;
  return {{m, field_.one()}};
}

Poly Ring::constant(std::int64_t c) const {
  const auto v = field_.from_int(c);
  if (v == 0) return {};
  return {{Monomial(nvars(), 0), v}};
}

Degree Ring::degree(const Monomial& m) const {
  Degree d(ngradings(), 0);
  for (std::size_t g = 0; g < ngradings(); ++g)
    for (std::size_t v = 0; v < nvars(); ++v) d[g] += weights_[g][v] * m[v];
  return d;
}

const std::vector<Monomial>& Ring::monomials(int internal_degree) const {
  auto it = monomial_cache_.find(internal_degree);
  if (it != monomial_cache_.end()) return it->second;
  std::vector<Monomial> out;
  if (internal_degree >= 0) {
    Monomial cur(nvars(), 0);
    const auto rec = [&](auto&& self, std::size_t v, int left) -> void {
      if (v == nvars()) {
        if (left == 0) out.push_back(cur);
        return;
      }
      const int w = weights_[kInternal][v];
      for (int e = left / w; e >= 0; --e) {
        cur[v] = static_cast<std::uint16_t>(e);
        self(self, v + 1, left - e * w);
      }
      cur[v] = 0;
    };
    rec(rec, 0, internal_degree);
    std::sort(out.begin(), out.end());
  }
  return monomial_cache_.emplace(internal_degree, std::move(out)).first->second;
}

const std::map<Degree, std::vector<Monomial>>& Ring::buckets(int internal_degree) const {
  auto it = bucket_cache_.find(internal_degree);
  if (it == bucket_cache_.end()) {
    std::map<Degree, std::vector<Monomial>> b;
    for (const auto& m : monomials(internal_degree)) b[degree(m)].push_back(m);
    it = bucket_cache_.emplace(internal_degree, std::move(b)).first;
  }
  return it->second;
}

const std::vector<Monomial>& Ring::monomials_of(const Degree& d) const {
  static const std::vector<Monomial> none;
  if (d.size() != ngradings()) throw std::invalid_argument("degree has the wrong number of gradings");
  const auto& b = buckets(d[kInternal]);
  const auto it = b.find(d);
  return it == b.end() ? none : it->second;
}

std::vector<Degree> Ring::degrees_at(int internal_degree) const {
  std::vector<Degree> out;
  for (const auto& [d, ms] : buckets(internal_degree)) out.push_back(d);
  return out;
}

std::string Ring::str(const Poly& p) const {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    bool any = false;
    if (it->second != 1) {
      os << field_.lift(it->second);
      any = true;
    }
    for (std::size_t v = 0; v < nvars(); ++v) {
      if (it->first[v] == 0) continue;
      if (any) os << "*";
      os << names_[v];
      if (it->first[v] > 1) os << "^" << it->first[v];
      any = true;
    }
    if (!any) os << "1";
  }
  return os.str();
}

void add_term(const Ring& r, Poly& into, const Monomial& m, PrimeField::Elem c) {
  if (c == 0) return;
  auto [it, inserted] = into.emplace(m, c);
  if (inserted) return;
  it->second = r.field().add(it->second, c);
  if (it->second == 0) into.erase(it);
}

Poly add(const Ring& r, const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b) add_term(r, out, m, c);
  return out;
}

Poly neg(const Ring& r, const Poly& a) {
  Poly out;
  for (const auto& [m, c] : a) out.emplace(m, r.field().neg(c));
  return out;
}

Poly sub(const Ring& r, const Poly& a, const Poly& b) { return add(r, a, neg(r, b)); }

Poly scale(const Ring& r, const Poly& a, PrimeField::Elem c) {
  Poly out;
  if (c == 0) return out;
  for (const auto& [m, v] : a) out.emplace(m, r.field().mul(v, c));
  return out;
}

Poly mul(const Ring& r, const Poly& a, const Poly& b) {
  Poly out;
  Monomial m(r.nvars());
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      for (std::size_t v = 0; v < m.size(); ++v) m[v] = static_cast<std::uint16_t>(ma[v] + mb[v]);
      add_term(r, out, m, r.field().mul(ca, cb));
    }
  return out;
}

bool is_zero(const Poly& p) { return p.empty(); }

std::optional<Degree> homogeneous_degree(const Ring& r, const Poly& p) {
  if (p.empty()) return std::nullopt;
  const auto d = r.degree(p.begin()->first);
  for (const auto& [m, c] : p)
    if (r.degree(m) != d) return std::nullopt;
  return d;
}

PolyMatrix multiply(const Ring& r, const PolyMatrix& x, const PolyMatrix& y) {
  if (x.cols != y.rows) throw std::invalid_argument("polynomial matrix shape mismatch");
  PolyMatrix out(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t l = 0; l < x.cols; ++l) {
      if (x(i, l).empty()) continue;
      for (std::size_t j = 0; j < y.cols; ++j)
        if (!y(l, j).empty()) out(i, j) = add(r, out(i, j), mul(r, x(i, l), y(l, j)));
    }
  return out;
}

PolyMatrix add(const Ring& r, const PolyMatrix& x, const PolyMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("polynomial matrix shape mismatch");
  PolyMatrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = add(r, x.a[i], y.a[i]);
  return out;
}

PolyMatrix scale(const Ring& r, const PolyMatrix& x, PrimeField::Elem c) {
  PolyMatrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = scale(r, x.a[i], c);
  return out;
}

PolyMatrix identity_times(const Ring& r, std::size_t n, const Poly& p) {
  (void)r;
  PolyMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = p;
  return out;
}

bool is_zero(const PolyMatrix& m) {
  return std::all_of(m.a.begin(), m.a.end(), [](const Poly& p) { return p.empty(); });
}

nlohmann::json to_json(const Ring& r, const Poly& p) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [m, c] : p) j.push_back({{"exponents", m}, {"coeff", r.field().lift(c)}});
  return j;
}

nlohmann::json to_json(const Ring& r, const PolyMatrix& m) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < m.cols; ++c) row.push_back(to_json(r, m(i, c)));
    j.push_back(row);
  }
  return j;
}

Degree operator+(const Degree& a, const Degree& b) {
  Degree out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Degree operator-(const Degree& a, const Degree& b) {
  Degree out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

}  // namespace pfgr::mf
