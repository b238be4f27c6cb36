#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pfgr/field.hpp"

// Sparse multigraded polynomials over a prime field.
namespace pfgr::mf {

using Monomial = std::vector<std::uint16_t>;
using Poly = std::map<Monomial, PrimeField::Elem>;  // zero coefficients never stored
using Degree = std::vector<int>;                    // one entry per grading

inline constexpr std::size_t kInternal = 0;  // positive weights
inline constexpr std::size_t kRCharge = 1;

// Grading 0 is the internal degree (all weights positive), grading 1 the
// R-charge; any further gradings are torus weights.
class Ring {
 public:
  Ring(PrimeField field, std::vector<std::string> names, std::vector<std::vector<int>> weights);

  const PrimeField& field() const { return field_; }
  std::size_t nvars() const { return names_.size(); }
  std::size_t ngradings() const { return weights_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  int weight(std::size_t grading, std::size_t var) const { return weights_[grading][var]; }
  std::size_t index_of(const std::string& name) const;

  Poly var(std::size_t i) const;
  Poly var(const std::string& name) const { return var(index_of(name)); }
  Poly constant(std::int64_t c) const;
  Degree degree(const Monomial& m) const;
  Degree zero_degree() const { return Degree(ngradings(), 0); }

  // All monomials of the given internal degree, in lexicographic order.
  const std::vector<Monomial>& monomials(int internal_degree) const;
  // Monomials of one full multidegree, in lexicographic order.
  const std::vector<Monomial>& monomials_of(const Degree& d) const;
  // Distinct multidegrees of monomials with the given internal degree.
  std::vector<Degree> degrees_at(int internal_degree) const;

  std::string str(const Poly& p) const;

 private:
  const std::map<Degree, std::vector<Monomial>>& buckets(int internal_degree) const;

  PrimeField field_;
  std::vector<std::string> names_;
  std::vector<std::vector<int>> weights_;
  mutable std::map<int, std::vector<Monomial>> monomial_cache_;
  mutable std::map<int, std::map<Degree, std::vector<Monomial>>> bucket_cache_;
};

Poly add(const Ring& r, const Poly& a, const Poly& b);
Poly sub(const Ring& r, const Poly& a, const Poly& b);
Poly neg(const Ring& r, const Poly& a);
Poly mul(const Ring& r, const Poly& a, const Poly& b);
Poly scale(const Ring& r, const Poly& a, PrimeField::Elem c);
void add_term(const Ring& r, Poly& into, const Monomial& m, PrimeField::Elem c);
bool is_zero(const Poly& p);

// Common degree of all terms; nullopt for zero or inhomogeneous input.
std::optional<Degree> homogeneous_degree(const Ring& r, const Poly& p);

// Dense matrix of polynomials; rows index targets, columns sources.
struct PolyMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Poly> a;

  PolyMatrix() = default;
  PolyMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
  Poly& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Poly& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

PolyMatrix multiply(const Ring& r, const PolyMatrix& x, const PolyMatrix& y);
PolyMatrix add(const Ring& r, const PolyMatrix& x, const PolyMatrix& y);
PolyMatrix scale(const Ring& r, const PolyMatrix& x, PrimeField::Elem c);
PolyMatrix identity_times(const Ring& r, std::size_t n, const Poly& p);
bool is_zero(const PolyMatrix& m);

nlohmann::json to_json(const Ring& r, const Poly& p);
nlohmann::json to_json(const Ring& r, const PolyMatrix& m);

Degree operator+(const Degree& a, const Degree& b);
Degree operator-(const Degree& a, const Degree& b);

}  // namespace pfgr::mf
