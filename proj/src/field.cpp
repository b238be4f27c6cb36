#include "pfgr/field.hpp"

#include <stdexcept>

namespace pfgr {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
  if (q >= (1u << 31) || !is_prime(q)) {
    throw std::invalid_argument("field size " + std::to_string(q) + " is not a prime below 2^31");
  }
}

PrimeField::Elem PrimeField::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(q_);
  if (r < 0) r += q_;
  return static_cast<Elem>(r);
}

PrimeField::Elem PrimeField::from_rational(const mpq_class& v) const {
  mpz_class num = v.get_num() % q_;
  mpz_class den = v.get_den() % q_;
  if (den == 0) throw std::domain_error("denominator vanishes in " + name());
  return div(from_int(num.get_si()), from_int(den.get_si()));
}

PrimeField::Elem PrimeField::inv(Elem a) const {
  if (a == 0) throw std::domain_error("inverse of zero in " + name());
  // Extended Euclid on (a, q).
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = q_, new_r = a;
  while (new_r != 0) {
    std::int64_t quot = r / new_r;
    std::int64_t tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  return from_int(t);
}

std::int64_t PrimeField::lift(Elem a) const {
  return a > q_ / 2 ? static_cast<std::int64_t>(a) - q_ : a;
}

RationalField::Elem RationalField::inv(const Elem& a) const {
  if (sgn(a) == 0) throw std::domain_error("inverse of zero in Q");
  return 1 / a;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = eng_();
  } while (v >= limit);
  return v % n;
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

Rng Rng::fork(std::uint64_t salt) {
  return Rng(eng_() ^ (salt * 0x9E3779B97F4A7C15ull));
}

}  // namespace pfgr
