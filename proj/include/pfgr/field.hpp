#pragma once

#include <cstdint>
#include <random>
#include <string>

#include <gmpxx.h>

namespace pfgr {

bool is_prime(std::uint64_t n);

// Arithmetic in Z/q for a prime q < 2^31. Elements are canonical residues.
class PrimeField {
 public:
  using Elem = std::uint32_t;

  explicit PrimeField(std::uint32_t q);

  std::uint32_t q() const { return q_; }
  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(std::int64_t v) const;
  Elem from_rational(const mpq_class& v) const;

  Elem add(Elem a, Elem b) const {
    std::uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + q_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : q_ - a; }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % q_);
  }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  bool is_zero(Elem a) const { return a == 0; }
  bool eq(Elem a, Elem b) const { return a == b; }

  // Symmetric representative in (-q/2, q/2], handy for printing.
  std::int64_t lift(Elem a) const;
  std::string str(Elem a) const { return std::to_string(a); }
  std::string name() const { return "F_" + std::to_string(q_); }

 private:
  std::uint32_t q_;
};

class RationalField {
 public:
  using Elem = mpq_class;

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(std::int64_t v) const { return Elem(static_cast<long>(v)); }
  Elem from_rational(const mpq_class& v) const { return v; }

  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem inv(const Elem& a) const;
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
  bool is_zero(const Elem& a) const { return sgn(a) == 0; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  std::string str(const Elem& a) const { return a.get_str(); }
  std::string name() const { return "Q"; }
};

// Seeded generator with a portable bounded draw (std distributions are
// implementation-defined, which would break byte-identical reports).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);
  // Uniform in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  // Derive an independent stream, e.g. one per sweep partition.
  Rng fork(std::uint64_t salt);

 private:
  std::mt19937_64 eng_;
};

}  // namespace pfgr
