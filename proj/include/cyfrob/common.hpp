#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace cyfrob {

using u64 = std::uint64_t;

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line, int field)
      : std::runtime_error(what), line(line), field(field) {}
  int line;
  int field;
};

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ArithmeticError : std::domain_error {
  using std::domain_error::domain_error;
};

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// raised when W(0) or a pivot is not a p-adic unit
struct SingularPrimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// an invariant that can only fail through an accuracy bug upstream
struct IntegrityError : std::logic_error {
  using std::logic_error::logic_error;
};

inline mpz_class pow_ui(u64 base, unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

// p-adic valuation of a nonzero integer; -1 is never returned
int valuation(const mpz_class& x, u64 p);
int valuation(const mpq_class& x, u64 p);
int valuation_ui(u64 n, u64 p);

mpz_class ceil_q(const mpq_class& x);
mpz_class floor_q(const mpq_class& x);

}  // namespace cyfrob
