#pragma once

#include <vector>

#include <gmp.h>

#include "cyfrob/common.hpp"

namespace cyfrob {

struct ResidueModPk {
  u64 p = 0;
  int k = 0;
  mpz_class value;  // in [0, p^k)

  static ResidueModPk make(u64 p, int k, const mpz_class& x);
  mpz_class modulus() const { return pow_ui(p, k); }
  bool operator==(const ResidueModPk&) const = default;
};

ResidueModPk operator+(const ResidueModPk& a, const ResidueModPk& b);
ResidueModPk operator-(const ResidueModPk& a, const ResidueModPk& b);
ResidueModPk operator*(const ResidueModPk& a, const ResidueModPk& b);
ResidueModPk inverse(const ResidueModPk& a);
ResidueModPk pow(const ResidueModPk& a, const mpz_class& e);

// x = unit * p^valuation, known modulo p^known_accuracy. A zero element means
// "congruent to 0 modulo p^known_accuracy" and carries no valuation.
class ScaledPadic {
 public:
  ScaledPadic() = default;

  static ScaledPadic zero(u64 p, int accuracy);
  static ScaledPadic from_integer(u64 p, int accuracy, const mpz_class& x);
  static ScaledPadic from_rational(u64 p, int accuracy, const mpq_class& x);
  // x = X * p^e known modulo p^accuracy
  static ScaledPadic from_scaled(u64 p, int accuracy, const mpz_class& X, int e);

  u64 prime() const { return p_; }
  bool is_zero() const { return zero_; }
  int valuation() const;
  int known_accuracy() const { return acc_; }
  const ResidueModPk& unit() const { return unit_; }
  int relative_precision() const { return acc_ - val_; }
  // unit.value * p^valuation as a rational number (0 for zero)
  mpq_class representative() const;
  // reduce the accuracy to min(current, a)
  ScaledPadic with_accuracy(int a) const;

 private:
  u64 p_ = 0;
  int val_ = 0;
  int acc_ = 0;
  bool zero_ = true;
  ResidueModPk unit_;
};

enum class ArithOp { add, sub, mul, div };

ScaledPadic scaled_arith(const ScaledPadic& a, const ScaledPadic& b, ArithOp which);
inline ScaledPadic operator+(const ScaledPadic& a, const ScaledPadic& b) { return scaled_arith(a, b, ArithOp::add); }
inline ScaledPadic operator-(const ScaledPadic& a, const ScaledPadic& b) { return scaled_arith(a, b, ArithOp::sub); }
inline ScaledPadic operator*(const ScaledPadic& a, const ScaledPadic& b) { return scaled_arith(a, b, ArithOp::mul); }
inline ScaledPadic operator/(const ScaledPadic& a, const ScaledPadic& b) { return scaled_arith(a, b, ArithOp::div); }

// true when ord_p(x - y) >= a.known_accuracy() (zero difference counts)
bool agrees_with(const ScaledPadic& a, const mpq_class& y);

ResidueModPk teichmuller_lift(u64 x, u64 p, int k);
mpz_class balanced_lift(const ResidueModPk& x);
mpz_class balanced_lift(const mpz_class& x, const mpz_class& m);

// B_0..B_n with B_1 = -1/2
std::vector<mpq_class> bernoulli_numbers(int n);

// Kubota-Leopoldt zeta_p(3) mod p^k
ResidueModPk padic_zeta3(u64 p, int k);

// reduce a p-integral rational modulo m = p^k
mpz_class reduce_rational(const mpq_class& x, const mpz_class& m);

// values in [0, modulus) stored at a fixed limb width
class ResidueArray {
 public:
  ResidueArray() = default;
  ResidueArray(std::size_t n, const mpz_class& modulus);

  std::size_t size() const { return n_; }
  const mpz_class& modulus() const { return mod_; }
  std::size_t width() const { return width_; }
  mpz_class get(std::size_t i) const;
  void get(std::size_t i, mpz_t out) const;
  void set(std::size_t i, const mpz_class& v);
  void set(std::size_t i, mpz_srcptr v);
  const mp_limb_t* limbs(std::size_t i) const { return data_.data() + i * width_; }

 private:
  std::size_t n_ = 0;
  std::size_t width_ = 1;
  mpz_class mod_;
  std::vector<mp_limb_t> data_;
};

}  // namespace cyfrob
