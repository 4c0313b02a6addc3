#pragma once

#include <vector>

#include "cyfrob/padic.hpp"

namespace cyfrob {

// Power series truncated at degree M with coefficients in Q_p. Coefficient n
// is stored as an integer X_n with value X_n / p^shift, held modulo
// p^(precision + shift); precision is the absolute accuracy cap. The ledger
// records the guaranteed absolute accuracy of every coefficient.
class TruncSeries {
 public:
  TruncSeries() = default;
  TruncSeries(u64 p, int precision, int shift, int degree_bound);

  u64 prime() const { return p_; }
  int precision() const { return prec_; }
  int shift() const { return shift_; }
  int degree_bound() const { return M_; }
  const mpz_class& raw_modulus() const { return mod_; }

  mpz_class& raw(int n) { return c_[n]; }
  const mpz_class& raw(int n) const { return c_[n]; }
  int accuracy(int n) const { return acc_[n]; }
  void set_accuracy(int n, int a) { acc_[n] = a < prec_ ? a : prec_; }

  ScaledPadic coefficient(int n) const;
  void set_coefficient(int n, const ScaledPadic& x);
  // lowest ledger entry
  int series_accuracy() const;
  // lower bound for ord_p of coefficient n (uses the ledger for zeros)
  int valuation_bound(int n) const;

  std::vector<mpz_class>& raw_coeffs() { return c_; }
  const std::vector<mpz_class>& raw_coeffs() const { return c_; }

 private:
  u64 p_ = 0;
  int prec_ = 0;
  int shift_ = 0;
  int M_ = -1;
  mpz_class mod_;
  std::vector<mpz_class> c_;
  std::vector<int> acc_;
};

TruncSeries series_from_integers(u64 p, int precision, const std::vector<mpz_class>& coeffs, int degree_bound);

TruncSeries series_mul(const TruncSeries& a, const TruncSeries& b, bool fast = false);
TruncSeries series_add(const TruncSeries& a, const TruncSeries& b);
TruncSeries series_sub(const TruncSeries& a, const TruncSeries& b);
TruncSeries theta_apply(const TruncSeries& a, int times);
TruncSeries substitute_phi_p(const TruncSeries& a, u64 p, int target_bound);

using SeriesMatrix = std::vector<std::vector<TruncSeries>>;

struct MatrixInverse {
  SeriesMatrix inverse;
  int ord = 0;  // minimum valuation over all coefficients of the inverse
};

SeriesMatrix matrix_mul(const SeriesMatrix& a, const SeriesMatrix& b);
MatrixInverse series_matrix_invert(const SeriesMatrix& m);

// inverse of a square integer matrix modulo p^k; SingularPrimeError if the
// determinant is not a unit
std::vector<std::vector<mpz_class>> invert_mod(const std::vector<std::vector<mpz_class>>& a, u64 p,
                                               const mpz_class& modulus);

// exact-rational twin
using RationalSeries = std::vector<mpq_class>;
using RationalMatrix = std::vector<std::vector<RationalSeries>>;

RationalSeries rs_mul(const RationalSeries& a, const RationalSeries& b);
RationalSeries rs_add(const RationalSeries& a, const RationalSeries& b);
RationalSeries rs_sub(const RationalSeries& a, const RationalSeries& b);
RationalSeries rs_theta(const RationalSeries& a, int times);
RationalSeries rs_substitute_phi_p(const RationalSeries& a, u64 p, int target_bound);
RationalMatrix rs_matrix_mul(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix rs_matrix_invert(const RationalMatrix& m);

// exact rational coefficients into fixed-point form; throws if a valuation is
// below -shift
TruncSeries reduce_series(const RationalSeries& a, u64 p, int precision, int shift);

}  // namespace cyfrob
