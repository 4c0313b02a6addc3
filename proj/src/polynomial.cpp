#include "cyfrob/polynomial.hpp"

#include <sstream>

namespace cyfrob {

int valuation(const mpz_class& x, u64 p) {
  if (x == 0) throw ArithmeticError("valuation of zero");
  mpz_class t = x, pp = p;
  return static_cast<int>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(), pp.get_mpz_t()));
}

int valuation(const mpq_class& x, u64 p) {
  if (x == 0) throw ArithmeticError("valuation of zero");
  return valuation(mpz_class(x.get_num()), p) - valuation(mpz_class(x.get_den()), p);
}

int valuation_ui(u64 n, u64 p) {
  if (n == 0) throw ArithmeticError("valuation of zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

mpz_class floor_q(const mpq_class& x) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

mpz_class ceil_q(const mpq_class& x) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

void trim(IntPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const IntPoly& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (a[i] != 0) return i;
  return -1;
}

IntPoly poly_add(const IntPoly& a, const IntPoly& b) {
  IntPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

IntPoly poly_scale(const IntPoly& a, const mpz_class& s) {
  IntPoly r(a);
  for (auto& c : r) c *= s;
  trim(r);
  return r;
}

IntPoly poly_pow(const IntPoly& a, int e) {
  IntPoly r{1};
  for (int i = 0; i < e; ++i) r = poly_mul(r, a);
  return r;
}

mpz_class poly_eval(const IntPoly& a, const mpz_class& x) {
  mpz_class r = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * x + *it;
  return r;
}

mpz_class poly_eval_mod(const IntPoly& a, const mpz_class& x, const mpz_class& m) {
  mpz_class r = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    r = r * x + *it;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  }
  return r;
}

mpq_class poly_eval_q(const IntPoly& a, const mpq_class& x) {
  mpq_class r = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * x + mpq_class(*it);
  return r;
}

IntPoly taylor_shift(const IntPoly& a, const mpz_class& c) {
  // repeated synthetic division
  IntPoly r(a);
  const int n = static_cast<int>(r.size());
  for (int i = 0; i < n; ++i)
    for (int j = n - 2; j >= i; --j) r[j] += c * r[j + 1];
  trim(r);
  return r;
}

IntPoly divided_derivative(const IntPoly& a, int r) {
  IntPoly out;
  for (std::size_t i = r; i < a.size(); ++i) out.push_back(binomial(static_cast<long>(i), r) * a[i]);
  trim(out);
  return out;
}

IntPoly scale_argument(const IntPoly& a, const mpz_class& s) {
  IntPoly r(a);
  mpz_class f = 1;
  for (auto& c : r) {
    c *= f;
    f *= s;
  }
  trim(r);
  return r;
}

mpz_class binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

std::string poly_to_string(const IntPoly& a) {
  if (degree(a) < 0) return "-";
  std::ostringstream os;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) os << ',';
    os << a[i];
  }
  return os.str();
}

}  // namespace cyfrob
