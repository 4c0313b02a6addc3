#include "cyfrob/series.hpp"

#include <algorithm>
#include <climits>

#include "cyfrob/kernels.hpp"

namespace cyfrob {

TruncSeries::TruncSeries(u64 p, int precision, int shift, int degree_bound)
    : p_(p), prec_(precision), shift_(shift), M_(degree_bound) {
  if (degree_bound < 0) throw UsageError("negative degree bound");
  if (precision + shift < 1) throw UsageError("series modulus must be at least p");
  mod_ = pow_ui(p, precision + shift);
  c_.assign(degree_bound + 1, 0);
  acc_.assign(degree_bound + 1, precision);
}

ScaledPadic TruncSeries::coefficient(int n) const { return ScaledPadic::from_scaled(p_, acc_[n], c_[n], -shift_); }

void TruncSeries::set_coefficient(int n, const ScaledPadic& x) {
  if (x.prime() != p_) throw UsageError("prime mismatch");
  acc_[n] = std::min(x.known_accuracy(), prec_);
  if (x.is_zero()) {
    c_[n] = 0;
    return;
  }
  if (x.valuation() < -shift_) throw ArithmeticError("coefficient valuation below the series shift");
  c_[n] = x.unit().value * pow_ui(p_, x.valuation() + shift_);
  mpz_mod(c_[n].get_mpz_t(), c_[n].get_mpz_t(), mod_.get_mpz_t());
}

int TruncSeries::series_accuracy() const {
  return acc_.empty() ? prec_ : *std::min_element(acc_.begin(), acc_.end());
}

int TruncSeries::valuation_bound(int n) const {
  if (c_[n] == 0) return acc_[n];
  return std::min(acc_[n], valuation(c_[n], p_) - shift_);
}

TruncSeries series_from_integers(u64 p, int precision, const std::vector<mpz_class>& coeffs, int degree_bound) {
  TruncSeries s(p, precision, 0, degree_bound);
  for (int n = 0; n <= degree_bound && n < static_cast<int>(coeffs.size()); ++n) {
    s.raw(n) = coeffs[n];
    mpz_mod(s.raw(n).get_mpz_t(), s.raw(n).get_mpz_t(), s.raw_modulus().get_mpz_t());
  }
  return s;
}

namespace {

void require_compatible(const TruncSeries& a, const TruncSeries& b) {
  if (a.prime() != b.prime()) throw UsageError("series modulus mismatch");
  if (a.degree_bound() != b.degree_bound()) throw UsageError("series degree bound mismatch");
}

// multiply raw by p^e (e >= 0)
mpz_class lift_raw(const mpz_class& x, u64 p, int e) { return e == 0 ? x : x * pow_ui(p, e); }

}  // namespace

TruncSeries series_mul(const TruncSeries& a, const TruncSeries& b, bool fast) {
  require_compatible(a, b);
  const int M = a.degree_bound();
  const int prec = std::min(a.precision(), b.precision());
  TruncSeries r(a.prime(), prec, a.shift() + b.shift(), M);
  std::vector<mpz_class> out;
  const auto& m = r.raw_modulus();
  // operands reduced into the product modulus
  std::vector<mpz_class> x(a.raw_coeffs()), y(b.raw_coeffs());
  for (auto& v : x) mpz_mod(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  for (auto& v : y) mpz_mod(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  if (fast)
    kernels::convolve_kronecker(x, y, out, M + 1, m);
  else
    kernels::convolve_schoolbook(x, y, out, M + 1, m);
  r.raw_coeffs() = std::move(out);

  // accuracy of c_n = min over i of min(acc a_i + val b_{n-i}, acc b_{n-i} + val a_i)
  std::vector<int> va(M + 1), vb(M + 1);
  int min_acc_a = INT_MAX, min_acc_b = INT_MAX, min_va = INT_MAX, min_vb = INT_MAX;
  for (int n = 0; n <= M; ++n) {
    va[n] = a.valuation_bound(n);
    vb[n] = b.valuation_bound(n);
    min_acc_a = std::min(min_acc_a, a.accuracy(n));
    min_acc_b = std::min(min_acc_b, b.accuracy(n));
    min_va = std::min(min_va, va[n]);
    min_vb = std::min(min_vb, vb[n]);
  }
  if (min_acc_a + min_vb >= prec && min_acc_b + min_va >= prec) return r;  // ledger stays at the cap
  for (int n = 0; n <= M; ++n) {
    int acc = prec;
    for (int i = 0; i <= n; ++i) acc = std::min({acc, a.accuracy(i) + vb[n - i], b.accuracy(n - i) + va[i]});
    r.set_accuracy(n, acc);
  }
  return r;
}

namespace {

TruncSeries add_sub(const TruncSeries& a, const TruncSeries& b, bool sub) {
  require_compatible(a, b);
  const int shift = std::max(a.shift(), b.shift());
  const int prec = std::min(a.precision(), b.precision());
  TruncSeries r(a.prime(), prec, shift, a.degree_bound());
  for (int n = 0; n <= a.degree_bound(); ++n) {
    mpz_class x = lift_raw(a.raw(n), a.prime(), shift - a.shift());
    mpz_class y = lift_raw(b.raw(n), b.prime(), shift - b.shift());
    r.raw(n) = sub ? mpz_class(x - y) : mpz_class(x + y);
    mpz_mod(r.raw(n).get_mpz_t(), r.raw(n).get_mpz_t(), r.raw_modulus().get_mpz_t());
    r.set_accuracy(n, std::min(a.accuracy(n), b.accuracy(n)));
  }
  return r;
}

}  // namespace

TruncSeries series_add(const TruncSeries& a, const TruncSeries& b) { return add_sub(a, b, false); }
TruncSeries series_sub(const TruncSeries& a, const TruncSeries& b) { return add_sub(a, b, true); }

TruncSeries theta_apply(const TruncSeries& a, int times) {
  TruncSeries r = a;
  if (times == 0) return r;
  for (int n = 1; n <= a.degree_bound(); ++n) {
    mpz_class f = pow_ui(static_cast<u64>(n), times);
    r.raw(n) *= f;
    mpz_mod(r.raw(n).get_mpz_t(), r.raw(n).get_mpz_t(), r.raw_modulus().get_mpz_t());
    r.set_accuracy(n, a.accuracy(n) + times * valuation_ui(static_cast<u64>(n), a.prime()));
  }
  r.raw(0) = 0;
  r.set_accuracy(0, a.precision());
  return r;
}

TruncSeries substitute_phi_p(const TruncSeries& a, u64 p, int target_bound) {
  if (static_cast<long>(a.degree_bound()) * static_cast<long>(p) + static_cast<long>(p) - 1 < target_bound &&
      static_cast<long>(a.degree_bound()) * static_cast<long>(p) < target_bound)
    throw UsageError("input series too short for phi -> phi^p up to the target degree");
  TruncSeries r(a.prime(), a.precision(), a.shift(), target_bound);
  for (int n = 0; n <= a.degree_bound(); ++n) {
    const long idx = static_cast<long>(n) * static_cast<long>(p);
    if (idx > target_bound) break;
    r.raw(static_cast<int>(idx)) = a.raw(n);
    r.set_accuracy(static_cast<int>(idx), a.accuracy(n));
  }
  return r;
}

SeriesMatrix matrix_mul(const SeriesMatrix& a, const SeriesMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  SeriesMatrix r(n, std::vector<TruncSeries>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      TruncSeries acc = series_mul(a[i][0], b[0][j]);
      for (std::size_t l = 1; l < k; ++l) acc = series_add(acc, series_mul(a[i][l], b[l][j]));
      r[i][j] = std::move(acc);
    }
  return r;
}

std::vector<std::vector<mpz_class>> invert_mod(const std::vector<std::vector<mpz_class>>& a, u64 p,
                                               const mpz_class& modulus) {
  const std::size_t n = a.size();
  std::vector<std::vector<mpz_class>> w(n, std::vector<mpz_class>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      w[i][j] = a[i][j];
      mpz_mod(w[i][j].get_mpz_t(), w[i][j].get_mpz_t(), modulus.get_mpz_t());
    }
    w[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t r = c; r < n; ++r)
      if (mpz_divisible_ui_p(w[r][c].get_mpz_t(), p) == 0) {
        piv = r;
        break;
      }
    if (piv == n) throw SingularPrimeError("matrix determinant is not a p-adic unit");
    std::swap(w[c], w[piv]);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), w[c][c].get_mpz_t(), modulus.get_mpz_t());
    for (auto& x : w[c]) {
      x *= inv;
      mpz_mod(x.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || w[r][c] == 0) continue;
      mpz_class f = w[r][c];
      for (std::size_t j = 0; j < 2 * n; ++j) {
        w[r][j] -= f * w[c][j];
        mpz_mod(w[r][j].get_mpz_t(), w[r][j].get_mpz_t(), modulus.get_mpz_t());
      }
    }
  }
  std::vector<std::vector<mpz_class>> out(n, std::vector<mpz_class>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = w[i][n + j];
  return out;
}

MatrixInverse series_matrix_invert(const SeriesMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return {};
  const TruncSeries& ref = m[0][0];
  const u64 p = ref.prime();
  const int K = ref.degree_bound();
  int prec = ref.precision();
  int acc = prec;
  for (const auto& row : m)
    for (const auto& s : row) {
      if (s.shift() != 0) throw UsageError("matrix inversion expects p-integral series");
      if (s.degree_bound() != K || s.prime() != p) throw UsageError("series modulus mismatch");
      prec = std::min(prec, s.precision());
      acc = std::min(acc, s.series_accuracy());
    }
  const mpz_class mod = pow_ui(p, prec);

  auto coeff_matrix = [&](int t) {
    std::vector<std::vector<mpz_class>> c(n, std::vector<mpz_class>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c[i][j] = m[i][j].raw(t);
    return c;
  };
  const auto X0 = invert_mod(coeff_matrix(0), p, mod);

  // X_t = -X_0 * sum_{s=1}^{t} M_s X_{t-s}
  std::vector<std::vector<std::vector<mpz_class>>> X(K + 1);
  X[0] = X0;
  std::vector<std::vector<std::vector<mpz_class>>> Ms(K + 1);
  for (int t = 0; t <= K; ++t) Ms[t] = coeff_matrix(t);
  for (int t = 1; t <= K; ++t) {
    std::vector<std::vector<mpz_class>> S(n, std::vector<mpz_class>(n, 0));
    for (int s = 1; s <= t; ++s)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) {
          if (Ms[s][i][l] == 0) continue;
          for (std::size_t j = 0; j < n; ++j) S[i][j] += Ms[s][i][l] * X[t - s][l][j];
        }
    X[t].assign(n, std::vector<mpz_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        mpz_class v = 0;
        for (std::size_t l = 0; l < n; ++l) v -= X0[i][l] * S[l][j];
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t());
        X[t][i][j] = v;
      }
  }

  MatrixInverse res;
  res.inverse.assign(n, std::vector<TruncSeries>(n));
  res.ord = INT_MAX;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      TruncSeries s(p, prec, 0, K);
      for (int t = 0; t <= K; ++t) {
        s.raw(t) = X[t][i][j];
        s.set_accuracy(t, acc);
        if (X[t][i][j] != 0) res.ord = std::min(res.ord, valuation(X[t][i][j], p));
      }
      res.inverse[i][j] = std::move(s);
    }
  if (res.ord == INT_MAX) res.ord = prec;
  return res;
}

RationalSeries rs_mul(const RationalSeries& a, const RationalSeries& b) {
  const std::size_t M = std::min(a.size(), b.size());
  RationalSeries r(M, 0);
  for (std::size_t i = 0; i < M; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < M; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

RationalSeries rs_add(const RationalSeries& a, const RationalSeries& b) {
  RationalSeries r(std::min(a.size(), b.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RationalSeries rs_sub(const RationalSeries& a, const RationalSeries& b) {
  RationalSeries r(std::min(a.size(), b.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RationalSeries rs_theta(const RationalSeries& a, int times) {
  RationalSeries r(a);
  for (std::size_t n = 0; n < r.size(); ++n) r[n] *= mpq_class(pow_ui(n, times));
  if (times == 0 && !r.empty()) r[0] = a[0];
  return r;
}

RationalSeries rs_substitute_phi_p(const RationalSeries& a, u64 p, int target_bound) {
  RationalSeries r(target_bound + 1, 0);
  for (std::size_t n = 0; n < a.size() && n * p <= static_cast<std::size_t>(target_bound); ++n) r[n * p] = a[n];
  return r;
}

RationalMatrix rs_matrix_mul(const RationalMatrix& a, const RationalMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  RationalMatrix r(n, std::vector<RationalSeries>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      RationalSeries acc = rs_mul(a[i][0], b[0][j]);
      for (std::size_t l = 1; l < k; ++l) acc = rs_add(acc, rs_mul(a[i][l], b[l][j]));
      r[i][j] = std::move(acc);
    }
  return r;
}

RationalMatrix rs_matrix_invert(const RationalMatrix& m) {
  const std::size_t n = m.size();
  const std::size_t len = m[0][0].size();
  // constant term inverse by Gauss-Jordan over Q
  std::vector<std::vector<mpq_class>> w(n, std::vector<mpq_class>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w[i][j] = m[i][j][0];
    w[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && w[piv][c] == 0) ++piv;
    if (piv == n) throw ArithmeticError("constant term of the matrix is singular");
    std::swap(w[c], w[piv]);
    mpq_class inv = 1 / w[c][c];
    for (auto& x : w[c]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || w[r][c] == 0) continue;
      mpq_class f = w[r][c];
      for (std::size_t j = 0; j < 2 * n; ++j) w[r][j] -= f * w[c][j];
    }
  }
  std::vector<std::vector<std::vector<mpq_class>>> X(len, std::vector<std::vector<mpq_class>>(n, std::vector<mpq_class>(n, 0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) X[0][i][j] = w[i][n + j];
  for (std::size_t t = 1; t < len; ++t) {
    std::vector<std::vector<mpq_class>> S(n, std::vector<mpq_class>(n, 0));
    for (std::size_t s = 1; s <= t; ++s)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) {
          if (s >= m[i][l].size() || m[i][l][s] == 0) continue;
          for (std::size_t j = 0; j < n; ++j) S[i][j] += m[i][l][s] * X[t - s][l][j];
        }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        mpq_class v = 0;
        for (std::size_t l = 0; l < n; ++l) v -= X[0][i][l] * S[l][j];
        X[t][i][j] = v;
      }
  }
  RationalMatrix r(n, std::vector<RationalSeries>(n, RationalSeries(len)));
  for (std::size_t t = 0; t < len; ++t)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r[i][j][t] = X[t][i][j];
  return r;
}

TruncSeries reduce_series(const RationalSeries& a, u64 p, int precision, int shift) {
  TruncSeries s(p, precision, shift, static_cast<int>(a.size()) - 1);
  const mpz_class ps = pow_ui(p, shift);
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (a[n] == 0) continue;
    mpq_class scaled = a[n] * mpq_class(ps);
    if (mpz_divisible_ui_p(scaled.get_den_mpz_t(), p))
      throw ArithmeticError("coefficient valuation below the series shift");
    s.raw(static_cast<int>(n)) = reduce_rational(scaled, s.raw_modulus());
  }
  return s;
}

}  // namespace cyfrob
