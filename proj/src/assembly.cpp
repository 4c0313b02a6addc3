#include "cyfrob/assembly.hpp"

#include <algorithm>

namespace cyfrob {

namespace {

constexpr int kExact = 1 << 28;  // ledger value for exactly known terms

TruncSeries scale_series(const TruncSeries& a, const mpz_class& c) {
  TruncSeries r = a;
  for (int n = 0; n <= a.degree_bound(); ++n) {
    r.raw(n) *= c;
    mpz_mod(r.raw(n).get_mpz_t(), r.raw(n).get_mpz_t(), r.raw_modulus().get_mpz_t());
  }
  return r;
}

RationalSeries rs_scale(const RationalSeries& a, const mpq_class& c) {
  RationalSeries r(a);
  for (auto& x : r) x *= c;
  return r;
}

template <class Matrix>
Matrix transpose(const Matrix& m) {
  const std::size_t n = m.size();
  Matrix t(n, typename Matrix::value_type(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[i][j] = m[j][i];
  return t;
}

// (sigma E)[r][c] = (-1)^{b-1-r} E[b-1-r][c]
SeriesMatrix sigma_times(const SeriesMatrix& E) {
  const int b = static_cast<int>(E.size());
  SeriesMatrix r(b, std::vector<TruncSeries>(b));
  for (int i = 0; i < b; ++i) {
    const mpz_class s = ((b - 1 - i) % 2) ? -1 : 1;
    for (int c = 0; c < b; ++c) r[i][c] = scale_series(E[b - 1 - i][c], s);
  }
  return r;
}

RationalMatrix sigma_times(const RationalMatrix& E) {
  const int b = static_cast<int>(E.size());
  RationalMatrix r(b, std::vector<RationalSeries>(b));
  for (int i = 0; i < b; ++i) {
    const mpq_class s = ((b - 1 - i) % 2) ? -1 : 1;
    for (int c = 0; c < b; ++c) r[i][c] = rs_scale(E[b - 1 - i][c], s);
  }
  return r;
}

std::vector<RationalSeries> exact_rows(const RecurrenceTable& table, int order) {
  auto c = run_exact_recurrence(table, table.b - 1, order);
  return {c.begin(), c.end()};
}

// X = (sigma E W^{-1})^T as rational series through phi^order
RationalMatrix rational_E_inverse(const RecurrenceTable& table, int order) {
  const auto E = build_E_rational(exact_rows(table, order));
  const auto W = rs_matrix_mul(transpose(E), sigma_times(E));
  return transpose(rs_matrix_mul(sigma_times(E), rs_matrix_invert(W)));
}

}  // namespace

std::vector<std::vector<int>> sigma_matrix(int b) {
  std::vector<std::vector<int>> s(b, std::vector<int>(b, 0));
  for (int k = 0; k < b; ++k) s[k][b - 1 - k] = ((b - 1 - k) % 2) ? -1 : 1;
  return s;
}

SeriesMatrix build_E(const std::vector<TruncSeries>& f) {
  const int b = static_cast<int>(f.size());
  SeriesMatrix E(b, std::vector<TruncSeries>(b));
  for (int i = 0; i < b; ++i)
    for (int k = 0; k < b; ++k) {
      TruncSeries acc;
      bool first = true;
      for (int j = std::max(0, i - k); j <= i; ++j) {
        TruncSeries term = scale_series(theta_apply(f[j], k + j - i), binomial(k, i - j));
        acc = first ? term : series_add(acc, term);
        first = false;
      }
      E[i][k] = std::move(acc);
    }
  return E;
}

RationalMatrix build_E_rational(const std::vector<RationalSeries>& f) {
  const int b = static_cast<int>(f.size());
  RationalMatrix E(b, std::vector<RationalSeries>(b));
  for (int i = 0; i < b; ++i)
    for (int k = 0; k < b; ++k) {
      RationalSeries acc(f[0].size(), 0);
      for (int j = std::max(0, i - k); j <= i; ++j)
        acc = rs_add(acc, rs_scale(rs_theta(f[j], k + j - i), mpq_class(binomial(k, i - j))));
      E[i][k] = std::move(acc);
    }
  return E;
}

WInverse build_W_inverse(const CYOperator& op, const RecurrenceTable& table, u64 p, int k, int order) {
  (void)op;
  std::vector<TruncSeries> f;
  for (const auto& row : exact_rows(table, order)) f.push_back(reduce_series(row, p, k, 0));
  const auto E = build_E(f);
  const auto W = matrix_mul(transpose(E), sigma_times(E));
  auto inv = series_matrix_invert(W);
  return {std::move(inv.inverse), inv.ord};
}

EInverse build_E_inverse(const CYOperator& op, const RecurrenceTable& table, u64 p, int k, int order) {
  std::vector<TruncSeries> f;
  for (const auto& row : exact_rows(table, order)) f.push_back(reduce_series(row, p, k, 0));
  const auto E = build_E(f);
  const auto Winv = build_W_inverse(op, table, p, k, order);
  const auto X = transpose(matrix_mul(sigma_times(E), Winv.inverse));
  const int b = static_cast<int>(X.size());
  EInverse out;
  out.ord_W_inv = Winv.ord;
  out.coeff.assign(order + 1, std::vector<std::vector<mpz_class>>(b, std::vector<mpz_class>(b)));
  out.ord.assign(order + 1, k);
  for (int m = 0; m <= order; ++m)
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j) {
        out.coeff[m][i][j] = X[i][j].raw(m);
        if (X[i][j].raw(m) != 0) out.ord[m] = std::min(out.ord[m], valuation(X[i][j].raw(m), p));
      }
  return out;
}

std::vector<mpz_class> alpha_vector(const CYOperator& op, u64 p, int k, const mpz_class& alpha3_shift) {
  const int b = op.order_b;
  const mpz_class m = pow_ui(p, k);
  std::vector<mpz_class> a(b, 0);
  a[0] = 1;
  if (b == 4) {
    if (!op.rational_K) throw UsageError("operator of order 4 needs K");
    const mpz_class K = reduce_rational(*op.rational_K, m);
    a[3] = K * padic_zeta3(p, k).value + alpha3_shift;
    mpz_mod(a[3].get_mpz_t(), a[3].get_mpz_t(), m.get_mpz_t());
  } else if (b == 3) {
    a[1] = reduce_rational(op.alpha1, m);
    a[2] = reduce_rational(op.alpha1 * op.alpha1 / 2, m);
  }
  return a;
}

int min_ord_alpha(const std::vector<mpz_class>& alpha, u64 p) {
  int r = 0;
  for (const auto& a : alpha)
    if (a != 0) r = std::min(r, valuation(a, p));
  return r;
}

std::vector<std::vector<mpz_class>> build_U0(int b, u64 p, int k, const std::vector<mpz_class>& alpha) {
  const mpz_class m = pow_ui(p, k);
  std::vector<std::vector<mpz_class>> U(b, std::vector<mpz_class>(b, 0));
  for (int l = 0; l < b; ++l)
    for (int j = 0; j <= l; ++j) {
      U[l][j] = pow_ui(p, l) * alpha[l - j];
      mpz_mod(U[l][j].get_mpz_t(), U[l][j].get_mpz_t(), m.get_mpz_t());
    }
  return U;
}

bool u0_symmetry_holds(const std::vector<std::vector<mpz_class>>& U0, u64 p, int k) {
  const int b = static_cast<int>(U0.size());
  const auto s = sigma_matrix(b);
  const mpz_class m = pow_ui(p, k), pb = pow_ui(p, b - 1);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) {
      mpz_class v = 0;
      for (int a = 0; a < b; ++a)
        for (int c = 0; c < b; ++c)
          if (s[a][c]) v += U0[i][a] * s[a][c] * U0[j][c];
      v -= pb * s[i][j];
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
      if (v != 0) return false;
    }
  return true;
}

std::vector<mpz_class> UNumerator::entry(int i, int j) const {
  std::vector<mpz_class> out(std::max(0, trunc_deg + 1));
  for (int n = 0; n <= trunc_deg; ++n) out[n] = entries[i][j].get(n);
  return out;
}

namespace {

struct Context {
  int b, B, A, S, M, K;
  u64 p;
  mpz_class P;   // p^(A+S)
  mpz_class pS;  // p^S
  mpz_class pB;  // p^B
  std::vector<std::vector<mpz_class>> U0;
  std::vector<std::vector<int>> U0_ord;  // -1 marks a zero entry
  EInverse X;
  std::vector<std::vector<std::vector<int>>> X_ord;  // per entry, -1 for zero
  IntPoly D;
};

bool is_identity(const EInverse& X) {
  if (X.coeff.size() != 1) return false;
  const auto& c = X.coeff[0];
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j)
      if (c[i][j] != (i == j ? 1 : 0)) return false;
  return true;
}

// finish one column: divide out p^S, reduce mod p^B, store; updates ledger flags
void store_column(UNumerator& out, const Context& cx, int col, std::vector<mpz_class>& V,
                  const std::vector<int>& Vacc) {
  const int b = cx.b, M = cx.M;
  int ledger = kExact;
  bool integral = true;
#pragma omp parallel reduction(min : ledger) reduction(&& : integral)
  {
    mpz_class low;
#pragma omp for schedule(static)
    for (int idx = 0; idx < b * (M + 1); ++idx) {
      const int l = idx / (M + 1), n = idx % (M + 1);
      const int acc = std::min(cx.A, Vacc[idx]);
      ledger = std::min(ledger, acc);
      mpz_class& x = V[idx];
      mpz_mod(x.get_mpz_t(), x.get_mpz_t(), cx.P.get_mpz_t());
      if (cx.S > 0) {
        mpz_fdiv_qr(x.get_mpz_t(), low.get_mpz_t(), x.get_mpz_t(), cx.pS.get_mpz_t());
        if (acc >= cx.B && low != 0) integral = false;
      }
      mpz_mod(x.get_mpz_t(), x.get_mpz_t(), cx.pB.get_mpz_t());
      out.entries[l][col].set(static_cast<std::size_t>(n), x);
    }
  }
  out.min_ledger = std::min(out.min_ledger, ledger);
  if (!integral) out.accuracy_ok = false;
}

// multiply a column of U (raw, modulo P) by D(phi^p) in place
void apply_denominator(const Context& cx, std::vector<mpz_class>& U, std::vector<int>& Uacc) {
  if (degree(cx.D) <= 0 && (cx.D.empty() || cx.D[0] == 1)) return;
  const int b = cx.b, M = cx.M;
  std::vector<mpz_class> V(U.size(), 0);
  std::vector<int> Vacc(U.size(), kExact);
  std::vector<int> dord(cx.D.size(), -1);
  for (std::size_t t = 0; t < cx.D.size(); ++t)
    if (cx.D[t] != 0) dord[t] = valuation(cx.D[t], cx.p);
#pragma omp parallel for schedule(static)
  for (int idx = 0; idx < b * (M + 1); ++idx) {
    const int l = idx / (M + 1), n = idx % (M + 1);
    for (std::size_t t = 0; t < cx.D.size(); ++t) {
      const long src = static_cast<long>(n) - static_cast<long>(t * cx.p);
      if (src < 0) break;
      if (dord[t] < 0) continue;
      const int s = l * (M + 1) + static_cast<int>(src);
      mpz_addmul(V[idx].get_mpz_t(), cx.D[t].get_mpz_t(), U[s].get_mpz_t());
      Vacc[idx] = std::min(Vacc[idx], dord[t] + Uacc[s]);
    }
    mpz_mod(V[idx].get_mpz_t(), V[idx].get_mpz_t(), cx.P.get_mpz_t());
  }
  U.swap(V);
  Uacc.swap(Vacc);
}

void assemble_fixed(UNumerator& out, const Context& cx, const TruncatedRun& run) {
  const int b = cx.b, M = cx.M;
  const u64 p = cx.p;
  std::vector<mpz_class> Y(b * (M + 1)), U;
  std::vector<int> Yacc(b * (M + 1)), Uacc;
  for (int k = 0; k < b; ++k) {
    // Y = U_p(0) E[:, k]
#pragma omp parallel
    {
      std::vector<mpz_class> e(b), npow(b);
      std::vector<int> eacc(b);
      mpz_class fj, t;
#pragma omp for schedule(static)
      for (int n = 0; n <= M; ++n) {
        const int v = n == 0 ? 0 : valuation_ui(static_cast<u64>(n), p);
        for (int t2 = 0; t2 < b; ++t2) mpz_ui_pow_ui(npow[t2].get_mpz_t(), static_cast<unsigned long>(n), t2);
        for (int r = 0; r < b; ++r) {
          e[r] = 0;
          eacc[r] = kExact;
          for (int j = std::max(0, r - k); j <= r; ++j) {
            const int tt = k + j - r;
            if (n == 0 && tt > 0) continue;
            run.f[j].get(static_cast<std::size_t>(n), fj.get_mpz_t());
            t = fj * npow[tt];
            if (r - j > 0) t *= binomial(k, r - j);
            e[r] += t;
            eacc[r] = std::min(eacc[r], run.acc[j][n] + tt * v);
          }
          mpz_mod(e[r].get_mpz_t(), e[r].get_mpz_t(), cx.P.get_mpz_t());
        }
        for (int l = 0; l < b; ++l) {
          mpz_class& y = Y[l * (M + 1) + n];
          int acc = kExact;
          y = 0;
          for (int m = 0; m <= l; ++m) {
            if (cx.U0_ord[l][m] < 0) continue;
            mpz_addmul(y.get_mpz_t(), cx.U0[l][m].get_mpz_t(), e[m].get_mpz_t());
            acc = std::min(acc, cx.U0_ord[l][m] + eacc[m]);
          }
          mpz_mod(y.get_mpz_t(), y.get_mpz_t(), cx.P.get_mpz_t());
          Yacc[l * (M + 1) + n] = acc;
        }
      }
    }

    // U[:, k] = sum_m X_m phi^{mp} Y
    if (is_identity(cx.X)) {
      U = Y;
      Uacc = Yacc;
    } else {
      U.assign(b * (M + 1), 0);
      Uacc.assign(b * (M + 1), kExact);
#pragma omp parallel for schedule(static)
      for (int idx = 0; idx < b * (M + 1); ++idx) {
        const int l = idx / (M + 1), n = idx % (M + 1);
        for (int m = 0; m <= cx.K && static_cast<long>(m) * static_cast<long>(p) <= n; ++m) {
          const int src = n - m * static_cast<int>(p);
          for (int q = 0; q < b; ++q) {
            if (cx.X_ord[m][l][q] < 0) continue;
            const int s = q * (M + 1) + src;
            mpz_addmul(U[idx].get_mpz_t(), cx.X.coeff[m][l][q].get_mpz_t(), Y[s].get_mpz_t());
            Uacc[idx] = std::min(Uacc[idx], cx.X_ord[m][l][q] + Yacc[s]);
          }
        }
        mpz_mod(U[idx].get_mpz_t(), U[idx].get_mpz_t(), cx.P.get_mpz_t());
      }
    }
    apply_denominator(cx, U, Uacc);
    store_column(out, cx, k, U, Uacc);
  }
}

void assemble_exact(UNumerator& out, const Context& cx, const CYOperator& op, const RecurrenceTable& table,
                    const mpz_class& alpha3) {
  const int b = cx.b, M = cx.M;
  const u64 p = cx.p;
  const auto c = run_exact_recurrence(table, b - 1, M);
  const auto X = rational_E_inverse(table, cx.K);

  std::vector<mpq_class> ar(b, 0);
  ar[0] = 1;
  if (b == 3) {
    ar[1] = op.alpha1;
    ar[2] = op.alpha1 * op.alpha1 / 2;
  }
  const mpz_class Pe = pow_ui(p, cx.B + cx.S);
  const mpq_class pSq(cx.pS);

  for (int k = 0; k < b; ++k) {
    // Ya uses the rational alphas, Yb collects the alpha_3 part
    std::vector<std::vector<mpq_class>> Ya(b, std::vector<mpq_class>(M + 1, 0)), Yb = Ya;
    for (int n = 0; n <= M; ++n) {
      std::vector<mpq_class> e(b, 0);
      for (int r = 0; r < b; ++r)
        for (int j = std::max(0, r - k); j <= r; ++j) {
          const int tt = k + j - r;
          if (n == 0 && tt > 0) continue;
          e[r] += mpq_class(binomial(k, r - j) * pow_ui(static_cast<u64>(n), tt)) * c[j][n];
        }
      for (int l = 0; l < b; ++l) {
        const mpq_class pl(pow_ui(p, l));
        for (int m = 0; m <= l; ++m)
          if (ar[l - m] != 0) Ya[l][n] += pl * ar[l - m] * e[m];
      }
      if (b == 4) Yb[3][n] = mpq_class(pow_ui(p, 3)) * e[0];
    }
    for (int l = 0; l < b; ++l) {
      std::vector<mpq_class> Ua(M + 1, 0), Ub(M + 1, 0);
      for (int n = 0; n <= M; ++n)
        for (int m = 0; m <= cx.K && static_cast<long>(m) * static_cast<long>(p) <= n; ++m)
          for (int q = 0; q < b; ++q) {
            const mpq_class& x = X[l][q][m];
            if (x == 0) continue;
            Ua[n] += x * Ya[q][n - m * static_cast<int>(p)];
            Ub[n] += x * Yb[q][n - m * static_cast<int>(p)];
          }
      std::vector<mpq_class> Va(M + 1, 0), Vb(M + 1, 0);
      for (int n = 0; n <= M; ++n)
        for (std::size_t t = 0; t < cx.D.size() && static_cast<long>(t * p) <= n; ++t) {
          if (cx.D[t] == 0) continue;
          const int src = n - static_cast<int>(t * p);
          Va[n] += mpq_class(cx.D[t]) * Ua[src];
          Vb[n] += mpq_class(cx.D[t]) * Ub[src];
        }
      for (int n = 0; n <= M; ++n) {
        mpz_class raw = reduce_rational(Va[n] * pSq, Pe) + alpha3 * reduce_rational(Vb[n] * pSq, Pe);
        mpz_mod(raw.get_mpz_t(), raw.get_mpz_t(), Pe.get_mpz_t());
        mpz_class low;
        mpz_fdiv_qr(raw.get_mpz_t(), low.get_mpz_t(), raw.get_mpz_t(), cx.pS.get_mpz_t());
        if (low != 0) out.accuracy_ok = false;
        out.entries[l][k].set(static_cast<std::size_t>(n), raw);
      }
    }
  }
  out.min_ledger = std::min(out.min_ledger, cx.B);
}

}  // namespace

UNumerator assemble_U_numerator(const CYOperator& op, const RecurrenceTable& table, u64 p,
                                const AssemblyOptions& options) {
  const int b = op.order_b;
  if (p < 5) throw UsageError("primes below 5 are not supported");
  const mpz_class cC = ceil_q(op.trunc_const_C);
  if (mpz_class(p) <= cC) throw UsageError("prime must exceed ceil(C)");
  if (options.nadd < 0) throw UsageError("nadd must be nonnegative");

  Context cx;
  cx.b = b;
  cx.p = p;
  cx.B = target_accuracy_B(b, p);
  const int limit = ceil_Cp(op.trunc_const_C, p);
  cx.M = limit + options.nadd;
  cx.K = cx.M / static_cast<int>(p);
  if (static_cast<u64>(cx.K) >= p) throw UsageError("truncation order too large for this prime");

  const auto probe = build_W_inverse(op, table, p, cx.B + 1, cx.K);
  const int ordW = probe.ord;
  const int ordA = min_ord_alpha(alpha_vector(op, p, cx.B, options.alpha3_shift), p);
  if (options.acc > 0)
    cx.A = options.acc;
  else if (options.nadd > 0)
    cx.A = accuracy_for_order(b, p, cx.M, cx.B, ordW, ordA);
  else
    cx.A = accuracy_bound(b, op.trunc_const_C, cx.B, ordW, ordA, options.bound, p);
  cx.A = std::max(cx.A, cx.B);
  cx.S = valuation_shift(b, b, p, cx.M);
  cx.P = pow_ui(p, cx.A + cx.S);
  cx.pS = pow_ui(p, cx.S);
  cx.pB = pow_ui(p, cx.B);

  const auto alpha = alpha_vector(op, p, cx.A + cx.S, options.alpha3_shift);
  cx.U0 = build_U0(b, p, cx.A + cx.S, alpha);
  if (!u0_symmetry_holds(cx.U0, p, cx.B)) throw IntegrityError("U_p(0) violates the symplectic constraint");
  cx.U0_ord.assign(b, std::vector<int>(b, -1));
  for (int l = 0; l < b; ++l)
    for (int m = 0; m <= l; ++m)
      if (cx.U0[l][m] != 0) cx.U0_ord[l][m] = valuation(cx.U0[l][m], p);

  cx.X = build_E_inverse(op, table, p, cx.A + cx.S, cx.K);
  cx.X_ord.assign(cx.K + 1, std::vector<std::vector<int>>(b, std::vector<int>(b, -1)));
  for (int m = 0; m <= cx.K; ++m)
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j)
        if (cx.X.coeff[m][i][j] != 0) cx.X_ord[m][i][j] = valuation(cx.X.coeff[m][i][j], p);
  cx.D = op.denominator();
  trim(cx.D);
  if (cx.D.empty()) throw UsageError("denominator polynomial is zero");

  UNumerator out;
  out.p = p;
  out.b = b;
  out.B = cx.B;
  out.A = cx.A;
  out.S = cx.S;
  out.M = cx.M;
  out.degree_limit = limit;
  out.denominator = cx.D;
  out.min_ledger = kExact;
  out.entries.assign(b, std::vector<ResidueArray>(b, ResidueArray(cx.M + 1, cx.pB)));

  switch (options.mode) {
    case AssemblyMode::truncated_recurrence: {
      RecurrenceOptions ro;
      ro.row0_integrality = options.row0_integrality;
      const auto run = run_truncated_recurrence(table, p, cx.A, cx.M, b, ro);
      assemble_fixed(out, cx, run);
      break;
    }
    case AssemblyMode::truncated_rational: {
      const auto run = truncate_exact(run_exact_recurrence(table, b - 1, cx.M), b, p, cx.A, cx.M);
      assemble_fixed(out, cx, run);
      break;
    }
    case AssemblyMode::exact_rational: {
      const auto a3 = alpha_vector(op, p, cx.B + cx.S, options.alpha3_shift);
      assemble_exact(out, cx, op, table, b == 4 ? a3[3] : mpz_class(0));
      break;
    }
  }
  if (out.min_ledger < cx.B) out.accuracy_ok = false;

  int deg = -1;
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j)
      for (int n = cx.M; n > deg; --n)
        if (out.entries[i][j].get(static_cast<std::size_t>(n)) != 0) {
          deg = n;
          break;
        }
  out.trunc_deg = deg;
  out.degree_ok = deg <= limit;
  out.nadd_ok = options.nadd == 0 || deg <= limit;
  return out;
}

}  // namespace cyfrob
