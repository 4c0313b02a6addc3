#include "cyfrob/recurrence.hpp"

#include <algorithm>
#include <climits>

namespace cyfrob {

int target_accuracy_B(int b, u64 p) {
  if (p < 5) throw UsageError("target accuracy needs p >= 5");
  const int h = (b + 1) / 2;
  const mpz_class lhs = binomial(b, h) * pow_ui(p, static_cast<unsigned long>(h * (b - 1) / 2));
  int B = 0;
  mpz_class pb = 1;
  while (pb < lhs) {
    pb *= p;
    ++B;
  }
  return B;
}

int ceil_Cp(const mpq_class& C, u64 p) { return static_cast<int>(ceil_q(C * mpq_class(mpz_class(p))).get_si()); }

int factorial_valuation(u64 p, long n) {
  long s = 0;
  for (long q = static_cast<long>(p); q <= n; q *= static_cast<long>(p)) {
    s += n / q;
    if (q > n / static_cast<long>(p)) break;
  }
  return static_cast<int>(s);
}

int accuracy_bound(int b, const mpq_class& C, int B, int ord_W_inv, int min_ord_alpha, BoundMode mode, u64 p) {
  if (mode == BoundMode::universal) {
    const long c = ceil_q(C).get_si();
    return B + (2 * b - 1) * static_cast<int>(c) - b + 1 - ord_W_inv - min_ord_alpha;
  }
  if (p == 0 || mpq_class(mpz_class(p)) <= mpq_class(ceil_q(C))) throw UsageError("sharp bound needs p > ceil(C)");
  const long k = ceil_Cp(C, p) / static_cast<long>(p);
  return std::max(B + (2 * b - 1) * static_cast<int>(k) - b + 1 - ord_W_inv - min_ord_alpha, B - ord_W_inv);
}

int accuracy_for_order(int b, u64 p, int M, int B, int ord_W_inv, int min_ord_alpha) {
  const int s = factorial_valuation(p, M);
  return std::max(B + (2 * b - 1) * s - b + 1 - ord_W_inv - min_ord_alpha, B - ord_W_inv);
}

int predicted_accuracy(int A, int b, int i, u64 p, int n) { return A - (b + i) * factorial_valuation(p, n); }

int valuation_shift(int b, int rows, u64 p, int M) { return (b + rows - 1) * factorial_valuation(p, M); }

ScaledPadic TruncatedRun::coefficient(int i, int n) const {
  return ScaledPadic::from_scaled(p, acc[i][n], raw(i, n), -S);
}

TruncatedRun run_truncated_recurrence(const RecurrenceTable& table, u64 p, int A, int M, int rows,
                                      const RecurrenceOptions& options) {
  const int b = table.b, N = table.N;
  if (rows < 0) rows = b;
  if (rows < 1 || rows > b) throw UsageError("row count must lie in [1, b]");
  if (A < 1) throw UsageError("accuracy must be positive");
  if (M < 0) throw UsageError("negative truncation order");

  TruncatedRun run;
  run.p = p;
  run.A = A;
  run.M = M;
  run.S = valuation_shift(b, rows, p, M);
  run.modulus = pow_ui(p, A + run.S);
  const mpz_class& P = run.modulus;
  const mpz_class pS = pow_ui(p, run.S);
  run.f.assign(rows, ResidueArray(M + 1, P));
  run.acc.assign(rows, std::vector<int>(M + 1, A));

  // ring buffer of the last N+1 columns
  std::vector<std::vector<mpz_class>> win(N + 1, std::vector<mpz_class>(rows, 0));
  win[0][0] = pS;  // c_{0,0} = 1
  run.f[0].set(0, pS);

  std::vector<std::vector<mpz_class>> shifted_val(rows, std::vector<mpz_class>(N));
  std::vector<mpz_class> same_val(rows);
  mpz_class nn, R, t, pv, ub, inv;
  for (int n = 1; n <= M; ++n) {
    nn = n;
    const int v = valuation_ui(static_cast<u64>(n), p);
    for (int r = 0; r < rows; ++r) {
      for (int k = 1; k <= N; ++k) shifted_val[r][k - 1] = poly_eval_mod(table.shifted[r][k - 1], nn, P);
      if (r >= 1) same_val[r] = poly_eval_mod(table.same_n[r], nn, P);
    }
    ub = pow_ui(static_cast<u64>(n), b);
    pv = pow_ui(p, static_cast<unsigned long>(b * v));
    mpz_divexact(ub.get_mpz_t(), ub.get_mpz_t(), pv.get_mpz_t());
    if (!mpz_invert(inv.get_mpz_t(), ub.get_mpz_t(), P.get_mpz_t())) throw IntegrityError("unit part not invertible");

    auto& cur = win[n % (N + 1)];
    for (int i = 0; i < rows; ++i) {
      R = 0;
      int acc = A - b * v;
      for (int k = 1; k <= N && k <= n; ++k) {
        const auto& prev = win[(n - k) % (N + 1)];
        for (int r = 0; r <= i; ++r) {
          if (shifted_val[r][k - 1] == 0) continue;
          mpz_addmul(R.get_mpz_t(), shifted_val[r][k - 1].get_mpz_t(), prev[i - r].get_mpz_t());
          acc = std::min(acc, run.acc[i - r][n - k] - b * v);
        }
      }
      for (int r = 1; r <= i; ++r) {
        mpz_addmul(R.get_mpz_t(), same_val[r].get_mpz_t(), cur[i - r].get_mpz_t());
        acc = std::min(acc, run.acc[i - r][n] - r * v);
      }
      mpz_mod(R.get_mpz_t(), R.get_mpz_t(), P.get_mpz_t());
      if (v > 0) {
        // digits below p^{bv} are zero unless accuracy is already exhausted
        if (options.row0_integrality && i == 0 && acc > 0 && !mpz_divisible_p(R.get_mpz_t(), pv.get_mpz_t()))
          run.row0_integral = false;
        mpz_fdiv_q(R.get_mpz_t(), R.get_mpz_t(), pv.get_mpz_t());
      }
      mpz_mul(t.get_mpz_t(), R.get_mpz_t(), inv.get_mpz_t());
      mpz_mod(cur[i].get_mpz_t(), t.get_mpz_t(), P.get_mpz_t());
      if (options.row0_integrality && i == 0 && acc > 0) {
        // value must be p-integral: raw divisible by p^S modulo the known digits
        mpz_class low;
        mpz_mod(low.get_mpz_t(), cur[0].get_mpz_t(), pS.get_mpz_t());
        if (low != 0) run.row0_integral = false;
      }
      run.acc[i][n] = std::min(acc, A);
      run.f[i].set(n, cur[i]);
    }
  }
  return run;
}

std::vector<std::vector<mpq_class>> run_exact_recurrence(const RecurrenceTable& table, int i_max, int M) {
  const int b = table.b, N = table.N;
  if (i_max < 0 || i_max >= b) throw UsageError("row index out of range");
  std::vector<std::vector<mpq_class>> c(i_max + 1, std::vector<mpq_class>(M + 1, 0));
  c[0][0] = 1;
  std::vector<std::vector<mpz_class>> sv(i_max + 1, std::vector<mpz_class>(N));
  std::vector<mpz_class> nv(i_max + 1);
  for (int n = 1; n <= M; ++n) {
    const mpz_class nn = n;
    for (int r = 0; r <= i_max; ++r) {
      for (int k = 1; k <= N; ++k) sv[r][k - 1] = poly_eval(table.shifted[r][k - 1], nn);
      if (r >= 1) nv[r] = poly_eval(table.same_n[r], nn);
    }
    const mpz_class nb = pow_ui(static_cast<u64>(n), b);
    for (int i = 0; i <= i_max; ++i) {
      mpq_class R = 0;
      for (int k = 1; k <= N && k <= n; ++k)
        for (int r = 0; r <= i; ++r)
          if (sv[r][k - 1] != 0 && c[i - r][n - k] != 0) R += mpq_class(sv[r][k - 1]) * c[i - r][n - k];
      for (int r = 1; r <= i; ++r)
        if (c[i - r][n] != 0) R += mpq_class(nv[r]) * c[i - r][n];
      R /= mpq_class(nb);
      c[i][n] = R;
    }
  }
  return c;
}

TruncatedRun truncate_exact(const std::vector<std::vector<mpq_class>>& c, int b, u64 p, int A, int M) {
  const int rows = static_cast<int>(c.size());
  TruncatedRun run;
  run.p = p;
  run.A = A;
  run.M = M;
  run.S = valuation_shift(b, rows, p, M);
  run.modulus = pow_ui(p, A + run.S);
  const mpq_class pS(pow_ui(p, run.S));
  run.f.assign(rows, ResidueArray(M + 1, run.modulus));
  run.acc.assign(rows, std::vector<int>(M + 1, A));
  for (int i = 0; i < rows; ++i)
    for (int n = 0; n <= M; ++n) {
      if (c[i][n] == 0) continue;
      const mpq_class x = c[i][n] * pS;
      if (mpz_divisible_ui_p(x.get_den_mpz_t(), p)) throw IntegrityError("coefficient valuation below the shift");
      run.f[i].set(n, reduce_rational(x, run.modulus));
    }
  return run;
}

}  // namespace cyfrob
