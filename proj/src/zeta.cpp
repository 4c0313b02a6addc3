#include "cyfrob/padic.hpp"
#include "cyfrob/polynomial.hpp"

namespace cyfrob {

std::vector<mpq_class> bernoulli_numbers(int n) {
  std::vector<mpq_class> B(n + 1);
  B[0] = 1;
  for (int m = 1; m <= n; ++m) {
    mpq_class s = 0;
    for (int j = 0; j < m; ++j) s += mpq_class(binomial(m + 1, j)) * B[j];
    B[m] = -s / (m + 1);
  }
  return B;
}

// Series for L_p(s, omega^{-2}) at s = 3 with conductor p:
//   zeta_p(3) = 1/2 * sum_j (-1)^j (j+1) B_j p^{j-1} S_{j+2},  S_m = sum_{a<p} a^{-m}.
// B_j has at most one factor p in its denominator, so term j has valuation
// >= j-2 and j <= k+1 suffices; the power sums are kept modulo p^{k+2}.
ResidueModPk padic_zeta3(u64 p, int k) {
  if (p < 5) throw UsageError("zeta_p(3) needs p >= 5");
  const int jmax = k + 2;
  const mpz_class m = pow_ui(p, k + 2);
  std::vector<mpz_class> S(jmax + 3, 0);

  // batch inversion of 1..p-1 modulo p^{k+2}
  const u64 n = p - 1;
  std::vector<mpz_class> prefix(n + 1);
  prefix[0] = 1;
  for (u64 a = 1; a <= n; ++a) {
    prefix[a] = prefix[a - 1] * a;
    mpz_mod(prefix[a].get_mpz_t(), prefix[a].get_mpz_t(), m.get_mpz_t());
  }
  mpz_class run;
  mpz_invert(run.get_mpz_t(), prefix[n].get_mpz_t(), m.get_mpz_t());
  mpz_class inv, pw;
  for (u64 a = n; a >= 1; --a) {
    inv = run * prefix[a - 1];
    mpz_mod(inv.get_mpz_t(), inv.get_mpz_t(), m.get_mpz_t());
    run *= a;
    mpz_mod(run.get_mpz_t(), run.get_mpz_t(), m.get_mpz_t());
    pw = inv * inv;
    mpz_mod(pw.get_mpz_t(), pw.get_mpz_t(), m.get_mpz_t());
    for (int e = 2; e <= jmax + 2; ++e) {
      S[e] += pw;
      pw *= inv;
      mpz_mod(pw.get_mpz_t(), pw.get_mpz_t(), m.get_mpz_t());
    }
  }

  const auto B = bernoulli_numbers(jmax);
  mpq_class total = 0;
  for (int j = 0; j <= jmax; ++j) {
    if (B[j] == 0) continue;
    mpq_class term = mpq_class(j + 1) * B[j] * mpq_class(S[j + 2] % m);
    if (j % 2) term = -term;
    if (j == 0)
      term /= mpq_class(p);
    else
      term *= mpq_class(pow_ui(p, j - 1));
    total += term;
  }
  total /= 2;
  const mpz_class mk = pow_ui(p, k);
  return ResidueModPk{p, k, reduce_rational(total, mk)};
}

}  // namespace cyfrob
