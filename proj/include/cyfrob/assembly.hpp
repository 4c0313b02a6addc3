#pragma once

#include <vector>

#include "cyfrob/recurrence.hpp"
#include "cyfrob/series.hpp"

namespace cyfrob {

// sigma_{kl} = (-1)^l delta_{k+l, b-1}
std::vector<std::vector<int>> sigma_matrix(int b);

// [E]^{i,k} = sum_j C(k, i-j) theta^{k+j-i} f_j
SeriesMatrix build_E(const std::vector<TruncSeries>& f);
RationalMatrix build_E_rational(const std::vector<RationalSeries>& f);

struct WInverse {
  SeriesMatrix inverse;  // W^{-1} through phi^order
  int ord = 0;
};

// W = E^T sigma E from exact periods through phi^order, inverted modulo p^k
WInverse build_W_inverse(const CYOperator& op, const RecurrenceTable& table, u64 p, int k, int order);

// E(phi)^{-1} = (sigma E W^{-1})^T through phi^order modulo p^k (before phi -> phi^p)
struct EInverse {
  std::vector<std::vector<std::vector<mpz_class>>> coeff;  // coeff[m][i][j]
  std::vector<int> ord;                                    // min valuation of coeff[m]
  int ord_W_inv = 0;
};
EInverse build_E_inverse(const CYOperator& op, const RecurrenceTable& table, u64 p, int k, int order);

// alpha_0..alpha_{b-1} for U_p(0) modulo p^k; alpha3_shift is added to alpha_3
std::vector<mpz_class> alpha_vector(const CYOperator& op, u64 p, int k, const mpz_class& alpha3_shift = 0);
int min_ord_alpha(const std::vector<mpz_class>& alpha, u64 p);

// U_p(0)[l][m] = p^l alpha_{l-m}, modulo p^k
std::vector<std::vector<mpz_class>> build_U0(int b, u64 p, int k, const std::vector<mpz_class>& alpha);

// U0 sigma U0^T == p^{b-1} sigma modulo p^k
bool u0_symmetry_holds(const std::vector<std::vector<mpz_class>>& U0, u64 p, int k);

enum class AssemblyMode { truncated_recurrence, truncated_rational, exact_rational };

struct AssemblyOptions {
  AssemblyMode mode = AssemblyMode::truncated_recurrence;
  int nadd = 0;
  int acc = 0;  // 0 selects the bound
  BoundMode bound = BoundMode::universal;
  mpz_class alpha3_shift = 0;
  bool row0_integrality = false;
};

struct UNumerator {
  u64 p = 0;
  int b = 0;
  int B = 0;
  int A = 0;
  int S = 0;
  int M = 0;
  int degree_limit = 0;  // ceil(C p)
  int trunc_deg = -1;
  // entries[i][j] holds coefficients 0..trunc_deg modulo p^B
  std::vector<std::vector<ResidueArray>> entries;
  IntPoly denominator;  // D(phi)
  bool nadd_ok = true;
  bool degree_ok = true;
  bool accuracy_ok = true;
  int min_ledger = 0;  // smallest accuracy seen in U before reduction

  bool warn() const { return !nadd_ok || !degree_ok; }
  mpz_class modulus() const { return pow_ui(p, B); }
  std::vector<mpz_class> entry(int i, int j) const;
};

UNumerator assemble_U_numerator(const CYOperator& op, const RecurrenceTable& table, u64 p,
                                const AssemblyOptions& options = {});

}  // namespace cyfrob
