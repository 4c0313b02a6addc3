#pragma once

#include <vector>

#include "cyfrob/operator.hpp"
#include "cyfrob/padic.hpp"

namespace cyfrob {

enum class BoundMode { universal, sharp };

// least B with C(b, ceil(b/2)) * p^(ceil(b/2)(b-1)/2) <= p^B
int target_accuracy_B(int b, u64 p);

// initial accuracy A for M = ceil(C p); sharp mode needs p > ceil(C)
int accuracy_bound(int b, const mpq_class& C, int B, int ord_W_inv, int min_ord_alpha, BoundMode mode, u64 p = 0);

// same bound for an arbitrary truncation order M (used when extra terms are
// requested); reduces to the sharp bound at M = ceil(C p)
int accuracy_for_order(int b, u64 p, int M, int B, int ord_W_inv, int min_ord_alpha);

// sum_{m <= n} ord_p(m)
int factorial_valuation(u64 p, long n);

// ceil(C p)
int ceil_Cp(const mpq_class& C, u64 p);

// guaranteed accuracy of row i at index n: A - (b+i) * sum_{m<=n} ord_p(m)
int predicted_accuracy(int A, int b, int i, u64 p, int n);

// fixed-point shift large enough for every row below `rows` up to M
int valuation_shift(int b, int rows, u64 p, int M);

struct RecurrenceOptions {
  // check that row-0 coefficients come out p-integral (valid when p does not
  // divide the integrality constant N)
  bool row0_integrality = false;
};

// f_i^{[M]} mod p^A: coefficient n of row i is raw(i, n) / p^S, with raw held
// modulo p^(A+S).
struct TruncatedRun {
  u64 p = 0;
  int A = 0;
  int S = 0;
  int M = 0;
  mpz_class modulus;
  std::vector<ResidueArray> f;
  std::vector<std::vector<int>> acc;
  bool row0_integral = true;

  int rows() const { return static_cast<int>(f.size()); }
  mpz_class raw(int i, int n) const { return f[i].get(n); }
  ScaledPadic coefficient(int i, int n) const;
};

TruncatedRun run_truncated_recurrence(const RecurrenceTable& table, u64 p, int A, int M, int rows = -1,
                                      const RecurrenceOptions& options = {});

// exact c_{i,n} for i <= i_max, n <= M
std::vector<std::vector<mpq_class>> run_exact_recurrence(const RecurrenceTable& table, int i_max, int M);

// exact coefficients in the same fixed-point layout (ledger = A everywhere)
TruncatedRun truncate_exact(const std::vector<std::vector<mpq_class>>& c, int b, u64 p, int A, int M);

}  // namespace cyfrob
