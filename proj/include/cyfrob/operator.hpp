#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cyfrob/polynomial.hpp"

namespace cyfrob {

// L = sum_i S_i(phi) theta^i = sum_k phi^k Q_k(theta), theta = phi d/dphi.
struct CYOperator {
  std::string name;
  int order_b = 0;
  int degree_N = 0;
  std::vector<std::vector<mpz_class>> coeffs;  // coeffs[i][k], 0<=i<=b, 0<=k<=N
  mpq_class trunc_const_C;
  std::optional<mpq_class> rational_K;  // b = 4 only
  IntPoly conifold_locus;
  IntPoly apparent_sing_locus;
  std::vector<IntPoly> other_sing_loci;
  // exponents for (conifold, apparent, other...) in D(phi)
  std::vector<int> denom_exponents;
  // alpha_1 in U_p(0) for b = 3; alpha_2 follows as alpha_1^2/2
  mpq_class alpha1 = 0;

  // Q_k as a polynomial in theta
  IntPoly Q(int k) const;
  IntPoly S(int i) const;
  // D(phi) = prod locus^exponent
  IntPoly denominator() const;
  int exponent_for(std::size_t locus_index) const;

  bool operator==(const CYOperator&) const = default;
};

std::vector<int> default_denom_exponents(int b, std::size_t n_loci);

CYOperator parse_operator(std::string_view text, int line_no = 0);
std::string serialize_operator(const CYOperator& op);

// throws ValidationError if the MUM shape is violated; rescales when needed
void normalize_operator(CYOperator& op);

std::vector<CYOperator> load_operator_db(const std::string& path);
const CYOperator& find_operator(const std::vector<CYOperator>& db, std::string_view name);

// coefficient tables of the Frobenius epsilon-expansion (signs as on the
// right-hand side when solving n^b c_{i,n} = ...)
struct RecurrenceTable {
  int b = 0;
  int N = 0;
  // shifted[r][k-1](n) = -Q_k^{(r)}(n-k)/r!, multiplies c_{i-r,n-k}
  std::vector<std::vector<IntPoly>> shifted;
  // same_n[r](n) = -Q_0^{(r)}(n)/r! for r >= 1, multiplies c_{i-r,n}; same_n[0] unused
  std::vector<IntPoly> same_n;
  // Q_0(n), the left-hand factor (n^b after normalisation)
  IntPoly leading;
};

RecurrenceTable derive_recurrence(const CYOperator& op);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const;
  const ValidationCheck* find(std::string_view name) const;
};

ValidationReport validate_operator(const CYOperator& op, int n_integrality_N, int check_depth);

}  // namespace cyfrob
