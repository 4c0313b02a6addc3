#pragma once

#include <optional>
#include <vector>

#include "cyfrob/assembly.hpp"

namespace cyfrob {

u64 primitive_root(u64 p);

// Teich(g)^k for k = 0..p-2 modulo p^B; phi[k] = g^k mod p
struct PointSet {
  u64 p = 0;
  int B = 0;
  u64 g = 0;
  mpz_class omega;
  std::vector<u64> phi;
  std::vector<mpz_class> teich;
};

PointSet teichmuller_points(u64 p, int B);

enum class EvalStrategy { automatic, horner, horner_omp, dft };

// values[i][j][k] = numerator entry (i,j) at point k, and D at point k
struct PointValues {
  std::vector<std::vector<ResidueArray>> values;
  ResidueArray denominator;
};

PointValues evaluate_numerators_all(const UNumerator& num, const PointSet& points,
                                    EvalStrategy strategy = EvalStrategy::automatic);
// Horner at the Teichmuller lifts of the given residues
PointValues evaluate_numerators_at(const UNumerator& num, const std::vector<u64>& phi);

struct EulerCoefficients {
  std::vector<mpz_class> newton;     // a^(0..b), balanced lifts of the Newton values mod p^B
  std::vector<mpz_class> completed;  // a^(0..b) after the functional equation
  int fe_sign = 1;
  bool fe_consistent = true;
  bool weil_ok = true;
};

// Newton identities on Tr U^i; Weil violations throw IntegrityError when check_weil
EulerCoefficients euler_factor_from_U(const std::vector<std::vector<mpz_class>>& U, int b, u64 p, int B,
                                      bool check_weil = true);

bool weil_bounds_hold(const std::vector<mpz_class>& a, int b, u64 p);

enum class PointFlag { good, conifold, other_singular };

struct EulerFactorRecord {
  u64 p = 0;
  u64 phi_star = 0;
  std::vector<mpz_class> coeffs;  // a^(1) .. a^(ceil(b/2))
  PointFlag flag = PointFlag::good;
  std::vector<mpz_class> completed;  // a^(0) .. a^(b) for good points
  int fe_sign = 0;
  bool fe_consistent = true;
  std::optional<bool> hasse_witt;

  bool operator==(const EulerFactorRecord& o) const {
    return p == o.p && phi_star == o.phi_star && coeffs == o.coeffs && flag == o.flag;
  }
};

// c_{0,n} mod p for n <= p-1
std::vector<mpz_class> truncated_period_mod_p(const RecurrenceTable& table, u64 p);

// nullopt at non-ordinary points (f_0^{[p-1]}(phi*) = 0 mod p) and at flagged points
std::optional<bool> hasse_witt_check(const RecurrenceTable& table, u64 p, const EulerFactorRecord& record);

struct EvaluationOptions {
  EvalStrategy strategy = EvalStrategy::automatic;
  std::vector<u64> subset;  // empty = all of F_p^*
  bool hasse_witt = true;
};

std::vector<EulerFactorRecord> compute_records(const CYOperator& op, const RecurrenceTable& table,
                                               const UNumerator& num, const EvaluationOptions& options = {});

}  // namespace cyfrob
