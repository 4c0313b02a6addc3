#pragma once

#include <vector>

#include "cyfrob/common.hpp"

namespace cyfrob::kernels {

// All inputs are residues in [0, m). Convolutions return the first `len`
// coefficients of a*b reduced mod m.

void convolve_schoolbook(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                         std::vector<mpz_class>& out, std::size_t len, const mpz_class& m);
void convolve_schoolbook_omp(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                             std::vector<mpz_class>& out, std::size_t len, const mpz_class& m);
// Kronecker substitution: pack into one integer per operand, one GMP multiply
void convolve_kronecker(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                        std::vector<mpz_class>& out, std::size_t len, const mpz_class& m);

// values of poly at each point, mod m
std::vector<mpz_class> eval_horner(const std::vector<mpz_class>& poly, const std::vector<mpz_class>& points,
                                   const mpz_class& m);
std::vector<mpz_class> eval_horner_omp(const std::vector<mpz_class>& poly, const std::vector<mpz_class>& points,
                                       const mpz_class& m);
// values at omega^0 .. omega^(L-1) where omega has multiplicative order L mod m
std::vector<mpz_class> eval_cyclic_dft(const std::vector<mpz_class>& poly, const mpz_class& omega, std::size_t L,
                                       const mpz_class& m);

}  // namespace cyfrob::kernels
