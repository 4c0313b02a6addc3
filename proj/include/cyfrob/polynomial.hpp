#pragma once

#include <string>
#include <vector>

#include "cyfrob/common.hpp"

namespace cyfrob {

// Dense integer polynomial, ascending coefficients. Trailing zeros are trimmed
// by the helpers below but never required.
using IntPoly = std::vector<mpz_class>;

void trim(IntPoly& a);
int degree(const IntPoly& a);  // -1 for the zero polynomial

IntPoly poly_add(const IntPoly& a, const IntPoly& b);
IntPoly poly_mul(const IntPoly& a, const IntPoly& b);
IntPoly poly_scale(const IntPoly& a, const mpz_class& s);
IntPoly poly_pow(const IntPoly& a, int e);

mpz_class poly_eval(const IntPoly& a, const mpz_class& x);
mpz_class poly_eval_mod(const IntPoly& a, const mpz_class& x, const mpz_class& m);
mpq_class poly_eval_q(const IntPoly& a, const mpq_class& x);

// a(x + c)
IntPoly taylor_shift(const IntPoly& a, const mpz_class& c);
// a^{(r)}(x) / r!, integral for integral a
IntPoly divided_derivative(const IntPoly& a, int r);
// a(s * x)
IntPoly scale_argument(const IntPoly& a, const mpz_class& s);

mpz_class binomial(long n, long k);

std::string poly_to_string(const IntPoly& a);

}  // namespace cyfrob
