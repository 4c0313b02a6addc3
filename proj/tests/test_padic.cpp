#include <doctest.h>

#include <random>

#include "cyfrob/padic.hpp"

using namespace cyfrob;

namespace {

mpz_class powmod(const mpz_class& a, const mpz_class& e, const mpz_class& m) {
  mpz_class r;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

// Voronoi: (a^m - 1) B_m = m a^{m-1} sum_{j<N} j^{m-1} floor(j a / N)  (mod N), m even
mpz_class bernoulli_over_m_mod(unsigned long m, u64 p, int k, u64 a) {
  const mpz_class N = pow_ui(p, k);
  mpz_class s = 0;
  for (mpz_class j = 1; j < N; ++j) {
    mpz_class fl = j * a / N;
    s += powmod(j, m - 1, N) * fl;
  }
  s = s * powmod(a, m - 1, N) % N;
  mpz_class den = powmod(a, m, N) - 1, inv;
  REQUIRE(mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), N.get_mpz_t()));
  mpz_class r = s * inv % N;
  if (r < 0) r += N;
  return r;
}

mpq_class random_rational(std::mt19937_64& rng, u64 p) {
  std::uniform_int_distribution<long> num(-5000, 5000), den(1, 400), e(0, 2);
  mpq_class x(mpz_class(num(rng)) * pow_ui(p, e(rng)), mpz_class(den(rng)) * pow_ui(p, e(rng)));
  x.canonicalize();
  return x;
}

}  // namespace

TEST_CASE("residues mod p^k") {
  const auto a = ResidueModPk::make(5, 2, 3), b = ResidueModPk::make(5, 2, 7);
  CHECK((a * b).value == 21);
  CHECK((a - b).value == 21);
  CHECK((a + b).value == 10);
  CHECK((inverse(b) * b).value == 1);
  CHECK(pow(a, 20).value == 1);  // unit group of Z/25 has order 20
  CHECK(ResidueModPk::make(5, 2, -1).value == 24);
}

TEST_CASE("scaled p-adic division by p lowers the accuracy") {
  const auto a = ScaledPadic::from_scaled(7, 3, 1, 0);
  const auto b = ScaledPadic::from_scaled(7, 4, 1, 1);  // 7, unit 1 mod 7^3
  const auto q = a / b;
  CHECK(q.valuation() == -1);
  CHECK(q.known_accuracy() == 2);
  CHECK(agrees_with(q, mpq_class(1, 7)));
}

TEST_CASE("scaled p-adic identities") {
  const auto a = ScaledPadic::from_rational(11, 6, mpq_class(-35, 3));
  const auto one = ScaledPadic::from_integer(11, 6, 1);
  CHECK(agrees_with(a * one, a.representative()));
  CHECK((a * one).known_accuracy() == 6);
  CHECK(agrees_with(a - a, 0));
  CHECK(ScaledPadic::from_integer(7, 3, 343).is_zero());
  CHECK_THROWS_AS(a / ScaledPadic::zero(11, 6), ArithmeticError);
}

TEST_CASE("scaled p-adic arithmetic agrees with exact rationals") {
  std::mt19937_64 rng(7);
  const u64 primes[] = {5, 7, 11, 13, 31, 47};
  for (int it = 0; it < 1000; ++it) {
    const u64 p = primes[it % 6];
    const int acc = 3 + it % 5;
    const mpq_class x = random_rational(rng, p), y = random_rational(rng, p);
    const auto X = ScaledPadic::from_rational(p, acc, x), Y = ScaledPadic::from_rational(p, acc, y);
    CHECK(agrees_with(X + Y, x + y));
    CHECK(agrees_with(X - Y, x - y));
    CHECK(agrees_with(X * Y, x * y));
    if (y != 0 && !Y.is_zero()) CHECK(agrees_with(X / Y, x / y));
  }
}

TEST_CASE("Teichmuller lifts") {
  CHECK(teichmuller_lift(1, 5, 3).value == 1);
  CHECK(teichmuller_lift(2, 5, 3).value == 57);
  CHECK(teichmuller_lift(4, 5, 3).value == 124);
  for (u64 p = 5; p < 100; ++p) {
    if (!mpz_probab_prime_p(mpz_class(p).get_mpz_t(), 30)) continue;
    for (int k = 1; k <= 6; ++k)
      for (u64 x = 1; x < p; ++x) {
        const auto t = teichmuller_lift(x, p, k);
        CHECK(pow(t, p - 1).value == 1);
        CHECK(t.value % p == x);
      }
  }
}

TEST_CASE("balanced lifts") {
  CHECK(balanced_lift(ResidueModPk::make(7, 1, 6)) == -1);
  CHECK(balanced_lift(ResidueModPk::make(7, 4, 2396)) == -5);
  CHECK(balanced_lift(ResidueModPk::make(7, 4, 0)) == 0);
  CHECK(balanced_lift(mpz_class(1200), mpz_class(2401)) == 1200);
  CHECK(balanced_lift(mpz_class(1201), mpz_class(2401)) == -1200);
}

TEST_CASE("Bernoulli numbers") {
  const auto B = bernoulli_numbers(12);
  CHECK(B[0] == 1);
  CHECK(B[1] == mpq_class(-1, 2));
  CHECK(B[2] == mpq_class(1, 6));
  CHECK(B[3] == 0);
  CHECK(B[4] == mpq_class(-1, 30));
  CHECK(B[12] == mpq_class(-691, 2730));
}

TEST_CASE("Voronoi oracle reproduces small Bernoulli numbers") {
  const auto B = bernoulli_numbers(20);
  for (unsigned long m : {4ul, 10ul, 16ul}) {
    mpq_class x = B[m] / m;
    const mpz_class N = pow_ui(7, 2);
    CHECK(reduce_rational(x, N) == bernoulli_over_m_mod(m, 7, 2, 3));
  }
}

TEST_CASE("p-adic zeta(3) against the Kummer congruence") {
  for (u64 p : {5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
    const u64 g = p == 7 ? 3 : 2;  // 2^2 != 1 mod p for these p
    for (int k = 1; k <= (p < 20 ? 3 : 2); ++k) {
      const unsigned long m = (p - 1) * pow_ui(p, k - 1).get_ui() - 2;
      const mpz_class N = pow_ui(p, k);
      mpz_class expect = -bernoulli_over_m_mod(m, p, k, g) % N;
      if (expect < 0) expect += N;
      const auto z = padic_zeta3(p, k);
      CHECK_MESSAGE(z.value == expect, "p=" << p << " k=" << k);
    }
  }
}

TEST_CASE("residue arrays round trip at fixed width") {
  const mpz_class m = pow_ui(13, 9);
  ResidueArray arr(50, m);
  std::mt19937_64 rng(3);
  gmp_randclass r(gmp_randinit_default);
  r.seed(11);
  std::vector<mpz_class> v(50);
  for (std::size_t i = 0; i < 50; ++i) {
    v[i] = r.get_z_range(m);
    arr.set(i, v[i]);
  }
  for (std::size_t i = 0; i < 50; ++i) CHECK(arr.get(i) == v[i]);
  CHECK(reduce_rational(mpq_class(1, 2), 25) == 13);
}
