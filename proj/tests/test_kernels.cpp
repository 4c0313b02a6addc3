#include <doctest.h>

#include "cyfrob/evaluation.hpp"
#include "cyfrob/kernels.hpp"

using namespace cyfrob;

namespace {

std::vector<mpz_class> random_vec(std::size_t n, const mpz_class& m, unsigned long seed) {
  gmp_randclass r(gmp_randinit_default);
  r.seed(seed);
  std::vector<mpz_class> v(n);
  for (auto& x : v) x = r.get_z_range(m);
  return v;
}

}  // namespace

TEST_CASE("convolution kernels agree with the serial schoolbook") {
  for (u64 p : {11ul, 1009ul, 1048573ul}) {
    const mpz_class m = pow_ui(p, 4);
    for (std::size_t n : {1u, 7u, 64u, 300u}) {
      const auto a = random_vec(n, m, n + p), b = random_vec(n + 3, m, 2 * n + p);
      std::vector<mpz_class> ref, par, kr;
      kernels::convolve_schoolbook(a, b, ref, n, m);
      kernels::convolve_schoolbook_omp(a, b, par, n, m);
      kernels::convolve_kronecker(a, b, kr, n, m);
      CHECK(ref.size() == n);
      CHECK(par == ref);
      CHECK(kr == ref);
      // direct definition
      for (std::size_t k = 0; k < n; k += 17) {
        mpz_class s = 0;
        for (std::size_t i = 0; i <= k; ++i) s += a[i] * b[k - i];
        CHECK(ref[k] == mpz_class(s % m));
      }
    }
  }
}

TEST_CASE("evaluation kernels agree with per-point Horner") {
  for (u64 p : {11ul, 101ul, 1009ul}) {
    const int B = 3;
    const mpz_class m = pow_ui(p, B);
    const auto pts = teichmuller_points(p, B);
    for (std::size_t deg : {0u, 1u, 50u, 2 * static_cast<unsigned>(p) + 5}) {
      const auto poly = random_vec(deg + 1, m, deg + 31 * p);
      const auto ref = kernels::eval_horner(poly, pts.teich, m);
      CHECK(kernels::eval_horner_omp(poly, pts.teich, m) == ref);
      CHECK(kernels::eval_cyclic_dft(poly, pts.omega, p - 1, m) == ref);
      for (std::size_t k = 0; k < pts.teich.size(); k += 5) CHECK(ref[k] == poly_eval_mod(poly, pts.teich[k], m));
    }
  }
}
