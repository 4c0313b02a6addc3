// Serial reference vs OpenMP kernels: truncated convolution and evaluation.
#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>
#include <string>

#include "cyfrob/evaluation.hpp"
#include "cyfrob/kernels.hpp"

using namespace cyfrob;

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<mpz_class> random_residues(std::size_t n, const mpz_class& m, std::mt19937_64& rng) {
  gmp_randclass r(gmp_randinit_default);
  r.seed(rng());
  std::vector<mpz_class> v(n);
  for (auto& x : v) x = r.get_z_range(m);
  return v;
}

void row(const std::string& name, std::size_t n, double t, bool same) {
  std::cout << name << ',' << n << ',' << t << ',' << (same ? "match" : "MISMATCH") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  const u64 p = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 10007;
  const int B = 4;
  const mpz_class m = pow_ui(p, B);
  std::mt19937_64 rng(42);
  std::cout << "threads " << omp_get_max_threads() << ", p = " << p << '\n';
  std::cout << "kernel,size,seconds,check\n";
  bool ok = true;

  for (std::size_t n : {256u, 1024u, 4096u}) {
    const auto a = random_residues(n, m, rng), b = random_residues(n, m, rng);
    std::vector<mpz_class> ref, par, kr;
    const double t0 = seconds([&] { kernels::convolve_schoolbook(a, b, ref, n, m); });
    const double t1 = seconds([&] { kernels::convolve_schoolbook_omp(a, b, par, n, m); });
    const double t2 = seconds([&] { kernels::convolve_kronecker(a, b, kr, n, m); });
    row("convolve_schoolbook", n, t0, true);
    row("convolve_schoolbook_omp", n, t1, par == ref);
    row("convolve_kronecker", n, t2, kr == ref);
    ok = ok && par == ref && kr == ref;
  }

  const auto pts = teichmuller_points(p, B);
  for (std::size_t deg : {std::size_t(p / 10), std::size_t(p)}) {
    const auto poly = random_residues(deg + 1, m, rng);
    std::vector<mpz_class> ref, par, dft;
    const double t0 = seconds([&] { ref = kernels::eval_horner(poly, pts.teich, m); });
    const double t1 = seconds([&] { par = kernels::eval_horner_omp(poly, pts.teich, m); });
    const double t2 = seconds([&] { dft = kernels::eval_cyclic_dft(poly, pts.omega, p - 1, m); });
    row("eval_horner", deg, t0, true);
    row("eval_horner_omp", deg, t1, par == ref);
    row("eval_cyclic_dft", deg, t2, dft == ref);
    ok = ok && par == ref && dft == ref;
  }
  return ok ? 0 : 1;
}
