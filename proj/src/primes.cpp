#include "cyfrob/primes.hpp"

#include <cmath>

namespace cyfrob {

std::vector<u64> primes_up_to(u64 n) {
  std::vector<u64> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (u64 i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

namespace {

u64 sieve_bound(int n) {
  if (n < 6) return 15;
  const double x = n;
  return static_cast<u64>(x * (std::log(x) + std::log(std::log(x)))) + 10;
}

}  // namespace

std::vector<u64> primes_in_index_range(int n_min, int n_max) {
  if (n_min < 1 || n_max < n_min) throw UsageError("prime index range must satisfy 1 <= n_min <= n_max");
  auto ps = primes_up_to(sieve_bound(n_max));
  return {ps.begin() + (n_min - 1), ps.begin() + n_max};
}

u64 nth_prime(int n) { return primes_in_index_range(n, n).front(); }

}  // namespace cyfrob
