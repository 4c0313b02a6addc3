#pragma once

#include <vector>

#include "cyfrob/common.hpp"

namespace cyfrob {

std::vector<u64> primes_up_to(u64 n);

// 1-indexed: nth_prime(1) = 2, nth_prime(4) = 7
u64 nth_prime(int n);

// p_{n_min}, ..., p_{n_max}
std::vector<u64> primes_in_index_range(int n_min, int n_max);

}  // namespace cyfrob
