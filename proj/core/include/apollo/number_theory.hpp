#pragma once

// Small arithmetic helpers: primes, factorizations, and sums of two squares.

#include <vector>

#include "apollo/arith.hpp"

namespace apollo {

/// Primes p <= n in ascending order (sieve of Eratosthenes).
std::vector<i64> primes_up_to(i64 n);

/// Distinct prime divisors of |n| in ascending order; empty for |n| <= 1.
std::vector<i64> distinct_prime_factors(i64 n);

/// Number of distinct prime divisors.
int omega(i64 n);

bool is_squarefree(i64 n);

/// b(n) for 0 <= n <= x: 1 when n = s^2 + t^2. Uses the criterion that every
/// prime 3 mod 4 divides n to an even power. Throws BudgetError above the
/// budget and InvalidInput for x < 0.
std::vector<unsigned char> sum_of_two_squares_table(i64 x, Budget budget = {});

/// B(x, q, r) = #{1 <= n <= x : n = r mod q, n a sum of two squares}.
/// Requires q >= 1 and 0 <= r < q.
u64 b2s_count_B(i64 x, i64 q, i64 r, Budget budget = {});

}  // namespace apollo
