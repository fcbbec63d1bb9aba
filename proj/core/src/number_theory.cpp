#include "apollo/number_theory.hpp"

namespace apollo {

std::vector<i64> primes_up_to(i64 n) {
    std::vector<i64> out;
    if (n < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
    for (i64 p = 2; p <= n; ++p) {
        if (composite[p]) continue;
        out.push_back(p);
        for (i64 m = p * p; m <= n; m += p) composite[m] = true;
    }
    return out;
}

std::vector<i64> distinct_prime_factors(i64 n) {
    std::vector<i64> out;
    u64 m = n < 0 ? 0 - static_cast<u64>(n) : static_cast<u64>(n);
    for (u64 p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        out.push_back(static_cast<i64>(p));
        while (m % p == 0) m /= p;
    }
    if (m > 1) out.push_back(static_cast<i64>(m));
    return out;
}

int omega(i64 n) { return static_cast<int>(distinct_prime_factors(n).size()); }

bool is_squarefree(i64 n) {
    if (n == 0) return false;
    u64 m = n < 0 ? 0 - static_cast<u64>(n) : static_cast<u64>(n);
    for (u64 p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        m /= p;
        if (m % p == 0) return false;
    }
    return true;
}

std::vector<unsigned char> sum_of_two_squares_table(i64 x, Budget budget) {
    if (x < 0) throw InvalidInput("x must be non-negative");
    budget.require(static_cast<long double>(x) * 4, "sum-of-two-squares sieve");
    std::vector<unsigned char> b(static_cast<std::size_t>(x) + 1, 1);
    for (const i64 p : primes_up_to(x)) {
        if (p % 4 != 3) continue;
        for (i64 m = p; m <= x; m += p) {
            int e = 0;
            for (i64 t = m; t % p == 0; t /= p) ++e;
            if (e % 2 != 0) b[m] = 0;
        }
    }
    return b;
}

u64 b2s_count_B(i64 x, i64 q, i64 r, Budget budget) {
    if (q < 1) throw InvalidInput("modulus q must be at least 1");
    if (r < 0 || r >= q) throw InvalidInput("residue r must satisfy 0 <= r < q");
    if (x < 1) return 0;
    const auto b = sum_of_two_squares_table(x, budget);
    u64 count = 0;
    for (i64 n = (r == 0 ? q : r); n <= x; n += q) count += b[n];
    return count;
}

}  // namespace apollo
