#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace apollo {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

/// Raised when an exact integer computation would leave the 64-bit range.
class ArithmeticError : public std::overflow_error {
  public:
    using std::overflow_error::overflow_error;
};

/// Raised when an exhaustive enumeration would exceed its operation budget.
class BudgetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised for inputs that violate an operation's preconditions.
class InvalidInput : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

namespace checked {

inline i64 add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw ArithmeticError("integer overflow in addition");
    return r;
}

inline i64 sub(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticError("integer overflow in subtraction");
    return r;
}

inline i64 mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticError("integer overflow in multiplication");
    return r;
}

inline i64 narrow(i128 v) {
    if (v > static_cast<i128>(INT64_MAX) || v < static_cast<i128>(INT64_MIN))
        throw ArithmeticError("integer result exceeds 64-bit range");
    return static_cast<i64>(v);
}

}  // namespace checked

/// Floor of the square root of a non-negative 128-bit value.
inline u64 isqrt(unsigned __int128 n) {
    if (n == 0) return 0;
    // long double seed, then fix up in exact arithmetic
    auto r = static_cast<unsigned __int128>(__builtin_sqrtl(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return static_cast<u64>(r);
}

inline bool is_square(i128 n, u64* root = nullptr) {
    if (n < 0) return false;
    u64 r = isqrt(static_cast<unsigned __int128>(n));
    if (root) *root = r;
    return static_cast<i128>(r) * r == n;
}

inline i64 floor_div(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline i64 ceil_div(i64 a, i64 b) { return -floor_div(-a, b); }

inline i64 gcd_abs(i64 a, i64 b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

/// Caps exhaustive work. Limits are expressed in inner-loop iterations.
struct Budget {
    u64 max_ops = 4'000'000'000ULL;

    static Budget millions(u64 m) { return Budget{m * 1'000'000ULL}; }

    void require(long double ops, const std::string& what) const {
        if (ops > static_cast<long double>(max_ops))
            throw BudgetError("budget exceeded: " + what + " needs ~" +
                              std::to_string(static_cast<unsigned long long>(ops)) +
                              " iterations, budget is " + std::to_string(max_ops));
    }
};

}  // namespace apollo
