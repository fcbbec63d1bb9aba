#pragma once

// Binary quadratic forms attached to circles of a packing.

#include <string>
#include <string_view>
#include <vector>

#include "apollo/bitset.hpp"
#include "apollo/descartes.hpp"

namespace apollo {

/// a x^2 + b xy + c y^2 with b even (b = 2B).
class BinaryQuadraticForm {
  public:
    BinaryQuadraticForm() = default;
    BinaryQuadraticForm(i64 a, i64 b, i64 c);

    i64 a() const { return a_; }
    i64 b() const { return b_; }
    i64 c() const { return c_; }
    i64 half_b() const { return b_ / 2; }

    /// b^2 - 4ac.
    i64 disc() const;
    bool positive_definite() const { return a_ > 0 && disc() < 0; }

    /// Exact value; throws ArithmeticError outside the 64-bit range.
    i64 operator()(i64 x, i64 y) const;
    i128 eval128(i64 x, i64 y) const {
        return static_cast<i128>(a_) * x * x + static_cast<i128>(b_) * x * y + static_cast<i128>(c_) * y * y;
    }

    friend bool operator==(const BinaryQuadraticForm&, const BinaryQuadraticForm&) = default;

  private:
    i64 a_ = 1, b_ = 0, c_ = 1;
};

/// Parses and prints "A,2B,C".
BinaryQuadraticForm parse_form(std::string_view text);
std::string to_string(const BinaryQuadraticForm& f);

/// The form f_{a0} together with its shift: f(x,y) - shift runs over
/// curvatures of circles tangent to the circle of curvature `shift`.
struct TangencyForm {
    BinaryQuadraticForm form;
    i64 shift = 0;
    Quadruple source;  // ordered with the fixed circle first
};

/// Moves coordinate `index` (1..4) to the front, keeping the others in order.
Quadruple rotate_to_front(const Quadruple& v, int index);

/// For v = (a0, b, c, d): A0 = b + a0, C0 = d + a0, B0 = (b + d + a0 - c)/2.
/// Asserts disc = -4 a0^2 and positive definiteness on every construction.
TangencyForm tangency_form(const Quadruple& v);

enum class Quadrant { nonneg, full };

struct ValueSetOptions {
    bool coprime_only = true;
    Quadrant quadrant = Quadrant::full;
    unsigned threads = 1;
    Budget budget{};
};

/// Bits set at every n in [1, bound] with n = f(x, y) - shift under the
/// argument constraints. Requires a positive definite form.
AtomicBitset value_bits(const BinaryQuadraticForm& f, i64 shift, i64 bound, const ValueSetOptions& opts = {});
AtomicBitset value_bits(const TangencyForm& tf, i64 bound, const ValueSetOptions& opts = {});

/// Sorted distinct values of value_bits.
std::vector<i64> value_set(const TangencyForm& tf, i64 bound, const ValueSetOptions& opts = {});

/// Number of (x, y) != (0, 0) with f(x, y) = n (gcd(x, y) = 1 when
/// coprime_only). Solves each row's quadratic in x exactly.
u64 representation_count(const BinaryQuadraticForm& f, i64 n, bool coprime_only = true);

/// Number of distinct n <= bound with a coprime representation by f.
u64 distinct_count_U0(const BinaryQuadraticForm& f, i64 bound, unsigned threads = 1, Budget budget = {});

/// Gauss-reduced equivalent form (|b| <= a <= c, b >= 0 on the boundary).
BinaryQuadraticForm reduce_form(const BinaryQuadraticForm& f);

/// Smallest positive value over nonzero integer pairs.
i64 min_represented(const BinaryQuadraticForm& f);

struct JamesRatio {
    u64 count = 0;     // U0(bound)
    double ratio = 0;  // U0 * sqrt(log bound) / bound
};

JamesRatio james_density_check(const BinaryQuadraticForm& f, i64 bound, unsigned threads = 1);

}  // namespace apollo
