#pragma once

// The change of variables from the A_1 suborbit to binary forms, and the
// spin homomorphism from PGL_2(Z) onto SO of the discriminant form.

#include <array>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "apollo/descartes.hpp"

namespace apollo {

using Rational = boost::multiprecision::cpp_rational;

/// 2x2 integer matrix [[a, b], [c, d]], identified with its negative.
struct Mobius2 {
    i64 a = 1, b = 0, c = 0, d = 1;

    i64 det() const;
    Mobius2 operator*(const Mobius2& rhs) const;
    Mobius2 operator-() const { return {-a, -b, -c, -d}; }
    Mobius2 transpose() const { return {a, c, b, d}; }
    /// Congruent to the identity mod 2 with determinant +1 (up to sign).
    bool in_lambda2() const;

    friend bool operator==(const Mobius2&, const Mobius2&) = default;
};

using IntMatrix3 = std::array<std::array<i64, 3>, 3>;
using RatMatrix3 = std::array<std::array<Rational, 3>, 3>;

RatMatrix3 to_rational(const IntMatrix3& m);
RatMatrix3 multiply(const RatMatrix3& x, const RatMatrix3& y);
IntMatrix3 multiply(const IntMatrix3& x, const IntMatrix3& y);
Rational determinant(const RatMatrix3& m);
RatMatrix3 identity3();
bool is_integral(const RatMatrix3& m);

/// Coefficient map (A, B, C) -> coefficients of f o m, where
/// f = A x^2 + 2B xy + C y^2. Reverses products: T(gh) = T(h) T(g).
RatMatrix3 form_substitution(const Mobius2& m);

/// rho(m) = T(m^T) / det(m): a homomorphism with rho(gh) = rho(g) rho(h),
/// rho(-m) = rho(m), determinant +1, preserving B^2 - AC.
/// Throws InvalidInput when det(m) is not +-1.
RatMatrix3 spin_rho(const Mobius2& m);

/// True when M^T G M = G for the Gram matrix G of B^2 - AC.
bool preserves_delta(const RatMatrix3& m);

/// The two level-2 matrices [[1,0],[-2,1]] and [[1,-2],[0,1]].
std::array<Mobius2, 2> lambda2_generators();

/// g(y) = y2^2 + y3^2 + y4^2 - 2y2y3 - 2y2y4 - 2y3y4.
i64 ternary_g(const std::array<i64, 3>& y);

/// Generators of the group acting on y = (b, c, d) + (a0, a0, a0); the k-th
/// matches S_{k+1} restricted to the last three coordinates.
std::array<IntMatrix3, 3> gamma_generators();

/// Generators of the conjugate group acting on (A, B, C), where
/// y2 = A, y3 = A + C - 2B, y4 = C.
std::array<IntMatrix3, 3> gamma_prime_generators();

/// (A, B, C) -> y.
IntMatrix3 abc_to_y();

bool preserves_g(const IntMatrix3& m);

struct IdentityCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ChangeOfVariablesReport {
    Quadruple source;
    i64 a0 = 0;
    std::array<i64, 3> y{};
    i64 g_value = 0;          // g(y), expected -4 a0^2
    i64 A = 0, B = 0, C = 0;  // from y2 = A, y3 = A + C - 2B, y4 = C
    i64 b2_minus_ac = 0;      // expected -a0^2
    std::vector<IdentityCheck> checks;

    bool ok() const;
    const IdentityCheck* first_failure() const;
};

/// Evaluates every identity in the chain quadruple -> y -> (A, B, C) for
/// v = (a0, b, c, d) with Q(v) = 0 and a0 != 0.
ChangeOfVariablesReport verify_change_of_variables(const Quadruple& v);

struct SpinCheckReport {
    int pairs = 0;
    int homomorphism_failures = 0;
    int anti_homomorphism_failures = 0;  // for form_substitution
    int delta_failures = 0;
    int determinant_failures = 0;
    int sign_failures = 0;
    std::array<RatMatrix3, 2> lambda2_images;
    bool lambda2_integral = false;
    bool lambda2_preserve_delta = false;
    bool lambda2_in_even_subgroup = false;  // images are products of two gamma' generators

    bool ok() const;
};

/// Random pairs with entries in [-5, 5] and determinant +-1, seeded.
SpinCheckReport run_spin_check(int pairs, unsigned seed);

std::string to_string(const Rational& r);

}  // namespace apollo
