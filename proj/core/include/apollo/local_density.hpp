#pragma once

// Local densities of F(x, y, x', y') = f_a(x, y) - f_a'(x', y') at the
// target a - a', and the truncated singular series built from them.

#include <string>
#include <vector>

#include "apollo/forms.hpp"
#include "apollo/spin.hpp"

namespace apollo {

struct QuaternaryForm {
    TangencyForm fa;
    TangencyForm fa_prime;

    i64 a() const { return fa.shift; }
    i64 a_prime() const { return fa_prime.shift; }
    i64 target() const { return checked::sub(fa.shift, fa_prime.shift); }
    /// disc(f_a) * disc(f_a'), equal to 16 a^2 a'^2 for tangency forms.
    i128 disc_product() const { return static_cast<i128>(fa.form.disc()) * fa_prime.form.disc(); }
};

QuaternaryForm make_quaternary(const TangencyForm& fa, const TangencyForm& fa_prime);

/// How p relates to a, a' and a - a'. common_divisor is p | (a, a'), where
/// the local density is at most 2.
enum class PrimeCase { case1, case2, case3, common_divisor };

PrimeCase classify_prime(i64 a, i64 a_prime, i64 p);
const char* to_string(PrimeCase c);

enum class SigmaMethod { exhaustive, lifted };
const char* to_string(SigmaMethod m);

/// p^{-3k} #{x in (Z/p^k)^4 : F(x) = a - a' mod p^k} by visiting all p^{4k}
/// residue vectors. Throws BudgetError when p^{4k} exceeds the budget.
Rational sigma_p_exhaustive(const QuaternaryForm& qf, i64 p, int k, Budget budget = {});

/// Same quantity from the value distributions of f_a and f_a' mod p^k,
/// which are obtained by lifting solutions from mod p (Hensel) and
/// enumerating only residues above singular points mod p.
Rational sigma_p_lifted(const QuaternaryForm& qf, i64 p, int k, Budget budget = {});

/// Uses the exhaustive count when p^{4k} <= exhaustive_limit, else lifting.
struct SigmaValue {
    Rational sigma;
    SigmaMethod method = SigmaMethod::exhaustive;
};
SigmaValue sigma_p(const QuaternaryForm& qf, i64 p, int k, Budget budget = {}, u64 exhaustive_limit = 1'000'000);

/// Recorded constant C in: truncated product <= C * prod(1 + 1/p) * 2^omega((a, a')),
/// the product over p <= p_max with p | a a'(a - a') and p not dividing (a, a').
inline constexpr double kSingularSeriesConstant = 2.0;

struct SigmaEntry {
    i64 p = 0;
    int k = 0;
    Rational sigma;
    PrimeCase prime_case = PrimeCase::case1;
    SigmaMethod method = SigmaMethod::exhaustive;
};

struct SingularSeriesReport {
    i64 a = 0, a_prime = 0, target = 0;
    i64 p_max = 0;
    int k = 0;
    std::vector<SigmaEntry> entries;
    Rational truncated_product;
    double ceiling = 0;  // prod(1 + 1/p) * 2^omega((a, a'))
    double constant = kSingularSeriesConstant;
    bool within_ceiling = false;  // truncated_product <= constant * ceiling
};

/// Requires a != a', p_max >= 2, k >= 1. Per-prime work runs on `threads`.
SingularSeriesReport singular_series_truncated(const QuaternaryForm& qf, i64 p_max, int k, unsigned threads = 1,
                                               Budget budget = {});

/// prod over p | a a'(a - a'), p not dividing (a, a') of (1 + 1/p), times
/// 2^omega((a, a')). Requires a != a'.
double pair_arithmetic_factor(i64 a, i64 a_prime);

/// Fixed-precision decimal rendering of an exact rational.
std::string to_decimal(const Rational& r, int digits);

}  // namespace apollo
