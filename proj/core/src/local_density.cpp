#include "apollo/local_density.hpp"

#include <cmath>
#include <cstdio>

#include "apollo/number_theory.hpp"
#include "apollo/parallel.hpp"

namespace apollo {

namespace {

using u128 = unsigned __int128;

u64 ipow(i64 p, int k) {
    u64 r = 1;
    for (int i = 0; i < k; ++i) {
        if (__builtin_mul_overflow(r, static_cast<u64>(p), &r)) throw ArithmeticError("p^k overflows 64 bits");
    }
    return r;
}

u64 mod(i64 v, u64 q) {
    const i64 r = v % static_cast<i64>(q);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(q) : r);
}

// Coefficients of a binary form reduced mod q, evaluated exactly mod q.
struct ModForm {
    u64 q, a, b, c;

    ModForm(const BinaryQuadraticForm& f, u64 modulus)
        : q(modulus), a(mod(f.a(), modulus)), b(mod(f.b(), modulus)), c(mod(f.c(), modulus)) {}

    u64 operator()(u64 x, u64 y) const {
        const u128 v = static_cast<u128>(a) * x % q * x + static_cast<u128>(b) * x % q * y +
                       static_cast<u128>(c) * y % q * y;
        return static_cast<u64>(v % q);
    }
};

void require_prime(i64 p, int k) {
    if (p < 2 || distinct_prime_factors(p) != std::vector<i64>{p}) throw InvalidInput("p must be prime");
    if (k < 1) throw InvalidInput("k must be at least 1");
}

// D[r] = #{(x, y) mod p^k : f(x, y) = r mod p^k}.
std::vector<u64> value_distribution(const BinaryQuadraticForm& f, i64 p, int k) {
    const u64 q = ipow(p, k);
    const u64 pu = static_cast<u64>(p);
    const ModForm fq(f, q);
    std::vector<u64> dist(q, 0);
    if (k == 1) {
        for (u64 x = 0; x < q; ++x)
            for (u64 y = 0; y < q; ++y) ++dist[fq(x, y)];
        return dist;
    }
    if (p == 2) {
        // The gradient (2Ax + 2By, 2Bx + 2Cy) is even, so f mod 2^k only
        // depends on (x, y) mod 2^{k-1}; each class has four lifts.
        const u64 half = q / 2;
        for (u64 x = 0; x < half; ++x)
            for (u64 y = 0; y < half; ++y) dist[fq(x, y)] += 4;
        return dist;
    }
    // Nonsingular points mod p lift to p^{k-1} solutions of each compatible
    // residue mod p^k; singular points are expanded explicitly.
    const ModForm fp(f, pu);
    std::vector<u64> nonsingular(pu, 0);
    std::vector<std::pair<u64, u64>> singular;
    for (u64 x = 0; x < pu; ++x)
        for (u64 y = 0; y < pu; ++y) {
            const u64 gx = (2 * fp.a * x + fp.b * y) % pu;
            const u64 gy = (fp.b * x + 2 * fp.c * y) % pu;
            if (gx == 0 && gy == 0)
                singular.emplace_back(x, y);
            else
                ++nonsingular[fp(x, y)];
        }
    const u64 lift = q / pu;
    for (u64 r = 0; r < q; ++r) dist[r] = lift * nonsingular[r % pu];
    for (const auto& [x0, y0] : singular)
        for (u64 u = 0; u < lift; ++u)
            for (u64 v = 0; v < lift; ++v) ++dist[fq(x0 + pu * u, y0 + pu * v)];
    return dist;
}

Rational scaled_count(u128 count, i64 p, int k) {
    using boost::multiprecision::cpp_int;
    cpp_int n = static_cast<u64>(count >> 64);
    n <<= 64;
    n += static_cast<u64>(count);
    cpp_int den = 1;
    for (int i = 0; i < 3 * k; ++i) den *= p;
    return Rational(n, den);
}

}  // namespace

QuaternaryForm make_quaternary(const TangencyForm& fa, const TangencyForm& fa_prime) {
    QuaternaryForm qf{fa, fa_prime};
    const i128 expected = 16 * static_cast<i128>(fa.shift) * fa.shift * fa_prime.shift * fa_prime.shift;
    if (qf.disc_product() != expected) throw std::logic_error("quaternary form discriminant product mismatch");
    return qf;
}

PrimeCase classify_prime(i64 a, i64 a_prime, i64 p) {
    const bool pa = a % p == 0, pb = a_prime % p == 0;
    if (pa && pb) return PrimeCase::common_divisor;
    if (pa || pb) return PrimeCase::case3;
    if ((a - a_prime) % p == 0) return PrimeCase::case2;
    return PrimeCase::case1;
}

const char* to_string(PrimeCase c) {
    switch (c) {
        case PrimeCase::case1: return "case1";
        case PrimeCase::case2: return "case2";
        case PrimeCase::case3: return "case3";
        case PrimeCase::common_divisor: return "common_divisor";
    }
    return "?";
}

const char* to_string(SigmaMethod m) { return m == SigmaMethod::exhaustive ? "exhaustive" : "lifted"; }

Rational sigma_p_exhaustive(const QuaternaryForm& qf, i64 p, int k, Budget budget) {
    require_prime(p, k);
    const u64 q = ipow(p, k);
    budget.require(std::pow(static_cast<long double>(q), 4), "exhaustive local density");
    const ModForm fa(qf.fa.form, q), fb(qf.fa_prime.form, q);
    const u64 t = mod(qf.target(), q);
    std::vector<u64> va, vb;
    va.reserve(q * q);
    vb.reserve(q * q);
    for (u64 x = 0; x < q; ++x)
        for (u64 y = 0; y < q; ++y) {
            va.push_back(fa(x, y));
            vb.push_back(fb(x, y));
        }
    u128 count = 0;
    for (const u64 s : va) {
        const u64 want = (s + q - t) % q;
        for (const u64 w : vb) count += (w == want);
    }
    return scaled_count(count, p, k);
}

Rational sigma_p_lifted(const QuaternaryForm& qf, i64 p, int k, Budget budget) {
    require_prime(p, k);
    const u64 q = ipow(p, k);
    // worst case: every point mod p singular
    const long double lifts = std::pow(static_cast<long double>(p), 2.0L * (k - 1));
    budget.require(2 * (static_cast<long double>(p) * p + lifts * p * p) + q, "lifted local density");
    const auto da = value_distribution(qf.fa.form, p, k);
    const auto db = value_distribution(qf.fa_prime.form, p, k);
    const u64 t = mod(qf.target(), q);
    u128 count = 0;
    for (u64 s = 0; s < q; ++s) count += static_cast<u128>(da[s]) * db[(s + q - t) % q];
    return scaled_count(count, p, k);
}

SigmaValue sigma_p(const QuaternaryForm& qf, i64 p, int k, Budget budget, u64 exhaustive_limit) {
    require_prime(p, k);
    const long double work = std::pow(static_cast<long double>(p), 4.0L * k);
    if (work <= static_cast<long double>(exhaustive_limit) && work <= static_cast<long double>(budget.max_ops))
        return {sigma_p_exhaustive(qf, p, k, budget), SigmaMethod::exhaustive};
    return {sigma_p_lifted(qf, p, k, budget), SigmaMethod::lifted};
}

double pair_arithmetic_factor(i64 a, i64 a_prime) {
    if (a == a_prime) throw InvalidInput("pair factor needs a != a'");
    const i64 g = gcd_abs(a, a_prime);
    double factor = std::pow(2.0, omega(g));
    const i128 n = static_cast<i128>(a) * a_prime * (a - a_prime);
    for (const i64 p : distinct_prime_factors(checked::narrow(n)))
        if (g % p != 0) factor *= 1.0 + 1.0 / static_cast<double>(p);
    return factor;
}

SingularSeriesReport singular_series_truncated(const QuaternaryForm& qf, i64 p_max, int k, unsigned threads,
                                               Budget budget) {
    if (qf.a() == qf.a_prime()) throw InvalidInput("singular series needs a != a'");
    if (p_max < 2) throw InvalidInput("p_max must be at least 2");
    if (k < 1) throw InvalidInput("k must be at least 1");
    SingularSeriesReport rep;
    rep.a = qf.a();
    rep.a_prime = qf.a_prime();
    rep.target = qf.target();
    rep.p_max = p_max;
    rep.k = k;
    const auto primes = primes_up_to(p_max);
    rep.entries.resize(primes.size());
    parallel_for(primes.size(), threads, [&](std::size_t i) {
        const i64 p = primes[i];
        const SigmaValue v = sigma_p(qf, p, k, budget);
        rep.entries[i] = {p, k, v.sigma, classify_prime(rep.a, rep.a_prime, p), v.method};
    });
    rep.truncated_product = 1;
    for (const auto& e : rep.entries) rep.truncated_product *= e.sigma;

    const i64 g = gcd_abs(rep.a, rep.a_prime);
    rep.ceiling = std::pow(2.0, omega(g));
    for (const auto& e : rep.entries)
        if (e.prime_case != PrimeCase::case1 && e.prime_case != PrimeCase::common_divisor)
            rep.ceiling *= 1.0 + 1.0 / static_cast<double>(e.p);
    rep.within_ceiling = rep.truncated_product.convert_to<double>() <= rep.constant * rep.ceiling;
    return rep;
}

std::string to_decimal(const Rational& r, int digits) {
    using boost::multiprecision::cpp_int;
    cpp_int scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    cpp_int num = boost::multiprecision::numerator(r) * scale;
    const cpp_int den = boost::multiprecision::denominator(r);
    const bool negative = num < 0;
    if (negative) num = -num;
    // round half up on the magnitude
    cpp_int q = (2 * num + den) / (2 * den);
    std::string s = q.str();
    if (digits > 0) {
        if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
        s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    }
    return (negative && q != 0 ? "-" : "") + s;
}

}  // namespace apollo
