#include "apollo/spin.hpp"

#include <random>

namespace apollo {

i64 Mobius2::det() const { return checked::sub(checked::mul(a, d), checked::mul(b, c)); }

Mobius2 Mobius2::operator*(const Mobius2& r) const {
    return {checked::add(checked::mul(a, r.a), checked::mul(b, r.c)), checked::add(checked::mul(a, r.b), checked::mul(b, r.d)),
            checked::add(checked::mul(c, r.a), checked::mul(d, r.c)), checked::add(checked::mul(c, r.b), checked::mul(d, r.d))};
}

bool Mobius2::in_lambda2() const {
    auto odd = [](i64 v) { return (v & 1) != 0; };
    return det() == 1 && odd(a) && !odd(b) && !odd(c) && odd(d);
}

RatMatrix3 to_rational(const IntMatrix3& m) {
    RatMatrix3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = m[i][j];
    return r;
}

RatMatrix3 multiply(const RatMatrix3& x, const RatMatrix3& y) {
    RatMatrix3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Rational acc = 0;
            for (int k = 0; k < 3; ++k) acc += x[i][k] * y[k][j];
            r[i][j] = acc;
        }
    return r;
}

IntMatrix3 multiply(const IntMatrix3& x, const IntMatrix3& y) {
    IntMatrix3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            i64 acc = 0;
            for (int k = 0; k < 3; ++k) acc = checked::add(acc, checked::mul(x[i][k], y[k][j]));
            r[i][j] = acc;
        }
    return r;
}

Rational determinant(const RatMatrix3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

RatMatrix3 identity3() {
    RatMatrix3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = (i == j) ? 1 : 0;
    return r;
}

bool is_integral(const RatMatrix3& m) {
    for (const auto& row : m)
        for (const auto& v : row)
            if (boost::multiprecision::denominator(v) != 1) return false;
    return true;
}

RatMatrix3 form_substitution(const Mobius2& m) {
    const Rational al = m.a, be = m.b, ga = m.c, de = m.d;
    RatMatrix3 r;
    r[0] = {al * al, 2 * al * ga, ga * ga};
    r[1] = {al * be, al * de + be * ga, ga * de};
    r[2] = {be * be, 2 * be * de, de * de};
    return r;
}

RatMatrix3 spin_rho(const Mobius2& m) {
    const i64 det = m.det();
    if (det != 1 && det != -1) throw InvalidInput("spin map needs determinant +-1, got " + std::to_string(det));
    RatMatrix3 r = form_substitution(m.transpose());
    for (auto& row : r)
        for (auto& v : row) v /= det;
    return r;
}

bool preserves_delta(const RatMatrix3& m) {
    // B^2 - AC in coordinates (A, B, C)
    RatMatrix3 gram;
    for (auto& row : gram)
        for (auto& v : row) v = 0;
    gram[1][1] = 1;
    gram[0][2] = gram[2][0] = Rational(-1, 2);
    RatMatrix3 mt;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) mt[i][j] = m[j][i];
    return multiply(multiply(mt, gram), m) == gram;
}

std::array<Mobius2, 2> lambda2_generators() { return {Mobius2{1, 0, -2, 1}, Mobius2{1, -2, 0, 1}}; }

i64 ternary_g(const std::array<i64, 3>& y) {
    const i128 a = y[0], b = y[1], c = y[2];
    return checked::narrow(a * a + b * b + c * c - 2 * a * b - 2 * a * c - 2 * b * c);
}

std::array<IntMatrix3, 3> gamma_generators() {
    return {{
        {{{-1, 2, 2}, {0, 1, 0}, {0, 0, 1}}},
        {{{1, 0, 0}, {2, -1, 2}, {0, 0, 1}}},
        {{{1, 0, 0}, {0, 1, 0}, {2, 2, -1}}},
    }};
}

std::array<IntMatrix3, 3> gamma_prime_generators() {
    return {{
        {{{1, -4, 4}, {0, -1, 2}, {0, 0, 1}}},
        {{{1, 0, 0}, {0, -1, 0}, {0, 0, 1}}},
        {{{1, 0, 0}, {2, -1, 0}, {4, -4, 1}}},
    }};
}

IntMatrix3 abc_to_y() { return {{{1, 0, 0}, {1, -2, 1}, {0, 0, 1}}}; }

bool preserves_g(const IntMatrix3& m) {
    const IntMatrix3 gram{{{1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}};
    IntMatrix3 mt{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) mt[i][j] = m[j][i];
    return multiply(multiply(mt, gram), m) == gram;
}

bool ChangeOfVariablesReport::ok() const { return first_failure() == nullptr; }

const IdentityCheck* ChangeOfVariablesReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.passed) return &c;
    return nullptr;
}

namespace {

std::array<i64, 3> apply3(const IntMatrix3& m, const std::array<i64, 3>& v) {
    std::array<i64, 3> r{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) r[i] = checked::add(r[i], checked::mul(m[i][k], v[k]));
    return r;
}

}  // namespace

ChangeOfVariablesReport verify_change_of_variables(const Quadruple& v) {
    if (!is_descartes(v)) throw InvalidInput("not a Descartes quadruple: " + to_string(v));
    if (v[0] == 0) throw InvalidInput("fixed curvature a0 = 0 is unsupported");
    ChangeOfVariablesReport rep;
    rep.source = v;
    rep.a0 = v[0];
    const i64 a0 = v[0];
    const i64 a0sq = checked::mul(a0, a0);
    auto to_y = [&](const Quadruple& q) {
        return std::array<i64, 3>{checked::add(q[1], a0), checked::add(q[2], a0), checked::add(q[3], a0)};
    };
    rep.y = to_y(v);
    rep.g_value = ternary_g(rep.y);
    rep.checks.push_back({"g(y) + 4 a0^2 = 0", rep.g_value == -4 * a0sq,
                          "g(y) = " + std::to_string(rep.g_value) + ", -4 a0^2 = " + std::to_string(-4 * a0sq)});

    rep.A = rep.y[0];
    rep.C = rep.y[2];
    const i64 twice_b = checked::sub(checked::add(rep.A, rep.C), rep.y[1]);
    rep.checks.push_back({"y3 = A + C - 2B has integral B", twice_b % 2 == 0, "2B = " + std::to_string(twice_b)});
    rep.B = twice_b / 2;
    rep.b2_minus_ac = checked::sub(checked::mul(rep.B, rep.B), checked::mul(rep.A, rep.C));
    rep.checks.push_back({"4(B^2 - AC) = -4 a0^2", rep.b2_minus_ac == -a0sq,
                          "B^2 - AC = " + std::to_string(rep.b2_minus_ac) + ", -a0^2 = " + std::to_string(-a0sq)});

    const auto gam = gamma_generators();
    const auto gamp = gamma_prime_generators();
    const auto p = abc_to_y();
    for (int k = 0; k < 3; ++k) {
        const std::string idx = std::to_string(k + 1);
        rep.checks.push_back({"Gamma generator " + idx + " preserves g", preserves_g(gam[k]), ""});
        rep.checks.push_back(
            {"Gamma' generator " + idx + " preserves B^2 - AC", preserves_delta(to_rational(gamp[k])), ""});
        rep.checks.push_back({"Gamma' generator " + idx + " is Gamma generator " + idx + " conjugated to (A,B,C)",
                              multiply(p, gamp[k]) == multiply(gam[k], p), ""});
        // S_{k+2} on the quadruple agrees with gamma_k on y
        const auto moved = to_y(reflect(v, k + 2));
        rep.checks.push_back({"S_" + std::to_string(k + 2) + " acts on y as Gamma generator " + idx,
                              moved == apply3(gam[k], rep.y), ""});
    }
    return rep;
}

bool SpinCheckReport::ok() const {
    return homomorphism_failures == 0 && anti_homomorphism_failures == 0 && delta_failures == 0 &&
           determinant_failures == 0 && sign_failures == 0 && lambda2_integral && lambda2_preserve_delta &&
           lambda2_in_even_subgroup;
}

namespace {

Mobius2 random_unimodular(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> entry(-5, 5);
    while (true) {
        Mobius2 m{entry(rng), entry(rng), entry(rng), entry(rng)};
        const i64 d = m.det();
        if (d == 1 || d == -1) return m;
    }
}

}  // namespace

SpinCheckReport run_spin_check(int pairs, unsigned seed) {
    std::mt19937_64 rng(seed);
    SpinCheckReport rep;
    rep.pairs = pairs;
    for (int i = 0; i < pairs; ++i) {
        const Mobius2 g = random_unimodular(rng), h = random_unimodular(rng);
        const RatMatrix3 rg = spin_rho(g), rh = spin_rho(h), rgh = spin_rho(g * h);
        if (rgh != multiply(rg, rh)) ++rep.homomorphism_failures;
        if (form_substitution(g * h) != multiply(form_substitution(h), form_substitution(g)))
            ++rep.anti_homomorphism_failures;
        if (!preserves_delta(rg) || !preserves_delta(rgh)) ++rep.delta_failures;
        if (determinant(rg) != 1) ++rep.determinant_failures;
        if (spin_rho(-g) != rg) ++rep.sign_failures;
    }
    const auto gens = lambda2_generators();
    const auto gamp = gamma_prime_generators();
    rep.lambda2_integral = rep.lambda2_preserve_delta = rep.lambda2_in_even_subgroup = true;
    for (int i = 0; i < 2; ++i) {
        rep.lambda2_images[i] = spin_rho(gens[i]);
        rep.lambda2_integral = rep.lambda2_integral && is_integral(rep.lambda2_images[i]);
        rep.lambda2_preserve_delta = rep.lambda2_preserve_delta && preserves_delta(rep.lambda2_images[i]);
        bool found = false;
        for (int x = 0; x < 3 && !found; ++x)
            for (int y = 0; y < 3 && !found; ++y)
                if (x != y && to_rational(multiply(gamp[x], gamp[y])) == rep.lambda2_images[i]) found = true;
        rep.lambda2_in_even_subgroup = rep.lambda2_in_even_subgroup && found;
    }
    return rep;
}

std::string to_string(const Rational& r) {
    if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

}  // namespace apollo
