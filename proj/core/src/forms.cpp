#include "apollo/forms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "apollo/orbit.hpp"
#include "apollo/parallel.hpp"

namespace apollo {

BinaryQuadraticForm::BinaryQuadraticForm(i64 a, i64 b, i64 c) : a_(a), b_(b), c_(c) {
    if (b % 2 != 0) throw InvalidInput("middle coefficient must be even (form is A,2B,C)");
}

i64 BinaryQuadraticForm::disc() const {
    return checked::narrow(static_cast<i128>(b_) * b_ - 4 * static_cast<i128>(a_) * c_);
}

i64 BinaryQuadraticForm::operator()(i64 x, i64 y) const { return checked::narrow(eval128(x, y)); }

BinaryQuadraticForm parse_form(std::string_view text) {
    i64 v[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t comma = text.find(',', pos);
        if ((i < 2) == (comma == std::string_view::npos))
            throw InvalidInput("form must be three comma-separated integers A,2B,C");
        std::string_view field = text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
        while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
        while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v[i]);
        if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
            throw InvalidInput("malformed form coefficient '" + std::string(field) + "'");
        pos = comma + 1;
    }
    return BinaryQuadraticForm(v[0], v[1], v[2]);
}

std::string to_string(const BinaryQuadraticForm& f) {
    return std::to_string(f.a()) + "," + std::to_string(f.b()) + "," + std::to_string(f.c());
}

Quadruple rotate_to_front(const Quadruple& v, int index) {
    if (index < 1 || index > 4) throw InvalidInput("index must be in 1..4");
    Quadruple out;
    out[0] = v[index - 1];
    for (int i = 0, n = 1; i < 4; ++i)
        if (i != index - 1) out[n++] = v[i];
    return out;
}

TangencyForm tangency_form(const Quadruple& v) {
    if (!is_descartes(v)) throw InvalidInput("not a Descartes quadruple: " + to_string(v));
    const i64 a0 = v[0], b = v[1], c = v[2], d = v[3];
    if (a0 == 0) throw InvalidInput("fixed curvature a0 = 0 is unsupported (discriminant would vanish)");
    const i64 twice_b0 = checked::sub(checked::add(checked::add(b, d), a0), c);
    // even because the coordinate sum of a Descartes quadruple is even
    if (twice_b0 % 2 != 0) throw std::logic_error("odd b + d + a0 - c for " + to_string(v));
    TangencyForm tf;
    tf.form = BinaryQuadraticForm(checked::add(b, a0), twice_b0, checked::add(d, a0));
    tf.shift = a0;
    tf.source = v;
    const i64 expected = checked::mul(-4, checked::mul(a0, a0));
    if (tf.form.disc() != expected)
        throw std::logic_error("tangency form " + to_string(tf.form) + " has discriminant " +
                               std::to_string(tf.form.disc()) + ", expected " + std::to_string(expected));
    if (!tf.form.positive_definite())
        throw InvalidInput("tangency form " + to_string(tf.form) + " is not positive definite");
    return tf;
}

namespace {

struct Region {
    i64 y_max;
    i128 r2;   // bound on (2a x + b y)^2
    i64 r;     // ceil(sqrt(r2)) + 1
};

// Lattice points with f <= m satisfy (2ax + by)^2 + (4ac - b^2) y^2 <= 4a m,
// so |y| <= sqrt(4am / (4ac - b^2)); both ranges are widened by one.
Region region_for(const BinaryQuadraticForm& f, i64 m) {
    const i128 d4 = -static_cast<i128>(f.disc());
    const i128 r2 = 4 * static_cast<i128>(f.a()) * m;
    Region reg;
    reg.r2 = r2;
    reg.r = static_cast<i64>(isqrt(static_cast<unsigned __int128>(r2))) + 1;
    reg.y_max = static_cast<i64>(isqrt(static_cast<unsigned __int128>(r2 / d4))) + 1;
    return reg;
}

template <class F>
void for_each_row(const BinaryQuadraticForm& f, const Region& reg, i64 y, F&& visit) {
    const i64 two_a = 2 * f.a();
    const i64 by = f.b() * y;
    const i64 x_lo = floor_div(-by - reg.r, two_a) - 1;
    const i64 x_hi = ceil_div(-by + reg.r, two_a) + 1;
    for (i64 x = x_lo; x <= x_hi; ++x) visit(x);
}

long double region_work(const BinaryQuadraticForm& f, const Region& reg) {
    return (2.0L * reg.y_max + 1) * (2.0L * reg.r / (2.0L * f.a()) + 3);
}

void require_definite(const BinaryQuadraticForm& f) {
    if (!f.positive_definite()) throw InvalidInput("form " + to_string(f) + " is not positive definite");
}

}  // namespace

AtomicBitset value_bits(const BinaryQuadraticForm& f, i64 shift, i64 bound, const ValueSetOptions& opts) {
    require_definite(f);
    if (bound > kMaxCurvatureBound) throw InvalidInput("value-set bound exceeds the supported maximum 2^31");
    AtomicBitset bits(static_cast<u64>(std::max<i64>(bound, 0)));
    if (bound < 1) return bits;
    const i64 m = checked::add(bound, shift);
    if (m < 0) return bits;
    const Region reg = region_for(f, m);
    opts.budget.require(region_work(f, reg), "value set enumeration");

    const i64 y_lo = opts.quadrant == Quadrant::nonneg ? 0 : -reg.y_max;
    const i64 rows = reg.y_max - y_lo + 1;
    constexpr i64 kRowsPerTask = 64;
    const auto tasks = static_cast<std::size_t>((rows + kRowsPerTask - 1) / kRowsPerTask);
    parallel_for(tasks, opts.threads, [&](std::size_t t) {
        const i64 first = y_lo + static_cast<i64>(t) * kRowsPerTask;
        const i64 last = std::min(reg.y_max, first + kRowsPerTask - 1);
        for (i64 y = first; y <= last; ++y) {
            for_each_row(f, reg, y, [&](i64 x) {
                if (opts.quadrant == Quadrant::nonneg && x < 0) return;
                if (x == 0 && y == 0) return;
                const i128 v = f.eval128(x, y) - shift;
                if (v < 1 || v > bound) return;
                if (opts.coprime_only && gcd_abs(x, y) != 1) return;
                bits.set(static_cast<u64>(v));
            });
        }
    });
    return bits;
}

AtomicBitset value_bits(const TangencyForm& tf, i64 bound, const ValueSetOptions& opts) {
    return value_bits(tf.form, tf.shift, bound, opts);
}

std::vector<i64> value_set(const TangencyForm& tf, i64 bound, const ValueSetOptions& opts) {
    if (bound < 1) return {};
    return value_bits(tf, bound, opts).to_vector<i64>(1);
}

u64 representation_count(const BinaryQuadraticForm& f, i64 n, bool coprime_only) {
    require_definite(f);
    if (n < 1) return 0;
    // 4a f(x, y) = (2ax + by)^2 + (4ac - b^2) y^2
    const i128 d4 = -static_cast<i128>(f.disc());
    const i128 an4 = 4 * static_cast<i128>(f.a()) * n;
    const i64 y_max = static_cast<i64>(isqrt(static_cast<unsigned __int128>(an4 / d4))) + 1;
    u64 count = 0;
    const i128 two_a = 2 * static_cast<i128>(f.a());
    for (i64 y = -y_max; y <= y_max; ++y) {
        const i128 rad = an4 - d4 * y * y;
        u64 s = 0;
        if (!is_square(rad, &s)) continue;
        const i128 by = static_cast<i128>(f.b()) * y;
        const i128 cands[2] = {-by + static_cast<i128>(s), -by - static_cast<i128>(s)};
        for (int k = 0; k < (s == 0 ? 1 : 2); ++k) {
            if (cands[k] % two_a != 0) continue;
            const i64 x = static_cast<i64>(cands[k] / two_a);
            if (x == 0 && y == 0) continue;
            if (coprime_only && gcd_abs(x, y) != 1) continue;
            ++count;
        }
    }
    return count;
}

u64 distinct_count_U0(const BinaryQuadraticForm& f, i64 bound, unsigned threads, Budget budget) {
    if (bound < 1) return 0;
    ValueSetOptions opts;
    opts.threads = threads;
    opts.budget = budget;
    return value_bits(f, 0, bound, opts).count();
}

BinaryQuadraticForm reduce_form(const BinaryQuadraticForm& f) {
    require_definite(f);
    i64 a = f.a(), b = f.b(), c = f.c();
    while (true) {
        if (c < a) {
            std::swap(a, c);
            b = -b;
            continue;
        }
        if (b > a || b <= -a) {
            // b -> b - 2ak with b in (-a, a]; c follows from the discriminant
            const i64 k = floor_div(b + a - 1, 2 * a);
            const i64 nb = b - 2 * a * k;
            c = checked::narrow(static_cast<i128>(a) * k * k - static_cast<i128>(b) * k + c);
            b = nb;
            continue;
        }
        if (a == c && b < 0) b = -b;
        break;
    }
    return BinaryQuadraticForm(a, b, c);
}

i64 min_represented(const BinaryQuadraticForm& f) { return reduce_form(f).a(); }

JamesRatio james_density_check(const BinaryQuadraticForm& f, i64 bound, unsigned threads) {
    if (bound < 3) throw InvalidInput("bound must be at least 3 for log normalisation");
    JamesRatio out;
    out.count = distinct_count_U0(f, bound, threads);
    out.ratio = static_cast<double>(out.count) * std::sqrt(std::log(static_cast<double>(bound))) /
                static_cast<double>(bound);
    return out;
}

}  // namespace apollo
