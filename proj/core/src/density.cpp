#include "apollo/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "apollo/number_theory.hpp"
#include "apollo/parallel.hpp"

namespace apollo {

std::vector<i64> build_A0(const Quadruple& a0_quadruple, i64 bound, bool coprime_only, unsigned threads) {
    const TangencyForm tf = tangency_form(a0_quadruple);
    ValueSetOptions opts;
    opts.coprime_only = coprime_only;
    opts.quadrant = Quadrant::nonneg;
    opts.threads = threads;
    return value_set(tf, bound, opts);
}

std::vector<i64> DyadicSelection::members() const {
    std::set<i64> all;
    for (const auto& level : levels) all.insert(level.members.begin(), level.members.end());
    return {all.begin(), all.end()};
}

DyadicSelection select_Ak(const std::vector<i64>& A0, double eta, i64 a_lo, i64 a_hi) {
    if (!(eta > 0 && eta < 1)) throw InvalidInput("eta must lie in (0, 1)");
    if (a_lo < 1 || a_hi < a_lo) throw InvalidInput("a-range must satisfy 1 <= a_lo <= a_hi");
    if (!std::is_sorted(A0.begin(), A0.end())) throw InvalidInput("A_0 must be sorted");
    DyadicSelection sel;
    sel.eta = eta;
    sel.a_lo = a_lo;
    sel.a_hi = a_hi;
    auto count_in = [&](double lo, double hi) {
        const auto first = std::lower_bound(A0.begin(), A0.end(), static_cast<i64>(std::ceil(lo)));
        const auto last = std::upper_bound(A0.begin(), A0.end(), static_cast<i64>(std::floor(hi)));
        return first < last ? static_cast<u64>(last - first) : u64{0};
    };
    bool any = false;
    for (int k = 1; k < 62; ++k) {
        const i64 start = i64{1} << k;
        if (start > a_hi) break;
        if (2 * start - 1 < a_lo) continue;
        DyadicLevel level;
        level.k = k;
        const double root_k = std::sqrt(static_cast<double>(k));
        level.window_length = eta * static_cast<double>(start) / root_k;
        level.window_count = static_cast<int>(std::ceil(root_k / eta));
        const double dyadic_hi = static_cast<double>(2 * start);
        u64 total = 0;
        for (int n = 0; n < level.window_count; ++n) {
            const double lo = std::max(static_cast<double>(start) + n * level.window_length, static_cast<double>(a_lo));
            const double hi = std::min({static_cast<double>(start) + (n + 1) * level.window_length, dyadic_hi,
                                        static_cast<double>(a_hi)});
            const u64 c = lo <= hi ? count_in(lo, hi) : 0;
            level.counts.push_back(c);
            total += c;
            if (n == 0 || c > level.counts[static_cast<std::size_t>(level.selected)]) {
                level.selected = n;
                level.lo = lo;
                level.hi = hi;
            }
        }
        if (level.lo <= level.hi) {
            const auto first = std::lower_bound(A0.begin(), A0.end(), static_cast<i64>(std::ceil(level.lo)));
            const auto last = std::upper_bound(A0.begin(), A0.end(), static_cast<i64>(std::floor(level.hi)));
            if (first < last) level.members.assign(first, last);
        }
        level.average = static_cast<double>(total) / level.window_count;
        level.pigeonhole_ratio =
            static_cast<double>(level.members.size()) / (eta * static_cast<double>(start) / static_cast<double>(k));
        any = any || !level.members.empty();
        sel.levels.push_back(std::move(level));
    }
    if (!any) sel.warning = "no element of A_0 lies in the selected windows";
    return sel;
}

std::optional<Quadruple> tangent_witness(const Quadruple& root, int fixed_index, i64 a) {
    if (fixed_index < 1 || fixed_index > 4) throw InvalidInput("fixed index must be in 1..4");
    if (a < 1) throw InvalidInput("witness curvature must be positive");
    const Quadruple start = reduce_in_suborbit(root, fixed_index);
    auto slot_of = [&](const Quadruple& q) {
        for (int i = 0; i < 4; ++i)
            if (i != fixed_index - 1 && q[i] == a) return i + 1;
        return 0;
    };
    if (const int s = slot_of(start)) return rotate_to_front(start, s);

    EnumerationParams params;
    params.root = start;
    params.fixed_index = fixed_index;
    i64 top = a;
    for (int i = 0; i < 4; ++i)
        if (i != fixed_index - 1) top = std::max(top, start[i]);
    params.bound = top;
    struct Found {
        Quadruple q;
    };
    try {
        enumerate_packing(params, [&](const Emission& e) {
            if (e.curvature != a) return;
            Quadruple child = e.parent;
            child[e.generator - 1] = e.curvature;
            throw Found{rotate_to_front(child, e.generator)};
        });
    } catch (const Found& f) {
        return f.q;
    }
    return std::nullopt;
}

namespace {

ValueSetOptions sa_options(unsigned threads, Budget budget) {
    ValueSetOptions opts;
    opts.coprime_only = true;
    opts.quadrant = Quadrant::full;
    opts.threads = threads;
    opts.budget = budget;
    return opts;
}

SaEntry sa_entry(const TangencyForm& tf, u64 size, i64 bound) {
    SaEntry e;
    e.a = tf.shift;
    e.witness = tf.source;
    e.form = tf.form;
    e.size = size;
    e.floor_bound = static_cast<u64>(std::floor(kSaLowerConstant * static_cast<double>(bound) / static_cast<double>(tf.shift)));
    return e;
}

void finish_summary(SaSummary& s) {
    s.total = 0;
    s.max_size = 0;
    for (const auto& e : s.entries) {
        s.total += e.size;
        s.max_size = std::max(s.max_size, e.size);
    }
    s.ratio = static_cast<double>(s.total) / (s.eta * static_cast<double>(s.bound));
}

}  // namespace

SaSummary sum_Sa(const std::vector<TangencyForm>& forms, i64 bound, double eta, unsigned threads, Budget budget) {
    SaSummary s;
    s.bound = bound;
    s.eta = eta;
    for (const auto& tf : forms) {
        if (tf.shift < 1) throw InvalidInput("S_a needs a positive curvature a");
        s.entries.push_back(sa_entry(tf, value_bits(tf, bound, sa_options(threads, budget)).count(), bound));
    }
    finish_summary(s);
    return s;
}

u64 intersection_exact(const TangencyForm& fa, const TangencyForm& fa_prime, i64 bound, const ValueSetOptions& opts) {
    if (bound < 1) return 0;
    return value_bits(fa, bound, opts).count_and(value_bits(fa_prime, bound, opts));
}

bool BoxSide::contains(i64 x, i64 y) const {
    if (y < -y_max || y > y_max) return false;
    const i128 u = static_cast<i128>(form.a()) * x + static_cast<i128>(form.half_b()) * y;
    return u * u <= ax;
}

std::pair<i64, i64> BoxSide::row(i64 y) const {
    // A x + B y in [-s, s] with s = floor(sqrt(A X))
    const i64 s = static_cast<i64>(isqrt(static_cast<unsigned __int128>(ax)));
    const i64 by = checked::mul(form.half_b(), y);
    return {ceil_div(-by - s, form.a()), floor_div(-by + s, form.a())};
}

namespace {

BoxSide make_side(const TangencyForm& tf, i64 bound) {
    BoxSide side;
    side.form = tf.form;
    side.a = tf.shift < 0 ? -tf.shift : tf.shift;
    side.ax = checked::mul(tf.form.a(), bound);
    const i128 a2 = static_cast<i128>(side.a) * side.a;
    side.y_max = static_cast<i64>(isqrt(static_cast<unsigned __int128>(side.ax / a2)));
    return side;
}

long double row_count(const BoxSide& side) {
    long double n = 0;
    for (i64 y = -side.y_max; y <= side.y_max; ++y) {
        const auto [lo, hi] = side.row(y);
        if (hi >= lo) n += static_cast<long double>(hi - lo + 1);
    }
    return n;
}

// Points of `side` with f = m.
u64 count_on_side(const BoxSide& side, i128 m) {
    if (m < 0) return 0;
    const i64 A = side.form.a(), B = side.form.half_b();
    const i128 am = static_cast<i128>(A) * m;
    const i128 a2 = static_cast<i128>(side.a) * side.a;
    u64 count = 0;
    for (i64 y = -side.y_max; y <= side.y_max; ++y) {
        const i128 rad = am - a2 * y * y;
        if (rad < 0 || rad > side.ax) continue;
        u64 s = 0;
        if (!is_square(rad, &s)) continue;
        const i128 by = static_cast<i128>(B) * y;
        for (int sign = 0; sign < (s == 0 ? 1 : 2); ++sign) {
            const i128 u = sign == 0 ? static_cast<i128>(s) : -static_cast<i128>(s);
            if ((u - by) % A == 0) ++count;
        }
    }
    return count;
}

}  // namespace

BoxRegion make_box(const QuaternaryForm& qf, i64 bound) {
    if (bound < 1) throw InvalidInput("box bound must be positive");
    if (bound > kMaxCurvatureBound) throw InvalidInput("box bound exceeds the supported maximum 2^31");
    return {bound, make_side(qf.fa, bound), make_side(qf.fa_prime, bound)};
}

u64 representation_count_R(const QuaternaryForm& qf, i64 bound, Budget budget, unsigned threads) {
    const BoxRegion box = make_box(qf, bound);
    const long double work = row_count(box.side_a) * (2.0L * box.side_a_prime.y_max + 1);
    budget.require(work, "quaternary representation count");
    const i64 t = qf.target();
    const auto& sa = box.side_a;
    const auto rows = static_cast<std::size_t>(2 * sa.y_max + 1);
    std::vector<u64> per_row(rows, 0);
    parallel_for(rows, threads, [&](std::size_t i) {
        const i64 y = static_cast<i64>(i) - sa.y_max;
        const auto [lo, hi] = sa.row(y);
        u64 c = 0;
        for (i64 x = lo; x <= hi; ++x) c += count_on_side(box.side_a_prime, sa.form.eval128(x, y) - t);
        per_row[i] = c;
    });
    u64 total = 0;
    for (const u64 c : per_row) total += c;
    return total;
}

u64 box_intersection(const QuaternaryForm& qf, i64 bound, unsigned threads) {
    const BoxRegion box = make_box(qf, bound);
    auto side_bits = [&](const BoxSide& side, i64 shift) {
        AtomicBitset bits(static_cast<u64>(bound));
        const auto rows = static_cast<std::size_t>(2 * side.y_max + 1);
        parallel_for(rows, threads, [&](std::size_t i) {
            const i64 y = static_cast<i64>(i) - side.y_max;
            const auto [lo, hi] = side.row(y);
            for (i64 x = lo; x <= hi; ++x) {
                if (gcd_abs(x, y) != 1) continue;
                const i128 n = side.form.eval128(x, y) - shift;
                if (n >= 1 && n <= bound) bits.set(static_cast<u64>(n));
            }
        });
        return bits;
    };
    return side_bits(box.side_a, qf.a()).count_and(side_bits(box.side_a_prime, qf.a_prime()));
}

namespace {

// Area of {u^2 + w^2 <= s} ∩ [-h, h]^2 with h^2 = X.
double disk_square_area(double s, double X) {
    if (s <= 0) return 0;
    if (s <= X) return std::numbers::pi * s;
    if (s >= 2 * X) return 4 * X;
    return s * (std::numbers::pi - 4 * std::acos(std::sqrt(X / s))) + 4 * std::sqrt(X) * std::sqrt(s - X);
}

}  // namespace

SingularIntegral singular_integral_estimate(const QuaternaryForm& qf, i64 bound, double eps, Budget budget) {
    if (!(eps > 0)) throw InvalidInput("epsilon must be positive");
    if (bound < 1) throw InvalidInput("bound must be positive");
    const double X = static_cast<double>(bound);
    const double a = std::fabs(static_cast<double>(qf.a())), ap = std::fabs(static_cast<double>(qf.a_prime()));
    const double t = static_cast<double>(qf.target());
    SingularIntegral out;
    out.ceiling = 8 * std::numbers::pi * X / (a * ap);

    auto pass = [&](int n) {
        // one quadrant of the square, by symmetry
        const double h = std::sqrt(X) / n;
        double sum = 0;
        for (int i = 0; i < n; ++i) {
            const double u = (i + 0.5) * h;
            for (int j = 0; j < n; ++j) {
                const double w = (j + 0.5) * h;
                const double s = u * u + w * w - t;
                sum += disk_square_area(s + eps, X) - disk_square_area(s - eps, X);
            }
        }
        return 4 * h * h * sum / (eps * a * ap);
    };
    constexpr int kStart = 64, kMaxGrid = 1 << 13;
    double prev = pass(kStart);
    for (int n = 2 * kStart;; n *= 2) {
        if (n > kMaxGrid) throw BudgetError("singular integral grid did not settle below 5% change");
        budget.require(static_cast<long double>(n) * n, "singular integral grid");
        const double cur = pass(n);
        const double change = prev == 0 ? (cur == 0 ? 0 : 1) : std::fabs(cur - prev) / std::fabs(prev);
        out.estimate = cur;
        out.grid = 2 * n;
        out.last_change = change;
        if (change < 0.05) break;
        prev = cur;
    }
    return out;
}

ProgressionSum progression_weighted_sum(const std::vector<i64>& selection, i64 q, i64 r, double eta) {
    if (q <= 1 || !is_squarefree(q)) throw InvalidInput("q must be squarefree and greater than 1");
    if (r < 0 || r >= q) throw InvalidInput("residue r must satisfy 0 <= r < q");
    ProgressionSum out;
    out.q = q;
    out.r = r;
    out.sum = 0;
    for (const i64 a : selection) {
        if (a == 0) throw InvalidInput("selection contains 0");
        if (((a % q) + q) % q == r) out.sum += Rational(1, a);
    }
    const double scale = eta * std::log(std::log(static_cast<double>(q))) / static_cast<double>(q);
    // log log 2 < 0, so the comparison is only meaningful for q >= 3
    out.ratio = scale > 0 ? out.sum.convert_to<double>() / scale : 0;
    return out;
}

DensityReport density_experiment(const DensityConfig& config) {
    if (config.a0_index < 1 || config.a0_index > 4) throw InvalidInput("a0 index must be in 1..4");
    if (!is_root(config.root)) throw InvalidInput("density experiment needs a root quadruple; run reduce first");
    if (config.a_hi > config.bound) throw InvalidInput("a-range must lie below X");
    DensityReport rep;
    rep.config = config;
    const unsigned threads = config.threads;
    const Quadruple a0_quad = rotate_to_front(config.root, config.a0_index);
    rep.a0 = a0_quad[0];
    if (rep.a0 == 0) throw InvalidInput("fixed curvature a0 = 0 is unsupported");
    rep.a0_form = tangency_form(a0_quad).form;

    const auto A0 = build_A0(a0_quad, config.bound, /*coprime_only=*/true, threads);
    rep.A0_size = A0.size();
    rep.selection = select_Ak(A0, config.eta, config.a_lo, config.a_hi);
    const auto members = rep.selection.members();

    const long double bytes = static_cast<long double>(members.size() + 2) * (static_cast<long double>(config.bound) / 8);
    if (bytes > 4.0L * (1ULL << 30)) throw BudgetError("density experiment would need more than 4 GiB of value sets");

    std::vector<TangencyForm> forms;
    for (const i64 a : members) {
        const auto w = tangent_witness(config.root, config.a0_index, a);
        if (!w) throw std::logic_error("no tangent circle of curvature " + std::to_string(a) + " found");
        forms.push_back(tangency_form(*w));
    }

    const auto opts = sa_options(threads, config.budget);
    std::vector<AtomicBitset> sets;
    sets.reserve(forms.size());
    rep.sa.bound = config.bound;
    rep.sa.eta = config.eta;
    for (const auto& tf : forms) {
        sets.push_back(value_bits(tf, config.bound, opts));
        rep.sa.entries.push_back(sa_entry(tf, sets.back().count(), config.bound));
    }
    finish_summary(rep.sa);

    for (std::size_t i = 0; i < forms.size(); ++i)
        for (std::size_t j = i + 1; j < forms.size(); ++j) rep.pairs.push_back({forms[i].shift, forms[j].shift, 0, 0});
    std::vector<std::pair<std::size_t, std::size_t>> index;
    for (std::size_t i = 0; i < forms.size(); ++i)
        for (std::size_t j = i + 1; j < forms.size(); ++j) index.emplace_back(i, j);
    parallel_for(index.size(), threads, [&](std::size_t n) {
        auto& p = rep.pairs[n];
        p.intersection = sets[index[n].first].count_and(sets[index[n].second]);
        const double main = static_cast<double>(config.bound) / (static_cast<double>(p.a) * static_cast<double>(p.a_prime));
        p.shape_constant = static_cast<double>(p.intersection) / (main * pair_arithmetic_factor(p.a, p.a_prime));
    });

    AtomicBitset uni(static_cast<u64>(config.bound));
    for (const auto& s : sets) uni.merge(s);

    EnumerationParams params;
    params.root = config.root;
    params.bound = config.bound;
    params.threads = threads;
    const CurvatureTally tally = tally_packing(params);

    rep.sum_sa = rep.sa.total;
    rep.sum_pairs = 0;
    for (const auto& p : rep.pairs) {
        rep.sum_pairs += p.intersection;
        rep.max_shape_constant = std::max(rep.max_shape_constant, p.shape_constant);
    }
    rep.lower_bound = static_cast<i64>(rep.sum_sa) - static_cast<i64>(rep.sum_pairs);
    rep.union_size = uni.count();
    rep.union_ratio = static_cast<double>(rep.union_size) / static_cast<double>(config.bound);
    rep.kappa = tally.distinct_count();
    rep.kappa_ratio = static_cast<double>(rep.kappa) / static_cast<double>(config.bound);
    rep.bonferroni = static_cast<i64>(rep.union_size) >= rep.lower_bound;
    rep.union_within_kappa = uni.count_and(tally.bits()) == rep.union_size;
    return rep;
}

}  // namespace apollo
