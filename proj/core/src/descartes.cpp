#include "apollo/descartes.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace apollo {

i64 Quadruple::sum() const {
    i64 s = 0;
    for (auto v : x) s = checked::add(s, v);
    return s;
}

Curvature Quadruple::max() const { return *std::max_element(x.begin(), x.end()); }

Quadruple parse_quadruple(std::string_view text) {
    Quadruple q;
    std::size_t idx = 0;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        std::string_view field = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
        while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
        if (idx >= 4) throw InvalidInput("quadruple must have exactly four entries: '" + std::string(text) + "'");
        if (!field.empty() && field.front() == '+') field.remove_prefix(1);
        i64 v = 0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
            throw InvalidInput("malformed quadruple entry '" + std::string(field) + "'");
        q.x[idx++] = v;
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (idx != 4) throw InvalidInput("quadruple must have exactly four entries: '" + std::string(text) + "'");
    return q;
}

std::string to_string(const Quadruple& q) {
    return std::to_string(q[0]) + "," + std::to_string(q[1]) + "," + std::to_string(q[2]) + "," +
           std::to_string(q[3]);
}

i64 evaluate_descartes(const Quadruple& q) {
    i128 squares = 0;
    i128 sum = 0;
    for (auto v : q.x) {
        squares += static_cast<i128>(v) * v;
        sum += v;
    }
    // each term fits in 128 bits for 64-bit inputs
    return checked::narrow(2 * squares - sum * sum);
}

bool is_primitive(const Quadruple& q) {
    i64 g = 0;
    for (auto v : q.x) g = gcd_abs(g, v);
    if (g == 0) throw InvalidInput("all-zero quadruple has no gcd");
    return g == 1;
}

FourthRoots solve_fourth(Curvature x1, Curvature x2, Curvature x3) {
    // t = s +- 2 sqrt(x1x2 + x1x3 + x2x3)
    const i128 s = static_cast<i128>(x1) + x2 + x3;
    const i128 radicand = static_cast<i128>(x1) * x2 + static_cast<i128>(x1) * x3 + static_cast<i128>(x2) * x3;
    FourthRoots out;
    u64 r = 0;
    if (!is_square(radicand, &r)) return out;
    if (r == 0) {
        out.roots.push_back(checked::narrow(s));
        out.double_root = true;
        return out;
    }
    out.roots.push_back(checked::narrow(s - 2 * static_cast<i128>(r)));
    out.roots.push_back(checked::narrow(s + 2 * static_cast<i128>(r)));
    return out;
}

GroupElement GroupElement::identity() {
    GroupElement g;
    for (int i = 0; i < 4; ++i) g.m[i][i] = 1;
    return g;
}

i64 GroupElement::determinant() const {
    // Laplace expansion on 128-bit intermediates
    auto det3 = [&](int skip_row, int skip_col) {
        i128 a[3][3];
        for (int r = 0, rr = 0; r < 4; ++r) {
            if (r == skip_row) continue;
            for (int c = 0, cc = 0; c < 4; ++c) {
                if (c == skip_col) continue;
                a[rr][cc++] = m[r][c];
            }
            ++rr;
        }
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    i128 d = 0;
    for (int c = 0; c < 4; ++c) d += (c % 2 == 0 ? 1 : -1) * static_cast<i128>(m[0][c]) * det3(0, c);
    return checked::narrow(d);
}

GroupElement GroupElement::operator*(const GroupElement& rhs) const {
    GroupElement out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            i128 acc = 0;
            for (int k = 0; k < 4; ++k) acc += static_cast<i128>(m[i][k]) * rhs.m[k][j];
            out.m[i][j] = checked::narrow(acc);
        }
    return out;
}

GroupElement descartes_gram() {
    GroupElement g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g.m[i][j] = (i == j) ? 1 : -1;
    return g;
}

GroupElement generator(int i) {
    if (i < 1 || i > 4) throw InvalidInput("generator index must be in 1..4, got " + std::to_string(i));
    GroupElement g = GroupElement::identity();
    for (int c = 0; c < 4; ++c) g.m[i - 1][c] = (c == i - 1) ? -1 : 2;
    return g;
}

bool preserves_descartes(const GroupElement& g) {
    GroupElement t;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t.m[i][j] = g.m[j][i];
    const auto gram = descartes_gram();
    return t * gram * g == gram;
}

Quadruple apply(const GroupElement& g, const Quadruple& q) {
    Quadruple out;
    for (int i = 0; i < 4; ++i) {
        i128 acc = 0;
        for (int k = 0; k < 4; ++k) acc += static_cast<i128>(g.m[i][k]) * q[k];
        out[i] = checked::narrow(acc);
    }
    return out;
}

Quadruple reflect(const Quadruple& q, int i) {
    if (i < 1 || i > 4) throw InvalidInput("generator index must be in 1..4, got " + std::to_string(i));
    Quadruple out = q;
    const i64 others = checked::sub(q.sum(), q[i - 1]);
    out[i - 1] = checked::sub(checked::mul(2, others), q[i - 1]);
    return out;
}

Quadruple apply_word(const std::vector<int>& word, Quadruple q) {
    for (int i : word) q = reflect(q, i);
    return q;
}

namespace {

// Index (0-based) of the generator that most lowers the coordinate sum, or -1
// when no generator lowers it. Replacing x_i lowers the sum by 4x_i - 2*sum,
// so the best choice is the largest coordinate.
int best_descent(const Quadruple& q) {
    const i64 s = q.sum();
    int best = -1;
    for (int i = 0; i < 4; ++i) {
        if (2 * static_cast<i128>(q[i]) > s && (best < 0 || q[i] > q[best])) best = i;
    }
    return best;
}

}  // namespace

bool is_root(const Quadruple& q) {
    if (!(q[0] <= 0 && 0 <= q[1] && q[1] <= q[2] && q[2] <= q[3])) return false;
    return best_descent(q) < 0;
}

RootReduction reduce_to_root(const Quadruple& v, bool require_primitive) {
    if (!is_descartes(v)) throw InvalidInput("not a Descartes quadruple: " + to_string(v));
    if (require_primitive && !is_primitive(v)) throw InvalidInput("quadruple is not primitive: " + to_string(v));
    if (v.sum() <= 0 && v != Quadruple{})
        throw InvalidInput("coordinate sum must be positive (negatively oriented quadruple): " + to_string(v));

    Quadruple cur = v;
    std::vector<int> word;
    for (int i = best_descent(cur); i >= 0; i = best_descent(cur)) {
        cur = reflect(cur, i + 1);
        word.push_back(i + 1);
        if (cur.sum() <= 0) throw InvalidInput("reduction left the positive cone from " + to_string(v));
    }

    // sort the reduced quadruple; relabel the word through the same permutation
    std::array<int, 4> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return cur[a] < cur[b]; });
    std::array<int, 4> position{};
    RootReduction out;
    for (int p = 0; p < 4; ++p) {
        out.root[p] = cur[order[p]];
        position[order[p]] = p;
    }
    out.trace.word.reserve(word.size());
    for (int i : word) out.trace.word.push_back(position[i - 1] + 1);
    return out;
}

}  // namespace apollo
