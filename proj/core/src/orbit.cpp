#include "apollo/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "apollo/parallel.hpp"

namespace apollo {

namespace {

struct Node {
    Quadruple q;
    int last;  // 0-based index of the generator that produced q, -1 at the start
    int depth;
};

bool allowed(const EnumerationParams& p, int i) { return !p.fixed_index || *p.fixed_index != i + 1; }

[[noreturn]] void monotonicity_failure(const Quadruple& q, int i) {
    throw std::logic_error("traversal lowered coordinate " + std::to_string(i + 1) + " of " + to_string(q));
}

// Children of `node` that stay within the bound, in generator order. Every
// coordinate of an expanded node is <= bound <= 2^31, so 2*sum - 3*x_i fits
// comfortably in 64 bits.
template <class F>
void for_each_child(const EnumerationParams& p, const Node& node, F&& f) {
    if (p.max_depth && node.depth >= *p.max_depth) return;
    const i64 s = node.q[0] + node.q[1] + node.q[2] + node.q[3];
    for (int i = 0; i < 4; ++i) {
        if (i == node.last || !allowed(p, i)) continue;
        const i64 nv = 2 * s - 3 * node.q[i];
        if (nv < node.q[i]) monotonicity_failure(node.q, i);
        if (nv > p.bound) continue;
        f(i, nv);
    }
}

// Circles of the starting quadruple that count toward the tally.
template <class F>
void for_each_start_circle(const EnumerationParams& p, F&& f) {
    for (int i = 0; i < 4; ++i)
        if (allowed(p, i)) f(p.root[i]);
}

}  // namespace

void validate(const EnumerationParams& p) {
    if (p.bound < 1) throw InvalidInput("curvature bound must be positive");
    if (p.bound > kMaxCurvatureBound)
        throw InvalidInput("curvature bound " + std::to_string(p.bound) + " exceeds the supported maximum 2^31");
    if (p.fixed_index && (*p.fixed_index < 1 || *p.fixed_index > 4))
        throw InvalidInput("fixed index must be in 1..4");
    if (p.max_depth && *p.max_depth < 0) throw InvalidInput("max depth must be non-negative");
    if (!is_descartes(p.root)) throw InvalidInput("not a Descartes quadruple: " + to_string(p.root));
    if (p.fixed_index) {
        if (reduce_in_suborbit(p.root, *p.fixed_index) != p.root)
            throw InvalidInput("starting quadruple is not reduced for the suborbit; call reduce_in_suborbit first");
    } else if (!is_root(p.root)) {
        throw InvalidInput("root quadruple " + to_string(p.root) + " is not reduced; call reduce_to_root first");
    }
    for (int i = 0; i < 4; ++i)
        if (allowed(p, i) && p.root[i] > p.bound)
            throw InvalidInput("curvature bound " + std::to_string(p.bound) + " is below root coordinate " +
                               std::to_string(p.root[i]));
}

void enumerate_packing(const EnumerationParams& params, const std::function<void(const Emission&)>& visit) {
    validate(params);
    std::vector<Node> stack{{params.root, -1, 0}};
    while (!stack.empty()) {
        const Node node = stack.back();
        stack.pop_back();
        // push in reverse so generators are visited in ascending order
        Node children[4];
        int n = 0;
        for_each_child(params, node, [&](int i, i64 nv) {
            visit(Emission{node.q, node.depth, i + 1, nv});
            Node child{node.q, i, node.depth + 1};
            child.q[i] = nv;
            children[n++] = child;
        });
        while (n > 0) stack.push_back(children[--n]);
    }
}

CurvatureTally::CurvatureTally(i64 bound) : bound_(bound), bits_(static_cast<u64>(bound)) {}

CurvatureTally tally_packing(const EnumerationParams& params) {
    validate(params);
    CurvatureTally tally(params.bound);

    u64 seed_count = 0;
    for_each_start_circle(params, [&](Curvature c) {
        if (c >= 1 && c <= params.bound) {
            tally.insert(c);
            ++seed_count;
        } else if (c < 0) {
            tally.bounding_curvatures.push_back(c);
        }
    });

    // breadth-first seeding until there is enough independent work
    const std::size_t target = 256 * std::max(1u, params.threads);
    std::vector<Node> frontier{{params.root, -1, 0}};
    while (!frontier.empty() && frontier.size() < target) {
        std::vector<Node> next;
        for (const Node& node : frontier) {
            for_each_child(params, node, [&](int i, i64 nv) {
                tally.insert(nv);
                ++seed_count;
                Node child{node.q, i, node.depth + 1};
                child.q[i] = nv;
                next.push_back(child);
            });
        }
        frontier.swap(next);
    }

    std::vector<u64> counts(frontier.size(), 0);
    parallel_for(frontier.size(), params.threads, [&](std::size_t idx) {
        std::vector<Node> stack{frontier[idx]};
        u64 local = 0;
        while (!stack.empty()) {
            const Node node = stack.back();
            stack.pop_back();
            for_each_child(params, node, [&](int i, i64 nv) {
                tally.insert(nv);
                ++local;
                Node child{node.q, i, node.depth + 1};
                child.q[i] = nv;
                stack.push_back(child);
            });
        }
        counts[idx] = local;
    });
    u64 total = seed_count;
    for (u64 c : counts) total += c;
    tally.add_multiplicity(total);
    return tally;
}

u64 kappa(const EnumerationParams& params) {
    EnumerationParams p = params;
    p.mode = CountMode::distinct;
    return tally_packing(p).distinct_count();
}

u64 count_multiplicity(const EnumerationParams& params) {
    EnumerationParams p = params;
    p.mode = CountMode::multiplicity;
    return tally_packing(p).multiplicity_count();
}

Quadruple reduce_in_suborbit(const Quadruple& v, int fixed_index) {
    if (fixed_index < 1 || fixed_index > 4) throw InvalidInput("fixed index must be in 1..4");
    Quadruple cur = v;
    while (true) {
        const i64 s = cur.sum();
        int best = -1;
        for (int i = 0; i < 4; ++i) {
            if (i == fixed_index - 1) continue;
            if (2 * static_cast<i128>(cur[i]) > s && (best < 0 || cur[i] > cur[best])) best = i;
        }
        if (best < 0) return cur;
        cur = reflect(cur, best + 1);
        if (cur.sum() <= 0) throw InvalidInput("suborbit reduction left the positive cone from " + to_string(v));
    }
}

std::vector<i64> tangency_curvatures(const Quadruple& v, int fixed_index, i64 bound, unsigned threads) {
    if (fixed_index < 1 || fixed_index > 4) throw InvalidInput("fixed index must be in 1..4");
    if (!is_descartes(v)) throw InvalidInput("not a Descartes quadruple: " + to_string(v));
    if (v[fixed_index - 1] == 0)
        throw InvalidInput("fixed curvature must be nonzero (tangency forms need a0 != 0)");
    if (bound < 1) return {};
    EnumerationParams p;
    p.root = reduce_in_suborbit(v, fixed_index);
    p.fixed_index = fixed_index;
    p.threads = threads;
    // circles of the reduced quadruple above the bound cannot be extended below it
    i64 top = 0;
    for (int i = 0; i < 4; ++i)
        if (i != fixed_index - 1) top = std::max(top, p.root[i]);
    p.bound = std::max(bound, top);
    auto values = tally_packing(p).values();
    std::erase_if(values, [&](i64 c) { return c > bound; });
    return values;
}

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& n) {
    if (x.size() != n.size() || x.size() < 3) throw InvalidInput("power-law fit needs at least three points");
    const std::size_t m = x.size();
    double sx = 0, sy = 0;
    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (x[i] <= 0 || n[i] <= 0) throw InvalidInput("power-law fit needs positive data");
        if (i > 0 && !(x[i] > x[i - 1])) throw InvalidInput("power-law fit needs strictly ascending x");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(n[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0) throw InvalidInput("degenerate power-law fit");
    PowerFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / m);
    return fit;
}

DeltaFit delta_fit(const Quadruple& root, const std::vector<i64>& bounds, unsigned threads) {
    if (bounds.size() < 3) throw InvalidInput("delta fit needs at least three bounds");
    DeltaFit out;
    std::vector<double> xs, ns;
    for (i64 b : bounds) {
        EnumerationParams p;
        p.root = root;
        p.bound = b;
        p.threads = threads;
        const u64 n = count_multiplicity(p);
        out.bounds.push_back(b);
        out.counts.push_back(n);
        xs.push_back(static_cast<double>(b));
        ns.push_back(static_cast<double>(n));
    }
    out.fit = fit_power_law(xs, ns);
    return out;
}

}  // namespace apollo
