#include "apollo/layout.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>

namespace apollo {

namespace {

using cplx = std::complex<long double>;

struct Frame {
    std::array<long double, 4> k;  // curvatures
    std::array<cplx, 4> w;         // curvature * center
    std::array<int, 4> id;         // placement indices
    int last = -1;
    int depth = 0;
};

CirclePlacement place(long double k, cplx w, Curvature curvature, int depth) {
    CirclePlacement c;
    const cplx z = w / k;
    c.cx = z.real();
    c.cy = z.imag();
    c.radius = 1.0L / std::fabs(k);
    c.curvature = curvature;
    c.depth = depth;
    return c;
}

// Distance mismatch from tangency (internal when one curvature is negative).
long double tangency_gap(long double k1, cplx z1, long double k2, cplx z2) {
    const long double d = std::abs(z1 - z2);
    const long double r1 = 1.0L / std::fabs(k1), r2 = 1.0L / std::fabs(k2);
    const long double target = (k1 < 0 || k2 < 0) ? std::fabs(r1 - r2) : r1 + r2;
    return std::fabs(d - target);
}

}  // namespace

std::vector<CirclePlacement> layout_packing(const Quadruple& root, int depth) {
    if (depth < 0 || depth > kMaxLayoutDepth)
        throw InvalidInput("layout depth must be in 0.." + std::to_string(kMaxLayoutDepth));
    if (!is_descartes(root)) throw InvalidInput("not a Descartes quadruple: " + to_string(root));

    std::array<int, 4> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return root[a] < root[b]; });
    const Curvature a = root[order[0]];
    const Curvature b = root[order[1]], c = root[order[2]], d = root[order[3]];
    if (a >= 0 || b <= 0) throw InvalidInput("layout needs one negative bounding curvature and positive inner ones");

    const long double r0 = 1.0L / -a, rb = 1.0L / b, rc = 1.0L / c;
    const cplx za(0, 0);
    const cplx zb(r0 - rb, 0);
    const long double xb = zb.real();
    const long double xc = (xb * xb - (rb + rc) * (rb + rc) + (r0 - rc) * (r0 - rc)) / (2 * xb);
    const cplx zc(xc, std::sqrt(std::max(0.0L, (r0 - rc) * (r0 - rc) - xc * xc)));

    // fourth circle: w_d = sum +- 2 sqrt(pairwise), pick the tangent candidate
    const cplx wa = static_cast<long double>(a) * za, wb = static_cast<long double>(b) * zb,
               wc = static_cast<long double>(c) * zc;
    const cplx root_term = 2.0L * std::sqrt(wa * wb + wa * wc + wb * wc);
    const long double kd = d;
    cplx best_w;
    long double best_gap = std::numeric_limits<long double>::infinity();
    for (const cplx wd : {wa + wb + wc + root_term, wa + wb + wc - root_term}) {
        const cplx zd = wd / kd;
        const long double gap = tangency_gap(kd, zd, a, za) + tangency_gap(kd, zd, b, zb) + tangency_gap(kd, zd, c, zc);
        if (gap < best_gap) {
            best_gap = gap;
            best_w = wd;
        }
    }

    // placements in the root's own coordinate order
    std::array<long double, 4> k_sorted{static_cast<long double>(a), static_cast<long double>(b),
                                        static_cast<long double>(c), kd};
    std::array<cplx, 4> w_sorted{wa, wb, wc, best_w};
    Frame start;
    std::vector<CirclePlacement> out;
    for (int i = 0; i < 4; ++i) {
        const int p = static_cast<int>(std::find(order.begin(), order.end(), i) - order.begin());
        start.k[i] = k_sorted[p];
        start.w[i] = w_sorted[p];
        start.id[i] = i;
        if (p == 0) {
            CirclePlacement outer;
            outer.radius = r0;
            outer.curvature = a;
            out.push_back(outer);
        } else {
            out.push_back(place(k_sorted[p], w_sorted[p], root[i], 0));
        }
    }
    for (int i = 0; i < 4; ++i) {
        int n = 0;
        for (int j = 0; j < 4; ++j)
            if (j != i) out[i].tangent_to[n++] = j;
    }

    std::vector<Frame> frontier{start};
    for (int level = 1; level <= depth; ++level) {
        std::vector<Frame> next;
        next.reserve(frontier.size() * 3);
        for (const Frame& f : frontier) {
            const long double ks = f.k[0] + f.k[1] + f.k[2] + f.k[3];
            const cplx ws = f.w[0] + f.w[1] + f.w[2] + f.w[3];
            for (int i = 0; i < 4; ++i) {
                if (i == f.last) continue;
                Frame child = f;
                child.k[i] = 2 * (ks - f.k[i]) - f.k[i];
                child.w[i] = 2.0L * (ws - f.w[i]) - f.w[i];
                child.last = i;
                child.depth = level;
                CirclePlacement cp = place(child.k[i], child.w[i], std::llround(child.k[i]), level);
                int n = 0;
                for (int j = 0; j < 4; ++j)
                    if (j != i) cp.tangent_to[n++] = f.id[j];
                child.id[i] = static_cast<int>(out.size());
                out.push_back(cp);
                next.push_back(child);
            }
        }
        frontier.swap(next);
    }
    return out;
}

std::string render_svg(const std::vector<CirclePlacement>& circles) {
    long double scale = 1;
    for (const auto& c : circles)
        if (c.curvature < 0) scale = 1.0L / c.radius;
    std::string svg =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"-1 -1 2 2\">\n"
        "<g fill=\"none\" stroke=\"black\" stroke-width=\"0.002\">\n";
    char line[192];
    for (const auto& c : circles) {
        // SVG y axis points down; mirror so the picture matches the math frame
        std::snprintf(line, sizeof line, "<circle cx=\"%.9Lf\" cy=\"%.9Lf\" r=\"%.9Lf\" data-curvature=\"%lld\"/>\n",
                      c.cx * scale, -c.cy * scale + 0.0L, c.radius * scale, static_cast<long long>(c.curvature));
        svg += line;
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

}  // namespace apollo
