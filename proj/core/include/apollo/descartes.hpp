#pragma once

// Descartes quadruples and the Apollonian group generators.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apollo/arith.hpp"

namespace apollo {

using Curvature = i64;

/// Four curvatures of mutually tangent circles, stored in circle order
/// (never sorted implicitly). The bounding circle carries a negative value.
struct Quadruple {
    std::array<Curvature, 4> x{};

    Curvature& operator[](std::size_t i) { return x[i]; }
    Curvature operator[](std::size_t i) const { return x[i]; }

    i64 sum() const;
    Curvature max() const;

    friend bool operator==(const Quadruple&, const Quadruple&) = default;
    friend auto operator<=>(const Quadruple&, const Quadruple&) = default;
};

/// Parses "a,b,c,d" (signed decimal, optional spaces).
Quadruple parse_quadruple(std::string_view text);
std::string to_string(const Quadruple& q);

/// 2(x1^2+x2^2+x3^2+x4^2) - (x1+x2+x3+x4)^2, exact. Throws ArithmeticError
/// when the value leaves the 64-bit range.
i64 evaluate_descartes(const Quadruple& q);

inline bool is_descartes(const Quadruple& q) { return evaluate_descartes(q) == 0; }

/// Throws InvalidInput for the all-zero vector.
bool is_primitive(const Quadruple& q);

struct FourthRoots {
    std::vector<Curvature> roots;  // ascending, distinct
    bool double_root = false;      // single root of multiplicity two
};

/// Every integer t with Q(x1,x2,x3,t) = 0.
FourthRoots solve_fourth(Curvature x1, Curvature x2, Curvature x3);

/// 4x4 integer matrix acting on column quadruples.
struct GroupElement {
    std::array<std::array<i64, 4>, 4> m{};

    static GroupElement identity();
    i64 determinant() const;
    GroupElement operator*(const GroupElement& rhs) const;
    friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

/// Gram matrix of Q: 2I - J (all-ones J).
GroupElement descartes_gram();

/// S_i for i in 1..4: identity except row i = (2,2,2,2) with -1 on the diagonal.
GroupElement generator(int i);

/// True when g^T * Gram * g == Gram.
bool preserves_descartes(const GroupElement& g);

Quadruple apply(const GroupElement& g, const Quadruple& q);

/// S_i applied directly: replaces x_i by 2(sum of the other three) - x_i.
Quadruple reflect(const Quadruple& q, int i);

/// Applies the word left to right: word {i, j} yields S_j * S_i * q.
Quadruple apply_word(const std::vector<int>& word, Quadruple q);

/// Generator indices (1..4) in application order, no two adjacent equal.
struct ReductionTrace {
    std::vector<int> word;
};

struct RootReduction {
    Quadruple root;        // sorted ascending
    ReductionTrace trace;  // indices relabelled to the sorted coordinate order
};

/// True when x1 <= 0 <= x2 <= x3 <= x4 and no generator decreases the sum.
bool is_root(const Quadruple& q);

/// Walks a quadruple down to the root of its packing by repeatedly applying
/// the generator that replaces the largest coordinate while that lowers the
/// coordinate sum (ties to the smallest index).
///
/// The returned word is expressed in the coordinate order of the sorted root,
/// so applying the reversed word to the root yields a coordinate permutation
/// of the input. Requires Q(v) = 0 and, with `require_primitive`, gcd 1.
RootReduction reduce_to_root(const Quadruple& v, bool require_primitive = true);

}  // namespace apollo
