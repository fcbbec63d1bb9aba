#pragma once

// Enumeration of Apollonian orbits and A_i suborbits up to a curvature bound.

#include <functional>
#include <optional>
#include <vector>

#include "apollo/bitset.hpp"
#include "apollo/descartes.hpp"

namespace apollo {

/// Largest accepted curvature bound; keeps the tally at or below 256 MiB.
inline constexpr i64 kMaxCurvatureBound = i64{1} << 31;

enum class CountMode { distinct, multiplicity };

struct EnumerationParams {
    Quadruple root;
    i64 bound = 0;
    CountMode mode = CountMode::distinct;
    std::optional<int> fixed_index;  // 1..4; restricts to the suborbit A_i
    std::optional<int> max_depth;    // word-length cap, unlimited when empty
    unsigned threads = 1;
};

/// One newly created circle: `generator` (1..4) applied to `parent` replaces
/// coordinate `generator` by `curvature`.
struct Emission {
    const Quadruple& parent;
    int parent_depth;
    int generator;
    Curvature curvature;
};

/// Throws InvalidInput unless the params describe a reduced starting point
/// and a bound in [max positive coordinate, kMaxCurvatureBound].
void validate(const EnumerationParams& params);

/// Sequential depth-first traversal of all non-backtracking words whose new
/// curvatures stay <= bound. Calls `visit` once per created circle, in a
/// deterministic order. Each step from the starting point never lowers the
/// replaced coordinate; a violation raises std::logic_error.
void enumerate_packing(const EnumerationParams& params, const std::function<void(const Emission&)>& visit);

/// Distinct positive curvatures <= bound plus the circle count (multiplicity).
class CurvatureTally {
  public:
    explicit CurvatureTally(i64 bound);

    i64 bound() const { return bound_; }
    void insert(Curvature c) { bits_.set(static_cast<u64>(c)); }
    bool contains(Curvature c) const { return c >= 1 && c <= bound_ && bits_.test(static_cast<u64>(c)); }
    u64 distinct_count() const { return bits_.count(); }
    u64 multiplicity_count() const { return multiplicity_; }
    void add_multiplicity(u64 n) { multiplicity_ += n; }
    std::vector<i64> values() const { return bits_.to_vector<i64>(1); }
    const AtomicBitset& bits() const { return bits_; }

    /// Negative curvatures of the starting quadruple, reported separately.
    std::vector<Curvature> bounding_curvatures;

  private:
    i64 bound_;
    AtomicBitset bits_;
    u64 multiplicity_ = 0;
};

/// Parallel traversal filling a tally. The result does not depend on
/// params.threads.
CurvatureTally tally_packing(const EnumerationParams& params);

/// Number of distinct positive integers <= bound occurring as curvatures.
u64 kappa(const EnumerationParams& params);

/// Number of circles of positive curvature <= bound (N_P).
u64 count_multiplicity(const EnumerationParams& params);

/// Applies allowed generators (all but `fixed_index`) while one lowers the
/// coordinate sum. The result starts the monotone A_i traversal.
Quadruple reduce_in_suborbit(const Quadruple& v, int fixed_index);

/// Distinct positive curvatures <= bound in coordinates other than i over the
/// A_i suborbit of v, i.e. curvatures of circles tangent to circle i.
std::vector<i64> tangency_curvatures(const Quadruple& v, int fixed_index, i64 bound, unsigned threads = 1);

struct PowerFit {
    double slope = 0;
    double intercept = 0;
    double residual = 0;  // root-mean-square of log residuals
};

/// Least-squares slope of log n against log x.
PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& n);

struct DeltaFit {
    std::vector<i64> bounds;
    std::vector<u64> counts;
    PowerFit fit;
};

/// Fits N_P(X) ~ c X^delta over ascending bounds (at least three).
DeltaFit delta_fit(const Quadruple& root, const std::vector<i64>& bounds, unsigned threads = 1);

}  // namespace apollo
