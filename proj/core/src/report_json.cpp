#include "apollo/report_json.hpp"

#include <cstdio>

namespace apollo {

std::string decimal(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s = buf;
    if (s.rfind("-0.", 0) == 0 && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

json to_json(const Quadruple& q) { return json::array({q[0], q[1], q[2], q[3]}); }

json to_json(const BinaryQuadraticForm& f) {
    return {{"A", f.a()}, {"2B", f.b()}, {"C", f.c()}, {"disc", f.disc()}, {"text", to_string(f)}};
}

json to_json(const Rational& r, int digits) { return {{"exact", to_string(r)}, {"decimal", to_decimal(r, digits)}}; }

json to_json(const TangencyForm& tf) {
    return {{"form", to_json(tf.form)}, {"shift", tf.shift}, {"source", to_json(tf.source)}};
}

json to_json(const CurvatureTally& tally) {
    return {{"X", tally.bound()},
            {"kappa", tally.distinct_count()},
            {"N", tally.multiplicity_count()},
            {"ratio", decimal(static_cast<double>(tally.distinct_count()) / static_cast<double>(tally.bound()))},
            {"bounding_curvatures", tally.bounding_curvatures}};
}

json to_json(const DeltaFit& fit) {
    json points = json::array();
    for (std::size_t i = 0; i < fit.bounds.size(); ++i) points.push_back({{"X", fit.bounds[i]}, {"N", fit.counts[i]}});
    return {{"points", points},
            {"slope", decimal(fit.fit.slope)},
            {"intercept", decimal(fit.fit.intercept)},
            {"residual", decimal(fit.fit.residual)}};
}

json to_json(const ChangeOfVariablesReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    json out = {{"source", to_json(rep.source)},
                {"a0", rep.a0},
                {"y", rep.y},
                {"g_y", rep.g_value},
                {"A", rep.A},
                {"B", rep.B},
                {"C", rep.C},
                {"B2_minus_AC", rep.b2_minus_ac},
                {"checks", checks},
                {"ok", rep.ok()}};
    if (const auto* f = rep.first_failure()) out["first_failure"] = f->name;
    return out;
}

namespace {

json matrix_json(const RatMatrix3& m) {
    json rows = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const auto& v : row) r.push_back(to_string(v));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

json to_json(const SpinCheckReport& rep) {
    return {{"pairs", rep.pairs},
            {"homomorphism_failures", rep.homomorphism_failures},
            {"substitution_anti_homomorphism_failures", rep.anti_homomorphism_failures},
            {"delta_failures", rep.delta_failures},
            {"determinant_failures", rep.determinant_failures},
            {"sign_failures", rep.sign_failures},
            {"lambda2_images", json::array({matrix_json(rep.lambda2_images[0]), matrix_json(rep.lambda2_images[1])})},
            {"lambda2_integral", rep.lambda2_integral},
            {"lambda2_preserve_delta", rep.lambda2_preserve_delta},
            {"lambda2_in_even_subgroup", rep.lambda2_in_even_subgroup},
            {"ok", rep.ok()}};
}

json to_json(const SingularSeriesReport& rep) {
    json entries = json::array();
    for (const auto& e : rep.entries)
        entries.push_back({{"p", e.p},
                           {"k", e.k},
                           {"sigma", to_json(e.sigma)},
                           {"case", to_string(e.prime_case)},
                           {"method", to_string(e.method)}});
    return {{"a", rep.a},
            {"a_prime", rep.a_prime},
            {"target", rep.target},
            {"p_max", rep.p_max},
            {"k", rep.k},
            {"primes", entries},
            {"truncated_product", to_json(rep.truncated_product)},
            {"ceiling", decimal(rep.ceiling)},
            {"constant", decimal(rep.constant)},
            {"within_ceiling", rep.within_ceiling}};
}

json to_json(const SingularIntegral& si) {
    return {{"estimate", decimal(si.estimate)},
            {"ceiling", decimal(si.ceiling)},
            {"grid", si.grid},
            {"last_change", decimal(si.last_change)}};
}

json to_json(const DyadicSelection& sel) {
    json levels = json::array();
    for (const auto& l : sel.levels)
        levels.push_back({{"k", l.k},
                          {"window_length", decimal(l.window_length)},
                          {"window_count", l.window_count},
                          {"selected", l.selected},
                          {"counts", l.counts},
                          {"lo", decimal(l.lo)},
                          {"hi", decimal(l.hi)},
                          {"members", l.members},
                          {"average", decimal(l.average)},
                          {"pigeonhole_ratio", decimal(l.pigeonhole_ratio)}});
    json out = {{"eta", decimal(sel.eta)}, {"a_lo", sel.a_lo}, {"a_hi", sel.a_hi}, {"levels", levels}};
    if (!sel.warning.empty()) out["warning"] = sel.warning;
    return out;
}

json to_json(const SaSummary& sa) {
    json entries = json::array();
    for (const auto& e : sa.entries)
        entries.push_back({{"a", e.a},
                           {"witness", to_json(e.witness)},
                           {"form", to_string(e.form)},
                           {"size", e.size},
                           {"floor_bound", e.floor_bound}});
    return {{"X", sa.bound},
            {"eta", decimal(sa.eta)},
            {"entries", entries},
            {"total", sa.total},
            {"max_size", sa.max_size},
            {"ratio", decimal(sa.ratio)},
            {"lower_constant", decimal(kSaLowerConstant)}};
}

json to_json(const ProgressionSum& ps) {
    return {{"q", ps.q}, {"r", ps.r}, {"sum", to_json(ps.sum)}, {"ratio", decimal(ps.ratio)}};
}

json to_json(const DensityReport& rep) {
    json pairs = json::array();
    for (const auto& p : rep.pairs)
        pairs.push_back({{"a", p.a},
                         {"a_prime", p.a_prime},
                         {"intersection", p.intersection},
                         {"shape_constant", decimal(p.shape_constant)}});
    return {{"root", to_json(rep.config.root)},
            {"a0_index", rep.config.a0_index},
            {"a0", rep.a0},
            {"a0_form", to_string(rep.a0_form)},
            {"X", rep.config.bound},
            {"A0_size", rep.A0_size},
            {"A0_quadrant", "nonneg"},
            {"A0_coprime", true},
            {"S_quadrant", "full"},
            {"S_coprime", true},
            {"selection", to_json(rep.selection)},
            {"S", to_json(rep.sa)},
            {"pairs", pairs},
            {"sum_S", rep.sum_sa},
            {"sum_pairs", rep.sum_pairs},
            {"lower_bound", rep.lower_bound},
            {"union", rep.union_size},
            {"union_ratio", decimal(rep.union_ratio)},
            {"kappa", rep.kappa},
            {"kappa_ratio", decimal(rep.kappa_ratio)},
            {"max_shape_constant", decimal(rep.max_shape_constant)},
            {"bonferroni", rep.bonferroni},
            {"union_within_kappa", rep.union_within_kappa}};
}

}  // namespace apollo
