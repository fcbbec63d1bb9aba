// apollo: command-line front end for the Apollonian packing library.
//
// Every subcommand validates its flags before computing, writes one artifact
// (JSON by default) to --out or stdout, and exits with
//   0 ok, 2 usage or invalid input, 3 budget exceeded, 4 arithmetic overflow.
// Failures print a single line "apollo: error[<kind>]: <reason>" on stderr.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apollo/density.hpp"
#include "apollo/descartes.hpp"
#include "apollo/forms.hpp"
#include "apollo/layout.hpp"
#include "apollo/local_density.hpp"
#include "apollo/number_theory.hpp"
#include "apollo/orbit.hpp"
#include "apollo/parallel.hpp"
#include "apollo/report_json.hpp"
#include "apollo/spin.hpp"

using namespace apollo;

namespace {

enum class Format { json, csv, svg, text };

struct Common {
    unsigned threads = 0;  // 0: APOLLO_THREADS or hardware concurrency
    u64 budget_millions = 4000;
    std::string out;
    std::string format;

    unsigned thread_count() const { return threads ? threads : default_threads(); }
    Budget budget() const { return Budget::millions(budget_millions); }
};

// Flag values as given, keyed by flag name; threads are left out so the
// config is identical across thread counts.
using Config = std::map<std::string, std::string>;

struct Command {
    CLI::App* app = nullptr;
    Common common;
    Config config;
    std::vector<std::string> formats;  // first entry is the default
    std::function<void(Command&)> run;
};

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

void write_output(const Common& common, const std::string& text) {
    if (common.out.empty() || common.out == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream f(common.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + common.out);
    f << text;
    if (!f) throw std::runtime_error("failed writing " + common.out);
}

Format format_of(const Command& cmd) {
    const std::string f = cmd.common.format.empty() ? cmd.formats.front() : cmd.common.format;
    if (std::find(cmd.formats.begin(), cmd.formats.end(), f) == cmd.formats.end())
        throw UsageError("format '" + f + "' is not available for " + cmd.app->get_name());
    if (f == "json") return Format::json;
    if (f == "csv") return Format::csv;
    if (f == "svg") return Format::svg;
    return Format::text;
}

void emit_json(const Command& cmd, json payload) {
    json cfg = {{"command", cmd.app->get_name()}, {"options", cmd.config}};
    payload["config"] = cfg;
    write_output(cmd.common, payload.dump(2) + "\n");
}

std::vector<i64> parse_int_list(const std::string& text, const char* what) {
    std::vector<i64> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stoll(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string("malformed ") + what + " entry '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string("empty ") + what);
    return out;
}

// Registers a subcommand with the shared flags; `options` adds its own.
Command& add_command(std::vector<std::unique_ptr<Command>>& cmds, CLI::App& app, const std::string& name,
                     const std::string& description, std::vector<std::string> formats) {
    auto cmd = std::make_unique<Command>();
    cmd->app = app.add_subcommand(name, description);
    cmd->formats = std::move(formats);
    std::string fmts;
    for (const auto& f : cmd->formats) fmts += (fmts.empty() ? "" : "|") + f;
    cmd->app->add_option("--threads", cmd->common.threads, "worker threads (overrides APOLLO_THREADS)")
        ->check(CLI::Range(1u, 4096u));
    cmd->app->add_option("--budget", cmd->common.budget_millions, "work cap in units of 10^6 inner iterations")
        ->check(CLI::Range(u64{1}, u64{1'000'000'000}));
    cmd->app->add_option("--out", cmd->common.out, "output path (stdout when omitted)");
    cmd->app->add_option("--format", cmd->common.format, fmts);
    cmds.push_back(std::move(cmd));
    return *cmds.back();
}

// Adds an option whose raw text is recorded in the config.
template <class T>
CLI::Option* opt(Command& cmd, const std::string& flag, T& target, const std::string& help, bool required = false) {
    auto* o = cmd.app->add_option(flag, target, help);
    if (required) o->required();
    return o;
}

void record(Command& cmd) {
    for (const CLI::Option* o : cmd.app->get_options()) {
        const std::string name = o->get_name(false, true);
        if (name == "--threads" || name == "--help" || name == "--out" || o->count() == 0) continue;
        std::string key = name;
        while (!key.empty() && key.front() == '-') key.erase(0, 1);
        if (o->get_type_size() == 0) {
            cmd.config[key] = "true";
            continue;
        }
        std::string value;
        for (const auto& r : o->results()) value += (value.empty() ? "" : ",") + r;
        cmd.config[key] = value;
    }
}

Quadruple quad(const std::string& text) { return parse_quadruple(text); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Apollonian packings: orbits, tangency forms and density counts"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "show help for every subcommand");
    std::vector<std::unique_ptr<Command>> cmds;

    // reduce
    std::string quadruple_text;
    bool allow_imprimitive = false;
    {
        auto& c = add_command(cmds, app, "reduce", "reduce a Descartes quadruple to its root", {"text", "json"});
        opt(c, "--quadruple", quadruple_text, "comma-separated curvatures", true);
        c.app->add_flag("--allow-imprimitive", allow_imprimitive, "skip the gcd = 1 requirement");
        c.run = [&](Command& cmd) {
            const auto red = reduce_to_root(quad(quadruple_text), !allow_imprimitive);
            if (format_of(cmd) == Format::json) {
                emit_json(cmd, {{"input", to_json(quad(quadruple_text))},
                                {"root", to_json(red.root)},
                                {"word", red.trace.word}});
                return;
            }
            std::string word;
            for (int g : red.trace.word) word += (word.empty() ? "" : ",") + std::to_string(g);
            write_output(cmd.common, to_string(red.root) + "\n[" + word + "]\n");
        };
    }

    // enumerate / kappa / multiplicity
    std::string root_text = "-1,2,2,3";
    i64 bound = 0;
    int fixed_index = 0;
    int max_depth = -1;
    auto orbit_params = [&](const Command& cmd) {
        EnumerationParams p;
        p.root = quad(root_text);
        p.bound = bound;
        if (fixed_index) p.fixed_index = fixed_index;
        if (max_depth >= 0) p.max_depth = max_depth;
        p.threads = cmd.common.thread_count();
        return p;
    };
    {
        auto& c = add_command(cmds, app, "enumerate", "enumerate circles up to a curvature bound", {"csv", "json"});
        opt(c, "--root", root_text, "root quadruple");
        opt(c, "--X", bound, "curvature bound", true);
        opt(c, "--fixed-index", fixed_index, "restrict to the suborbit fixing circle i")->check(CLI::Range(1, 4));
        opt(c, "--max-depth", max_depth, "word-length cap")->check(CLI::Range(0, 1 << 20));
        c.run = [&](Command& cmd) {
            const auto params = orbit_params(cmd);
            if (format_of(cmd) == Format::json) {
                emit_json(cmd, to_json(tally_packing(params)));
                return;
            }
            validate(params);
            std::string csv = "curvature,parent_word_length,generator_index\n";
            char line[96];
            // starting circles carry generator index 0
            for (int i = 0; i < 4; ++i) {
                if (fixed_index == i + 1 || params.root[i] < 1 || params.root[i] > bound) continue;
                std::snprintf(line, sizeof line, "%lld,0,0\n", static_cast<long long>(params.root[i]));
                csv += line;
            }
            enumerate_packing(params, [&](const Emission& e) {
                std::snprintf(line, sizeof line, "%lld,%d,%d\n", static_cast<long long>(e.curvature), e.parent_depth,
                              e.generator);
                csv += line;
            });
            write_output(cmd.common, csv);
        };
    }
    for (const char* name : {"kappa", "multiplicity"}) {
        auto& c = add_command(cmds, app, name,
                              std::string(name) == "kappa" ? "distinct curvatures up to X"
                                                           : "circles of curvature up to X, with multiplicity",
                              {"json"});
        opt(c, "--root", root_text, "root quadruple");
        opt(c, "--X", bound, "curvature bound", true);
        c.run = [&](Command& cmd) {
            format_of(cmd);
            emit_json(cmd, to_json(tally_packing(orbit_params(cmd))));
        };
    }

    // delta-fit
    std::string x_list = "10000,100000,1000000";
    {
        auto& c = add_command(cmds, app, "delta-fit", "fit N_P(X) ~ c X^delta", {"json"});
        opt(c, "--root", root_text, "root quadruple");
        opt(c, "--X-list", x_list, "ascending comma-separated bounds");
        c.run = [&](Command& cmd) {
            format_of(cmd);
            emit_json(cmd, to_json(delta_fit(quad(root_text), parse_int_list(x_list, "X list"),
                                             cmd.common.thread_count())));
        };
    }

    // tangency-form / values / change-of-vars
    int index = 1;
    auto fixed_first = [&] { return rotate_to_front(quad(quadruple_text), index); };
    {
        auto& c = add_command(cmds, app, "tangency-form", "tangency form of the circle at --index", {"json"});
        opt(c, "--quadruple", quadruple_text, "Descartes quadruple", true);
        opt(c, "--index", index, "circle to fix (1..4)")->check(CLI::Range(1, 4));
        c.run = [&](Command& cmd) {
            format_of(cmd);
            const auto tf = tangency_form(fixed_first());
            auto j = to_json(tf);
            j["min_represented"] = min_represented(tf.form);
            j["reduced"] = to_string(reduce_form(tf.form));
            emit_json(cmd, j);
        };
    }
    std::string quadrant = "full";
    bool all_pairs = false;
    {
        auto& c = add_command(cmds, app, "values", "curvatures f(x,y) - a tangent to a fixed circle", {"json", "csv"});
        opt(c, "--quadruple", quadruple_text, "Descartes quadruple", true);
        opt(c, "--index", index, "circle to fix (1..4)")->check(CLI::Range(1, 4));
        opt(c, "--X", bound, "value bound", true);
        opt(c, "--quadrant", quadrant, "full or nonneg")->check(CLI::IsMember({"full", "nonneg"}));
        c.app->add_flag("--all-pairs", all_pairs, "drop the gcd(x, y) = 1 condition");
        c.run = [&](Command& cmd) {
            const auto fmt = format_of(cmd);
            ValueSetOptions o;
            o.coprime_only = !all_pairs;
            o.quadrant = quadrant == "nonneg" ? Quadrant::nonneg : Quadrant::full;
            o.threads = cmd.common.thread_count();
            o.budget = cmd.common.budget();
            const auto tf = tangency_form(fixed_first());
            const auto values = value_set(tf, bound, o);
            if (fmt == Format::csv) {
                std::string csv = "n\n";
                for (i64 v : values) csv += std::to_string(v) + "\n";
                write_output(cmd.common, csv);
                return;
            }
            emit_json(cmd, {{"form", to_json(tf)}, {"X", bound}, {"count", values.size()}, {"values", values}});
        };
    }
    {
        auto& c = add_command(cmds, app, "change-of-vars", "check the quadruple -> y -> (A,B,C) identities", {"json"});
        opt(c, "--quadruple", quadruple_text, "Descartes quadruple", true);
        opt(c, "--index", index, "circle playing a0 (1..4)")->check(CLI::Range(1, 4));
        c.run = [&](Command& cmd) {
            format_of(cmd);
            const auto rep = verify_change_of_variables(fixed_first());
            emit_json(cmd, to_json(rep));
            if (!rep.ok()) throw std::runtime_error("identity failed: " + rep.first_failure()->name);
        };
    }

    // u0
    std::string form_text;
    {
        auto& c = add_command(cmds, app, "u0", "count integers up to X represented primitively by a form", {"json"});
        opt(c, "--form", form_text, "A,2B,C", true);
        opt(c, "--X", bound, "bound", true);
        c.run = [&](Command& cmd) {
            format_of(cmd);
            const auto f = parse_form(form_text);
            const u64 u0 = distinct_count_U0(f, bound, cmd.common.thread_count(), cmd.common.budget());
            const double x = static_cast<double>(bound);
            json j = {{"form", to_json(f)},
                      {"X", bound},
                      {"U0", u0},
                      {"sqrtD_ratio", decimal(static_cast<double>(u0) * std::sqrt(-static_cast<double>(f.disc())) / x)},
                      {"min_represented", min_represented(f)}};
            if (bound >= 3) j["sqrt_log_ratio"] = decimal(static_cast<double>(u0) * std::sqrt(std::log(x)) / x);
            emit_json(cmd, j);
        };
    }

    // spin-check
    int pairs = 100;
    unsigned seed = 1;
    {
        auto& c = add_command(cmds, app, "spin-check", "exact checks of the spin homomorphism", {"json"});
        opt(c, "--pairs", pairs, "random pairs")->check(CLI::Range(1, 1'000'000));
        opt(c, "--seed", seed, "random seed");
        c.run = [&](Command& cmd) {
            format_of(cmd);
            const auto rep = run_spin_check(pairs, seed);
            emit_json(cmd, to_json(rep));
            if (!rep.ok()) throw std::runtime_error("spin homomorphism check failed");
        };
    }

    // intersect / sigma-p / singular-series
    std::string a_text, b_text;
    bool with_r = false;
    double epsilon = 1.0;
    auto pair_forms = [&] { return make_quaternary(tangency_form(quad(a_text)), tangency_form(quad(b_text))); };
    {
        auto& c = add_command(cmds, app, "intersect", "|S_a ∩ S_a'| and the quadric lattice count", {"json", "csv"});
        opt(c, "--a-quadruple", a_text, "quadruple with a first", true);
        opt(c, "--b-quadruple", b_text, "quadruple with a' first", true);
        opt(c, "--X", bound, "bound", true);
        opt(c, "--quadrant", quadrant, "full or nonneg")->check(CLI::IsMember({"full", "nonneg"}));
        c.app->add_flag("--with-R", with_r, "also count lattice points on the quadric in the box");
        opt(c, "--epsilon", epsilon, "singular integral shell width")->check(CLI::PositiveNumber);
        c.run = [&](Command& cmd) {
            const auto fmt = format_of(cmd);
            const auto qf = pair_forms();
            ValueSetOptions o;
            o.quadrant = quadrant == "nonneg" ? Quadrant::nonneg : Quadrant::full;
            o.threads = cmd.common.thread_count();
            o.budget = cmd.common.budget();
            const auto sa = value_bits(qf.fa, bound, o), sb = value_bits(qf.fa_prime, bound, o);
            const u64 inter = sa.count_and(sb);
            if (fmt == Format::csv) {
                write_output(cmd.common, "a,a_prime,X,size_a,size_a_prime,intersection\n" + std::to_string(qf.a()) +
                                             "," + std::to_string(qf.a_prime()) + "," + std::to_string(bound) + "," +
                                             std::to_string(sa.count()) + "," + std::to_string(sb.count()) + "," +
                                             std::to_string(inter) + "\n");
                return;
            }
            json j = {{"a", qf.a()},
                      {"a_prime", qf.a_prime()},
                      {"X", bound},
                      {"quadrant", quadrant},
                      {"size_a", sa.count()},
                      {"size_a_prime", sb.count()},
                      {"intersection", inter}};
            if (with_r) {
                const u64 r = representation_count_R(qf, bound, cmd.common.budget(), cmd.common.thread_count());
                const auto si = singular_integral_estimate(qf, bound, epsilon, cmd.common.budget());
                const double main = static_cast<double>(bound) / std::fabs(static_cast<double>(qf.a() * qf.a_prime()));
                j["R"] = r;
                j["box_intersection"] = box_intersection(qf, bound, cmd.common.thread_count());
                j["R_over_main"] = decimal(static_cast<double>(r) / main);
                j["singular_integral"] = to_json(si);
            }
            emit_json(cmd, j);
        };
    }
    i64 p = 2, p_max = 50;
    int k = 1;
    std::string method = "auto";
    {
        auto& c = add_command(cmds, app, "sigma-p", "local density of F = f_a - f_a' at a - a'", {"json"});
        opt(c, "--a-quadruple", a_text, "quadruple with a first", true);
        opt(c, "--b-quadruple", b_text, "quadruple with a' first", true);
        opt(c, "--p", p, "prime", true);
        opt(c, "--k", k, "power of p")->check(CLI::Range(1, 40));
        opt(c, "--method", method, "auto, exhaustive or lifted")
            ->check(CLI::IsMember({"auto", "exhaustive", "lifted"}));
        c.run = [&](Command& cmd) {
            format_of(cmd);
            const auto qf = pair_forms();
            SigmaValue v;
            if (method == "exhaustive")
                v = {sigma_p_exhaustive(qf, p, k, cmd.common.budget()), SigmaMethod::exhaustive};
            else if (method == "lifted")
                v = {sigma_p_lifted(qf, p, k, cmd.common.budget()), SigmaMethod::lifted};
            else
                v = sigma_p(qf, p, k, cmd.common.budget());
            emit_json(cmd, {{"a", qf.a()},
                            {"a_prime", qf.a_prime()},
                            {"p", p},
                            {"k", k},
                            {"sigma", to_json(v.sigma)},
                            {"method", to_string(v.method)},
                            {"case", to_string(classify_prime(qf.a(), qf.a_prime(), p))}});
        };
    }
    {
        auto& c = add_command(cmds, app, "singular-series", "truncated product of local densities", {"json", "csv"});
        opt(c, "--a-quadruple", a_text, "quadruple with a first", true);
        opt(c, "--b-quadruple", b_text, "quadruple with a' first", true);
        opt(c, "--p-max", p_max, "largest prime")->check(CLI::Range(i64{2}, i64{100000}));
        opt(c, "--k", k, "power of p")->check(CLI::Range(1, 40));
        c.run = [&](Command& cmd) {
            const auto fmt = format_of(cmd);
            const auto rep =
                singular_series_truncated(pair_forms(), p_max, k, cmd.common.thread_count(), cmd.common.budget());
            if (fmt == Format::csv) {
                std::string csv = "p,k,sigma,sigma_decimal,case,method\n";
                for (const auto& e : rep.entries)
                    csv += std::to_string(e.p) + "," + std::to_string(e.k) + "," + to_string(e.sigma) + "," +
                           to_decimal(e.sigma, 12) + "," + to_string(e.prime_case) + "," + to_string(e.method) + "\n";
                write_output(cmd.common, csv);
                return;
            }
            emit_json(cmd, to_json(rep));
        };
    }

    // b2s
    i64 x = 0, q = 1, r = 0;
    {
        auto& c = add_command(cmds, app, "b2s", "sums of two squares up to x in a progression", {"json"});
        opt(c, "--x", x, "upper limit", true);
        opt(c, "--q", q, "modulus")->check(CLI::Range(i64{1}, i64{1} << 40));
        opt(c, "--r", r, "residue");
        c.run = [&](Command& cmd) {
            format_of(cmd);
            emit_json(cmd, {{"x", x}, {"q", q}, {"r", r}, {"B", b2s_count_B(x, q, r, cmd.common.budget())}});
        };
    }

    // density
    DensityConfig dc;
    std::string q_list;
    {
        auto& c = add_command(cmds, app, "density", "end-to-end inclusion-exclusion experiment", {"json", "csv"});
        opt(c, "--root", root_text, "root quadruple");
        opt(c, "--a0-index", dc.a0_index, "fixed circle defining A_0 (1..4)")->check(CLI::Range(1, 4));
        opt(c, "--X", dc.bound, "bound");
        opt(c, "--eta", dc.eta, "window parameter in (0,1)")->check(CLI::Range(0.0, 1.0));
        opt(c, "--a-lo", dc.a_lo, "smallest a");
        opt(c, "--a-hi", dc.a_hi, "largest a");
        opt(c, "--q-list", q_list, "squarefree moduli for progression sums");
        c.run = [&](Command& cmd) {
            const auto fmt = format_of(cmd);
            dc.root = quad(root_text);
            dc.threads = cmd.common.thread_count();
            dc.budget = cmd.common.budget();
            const auto rep = density_experiment(dc);
            if (fmt == Format::csv) {
                std::string csv = "a,a_prime,intersection,shape_constant\n";
                for (const auto& pe : rep.pairs)
                    csv += std::to_string(pe.a) + "," + std::to_string(pe.a_prime) + "," +
                           std::to_string(pe.intersection) + "," + decimal(pe.shape_constant) + "\n";
                write_output(cmd.common, csv);
                return;
            }
            json j = to_json(rep);
            if (!q_list.empty()) {
                const auto members = rep.selection.members();
                json prog = json::array();
                for (const i64 qq : parse_int_list(q_list, "q list"))
                    for (i64 rr = 0; rr < qq; ++rr) prog.push_back(to_json(progression_weighted_sum(members, qq, rr, dc.eta)));
                j["progressions"] = prog;
            }
            emit_json(cmd, j);
        };
    }

    // render
    int depth = 4;
    {
        auto& c = add_command(cmds, app, "render", "draw the packing as SVG", {"svg"});
        opt(c, "--root", root_text, "root quadruple");
        opt(c, "--depth", depth, "word length")->check(CLI::Range(0, kMaxLayoutDepth));
        c.run = [&](Command& cmd) {
            format_of(cmd);
            write_output(cmd.common, render_svg(layout_packing(quad(root_text), depth)));
        };
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::fprintf(stderr, "apollo: error[usage]: %s\n", one_line(e.what()).c_str());
        return 2;
    }

    for (auto& cmd : cmds) {
        if (!cmd->app->parsed()) continue;
        try {
            record(*cmd);
            cmd->run(*cmd);
            return 0;
        } catch (const UsageError& e) {
            std::fprintf(stderr, "apollo: error[usage]: %s\n", one_line(e.what()).c_str());
            return 2;
        } catch (const InvalidInput& e) {
            std::fprintf(stderr, "apollo: error[invalid]: %s\n", one_line(e.what()).c_str());
            return 2;
        } catch (const BudgetError& e) {
            std::fprintf(stderr, "apollo: error[budget]: %s\n", one_line(e.what()).c_str());
            return 3;
        } catch (const ArithmeticError& e) {
            std::fprintf(stderr, "apollo: error[arithmetic]: %s\n", one_line(e.what()).c_str());
            return 4;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "apollo: error[internal]: %s\n", one_line(e.what()).c_str());
            return 1;
        }
    }
    return 2;
}
