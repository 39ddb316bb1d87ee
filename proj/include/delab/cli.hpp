#pragma once

// Command-line front end. run_cli() is the whole program; tools/delab.cpp
// only forwards argv. Exit codes: 0 clean, 1 any FAIL or mismatch,
// 2 usage or configuration error (or every requested row invalid).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "delab/bounds.hpp"
#include "delab/delaunay.hpp"
#include "delab/errors.hpp"
#include "delab/harness.hpp"
#include "delab/sample.hpp"
#include "delab/svg.hpp"

namespace delab {

enum ExitCode : int { kExitOk = 0, kExitFail = 1, kExitUsage = 2 };

struct CertifyReport {
    std::size_t instances = 0;
    std::size_t mismatches = 0;
    std::size_t skipped = 0; // degenerate for the hull even after jitter
    std::size_t bad_certificates = 0;
};

/// Hull-derived and LP-certified edge sets must agree exactly on every instance.
inline CertifyReport certify_run(DomainKind kind, int d, std::size_t n, std::size_t trials, std::uint64_t seed,
                                 std::ostream* log = nullptr) {
    CertifyReport rep;
    for (std::size_t t = 0; t < trials; ++t) {
        PointSet ps = sample_points(kind, d, n, seed, t);
        DelaunayGraph hull;
        try {
            hull = delaunay_graph(ps);
        } catch (const DegeneracyError&) {
            ps = jittered(ps);
            try {
                hull = delaunay_graph(ps);
            } catch (const DegeneracyError&) {
                ++rep.skipped;
                continue;
            }
        }
        ++rep.instances;
        const DelaunayGraph lp = certified_graph(ps);
        if (hull.index_pairs() != lp.index_pairs()) {
            ++rep.mismatches;
            if (log) *log << "trial " << t << ": hull " << hull.edges.size() << " edges, lp " << lp.edges.size() << " edges\n";
        }
        for (const Edge& e : lp.edges)
            if (!verify_certificate(ps, certify_edge(ps, e.i, e.j))) ++rep.bad_certificates;
    }
    return rep;
}

/// 1 if any verdict is FAIL, 2 if every row is INVALID, else 0.
inline int simulate_exit_code(const ExperimentSummary& s) {
    bool any_fail = false, all_invalid = true;
    for (const auto& r : s.rows) {
        any_fail = any_fail || r.verdict == Verdict::Fail;
        all_invalid = all_invalid && r.verdict == Verdict::Invalid;
    }
    if (any_fail) return kExitFail;
    return all_invalid ? kExitUsage : kExitOk;
}

namespace detail {

inline std::vector<double> parse_eps_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("--eps: cannot parse '" + item + "'");
        }
        if (used != item.size()) throw ConfigError("--eps: cannot parse '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("--eps: empty list");
    return out;
}

inline void print_summary(const ExperimentSummary& s, std::ostream& os) {
    const auto& c = s.config;
    os << to_string(c.kind) << " d=" << c.d << " n=" << c.n << " " << to_string(c.direction) << " "
       << to_string(c.form) << " trials=" << c.trials << " seed=" << c.seed << " confidence=" << c.confidence << "\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-10s %-12s %-6s %-10s %-10s %-10s %s\n", "eps", "threshold", "k", "p_hat",
                  "wilson_lo", "wilson_hi", "verdict");
    os << line;
    for (const auto& r : s.rows) {
        std::snprintf(line, sizeof line, "%-10s %-12s %-6zu %-10.6f %-10.6f %-10.6f %s", fmt_number(r.epsilon, "%.6g").c_str(),
                      fmt_number(r.threshold, "%.6g").c_str(), r.k, r.p_hat, r.wilson_lo, r.wilson_hi,
                      to_string(r.verdict).c_str());
        os << line;
        if (!r.reason.empty()) os << "  (" << r.reason << ")";
        if (r.saturated) os << "  [saturated]";
        os << "\n";
    }
    os << "completed " << s.completed_trials << ", failed " << s.failed_trials << ", jittered " << s.jittered_trials
       << "\n";
}

inline std::string trials_path_for(const std::string& summary_path) {
    const std::string suffix = ".summary.json";
    if (summary_path.size() > suffix.size() &&
        summary_path.compare(summary_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return summary_path.substr(0, summary_path.size() - suffix.size()) + ".trials.csv";
    throw ConfigError("plot: cannot derive the trials file from '" + summary_path + "'; pass --trials");
}

} // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Longest Delaunay edge bounds on the sphere and in the ball, with Monte Carlo validation", "delab"};
    app.set_help_all_flag("--help-all", "Print help for every subcommand and exit");
    app.require_subcommand(1);

    // bound
    auto* bound = app.add_subcommand("bound", "Print the bound table for one (n, eps)");
    std::size_t b_n = 0;
    double b_eps = 0.0;
    int b_d = 3;
    std::string b_domain, b_form, b_format = "text";
    bound->add_option("--n", b_n, "Number of points")->required();
    bound->add_option("--eps", b_eps, "Failure probability eps")->required();
    bound->add_option("--d", b_d, "Dimension of the general-measure rows")->capture_default_str();
    bound->add_option("--domain", b_domain, "Only rows of this domain")->check(CLI::IsMember({"sphere", "ball"}));
    bound->add_option("--form", b_form, "Force this form on every row")->check(CLI::IsMember({"inverted", "closed"}));
    bound->add_option("--format", b_format, "Output format")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo experiment and write its outputs");
    std::string s_config, s_domain, s_eps, s_direction, s_form, s_out;
    int s_d = 0;
    std::size_t s_n = 0, s_trials = 0;
    std::uint64_t s_seed = 0;
    double s_conf = 0.0;
    bool s_dump = false;
    sim->add_option("--config", s_config, "Flat JSON config file; flags override its values");
    auto* o_domain = sim->add_option("--domain", s_domain, "Domain")->check(CLI::IsMember({"sphere", "ball"}));
    auto* o_d = sim->add_option("--d", s_d, "Dimension");
    auto* o_n = sim->add_option("--n", s_n, "Number of points");
    auto* o_eps = sim->add_option("--eps", s_eps, "Comma-separated eps list");
    auto* o_dir = sim->add_option("--direction", s_direction, "Bound direction")->check(CLI::IsMember({"upper", "lower"}));
    auto* o_form = sim->add_option("--form", s_form, "Threshold form")->check(CLI::IsMember({"inverted", "closed"}));
    auto* o_trials = sim->add_option("--trials", s_trials, "Number of trials");
    auto* o_seed = sim->add_option("--seed", s_seed, "Base seed");
    auto* o_conf = sim->add_option("--confidence", s_conf, "Wilson interval confidence");
    sim->add_option("--out", s_out, "Output prefix for <prefix>.summary.json and <prefix>.trials.csv");
    sim->add_flag("--dump-config", s_dump, "Print the effective config as JSON and exit");

    // certify
    auto* cert = app.add_subcommand("certify", "Compare hull-derived and LP-certified Delaunay edge sets");
    std::string c_domain = "ball";
    int c_d = 2;
    std::size_t c_n = 12, c_trials = 50;
    std::uint64_t c_seed = 1;
    cert->add_option("--domain", c_domain, "Domain")->check(CLI::IsMember({"sphere", "ball"}))->capture_default_str();
    cert->add_option("--d", c_d, "Dimension")->capture_default_str();
    cert->add_option("--n", c_n, "Number of points")->capture_default_str();
    cert->add_option("--trials", c_trials, "Number of instances")->capture_default_str();
    cert->add_option("--seed", c_seed, "Base seed")->capture_default_str();

    // plot
    auto* plot = app.add_subcommand("plot", "Render the survival curve of a finished experiment as SVG");
    std::string p_summary, p_trials, p_out;
    plot->add_option("--summary", p_summary, "Path to <prefix>.summary.json")->required();
    plot->add_option("--trials", p_trials, "Path to the trials CSV (default: derived from --summary)");
    plot->add_option("--out", p_out, "Output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*bound) {
            BoundTableOptions opts;
            opts.general_d = b_d;
            if (!b_domain.empty()) opts.domain = domain_kind_from_string(b_domain);
            if (!b_form.empty()) opts.form = form_from_string(b_form);
            const auto rows = bound_table(b_n, b_eps, opts);
            if (b_format == "csv") render_table_csv(rows, out);
            else render_table_text(rows, b_n, b_eps, out);
            return kExitOk;
        }

        if (*sim) {
            ExperimentConfig cfg;
            if (!s_config.empty()) {
                std::ifstream is(s_config);
                if (!is) throw ConfigError("cannot open config '" + s_config + "'");
                Json j;
                try {
                    is >> j;
                } catch (const nlohmann::json::exception& e) {
                    throw ConfigError("config '" + s_config + "': " + e.what());
                }
                cfg = config_from_json(j, cfg);
            }
            if (o_domain->count()) cfg.kind = domain_kind_from_string(s_domain);
            if (o_d->count()) cfg.d = s_d;
            if (o_n->count()) cfg.n = s_n;
            if (o_eps->count()) cfg.epsilons = detail::parse_eps_list(s_eps);
            if (o_dir->count()) cfg.direction = direction_from_string(s_direction);
            if (o_form->count()) cfg.form = form_from_string(s_form);
            if (o_trials->count()) cfg.trials = s_trials;
            if (o_seed->count()) cfg.seed = s_seed;
            if (o_conf->count()) cfg.confidence = s_conf;
            validate(cfg);
            if (s_dump) {
                out << config_to_json(cfg).dump(2) << "\n";
                return kExitOk;
            }
            const ExperimentResult res = run_experiment(cfg);
            detail::print_summary(res.summary, out);
            if (!s_out.empty()) {
                const OutputPaths paths = write_outputs(res, s_out);
                out << "wrote " << paths.summary << " and " << paths.trials << "\n";
            }
            const int code = simulate_exit_code(res.summary);
            if (code == kExitUsage) err << "simulate: every requested eps is outside the bound's validity range\n";
            return code;
        }

        if (*cert) {
            const DomainKind kind = domain_kind_from_string(c_domain);
            const CertifyReport rep = certify_run(kind, c_d, c_n, c_trials, c_seed, &err);
            out << rep.mismatches << " mismatches";
            out << " (" << rep.instances << " instances";
            if (rep.skipped) out << ", " << rep.skipped << " degenerate skipped";
            if (rep.bad_certificates) out << ", " << rep.bad_certificates << " bad certificates";
            out << ")\n";
            return rep.mismatches == 0 && rep.bad_certificates == 0 ? kExitOk : kExitFail;
        }

        if (*plot) {
            const ExperimentSummary summary = read_summary(p_summary);
            const std::string tpath = p_trials.empty() ? detail::trials_path_for(p_summary) : p_trials;
            std::ifstream is(tpath);
            if (!is) throw ConfigError("cannot open trials '" + tpath + "'");
            const auto records = read_trials_csv(is);
            std::ofstream os(p_out, std::ios::binary);
            if (!os) throw ConfigError("cannot open '" + p_out + "' for writing");
            os << render_svg(summary, records);
            if (!os) throw ExperimentError("write failed for '" + p_out + "'");
            return kExitOk;
        }
    } catch (const ExperimentError& e) {
        err << "error: " << e.what() << "\n";
        return kExitFail;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace delab
