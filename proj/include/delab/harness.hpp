#pragma once

// Monte Carlo validation of the longest-edge bounds.
//
// Each trial t samples points from stream t of the configured seed, builds
// the Delaunay graph, and records whether its longest edge reaches each
// threshold. Per eps the exceedance count k over the completed trials gives
// p_hat and a Wilson score interval. Verdicts are one-sided and only say the
// claim is not contradicted at the chosen confidence:
//   upper bound (claim P(exceed) <= eps): PASS iff wilson_lo <= eps
//   lower bound (claim P(exceed) >= eps): PASS iff wilson_hi >= eps

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "delab/bounds.hpp"
#include "delab/delaunay.hpp"
#include "delab/errors.hpp"
#include "delab/geom.hpp"
#include "delab/rng.hpp"
#include "delab/sample.hpp"
#include "delab/special.hpp"

namespace delab {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class Verdict { Pass, Fail, Invalid };

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    default: return "INVALID";
    }
}

inline Verdict verdict_from_string(const std::string& s) {
    if (s == "PASS") return Verdict::Pass;
    if (s == "FAIL") return Verdict::Fail;
    if (s == "INVALID") return Verdict::Invalid;
    throw ConfigError("unknown verdict '" + s + "'");
}

struct ExperimentConfig {
    DomainKind kind = DomainKind::SphereNoBoundary;
    int d = 2;
    std::size_t n = 100;
    std::vector<double> epsilons{0.1};
    Direction direction = Direction::Upper;
    Form form = Form::Inverted;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    double confidence = 0.99;
    unsigned threads = 0; // 0: hardware concurrency. Not part of the echo.

    friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
        return a.kind == b.kind && a.d == b.d && a.n == b.n && a.epsilons == b.epsilons && a.direction == b.direction &&
               a.form == b.form && a.trials == b.trials && a.seed == b.seed && a.confidence == b.confidence;
    }
};

inline void validate(const ExperimentConfig& cfg) {
    if (cfg.d < 1) throw ConfigError("d must be >= 1");
    if (cfg.n <= static_cast<std::size_t>(cfg.d) + 1) throw ConfigError("n must exceed d+1");
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    if (cfg.epsilons.empty()) throw ConfigError("at least one eps is required");
    for (double e : cfg.epsilons)
        if (!(e > 0.0 && e < 1.0)) throw ConfigError("every eps must lie in (0, 1)");
    if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) throw ConfigError("confidence must lie in (0, 1)");
}

/// Bound per eps. Configuration problems a theorem cannot express (e.g. a
/// ball lower bound for d = 4) become invalid results rather than errors.
inline std::vector<BoundResult> experiment_bounds(const ExperimentConfig& cfg) {
    std::vector<BoundResult> out;
    for (double eps : cfg.epsilons) {
        try {
            out.push_back(compute_bound(BoundQuery::make(cfg.kind, cfg.d, cfg.n, eps, cfg.direction, cfg.form)));
        } catch (const ConfigError& e) {
            BoundResult r;
            r.direction = cfg.direction;
            r.form = cfg.form;
            r.invalidate(e.what());
            out.push_back(std::move(r));
        }
    }
    return out;
}

struct TrialRecord {
    std::size_t trial = 0;
    double longest_edge = std::numeric_limits<double>::quiet_NaN();
    std::size_t edge_count = 0;
    std::vector<char> exceed; // one flag per eps
    bool failed = false;
    bool jittered = false;
};

/// Exceedance: the longest edge reaches the threshold. A saturated (vacuous)
/// upper threshold can never be reached.
inline bool exceeds(double longest, const BoundResult& b) {
    if (b.saturated && b.direction == Direction::Upper) return false;
    return longest >= b.threshold;
}

inline TrialRecord run_trial(const ExperimentConfig& cfg, const std::vector<BoundResult>& bounds, std::size_t t) {
    TrialRecord rec;
    rec.trial = t;
    rec.exceed.assign(bounds.size(), 0);
    const PointSet ps = sample_points(cfg.kind, cfg.d, cfg.n, cfg.seed, t);
    DelaunayGraph g;
    try {
        g = delaunay_graph(ps);
    } catch (const DegeneracyError&) {
        try {
            g = delaunay_graph(jittered(ps));
            rec.jittered = true;
        } catch (const DegeneracyError&) {
            rec.failed = true;
            return rec;
        }
    }
    rec.longest_edge = longest_edge(g).length;
    rec.edge_count = g.edges.size();
    for (std::size_t e = 0; e < bounds.size(); ++e) rec.exceed[e] = exceeds(rec.longest_edge, bounds[e]) ? 1 : 0;
    return rec;
}

inline TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t t) { return run_trial(cfg, experiment_bounds(cfg), t); }

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Two-sided Wilson score interval for k successes in T trials.
inline Interval wilson_interval(std::size_t k, std::size_t T, double confidence) {
    if (T == 0) throw DomainError("wilson_interval: no trials");
    if (k > T) throw DomainError("wilson_interval: k > T");
    if (!(confidence > 0.0 && confidence < 1.0)) throw DomainError("wilson_interval: confidence outside (0, 1)");
    const double z = special::normal_quantile(0.5 + 0.5 * confidence);
    const double n = static_cast<double>(T);
    const double p = static_cast<double>(k) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (k == 0) ci.lo = 0.0;
    if (k == T) ci.hi = 1.0;
    ci.lo = std::min(ci.lo, p);
    ci.hi = std::max(ci.hi, p);
    return ci;
}

struct EpsilonSummary {
    double epsilon = 0.0;
    double threshold = 0.0;
    double rhs = 0.0;
    bool valid = false;
    bool saturated = false;
    std::string reason;
    std::size_t k = 0;
    double p_hat = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 1.0;
    Verdict verdict = Verdict::Invalid;
};

struct ExperimentSummary {
    ExperimentConfig config;
    std::vector<EpsilonSummary> rows;
    std::size_t completed_trials = 0;
    std::size_t failed_trials = 0;
    std::size_t jittered_trials = 0;
    std::string generator = RngStream::generator_name();
    std::string version = kArtifactVersion;
};

struct ExperimentResult {
    ExperimentSummary summary;
    std::vector<TrialRecord> records;
};

/// Worker count: cfg.threads if set, else hardware concurrency; DELAB_THREADS caps either.
inline unsigned resolve_threads(const ExperimentConfig& cfg) {
    std::size_t t = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("DELAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) t = std::min<std::size_t>(t, static_cast<std::size_t>(v));
    }
    return static_cast<unsigned>(std::max<std::size_t>(1, std::min(t, cfg.trials)));
}

inline ExperimentSummary summarize(const ExperimentConfig& cfg, const std::vector<BoundResult>& bounds,
                                   const std::vector<TrialRecord>& records) {
    ExperimentSummary s;
    s.config = cfg;
    for (const TrialRecord& r : records) {
        if (r.failed) ++s.failed_trials;
        if (r.jittered) ++s.jittered_trials;
    }
    s.completed_trials = records.size() - s.failed_trials;
    if (s.failed_trials * 100 > records.size())
        throw ExperimentError("experiment: " + std::to_string(s.failed_trials) + " of " + std::to_string(records.size()) +
                              " trials failed (budget 1%)");
    for (std::size_t e = 0; e < bounds.size(); ++e) {
        EpsilonSummary row;
        row.epsilon = cfg.epsilons[e];
        row.threshold = bounds[e].threshold;
        row.rhs = bounds[e].rhs;
        row.valid = bounds[e].valid;
        row.saturated = bounds[e].saturated;
        row.reason = bounds[e].reason;
        for (const TrialRecord& r : records)
            if (!r.failed && r.exceed[e]) ++row.k;
        row.p_hat = static_cast<double>(row.k) / static_cast<double>(s.completed_trials);
        const Interval ci = wilson_interval(row.k, s.completed_trials, cfg.confidence);
        row.wilson_lo = ci.lo;
        row.wilson_hi = ci.hi;
        if (!row.valid)
            row.verdict = Verdict::Invalid;
        else if (cfg.direction == Direction::Upper)
            row.verdict = ci.lo <= row.epsilon ? Verdict::Pass : Verdict::Fail;
        else
            row.verdict = ci.hi >= row.epsilon ? Verdict::Pass : Verdict::Fail;
        s.rows.push_back(std::move(row));
    }
    return s;
}

/// Runs all trials on a bounded worker pool. Records are stored by trial
/// index, so the result does not depend on the number of workers.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    const std::vector<BoundResult> bounds = experiment_bounds(cfg);
    std::vector<TrialRecord> records(cfg.trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= cfg.trials) return;
            try {
                records[t] = run_trial(cfg, bounds, t);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(cfg.trials);
                return;
            }
        }
    };
    const unsigned workers = resolve_threads(cfg);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
    ExperimentResult res;
    res.summary = summarize(cfg, bounds, records);
    res.records = std::move(records);
    return res;
}

// ---------------------------------------------------------------------------
// Serialization

using Json = nlohmann::ordered_json;

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }
inline double number_from(const Json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

inline Json config_to_json(const ExperimentConfig& cfg) {
    Json j;
    j["domain"] = to_string(cfg.kind);
    j["d"] = cfg.d;
    j["n"] = cfg.n;
    j["epsilons"] = cfg.epsilons;
    j["direction"] = to_string(cfg.direction);
    j["form"] = to_string(cfg.form);
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["confidence"] = cfg.confidence;
    return j;
}

/// Overlays the keys of a flat JSON object onto `base`. Unknown keys are errors.
inline ExperimentConfig config_from_json(const Json& j, ExperimentConfig base = {}) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "domain") base.kind = domain_kind_from_string(value.get<std::string>());
            else if (key == "d") base.d = value.get<int>();
            else if (key == "n") base.n = value.get<std::size_t>();
            else if (key == "epsilons" || key == "eps") {
                if (value.is_array()) base.epsilons = value.get<std::vector<double>>();
                else base.epsilons = {value.get<double>()};
            } else if (key == "direction") base.direction = direction_from_string(value.get<std::string>());
            else if (key == "form") base.form = form_from_string(value.get<std::string>());
            else if (key == "trials") base.trials = value.get<std::size_t>();
            else if (key == "seed") base.seed = value.get<std::uint64_t>();
            else if (key == "confidence") base.confidence = value.get<double>();
            else throw ConfigError("config: unknown key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: bad value: ") + e.what());
    }
    return base;
}

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline Json summary_to_json(const ExperimentSummary& s, const std::string& timestamp) {
    Json j;
    j["artifact_version"] = s.version;
    j["generator"] = s.generator;
    j["timestamp"] = timestamp;
    j["config"] = config_to_json(s.config);
    Json rows = Json::array();
    for (const EpsilonSummary& r : s.rows) {
        Json row;
        row["epsilon"] = r.epsilon;
        row["threshold"] = number_or_null(r.threshold);
        row["rhs"] = number_or_null(r.rhs);
        row["valid"] = r.valid;
        row["saturated"] = r.saturated;
        row["reason"] = r.reason;
        row["k"] = r.k;
        row["p_hat"] = r.p_hat;
        row["wilson_lo"] = r.wilson_lo;
        row["wilson_hi"] = r.wilson_hi;
        row["verdict"] = to_string(r.verdict);
        rows.push_back(std::move(row));
    }
    j["results"] = std::move(rows);
    j["completed_trials"] = s.completed_trials;
    j["failed_trials"] = s.failed_trials;
    j["jittered_trials"] = s.jittered_trials;
    return j;
}

inline ExperimentSummary summary_from_json(const Json& j) {
    try {
        ExperimentSummary s;
        s.version = j.at("artifact_version").get<std::string>();
        s.generator = j.at("generator").get<std::string>();
        s.config = config_from_json(j.at("config"));
        for (const Json& row : j.at("results")) {
            EpsilonSummary r;
            r.epsilon = row.at("epsilon").get<double>();
            r.threshold = number_from(row.at("threshold"));
            r.rhs = number_from(row.at("rhs"));
            r.valid = row.at("valid").get<bool>();
            r.saturated = row.at("saturated").get<bool>();
            r.reason = row.at("reason").get<std::string>();
            r.k = row.at("k").get<std::size_t>();
            r.p_hat = row.at("p_hat").get<double>();
            r.wilson_lo = row.at("wilson_lo").get<double>();
            r.wilson_hi = row.at("wilson_hi").get<double>();
            r.verdict = verdict_from_string(row.at("verdict").get<std::string>());
            s.rows.push_back(std::move(r));
        }
        s.completed_trials = j.at("completed_trials").get<std::size_t>();
        s.failed_trials = j.at("failed_trials").get<std::size_t>();
        s.jittered_trials = j.at("jittered_trials").get<std::size_t>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("summary: malformed document: ") + e.what());
    }
}

inline void write_trials_csv(const std::vector<TrialRecord>& records, std::size_t num_eps, std::ostream& os) {
    os << "trial,longest_edge,edge_count";
    for (std::size_t e = 0; e < num_eps; ++e) os << ",exceed_eps_" << (e + 1);
    os << '\n';
    char buf[32];
    for (const TrialRecord& r : records) {
        if (r.failed) std::snprintf(buf, sizeof buf, "nan");
        else std::snprintf(buf, sizeof buf, "%.17g", r.longest_edge);
        os << r.trial << ',' << buf << ',' << r.edge_count;
        for (std::size_t e = 0; e < num_eps; ++e) os << ',' << (r.exceed[e] ? 1 : 0);
        os << '\n';
    }
}

inline std::vector<TrialRecord> read_trials_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("trial,longest_edge,edge_count", 0) != 0)
        throw ConfigError("trials csv: missing header");
    std::vector<TrialRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        TrialRecord r;
        std::getline(ss, field, ',');
        r.trial = std::stoull(field);
        std::getline(ss, field, ',');
        if (field == "nan") r.failed = true;
        else r.longest_edge = std::stod(field);
        std::getline(ss, field, ',');
        r.edge_count = std::stoull(field);
        while (std::getline(ss, field, ',')) r.exceed.push_back(field == "1" ? 1 : 0);
        out.push_back(std::move(r));
    }
    return out;
}

struct OutputPaths {
    std::string summary;
    std::string trials;
};

inline OutputPaths output_paths(const std::string& prefix) { return {prefix + ".summary.json", prefix + ".trials.csv"}; }

/// Writes `<prefix>.summary.json` and `<prefix>.trials.csv`. Apart from the
/// timestamp, output is a pure function of the result.
inline OutputPaths write_outputs(const ExperimentResult& res, const std::string& prefix,
                                 const std::optional<std::string>& timestamp = std::nullopt) {
    const OutputPaths paths = output_paths(prefix);
    {
        std::ofstream os(paths.summary, std::ios::binary);
        if (!os) throw ExperimentError("cannot open '" + paths.summary + "' for writing");
        os << summary_to_json(res.summary, timestamp.value_or(utc_timestamp())).dump(2) << '\n';
        if (!os) throw ExperimentError("write failed for '" + paths.summary + "'");
    }
    {
        std::ofstream os(paths.trials, std::ios::binary);
        if (!os) throw ExperimentError("cannot open '" + paths.trials + "' for writing");
        write_trials_csv(res.records, res.summary.rows.size(), os);
        if (!os) throw ExperimentError("write failed for '" + paths.trials + "'");
    }
    return paths;
}

inline ExperimentSummary read_summary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open summary '" + path + "'");
    Json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("summary '" + path + "': " + e.what());
    }
    return summary_from_json(j);
}

} // namespace delab
