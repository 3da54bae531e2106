#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "gnp/arith.hpp"
#include "gnp/genpoly.hpp"
#include "gnp/gnpredict.hpp"
#include "gnp/newton_polygon.hpp"
#include "gnp/oracle.hpp"

namespace gnp {

enum class AMode { All, Sample, Single };
enum class Format { Json, Csv, Svg };

inline Format parse_format(const std::string& name) {
    if (name == "json") return Format::Json;
    if (name == "csv") return Format::Csv;
    if (name == "svg") return Format::Svg;
    throw std::invalid_argument("unknown format '" + name + "' (json, csv, svg)");
}

struct RunConfig {
    std::int64_t s = 0, d = 0;
    std::vector<std::int64_t> residues;  // empty: every residue coprime to d
    std::int64_t p_lo = 0, p_hi = -1;
    std::optional<std::int64_t> k_cap;
    AMode a_mode = AMode::All;
    std::int64_t a_value = 0;       // Single
    std::int64_t sample_count = 0;  // Sample
    Integer budget = 10'000'000;
    std::string output;  // empty: stdout
    Format format = Format::Json;
};

inline void validate(const RunConfig& cfg) {
    detail::check_generators(cfg.s, cfg.d);
    for (auto r : cfg.residues) {
        require(r >= 1 && r < cfg.d && gcd(r, cfg.d) == 1, "residue " + std::to_string(r) + " is not a unit mod d");
    }
    if (cfg.a_mode == AMode::Sample) require(cfg.sample_count >= 1, "sample count must be positive");
    require(cfg.budget >= 0, "budget must be nonnegative");
}

/// The residues a run covers, ascending.
inline std::vector<std::int64_t> run_residues(const RunConfig& cfg) {
    if (!cfg.residues.empty()) {
        auto out = cfg.residues;
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    std::vector<std::int64_t> out;
    for (std::int64_t r = 1; r < cfg.d; ++r) {
        if (gcd(r, cfg.d) == 1) out.push_back(r);
    }
    return out;
}

/// Lowest terms of H_r for each r >= 2 that the run touches, plus the
/// (r, n) pairs left undetermined at the cap.
struct LowestTable {
    std::map<std::int64_t, std::vector<LowestTerm>> by_r;
    std::vector<std::pair<std::int64_t, std::int64_t>> undetermined;
};

inline LowestTable lowest_table(const RunConfig& cfg) {
    LowestTable t;
    for (auto r : run_residues(cfg)) {
        if (r == 1) continue;
        auto terms = lowest_terms(cfg.s, cfg.d, r, cfg.k_cap);
        for (const auto& lt : terms) {
            if (!lt.found()) t.undetermined.emplace_back(r, lt.n);
        }
        t.by_r.emplace(r, std::move(terms));
    }
    return t;
}

struct PredictionRun {
    std::vector<GnpPrediction> predictions;  // ascending p
    std::vector<std::pair<std::int64_t, std::int64_t>> undetermined;
};

/// One prediction per prime p in range with p mod d among the residues.
inline PredictionRun run_predict(const RunConfig& cfg) {
    validate(cfg);
    PredictionRun out;
    const auto residues = run_residues(cfg);
    const auto primes = primes_in(std::max<std::int64_t>(cfg.p_lo, 2), cfg.p_hi);
    const bool any = std::any_of(primes.begin(), primes.end(), [&](std::int64_t p) {
        return std::binary_search(residues.begin(), residues.end(), pos_mod(p, cfg.d));
    });
    if (!any) return out;
    const LowestTable table = lowest_table(cfg);
    out.undetermined = table.undetermined;
    for (auto p : primes) {
        const std::int64_t r = pos_mod(p, cfg.d);
        if (!std::binary_search(residues.begin(), residues.end(), r)) continue;
        if (r == 1) {
            out.predictions.push_back(predict_gnp(cfg.s, cfg.d, r, p, {}));
        } else {
            out.predictions.push_back(predict_gnp(cfg.s, cfg.d, r, p, table.by_r.at(r)));
        }
    }
    return out;
}

struct VerificationRecord {
    std::int64_t p = 0, r = 0, a = 0;
    std::optional<NewtonPolygon> predicted;
    NewtonPolygon oracle;
    bool match = false;     // exact equality of all vertices
    bool valid = false;     // p > N and p = r mod d
    bool asserted = false;  // valid and a != 0: the row where equality must hold
    double elapsed_ms = 0;  // not serialized
};

struct PrimeSummary {
    GnpPrediction prediction;
    bool skipped = false;
    std::string notice;
    std::optional<NewtonPolygon> oracle_gnp;  // envelope over the a != 0 rows, a_mode = all only
    std::vector<std::int64_t> gnp_witnesses;
};

struct MatchStats {
    std::int64_t matched = 0;
    std::int64_t total = 0;
};

struct VerificationReport {
    std::int64_t s = 0, d = 0;
    std::optional<std::int64_t> k_cap;
    std::vector<PrimeSummary> primes;
    std::vector<VerificationRecord> records;
    std::vector<std::pair<std::int64_t, std::int64_t>> undetermined;
    MatchStats above_bound;  // p > N, a != 0
    MatchStats below_bound;  // p <= N or N unknown, a != 0
    MatchStats a_zero;       // a = 0, never asserted

    /// Every asserted row matched.
    bool consistent() const { return above_bound.matched == above_bound.total; }
};

namespace detail {

inline std::vector<std::int64_t> select_a(const RunConfig& cfg, std::int64_t p) {
    std::vector<std::int64_t> out;
    switch (cfg.a_mode) {
        case AMode::All:
            for (std::int64_t a = 0; a < p; ++a) out.push_back(a);
            break;
        case AMode::Single:
            out.push_back(pos_mod(cfg.a_value, p));
            break;
        case AMode::Sample: {
            std::vector<std::int64_t> pool;
            for (std::int64_t a = 1; a < p; ++a) pool.push_back(a);
            std::mt19937_64 rng(static_cast<std::uint64_t>(p));
            std::shuffle(pool.begin(), pool.end(), rng);
            pool.resize(std::min<std::size_t>(pool.size(), static_cast<std::size_t>(cfg.sample_count)));
            std::sort(pool.begin(), pool.end());
            out = pool;
            break;
        }
    }
    return out;
}

// fn over every input on a fixed pool of workers; results in input order.
template <class Fn>
auto ordered_map(const std::vector<std::int64_t>& inputs, Fn fn) {
    using Result = decltype(fn(std::int64_t{}));
    std::vector<std::optional<Result>> slots(inputs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), inputs.size()));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < inputs.size();) {
                try {
                    slots[i].emplace(fn(inputs[i]));
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    std::vector<Result> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

inline VerificationRecord verify_one(const SumFamily& fam, const GnpPrediction& pred, std::int64_t a) {
    const auto t0 = std::chrono::steady_clock::now();
    VerificationRecord rec;
    rec.p = pred.p;
    rec.r = pred.r;
    rec.a = a;
    rec.valid = pred.valid;
    rec.asserted = pred.valid && a != 0;
    rec.oracle = newton_polygon(l_polynomial(fam, a));
    if (pred.complete()) {
        rec.predicted = pred.polygon();
        rec.match = *rec.predicted == rec.oracle;
    }
    rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

}  // namespace detail

/// Prediction against oracle for every selected (p, a). Primes whose oracle
/// cost exceeds the budget are skipped with a notice.
inline VerificationReport run_verify(const RunConfig& cfg) {
    const PredictionRun run = run_predict(cfg);
    VerificationReport rep;
    rep.s = cfg.s;
    rep.d = cfg.d;
    rep.k_cap = cfg.k_cap;
    rep.undetermined = run.undetermined;
    for (const auto& pred : run.predictions) {
        PrimeSummary ps;
        ps.prediction = pred;
        if (oracle_cost(pred.p, cfg.d) > cfg.budget) {
            ps.skipped = true;
            ps.notice = "oracle cost " + oracle_cost(pred.p, cfg.d).get_str() + " exceeds budget " + cfg.budget.get_str();
            rep.primes.push_back(std::move(ps));
            continue;
        }
        const SumFamily fam(cfg.s, cfg.d, pred.p, cfg.d - 1);
        auto batch = detail::ordered_map(detail::select_a(cfg, pred.p),
                                         [&](std::int64_t a) { return detail::verify_one(fam, pred, a); });
        std::map<Rational, Rational> lowest;
        for (auto& rec : batch) {
            MatchStats& bucket = rec.a == 0 ? rep.a_zero : (rec.valid ? rep.above_bound : rep.below_bound);
            ++bucket.total;
            if (rec.match) ++bucket.matched;
            if (rec.a != 0) {
                for (const auto& v : rec.oracle.vertices()) {
                    auto it = lowest.find(v.x);
                    if (it == lowest.end() || v.y < it->second) lowest[v.x] = v.y;
                }
            }
            rep.records.push_back(std::move(rec));
        }
        if (cfg.a_mode == AMode::All) {
            std::vector<Point> pts;
            for (const auto& [x, y] : lowest) pts.push_back({x, y});
            ps.oracle_gnp = lower_hull(std::move(pts));
            for (const auto& rec : rep.records) {
                if (rec.p == pred.p && rec.a != 0 && rec.oracle == *ps.oracle_gnp) ps.gnp_witnesses.push_back(rec.a);
            }
        }
        rep.primes.push_back(std::move(ps));
    }
    return rep;
}

// ---- serialization ----

inline nlohmann::json optional_polygon(const std::optional<NewtonPolygon>& np) {
    return np ? to_json(*np) : nlohmann::json(nullptr);
}

inline nlohmann::json to_json(const LowestTerm& t) {
    nlohmann::json j{{"n", t.n}, {"k_min", t.k_min}, {"searched_up_to", t.searched_up_to}};
    j["k"] = t.k ? nlohmann::json(*t.k) : nlohmann::json(nullptr);
    j["h"] = t.h ? nlohmann::json(fraction_string(*t.h)) : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json to_json(const GnpPrediction& g) {
    nlohmann::json heights = nlohmann::json::array();
    for (const auto& h : g.heights) heights.push_back(h ? nlohmann::json(fraction_string(*h)) : nlohmann::json(nullptr));
    nlohmann::json lowest = nlohmann::json::array();
    for (const auto& t : g.lowest) lowest.push_back(to_json(t));
    nlohmann::json j{{"s", g.s},         {"d", g.d},           {"r", g.r},
                     {"p", g.p},         {"heights", heights}, {"lowest", lowest},
                     {"valid", g.valid}, {"convex", g.convex}, {"hodge", to_json(hodge_polygon(g.d))}};
    j["bound_N"] = g.bound_N ? nlohmann::json(g.bound_N->get_str()) : nlohmann::json(nullptr);
    j["polygon"] = g.complete() ? to_json(g.polygon()) : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json undetermined_json(const std::vector<std::pair<std::int64_t, std::int64_t>>& u) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [r, n] : u) out.push_back({{"r", r}, {"n", n}});
    return out;
}

inline nlohmann::json to_json(const PredictionRun& run) {
    nlohmann::json preds = nlohmann::json::array();
    for (const auto& g : run.predictions) preds.push_back(to_json(g));
    return {{"predictions", preds}, {"undetermined", undetermined_json(run.undetermined)}};
}

inline nlohmann::json to_json(const MatchStats& m) { return {{"matched", m.matched}, {"total", m.total}}; }

inline nlohmann::json to_json(const VerificationReport& rep) {
    nlohmann::json primes = nlohmann::json::array();
    for (const auto& ps : rep.primes) {
        nlohmann::json j{{"prediction", to_json(ps.prediction)}, {"skipped", ps.skipped}, {"notice", ps.notice},
                         {"oracle_gnp", optional_polygon(ps.oracle_gnp)}, {"gnp_witnesses", ps.gnp_witnesses}};
        primes.push_back(std::move(j));
    }
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : rep.records) {
        records.push_back({{"p", r.p},
                           {"r", r.r},
                           {"a", r.a},
                           {"predicted", optional_polygon(r.predicted)},
                           {"oracle", to_json(r.oracle)},
                           {"match", r.match},
                           {"valid", r.valid},
                           {"asserted", r.asserted}});
    }
    nlohmann::json j{{"s", rep.s},
                     {"d", rep.d},
                     {"primes", primes},
                     {"records", records},
                     {"undetermined", undetermined_json(rep.undetermined)},
                     {"summary",
                      {{"above_bound", to_json(rep.above_bound)},
                       {"below_bound", to_json(rep.below_bound)},
                       {"a_zero", to_json(rep.a_zero)}}}};
    j["k_cap"] = rep.k_cap ? nlohmann::json(*rep.k_cap) : nlohmann::json(nullptr);
    return j;
}

/// p,r,a,n,x,y_pred,y_oracle,match with one row per vertex index n.
inline std::string report_csv(const VerificationReport& rep) {
    std::ostringstream os;
    os << "p,r,a,n,x,y_pred,y_oracle,match\n";
    for (const auto& rec : rep.records) {
        for (std::int64_t n = 0; n <= rep.d - 1; ++n) {
            const Rational x(n);
            const Rational y_oracle = rec.oracle.at(x);
            os << rec.p << ',' << rec.r << ',' << rec.a << ',' << n << ',' << fraction_string(x) << ',';
            if (rec.predicted) {
                const Rational y_pred = rec.predicted->at(x);
                os << fraction_string(y_pred) << ',' << fraction_string(y_oracle) << ',' << (y_pred == y_oracle);
            } else {
                os << ',' << fraction_string(y_oracle) << ",0";
            }
            os << '\n';
        }
    }
    return os.str();
}

inline std::string prediction_csv(const PredictionRun& run) {
    std::ostringstream os;
    os << "p,r,n,x,y_pred,valid\n";
    for (const auto& g : run.predictions) {
        for (std::size_t n = 0; n < g.heights.size(); ++n) {
            os << g.p << ',' << g.r << ',' << n << ',' << n << ',';
            if (g.heights[n]) os << fraction_string(*g.heights[n]);
            os << ',' << g.valid << '\n';
        }
    }
    return os.str();
}

namespace detail {

inline std::string svg_polyline(const NewtonPolygon& np, const std::string& label, const std::string& colour, double x0,
                                double y0, double sx, double sy) {
    std::ostringstream os;
    os << "  <polyline class=\"" << label << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < np.vertices().size(); ++i) {
        const auto& v = np.vertices()[i];
        if (i) os << ' ';
        os << x0 + sx * v.x.get_d() << ',' << y0 - sy * v.y.get_d();
    }
    os << "\"><title>" << label << "</title></polyline>\n";
    return os.str();
}

struct SvgPanel {
    std::string caption;
    std::optional<NewtonPolygon> np, gnp;
    NewtonPolygon hp;
};

inline std::string svg_document(std::int64_t d, const std::vector<SvgPanel>& panels) {
    const double w = 360, h = 240, margin = 30;
    const double sx = (w - 2 * margin) / static_cast<double>(d - 1);
    const double sy = (h - 2 * margin) / (static_cast<double>(d - 1) / 2.0);
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h * panels.size() << "\">\n";
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const auto& panel = panels[i];
        const double x0 = margin, y0 = h * static_cast<double>(i + 1) - margin;
        os << " <g>\n  <text x=\"" << margin << "\" y=\"" << h * static_cast<double>(i) + 18 << "\">" << panel.caption
           << "</text>\n";
        os << svg_polyline(panel.hp, "HP", "#888888", x0, y0, sx, sy);
        if (panel.gnp) os << svg_polyline(*panel.gnp, "GNP", "#1f77b4", x0, y0, sx, sy);
        if (panel.np) os << svg_polyline(*panel.np, "NP", "#d62728", x0, y0, sx, sy);
        os << " </g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace detail

/// One panel per prime: oracle NP (first a != 0 row), predicted GNP, HP.
inline std::string report_svg(const VerificationReport& rep) {
    std::vector<detail::SvgPanel> panels;
    for (const auto& ps : rep.primes) {
        detail::SvgPanel panel{"p=" + std::to_string(ps.prediction.p), std::nullopt, std::nullopt, hodge_polygon(rep.d)};
        if (ps.prediction.complete()) panel.gnp = ps.prediction.polygon();
        for (const auto& rec : rep.records) {
            if (rec.p == ps.prediction.p && rec.a != 0) {
                panel.np = rec.oracle;
                panel.caption += " a=" + std::to_string(rec.a);
                break;
            }
        }
        panels.push_back(std::move(panel));
    }
    return detail::svg_document(rep.d, panels);
}

inline std::string prediction_svg(const PredictionRun& run, std::int64_t d) {
    std::vector<detail::SvgPanel> panels;
    for (const auto& g : run.predictions) {
        detail::SvgPanel panel{"p=" + std::to_string(g.p), std::nullopt, std::nullopt, hodge_polygon(d)};
        if (g.complete()) panel.gnp = g.polygon();
        panels.push_back(std::move(panel));
    }
    return detail::svg_document(d, panels);
}

inline std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

/// Writes `text` to `path`, or to `fallback` when the path is empty.
inline void write_artifact(const std::string& text, const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path);
}

inline std::string emit_report(const VerificationReport& rep, Format format) {
    switch (format) {
        case Format::Json: return dump_json(to_json(rep));
        case Format::Csv: return report_csv(rep);
        case Format::Svg: return report_svg(rep);
    }
    return {};
}

inline std::string emit_predictions(const PredictionRun& run, std::int64_t d, Format format) {
    switch (format) {
        case Format::Json: return dump_json(to_json(run));
        case Format::Csv: return prediction_csv(run);
        case Format::Svg: return prediction_svg(run, d);
    }
    return {};
}

}  // namespace gnp
