// gnp: predict and verify generic Newton polygons of x^d + a x^s.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gnp/dwork.hpp"
#include "gnp/errors.hpp"
#include "gnp/frobenius.hpp"
#include "gnp/genpoly.hpp"
#include "gnp/gnpredict.hpp"
#include "gnp/oracle.hpp"
#include "gnp/report.hpp"

namespace {

using gnp::require;

struct Options {
    std::int64_t s = 0, d = 0;
    std::optional<std::int64_t> r, p, pmin, pmax, a, k_cap, sample, ell;
    double budget = 1e7;
    std::string format = "json";
    std::string out;
};

void add_family(CLI::App* cmd, Options& o) {
    cmd->add_option("--s", o.s, "exponent of the lower term")->required();
    cmd->add_option("--d", o.d, "degree")->required();
}

void add_output(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "json, csv or svg")->check(CLI::IsMember({"json", "csv", "svg"}));
    cmd->add_option("--out", o.out, "output path (default stdout)");
}

void add_range(CLI::App* cmd, Options& o) {
    cmd->add_option("--p", o.p, "single prime");
    cmd->add_option("--pmin", o.pmin, "lower end of the prime range");
    cmd->add_option("--pmax", o.pmax, "upper end of the prime range");
    cmd->add_option("--r", o.r, "restrict to p = r mod d");
    cmd->add_option("--k-cap", o.k_cap, "degree cap for the lowest-term search");
    cmd->add_option("--budget", o.budget, "maximum field elements visited per prime")->capture_default_str();
}

gnp::Integer budget_of(const Options& o) {
    require(o.budget >= 0, "budget must be nonnegative");
    return gnp::Integer(o.budget);
}

gnp::RunConfig run_config(const Options& o) {
    gnp::RunConfig cfg;
    cfg.s = o.s;
    cfg.d = o.d;
    if (o.r) cfg.residues.push_back(*o.r);
    if (o.p) {
        require(!o.pmin && !o.pmax, "--p excludes --pmin/--pmax");
        cfg.p_lo = cfg.p_hi = *o.p;
        require(gnp::is_prime(static_cast<std::uint64_t>(*o.p)), std::to_string(*o.p) + " is not prime");
    } else {
        require(o.pmin && o.pmax, "give --p or both --pmin and --pmax");
        cfg.p_lo = *o.pmin;
        cfg.p_hi = *o.pmax;
    }
    cfg.k_cap = o.k_cap;
    if (o.a) {
        require(!o.sample, "--a excludes --sample");
        cfg.a_mode = gnp::AMode::Single;
        cfg.a_value = *o.a;
    } else if (o.sample) {
        cfg.a_mode = gnp::AMode::Sample;
        cfg.sample_count = *o.sample;
    }
    cfg.budget = budget_of(o);
    cfg.output = o.out;
    cfg.format = gnp::parse_format(o.format);
    gnp::validate(cfg);
    return cfg;
}

void emit(const std::string& text, const Options& o) { gnp::write_artifact(text, o.out, std::cout); }

void cmd_hr(const Options& o) {
    require(o.r.has_value(), "hr needs --r");
    const auto g = gnp::generating_polynomial(o.s, o.d, *o.r, o.k_cap);
    nlohmann::json terms = nlohmann::json::object();
    for (const auto& [n, row] : g.terms) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& [k, h] : row) list.push_back(nlohmann::json::array({k, gnp::fraction_string(h)}));
        terms[std::to_string(n)] = list;
    }
    nlohmann::json j{{"s", g.s}, {"d", g.d}, {"r", g.r}, {"terms", terms}, {"k_cap", g.k_cap}, {"incomplete", g.incomplete}};
    emit(gnp::dump_json(j), o);
}

void cmd_frobenius(const Options& o) {
    require(o.p.has_value(), "frobenius needs --p");
    std::ostringstream os;
    os << "i,j,m,n,beta\n";
    for (std::int64_t i = 1; i <= o.d - 1; ++i) {
        for (std::int64_t j = 1; j <= o.d - 1; ++j) {
            const auto row = gnp::pij_data(o.s, o.d, *o.p, i, j);
            os << row.i << ',' << row.j << ',' << row.m << ',' << row.n << ',' << row.beta << '\n';
        }
    }
    emit(os.str(), o);
}

void cmd_predict(const Options& o) {
    const auto cfg = run_config(o);
    const auto run = gnp::run_predict(cfg);
    for (const auto& [r, n] : run.undetermined) {
        std::cerr << "note: k_{" << r << "," << n << "} undetermined below the degree cap\n";
    }
    emit(gnp::emit_predictions(run, cfg.d, cfg.format), o);
}

void cmd_dwork(const Options& o) {
    require(o.p.has_value(), "dwork needs --p");
    const std::int64_t p = *o.p;
    const std::int64_t r = gnp::pos_mod(p, o.d);
    std::ostringstream os;
    os << "n,a_degree,gamma_exp,coeff,valuation\n";
    for (std::int64_t n = 1; n <= o.d - 1; ++n) {
        std::int64_t ell = 0;
        if (o.ell) ell = *o.ell;
        else if (r != 1) ell = gnp::default_ell_cap(o.s, o.d, r, n, o.k_cap);
        const auto minor = gnp::tame_minor(o.s, o.d, r, p, n, ell);
        for (const auto& [key, c] : minor.terms()) {
            os << n << ',' << key.a_degree << ',' << gnp::fraction_string(key.gamma_exp) << ','
               << gnp::fraction_string(c) << ',' << gnp::term_valuation(c, key.gamma_exp, p) << '\n';
        }
    }
    emit(os.str(), o);
}

void cmd_oracle_np(const Options& o) {
    require(o.p && o.a, "oracle np needs --p and --a");
    gnp::check_budget(*o.p, o.d, budget_of(o));
    const auto np = gnp::newton_polygon(o.s, o.d, *o.a, *o.p);
    emit(gnp::dump_json(gnp::to_json(np)), o);
}

void cmd_oracle_gnp(const Options& o) {
    require(o.p.has_value(), "oracle gnp needs --p");
    gnp::check_budget(*o.p, o.d, budget_of(o));
    const auto g = gnp::exhaustive_gnp(o.s, o.d, *o.p);
    nlohmann::json j = gnp::to_json(g.gnp);
    j["witness"] = g.witness ? nlohmann::json(*g.witness) : nlohmann::json(nullptr);
    j["witnesses"] = g.witnesses;
    emit(gnp::dump_json(j), o);
}

void cmd_oracle_zeta(const Options& o) {
    require(o.p && o.a, "oracle zeta needs --p and --a");
    gnp::check_budget(*o.p, o.d, budget_of(o));
    const auto z = gnp::zeta_numerator(o.s, o.d, *o.a, *o.p);
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : z) coeffs.push_back(c.get_str());
    emit(gnp::dump_json(nlohmann::json{{"coefficients", coeffs}}), o);
}

int cmd_verify(const Options& o) {
    const auto cfg = run_config(o);
    const auto rep = gnp::run_verify(cfg);
    for (const auto& ps : rep.primes) {
        if (ps.skipped) std::cerr << "skipped p=" << ps.prediction.p << ": " << ps.notice << '\n';
    }
    emit(gnp::emit_report(rep, cfg.format), o);
    std::cerr << "p > N: " << rep.above_bound.matched << "/" << rep.above_bound.total
              << " matched; p <= N: " << rep.below_bound.matched << "/" << rep.below_bound.total
              << "; a = 0: " << rep.a_zero.matched << "/" << rep.a_zero.total << '\n';
    if (!rep.consistent()) {
        std::cerr << "error: prediction and oracle disagree above the bound\n";
        return 4;
    }
    return 0;
}

int cmd_sweep(const Options& o) {
    require(!o.r, "sweep covers every residue; use verify for a single r");
    const auto cfg = run_config(o);
    const auto rep = gnp::run_verify(cfg);
    std::map<std::int64_t, gnp::MatchStats> per_p;
    for (const auto& rec : rep.records) {
        if (rec.a == 0) continue;
        auto& m = per_p[rec.p];
        ++m.total;
        if (rec.match) ++m.matched;
    }
    std::string text;
    if (cfg.format == gnp::Format::Csv) {
        std::ostringstream os;
        os << "p,r,valid,bound_N,predicted,oracle_gnp,matched,total,skipped\n";
        for (const auto& ps : rep.primes) {
            const auto& g = ps.prediction;
            const auto m = per_p[g.p];
            os << g.p << ',' << g.r << ',' << g.valid << ',' << (g.bound_N ? g.bound_N->get_str() : "") << ",\""
               << (g.complete() ? g.polygon().str() : "") << "\",\"" << (ps.oracle_gnp ? ps.oracle_gnp->str() : "")
               << "\"," << m.matched << ',' << m.total << ',' << ps.skipped << '\n';
        }
        text = os.str();
    } else if (cfg.format == gnp::Format::Svg) {
        text = gnp::report_svg(rep);
    } else {
        nlohmann::json full = gnp::to_json(rep);
        full.erase("records");
        text = gnp::dump_json(full);
    }
    emit(text, o);
    return rep.consistent() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generic Newton polygons of x^d + a x^s: prediction and exact verification"};
    app.require_subcommand(1);
    Options o;

    auto* hr = app.add_subcommand("hr", "lowest terms of the generating polynomial H_r");
    add_family(hr, o);
    hr->add_option("--r", o.r, "residue class of p mod d")->required();
    hr->add_option("--k-cap", o.k_cap, "degree cap");

    auto* frob = app.add_subcommand("frobenius", "m, n, beta table for a prime (CSV)");
    add_family(frob, o);
    frob->add_option("--p", o.p, "prime")->required();
    frob->add_option("--out", o.out, "output path (default stdout)");

    auto* predict = app.add_subcommand("predict", "predicted generic Newton polygons");
    add_family(predict, o);
    add_range(predict, o);
    add_output(predict, o);

    auto* dwork = app.add_subcommand("dwork", "tame minor term tables (CSV)");
    add_family(dwork, o);
    dwork->add_option("--p", o.p, "prime")->required();
    dwork->add_option("--ell", o.ell, "truncation level (default from the degree cap)");
    dwork->add_option("--k-cap", o.k_cap, "degree cap");
    dwork->add_option("--out", o.out, "output path (default stdout)");

    auto* oracle = app.add_subcommand("oracle", "exact L-functions by point counting");
    oracle->require_subcommand(1);
    auto* onp = oracle->add_subcommand("np", "Newton polygon of one member");
    auto* ognp = oracle->add_subcommand("gnp", "lower envelope over a in F_p^*");
    auto* ozeta = oracle->add_subcommand("zeta", "integer zeta numerator of the Artin-Schreier curve");
    for (auto* cmd : {onp, ognp, ozeta}) {
        add_family(cmd, o);
        cmd->add_option("--p", o.p, "prime")->required();
        cmd->add_option("--budget", o.budget, "maximum field elements visited")->capture_default_str();
        cmd->add_option("--out", o.out, "output path (default stdout)");
    }
    onp->add_option("--a", o.a, "coefficient a in F_p")->required();
    ozeta->add_option("--a", o.a, "coefficient a in F_p")->required();

    auto* verify = app.add_subcommand("verify", "prediction against the oracle per (p, a)");
    auto* sweep = app.add_subcommand("sweep", "per-prime match summary over every residue");
    for (auto* cmd : {verify, sweep}) {
        add_family(cmd, o);
        add_range(cmd, o);
        add_output(cmd, o);
        cmd->add_option("--a", o.a, "single coefficient a");
        cmd->add_option("--sample", o.sample, "number of random nonzero a per prime");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (*hr) cmd_hr(o);
        else if (*frob) cmd_frobenius(o);
        else if (*predict) cmd_predict(o);
        else if (*dwork) cmd_dwork(o);
        else if (*onp) cmd_oracle_np(o);
        else if (*ognp) cmd_oracle_gnp(o);
        else if (*ozeta) cmd_oracle_zeta(o);
        else if (*verify) return cmd_verify(o);
        else if (*sweep) return cmd_sweep(o);
        return 0;
    } catch (const gnp::HypothesisError& e) {
        std::cerr << "hypothesis violated: " << e.what() << '\n';
        return 2;
    } catch (const gnp::BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return 3;
    } catch (const gnp::ConsistencyError& e) {
        std::cerr << "consistency failure: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
