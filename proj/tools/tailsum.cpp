// Command-line front end: scenario configuration, table reproduction,
// deterministic seeding and machine-readable output.
//
// Exit codes: 0 success, 2 usage/domain error, 3 capability error,
// 4 numerical error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tailsum/bounds.hpp"
#include "tailsum/errors.hpp"
#include "tailsum/estimators.hpp"
#include "tailsum/presets.hpp"
#include "tailsum/tableio.hpp"

namespace {

using namespace tailsum;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct CommonOpts {
    std::string family = "clayton";
    std::string mode = "copula";
    double tau = std::numeric_limits<double>::quiet_NaN();
    double param = std::numeric_limits<double>::quiet_NaN();
    std::string marginals;
    std::vector<double> s_values;
    std::string estimators = "all";
    std::uint64_t reps = 100000;
    std::uint64_t seed = 12345;
    std::string lambda = "tune";
    std::string kappa = "tune";
    std::uint64_t pilot_reps = 2000;
    int m = 0;
    bool force_m = false;
    std::string format = "csv";
    int workers = 0;
    bool full_precision = false;
};

void add_problem_flags(CLI::App* cmd, CommonOpts& o, bool need_marginals) {
    cmd->add_option("--family", o.family, "generator family: clayton or gumbel")
        ->check(CLI::IsMember({"clayton", "gumbel"}));
    cmd->add_option("--mode", o.mode, "dependence mode: copula or survival")
        ->check(CLI::IsMember({"copula", "survival"}));
    auto* tau = cmd->add_option("--tau", o.tau, "Kendall's tau in (0,1)");
    auto* par = cmd->add_option("--param", o.param, "raw generator parameter");
    tau->excludes(par);
    par->excludes(tau);
    auto* marg = cmd->add_option("--marginals", o.marginals,
                                 "marginal spec, e.g. pareto:2.5,2.5 (defines n)");
    if (need_marginals) marg->required();
    cmd->add_option("--workers", o.workers,
                    "worker count (0 = TAILSUM_WORKERS env or hardware default, 1 = serial)");
    cmd->add_option("--format", o.format, "output format: csv or markdown")
        ->check(CLI::IsMember({"csv", "markdown", "md"}));
    cmd->add_flag("--full-precision", o.full_precision,
                  "print 17 significant digits instead of 6");
    cmd->set_config("--config", "", "flat key = value config file; flags override file values");
}

Family parse_family(const std::string& name) {
    return name == "gumbel" ? Family::gumbel : Family::clayton;
}

Mode parse_mode(const std::string& name) {
    return name == "survival" ? Mode::survival_y : Mode::copula_x;
}

struct ResolvedProblem {
    Family family;
    Mode mode;
    double param;
    std::optional<double> tau;
    std::vector<MarginalPtr> marginals;

    TailProblem at(double s) const {
        return TailProblem(mode, ArchimedeanGenerator(family, param), marginals, s);
    }
};

ResolvedProblem resolve_problem(const CommonOpts& o) {
    ResolvedProblem r{parse_family(o.family), parse_mode(o.mode), 0.0, std::nullopt, {}};
    const bool has_tau = !std::isnan(o.tau);
    const bool has_param = !std::isnan(o.param);
    if (has_tau && has_param) throw domain_error("--tau and --param are mutually exclusive");
    if (has_param) {
        r.param = o.param;
    } else {
        const double tau = has_tau ? o.tau : 0.5;
        r.param = tau_to_param(r.family, tau);
        r.tau = tau;
    }
    r.marginals = parse_marginals(o.marginals);
    return r;
}

std::vector<EstimatorKind> parse_estimators(const std::string& spec) {
    std::vector<EstimatorKind> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "all") {
            out.insert(out.end(), {EstimatorKind::nr1, EstimatorKind::nr2, EstimatorKind::nr3,
                                   EstimatorKind::nr4});
        } else if (item == "nr1") {
            out.push_back(EstimatorKind::nr1);
        } else if (item == "nr2") {
            out.push_back(EstimatorKind::nr2);
        } else if (item == "nr3") {
            out.push_back(EstimatorKind::nr3);
        } else if (item == "nr4") {
            out.push_back(EstimatorKind::nr4);
        } else if (item == "mc") {
            out.push_back(EstimatorKind::plain_mc);
        } else {
            throw domain_error("unknown estimator \"" + item + "\" (nr1..nr4, mc, all)");
        }
    }
    if (out.empty()) throw domain_error("no estimator selected");
    return out;
}

void log_config(const CommonOpts& o, const ResolvedProblem& r) {
    std::cerr << "# config family=" << family_name(r.family) << " mode=" << mode_name(r.mode)
              << " marginals=" << o.marginals << " estimator=" << o.estimators
              << " reps=" << o.reps << " format=" << o.format << "\n";
    std::cerr << "# generator " << family_name(r.family) << " param=" << r.param;
    if (r.tau) std::cerr << " (tau=" << *r.tau << ")";
    std::cerr << "\n# seed " << o.seed << "\n";
}

void log_phase(const std::string& what, double seconds) {
    std::cerr << "# phase " << what << ": " << seconds << " s\n";
}

// Resolves lambda/kappa (numeric literal or "tune") for one problem.
double resolve_split(const TailProblem& p, EstimatorKind kind, const std::string& text,
                     std::uint64_t pilot_reps, std::uint64_t seed) {
    if (text != "tune") {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw domain_error("cannot parse split parameter \"" + text + "\"");
        return v;
    }
    const auto grid = default_tuning_grid(kind, p.dim());
    const double t0 = now_seconds();
    const double v = tune_parameter(p, kind, grid, pilot_reps, seed);
    log_phase(std::string("tune ") + estimator_name(kind) + " s=" + std::to_string(p.s),
              now_seconds() - t0);
    return v;
}

int cmd_estimate(const CommonOpts& o) {
    const auto r = resolve_problem(o);
    log_config(o, r);
    const auto kinds = parse_estimators(o.estimators);
    if (o.s_values.empty()) throw domain_error("--s requires at least one threshold");
    for (double s : o.s_values)
        if (!(s > 0.0)) throw domain_error("thresholds must be strictly positive");

    ResultTable table;
    table.header = {"family", "mode", "param", "s"};
    const bool has_nr3 = std::find(kinds.begin(), kinds.end(), EstimatorKind::nr3) != kinds.end();
    const bool has_nr4 = std::find(kinds.begin(), kinds.end(), EstimatorKind::nr4) != kinds.end();
    if (has_nr3) table.header.push_back("nr3_lambda");
    if (has_nr4) table.header.push_back("nr4_kappa");
    for (auto k : kinds) {
        const std::string n = estimator_name(k);
        table.header.push_back(n + "_mean");
        table.header.push_back(n + "_cv");
        table.header.push_back(n + "_rmsre");
    }

    for (double s : o.s_values) {
        const auto p = r.at(s);
        EstimatorParams params;
        if (has_nr3)
            params.lambda = resolve_split(p, EstimatorKind::nr3, o.lambda, o.pilot_reps, o.seed);
        if (has_nr4)
            params.kappa = resolve_split(p, EstimatorKind::nr4, o.kappa, o.pilot_reps, o.seed);

        std::vector<std::string> row = {family_name(r.family), mode_name(r.mode),
                                        format_number(r.param, true), format_number(s, true)};
        if (has_nr3) row.push_back(format_number(*params.lambda, true));
        if (has_nr4) row.push_back(format_number(*params.kappa, true));
        for (auto k : kinds) {
            const double t0 = now_seconds();
            const auto rep = run_replications(p, k, params, o.reps, o.seed, o.workers);
            log_phase(std::string("estimate s=") + format_number(s, false) + " " +
                          estimator_name(k),
                      now_seconds() - t0);
            row.push_back(format_number(rep.mean, o.full_precision));
            row.push_back(format_number(rep.cv, o.full_precision));
            row.push_back(format_number(rep.rms_re, o.full_precision));
            if (rep.clamp_rate > 0.0)
                std::cerr << "# clamp-rate " << estimator_name(k) << " s=" << s << ": "
                          << rep.clamp_rate << "\n";
        }
        table.rows.push_back(std::move(row));
    }
    table.write(std::cout, parse_output_format(o.format));
    return 0;
}

int cmd_bounds(const CommonOpts& o) {
    const auto r = resolve_problem(o);
    log_config(o, r);
    if (o.s_values.empty()) throw domain_error("--s requires at least one threshold");
    const int m = o.m > 0 ? o.m : 20;
    BoundsOptions bopts;
    bopts.allow_large_m = o.force_m;
    bopts.workers = o.workers;

    ResultTable table;
    table.header = {"family", "mode", "param", "s", "m", "lower", "upper"};
    for (double s : o.s_values) {
        const auto p = r.at(s);
        const double t0 = now_seconds();
        const auto b = bounds_tail(p, m, bopts);
        log_phase("bounds s=" + format_number(s, false) + " m=" + std::to_string(m),
                  now_seconds() - t0);
        table.rows.push_back({family_name(r.family), mode_name(r.mode),
                              format_number(r.param, true), format_number(s, true),
                              std::to_string(b.m), format_number(b.lower, o.full_precision),
                              format_number(b.upper, o.full_precision)});
    }
    table.write(std::cout, parse_output_format(o.format));
    return 0;
}

int cmd_table(const std::string& preset, const CommonOpts& o) {
    const auto scenarios = preset_scenarios(preset);
    std::cerr << "# preset " << preset << " (" << scenarios.size() << " scenario blocks)\n";
    std::cerr << "# seed " << o.seed << " reps " << o.reps << "\n";
    const bool with_bounds = scenarios.front().bounds_m.has_value();

    ResultTable table;
    table.header = {"family", "mode", "tau", "s"};
    if (with_bounds) {
        table.header.push_back("m");
        table.header.push_back("lower");
        table.header.push_back("upper");
    }
    table.header.push_back("nr3_lambda");
    table.header.push_back("nr4_kappa");
    for (auto k : {EstimatorKind::nr1, EstimatorKind::nr2, EstimatorKind::nr3, EstimatorKind::nr4}) {
        const std::string n = estimator_name(k);
        table.header.push_back(n + "_mean");
        table.header.push_back(n + "_cv");
    }

    BoundsOptions bopts;
    bopts.allow_large_m = o.force_m;
    bopts.workers = o.workers;
    for (const auto& sc : scenarios) {
        for (double s : sc.s_values) {
            const auto p = sc.problem(s);
            std::vector<std::string> row = {family_name(sc.family), mode_name(sc.mode),
                                            format_number(sc.tau, true), format_number(s, true)};
            if (with_bounds) {
                const int m = o.m > 0 ? o.m : *sc.bounds_m;
                const double t0 = now_seconds();
                const auto b = bounds_tail(p, m, bopts);
                log_phase("bounds s=" + format_number(s, false) + " m=" + std::to_string(m),
                          now_seconds() - t0);
                row.push_back(std::to_string(b.m));
                row.push_back(format_number(b.lower, o.full_precision));
                row.push_back(format_number(b.upper, o.full_precision));
            }
            EstimatorParams params;
            params.lambda = resolve_split(p, EstimatorKind::nr3, o.lambda, o.pilot_reps, o.seed);
            params.kappa = resolve_split(p, EstimatorKind::nr4, o.kappa, o.pilot_reps, o.seed);
            row.push_back(format_number(*params.lambda, true));
            row.push_back(format_number(*params.kappa, true));
            for (auto k :
                 {EstimatorKind::nr1, EstimatorKind::nr2, EstimatorKind::nr3, EstimatorKind::nr4}) {
                const double t0 = now_seconds();
                const auto rep = run_replications(p, k, params, o.reps, o.seed, o.workers);
                log_phase(std::string(family_name(sc.family)) + "/" + mode_name(sc.mode) +
                              " tau=" + format_number(sc.tau, false) + " s=" +
                              format_number(s, false) + " " + estimator_name(k),
                          now_seconds() - t0);
                row.push_back(format_number(rep.mean, o.full_precision));
                row.push_back(format_number(rep.cv, o.full_precision));
            }
            table.rows.push_back(std::move(row));
        }
    }
    table.write(std::cout, parse_output_format(o.format));
    return 0;
}

int cmd_tune(const CommonOpts& o, const std::string& grid_text) {
    const auto r = resolve_problem(o);
    log_config(o, r);
    const auto kinds = parse_estimators(o.estimators);
    if (kinds.size() != 1 ||
        (kinds[0] != EstimatorKind::nr3 && kinds[0] != EstimatorKind::nr4))
        throw domain_error("tune requires --estimator nr3 or --estimator nr4");
    if (o.s_values.empty()) throw domain_error("--s requires a threshold");
    const auto p = r.at(o.s_values.front());

    std::vector<double> grid;
    if (grid_text.empty()) {
        grid = default_tuning_grid(kinds[0], p.dim());
    } else {
        std::stringstream ss(grid_text);
        std::string item;
        while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
    }
    const double chosen = tune_parameter(p, kinds[0], grid, o.pilot_reps, o.seed);

    ResultTable table;
    const std::string pname = kinds[0] == EstimatorKind::nr3 ? "lambda" : "kappa";
    table.header = {pname, "pilot_variance", "chosen"};
    for (double g : grid) {
        EstimatorParams params;
        if (kinds[0] == EstimatorKind::nr3)
            params.lambda = g;
        else
            params.kappa = g;
        const auto rep = run_replications(p, kinds[0], params, o.pilot_reps, o.seed, o.workers);
        table.rows.push_back({format_number(g, true), format_number(rep.variance, true),
                              g == chosen ? "1" : "0"});
    }
    table.write(std::cout, parse_output_format(o.format));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tailsum: exceedance probabilities for dependent regularly varying sums "
                 "under Archimedean and survival-Archimedean dependence"};
    app.require_subcommand(1);

    CommonOpts opt;
    std::string preset;
    std::string grid_text;

    auto* est = app.add_subcommand("estimate", "run conditional Monte Carlo estimators");
    add_problem_flags(est, opt, true);
    est->add_option("--s", opt.s_values, "threshold list")->required();
    est->add_option("--estimator", opt.estimators, "nr1|nr2|nr3|nr4|mc|all or comma list");
    est->add_option("--reps", opt.reps, "replications per estimator");
    est->add_option("--seed", opt.seed, "64-bit seed");
    est->add_option("--lambda", opt.lambda, "NR3 split in (0,1/n), or 'tune'");
    est->add_option("--kappa", opt.kappa, "NR4 split in (1/n,1), or 'tune'");
    est->add_option("--pilot-reps", opt.pilot_reps, "pilot replications for tuning");

    auto* bnd = app.add_subcommand("bounds", "compute deterministic tail bounds (n in {2,3})");
    add_problem_flags(bnd, opt, true);
    bnd->add_option("--s", opt.s_values, "threshold list")->required();
    bnd->add_option("--m", opt.m, "grid refinement exponent (default 20)");
    bnd->add_flag("--force-m", opt.force_m, "lift the cost guard on m");

    auto* tab = app.add_subcommand("table", "reproduce a benchmark table preset");
    tab->add_option("preset", preset, "table1 ... table6")->required();
    add_problem_flags(tab, opt, false);
    tab->add_option("--reps", opt.reps, "replications per estimator");
    tab->add_option("--seed", opt.seed, "64-bit seed");
    tab->add_option("--m", opt.m, "override the preset's bounds precision");
    tab->add_flag("--force-m", opt.force_m, "lift the cost guard on m");
    tab->add_option("--lambda", opt.lambda, "NR3 split or 'tune'");
    tab->add_option("--kappa", opt.kappa, "NR4 split or 'tune'");
    tab->add_option("--pilot-reps", opt.pilot_reps, "pilot replications for tuning");

    auto* tun = app.add_subcommand("tune", "grid-search lambda or kappa by pilot variance");
    add_problem_flags(tun, opt, true);
    tun->add_option("--s", opt.s_values, "threshold")->required();
    tun->add_option("--estimator", opt.estimators, "nr3 or nr4")->required();
    tun->add_option("--grid", grid_text, "comma-separated grid (default: 9 points)");
    tun->add_option("--pilot-reps", opt.pilot_reps, "pilot replications per grid point");
    tun->add_option("--seed", opt.seed, "64-bit seed");

    try {
        app.parse(argc, argv);
        const double t0 = now_seconds();
        int rc = 0;
        if (est->parsed()) rc = cmd_estimate(opt);
        if (bnd->parsed()) rc = cmd_bounds(opt);
        if (tab->parsed()) rc = cmd_table(preset, opt);
        if (tun->parsed()) rc = cmd_tune(opt, grid_text);
        log_phase("total", now_seconds() - t0);
        return rc;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const tailsum::capability_error& e) {
        std::cerr << "capability error: " << e.what() << "\n";
        return 3;
    } catch (const tailsum::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const tailsum::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
