#include "lindley/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "lindley/calibration.hpp"
#include "lindley/error.hpp"
#include "lindley/model.hpp"
#include "lindley/montecarlo.hpp"
#include "lindley/priors.hpp"
#include "lindley/text.hpp"

namespace lindley::cli {

namespace {

// Published constants reproduced by `calibrate --compare-paper`.
constexpr double kPublishedSigma = 0.44;
constexpr double kPublishedDomainEndText = 1.2930;
constexpr double kPublishedDomainEndCaption = 1.2933;

struct Options {
    std::string scheme = "kl";
    double x = 0.0;
    double sigma = 1.0;
    bool sigma_given = false;
    double alpha = 0.05;
    double alpha_b = 0.05;
    bool compare = false;

    std::string kind = "psi";
    double sigma_min = 0.1;
    double sigma_max = 3.0;
    std::size_t steps = 100;
    bool log_grid = false;
    std::string out_path;

    std::size_t n = 1'000'000;
    std::uint64_t seed = 0;
    double theta = 0.0;
    unsigned workers = 0;
};

const CLI::Validator kOpenUnit(
    [](std::string& s) -> std::string {
        const auto v = text::parse_double(s);
        if (!v || !(*v > 0.0 && *v < 1.0)) {
            return "value must lie strictly between 0 and 1";
        }
        return {};
    },
    "(0,1)");

const CLI::Validator kPositive(
    [](std::string& s) -> std::string {
        const auto v = text::parse_double(s);
        if (!v || !(*v > 0.0)) {
            return "value must be finite and positive";
        }
        return {};
    },
    "POSITIVE");

const CLI::Validator kFinite(
    [](std::string& s) -> std::string {
        if (!text::parse_double(s)) {
            return "value must be a finite number";
        }
        return {};
    },
    "REAL");

void field(std::ostream& out, const std::string& key, double value) {
    out << key << ": " << text::format_real(value) << '\n';
}

void field(std::ostream& out, const std::string& key, const std::string& value) {
    out << key << ": " << value << '\n';
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file '" + path + "'");
    }
    std::map<std::string, std::string> values;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = text::trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw DomainError("config line is not key=value: '" + std::string(t) + "'");
        }
        std::string key(text::trim(t.substr(0, eq)));
        std::replace(key.begin(), key.end(), '_', '-');
        values[key] = std::string(text::trim(t.substr(eq + 1)));
    }
    return values;
}

int cmd_posterior(const Options& o, std::ostream& out) {
    const auto scheme = PriorScheme::parse(o.scheme);
    const auto report =
        priors::posterior_report(Observation(o.x), AlternativeSpread(o.sigma), scheme, o.alpha_b);
    field(out, "scheme", report.scheme);
    field(out, "x", report.x);
    field(out, "sigma", report.sigma);
    field(out, "alpha_b", report.alpha_b);
    field(out, "bayes_factor", report.bayes_factor);
    field(out, "rho0", report.rho0);
    field(out, "m", report.m_value);
    field(out, "log_m", report.log_m);
    field(out, "posterior", report.posterior_h0);
    field(out, "decision", report.rejected ? "reject H0" : "retain H0");
    return kOk;
}

int cmd_bf(const Options& o, std::ostream& out) {
    const Observation obs(o.x);
    const AlternativeSpread spread(o.sigma);
    field(out, "x", o.x);
    field(out, "sigma", o.sigma);
    field(out, "bayes_factor", model::bayes_factor(obs, spread));
    field(out, "log_bayes_factor", model::log_bayes_factor(obs, spread));
    field(out, "marginal_alt", model::marginal_alt(obs, spread));
    return kOk;
}

void print_reference_check(const Options& o, const PriorScheme& scheme,
                           std::optional<double> sigma_star, std::ostream& out) {
    out << "reference_check:\n";
    field(out, "  published_sigma", kPublishedSigma);
    field(out, "  type_i_error_at_published_sigma",
          calibration::type_i_error(kPublishedSigma, o.alpha_b, scheme));
    if (sigma_star) {
        field(out, "  computed_sigma", *sigma_star);
        field(out, "  sigma_gap", *sigma_star - kPublishedSigma);
    } else {
        field(out, "  computed_sigma", "none");
    }
    field(out, "  published_domain_end_text", kPublishedDomainEndText);
    field(out, "  published_domain_end_caption", kPublishedDomainEndCaption);
    std::optional<double> bound;
    if (!scheme.is_table()) {
        bound = calibration::positivity_bound(o.alpha_b, scheme);
    }
    field(out, "  computed_domain_end", bound ? text::format_real(*bound) : "none");
    const bool sigma_match = sigma_star && std::abs(*sigma_star - kPublishedSigma) < 5e-3;
    const bool bound_match = bound && std::abs(*bound - kPublishedDomainEndText) < 5e-4;
    field(out, "  status", sigma_match && bound_match ? "match" : "mismatch");
}

int cmd_calibrate(const Options& o, std::ostream& out, std::ostream& err) {
    const auto scheme = PriorScheme::parse(o.scheme);
    const CalibrationSpec spec(o.alpha, o.alpha_b, scheme);
    try {
        const auto r = calibration::solve_sigma(spec);
        field(out, "scheme", scheme.name());
        field(out, "alpha", o.alpha);
        field(out, "alpha_b", o.alpha_b);
        field(out, "sigma_star", r.sigma_star);
        field(out, "psi", r.psi_at_sigma);
        field(out, "classical_threshold", calibration::classical_threshold(o.alpha));
        field(out, "achieved_alpha", r.achieved_alpha);
        field(out, "residual", r.residual);
        field(out, "bracket", "[" + text::format_real(r.bracket_used.lo) + ", " +
                                  text::format_real(r.bracket_used.hi) + "]");
        field(out, "evaluations", static_cast<double>(r.evaluations));
        if (o.compare) {
            print_reference_check(o, scheme, r.sigma_star, out);
        }
        return kOk;
    } catch (const InfeasibleError& e) {
        err << "error: " << e.what() << '\n';
        if (o.compare) {
            print_reference_check(o, scheme, std::nullopt, out);
        }
        return kDomain;
    }
}

std::vector<double> make_grid(const Options& o) {
    std::vector<double> grid(o.steps);
    for (std::size_t i = 0; i < o.steps; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(o.steps - 1);
        grid[i] = o.log_grid ? std::exp(std::log(o.sigma_min) +
                                        t * (std::log(o.sigma_max) - std::log(o.sigma_min)))
                             : o.sigma_min + t * (o.sigma_max - o.sigma_min);
    }
    grid.front() = o.sigma_min;
    grid.back() = o.sigma_max;
    return grid;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    if (!(o.sigma_min < o.sigma_max)) {
        throw CLI::ValidationError("--sigma-min", "must be smaller than --sigma-max");
    }
    const auto scheme = PriorScheme::parse(o.scheme);
    const auto grid = make_grid(o);

    std::optional<OutputTable> table;
    if (o.kind == "psi") {
        table.emplace(std::vector<std::string>{"sigma", "psi", "log_psi"});
        table->add_comment("kind", "psi");
        table->add_comment("scheme", scheme.name());
        table->add_comment("alpha_b", text::format_real(o.alpha_b));
        std::optional<PsiDomain> domain;
        if (!scheme.is_table()) {
            domain = calibration::psi_domain(o.alpha_b, scheme);
        }
        if (o.compare) {
            table->add_comment("reference_domain_end_text",
                               text::format_real(kPublishedDomainEndText));
            table->add_comment("reference_domain_end_caption",
                               text::format_real(kPublishedDomainEndCaption));
        }
        for (double s : grid) {
            if (!calibration::psi_defined(s, o.alpha_b, scheme)) {
                continue;
            }
            const double p = calibration::psi(s, o.alpha_b, scheme);
            table->add_row({s, p, std::log(p)});
        }
        if (domain && domain->lo > o.sigma_min) {
            table->add_trailer("domain_start", "sigma=" + text::format_real(domain->lo));
        }
        if (domain && domain->hi < o.sigma_max) {
            table->add_trailer("domain_end", "sigma=" + text::format_real(domain->hi));
        }
        if (domain && domain->empty) {
            table->add_trailer("domain_empty", "sigma=all");
        }
    } else if (o.kind == "paradox") {
        table.emplace(std::vector<std::string>{"sigma", "rho0", "m", "posterior_h0"});
        table->add_comment("kind", "paradox");
        table->add_comment("scheme", scheme.name());
        table->add_comment("x", text::format_real(o.x));
        for (const auto& row : priors::paradox_sweep(scheme, o.x, grid)) {
            table->add_row({row.sigma, row.rho0, row.m, row.posterior_h0});
        }
    } else {
        throw CLI::ValidationError("--kind", "must be psi or paradox");
    }

    if (o.out_path.empty()) {
        table->write_csv(out);
        return kOk;
    }
    std::ofstream file(o.out_path);
    if (!file) {
        throw IoError("cannot write '" + o.out_path + "'");
    }
    table->write_csv(file);
    file.close();
    if (!file) {
        throw IoError("failed while writing '" + o.out_path + "'");
    }
    field(out, "wrote", o.out_path);
    field(out, "rows", static_cast<double>(table->rows().size()));
    return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
    const auto scheme = PriorScheme::parse(o.scheme);
    SimulationPlan plan;
    plan.n = o.n;
    plan.seed = o.seed;
    plan.theta = o.theta;
    plan.alpha_b = o.alpha_b;
    plan.scheme = scheme;
    std::string sigma_source = "given";
    if (o.sigma_given) {
        plan.sigma = o.sigma;
    } else {
        plan.sigma = calibration::solve_sigma(CalibrationSpec(o.alpha, o.alpha_b, scheme)).sigma_star;
        sigma_source = "calibrated to alpha=" + text::format_real(o.alpha);
    }

    const auto r = plan.theta == 0.0 ? montecarlo::simulate_type_i(plan, o.workers)
                                     : montecarlo::simulate_power(plan, o.workers);
    field(out, "scheme", scheme.name());
    field(out, "sigma", plan.sigma);
    field(out, "sigma_source", sigma_source);
    field(out, "alpha_b", plan.alpha_b);
    field(out, "theta", r.theta);
    field(out, "n", std::to_string(r.n));
    field(out, "seed", std::to_string(r.seed));
    field(out, "rejections", std::to_string(r.rejections));
    field(out, "threshold_rejections", std::to_string(r.threshold_rejections));
    field(out, "estimate", r.estimate);
    field(out, "std_error", r.std_error);
    field(out, "ci95_lo", r.ci95_lo);
    field(out, "ci95_hi", r.ci95_hi);
    field(out, "analytic_value", r.analytic_value);
    field(out, "within_3se", r.within_3se ? "true" : "false");
    return kOk;
}

int cmd_regime(const Options& o, std::ostream& out) {
    const auto scheme = PriorScheme::parse(o.scheme);
    const auto ev = priors::classify_regime(scheme);
    field(out, "scheme", scheme.name());
    field(out, "case", "(" + ev.regime.case_label() + ")");
    field(out, "regime", ev.regime.name());
    if (ev.regime.kind == Regime::Kind::Finite) {
        field(out, "limit", ev.regime.limit);
    }
    field(out, "m_at_1e3", ev.m_mid);
    field(out, "m_at_1e6", ev.m_far);
    field(out, "log_m_at_1e3", ev.log_m_mid);
    field(out, "log_m_at_1e6", ev.log_m_far);
    field(out, "sigma_times_m_at_1e6", ev.sigma_times_m_far);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    std::string config_path;

    CLI::App app{"Point-null normal testing: Bayes factors, prior regimes and Type I calibration",
                 "lindley"};
    app.set_help_all_flag("--help-all");
    app.add_option("--config", config_path, "File of key=value lines supplying default flags");
    app.require_subcommand(1);

    auto add_scheme = [&](CLI::App* sub) {
        sub->add_option("--scheme", o.scheme, "fixed:<rho0> | robert | kl | table:<path>")
            ->capture_default_str();
    };
    auto add_alpha_b = [&](CLI::App* sub) {
        sub->add_option("--alpha-b", o.alpha_b, "Reject H0 when P(H0|x) < alpha_b")
            ->check(kOpenUnit)
            ->capture_default_str();
    };

    auto* posterior = app.add_subcommand("posterior", "Posterior probability of H0 for one x");
    posterior->add_option("--x", o.x, "Observation")->required()->check(kFinite);
    posterior->add_option("--sigma", o.sigma, "Prior sd of theta under H1")
        ->required()
        ->check(kPositive);
    add_scheme(posterior);
    add_alpha_b(posterior);

    auto* bf = app.add_subcommand("bf", "Bayes factor B01 and the marginal under H1");
    bf->add_option("--x", o.x, "Observation")->required()->check(kFinite);
    bf->add_option("--sigma", o.sigma, "Prior sd of theta under H1")->required()->check(kPositive);

    auto* calibrate = app.add_subcommand("calibrate", "Solve for sigma matching a Type I error");
    calibrate->add_option("--alpha", o.alpha, "Target Type I error")
        ->check(kOpenUnit)
        ->capture_default_str();
    add_alpha_b(calibrate);
    add_scheme(calibrate);
    calibrate->add_flag("--compare-paper", o.compare,
                        "Also report the published reference values and the gap to them");

    auto* sweep = app.add_subcommand("sweep", "Emit a CSV sweep over sigma");
    sweep->add_option("--kind", o.kind, "psi | paradox")
        ->check(CLI::IsMember({"psi", "paradox"}))
        ->capture_default_str();
    add_scheme(sweep);
    add_alpha_b(sweep);
    sweep->add_option("--x", o.x, "Observation (paradox sweep)")->check(kFinite);
    sweep->add_option("--sigma-min", o.sigma_min)->check(kPositive)->capture_default_str();
    sweep->add_option("--sigma-max", o.sigma_max)->check(kPositive)->capture_default_str();
    sweep->add_option("--steps", o.steps)->check(CLI::Range(2, 10'000'000))->capture_default_str();
    sweep->add_flag("--log-grid", o.log_grid, "Geometric instead of linear spacing");
    sweep->add_option("--out", o.out_path, "Output CSV path (stdout if omitted)");
    sweep->add_flag("--compare-paper", o.compare, "Add published reference values as comments");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo rejection rate");
    auto* sigma_opt = simulate->add_option("--sigma", o.sigma,
                                           "Prior sd of theta (default: calibrated to --alpha)");
    sigma_opt->check(kPositive);
    simulate->add_option("--alpha", o.alpha, "Target alpha used when --sigma is omitted")
        ->check(kOpenUnit)
        ->capture_default_str();
    add_alpha_b(simulate);
    add_scheme(simulate);
    simulate->add_option("--n", o.n)->check(CLI::Range(std::size_t{1}, std::size_t{1} << 40))
        ->capture_default_str();
    simulate->add_option("--seed", o.seed)->capture_default_str();
    simulate->add_option("--theta", o.theta, "True theta (0 = Type I error)")
        ->check(kFinite)
        ->capture_default_str();
    simulate->add_option("--workers", o.workers, "Threads (0 = all cores)");

    auto* regime = app.add_subcommand("regime", "Asymptotic regime of m(sigma)");
    add_scheme(regime);

    std::vector<std::string> argv = args;
    try {
        // Splice config defaults in as flags unless the command line already sets them.
        const auto cfg_it = std::find(argv.begin(), argv.end(), "--config");
        if (cfg_it != argv.end() && cfg_it + 1 != argv.end()) {
            const auto config = read_config(*(cfg_it + 1));
            CLI::App* sub = nullptr;
            for (const auto& a : argv) {
                for (auto* candidate : app.get_subcommands({})) {
                    if (candidate->get_name() == a) {
                        sub = candidate;
                    }
                }
                if (sub) {
                    break;
                }
            }
            if (sub) {
                for (const auto& [key, value] : config) {
                    const std::string flag = "--" + key;
                    auto* opt = sub->get_option_no_throw(flag);
                    if (!opt || std::find(argv.begin(), argv.end(), flag) != argv.end()) {
                        continue;
                    }
                    if (opt->get_items_expected_max() == 0) {
                        if (value == "true" || value == "1" || value == "yes" || value == "on") {
                            argv.push_back(flag);
                        }
                        continue;
                    }
                    argv.push_back(flag);
                    argv.push_back(value);
                }
            }
        }

        std::vector<std::string> reversed(argv.rbegin(), argv.rend());
        app.parse(reversed);
        o.sigma_given = sigma_opt->count() > 0;

        if (posterior->parsed()) return cmd_posterior(o, out);
        if (bf->parsed()) return cmd_bf(o, out);
        if (calibrate->parsed()) return cmd_calibrate(o, out, err);
        if (sweep->parsed()) return cmd_sweep(o, out);
        if (simulate->parsed()) return cmd_simulate(o, out);
        if (regime->parsed()) return cmd_regime(o, out);
        return kUsage;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << "usage: lindley [--config FILE] {posterior|bf|calibrate|sweep|simulate|regime} "
               "[flags]  (--help for details)\n";
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kDomain;
    }
}

}  // namespace lindley::cli
