#include "infolab/cli.hpp"

#include "infolab/config.hpp"
#include "infolab/parallel.hpp"
#include "infolab/report.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace infolab::cli {

namespace {

bool skips(ErrorKind k) {
    return k == ErrorKind::PreconditionViolated || k == ErrorKind::AssumptionViolated ||
           k == ErrorKind::InvalidParameter;
}

IdentityRow run_cell(const Verifier& v, const RunConfig& cfg, double a) {
    IdentityRow row;
    row.verifier = v.name;
    row.a = a;
    const AdditiveNoiseChannel ch(cfg.prior, cfg.noise, a);
    row.report.channel_desc = ch.describe();
    row.report.a = a;
    VerifyOptions opt;
    if (const auto it = cfg.tolerances.find(v.name); it != cfg.tolerances.end()) opt.tolerance = it->second;
    try {
        row.report = v.run(ch, opt);
    } catch (const Error& e) {
        if (skips(e.kind())) {
            row.skipped = true;
            row.skip_reason = e.what();
        } else {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.report.lhs = row.report.rhs = row.report.abs_residual = row.report.rel_residual = nan;
            row.report.tolerance = nan;
            row.report.pass = false;
            row.report.notes = e.what();
        }
    }
    return row;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string ordering_table(const BoundsCurve& curve, const std::vector<OrderingReport>& ordering) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%9s %12s %12s %12s %12s %10s  %s\n", "snr_db", "a", "mmse", "new_lb", "bcrlb",
                  "tol", "ordering");
    os << line;
    for (std::size_t i = 0; i < curve.rows.size(); ++i) {
        const BoundsRow& r = curve.rows[i];
        const OrderingReport& o = ordering[i];
        std::snprintf(line, sizeof line, "%9.3f %12.6g %12.6g %12.6g %12.6g %10.2e  %s\n", r.snr_db, r.a, r.mmse,
                      r.new_lb, r.bcrlb, o.tolerance, o.pass ? "ok" : "VIOLATED");
        os << line;
    }
    return os.str();
}

}  // namespace

int cmd_verify(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
    std::optional<RunConfig> cfg;
    try {
        cfg.emplace(load_run_config(config_path));
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }

    struct Cell {
        const Verifier* verifier;
        double a;
    };
    std::vector<Cell> cells;
    for (const auto& name : cfg->identities)
        for (double a : cfg->a_values) cells.push_back({find_verifier(name), a});

    std::vector<IdentityRow> rows(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) { rows[i] = run_cell(*cells[i].verifier, *cfg, cells[i].a); });

    const std::string table = identities_table(rows);
    std::ostringstream summary;
    summary << "prior: " << cfg->prior.describe() << "\nnoise: " << cfg->noise.describe() << "\n\n" << table;
    try {
        write_atomic(cfg->output_dir / "identities.csv", identities_csv(rows));
        write_atomic(cfg->output_dir / "identities_summary.txt", summary.str());
    } catch (const std::exception& e) {
        err << "cannot write output: " << e.what() << '\n';
        return kExitConfigError;
    }
    out << summary.str();

    const bool all_pass =
        std::all_of(rows.begin(), rows.end(), [](const IdentityRow& r) { return r.skipped || r.report.pass; });
    return all_pass ? kExitPass : kExitFailure;
}

int cmd_bounds(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
    std::optional<RunConfig> cfg;
    try {
        cfg.emplace(load_run_config(config_path));
        if (cfg->noise.kind() != "gaussian") throw ConfigError("the bounds command needs Gaussian noise");
        if (!cfg->prior.has_variance()) throw ConfigError("the prior needs a finite variance for the MMSE");
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }

    BoundsCurve curve;
    std::optional<CostaReport> costa;
    try {
        curve = bounds_sweep(cfg->prior, cfg->noise, cfg->a_values,
                             cfg->mmse_monte_carlo ? Method::MonteCarlo : Method::Quadrature,
                             {cfg->mc_n, cfg->seed});
        if (!cfg->costa_a_grid.empty()) costa = costa_epi_check(cfg->prior, cfg->noise, cfg->costa_a_grid);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return skips(e.kind()) ? kExitConfigError : kExitFailure;
    }

    const SweepVerdict verdict = evaluate_sweep(curve);
    std::ostringstream summary;
    summary << "prior: " << curve.prior_desc << "\nnoise: " << curve.noise_desc << '\n'
            << curve.snr_definition << "\n\n"
            << ordering_table(curve, verdict.ordering);
    summary << "ordering mmse >= new_lb >= bcrlb: " << (verdict.ordering_ok ? "holds" : "VIOLATED") << '\n';

    double spread = 0.0, tol = kInf;
    for (const auto& o : verdict.ordering) {
        spread = std::max(spread, std::max({o.mmse, o.new_lb, o.bcrlb}) - std::min({o.mmse, o.new_lb, o.bcrlb}));
        tol = std::min(tol, o.tolerance);
    }
    if (spread <= tol)
        summary << "all three bounds coincide within " << fmt("%.2e", tol) << " (max spread "
                << fmt("%.2e", spread) << ")\n";

    if (costa) {
        summary << "entropy power concavity: max second difference " << fmt("%.3e", costa->max_second_diff)
                << (costa->concave ? " (concave)" : " (NOT concave)") << "; min chord gap "
                << fmt("%.3e", costa->min_chord_gap) << (costa->chord ? " (chord holds)" : " (chord VIOLATED)")
                << '\n';
    }

    try {
        write_atomic(cfg->output_dir / "bounds.csv", bounds_csv(curve));
        write_atomic(cfg->output_dir / "bounds.meta.json", bounds_metadata(curve, cfg->seed, cfg->mc_n));
        write_atomic(cfg->output_dir / "bounds_summary.txt", summary.str());
        if (costa) write_atomic(cfg->output_dir / "costa.csv", costa_csv(*costa));
    } catch (const std::exception& e) {
        err << "cannot write output: " << e.what() << '\n';
        return kExitConfigError;
    }
    out << summary.str();
    return verdict.ordering_ok && (!costa || costa->pass) ? kExitPass : kExitFailure;
}

int cmd_figure1(const Figure1Options& opt, std::ostream& out, std::ostream& err) {
    if (opt.points < 2) {
        err << "usage error: --points must be at least 2\n";
        return kExitConfigError;
    }
    if (opt.mc_n < 2) {
        err << "usage error: --mc-n must be at least 2\n";
        return kExitConfigError;
    }

    const Distribution prior = student_t(3.0);
    const Distribution noise = gaussian(0.0, 1.0);
    BoundsCurve curve;
    try {
        curve = figure1_sweep(prior, noise, linear_grid(-10.0, 30.0, opt.points), {opt.mc_n, opt.seed});
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    const SweepVerdict v = evaluate_sweep(curve);

    std::ostringstream summary;
    summary << "prior: " << curve.prior_desc << "\nnoise: " << curve.noise_desc << '\n'
            << curve.snr_definition << "\n\n"
            << ordering_table(curve, v.ordering);
    summary << "ordering mmse >= new_lb >= bcrlb: " << (v.ordering_ok ? "holds" : "VIOLATED") << '\n';
    summary << "gap new_lb - bcrlb: " << fmt("%.6g", v.low_gap) << " at " << fmt("%g", v.low_snr_db) << " dB, "
            << fmt("%.6g", v.high_gap) << " at " << fmt("%g", v.high_snr_db) << " dB ("
            << (v.gap_ok ? "larger at low SNR" : "NOT larger at low SNR") << ")\n";
    for (const auto& c : curve.cross_checks)
        summary << "mmse cross check at " << fmt("%g", c.snr_db) << " dB: monte carlo " << fmt("%.6g", c.monte_carlo)
                << " +- " << fmt("%.2g", c.mc_error) << ", quadrature " << fmt("%.6g", c.quadrature)
                << (c.agree ? "" : " (DISAGREE)") << '\n';

    try {
        write_atomic(opt.out_dir / "figure1.csv", bounds_csv(curve));
        write_atomic(opt.out_dir / "figure1.plt", figure1_gnuplot("figure1.csv"));
        write_atomic(opt.out_dir / "figure1.meta.json", bounds_metadata(curve, opt.seed, opt.mc_n));
    } catch (const std::exception& e) {
        err << "cannot write output: " << e.what() << '\n';
        return kExitConfigError;
    }
    out << summary.str();
    return v.ordering_ok && v.gap_ok ? kExitPass : kExitFailure;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Information-estimation identities and bounds for additive noise channels"};
    app.require_subcommand(1);

    std::string verify_path, bounds_path;
    auto* verify = app.add_subcommand("verify", "Run identity verifiers from a config file");
    verify->add_option("config", verify_path, "JSON run configuration")->required();
    auto* bounds = app.add_subcommand("bounds", "Compute MMSE, BCRLB and N(X|Y) from a config file");
    bounds->add_option("config", bounds_path, "JSON run configuration")->required();

    Figure1Options fig;
    std::string out_dir = ".";
    auto* figure1 = app.add_subcommand("figure1", "Student-t(3) bounds sweep over SNR");
    figure1->add_option("--out", out_dir, "Output directory");
    figure1->add_option("--seed", fig.seed, "Monte Carlo seed");
    figure1->add_option("--points", fig.points, "Number of SNR points from -10 to 30 dB");
    figure1->add_option("--mc-n", fig.mc_n, "Monte Carlo sample size per point");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kExitConfigError;
    }

    if (verify->parsed()) return cmd_verify(verify_path, out, err);
    if (bounds->parsed()) return cmd_bounds(bounds_path, out, err);
    fig.out_dir = out_dir;
    return cmd_figure1(fig, out, err);
}

}  // namespace infolab::cli
