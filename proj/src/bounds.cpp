#include "infolab/bounds.hpp"

#include "infolab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace infolab {

namespace {

void require_gaussian_noise(const Distribution& noise, const char* what) {
    if (noise.kind() != "gaussian")
        fail(ErrorKind::PreconditionViolated, std::string(what) + " needs Gaussian noise, got " + noise.describe());
}

const BoundsRow& nearest_row(const std::vector<BoundsRow>& rows, double snr_db) {
    return *std::min_element(rows.begin(), rows.end(), [snr_db](const BoundsRow& l, const BoundsRow& r) {
        return std::abs(l.snr_db - snr_db) < std::abs(r.snr_db - snr_db);
    });
}

}  // namespace

double bcrlb(const AdditiveNoiseChannel& ch) {
    require_gaussian_noise(ch.noise(), "the Bayesian Cramer-Rao bound");
    // Location family: E_X[J(Y|X)] = J(W) / a.
    const double cond = prior_fisher(ch.noise(), ch.quad()) / ch.a();
    const double jx = prior_fisher(ch.prior(), ch.quad());
    if (!std::isfinite(jx)) return 0.0;
    return 1.0 / (cond + jx);
}

double new_lower_bound(const AdditiveNoiseChannel& ch) { return conditional_entropy_power(ch); }

OrderingReport ordering_from(double a, double mmse, double mc_error, double new_lb, double bcrlb) {
    OrderingReport r;
    r.a = a;
    r.mmse = mmse;
    r.mc_error = mc_error;
    r.new_lb = new_lb;
    r.bcrlb = bcrlb;
    r.tolerance = 3.0 * mc_error + 1e-4;
    r.mmse_above_new_lb = mmse >= new_lb - r.tolerance;
    r.new_lb_above_bcrlb = new_lb >= bcrlb - r.tolerance;
    r.pass = r.mmse_above_new_lb && r.new_lb_above_bcrlb;
    return r;
}

OrderingReport check_ordering(const AdditiveNoiseChannel& ch) {
    const double b = bcrlb(ch);
    const auto m = mmse(ch, Method::Quadrature);
    return ordering_from(ch.a(), m.value, m.est_error, new_lower_bound(ch), b);
}

OrderingReport check_ordering(const AdditiveNoiseChannel& ch, const MonteCarloConfig& mc) {
    const double b = bcrlb(ch);
    const auto m = mmse(ch, Method::MonteCarlo, mc);
    return ordering_from(ch.a(), m.value, m.est_error, new_lower_bound(ch), b);
}

CostaReport costa_epi_check(const Distribution& prior, const Distribution& noise, const std::vector<double>& a_grid,
                            const QuadratureConfig& quad) {
    require_gaussian_noise(noise, "the entropy power concavity check");
    if (a_grid.size() < 3) fail(ErrorKind::InvalidParameter, "the concavity check needs at least three grid points");
    for (std::size_t i = 0; i < a_grid.size(); ++i) {
        if (!(a_grid[i] > 0.0)) fail(ErrorKind::InvalidParameter, "a must be positive");
        if (i > 0 && !(a_grid[i] > a_grid[i - 1])) fail(ErrorKind::InvalidParameter, "a grid must be increasing");
    }

    CostaReport r;
    r.a = a_grid;
    r.power.resize(a_grid.size());
    const AdditiveNoiseChannel base(prior, noise, 1.0, quad);
    parallel_for(a_grid.size(),
                 [&](std::size_t i) { r.power[i] = entropy_power(differential_entropy(base.with_a(a_grid[i]))); });

    r.max_second_diff = -kInf;
    for (std::size_t i = 1; i + 1 < a_grid.size(); ++i) {
        const double left = (r.power[i] - r.power[i - 1]) / (a_grid[i] - a_grid[i - 1]);
        const double right = (r.power[i + 1] - r.power[i]) / (a_grid[i + 1] - a_grid[i]);
        const double d2 = 2.0 * (right - left) / (a_grid[i + 1] - a_grid[i - 1]);
        r.second_diff.push_back(d2);
        r.max_second_diff = std::max(r.max_second_diff, d2);
    }
    r.concave = r.max_second_diff <= r.tolerance;

    const double n0 = entropy_power(differential_entropy(prior, quad));
    const double n1 = entropy_power(differential_entropy(base));
    r.min_chord_gap = kInf;
    for (std::size_t i = 1; i + 1 < a_grid.size(); ++i) {
        const double a = a_grid[i];
        if (a > 1.0) continue;
        const double gap = r.power[i] - ((1.0 - a) * n0 + a * n1);
        r.chord_gap.push_back(gap);
        r.min_chord_gap = std::min(r.min_chord_gap, gap);
    }
    r.chord = r.chord_gap.empty() || r.min_chord_gap >= -r.tolerance * 1e-2;
    r.pass = r.concave && r.chord;
    return r;
}

double a_from_snr_db(const Distribution& prior, const Distribution& noise, double snr_db) {
    return prior.variance() / (noise.variance() * std::pow(10.0, snr_db / 10.0));
}

double snr_db_from_a(const Distribution& prior, const Distribution& noise, double a) {
    return 10.0 * std::log10(prior.variance() / (a * noise.variance()));
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
    if (points == 0) return {};
    if (points == 1) return {lo};
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    g.back() = hi;
    return g;
}

namespace {

// Row i uses its own Monte Carlo seed so rows do not depend on scheduling.
void fill_rows(BoundsCurve& curve, const AdditiveNoiseChannel& base, Method method, const MonteCarloConfig& mc) {
    for (std::size_t i = 0; i < curve.rows.size(); ++i) {
        BoundsRow& row = curve.rows[i];
        const AdditiveNoiseChannel ch = base.with_a(row.a);
        const auto m = mmse(ch, method, {mc.n, mix_seed(mc.seed, i)});
        row.mmse = m.value;
        row.mc_error = m.est_error;
        row.bcrlb = bcrlb(ch);
        row.new_lb = new_lower_bound(ch);
    }
}

BoundsCurve empty_curve(const Distribution& prior, const Distribution& noise) {
    require_gaussian_noise(noise, "the bounds sweep");
    BoundsCurve curve;
    curve.prior_desc = prior.describe();
    curve.noise_desc = noise.describe();
    curve.snr_definition = "snr_db = 10 log10(Var(X) / (a Var(W)))";
    return curve;
}

}  // namespace

BoundsCurve bounds_sweep(const Distribution& prior, const Distribution& noise, const std::vector<double>& a_values,
                         Method mmse_method, const MonteCarloConfig& mc, const QuadratureConfig& quad) {
    BoundsCurve curve = empty_curve(prior, noise);
    std::vector<double> as = a_values;
    for (double a : as)
        if (!(a > 0.0)) fail(ErrorKind::InvalidParameter, "a must be positive");
    std::sort(as.begin(), as.end(), std::greater<>());
    as.erase(std::unique(as.begin(), as.end()), as.end());
    for (double a : as) curve.rows.push_back({snr_db_from_a(prior, noise, a), a});
    fill_rows(curve, AdditiveNoiseChannel(prior, noise, 1.0, quad), mmse_method, mc);
    return curve;
}

BoundsCurve figure1_sweep(const Distribution& prior, const Distribution& noise, const std::vector<double>& snr_grid_db,
                          const MonteCarloConfig& mc, const QuadratureConfig& quad) {
    BoundsCurve curve = empty_curve(prior, noise);
    for (std::size_t i = 1; i < snr_grid_db.size(); ++i)
        if (!(snr_grid_db[i] > snr_grid_db[i - 1])) fail(ErrorKind::InvalidParameter, "SNR grid must be increasing");
    for (double s : snr_grid_db) curve.rows.push_back({s, a_from_snr_db(prior, noise, s)});

    const AdditiveNoiseChannel base(prior, noise, 1.0, quad);
    fill_rows(curve, base, Method::MonteCarlo, mc);

    std::vector<std::size_t> checks;
    if (!snr_grid_db.empty()) checks = {0, (snr_grid_db.size() - 1) / 2, snr_grid_db.size() - 1};
    checks.erase(std::unique(checks.begin(), checks.end()), checks.end());
    curve.cross_checks.resize(checks.size());
    parallel_for(checks.size(), [&](std::size_t k) {
        const BoundsRow& row = curve.rows[checks[k]];
        MmseCrossCheck& c = curve.cross_checks[k];
        c.snr_db = row.snr_db;
        c.monte_carlo = row.mmse;
        c.mc_error = row.mc_error;
        c.quadrature = mmse(base.with_a(row.a), Method::Quadrature).value;
        c.agree = std::abs(c.monte_carlo - c.quadrature) <= 3.0 * c.mc_error;
    });
    return curve;
}

SweepVerdict evaluate_sweep(const BoundsCurve& curve, double low_snr_db, double high_snr_db) {
    SweepVerdict v;
    v.ordering_ok = !curve.rows.empty();
    for (const auto& row : curve.rows) {
        v.ordering.push_back(ordering_from(row.a, row.mmse, row.mc_error, row.new_lb, row.bcrlb));
        v.ordering_ok = v.ordering_ok && v.ordering.back().pass;
    }
    if (!curve.rows.empty()) {
        const BoundsRow& lo = nearest_row(curve.rows, low_snr_db);
        const BoundsRow& hi = nearest_row(curve.rows, high_snr_db);
        v.low_snr_db = lo.snr_db;
        v.low_gap = lo.new_lb - lo.bcrlb;
        v.high_snr_db = hi.snr_db;
        v.high_gap = hi.new_lb - hi.bcrlb;
        v.gap_ok = v.low_snr_db < v.high_snr_db && v.low_gap > v.high_gap;
    }
    v.cross_check_ok = std::all_of(curve.cross_checks.begin(), curve.cross_checks.end(),
                                   [](const MmseCrossCheck& c) { return c.agree; });
    return v;
}

}  // namespace infolab
