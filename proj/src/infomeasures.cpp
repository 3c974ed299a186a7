#include "infolab/infomeasures.hpp"

#include "infolab/parallel.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <numbers>
#include <optional>

namespace infolab {

namespace {

const double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;

// The score can blow up like 1/(y - edge) at a support edge.
double score_slope(const AdditiveNoiseChannel& ch, double y, const DiffConfig& diff) {
    const Interval s = ch.smooth_interval(y);
    return derivative([&ch](double t) { return ch.stats(t, true).score(); }, y, 1, step_within(diff, y, s), s);
}

double parameter_score(const AdditiveNoiseChannel& ch, double y, const DiffConfig& diff) {
    return derivative([&ch, y](double t) { return std::log(ch.with_a(t).stats(y, false).f); }, ch.a(), 1, diff,
                      Interval(0.0, kInf));
}

// Cubic B-spline table of y -> E[X|Y=y] over the central part of the Y law.
// Samples outside the table, or channels whose posterior mean has kinks, fall
// back to the exact quadrature value.
class PosteriorMeanTable {
public:
    explicit PosteriorMeanTable(const AdditiveNoiseChannel& ch) : ch_(ch) {
        if (!ch.kinks().empty()) return;
        const double sa = std::sqrt(ch.a());
        lo_ = ch.prior().quantile(1e-4) + sa * ch.noise().quantile(1e-4);
        hi_ = ch.prior().quantile(1 - 1e-4) + sa * ch.noise().quantile(1 - 1e-4);
        for (std::size_t intervals = 2048; intervals <= (1u << 15); intervals *= 2) {
            if (build(intervals)) return;
        }
        spline_.reset();
    }

    double operator()(double y) const {
        if (spline_ && y >= lo_ && y <= hi_) return (*spline_)(y);
        return ch_.stats(y, false).mean;
    }

private:
    bool build(std::size_t intervals) {
        const double h = (hi_ - lo_) / static_cast<double>(intervals);
        std::vector<double> values(intervals + 1);
        parallel_for(values.size(), [&](std::size_t j) { values[j] = ch_.stats(lo_ + h * j, false).mean; });
        if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) return false;
        spline_.emplace(values.begin(), values.end(), lo_, h);

        // Midpoints are the worst case for the interpolant; the end intervals are included.
        constexpr int probes = 33;
        for (int k = 0; k < probes; ++k) {
            const std::size_t j = k * (intervals - 1) / (probes - 1);
            const double y = lo_ + h * (j + 0.5);
            const double exact = ch_.stats(y, false).mean;
            if (std::abs((*spline_)(y)-exact) > 1e-7 * (1.0 + std::abs(exact))) return false;
        }
        return true;
    }

    const AdditiveNoiseChannel& ch_;
    double lo_ = 0.0, hi_ = 0.0;
    std::optional<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline_;
};

struct Moments {
    double count = 0.0, mean = 0.0, m2 = 0.0;

    void add(double v) {
        count += 1.0;
        const double d = v - mean;
        mean += d / count;
        m2 += d * (v - mean);
    }
    void merge(const Moments& o) {
        if (o.count == 0.0) return;
        const double n = count + o.count;
        const double d = o.mean - mean;
        mean += d * o.count / n;
        m2 += o.m2 + d * d * count * o.count / n;
        count = n;
    }
};

// f_Y starts linearly at a finite edge of its support when both the prior and
// the noise densities are positive at the matching edges; S_Y ~ 1/(y - edge)
// there and E[S_Y^2] diverges.
bool linear_support_edge(const AdditiveNoiseChannel& ch) {
    const Interval ps = ch.prior().support(), ns = ch.noise().support();
    const auto positive = [](const Distribution& d, double e) { return std::isfinite(e) && d.pdf(e) > 0.0; };
    return (positive(ch.prior(), ps.lo) && positive(ch.noise(), ns.lo)) ||
           (positive(ch.prior(), ps.hi) && positive(ch.noise(), ns.hi));
}

}  // namespace

std::string_view to_string(Method m) noexcept { return m == Method::Quadrature ? "quadrature" : "monte_carlo"; }

double differential_entropy(const AdditiveNoiseChannel& ch) {
    return ch.expect([](const PosteriorStats& st) { return -std::log(st.f); }, false);
}

double conditional_entropy_noise(const AdditiveNoiseChannel& ch) {
    return differential_entropy(ch.noise(), ch.quad()) + 0.5 * std::log(ch.a());
}

double conditional_entropy(const AdditiveNoiseChannel& ch) {
    return differential_entropy(ch.prior(), ch.quad()) + conditional_entropy_noise(ch) - differential_entropy(ch);
}

double entropy_power(double h) {
    if (!std::isfinite(h)) fail(ErrorKind::NonFinite, "entropy power of a non-finite entropy");
    return std::exp(2.0 * h) / kTwoPiE;
}

double conditional_entropy_power(const AdditiveNoiseChannel& ch) { return entropy_power(conditional_entropy(ch)); }

double fisher_location(const AdditiveNoiseChannel& ch) {
    if (linear_support_edge(ch)) return kInf;
    return ch.expect([](const PosteriorStats& st) { return st.score() * st.score(); }, true);
}

double fisher_location_dual(const AdditiveNoiseChannel& ch, const DiffConfig& diff) {
    if (linear_support_edge(ch)) return kInf;
    double e = ch.expect([&](const PosteriorStats& st) { return score_slope(ch, st.y, diff); }, false);
    for (const auto& j : ch.score_jumps()) e += j.at.f * j.jump;
    return -e;
}

double fisher_parameter(const AdditiveNoiseChannel& ch, const DiffConfig& diff) {
    return ch.expect(
        [&](const PosteriorStats& st) {
            const double s = parameter_score(ch, st.y, diff);
            return s * s;
        },
        false);
}

double conditional_fisher(const AdditiveNoiseChannel& ch) {
    const Distribution& w = ch.noise();
    const Interval ns = w.support();
    if ((std::isfinite(ns.lo) && w.pdf(ns.lo) > 0.0) || (std::isfinite(ns.hi) && w.pdf(ns.hi) > 0.0))
        fail(ErrorKind::PreconditionViolated, "the kernel of " + w.describe() + " is not differentiable in x");
    if (w.kind() == "gamma" && w.parameter("alpha") <= 2.0)
        fail(ErrorKind::PreconditionViolated, "gamma noise needs shape > 2 for a finite kernel Fisher information");

    const double sa = std::sqrt(ch.a());
    const auto wb = support_breaks(w, ch.quad().tail_mass);
    const auto xb = support_breaks(ch.prior(), ch.quad().tail_mass);
    return integrate(
        [&](double x) {
            const double px = ch.prior().pdf(x);
            if (px == 0.0) return 0.0;
            std::vector<double> yb(wb.size());
            for (std::size_t i = 0; i < wb.size(); ++i) yb[i] = x + sa * wb[i];
            const double jx = integrate(
                [&](double y) {
                    const double k = ch.conditional_pdf(y, x);
                    if (k == 0.0) return 0.0;
                    const double t = w.pdf_derivative((y - x) / sa) / (w.pdf((y - x) / sa) * sa);
                    return t * t * k;
                },
                std::span<const double>(yb), ch.quad());
            return px * jx;
        },
        std::span<const double>(xb), ch.quad());
}

double prior_fisher(const Distribution& dist, const QuadratureConfig& cfg) {
    const Interval s = dist.support();
    for (double e : {s.lo, s.hi}) {
        if (!std::isfinite(e)) continue;
        // A jump, or a nonzero slope at a zero edge, makes (p')^2/p non-integrable.
        if (dist.pdf(e) > 0.0 || dist.pdf_derivative(e) != 0.0) return kInf;
    }
    const auto b = support_breaks(dist, cfg.tail_mass);
    return integrate(
        [&](double x) {
            const double p = dist.pdf(x);
            if (!(p > 0.0)) return 0.0;
            const double d = dist.pdf_derivative(x);
            return d * d / p;
        },
        std::span<const double>(b), cfg);
}

InfoMeasureResult mmse(const AdditiveNoiseChannel& ch, Method method, const MonteCarloConfig& mc) {
    ch.prior().variance();
    if (method == Method::Quadrature) {
        const double v = ch.expect([](const PosteriorStats& st) { return st.var; }, false);
        return {v, Method::Quadrature, 0.0};
    }

    if (mc.n < 2) fail(ErrorKind::InvalidParameter, "Monte Carlo MMSE needs at least two samples");
    const PosteriorMeanTable mean(ch);
    const double sa = std::sqrt(ch.a());
    constexpr std::size_t chunk = 1u << 16;
    const std::size_t chunks = (mc.n + chunk - 1) / chunk;
    std::vector<Moments> parts(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        const std::size_t m = std::min(chunk, mc.n - c * chunk);
        const auto xs = ch.prior().sample(m, mix_seed(mc.seed, 2 * c));
        const auto ws = ch.noise().sample(m, mix_seed(mc.seed, 2 * c + 1));
        Moments acc;
        for (std::size_t i = 0; i < m; ++i) {
            const double e = xs[i] - mean(xs[i] + sa * ws[i]);
            acc.add(e * e);
        }
        parts[c] = acc;
    });
    Moments total;
    for (const auto& p : parts) total.merge(p);
    const double sd = std::sqrt(total.m2 / (total.count - 1.0));
    return {total.mean, Method::MonteCarlo, sd / std::sqrt(total.count)};
}

}  // namespace infolab
