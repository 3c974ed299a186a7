#include "infolab/channel.hpp"

#include <cstdio>

namespace infolab {

namespace {

constexpr std::array<double, 9> kBreakProbs = {1e-6, 1e-3, 0.05, 0.25, 0.5, 0.75, 0.95, 1 - 1e-3, 1 - 1e-6};

std::vector<double> quantiles(const Distribution& d) {
    std::vector<double> out;
    out.reserve(kBreakProbs.size());
    for (double p : kBreakProbs) out.push_back(d.quantile(p));
    return out;
}

std::vector<double> finite_edges(const Interval& s) {
    std::vector<double> out;
    if (std::isfinite(s.lo)) out.push_back(s.lo);
    if (std::isfinite(s.hi)) out.push_back(s.hi);
    return out;
}

}  // namespace

double PosteriorStats::around_y(int k) const {
    const double d = y - mean;
    if (k == 1) return d;
    if (k == 2) return var + d * d;
    fail(ErrorKind::InvalidParameter, "posterior moment order must be 1 or 2");
}

AdditiveNoiseChannel::AdditiveNoiseChannel(Distribution prior, Distribution noise, double a, QuadratureConfig quad)
    : prior_(std::move(prior)), noise_(std::move(noise)), a_(a), sqrt_a_(std::sqrt(a)), quad_(quad) {
    if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorKind::InvalidParameter, "a must be positive");
    quad_.validate();
    prior_q_ = quantiles(prior_);
    noise_q_ = quantiles(noise_);

    for (double pe : finite_edges(prior_.support()))
        for (double ne : finite_edges(noise_.support())) kinks_.push_back(pe + sqrt_a_ * ne);
    std::sort(kinks_.begin(), kinks_.end());
    kinks_.erase(std::unique(kinks_.begin(), kinks_.end()), kinks_.end());

    const Interval pe = prior_.effective_support(quad_.tail_mass);
    const Interval ne = noise_.effective_support(quad_.tail_mass);
    std::vector<double> pts = kinks_;
    const double pmed = prior_.median();
    const double nmed = noise_.median();
    for (std::size_t i = 0; i < kBreakProbs.size(); ++i) {
        pts.push_back(prior_q_[i] + sqrt_a_ * noise_q_[i]);
        pts.push_back(pmed + sqrt_a_ * noise_q_[i]);
        pts.push_back(prior_q_[i] + sqrt_a_ * nmed);
    }
    y_breaks_ = normalize_breaks(std::move(pts), pe.lo + sqrt_a_ * ne.lo, pe.hi + sqrt_a_ * ne.hi);
}

std::string AdditiveNoiseChannel::describe() const { return "X~" + prior_.describe() + " W~" + noise_.describe(); }

AdditiveNoiseChannel AdditiveNoiseChannel::with_a(double a) const { return {prior_, noise_, a, quad_}; }

AdditiveNoiseChannel AdditiveNoiseChannel::with_quadrature(const QuadratureConfig& quad) const {
    return {prior_, noise_, a_, quad};
}

double AdditiveNoiseChannel::conditional_pdf(double y, double x) const {
    return noise_.pdf((y - x) / sqrt_a_) / sqrt_a_;
}

PosteriorStats AdditiveNoiseChannel::stats(double y, bool with_derivative) const {
    PosteriorStats st;
    st.y = y;
    st.df = with_derivative ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    st.mean = st.var = std::numeric_limits<double>::quiet_NaN();

    const Interval ps = prior_.support();
    const Interval ns = noise_.support();

    // Jumps of the kernel at the noise support edges contribute point terms to d/dy.
    if (with_derivative) {
        if (std::isfinite(ns.lo)) st.df += noise_.pdf(ns.lo) * prior_.pdf(y - sqrt_a_ * ns.lo) / sqrt_a_;
        if (std::isfinite(ns.hi)) st.df -= noise_.pdf(ns.hi) * prior_.pdf(y - sqrt_a_ * ns.hi) / sqrt_a_;
    }

    const double lo = std::max(ps.lo, y - sqrt_a_ * ns.hi);
    const double hi = std::min(ps.hi, y - sqrt_a_ * ns.lo);
    if (!(lo < hi)) return st;

    std::vector<double> pts = prior_q_;
    for (double q : noise_q_) pts.push_back(y - sqrt_a_ * q);
    const auto breaks = normalize_breaks(std::move(pts), lo, hi);

    auto base = [&](double x) { return prior_.pdf(x) * noise_.pdf((y - x) / sqrt_a_) / sqrt_a_; };

    // Normalize by the largest probed value so tolerances are relative to the
    // peak, and center the moments at the probe argmax to avoid cancellation.
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < breaks.size(); ++i) {
        std::array<double, 2> probes{breaks[i], kInf};
        if (i + 1 < breaks.size()) probes[1] = 0.5 * (breaks[i] + breaks[i + 1]);
        for (double x : probes) {
            if (!std::isfinite(x)) continue;
            const double v = base(x);
            if (v > s) {
                s = v;
                c = x;
            }
        }
    }
    if (!(s > 0.0)) {
        s = 1.0;
        c = std::isfinite(lo) ? (std::isfinite(hi) ? 0.5 * (lo + hi) : lo) : (std::isfinite(hi) ? hi : 0.0);
    }

    QuadratureConfig inner = quad_;
    inner.rel_tol = std::max(quad_.rel_tol * 1e-2, 1e-13);
    inner.abs_tol = std::max(quad_.abs_tol * 1e-2, 1e-15);

    auto moments = [&](double x, double b) {
        const double d = x - c;
        return std::array<double, 3>{b, d * b, d * d * b};
    };
    std::array<double, 4> v{};
    if (with_derivative) {
        const auto r = integrate_n<4>(
            [&](double x) {
                const double px = prior_.pdf(x);
                const double w = (y - x) / sqrt_a_;
                const double b = px * noise_.pdf(w) / (sqrt_a_ * s);
                const auto m = moments(x, b);
                return std::array<double, 4>{m[0], m[1], m[2], px * noise_.pdf_derivative(w) / (a_ * s)};
            },
            std::span<const double>(breaks), inner);
        v = r.value;
    } else {
        const auto r = integrate_n<3>([&](double x) { return moments(x, base(x) / s); },
                                      std::span<const double>(breaks), inner);
        std::copy(r.value.begin(), r.value.end(), v.begin());
    }

    st.f = s * v[0];
    if (with_derivative) st.df += s * v[3];
    if (v[0] > 0.0) {
        const double d1 = v[1] / v[0];
        st.mean = c + d1;
        st.var = std::max(0.0, v[2] / v[0] - d1 * d1);
    }
    return st;
}

PosteriorStats AdditiveNoiseChannel::checked_stats(double y, bool with_derivative) const {
    const PosteriorStats st = stats(y, with_derivative);
    if (!(st.f > degenerate_threshold())) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "f_Y(%g) = %g is below the threshold %g", y, st.f, degenerate_threshold());
        fail(ErrorKind::DegenerateDensity, buf);
    }
    return st;
}

double AdditiveNoiseChannel::marginal_pdf(double y) const { return stats(y, false).f; }

double AdditiveNoiseChannel::marginal_pdf_derivative(double y) const { return stats(y, true).df; }

double AdditiveNoiseChannel::posterior_mean(double y) const { return checked_stats(y, false).mean; }

double AdditiveNoiseChannel::posterior_moment(double y, int k, Center center) const {
    if (k != 1 && k != 2) fail(ErrorKind::InvalidParameter, "posterior moment order must be 1 or 2");
    const PosteriorStats st = checked_stats(y, false);
    if (center == Center::AroundY) return st.around_y(k);
    return k == 1 ? st.mean : st.var + st.mean * st.mean;
}

double AdditiveNoiseChannel::score_location(double y) const { return checked_stats(y, true).score(); }

Interval AdditiveNoiseChannel::smooth_interval(double y) const {
    double lo = -kInf, hi = kInf;
    for (double k : kinks_) {
        if (k == y) fail(ErrorKind::DomainViolation, "f_Y is not smooth at a kink of the marginal");
        if (k < y) lo = std::max(lo, k);
        if (k > y) hi = std::min(hi, k);
    }
    return {lo, hi};
}

std::vector<ScoreJump> AdditiveNoiseChannel::score_jumps() const {
    std::vector<ScoreJump> out;
    const Interval ys = y_support();
    for (double k : kinks_) {
        if (!(k > ys.lo && k < ys.hi)) continue;
        const double d = 1e-9 * std::max(1.0, std::abs(k));
        const PosteriorStats left = stats(k - d, true);
        const PosteriorStats right = stats(k + d, true);
        if (!(left.f > 0.0 && right.f > 0.0)) continue;
        const PosteriorStats at = stats(k, false);
        out.push_back({at, right.score() - left.score()});
    }
    return out;
}

double AdditiveNoiseChannel::score_location_derivative(double y, const DiffConfig& diff) const {
    checked_stats(y, false);
    const Interval s = smooth_interval(y);
    return derivative([this](double t) { return stats(t, true).score(); }, y, 1, step_within(diff, y, s), s);
}

double AdditiveNoiseChannel::score_parameter(double y, const DiffConfig& diff) const {
    checked_stats(y, false);
    return derivative([this, y](double t) { return std::log(with_a(t).stats(y, false).f); }, a_, 1, diff,
                      Interval(0.0, kInf));
}

double AdditiveNoiseChannel::kernel_pde_residual(double y, double x, const DiffConfig& diff) const {
    const Interval ns = noise_.support();
    const double d = y - x;
    const double w = d / sqrt_a_;
    if (!(w > ns.lo && w < ns.hi)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "(y - x)/sqrt(a) = %g is not interior to the noise support", w);
        fail(ErrorKind::DomainViolation, buf);
    }

    // Values of a keeping (y - x)/sqrt(a) inside the noise support.
    double a_lo = 0.0, a_hi = kInf;
    if (d > 0.0) {
        if (std::isfinite(ns.hi)) a_lo = std::max(a_lo, (d / ns.hi) * (d / ns.hi));
        if (ns.lo > 0.0) a_hi = std::min(a_hi, (d / ns.lo) * (d / ns.lo));
    } else if (d < 0.0) {
        if (std::isfinite(ns.lo)) a_lo = std::max(a_lo, (d / ns.lo) * (d / ns.lo));
        if (ns.hi < 0.0) a_hi = std::min(a_hi, (d / ns.hi) * (d / ns.hi));
    }

    auto kernel = [&](double yy, double aa) { return noise_.pdf((yy - x) / std::sqrt(aa)) / std::sqrt(aa); };
    const double lhs = derivative([&](double aa) { return kernel(y, aa); }, a_, 1, diff, Interval(a_lo, a_hi));
    const double dy = derivative([&](double yy) { return (yy - x) * kernel(yy, a_); }, y, 1, diff,
                                 Interval(x + sqrt_a_ * ns.lo, x + sqrt_a_ * ns.hi));
    return lhs + dy / (2.0 * a_);
}

double AdditiveNoiseChannel::expect(const std::function<double(const PosteriorStats&)>& g,
                                    bool with_derivative) const {
    return expect(g, with_derivative, quad_);
}

double AdditiveNoiseChannel::expect(const std::function<double(const PosteriorStats&)>& g, bool with_derivative,
                                    const QuadratureConfig& outer) const {
    return integrate(
        [&](double y) {
            const PosteriorStats st = stats(y, with_derivative);
            if (!(st.f > 0.0)) return 0.0;
            return st.f * g(st);
        },
        std::span<const double>(y_breaks_), outer);
}

CompanionChannel::CompanionChannel(const AdditiveNoiseChannel& base, int shape_shift)
    : base_(base),
      shift_(shape_shift),
      companion_([&] {
          const Distribution& w = base.noise();
          if (w.kind() != "gamma") fail(ErrorKind::InvalidParameter, "companion channels need gamma noise");
          const double alpha = w.parameter("alpha") + shape_shift;
          if (alpha < 1.0) fail(ErrorKind::InvalidParameter, "companion gamma shape must be >= 1");
          return AdditiveNoiseChannel(base.prior(), detail::gamma_any_shape(alpha, w.parameter("beta")), base.a(),
                                      base.quad());
      }()) {}

}  // namespace infolab
