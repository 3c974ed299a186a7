#include "infolab/numerics.hpp"

#include "infolab/distributions.hpp"

#include <numbers>

namespace infolab {

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
        std::ostringstream os;
        os << "interval requires lo < hi, got [" << lo << ", " << hi << "]";
        fail(ErrorKind::InvalidParameter, os.str());
    }
}

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0)) fail(ErrorKind::InvalidParameter, "rel_tol must be positive");
    if (!(abs_tol > 0.0)) fail(ErrorKind::InvalidParameter, "abs_tol must be positive");
    if (max_subdivisions < 1) fail(ErrorKind::InvalidParameter, "max_subdivisions must be positive");
    if (!(tail_mass > 0.0 && tail_mass <= 1e-6))
        fail(ErrorKind::InvalidParameter, "tail_mass must lie in (0, 1e-6]");
}

void DiffConfig::validate() const {
    if (!(base_step > 0.0)) fail(ErrorKind::InvalidParameter, "base_step must be positive");
    if (richardson_levels < 1) fail(ErrorKind::InvalidParameter, "richardson_levels must be >= 1");
}

namespace detail {

const GaussLegendre15& gauss_legendre_15() {
    static const GaussLegendre15 rule = [] {
        constexpr int n = 15;
        GaussLegendre15 r{};
        for (int i = 0; i < n; ++i) {
            // Newton iteration on P_n from the Chebyshev-like initial guess.
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            r.nodes[i] = x;
            r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

std::vector<Piece> make_pieces(std::span<const double> breaks) {
    if (breaks.size() < 2) fail(ErrorKind::InvalidParameter, "integration needs at least two breakpoints");
    std::vector<Piece> out;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = breaks[i];
        const double hi = breaks[i + 1];
        if (std::isnan(lo) || std::isnan(hi)) fail(ErrorKind::InvalidParameter, "NaN breakpoint");
        if (!(hi > lo)) continue;
        Piece p;
        if (std::isfinite(lo) && std::isfinite(hi)) {
            p.map = Piece::Map::Identity;
            p.t_lo = lo;
            p.t_hi = hi;
        } else if (std::isfinite(lo)) {
            p.map = Piece::Map::UpperInfinite;
            p.anchor = lo;
            p.scale = std::max(1.0, std::abs(lo));
            p.t_lo = 0.0;
            p.t_hi = 1.0;
        } else if (std::isfinite(hi)) {
            p.map = Piece::Map::LowerInfinite;
            p.anchor = hi;
            p.scale = std::max(1.0, std::abs(hi));
            p.t_lo = 0.0;
            p.t_hi = 1.0;
        } else {
            p.map = Piece::Map::BothInfinite;
            p.t_lo = -1.0;
            p.t_hi = 1.0;
        }
        out.push_back(p);
    }
    if (out.empty()) fail(ErrorKind::InvalidParameter, "integration domain is empty");
    return out;
}

}  // namespace detail

namespace {

enum class Stencil { Central, Forward, Backward };

double difference(const std::function<double(double)>& f, double x0, double f0, double h, int order,
                  Stencil st) {
    switch (st) {
        case Stencil::Central:
            if (order == 1) return (f(x0 + h) - f(x0 - h)) / (2.0 * h);
            return (f(x0 + h) - 2.0 * f0 + f(x0 - h)) / (h * h);
        case Stencil::Forward:
            if (order == 1) return (f(x0 + h) - f0) / h;
            return (f0 - 2.0 * f(x0 + h) + f(x0 + 2.0 * h)) / (h * h);
        case Stencil::Backward:
            if (order == 1) return (f0 - f(x0 - h)) / h;
            return (f0 - 2.0 * f(x0 - h) + f(x0 - 2.0 * h)) / (h * h);
    }
    return 0.0;
}

}  // namespace

double derivative(const std::function<double(double)>& f, double x0, int order, const DiffConfig& cfg,
                  const Interval& domain) {
    cfg.validate();
    if (order != 1 && order != 2) fail(ErrorKind::InvalidParameter, "derivative order must be 1 or 2");
    if (!(x0 > domain.lo && x0 < domain.hi)) {
        std::ostringstream os;
        os << "x0 = " << x0 << " is not interior to [" << domain.lo << ", " << domain.hi << "]";
        fail(ErrorKind::DomainViolation, os.str());
    }
    const double h = cfg.base_step * std::max(std::abs(x0), 1.0);
    const double room_lo = x0 - domain.lo;
    const double room_hi = domain.hi - x0;

    Stencil st;
    if (room_lo >= 4.0 * h && room_hi >= 4.0 * h) {
        st = Stencil::Central;
    } else if (room_hi >= 4.0 * h) {
        st = Stencil::Forward;
    } else if (room_lo >= 4.0 * h) {
        st = Stencil::Backward;
    } else {
        std::ostringstream os;
        os << "difference stencil of width " << 4.0 * h << " does not fit around x0 = " << x0;
        fail(ErrorKind::DomainViolation, os.str());
    }

    // Central differences have even error expansions, one-sided ones do not.
    const double factor = st == Stencil::Central ? 4.0 : 2.0;
    const bool need_f0 = st != Stencil::Central || order == 2;
    const double f0 = need_f0 ? f(x0) : 0.0;

    const int levels = cfg.richardson_levels;
    std::vector<double> prev(levels), cur(levels);
    double step = h;
    for (int k = 0; k < levels; ++k) {
        cur[0] = difference(f, x0, f0, step, order, st);
        double pw = factor;
        for (int j = 1; j <= k; ++j) {
            cur[j] = cur[j - 1] + (cur[j - 1] - prev[j - 1]) / (pw - 1.0);
            pw *= factor;
        }
        std::swap(prev, cur);
        step *= 0.5;
    }
    const double result = prev[levels - 1];
    if (!std::isfinite(result)) fail(ErrorKind::NonFinite, "derivative evaluated to a non-finite value");
    return result;
}

DiffConfig step_within(const DiffConfig& cfg, double x0, const Interval& domain) {
    DiffConfig out = cfg;
    const double room = std::min(x0 - domain.lo, domain.hi - x0) / std::max(std::abs(x0), 1.0);
    if (room > 0.0) out.base_step = std::min(cfg.base_step, room / 8.0);
    return out;
}

std::vector<double> sample(const Distribution& dist, std::size_t n, std::uint64_t seed) {
    if (n == 0) fail(ErrorKind::InvalidParameter, "sample size must be positive");
    return dist.sample(n, seed);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<double> normalize_breaks(std::vector<double> pts, double lo, double hi) {
    std::vector<double> out;
    out.reserve(pts.size() + 2);
    out.push_back(lo);
    for (double p : pts)
        if (std::isfinite(p) && p > lo && p < hi) out.push_back(p);
    out.push_back(hi);
    std::sort(out.begin(), out.end());
    const double scale = std::max({1.0, std::isfinite(lo) ? std::abs(lo) : 0.0, std::isfinite(hi) ? std::abs(hi) : 0.0});
    std::vector<double> uniq;
    uniq.reserve(out.size());
    for (double p : out) {
        if (!uniq.empty() && std::abs(p - uniq.back()) <= 1e-12 * scale) continue;
        uniq.push_back(p);
    }
    if (uniq.size() == 1 && hi > lo) uniq.push_back(hi);
    uniq.back() = hi;
    return uniq;
}

}  // namespace infolab
