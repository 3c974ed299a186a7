#pragma once

// Deterministic quadrature, numerical differentiation and seeded sampling.
//
// Quadrature is globally adaptive bisection over 15-point Gauss-Legendre
// panels. Each live segment keeps the panel value over the whole segment and
// the sum over its two halves; the difference is the error estimate and the
// halves are the accepted value. Infinite endpoints are mapped onto finite
// parameter intervals before panels are placed.

#include "infolab/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <sstream>
#include <vector>

namespace infolab {

class Distribution;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
    double lo = -kInf;
    double hi = kInf;

    Interval() = default;
    Interval(double lo_, double hi_);

    static Interval real_line() { return {}; }

    bool finite() const noexcept { return std::isfinite(lo) && std::isfinite(hi); }
    bool contains(double x) const noexcept { return x >= lo && x <= hi; }
    double width() const noexcept { return hi - lo; }
};

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    /// Probability mass left out on each side when an infinite support is truncated.
    double tail_mass = 1e-12;

    void validate() const;
};

struct DiffConfig {
    /// Relative step: h = base_step * max(|x0|, 1).
    double base_step = 1e-4;
    int richardson_levels = 3;

    void validate() const;
};

template <std::size_t N>
struct QuadratureResult {
    std::array<double, N> value{};
    std::array<double, N> error{};
    int subdivisions = 0;
};

namespace detail {

struct GaussLegendre15 {
    std::array<double, 15> nodes;
    std::array<double, 15> weights;
};

const GaussLegendre15& gauss_legendre_15();

// A piece of the integration domain expressed in a parameter t together with
// the map t -> x and its Jacobian.
struct Piece {
    enum class Map { Identity, UpperInfinite, LowerInfinite, BothInfinite };
    Map map = Map::Identity;
    double anchor = 0.0;
    /// Length scale of the half-infinite maps: max(1, |anchor|).
    double scale = 1.0;
    double t_lo = 0.0;
    double t_hi = 0.0;

    double to_x(double t, double& jac) const noexcept {
        switch (map) {
            case Map::Identity:
                jac = 1.0;
                return t;
            case Map::UpperInfinite: {
                const double s = 1.0 / (1.0 - t);
                jac = scale * s * s;
                return anchor + scale * t * s;
            }
            case Map::LowerInfinite: {
                const double s = 1.0 / (1.0 - t);
                jac = scale * s * s;
                return anchor - scale * t * s;
            }
            case Map::BothInfinite: {
                const double d = 1.0 - t * t;
                jac = (1.0 + t * t) / (d * d);
                return t / d;
            }
        }
        jac = 0.0;
        return 0.0;
    }
};

std::vector<Piece> make_pieces(std::span<const double> breaks);

template <std::size_t N, class F>
std::array<double, N> panel(F& f, const Piece& piece, double lo, double hi) {
    const auto& gl = gauss_legendre_15();
    const double c = 0.5 * (lo + hi);
    const double r = 0.5 * (hi - lo);
    std::array<double, N> acc{};
    for (std::size_t k = 0; k < 15; ++k) {
        double jac = 1.0;
        const double x = piece.to_x(c + r * gl.nodes[k], jac);
        std::array<double, N> v;
        if constexpr (N == 1) {
            v[0] = f(x);
        } else {
            v = f(x);
        }
        for (std::size_t i = 0; i < N; ++i) {
            if (!std::isfinite(v[i])) {
                std::ostringstream os;
                os << "integrand is not finite at x = " << x;
                fail(ErrorKind::NonFinite, os.str());
            }
            acc[i] += gl.weights[k] * v[i] * jac;
        }
    }
    for (auto& a : acc) a *= r;
    return acc;
}

}  // namespace detail

/// Integrates a vector-valued function over consecutive pieces delimited by
/// `breaks` (sorted; the first may be -inf and the last +inf). Every component
/// must satisfy error <= max(abs_tol, rel_tol * |value|).
template <std::size_t N, class F>
QuadratureResult<N> integrate_n(F&& f, std::span<const double> breaks, const QuadratureConfig& cfg) {
    struct Segment {
        detail::Piece piece;
        std::size_t order;
        double lo, hi;
        std::array<double, N> left, right;
        std::array<double, N> err;
        double priority;
    };

    const auto pieces = detail::make_pieces(breaks);
    std::vector<Segment> segs;
    segs.reserve(pieces.size() * 4);

    auto fill = [&](Segment& s, const std::array<double, N>& whole) {
        const double mid = 0.5 * (s.lo + s.hi);
        s.left = detail::panel<N>(f, s.piece, s.lo, mid);
        s.right = detail::panel<N>(f, s.piece, mid, s.hi);
        // Differences at the rounding level of the segment are not refinable error.
        constexpr double floor = 50.0 * std::numeric_limits<double>::epsilon();
        for (std::size_t i = 0; i < N; ++i) {
            const double diff = std::abs(whole[i] - (s.left[i] + s.right[i]));
            s.err[i] = std::max(0.0, diff - floor * (std::abs(s.left[i]) + std::abs(s.right[i])));
        }
    };

    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const auto& p = pieces[k];
        Segment s{p, k, p.t_lo, p.t_hi, {}, {}, {}, 0.0};
        fill(s, detail::panel<N>(f, p, p.t_lo, p.t_hi));
        segs.push_back(s);
    }

    std::array<double, N> total{}, total_err{};
    auto recompute = [&] {
        total.fill(0.0);
        total_err.fill(0.0);
        for (const auto& s : segs)
            for (std::size_t i = 0; i < N; ++i) {
                total[i] += s.left[i] + s.right[i];
                total_err[i] += s.err[i];
            }
    };
    recompute();

    std::array<double, N> scale{};
    for (std::size_t i = 0; i < N; ++i) scale[i] = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total[i]));
    auto priority = [&](const Segment& s) {
        double p = 0.0;
        for (std::size_t i = 0; i < N; ++i) p = std::max(p, s.err[i] / scale[i]);
        return p;
    };
    auto converged = [&] {
        for (std::size_t i = 0; i < N; ++i)
            if (total_err[i] > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total[i]))) return false;
        return true;
    };

    auto cmp = [&](std::size_t a, std::size_t b) { return segs[a].priority < segs[b].priority; };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);
    for (std::size_t i = 0; i < segs.size(); ++i) {
        segs[i].priority = priority(segs[i]);
        heap.push(i);
    }

    int splits = 0;
    while (!converged()) {
        if (splits >= cfg.max_subdivisions) {
            std::ostringstream os;
            os << "quadrature did not converge after " << splits << " subdivisions (error "
               << total_err[0] << ")";
            fail(ErrorKind::NonConvergence, os.str());
        }
        const std::size_t idx = heap.top();
        heap.pop();
        Segment parent = segs[idx];
        const double mid = 0.5 * (parent.lo + parent.hi);
        if (!(mid > parent.lo && mid < parent.hi)) {
            fail(ErrorKind::NonConvergence, "quadrature segment cannot be bisected further");
        }
        Segment l{parent.piece, parent.order, parent.lo, mid, {}, {}, {}, 0.0};
        Segment r{parent.piece, parent.order, mid, parent.hi, {}, {}, {}, 0.0};
        fill(l, parent.left);
        fill(r, parent.right);
        for (std::size_t i = 0; i < N; ++i) {
            total[i] += (l.left[i] + l.right[i] + r.left[i] + r.right[i]) - (parent.left[i] + parent.right[i]);
            total_err[i] += l.err[i] + r.err[i] - parent.err[i];
        }
        l.priority = priority(l);
        r.priority = priority(r);
        segs[idx] = l;
        heap.push(idx);
        segs.push_back(r);
        heap.push(segs.size() - 1);
        ++splits;
    }

    // Sum in domain order so the result does not depend on refinement history.
    std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) {
        return a.order != b.order ? a.order < b.order : a.lo < b.lo;
    });
    recompute();

    QuadratureResult<N> out;
    out.value = total;
    out.error = total_err;
    out.subdivisions = splits;
    return out;
}

template <class F>
double integrate(F&& f, std::span<const double> breaks, const QuadratureConfig& cfg) {
    return integrate_n<1>(std::forward<F>(f), breaks, cfg).value[0];
}

template <class F>
double integrate(F&& f, const Interval& domain, const QuadratureConfig& cfg) {
    const std::array<double, 2> b{domain.lo, domain.hi};
    return integrate(std::forward<F>(f), std::span<const double>(b), cfg);
}

/// Central difference with Richardson extrapolation; falls back to a one-sided
/// stencil when x0 is within 4h of a boundary of `domain` (treated as open).
double derivative(const std::function<double(double)>& f, double x0, int order, const DiffConfig& cfg,
                  const Interval& domain = Interval::real_line());

/// cfg with base_step reduced so the stencil around x0 spans at most an eighth
/// of the distance to the nearer end of `domain`.
DiffConfig step_within(const DiffConfig& cfg, double x0, const Interval& domain);

/// Seeded draw of n values from dist. Identical (dist, n, seed) gives identical output.
std::vector<double> sample(const Distribution& dist, std::size_t n, std::uint64_t seed);

/// Stateless seed mixer (splitmix64 finalizer) used to derive independent streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Sorts, clips to [lo, hi] and removes near-duplicate breakpoints.
std::vector<double> normalize_breaks(std::vector<double> pts, double lo, double hi);

}  // namespace infolab
