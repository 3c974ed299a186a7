#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "infolab/distributions.hpp"
#include "infolab/numerics.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace infolab;

namespace {

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double poly(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

// Exact integral of a polynomial over [0, 1].
double poly_unit_integral(const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] / static_cast<double>(k + 1);
    return s;
}

}  // namespace

TEST_CASE("integrate constant and normal moments") {
    const QuadratureConfig cfg;
    CHECK(integrate([](double) { return 1.0; }, Interval(0.0, 1.0), cfg) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(integrate(phi, Interval::real_line(), cfg) - 1.0) <= 1e-10);
    CHECK(std::abs(integrate([](double x) { return x * x * phi(x); }, Interval::real_line(), cfg) - 1.0) <= 1e-9);
    CHECK(std::abs(integrate([](double x) { return std::pow(x, 4) * phi(x); }, Interval::real_line(), cfg) - 3.0) <=
          1e-9);
}

TEST_CASE("integrate half-infinite and endpoint singular integrands") {
    const QuadratureConfig cfg;
    CHECK(integrate([](double x) { return std::exp(-x); }, Interval(0.0, kInf), cfg) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(x); }, Interval(-kInf, 0.0), cfg) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // int_0^1 x^{-1/2} = 2
    CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, Interval(0.0, 1.0), cfg) ==
          doctest::Approx(2.0).epsilon(1e-9));
    // int 1/(1+x^2) over R = pi
    CHECK(integrate([](double x) { return 1.0 / (1.0 + x * x); }, Interval::real_line(), cfg) ==
          doctest::Approx(std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("integrate with breakpoints at a kink") {
    const QuadratureConfig cfg;
    const std::vector<double> b{-1.0, 0.3, 2.0};
    // |x - 0.3| over [-1, 2] = (1.3^2 + 1.7^2) / 2
    const double v = integrate([](double x) { return std::abs(x - 0.3); }, std::span<const double>(b), cfg);
    CHECK(v == doctest::Approx(0.5 * (1.3 * 1.3 + 1.7 * 1.7)).epsilon(1e-13));
}

TEST_CASE("integrate is linear on random polynomials") {
    const QuadratureConfig cfg;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> p(6), q(6);
        for (auto& c : p) c = u(rng);
        for (auto& c : q) c = u(rng);
        const double alpha = u(rng), beta = u(rng);
        const Interval unit(0.0, 1.0);
        const double ip = integrate([&](double x) { return poly(p, x); }, unit, cfg);
        const double iq = integrate([&](double x) { return poly(q, x); }, unit, cfg);
        const double ic = integrate([&](double x) { return alpha * poly(p, x) + beta * poly(q, x); }, unit, cfg);
        CHECK(std::abs(ic - alpha * ip - beta * iq) <= 10.0 * cfg.abs_tol);
        CHECK(ip == doctest::Approx(poly_unit_integral(p)).epsilon(1e-12));
    }
}

TEST_CASE("integrate_n returns every component") {
    const std::array<double, 2> b{-kInf, kInf};
    const auto r = integrate_n<3>(
        [](double x) {
            const double p = phi(x);
            return std::array<double, 3>{p, x * p, x * x * p};
        },
        std::span<const double>(b), QuadratureConfig{});
    CHECK(r.value[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.value[1]) <= 1e-12);
    CHECK(r.value[2] == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("integrate errors") {
    CHECK_THROWS_AS(integrate([](double) { return std::nan(""); }, Interval(0.0, 1.0), QuadratureConfig{}), Error);
    try {
        integrate([](double) { return kInf; }, Interval(0.0, 1.0), QuadratureConfig{});
        FAIL("expected NonFinite");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonFinite);
    }
    QuadratureConfig tiny;
    tiny.max_subdivisions = 3;
    tiny.rel_tol = 1e-15;
    tiny.abs_tol = 1e-300;
    try {
        integrate([](double x) { return std::sin(200.0 * x) * std::exp(x); }, Interval(0.0, 10.0), tiny);
        FAIL("expected NonConvergence");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonConvergence);
    }
}

TEST_CASE("config validation") {
    QuadratureConfig q;
    q.rel_tol = 0.0;
    CHECK_THROWS_AS(q.validate(), Error);
    q = {};
    q.tail_mass = 1e-3;
    CHECK_THROWS_AS(q.validate(), Error);
    DiffConfig d;
    d.base_step = -1.0;
    CHECK_THROWS_AS(d.validate(), Error);
    CHECK_THROWS_AS(Interval(1.0, 1.0), Error);
}

TEST_CASE("derivative on polynomials") {
    const DiffConfig cfg;
    CHECK(derivative([](double x) { return x * x; }, 3.0, 1, cfg) == doctest::Approx(6.0).epsilon(1e-8));
    CHECK(derivative([](double x) { return x * x * x; }, 2.0, 2, cfg) == doctest::Approx(12.0).epsilon(1e-6));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> c(4), q(5);
        for (auto& v : c) v = u(rng);
        for (auto& v : q) v = u(rng);
        const double x0 = 2.0 * u(rng);
        const double exact1 = c[1] + 2.0 * c[2] * x0 + 3.0 * c[3] * x0 * x0;
        const double d1 = derivative([&](double x) { return poly(c, x); }, x0, 1, cfg);
        CHECK(std::abs(d1 - exact1) <= 1e-8 * std::max(1.0, std::abs(exact1)));
        const double exact2 = 2.0 * q[2] + 6.0 * q[3] * x0 + 12.0 * q[4] * x0 * x0;
        const double d2 = derivative([&](double x) { return poly(q, x); }, x0, 2, cfg);
        CHECK(std::abs(d2 - exact2) <= 1e-6 * std::max(1.0, std::abs(exact2)));
    }
}

TEST_CASE("derivative of the Gaussian-Gaussian entropy in a") {
    const auto h = [](double a) { return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * (1.0 + a)); };
    CHECK(derivative(h, 1.0, 1, DiffConfig{}, Interval(0.0, kInf)) == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("derivative near a boundary goes one-sided, then fails") {
    const Interval pos(0.0, kInf);
    const auto cube = [](double x) { return x * x * x; };
    CHECK(derivative(cube, 2e-4, 1, DiffConfig{}, pos) == doctest::Approx(3.0 * 4e-8).epsilon(1e-6));
    try {
        derivative(cube, 5e-4, 1, DiffConfig{1e-3, 3}, Interval(0.0, 1e-3));
        FAIL("expected DomainViolation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DomainViolation);
    }
    CHECK_THROWS_AS(derivative(cube, -1.0, 1, DiffConfig{}, pos), Error);
    CHECK_THROWS_AS(derivative(cube, 1.0, 3, DiffConfig{}), Error);
}

TEST_CASE("sample is deterministic and matches moments") {
    const auto e = exponential_unit();
    const auto a = sample(e, 1'000'000, 42);
    const auto b = sample(e, 1'000'000, 42);
    CHECK(a == b);
    double m = 0.0;
    for (double x : a) m += x;
    m /= static_cast<double>(a.size());
    CHECK(std::abs(m - 1.0) <= 0.01);
    CHECK(std::all_of(a.begin(), a.end(), [](double x) { return x >= 0.0; }));

    const auto g = sample(gaussian(0.0, 1.0), 1'000'000, 3);
    double s = 0.0, s2 = 0.0;
    for (double x : g) {
        s += x;
        s2 += x * x;
    }
    const double n = static_cast<double>(g.size());
    CHECK(std::abs(s2 / n - (s / n) * (s / n) - 1.0) <= 0.01);
    CHECK(sample(gaussian(0.0, 1.0), 10, 3) != sample(gaussian(0.0, 1.0), 10, 4));
    CHECK_THROWS_AS(sample(e, 0, 1), Error);
}

TEST_CASE("mix_seed separates streams") {
    CHECK(mix_seed(0, 0) != mix_seed(0, 1));
    CHECK(mix_seed(1, 0) != mix_seed(0, 0));
    CHECK(mix_seed(5, 9) == mix_seed(5, 9));
}
