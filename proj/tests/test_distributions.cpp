#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "infolab/distributions.hpp"

#include <cmath>
#include <numbers>

using namespace infolab;

namespace {

std::vector<Distribution> catalog() {
    return {gaussian(0.0, 1.0),          gaussian(2.0, 3.0),   exponential_unit(),
            gamma_dist(2.0, 1.0),        gamma_dist(3.5, 2.0), student_t(3.0),
            student_t(1.0),              student_t(7.5),       truncated_gaussian(0.0, 1.0, -1.0, 2.0),
            truncated_gaussian(1.0, 4.0, 0.0, 3.0)};
}

double mass(const Distribution& d) {
    return integrate([&](double x) { return d.pdf(x); }, support_breaks(d, 1e-12), QuadratureConfig{});
}

// Quantile breakpoints with the true (possibly infinite) support ends.
std::vector<double> full_breaks(const Distribution& d) {
    auto b = support_breaks(d, 1e-12);
    b.front() = d.support().lo;
    b.back() = d.support().hi;
    return b;
}

// Closed-form student-t density.
double t_pdf(double nu, double x) {
    return std::tgamma(0.5 * (nu + 1)) / (std::sqrt(nu * std::numbers::pi) * std::tgamma(0.5 * nu)) *
           std::pow(1 + x * x / nu, -0.5 * (nu + 1));
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::NonFinite;
}

}  // namespace

TEST_CASE("constructor examples") {
    CHECK(gaussian(0, 1).pdf(0.0) == doctest::Approx(0.3989422804).epsilon(1e-10));
    CHECK(gaussian(0, 1).variance() == 1.0);
    CHECK(gaussian(2, 3).mean() == 2.0);
    CHECK(exponential_unit().pdf(0.0) == 1.0);
    CHECK(exponential_unit().pdf(-1.0) == 0.0);
    CHECK(exponential_unit().mean() == 1.0);
    CHECK(exponential_unit().variance() == 1.0);
    CHECK(exponential_unit().kind() == "exponential");
    CHECK(gamma_dist(2, 1).mean() == 2.0);
    CHECK(gamma_dist(3, 1).pdf(0.0) == 0.0);
    CHECK(student_t(3).variance() == doctest::Approx(3.0));
    CHECK(student_t(3).mean() == 0.0);
}

TEST_CASE("invalid parameters") {
    CHECK(kind_of([] { gaussian(0, 0); }) == ErrorKind::InvalidParameter);
    CHECK(kind_of([] { gamma_dist(1.5, 1); }) == ErrorKind::InvalidParameter);
    CHECK(kind_of([] { gamma_dist(2, 0); }) == ErrorKind::InvalidParameter);
    CHECK(kind_of([] { student_t(0); }) == ErrorKind::InvalidParameter);
    CHECK(kind_of([] { truncated_gaussian(0, 1, 1, 1); }) == ErrorKind::InvalidParameter);
    CHECK(kind_of([] { student_t(2).variance(); }) == ErrorKind::UndefinedMoment);
    CHECK(kind_of([] { student_t(1).mean(); }) == ErrorKind::UndefinedMoment);
    CHECK(kind_of([] { student_t(3).mgf(0.1); }) == ErrorKind::Unsupported);
    CHECK(kind_of([] { exponential_unit().mgf(1.5); }) == ErrorKind::DomainViolation);
    CHECK(kind_of([] { gaussian(0, 1).parameter("nu"); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("every constructor normalizes") {
    for (const auto& d : catalog()) {
        INFO(d.describe());
        CHECK(std::abs(mass(d) - 1.0) <= 1e-9);
    }
}

TEST_CASE("pdf against closed forms") {
    for (double x : {-3.0, -0.4, 0.0, 1.7, 6.0}) {
        CHECK(student_t(3).pdf(x) == doctest::Approx(t_pdf(3, x)).epsilon(1e-13));
        CHECK(student_t(7.5).pdf(x) == doctest::Approx(t_pdf(7.5, x)).epsilon(1e-12));
        CHECK(student_t(3).pdf(x) == student_t(3).pdf(-x));
        const double g = std::exp(-(x - 2) * (x - 2) / 6) / std::sqrt(6 * std::numbers::pi);
        CHECK(gaussian(2, 3).pdf(x) == doctest::Approx(g).epsilon(1e-13));
        if (x >= 0) {
            const double gm = std::pow(2.0, 3.5) * std::pow(x, 2.5) * std::exp(-2 * x) / std::tgamma(3.5);
            CHECK(gamma_dist(3.5, 2).pdf(x) == doctest::Approx(gm).epsilon(1e-12));
        }
    }
    // Truncated N(0,1) on [-1, 2]: phi / (Phi(2) - Phi(-1)).
    const double z = 0.5 * (std::erfc(-2 / std::numbers::sqrt2) - std::erfc(1 / std::numbers::sqrt2));
    const auto tg = truncated_gaussian(0, 1, -1, 2);
    CHECK(tg.pdf(0.5) == doctest::Approx(std::exp(-0.125) / std::sqrt(2 * std::numbers::pi) / z).epsilon(1e-13));
    CHECK(tg.pdf(-1.5) == 0.0);
    CHECK(tg.pdf(2.5) == 0.0);
}

TEST_CASE("pdf derivative matches a finite difference of the pdf") {
    for (const auto& d : catalog()) {
        INFO(d.describe());
        const double m = d.median();
        for (double x : {m - 0.3, m + 0.2, m + 1.1}) {
            if (!(x > d.support().lo + 1e-3 && x < d.support().hi - 1e-3)) continue;
            const double fd = derivative([&](double t) { return d.pdf(t); }, x, 1, DiffConfig{}, d.support());
            CHECK(d.pdf_derivative(x) == doctest::Approx(fd).epsilon(1e-7).scale(1e-10));
        }
    }
}

TEST_CASE("moments agree with quadrature") {
    for (const auto& d : catalog()) {
        if (!d.has_variance()) continue;
        INFO(d.describe());
        const auto b = full_breaks(d);
        const double m = integrate([&](double x) { return x * d.pdf(x); }, b, QuadratureConfig{});
        const double v =
            integrate([&](double x) { return (x - m) * (x - m) * d.pdf(x); }, b, QuadratureConfig{});
        CHECK(std::abs(d.mean() - m) <= 1e-9 * std::max(1.0, std::abs(m)));
        CHECK(d.variance() == doctest::Approx(v).epsilon(1e-8));
    }
}

TEST_CASE("quantile inverts cdf") {
    for (const auto& d : catalog()) {
        INFO(d.describe());
        for (double p : {1e-6, 0.01, 0.5, 0.99, 1 - 1e-6}) {
            CHECK(std::abs(d.cdf(d.quantile(p)) - p) <= 1e-8);
        }
        CHECK(std::abs(d.cdf(0.3) + d.survival(0.3) - 1.0) <= 1e-10);
    }
    // Cauchy quantile: tan(pi (p - 1/2)).
    CHECK(student_t(1).quantile(0.9) == doctest::Approx(std::tan(0.4 * std::numbers::pi)).epsilon(1e-9));
    CHECK(exponential_unit().quantile(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK_THROWS_AS(gaussian(0, 1).quantile(1.0), Error);
}

TEST_CASE("mgf closed forms") {
    CHECK(gaussian(1, 2).mgf(0.5) == doctest::Approx(std::exp(0.5 + 0.25)).epsilon(1e-13));
    CHECK(exponential_unit().mgf(0.5) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(gamma_dist(3, 2).mgf(1.0) == doctest::Approx(8.0).epsilon(1e-13));
    CHECK_FALSE(student_t(3).has_mgf());
    const auto tg = truncated_gaussian(0, 1, 0, 1);
    const double e = integrate([&](double x) { return std::exp(0.7 * x) * tg.pdf(x); }, Interval(0, 1), {});
    CHECK(tg.mgf(0.7) == doctest::Approx(e).epsilon(1e-10));
}

TEST_CASE("sample moments within three standard errors") {
    for (const auto& d : catalog()) {
        if (!d.has_variance()) continue;
        INFO(d.describe());
        const std::size_t n = 1'000'000;
        const auto xs = d.sample(n, 17);
        double s = 0.0;
        std::size_t outside = 0;
        for (double x : xs) {
            outside += !d.support().contains(x);
            s += x;
        }
        CHECK(outside == 0);
        const double mean = s / static_cast<double>(n);
        CHECK(std::abs(mean - d.mean()) <= 3.0 * std::sqrt(d.variance() / static_cast<double>(n)));
    }
    CHECK(student_t(1).sample(5, 9) == student_t(1).sample(5, 9));
}

TEST_CASE("differential entropy closed forms") {
    const double e = std::numbers::e, pi = std::numbers::pi;
    CHECK(differential_entropy(gaussian(0, 3)) == doctest::Approx(0.5 * std::log(2 * pi * e * 3)).epsilon(1e-10));
    CHECK(differential_entropy(exponential_unit()) == doctest::Approx(1.0).epsilon(1e-10));
    // Gamma(2, 1): alpha + ln Gamma(alpha) + (1 - alpha) psi(alpha), psi(2) = 1 - gamma_E.
    const double psi2 = 1.0 - 0.57721566490153286;
    CHECK(differential_entropy(gamma_dist(2, 1)) == doctest::Approx(2.0 - psi2).epsilon(1e-10));
    // Cauchy: log(4 pi).
    CHECK(differential_entropy(student_t(1)) == doctest::Approx(std::log(4 * pi)).epsilon(1e-9));
}

TEST_CASE("check_assumptions examples") {
    const auto first = IdentityOrder::FirstDerivative;
    const auto second = IdentityOrder::SecondDerivative;
    CHECK(check_assumptions(gaussian(0, 1), Role::Prior, first).passed());

    const auto t_exp = check_assumptions(student_t(3), Role::Prior, first, exponential_unit());
    CHECK_FALSE(t_exp.passed());
    CHECK(t_exp.failures().find("MGF") != std::string::npos);

    CHECK(check_assumptions(exponential_unit(), Role::Noise, second, truncated_gaussian(0, 1, 0, 3)).passed());
    CHECK(check_assumptions(gamma_dist(2, 1), Role::Prior, first, exponential_unit()).passed());
    CHECK_FALSE(check_assumptions(student_t(2), Role::Prior, first).passed());
    CHECK_FALSE(check_assumptions(student_t(1), Role::Prior, first).passed());
    CHECK_FALSE(check_assumptions(gaussian(0, 1), Role::Prior, first, exponential_unit()).passed());
}

TEST_CASE("describe and parameters") {
    CHECK(gaussian(0, 1).describe() == "gaussian(mu=0,var=1)");
    CHECK(student_t(3).describe() == "student_t(nu=3)");
    CHECK(gamma_dist(2, 1).parameter("alpha") == 2.0);
    CHECK(gaussian(0, 1).is_standard_gaussian());
    CHECK_FALSE(gaussian(0, 2).is_standard_gaussian());
}
