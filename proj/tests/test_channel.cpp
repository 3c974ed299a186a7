#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "infolab/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace infolab;

namespace {

const double kPi = std::numbers::pi;

double normal_pdf(double x, double var) { return std::exp(-0.5 * x * x / var) / std::sqrt(2 * kPi * var); }
double Phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// X ~ N(0,1) truncated to [0, hi], W ~ Exp(1): completing the square in
// int phi(x) exp((x - y)/s) dx gives a closed form in Phi.
double trunc_exp_marginal(double y, double a, double hi) {
    const double s = std::sqrt(a);
    if (y <= 0.0) return 0.0;
    const double z = Phi(hi) - Phi(0.0);
    const double top = std::min(hi, y);
    return std::exp(-y / s + 0.5 / a) / (s * z) * (Phi(top - 1.0 / s) - Phi(-1.0 / s));
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

TEST_CASE("conditional kernel") {
    const AdditiveNoiseChannel g(gaussian(0, 1), gaussian(0, 1), 1.0);
    CHECK(g.conditional_pdf(0.7, 0.7) == doctest::Approx(1.0 / std::sqrt(2 * kPi)).epsilon(1e-14));
    const AdditiveNoiseChannel e(gaussian(0, 1), exponential_unit(), 2.0);
    CHECK(e.conditional_pdf(0.5, 1.0) == 0.0);
    for (const auto& ch : {g, e, AdditiveNoiseChannel(gaussian(0, 1), gamma_dist(3, 1), 0.5)}) {
        const Interval ns = ch.noise().support();
        const double x = 0.3, sa = std::sqrt(ch.a());
        const double m = integrate([&](double y) { return ch.conditional_pdf(y, x); },
                                   Interval(x + sa * ns.lo, x + sa * ns.hi), QuadratureConfig{});
        CHECK(std::abs(m - 1.0) <= 1e-9);
    }
    CHECK(kind_of([] { AdditiveNoiseChannel(gaussian(0, 1), gaussian(0, 1), 0.0); }) == ErrorKind::InvalidParameter);
    CHECK(kind_of([] { AdditiveNoiseChannel(gaussian(0, 1), gaussian(0, 1), -1.0); }) ==
          ErrorKind::InvalidParameter);
}

TEST_CASE("Gaussian-Gaussian closed forms") {
    for (double a : {0.5, 1.0, 2.0}) {
        const AdditiveNoiseChannel ch(gaussian(0, 1), gaussian(0, 1), a);
        double worst = 0.0;
        for (double y = -6.0; y <= 6.0; y += 0.25) worst = std::max(worst, std::abs(ch.marginal_pdf(y) - normal_pdf(y, 1 + a)));
        CHECK(worst <= 1e-8);
        for (double y : {-2.0, 0.0, 1.0, 3.0}) {
            CHECK(std::abs(ch.posterior_mean(y) - y / (1 + a)) <= 1e-7);
            const double v = ch.posterior_moment(y, 2, Center::AroundY) - std::pow(ch.posterior_moment(y, 1, Center::AroundY), 2);
            CHECK(std::abs(v - a / (1 + a)) <= 1e-7);
            CHECK(ch.posterior_moment(y, 1, Center::Raw) + ch.posterior_moment(y, 1, Center::AroundY) ==
                  doctest::Approx(y).epsilon(1e-12));
            CHECK(ch.posterior_moment(y, 2, Center::Raw) >= std::pow(ch.posterior_moment(y, 1, Center::Raw), 2));
            CHECK(std::abs(ch.score_location(y) + y / (1 + a)) <= 1e-6);
            CHECK(std::abs(ch.marginal_pdf_derivative(y) + y / (1 + a) * normal_pdf(y, 1 + a)) <= 1e-8);
            const double sp = (y * y / (1 + a) - 1) / (2 * (1 + a));
            CHECK(std::abs(ch.score_parameter(y) - sp) <= 1e-6);
            CHECK(std::abs(ch.score_location_derivative(y) + 1 / (1 + a)) <= 1e-6);
        }
        CHECK(std::abs(ch.score_location(0.0)) <= 1e-12);
    }
    const AdditiveNoiseChannel one(gaussian(0, 1), gaussian(0, 1), 1.0);
    CHECK(one.marginal_pdf(0.0) == doctest::Approx(0.2820947918).epsilon(1e-10));
    CHECK(one.score_parameter(0.0) == doctest::Approx(-0.25).epsilon(1e-8));
}

TEST_CASE("marginal against a closed form with a one-sided kernel") {
    for (double a : {0.5, 1.0, 2.0}) {
        const AdditiveNoiseChannel ch(truncated_gaussian(0, 1, 0, 3), exponential_unit(), a);
        for (double y : {0.2, 1.0, 2.5, 3.5, 6.0}) {
            INFO("a=" << a << " y=" << y);
            CHECK(ch.marginal_pdf(y) == doctest::Approx(trunc_exp_marginal(y, a, 3.0)).epsilon(1e-9));
        }
        CHECK(ch.marginal_pdf(-0.1) == 0.0);
        REQUIRE(ch.kinks().size() == 2);
        CHECK(ch.kinks()[0] == 0.0);
        CHECK(ch.kinks()[1] == 3.0);
    }
}

TEST_CASE("normalization, zero-mean score, tower property") {
    const std::vector<AdditiveNoiseChannel> chans = {
        {gaussian(0, 1), gaussian(0, 1), 1.0},          {student_t(3), gaussian(0, 1), 0.5},
        {gamma_dist(2, 1), exponential_unit(), 1.0},    {gamma_dist(2, 1), gamma_dist(3, 1), 2.0},
        {truncated_gaussian(0, 1, 0, 3), exponential_unit(), 1.0}, {gaussian(1, 2), gamma_dist(2, 1), 0.7},
    };
    for (const auto& ch : chans) {
        INFO(ch.describe());
        CHECK(std::abs(ch.expect([](const PosteriorStats&) { return 1.0; }, false) - 1.0) <= 1e-8);
        CHECK(std::abs(ch.expect([](const PosteriorStats& s) { return s.mean; }, false) - ch.prior().mean()) <= 1e-6);
        if (ch.kinks().empty()) {
            CHECK(std::abs(ch.expect([](const PosteriorStats& s) { return s.score(); }, true)) <= 1e-6);
        }
        // Posterior density in x integrates to one at a sampled y.
        const double y = ch.prior().median() + std::sqrt(ch.a()) * ch.noise().median();
        const double f = ch.marginal_pdf(y);
        const auto xb = support_breaks(ch.prior(), 1e-12);
        const double post = integrate([&](double x) { return ch.prior().pdf(x) * ch.conditional_pdf(y, x) / f; },
                                      xb, QuadratureConfig{});
        CHECK(std::abs(post - 1.0) <= 1e-8);
    }
}

TEST_CASE("score parameter has zero mean") {
    const AdditiveNoiseChannel ch(student_t(3), gaussian(0, 1), 1.0);
    const double m = ch.expect([&](const PosteriorStats& s) { return s.f > 1e-9 ? ch.score_parameter(s.y) : 0.0; }, false);
    CHECK(std::abs(m) <= 1e-6);
}

TEST_CASE("posterior mean with a narrow prior and exponential noise") {
    // Posterior of X is N(v/s, v) truncated above at y; its mean is the oracle.
    const double v = 1e-4, a = 1.0, s = 1.0, y = 5.0;
    const AdditiveNoiseChannel ch(gaussian(0, v), exponential_unit(), a);
    const double mu = v / s, sd = std::sqrt(v), beta = (y - mu) / sd;
    const double oracle = mu - sd * normal_pdf(beta, 1.0) / Phi(beta);
    CHECK(std::abs(ch.posterior_mean(y)) <= 1e-3);
    CHECK(ch.posterior_mean(y) == doctest::Approx(oracle).epsilon(1e-7));
}

TEST_CASE("kernel PDE residual") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), ua(0.2, 3.0), uw(0.2, 4.0);
    for (int i = 0; i < 30; ++i) {
        const double x = ux(rng), a = ua(rng);
        const AdditiveNoiseChannel gch(gaussian(0, 1), gaussian(0, 1), a);
        CHECK(std::abs(gch.kernel_pde_residual(x + std::sqrt(a) * ux(rng), x)) <= 1e-6);
        const AdditiveNoiseChannel ech(gaussian(0, 1), exponential_unit(), a);
        CHECK(std::abs(ech.kernel_pde_residual(x + std::sqrt(a) * uw(rng), x)) <= 1e-5);
    }
    const AdditiveNoiseChannel g3(gaussian(0, 1), gamma_dist(3, 1), 1.7);
    CHECK(std::abs(g3.kernel_pde_residual(0.4 + std::sqrt(1.7), 0.4)) <= 1e-5);
    const AdditiveNoiseChannel e(gaussian(0, 1), exponential_unit(), 1.0);
    CHECK(kind_of([&] { e.kernel_pde_residual(0.5, 0.5); }) == ErrorKind::DomainViolation);
}

TEST_CASE("degenerate density and kinks") {
    const AdditiveNoiseChannel ch(gaussian(0, 1), gaussian(0, 1), 1.0);
    CHECK(kind_of([&] { ch.checked_stats(60.0); }) == ErrorKind::DegenerateDensity);
    CHECK(kind_of([&] { ch.posterior_mean(60.0); }) == ErrorKind::DegenerateDensity);
    CHECK(ch.kinks().empty());

    const AdditiveNoiseChannel k(truncated_gaussian(0, 1, 0, 3), exponential_unit(), 1.0);
    CHECK(kind_of([&] { k.smooth_interval(3.0); }) == ErrorKind::DomainViolation);
    const Interval s = k.smooth_interval(1.0);
    CHECK(s.lo == 0.0);
    CHECK(s.hi == 3.0);
    // The score jumps at y = 3 by f_X(3-) / f_Y(3) (the prior edge drops out of the integral).
    const auto jumps = k.score_jumps();
    REQUIRE(jumps.size() == 1);
    const double fy = trunc_exp_marginal(3.0, 1.0, 3.0);
    CHECK(jumps[0].jump == doctest::Approx(-k.prior().pdf(3.0) / fy).epsilon(1e-6));
}

TEST_CASE("companion channel") {
    const AdditiveNoiseChannel base(gamma_dist(2, 1), gamma_dist(3, 1), 1.0);
    const CompanionChannel c(base, -1);
    CHECK(c.channel().noise().parameter("alpha") == 2.0);
    CHECK(c.channel().a() == 1.0);
    CHECK(CompanionChannel(base, -2).channel().noise().kind() == "exponential");
    CHECK(kind_of([&] { CompanionChannel(base, -3); }) == ErrorKind::InvalidParameter);
    const AdditiveNoiseChannel g(gaussian(0, 1), gaussian(0, 1), 1.0);
    CHECK_THROWS_AS(CompanionChannel(g, -1), Error);
}
