#pragma once

#include "infolab/channel.hpp"

#include <cstdint>
#include <string_view>

namespace infolab {

enum class Method { Quadrature, MonteCarlo };

std::string_view to_string(Method m) noexcept;

struct InfoMeasureResult {
    double value = 0.0;
    Method method = Method::Quadrature;
    double est_error = 0.0;
};

/// h(Y) = -int f_Y log f_Y.
double differential_entropy(const AdditiveNoiseChannel& ch);
/// h(Y|X) = h(sqrt(a) W) = h(W) + log(a)/2.
double conditional_entropy_noise(const AdditiveNoiseChannel& ch);
/// h(X|Y) = h(X) + h(Y|X) - h(Y).
double conditional_entropy(const AdditiveNoiseChannel& ch);

/// N = exp(2h) / (2 pi e).
double entropy_power(double h);
double conditional_entropy_power(const AdditiveNoiseChannel& ch);

/// J(Y) = E[S_Y(Y)^2]. Infinite when f_Y rises linearly from a finite support
/// edge (prior and noise densities both positive at matching edges).
double fisher_location(const AdditiveNoiseChannel& ch);
/// -E[d/dy S_Y(Y)], the second form of J(Y).
double fisher_location_dual(const AdditiveNoiseChannel& ch, const DiffConfig& diff = {});
/// J_a(Y) = E[(d/da log f_Y)^2].
double fisher_parameter(const AdditiveNoiseChannel& ch, const DiffConfig& diff = {});
/// E_X[J(Y|X)] by double quadrature; the kernel must be differentiable in x.
double conditional_fisher(const AdditiveNoiseChannel& ch);
/// Location Fisher information of a law. Infinite when the density jumps at a
/// finite support edge.
double prior_fisher(const Distribution& dist, const QuadratureConfig& cfg = {});

struct MonteCarloConfig {
    std::size_t n = 1'000'000;
    std::uint64_t seed = 0;
};

/// Var(X|Y) averaged over Y. Monte Carlo draws (X, W), forms Y and averages
/// (X - E[X|Y])^2; est_error is the sample standard deviation over sqrt(n).
InfoMeasureResult mmse(const AdditiveNoiseChannel& ch, Method method, const MonteCarloConfig& mc = {});

}  // namespace infolab
