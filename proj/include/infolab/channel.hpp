#pragma once

#include "infolab/distributions.hpp"

#include <functional>
#include <string>
#include <vector>

namespace infolab {

/// Posterior summary of X given Y = y, all from one x-integral.
struct PosteriorStats {
    double y = 0.0;
    double f = 0.0;     ///< f_Y(y)
    double df = 0.0;    ///< d/dy f_Y(y); NaN when not requested
    double mean = 0.0;  ///< E[X | Y=y]
    double var = 0.0;   ///< Var(X | Y=y)

    double score() const { return df / f; }
    /// E[(Y-X)^k | Y=y] for k = 1, 2.
    double around_y(int k) const;
};

enum class Center { Raw, AroundY };

/// Jump S(y+) - S(y-) of the location score at an interior kink of f_Y.
struct ScoreJump {
    PosteriorStats at;
    double jump = 0.0;
};

/// Y = X + sqrt(a) W with X ~ prior and W ~ noise independent.
class AdditiveNoiseChannel {
public:
    AdditiveNoiseChannel(Distribution prior, Distribution noise, double a, QuadratureConfig quad = {});

    const Distribution& prior() const { return prior_; }
    const Distribution& noise() const { return noise_; }
    double a() const { return a_; }
    const QuadratureConfig& quad() const { return quad_; }
    std::string describe() const;

    AdditiveNoiseChannel with_a(double a) const;
    AdditiveNoiseChannel with_quadrature(const QuadratureConfig& quad) const;

    /// f_{Y|X}(y|x) = f_W((y-x)/sqrt a) / sqrt a.
    double conditional_pdf(double y, double x) const;
    double marginal_pdf(double y) const;
    double marginal_pdf_derivative(double y) const;

    double posterior_mean(double y) const;
    double posterior_moment(double y, int k, Center center) const;
    /// d/dy log f_Y(y).
    double score_location(double y) const;
    /// d/dy of score_location, differentiated numerically inside the smooth piece holding y.
    double score_location_derivative(double y, const DiffConfig& diff = {}) const;
    /// d/da log f_Y(y; a) at fixed y.
    double score_parameter(double y, const DiffConfig& diff = {}) const;
    /// d/da f_{Y|X} + (1/2a) d/dy[(y-x) f_{Y|X}], both by numerical differentiation.
    double kernel_pde_residual(double y, double x, const DiffConfig& diff = {}) const;

    /// Unchecked posterior statistics; f may be zero or tiny.
    PosteriorStats stats(double y, bool with_derivative = true) const;
    /// As stats, but throws DegenerateDensity when f_Y(y) is below the threshold.
    PosteriorStats checked_stats(double y, bool with_derivative = true) const;
    double degenerate_threshold() const { return 1e3 * quad_.abs_tol; }

    /// Truncated support of Y used for every y-integral.
    Interval y_support() const { return {y_breaks_.front(), y_breaks_.back()}; }
    const std::vector<double>& y_breaks() const { return y_breaks_; }
    /// Points where f_Y may fail to be smooth: finite prior edge + sqrt(a) finite noise edge.
    const std::vector<double>& kinks() const { return kinks_; }
    /// Score jumps at kinks strictly inside the y-support; their sum weighted by
    /// f_Y is the singular part of E[g S'] for continuous g.
    std::vector<ScoreJump> score_jumps() const;
    /// Largest open interval around y free of kinks.
    Interval smooth_interval(double y) const;

    /// E_Y[g(stats(Y))] by quadrature over the truncated y-support.
    double expect(const std::function<double(const PosteriorStats&)>& g, bool with_derivative = true) const;
    double expect(const std::function<double(const PosteriorStats&)>& g, bool with_derivative,
                  const QuadratureConfig& outer) const;

private:
    Distribution prior_;
    Distribution noise_;
    double a_;
    double sqrt_a_;
    QuadratureConfig quad_;
    std::vector<double> prior_q_;
    std::vector<double> noise_q_;
    std::vector<double> y_breaks_;
    std::vector<double> kinks_;
};

/// The same prior and a as `base`, with the gamma noise shape shifted by
/// `shape_shift` (Y_k = X + sqrt(a) W_k, W_k ~ Gamma(alpha + shift, beta)).
class CompanionChannel {
public:
    CompanionChannel(const AdditiveNoiseChannel& base, int shape_shift);

    const AdditiveNoiseChannel& base() const { return base_; }
    const AdditiveNoiseChannel& channel() const { return companion_; }
    int shape_shift() const { return shift_; }

private:
    AdditiveNoiseChannel base_;
    int shift_;
    AdditiveNoiseChannel companion_;
};

}  // namespace infolab
