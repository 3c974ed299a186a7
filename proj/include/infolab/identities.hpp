#pragma once

#include "infolab/channel.hpp"

#include <functional>
#include <string>
#include <vector>

namespace infolab {

enum class Relation { Equality, Inequality };

/// Both sides of one identity at one (channel, a).
struct IdentityReport {
    std::string identity_name;
    std::string channel_desc;
    double a = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_residual = 0.0;
    double rel_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string notes;
    Relation relation = Relation::Equality;
};

/// Equality: pass iff |lhs - rhs| <= max(tol, tol |lhs|).
/// Inequality (lhs >= rhs): pass iff lhs - rhs >= -tol.
IdentityReport make_report(std::string name, const std::string& channel_desc, double a, double lhs, double rhs,
                           double tolerance, Relation relation = Relation::Equality, std::string notes = {});

struct VerifyOptions {
    /// NaN selects the verifier's default tolerance.
    double tolerance = std::numeric_limits<double>::quiet_NaN();
    /// Step policy for derivatives in a of entropy and Fisher information.
    DiffConfig a_diff{1e-3, 3};
    /// Step policy for derivatives in y.
    DiffConfig y_diff{};
};

inline constexpr double kFirstOrderTolerance = 1e-4;
inline constexpr double kSecondOrderTolerance = 5e-3;

/// Real function with its first two derivatives.
struct TestFunction {
    std::string name;
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> d2f;
};

TestFunction test_function(const std::string& name);  ///< "y", "y2", "y4", "sin", "cos"

/// d/da h(Y) by Richardson differences of the quadrature entropy.
double entropy_slope(const AdditiveNoiseChannel& ch, const DiffConfig& diff = {1e-3, 3});
double entropy_curvature(const AdditiveNoiseChannel& ch, const DiffConfig& diff = {1e-3, 3});

/// d/da h(Y) = J(Y)/2; unit Gaussian noise.
IdentityReport verify_de_bruijn(const AdditiveNoiseChannel& ch, const VerifyOptions& opt = {});
/// E[r(Y)(Y - mu)] = sigma^2 E[r'(Y)] for Y ~ N(mu, sigma^2).
IdentityReport verify_classic_stein(const Distribution& dist, const TestFunction& r, const VerifyOptions& opt = {});
/// E[r t] = E[r'] with r = -S_Y, t = -f'/f: the two forms of J(Y).
IdentityReport verify_generalized_stein(const AdditiveNoiseChannel& ch, const VerifyOptions& opt = {});
/// d/da E[g(Y)] = E[g''(Y)]/2 for Gaussian prior and noise.
IdentityReport verify_heat_equation(const AdditiveNoiseChannel& ch, const TestFunction& g,
                                    const VerifyOptions& opt = {});
/// d/da h(Y) = (1 - E[d/dy E[X|Y]]) / (2a).
IdentityReport verify_posterior_mean_slope(const AdditiveNoiseChannel& ch, const VerifyOptions& opt = {});
/// Unit exponential noise: d/da h(Y) = (sqrt a - E X + E_X[E[X|Y=X]]) / (2a sqrt a).
IdentityReport verify_exponential_slope(const AdditiveNoiseChannel& ch, const VerifyOptions& opt = {});
/// Gamma(alpha, 1) noise: as the exponential case with the outer average taken
/// under the shape alpha-1 companion marginal.
IdentityReport verify_gamma_slope(const AdditiveNoiseChannel& ch, const VerifyOptions& opt = {});
/// d2/da2 h(Y) = -J_a - E[d/dy E[Y-X|Y]]/(4a^2) - E[S' E[(Y-X)^2|Y]]/(4a^2).
IdentityReport verify_entropy_curvature(const AdditiveNoiseChannel& ch, const VerifyOptions& opt = {});
/// Unit Gaussian noise: d2/da2 h(Y) = -E[(S')^2]/2.
IdentityReport verify_gaussian_curvature(const AdditiveNoiseChannel& ch, const VerifyOptions& opt = {});
/// Unit exponential noise, second derivative via posterior moments at Y = X.
IdentityReport verify_exponential_curvature(const AdditiveNoiseChannel& ch, const VerifyOptions& opt = {});
/// Gamma(alpha >= 3, 1) noise, second derivative via companion marginals.
IdentityReport verify_gamma_curvature(const AdditiveNoiseChannel& ch, const VerifyOptions& opt = {});
/// Gaussian noise: d/da J(Y) = -Var(W) E[(S')^2].
IdentityReport verify_fisher_slope(const AdditiveNoiseChannel& ch, const VerifyOptions& opt = {});
/// Gaussian noise: 1/J(Y) >= 1/J(X) + a Var(W).
IdentityReport verify_fisher_inequality(const AdditiveNoiseChannel& ch, const VerifyOptions& opt = {});

struct Verifier {
    std::string name;
    std::function<IdentityReport(const AdditiveNoiseChannel&, const VerifyOptions&)> run;
};

/// Every verifier that takes only a channel. classic_stein runs on the law of Y
/// with r = sin; heat_equation uses g = cos.
const std::vector<Verifier>& verifier_registry();
const Verifier* find_verifier(const std::string& name);

}  // namespace infolab
