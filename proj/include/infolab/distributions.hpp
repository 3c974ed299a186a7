#pragma once

#include "infolab/numerics.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace infolab {

/// Scalar law used for the prior X and the noise W.
///
/// pdf is defined on the closed support (edge values are the one-sided limits
/// from inside) and is zero outside it. MGF existence is declared by each law,
/// never discovered numerically.
class DistributionModel {
public:
    virtual ~DistributionModel() = default;

    virtual std::string kind() const = 0;
    virtual std::map<std::string, double> parameters() const = 0;
    virtual Interval support() const = 0;

    virtual double pdf(double x) const = 0;
    virtual double log_pdf(double x) const;
    /// d/dx pdf on the support (one-sided at a finite edge).
    virtual double pdf_derivative(double x) const = 0;
    virtual double pdf_sup() const = 0;

    /// Default cdf/survival integrate the pdf from the nearer infinite end.
    virtual double cdf(double x) const;
    virtual double survival(double x) const;
    virtual double quantile(double p) const;

    virtual std::optional<double> mean() const = 0;
    virtual std::optional<double> variance() const = 0;

    virtual bool has_mgf() const { return false; }
    /// Open interval on which the MGF is finite.
    virtual Interval mgf_domain() const { return Interval::real_line(); }
    virtual double mgf_unchecked(double) const { return kInf; }

    virtual bool has_sampler() const { return true; }
    virtual std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

    std::string describe() const;

private:
    mutable std::mutex quantile_mutex_;
    mutable std::map<double, double> quantile_cache_;

    friend class Distribution;
};

/// Immutable, cheaply copyable handle to a law.
class Distribution {
public:
    explicit Distribution(std::shared_ptr<const DistributionModel> model);

    std::string kind() const { return model_->kind(); }
    std::string describe() const { return model_->describe(); }
    std::map<std::string, double> parameters() const { return model_->parameters(); }
    /// Named parameter; throws InvalidParameter if this law has no such parameter.
    double parameter(std::string_view name) const;

    Interval support() const { return model_->support(); }
    double pdf(double x) const { return model_->pdf(x); }
    double log_pdf(double x) const { return model_->log_pdf(x); }
    double pdf_derivative(double x) const { return model_->pdf_derivative(x); }
    /// d/dx log pdf.
    double score(double x) const;
    double pdf_sup() const { return model_->pdf_sup(); }
    bool bounded_pdf() const { return std::isfinite(model_->pdf_sup()); }

    double cdf(double x) const { return model_->cdf(x); }
    double survival(double x) const { return model_->survival(x); }
    /// Memoized; p must lie in (0, 1).
    double quantile(double p) const;
    double median() const { return quantile(0.5); }

    bool has_mean() const { return model_->mean().has_value(); }
    bool has_variance() const { return model_->variance().has_value(); }
    double mean() const;
    double variance() const;

    bool has_mgf() const { return model_->has_mgf(); }
    Interval mgf_domain() const { return model_->mgf_domain(); }
    double mgf(double t) const;

    bool has_sampler() const { return model_->has_sampler(); }
    std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

    /// Finite interval holding all but `tail_mass` on each infinite side.
    Interval effective_support(double tail_mass) const;

    bool is_standard_gaussian() const;

    const DistributionModel& model() const { return *model_; }

private:
    std::shared_ptr<const DistributionModel> model_;
};

Distribution gaussian(double mu, double var);
Distribution exponential_unit();
/// Gamma law with shape alpha >= 2 and rate beta > 0.
Distribution gamma_dist(double alpha, double beta = 1.0);
Distribution student_t(double nu);
/// Normal(mu, var) restricted to [lo, hi] and renormalized.
Distribution truncated_gaussian(double mu, double var, double lo, double hi);

namespace detail {
/// Gamma law with any shape >= 1; used for shifted-shape companion noises.
Distribution gamma_any_shape(double alpha, double beta);
}  // namespace detail

enum class Role { Prior, Noise };
enum class IdentityOrder { FirstDerivative, SecondDerivative };

std::string_view to_string(Role role) noexcept;
std::string_view to_string(IdentityOrder order) noexcept;

struct AssumptionCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct AssumptionReport {
    std::vector<AssumptionCheck> checks;

    bool passed() const;
    /// Names of failed checks joined by "; " (empty when everything passed).
    std::string failures() const;
};

/// Checkable subset of the regularity conditions for one law in a role.
/// Never throws; failures are reported.
AssumptionReport check_assumptions(const Distribution& dist, Role role, IdentityOrder order,
                                   const QuadratureConfig& cfg = {});

/// As above, with the other law of the channel supplied so that cross
/// conditions (nonnegative prior with an MGF under exponential or gamma
/// noise) are checked as well.
AssumptionReport check_assumptions(const Distribution& dist, Role role, IdentityOrder order,
                                   const Distribution& partner, const QuadratureConfig& cfg = {});

/// Differential entropy of a standalone law by quadrature (0 log 0 := 0).
double differential_entropy(const Distribution& dist, const QuadratureConfig& cfg = {});

/// Breakpoints for integrating against dist: effective support edges plus quantiles.
std::vector<double> support_breaks(const Distribution& dist, double tail_mass);

}  // namespace infolab
