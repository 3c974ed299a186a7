#include "infolab/distributions.hpp"

#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

namespace infolab {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

double std_normal_pdf(double z) { return std::exp(-0.5 * z * z - kLogSqrt2Pi); }
double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

// Probabilities at which supports are split for quadrature.
constexpr std::array<double, 9> kSplitProbs = {1e-9, 1e-6, 1e-3, 0.05, 0.5, 0.95, 1 - 1e-3, 1 - 1e-6, 1 - 1e-9};

QuadratureConfig cdf_quadrature() {
    QuadratureConfig q;
    q.rel_tol = 1e-12;
    q.abs_tol = 1e-300;
    q.max_subdivisions = 4000;
    return q;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void require(bool ok, const std::string& msg) {
    if (!ok) fail(ErrorKind::InvalidParameter, msg);
}

// ---------------------------------------------------------------------------

class GaussianModel final : public DistributionModel {
public:
    GaussianModel(double mu, double var) : mu_(mu), var_(var), sd_(std::sqrt(var)) {}

    std::string kind() const override { return "gaussian"; }
    std::map<std::string, double> parameters() const override { return {{"mu", mu_}, {"var", var_}}; }
    Interval support() const override { return Interval::real_line(); }

    double pdf(double x) const override { return std_normal_pdf((x - mu_) / sd_) / sd_; }
    double log_pdf(double x) const override {
        const double z = (x - mu_) / sd_;
        return -0.5 * z * z - kLogSqrt2Pi - std::log(sd_);
    }
    double pdf_derivative(double x) const override { return -(x - mu_) / var_ * pdf(x); }
    double pdf_sup() const override { return 1.0 / (sd_ * std::sqrt(2.0 * std::numbers::pi)); }

    double cdf(double x) const override { return std_normal_cdf((x - mu_) / sd_); }
    double survival(double x) const override { return std_normal_cdf(-(x - mu_) / sd_); }

    std::optional<double> mean() const override { return mu_; }
    std::optional<double> variance() const override { return var_; }

    bool has_mgf() const override { return true; }
    double mgf_unchecked(double t) const override { return std::exp(mu_ * t + 0.5 * var_ * t * t); }

    std::vector<double> sample(std::size_t n, std::uint64_t seed) const override {
        std::mt19937_64 gen(seed);
        std::normal_distribution<double> d(mu_, sd_);
        std::vector<double> out(n);
        for (auto& v : out) v = d(gen);
        return out;
    }

private:
    double mu_, var_, sd_;
};

// Gamma(shape alpha, rate beta); alpha == 1 is the exponential law.
class GammaModel final : public DistributionModel {
public:
    GammaModel(double alpha, double beta, bool as_exponential)
        : alpha_(alpha), beta_(beta), exponential_(as_exponential),
          log_norm_(alpha * std::log(beta) - std::lgamma(alpha)) {}

    std::string kind() const override { return exponential_ ? "exponential" : "gamma"; }
    std::map<std::string, double> parameters() const override {
        if (exponential_) return {{"rate", beta_}};
        return {{"alpha", alpha_}, {"beta", beta_}};
    }
    Interval support() const override { return {0.0, kInf}; }

    double pdf(double x) const override {
        if (x < 0.0) return 0.0;
        if (x == 0.0) return alpha_ == 1.0 ? beta_ : 0.0;
        return std::exp(log_pdf(x));
    }
    double log_pdf(double x) const override {
        if (x < 0.0 || (x == 0.0 && alpha_ > 1.0)) return -kInf;
        if (x == 0.0) return std::log(beta_);
        return log_norm_ + (alpha_ - 1.0) * std::log(x) - beta_ * x;
    }
    double pdf_derivative(double x) const override {
        if (x < 0.0) return 0.0;
        if (x == 0.0) {
            if (alpha_ == 1.0) return -beta_ * beta_;
            if (alpha_ == 2.0) return beta_ * beta_;
            return alpha_ > 2.0 ? 0.0 : kInf;
        }
        return pdf(x) * ((alpha_ - 1.0) / x - beta_);
    }
    double pdf_sup() const override {
        if (alpha_ < 1.0) return kInf;
        return pdf((alpha_ - 1.0) / beta_);
    }

    double cdf(double x) const override {
        if (exponential_) return x <= 0.0 ? 0.0 : -std::expm1(-beta_ * x);
        return DistributionModel::cdf(x);
    }
    double survival(double x) const override {
        if (exponential_) return x <= 0.0 ? 1.0 : std::exp(-beta_ * x);
        return DistributionModel::survival(x);
    }
    double quantile(double p) const override {
        if (exponential_) return -std::log1p(-p) / beta_;
        return DistributionModel::quantile(p);
    }

    std::optional<double> mean() const override { return alpha_ / beta_; }
    std::optional<double> variance() const override { return alpha_ / (beta_ * beta_); }

    bool has_mgf() const override { return true; }
    Interval mgf_domain() const override { return {-kInf, beta_}; }
    double mgf_unchecked(double t) const override { return std::pow(1.0 - t / beta_, -alpha_); }

    std::vector<double> sample(std::size_t n, std::uint64_t seed) const override {
        std::mt19937_64 gen(seed);
        std::vector<double> out(n);
        if (exponential_) {
            std::exponential_distribution<double> d(beta_);
            for (auto& v : out) v = d(gen);
        } else {
            std::gamma_distribution<double> d(alpha_, 1.0 / beta_);
            for (auto& v : out) v = d(gen);
        }
        return out;
    }

private:
    double alpha_, beta_;
    bool exponential_;
    double log_norm_;
};

class StudentTModel final : public DistributionModel {
public:
    explicit StudentTModel(double nu)
        : nu_(nu),
          log_norm_(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi)) {}

    std::string kind() const override { return "student_t"; }
    std::map<std::string, double> parameters() const override { return {{"nu", nu_}}; }
    Interval support() const override { return Interval::real_line(); }

    double pdf(double x) const override { return std::exp(log_pdf(x)); }
    double log_pdf(double x) const override { return log_norm_ - 0.5 * (nu_ + 1.0) * std::log1p(x * x / nu_); }
    double pdf_derivative(double x) const override { return -(nu_ + 1.0) * x / (nu_ + x * x) * pdf(x); }
    double pdf_sup() const override { return std::exp(log_norm_); }

    // Symmetry keeps both tails accurate: only the lower tail is ever integrated.
    double cdf(double x) const override {
        if (x > 0.0) return 1.0 - lower_tail(-x);
        return lower_tail(x);
    }
    double survival(double x) const override {
        if (x < 0.0) return 1.0 - lower_tail(x);
        return lower_tail(-x);
    }

    std::optional<double> mean() const override {
        if (nu_ > 1.0) return 0.0;
        return std::nullopt;
    }
    std::optional<double> variance() const override {
        if (nu_ > 2.0) return nu_ / (nu_ - 2.0);
        return std::nullopt;
    }

    std::vector<double> sample(std::size_t n, std::uint64_t seed) const override {
        std::mt19937_64 gen(seed);
        std::student_t_distribution<double> d(nu_);
        std::vector<double> out(n);
        for (auto& v : out) v = d(gen);
        return out;
    }

private:
    // P(T <= x) for x <= 0.
    double lower_tail(double x) const {
        auto f = [this](double t) { return pdf(t); };
        if (x == 0.0) return 0.5;
        if (x > -1.0) return 0.5 - integrate(f, Interval(x, 0.0), cdf_quadrature());
        return integrate(f, Interval(-kInf, x), cdf_quadrature());
    }

    double nu_;
    double log_norm_;
};

class TruncatedGaussianModel final : public DistributionModel {
public:
    TruncatedGaussianModel(double mu, double var, double lo, double hi)
        : mu_(mu), var_(var), sd_(std::sqrt(var)), lo_(lo), hi_(hi),
          zlo_((lo - mu) / sd_), zhi_((hi - mu) / sd_),
          mass_(std_normal_cdf(zhi_) - std_normal_cdf(zlo_)) {}

    double mass() const { return mass_; }

    std::string kind() const override { return "truncated_gaussian"; }
    std::map<std::string, double> parameters() const override {
        return {{"mu", mu_}, {"var", var_}, {"lo", lo_}, {"hi", hi_}};
    }
    Interval support() const override { return {lo_, hi_}; }

    double pdf(double x) const override {
        if (x < lo_ || x > hi_) return 0.0;
        return std_normal_pdf((x - mu_) / sd_) / (sd_ * mass_);
    }
    double pdf_derivative(double x) const override { return -(x - mu_) / var_ * pdf(x); }
    double pdf_sup() const override { return pdf(std::clamp(mu_, lo_, hi_)); }

    double cdf(double x) const override {
        if (x <= lo_) return 0.0;
        if (x >= hi_) return 1.0;
        return (std_normal_cdf((x - mu_) / sd_) - std_normal_cdf(zlo_)) / mass_;
    }
    double survival(double x) const override {
        if (x <= lo_) return 1.0;
        if (x >= hi_) return 0.0;
        return (std_normal_cdf(zhi_) - std_normal_cdf((x - mu_) / sd_)) / mass_;
    }

    std::optional<double> mean() const override {
        return mu_ + sd_ * (phi(zlo_) - phi(zhi_)) / mass_;
    }
    std::optional<double> variance() const override {
        const double r = (phi(zlo_) - phi(zhi_)) / mass_;
        return var_ * (1.0 + (zphi(zlo_) - zphi(zhi_)) / mass_ - r * r);
    }

    bool has_mgf() const override { return true; }
    double mgf_unchecked(double t) const override {
        const double shift = sd_ * t;
        const double num = std_normal_cdf(zhi_ - shift) - std_normal_cdf(zlo_ - shift);
        return std::exp(mu_ * t + 0.5 * var_ * t * t) * num / mass_;
    }

    std::vector<double> sample(std::size_t n, std::uint64_t seed) const override {
        std::mt19937_64 gen(seed);
        std::vector<double> out(n);
        if (mass_ > 0.05) {
            std::normal_distribution<double> d(mu_, sd_);
            for (auto& v : out) {
                do {
                    v = d(gen);
                } while (v < lo_ || v > hi_);
            }
        } else {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (auto& v : out) v = quantile(std::clamp(u(gen), 1e-15, 1.0 - 1e-15));
        }
        return out;
    }

private:
    static double phi(double z) { return std::isfinite(z) ? std_normal_pdf(z) : 0.0; }
    static double zphi(double z) { return std::isfinite(z) ? z * std_normal_pdf(z) : 0.0; }

    double mu_, var_, sd_, lo_, hi_, zlo_, zhi_, mass_;
};

}  // namespace

// ---------------------------------------------------------------------------
// DistributionModel defaults

double DistributionModel::log_pdf(double x) const {
    const double p = pdf(x);
    return p > 0.0 ? std::log(p) : -kInf;
}

double DistributionModel::cdf(double x) const {
    const Interval s = support();
    if (x <= s.lo) return 0.0;
    if (x >= s.hi) return 1.0;
    auto f = [this](double t) { return pdf(t); };
    const double lower = integrate(f, Interval(s.lo, x), cdf_quadrature());
    if (lower <= 0.5) return lower;
    return 1.0 - integrate(f, Interval(x, s.hi), cdf_quadrature());
}

double DistributionModel::survival(double x) const {
    const Interval s = support();
    if (x <= s.lo) return 1.0;
    if (x >= s.hi) return 0.0;
    auto f = [this](double t) { return pdf(t); };
    const double upper = integrate(f, Interval(x, s.hi), cdf_quadrature());
    if (upper <= 0.5) return upper;
    return 1.0 - integrate(f, Interval(s.lo, x), cdf_quadrature());
}

double DistributionModel::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) fail(ErrorKind::InvalidParameter, "quantile probability must lie in (0, 1)");
    // Work on whichever tail is small so extreme quantiles keep relative accuracy.
    const bool upper = p > 0.5;
    const double target = upper ? 1.0 - p : p;
    auto tail = [&](double x) { return upper ? survival(x) : cdf(x); };
    // g(x) is increasing in x and crosses zero at the quantile.
    auto g = [&](double x) { return upper ? target - tail(x) : tail(x) - target; };

    const Interval s = support();
    double center = 0.0;
    if (auto m = mean()) center = *m;
    center = std::clamp(center, std::isfinite(s.lo) ? s.lo : -kInf, std::isfinite(s.hi) ? s.hi : kInf);

    double lo = center, hi = center;
    double step = 1.0;
    if (g(center) > 0.0) {
        for (;;) {
            lo = center - step;
            if (std::isfinite(s.lo) && lo <= s.lo) {
                lo = s.lo;
                break;
            }
            if (g(lo) <= 0.0) break;
            hi = lo;
            step *= 2.0;
            if (step > 1e300) fail(ErrorKind::NonConvergence, "quantile bracket diverged");
        }
    } else {
        for (;;) {
            hi = center + step;
            if (std::isfinite(s.hi) && hi >= s.hi) {
                hi = s.hi;
                break;
            }
            if (g(hi) >= 0.0) break;
            lo = hi;
            step *= 2.0;
            if (step > 1e300) fail(ErrorKind::NonConvergence, "quantile bracket diverged");
        }
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-14 * std::max(1.0, std::abs(mid))) break;
        if (g(mid) > 0.0) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> DistributionModel::sample(std::size_t, std::uint64_t) const {
    fail(ErrorKind::Unsupported, kind() + " has no sampler");
}

std::string DistributionModel::describe() const {
    std::string out = kind() + "(";
    bool first = true;
    for (const auto& [k, v] : parameters()) {
        if (!first) out += ",";
        out += k + "=" + fmt(v);
        first = false;
    }
    return out + ")";
}

// ---------------------------------------------------------------------------
// Distribution handle

Distribution::Distribution(std::shared_ptr<const DistributionModel> model) : model_(std::move(model)) {
    if (!model_) fail(ErrorKind::InvalidParameter, "null distribution model");
}

double Distribution::parameter(std::string_view name) const {
    const auto params = model_->parameters();
    const auto it = params.find(std::string(name));
    if (it == params.end()) fail(ErrorKind::InvalidParameter, describe() + " has no parameter " + std::string(name));
    return it->second;
}

double Distribution::score(double x) const {
    const double p = pdf(x);
    if (!(p > 0.0)) fail(ErrorKind::DegenerateDensity, "score requested where the density vanishes");
    return pdf_derivative(x) / p;
}

double Distribution::quantile(double p) const {
    {
        std::lock_guard lock(model_->quantile_mutex_);
        if (auto it = model_->quantile_cache_.find(p); it != model_->quantile_cache_.end()) return it->second;
    }
    const double q = model_->quantile(p);
    std::lock_guard lock(model_->quantile_mutex_);
    model_->quantile_cache_.emplace(p, q);
    return q;
}

double Distribution::mean() const {
    auto m = model_->mean();
    if (!m) fail(ErrorKind::UndefinedMoment, describe() + " has no mean");
    return *m;
}

double Distribution::variance() const {
    auto v = model_->variance();
    if (!v) fail(ErrorKind::UndefinedMoment, describe() + " has no finite variance");
    return *v;
}

double Distribution::mgf(double t) const {
    if (!has_mgf()) fail(ErrorKind::Unsupported, describe() + " has no moment generating function");
    const Interval d = mgf_domain();
    if (!(t > d.lo && t < d.hi)) fail(ErrorKind::DomainViolation, "MGF argument outside its domain");
    return model_->mgf_unchecked(t);
}

std::vector<double> Distribution::sample(std::size_t n, std::uint64_t seed) const {
    if (!has_sampler()) fail(ErrorKind::Unsupported, describe() + " has no sampler");
    return model_->sample(n, seed);
}

Interval Distribution::effective_support(double tail_mass) const {
    const Interval s = support();
    const double lo = std::isfinite(s.lo) ? s.lo : quantile(tail_mass);
    const double hi = std::isfinite(s.hi) ? s.hi : quantile(1.0 - tail_mass);
    return {lo, hi};
}

bool Distribution::is_standard_gaussian() const {
    if (kind() != "gaussian") return false;
    return parameter("mu") == 0.0 && parameter("var") == 1.0;
}

// ---------------------------------------------------------------------------
// Constructors

Distribution gaussian(double mu, double var) {
    require(std::isfinite(mu), "gaussian mean must be finite");
    require(var > 0.0 && std::isfinite(var), "gaussian variance must be positive");
    return Distribution(std::make_shared<GaussianModel>(mu, var));
}

Distribution exponential_unit() { return Distribution(std::make_shared<GammaModel>(1.0, 1.0, true)); }

Distribution gamma_dist(double alpha, double beta) {
    require(alpha >= 2.0 && std::isfinite(alpha), "gamma shape alpha must be >= 2");
    require(beta > 0.0 && std::isfinite(beta), "gamma rate beta must be positive");
    return Distribution(std::make_shared<GammaModel>(alpha, beta, false));
}

Distribution detail::gamma_any_shape(double alpha, double beta) {
    require(alpha >= 1.0 && std::isfinite(alpha), "gamma shape must be >= 1");
    require(beta > 0.0 && std::isfinite(beta), "gamma rate beta must be positive");
    return Distribution(std::make_shared<GammaModel>(alpha, beta, alpha == 1.0 && beta == 1.0));
}

Distribution student_t(double nu) {
    require(nu > 0.0 && std::isfinite(nu), "student-t degrees of freedom must be positive");
    return Distribution(std::make_shared<StudentTModel>(nu));
}

Distribution truncated_gaussian(double mu, double var, double lo, double hi) {
    require(std::isfinite(mu), "truncated gaussian mean must be finite");
    require(var > 0.0 && std::isfinite(var), "truncated gaussian variance must be positive");
    require(lo < hi, "truncated gaussian needs lo < hi");
    auto m = std::make_shared<TruncatedGaussianModel>(mu, var, lo, hi);
    require(m->mass() > 1e-12, "truncation interval carries no probability mass");
    return Distribution(std::move(m));
}

// ---------------------------------------------------------------------------
// Assumption checks

std::string_view to_string(Role role) noexcept { return role == Role::Prior ? "prior" : "noise"; }

std::string_view to_string(IdentityOrder order) noexcept {
    return order == IdentityOrder::FirstDerivative ? "first_derivative" : "second_derivative";
}

bool AssumptionReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string AssumptionReport::failures() const {
    std::string out;
    for (const auto& c : checks) {
        if (c.passed) continue;
        if (!out.empty()) out += "; ";
        out += c.name;
        if (!c.detail.empty()) out += " (" + c.detail + ")";
    }
    return out;
}

namespace {

bool exponential_family_noise(const Distribution& d) { return d.kind() == "exponential" || d.kind() == "gamma"; }

void add(AssumptionReport& r, std::string name, bool ok, std::string detail = {}) {
    r.checks.push_back({std::move(name), ok, std::move(detail)});
}

void standalone_checks(AssumptionReport& r, const Distribution& dist, Role role, IdentityOrder order,
                       int tail_power, const QuadratureConfig& cfg) {
    add(r, "finite second moment", dist.has_variance(),
        dist.has_variance() ? "" : dist.describe() + " has no finite variance");
    add(r, "bounded pdf", dist.bounded_pdf());

    // y^p f(y) -> 0: probed at the truncation edge of each infinite side and at
    // successive doublings beyond it; the last probes must be small and non-increasing.
    try {
        const Interval s = dist.support();
        const Interval e = dist.effective_support(cfg.tail_mass);
        bool ok = true;
        double last = 0.0;
        for (int side = 0; side < 2; ++side) {
            if (std::isfinite(side == 0 ? s.lo : s.hi)) continue;
            const double edge = side == 0 ? e.lo : e.hi;
            const double sign = side == 0 ? -1.0 : 1.0;
            const double r0 = std::max(std::abs(edge), 1.0);
            double prev = kInf;
            for (int k = 0; k <= 8; ++k) {
                const double y = sign * r0 * std::ldexp(1.0, k);
                const double v = std::pow(std::abs(y), tail_power) * dist.pdf(y);
                if (k >= 6 && (!(v < 1e-6) || v > prev)) ok = false;
                prev = v;
            }
            last = std::max(last, prev);
        }
        add(r, "tail decay y^" + std::to_string(tail_power) + " f(y) -> 0", ok, "farthest probe " + fmt(last));
    } catch (const Error& e) {
        add(r, "tail decay", false, e.what());
    }

    if (role == Role::Noise && dist.kind() == "gamma") {
        const double alpha = dist.parameter("alpha");
        const double need = order == IdentityOrder::FirstDerivative ? 2.0 : 3.0;
        add(r, "gamma shape >= " + fmt(need), alpha >= need, "alpha = " + fmt(alpha));
    }
    if (role == Role::Noise && exponential_family_noise(dist)) {
        add(r, "noise MGF declared", dist.has_mgf());
    }
}

}  // namespace

AssumptionReport check_assumptions(const Distribution& dist, Role role, IdentityOrder order,
                                   const QuadratureConfig& cfg) {
    AssumptionReport r;
    const int power = order == IdentityOrder::FirstDerivative ? 2 : 8;
    standalone_checks(r, dist, role, order, power, cfg);
    return r;
}

AssumptionReport check_assumptions(const Distribution& dist, Role role, IdentityOrder order,
                                   const Distribution& partner, const QuadratureConfig& cfg) {
    AssumptionReport r;
    const Distribution& prior = role == Role::Prior ? dist : partner;
    const Distribution& noise = role == Role::Noise ? dist : partner;
    // With Gaussian noise the conditions reduce to a finite second moment.
    const bool gaussian_noise = noise.kind() == "gaussian";
    const int power = gaussian_noise || order == IdentityOrder::FirstDerivative ? 2 : 8;
    standalone_checks(r, dist, role, order, power, cfg);

    if (exponential_family_noise(noise)) {
        add(r, "prior support nonnegative", prior.support().lo >= 0.0, prior.describe());
        add(r, "prior MGF exists", prior.has_mgf(), prior.has_mgf() ? "" : "MGF undefined for " + prior.describe());
        add(r, "prior pdf bounded", prior.bounded_pdf());
    }
    return r;
}

// ---------------------------------------------------------------------------

std::vector<double> support_breaks(const Distribution& dist, double tail_mass) {
    const Interval e = dist.effective_support(tail_mass);
    std::vector<double> pts;
    for (double p : kSplitProbs)
        if (p > tail_mass && p < 1.0 - tail_mass) pts.push_back(dist.quantile(p));
    return normalize_breaks(std::move(pts), e.lo, e.hi);
}

double differential_entropy(const Distribution& dist, const QuadratureConfig& cfg) {
    const auto breaks = support_breaks(dist, cfg.tail_mass);
    return integrate(
        [&](double x) {
            const double lp = dist.log_pdf(x);
            if (!std::isfinite(lp)) return 0.0;
            return -std::exp(lp) * lp;
        },
        std::span<const double>(breaks), cfg);
}

}  // namespace infolab
