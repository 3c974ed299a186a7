#include "infolab/identities.hpp"

#include "infolab/infomeasures.hpp"

#include <cstdio>
#include <set>

namespace infolab {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double tol_or(const VerifyOptions& opt, double fallback) {
    return std::isnan(opt.tolerance) ? fallback : opt.tolerance;
}

// Entropy and Fisher information are differenced in a, so they are computed
// well below the step-induced noise floor.
QuadratureConfig tight(const QuadratureConfig& q) {
    QuadratureConfig t = q;
    t.rel_tol = std::min(q.rel_tol, 1e-12);
    t.abs_tol = std::min(q.abs_tol, 1e-14);
    t.max_subdivisions = std::max(q.max_subdivisions, 4000);
    return t;
}

void require_assumptions(const AdditiveNoiseChannel& ch, IdentityOrder order) {
    const auto rp = check_assumptions(ch.prior(), Role::Prior, order, ch.noise(), ch.quad());
    const auto rn = check_assumptions(ch.noise(), Role::Noise, order, ch.prior(), ch.quad());
    std::set<std::string> seen;
    std::string msg;
    for (const auto* r : {&rp, &rn}) {
        const char* who = r == &rp ? "prior" : "noise";
        for (const auto& c : r->checks) {
            if (c.passed || !seen.insert(c.name).second) continue;
            if (!msg.empty()) msg += "; ";
            msg += std::string(who) + ": " + c.name;
            if (!c.detail.empty()) msg += " (" + c.detail + ")";
        }
    }
    if (!msg.empty()) fail(ErrorKind::AssumptionViolated, msg);
}

void require_unit_gaussian_noise(const AdditiveNoiseChannel& ch) {
    if (!ch.noise().is_standard_gaussian())
        fail(ErrorKind::PreconditionViolated, "needs N(0,1) noise, got " + ch.noise().describe());
}

void require_gaussian_noise(const AdditiveNoiseChannel& ch) {
    if (ch.noise().kind() != "gaussian")
        fail(ErrorKind::PreconditionViolated, "needs Gaussian noise, got " + ch.noise().describe());
}

void require_unit_exponential_noise(const AdditiveNoiseChannel& ch) {
    if (ch.noise().kind() != "exponential" || ch.noise().parameter("rate") != 1.0)
        fail(ErrorKind::PreconditionViolated, "needs unit exponential noise, got " + ch.noise().describe());
}

double unit_gamma_shape(const AdditiveNoiseChannel& ch) {
    if (ch.noise().kind() != "gamma" || ch.noise().parameter("beta") != 1.0)
        fail(ErrorKind::PreconditionViolated, "needs Gamma(alpha, 1) noise, got " + ch.noise().describe());
    return ch.noise().parameter("alpha");
}

double mean_slope(const AdditiveNoiseChannel& ch, double y, const DiffConfig& diff) {
    return derivative([&ch](double t) { return ch.stats(t, false).mean; }, y, 1, diff, ch.smooth_interval(y));
}

double score_slope(const AdditiveNoiseChannel& ch, double y, const DiffConfig& diff) {
    const Interval s = ch.smooth_interval(y);
    return derivative([&ch](double t) { return ch.stats(t, true).score(); }, y, 1, step_within(diff, y, s), s);
}

// int f_X(x) g(stats(Y = x)) dx.
double prior_average_at_x(const AdditiveNoiseChannel& ch, const std::function<double(const PosteriorStats&)>& g) {
    const auto b = support_breaks(ch.prior(), ch.quad().tail_mass);
    return integrate(
        [&](double x) {
            const double px = ch.prior().pdf(x);
            if (px == 0.0) return 0.0;
            const PosteriorStats st = ch.stats(x, false);
            if (!(st.f > 0.0)) return 0.0;
            return px * g(st);
        },
        std::span<const double>(b), ch.quad());
}

}  // namespace

IdentityReport make_report(std::string name, const std::string& channel_desc, double a, double lhs, double rhs,
                           double tolerance, Relation relation, std::string notes) {
    IdentityReport r;
    r.identity_name = std::move(name);
    r.channel_desc = channel_desc;
    r.a = a;
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_residual = std::abs(lhs - rhs);
    r.rel_residual = lhs != 0.0 ? r.abs_residual / std::abs(lhs) : (r.abs_residual == 0.0 ? 0.0 : kInf);
    r.tolerance = tolerance;
    r.relation = relation;
    r.notes = std::move(notes);
    if (relation == Relation::Equality)
        r.pass = r.abs_residual <= std::max(tolerance, tolerance * std::abs(lhs));
    else
        r.pass = lhs - rhs >= -tolerance;
    return r;
}

TestFunction test_function(const std::string& name) {
    if (name == "y") return {name, [](double y) { return y; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
    if (name == "y2")
        return {name, [](double y) { return y * y; }, [](double y) { return 2.0 * y; }, [](double) { return 2.0; }};
    if (name == "y4")
        return {name, [](double y) { return y * y * y * y; }, [](double y) { return 4.0 * y * y * y; },
                [](double y) { return 12.0 * y * y; }};
    if (name == "sin")
        return {name, [](double y) { return std::sin(y); }, [](double y) { return std::cos(y); },
                [](double y) { return -std::sin(y); }};
    if (name == "cos")
        return {name, [](double y) { return std::cos(y); }, [](double y) { return -std::sin(y); },
                [](double y) { return -std::cos(y); }};
    fail(ErrorKind::InvalidParameter, "unknown test function " + name);
}

double entropy_slope(const AdditiveNoiseChannel& ch, const DiffConfig& diff) {
    const QuadratureConfig q = tight(ch.quad());
    return derivative([&](double t) { return differential_entropy(ch.with_a(t).with_quadrature(q)); }, ch.a(), 1,
                      diff, Interval(0.0, kInf));
}

double entropy_curvature(const AdditiveNoiseChannel& ch, const DiffConfig& diff) {
    const QuadratureConfig q = tight(ch.quad());
    return derivative([&](double t) { return differential_entropy(ch.with_a(t).with_quadrature(q)); }, ch.a(), 2,
                      diff, Interval(0.0, kInf));
}

IdentityReport verify_de_bruijn(const AdditiveNoiseChannel& ch, const VerifyOptions& opt) {
    require_unit_gaussian_noise(ch);
    require_assumptions(ch, IdentityOrder::FirstDerivative);
    const double lhs = entropy_slope(ch, opt.a_diff);
    const double rhs = 0.5 * fisher_location(ch);
    return make_report("de_bruijn", ch.describe(), ch.a(), lhs, rhs, tol_or(opt, kFirstOrderTolerance));
}

IdentityReport verify_classic_stein(const Distribution& dist, const TestFunction& r, const VerifyOptions& opt) {
    if (dist.kind() != "gaussian")
        fail(ErrorKind::PreconditionViolated, "classic Stein identity needs a Gaussian law, got " + dist.describe());
    const double mu = dist.mean();
    const double var = dist.variance();
    const QuadratureConfig q;
    const auto b = support_breaks(dist, q.tail_mass);
    const std::span<const double> sb(b);
    const double lhs = integrate([&](double y) { return r.f(y) * (y - mu) * dist.pdf(y); }, sb, q);
    const double rhs = var * integrate([&](double y) { return r.df(y) * dist.pdf(y); }, sb, q);
    return make_report("classic_stein", dist.describe(), 0.0, lhs, rhs, tol_or(opt, kFirstOrderTolerance),
                       Relation::Equality, "r = " + r.name);
}

IdentityReport verify_generalized_stein(const AdditiveNoiseChannel& ch, const VerifyOptions& opt) {
    require_gaussian_noise(ch);
    const double lhs = fisher_location(ch);
    const double rhs = fisher_location_dual(ch, opt.y_diff);
    return make_report("generalized_stein", ch.describe(), ch.a(), lhs, rhs, tol_or(opt, kFirstOrderTolerance),
                       Relation::Equality, "r = -S_Y, t = -f'/f, k = 1, nu = 0; lhs E[S^2], rhs -E[S']");
}

IdentityReport verify_heat_equation(const AdditiveNoiseChannel& ch, const TestFunction& g, const VerifyOptions& opt) {
    if (ch.prior().kind() != "gaussian" || ch.noise().kind() != "gaussian")
        fail(ErrorKind::PreconditionViolated, "heat equation identity needs Gaussian Y");
    const QuadratureConfig q = tight(ch.quad());
    const double lhs = derivative(
        [&](double t) { return ch.with_a(t).with_quadrature(q).expect([&](const PosteriorStats& st) { return g.f(st.y); }, false); },
        ch.a(), 1, opt.a_diff, Interval(0.0, kInf));
    const double rhs = 0.5 * ch.expect([&](const PosteriorStats& st) { return g.d2f(st.y); }, false);
    return make_report("heat_equation", ch.describe(), ch.a(), lhs, rhs, tol_or(opt, kFirstOrderTolerance),
                       Relation::Equality, "g = " + g.name);
}

IdentityReport verify_posterior_mean_slope(const AdditiveNoiseChannel& ch, const VerifyOptions& opt) {
    require_assumptions(ch, IdentityOrder::FirstDerivative);
    const double lhs = entropy_slope(ch, opt.a_diff);
    const double em = ch.expect([&](const PosteriorStats& st) { return mean_slope(ch, st.y, opt.y_diff); }, false);
    const double rhs = (1.0 - em) / (2.0 * ch.a());
    return make_report("posterior_mean_slope", ch.describe(), ch.a(), lhs, rhs, tol_or(opt, kFirstOrderTolerance),
                       Relation::Equality, "E[dm/dy] = " + fmt(em));
}

IdentityReport verify_exponential_slope(const AdditiveNoiseChannel& ch, const VerifyOptions& opt) {
    require_unit_exponential_noise(ch);
    require_assumptions(ch, IdentityOrder::FirstDerivative);
    const double a = ch.a();
    const double sa = std::sqrt(a);
    const double lhs = entropy_slope(ch, opt.a_diff);
    const double em = prior_average_at_x(ch, [](const PosteriorStats& st) { return st.mean; });
    const double rhs = (sa - ch.prior().mean() + em) / (2.0 * a * sa);
    return make_report("exponential_slope", ch.describe(), a, lhs, rhs, tol_or(opt, kFirstOrderTolerance),
                       Relation::Equality, "E_X[E[X|Y=X]] = " + fmt(em));
}

IdentityReport verify_gamma_slope(const AdditiveNoiseChannel& ch, const VerifyOptions& opt) {
    unit_gamma_shape(ch);
    require_assumptions(ch, IdentityOrder::FirstDerivative);
    const double a = ch.a();
    const double sa = std::sqrt(a);
    const CompanionChannel down(ch, -1);
    const double lhs = entropy_slope(ch, opt.a_diff);
    const double em = down.channel().expect(
        [&](const PosteriorStats& st) { return ch.stats(st.y, false).mean; }, false);
    const double rhs = (sa - ch.prior().mean() + em) / (2.0 * a * sa);
    return make_report("gamma_slope", ch.describe(), a, lhs, rhs, tol_or(opt, kFirstOrderTolerance),
                       Relation::Equality, "companion average of E[X|Y] = " + fmt(em));
}

IdentityReport verify_entropy_curvature(const AdditiveNoiseChannel& ch, const VerifyOptions& opt) {
    require_assumptions(ch, IdentityOrder::SecondDerivative);
    const double a = ch.a();
    const double lhs = entropy_curvature(ch, opt.a_diff);
    const double ja = fisher_parameter(ch, opt.y_diff);
    const double du = ch.expect([&](const PosteriorStats& st) { return 1.0 - mean_slope(ch, st.y, opt.y_diff); }, false);
    double sv = ch.expect(
        [&](const PosteriorStats& st) { return score_slope(ch, st.y, opt.y_diff) * st.around_y(2); }, false);
    for (const auto& j : ch.score_jumps()) sv += j.at.f * j.jump * j.at.around_y(2);
    const double rhs = -ja - du / (4.0 * a * a) - sv / (4.0 * a * a);
    return make_report("entropy_curvature", ch.describe(), a, lhs, rhs, tol_or(opt, kSecondOrderTolerance),
                       Relation::Equality, "J_a = " + fmt(ja));
}

IdentityReport verify_gaussian_curvature(const AdditiveNoiseChannel& ch, const VerifyOptions& opt) {
    require_unit_gaussian_noise(ch);
    require_assumptions(ch, IdentityOrder::SecondDerivative);
    const double lhs = entropy_curvature(ch, opt.a_diff);
    const double s2 = ch.expect(
        [&](const PosteriorStats& st) {
            const double s = score_slope(ch, st.y, opt.y_diff);
            return s * s;
        },
        false);
    return make_report("gaussian_curvature", ch.describe(), ch.a(), lhs, -0.5 * s2,
                       tol_or(opt, kSecondOrderTolerance));
}

IdentityReport verify_exponential_curvature(const AdditiveNoiseChannel& ch, const VerifyOptions& opt) {
    require_unit_exponential_noise(ch);
    require_assumptions(ch, IdentityOrder::SecondDerivative);
    const double a = ch.a();
    const double sa = std::sqrt(a);
    const double lhs = entropy_curvature(ch, opt.a_diff);
    const double ja = fisher_parameter(ch, opt.y_diff);
    const double eu = prior_average_at_x(ch, [](const PosteriorStats& st) { return st.around_y(1); });
    const double ev = prior_average_at_x(ch, [](const PosteriorStats& st) { return st.around_y(2); });
    const double rhs = -ja + 3.0 * eu / (4.0 * a * a * sa) - 1.0 / (4.0 * a * a) - ev / (4.0 * a * a * a);
    return make_report("exponential_curvature", ch.describe(), a, lhs, rhs, tol_or(opt, kSecondOrderTolerance),
                       Relation::Equality, "constant term -1/(4a^2); J_a = " + fmt(ja));
}

IdentityReport verify_gamma_curvature(const AdditiveNoiseChannel& ch, const VerifyOptions& opt) {
    const double alpha = unit_gamma_shape(ch);
    if (alpha < 3.0) fail(ErrorKind::InvalidParameter, "gamma curvature identity needs shape >= 3");
    require_assumptions(ch, IdentityOrder::SecondDerivative);
    const double a = ch.a();
    const double sa = std::sqrt(a);
    const CompanionChannel down1(ch, -1);
    const CompanionChannel down2(ch, -2);
    const double lhs = entropy_curvature(ch, opt.a_diff);
    const double ja = fisher_parameter(ch, opt.y_diff);
    const double v2 = down2.channel().expect(
        [&](const PosteriorStats& st) { return ch.stats(st.y, false).around_y(2); }, false);
    const double m1 = down1.channel().expect(
        [&](const PosteriorStats& st) { return ch.stats(st.y, false).mean; }, false);
    const double ratio = down1.channel().expect(
        [&](const PosteriorStats& st) { return ch.stats(st.y, false).around_y(2) / st.around_y(1); }, false);
    const double rhs = -v2 / (4.0 * a * a * a) - m1 / (4.0 * a * a * sa) + (alpha - 1.0) * ratio / (4.0 * a * a * sa) -
                       ja - (sa - ch.prior().mean()) / (4.0 * a * a * sa);
    return make_report("gamma_curvature", ch.describe(), a, lhs, rhs, tol_or(opt, kSecondOrderTolerance),
                       Relation::Equality, "J_a = " + fmt(ja));
}

IdentityReport verify_fisher_slope(const AdditiveNoiseChannel& ch, const VerifyOptions& opt) {
    require_gaussian_noise(ch);
    const QuadratureConfig q = tight(ch.quad());
    const double lhs = derivative([&](double t) { return fisher_location(ch.with_a(t).with_quadrature(q)); }, ch.a(),
                                  1, opt.a_diff, Interval(0.0, kInf));
    const double s2 = ch.expect(
        [&](const PosteriorStats& st) {
            const double s = score_slope(ch, st.y, opt.y_diff);
            return s * s;
        },
        false);
    return make_report("fisher_slope", ch.describe(), ch.a(), lhs, -ch.noise().variance() * s2,
                       tol_or(opt, kFirstOrderTolerance));
}

IdentityReport verify_fisher_inequality(const AdditiveNoiseChannel& ch, const VerifyOptions& opt) {
    require_gaussian_noise(ch);
    const double lhs = 1.0 / fisher_location(ch);
    const double jx = prior_fisher(ch.prior(), ch.quad());
    const double rhs = 1.0 / jx + ch.a() * ch.noise().variance();
    return make_report("fisher_inequality", ch.describe(), ch.a(), lhs, rhs, tol_or(opt, 1e-6), Relation::Inequality,
                       "gap = " + fmt(lhs - rhs));
}

const std::vector<Verifier>& verifier_registry() {
    static const std::vector<Verifier> registry = {
        {"de_bruijn", verify_de_bruijn},
        {"classic_stein",
         [](const AdditiveNoiseChannel& ch, const VerifyOptions& opt) {
             if (ch.prior().kind() != "gaussian" || ch.noise().kind() != "gaussian")
                 fail(ErrorKind::PreconditionViolated, "classic Stein identity needs Gaussian Y");
             const Distribution y = gaussian(ch.prior().mean() + std::sqrt(ch.a()) * ch.noise().mean(),
                                             ch.prior().variance() + ch.a() * ch.noise().variance());
             IdentityReport r = verify_classic_stein(y, test_function("sin"), opt);
             r.channel_desc = ch.describe();
             r.a = ch.a();
             return r;
         }},
        {"generalized_stein", verify_generalized_stein},
        {"heat_equation",
         [](const AdditiveNoiseChannel& ch, const VerifyOptions& opt) {
             return verify_heat_equation(ch, test_function("cos"), opt);
         }},
        {"posterior_mean_slope", verify_posterior_mean_slope},
        {"exponential_slope", verify_exponential_slope},
        {"gamma_slope", verify_gamma_slope},
        {"entropy_curvature", verify_entropy_curvature},
        {"gaussian_curvature", verify_gaussian_curvature},
        {"exponential_curvature", verify_exponential_curvature},
        {"gamma_curvature", verify_gamma_curvature},
        {"fisher_slope", verify_fisher_slope},
        {"fisher_inequality", verify_fisher_inequality},
    };
    return registry;
}

const Verifier* find_verifier(const std::string& name) {
    for (const auto& v : verifier_registry())
        if (v.name == name) return &v;
    return nullptr;
}

}  // namespace infolab
