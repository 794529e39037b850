#include "zerogap/moments.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>
#include <json.hpp>

#include "zerogap/cache.hpp"
#include "zerogap/errors.hpp"
#include "zerogap/parallel.hpp"
#include "zerogap/quadrature.hpp"
#include "zerogap/special_functions.hpp"

namespace zerogap {

namespace {

void require_shift(cplx x, const char* who) {
    if (std::abs(x) < 1e-300) throw DomainError(fmt::format("{}: alpha + beta must be nonzero", who));
}

void require_small(double T, cplx alpha, cplx beta, const char* who) {
    double lim = 2.0 / std::log(T) * (1.0 + 1e-12);
    if (std::abs(alpha) > lim || std::abs(beta) > lim)
        throw DomainError(fmt::format("{}: shifts must satisfy |alpha|, |beta| <= 2 / log T", who));
}

double sqrt_conductor(const LFunctionSpec& spec) {
    return std::sqrt(static_cast<double>(spec.fe.level));
}

// Panel layout shared by the plain and the shifted moment.
struct Panels {
    std::size_t count = 0;
    double width = 0.0;
};

Panels moment_panels(const LFunctionSpec& spec, double T, const MomentOptions& opts) {
    if (opts.nodes < 2) throw DomainError("moment quadrature needs at least 2 nodes per panel");
    if (!(opts.panel_fraction > 0.0)) throw DomainError("panel_fraction must be positive");
    // the spacing is smallest at the top of the window
    double spacing = kPi / std::log(sqrt_conductor(spec) * 2.0 * T);
    auto count = static_cast<std::size_t>(std::ceil(T / (opts.panel_fraction * spacing)));
    std::size_t nodes = count * static_cast<std::size_t>(opts.nodes);
    if (nodes > opts.node_budget)
        throw BudgetError(fmt::format("moment quadrature needs {} nodes, budget is {}", nodes,
                                      opts.node_budget));
    return {count, T / static_cast<double>(count)};
}

void require_window(const EvaluationContext& ctx, double T) {
    if (ctx.t_lo() > T + 1e-9 || ctx.t_hi() < 2.0 * T - 1e-9)
        throw DomainError(fmt::format("evaluation window [{}, {}] does not cover [{}, {}]", ctx.t_lo(),
                                      ctx.t_hi(), T, 2.0 * T));
}

template <class F>
cplx integrate_panels(const Panels& p, double T, int n, const F& f) {
    const GaussRule& g = gauss_legendre(n);
    std::vector<cplx> parts(p.count);
    parallel_for(p.count, [&](std::size_t i) {
        double a = T + p.width * static_cast<double>(i);
        double c = a + 0.5 * p.width, h = 0.5 * p.width;
        cplx s = 0.0;
        for (int j = 0; j < n; ++j) s += g.weights[j] * f(c + h * g.nodes[j]);
        parts[i] = s * h;
    });
    return pairwise_sum(parts);
}

// A context that owns the spec it points to.
struct OwningContext : EvaluationContext {
    std::shared_ptr<const LFunctionSpec> keep;
    OwningContext(std::shared_ptr<const LFunctionSpec> s, double lo, double hi, EvaluationOptions o)
        : EvaluationContext(*s, lo, hi, o), keep(std::move(s)) {}
};

// L_dual on [-2T, -T], or null when the second factor is a conjugate reflection.
std::unique_ptr<OwningContext> dual_context(const EvaluationContext& ctx, double T) {
    if (ctx.spec().self_dual) return nullptr;
    auto dual = std::make_shared<const LFunctionSpec>(dual_spec(ctx.spec()));
    return std::make_unique<OwningContext>(dual, -2.0 * T, -T, ctx.options());
}

}  // namespace

Rational moment_main_coefficient(int mu, int nu) {
    if (mu < 0 || nu < 0) throw DomainError("moment_main_coefficient: mu, nu must be >= 0");
    int k = mu + nu;
    if (k > 60) throw DomainError("moment_main_coefficient: mu + nu too large for exact 64-bit form");
    long long num = (k % 2 ? -1LL : 1LL) * (1LL << (k + 1));
    long long den = k + 1;
    long long g = std::gcd(num < 0 ? -num : num, den);
    return {num / g, den / g};
}

double predicted_moment(double cf, double T, int mu, int nu) {
    if (!(T >= 10.0)) throw DomainError("predicted_moment: T must be >= 10");
    return moment_main_coefficient(mu, nu).value() * cf * T * std::pow(std::log(T), mu + nu + 1);
}

double predicted_moment(const LFunctionSpec& spec, double T, int mu, int nu) {
    if (!spec.residue_cf) throw DomainError("predicted_moment: spec " + spec.name + " has no residue c_f");
    return predicted_moment(*spec.residue_cf, T, mu, nu);
}

double zeta_mean_square_main_term(double T) {
    auto F = [](double t) { return t * std::log(t / (2.0 * kPi)) + (2.0 * kEulerGamma - 1.0) * t; };
    return F(2.0 * T) - F(T);
}

MomentReport numeric_moment(const EvaluationContext& ctx, double T, int mu, int nu,
                            MomentOptions opts) {
    if (!(T >= 10.0)) throw DomainError("numeric_moment: T must be >= 10");
    if (mu < 0 || nu < 0 || mu > 2 || nu > 2) throw DomainError("numeric_moment: need 0 <= mu, nu <= 2");
    require_window(ctx, T);
    const LFunctionSpec& spec = ctx.spec();
    Panels p = moment_panels(spec, T, opts);
    auto dual = dual_context(ctx, T);

    int top = std::max(mu, nu);
    // circle samples for derivatives: 16 points resolve orders <= 2 to ~1e-13
    constexpr int kSamples = 16;
    auto value_at = [&](const EvaluationContext& c, double t, int order) -> cplx {
        if (order == 0) return c.evaluate(t);
        return c.derivatives(t, order, kSamples)[order];
    };
    auto integrand = [&](double t) -> cplx {
        cplx a, b;
        if (top == 0) {
            a = ctx.evaluate(t);
            b = dual ? dual->evaluate(-t) : std::conj(a);
        } else if (!dual) {
            auto d = ctx.derivatives(t, top, kSamples);
            a = d[mu];
            b = std::conj(d[nu]);
        } else {
            a = value_at(ctx, t, mu);
            b = value_at(*dual, -t, nu);
        }
        return a * b;
    };

    MomentReport r;
    r.spec_name = spec.name;
    r.T = T;
    r.mu = mu;
    r.nu = nu;
    r.numeric = integrate_panels(p, T, opts.nodes, integrand);
    r.panels = p.count;
    r.nodes = p.count * static_cast<std::size_t>(opts.nodes);
    r.node_budget = opts.node_budget;
    r.cf = spec.residue_cf;
    if (spec.coefficients) r.coefficient_hash = table_hash(*spec.coefficients);
    if (spec.residue_cf) {
        r.predicted = predicted_moment(*spec.residue_cf, T, mu, nu);
        r.ratio = r.numeric / r.predicted;
    } else {
        r.predicted = std::numeric_limits<double>::quiet_NaN();
        r.ratio = {r.predicted, r.predicted};
    }
    return r;
}

MomentReport numeric_moment(const LFunctionSpec& spec, double T, int mu, int nu, MomentOptions opts) {
    EvaluationContext ctx(spec, T, 2.0 * T);
    return numeric_moment(ctx, T, mu, nu, opts);
}

std::string to_json(const MomentReport& r) {
    auto num = [](double v) -> nlohmann::json {
        if (std::isfinite(v)) return v;
        return nullptr;
    };
    nlohmann::ordered_json j;
    j["T"] = r.T;
    j["mu"] = r.mu;
    j["nu"] = r.nu;
    j["numeric"] = {{"re", r.numeric.real()}, {"im", r.numeric.imag()}};
    j["predicted"] = num(r.predicted);
    j["ratio"] = {{"re", num(r.ratio.real())}, {"im", num(r.ratio.imag())}};
    j["panels"] = r.panels;
    j["node_budget"] = r.node_budget;
    nlohmann::ordered_json prov;
    prov["spec"] = r.spec_name;
    prov["c_f"] = r.cf ? nlohmann::json(*r.cf) : nlohmann::json(nullptr);
    prov["c_f_error"] = r.cf_error;
    prov["node_budget"] = r.node_budget;
    prov["nodes_used"] = r.nodes;
    prov["coefficient_hash"] = r.coefficient_hash;
    j["provenance"] = prov;
    return j.dump(2);
}

cplx rankin_selberg_at(const LFunctionSpec& spec, cplx s, double cf) {
    if (spec.is_control()) return zeta_euler_maclaurin(s);
    if (!spec.coefficients) throw ShapeError("rankin_selberg_at: spec has no coefficient table");
    return rankin_selberg_value(rankin_selberg_table(*spec.coefficients), s, cf).value;
}

cplx shifted_moment_prediction(const LFunctionSpec& spec, double T, cplx alpha, cplx beta, double cf) {
    cplx x = alpha + beta;
    require_shift(x, "shifted_moment_prediction");
    require_small(T, alpha, beta, "shifted_moment_prediction");
    cplx near = rankin_selberg_at(spec, 1.0 + x, cf);
    cplx far = rankin_selberg_at(spec, 1.0 - x, cf);
    // int_T^{2T} (t / 2 pi)^{-2x} dt
    cplx e = 1.0 - 2.0 * x;
    auto prim = [&](double t) { return std::exp(e * std::log(t)) / e; };
    cplx tpart = std::exp(2.0 * x * std::log(2.0 * kPi)) * (prim(2.0 * T) - prim(T));
    return T * near + far * tpart;
}

cplx shifted_moment_numeric(const EvaluationContext& ctx, double T, cplx alpha, cplx beta,
                            MomentOptions opts) {
    if (!(T >= 10.0)) throw DomainError("shifted_moment_numeric: T must be >= 10");
    require_small(T, alpha, beta, "shifted_moment_numeric");
    require_window(ctx, T);
    Panels p = moment_panels(ctx.spec(), T, opts);
    auto dual = dual_context(ctx, T);
    auto integrand = [&](double t) -> cplx {
        cplx a = ctx.evaluate(t, alpha);
        // L_dual(1/2 + beta - it): conjugate reflection when the coefficients are real
        cplx b = dual ? dual->evaluate(-t, beta) : std::conj(ctx.evaluate(t, std::conj(beta)));
        return a * b;
    };
    return integrate_panels(p, T, opts.nodes, integrand);
}

cplx f_series(double cf, cplx x, double T, int terms) {
    if (terms < 1) throw DomainError("f_series: terms must be >= 1");
    double L = std::log(T);
    // term_n = (-1)^n 2^{n+1} x^n L^{n+1} / (n+1)!, built by recurrence
    cplx term = 2.0 * L;
    std::vector<cplx> parts;
    parts.reserve(static_cast<std::size_t>(terms));
    for (int n = 0; n < terms; ++n) {
        parts.push_back(term);
        term *= -2.0 * x * L / static_cast<double>(n + 2);
    }
    return cf * T * pairwise_sum(parts);
}

cplx f_series_closed(double cf, cplx x, double T) {
    if (std::abs(x) == 0.0) return cf * T * 2.0 * std::log(T);
    // 1 - T^{-2x} = -expm1(-2 x log T), kept accurate for small x
    cplx z = -2.0 * x * std::log(T);
    cplx em1 = std::abs(z) < 1e-3 ? z * (1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0)))
                                  : std::exp(z) - 1.0;
    return cf * T * (-em1) / x;
}

namespace {

MeanValueCheck mean_value(const std::vector<cplx>& a, double T0, double H,
                          const std::function<double(double)>* g) {
    if (!(H > 0.0)) throw DomainError("mean value check: H must be positive");
    MeanValueCheck out;
    std::size_t N = a.size();
    double sq = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        double m = std::norm(a[n - 1]);
        sq += m;
        out.bound += static_cast<double>(n) * m;
    }
    if (N == 0) return out;
    std::vector<double> logs(N);
    for (std::size_t n = 1; n <= N; ++n) logs[n - 1] = std::log(static_cast<double>(n));
    double panel = N > 1 ? std::min(1.0, 1.0 / logs[N - 1]) : H;
    auto poly = [&](double t) {
        cplx s = 0.0;
        for (std::size_t n = 0; n < N; ++n) s += a[n] * std::polar(1.0, t * logs[n]);
        double v = std::norm(s);
        return g ? v * (*g)(t) : v;
    };
    out.lhs = composite_gauss(poly, T0, T0 + H, panel, 10);
    if (g) {
        double w = composite_gauss([&](double t) { return (*g)(t); }, T0, T0 + H, 1.0, 10);
        out.diag = sq * w;
    } else {
        out.diag = sq * H;
    }
    return out;
}

std::size_t coefficient_reach(const LFunctionSpec& spec, std::size_t need, const char* who) {
    if (!spec.coefficients) throw ShapeError(fmt::format("{}: spec has no coefficient table", who));
    if (spec.coefficients->size() < need)
        throw ResourceError(fmt::format("{}: needs {} coefficients, table has {}", who, need,
                                        spec.coefficients->size()));
    return need;
}

}  // namespace

MeanValueCheck mv_meanvalue_check(const std::vector<cplx>& a, double H, double T0) {
    return mean_value(a, T0, H, nullptr);
}

MeanValueCheck weighted_meanvalue_check(const std::vector<cplx>& a, double T0, double H,
                                        const std::function<double(double)>& g) {
    return mean_value(a, T0, H, &g);
}

SumCheck weighted_sum_check(const LFunctionSpec& spec, double T, cplx alpha, cplx beta, double cf) {
    cplx x = alpha + beta;
    require_shift(x, "weighted_sum_check");
    require_small(T, alpha, beta, "weighted_sum_check");
    // e^{-2n/T} < 1e-18 beyond n = T ln(1e18) / 2
    auto need = static_cast<std::size_t>(std::ceil(0.5 * T * std::log(1e18)));
    std::size_t N = coefficient_reach(spec, need, "weighted_sum_check");
    std::vector<cplx> terms(N);
    for (std::size_t n = 1; n <= N; ++n) {
        double ln = std::log(static_cast<double>(n));
        terms[n - 1] = std::norm((*spec.coefficients)(n)) * std::exp(-(1.0 + x) * ln - 2.0 * n / T);
    }
    SumCheck out;
    out.lhs = pairwise_sum(terms);
    out.rhs = rankin_selberg_at(spec, 1.0 + x, cf) +
              cf * std::exp(log_gamma(-x) - x * std::log(0.5 * T));
    out.terms = N;
    return out;
}

SumCheck truncated_sum_check(const LFunctionSpec& spec, double T, cplx alpha, cplx beta, double cf) {
    cplx x = alpha + beta;
    require_shift(x, "truncated_sum_check");
    require_small(T, alpha, beta, "truncated_sum_check");
    auto N = coefficient_reach(spec, static_cast<std::size_t>(std::floor(T)), "truncated_sum_check");
    std::vector<cplx> terms(N);
    for (std::size_t n = 1; n <= N; ++n)
        terms[n - 1] = std::norm((*spec.coefficients)(n)) *
                       std::exp((-1.0 + x) * std::log(static_cast<double>(n)));
    SumCheck out;
    out.lhs = pairwise_sum(terms);
    out.rhs = rankin_selberg_at(spec, 1.0 - x, cf) + std::exp(x * std::log(T)) * cf / x;
    out.terms = N;
    return out;
}

double smoothed_square_sum(const LFunctionSpec& spec, double X, double a) {
    auto need = static_cast<std::size_t>(std::ceil(X * std::log(1e18)));
    std::size_t N = std::min(need, spec.coefficients ? spec.coefficients->size() : 0);
    if (N == 0) throw ShapeError("smoothed_square_sum: spec has no coefficients");
    std::vector<double> terms(N);
    for (std::size_t n = 1; n <= N; ++n)
        terms[n - 1] = std::norm((*spec.coefficients)(n)) *
                       std::exp((-0.75 + a) * std::log(static_cast<double>(n)) - n / X);
    return pairwise_sum(terms);
}

}  // namespace zerogap
