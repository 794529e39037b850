#include "zerogap/afe.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>

#include "zerogap/errors.hpp"
#include "zerogap/special_functions.hpp"

namespace zerogap {

namespace {

// log of the scale y0 where the smoothing weight V(n / (X y0)) turns over
double log_scale(const LFunctionSpec& spec, double t) {
    return gamma_factor_log_derivative(spec.fe, cplx(0.5, std::fabs(t))).real();
}

double cutoff_log_width(const EvaluationOptions& o) {
    // V(y) ~ erfc(sqrt(B)/2 log(y/y0)) / 2 past the turnover
    double x = boost::math::erfc_inv(2.0 * o.trunc_epsilon);
    return 2.0 * x / std::sqrt(o.B) + 1.0;
}

std::size_t terms_for(const LFunctionSpec& spec, double t_max, double X,
                      const EvaluationOptions& o) {
    double lg = std::log(X) + log_scale(spec, t_max) + cutoff_log_width(o);
    return static_cast<std::size_t>(std::ceil(std::exp(std::max(lg, 0.0)))) + 2;
}

void fill_lattice(const CoefficientTable& tbl, bool conjugate, std::size_t N, double sigma0,
                  double h, long k_lo, std::size_t K, std::vector<cplx>& D) {
    D.assign(K, 0.0);
    std::vector<cplx> cur(N), stepv(N), coef(N);
    auto reset = [&](long k) {
        for (std::size_t n = 1; n <= N; ++n) {
            double ln = std::log(static_cast<double>(n));
            cur[n - 1] = std::polar(std::exp(-sigma0 * ln), -ln * h * static_cast<double>(k));
        }
    };
    for (std::size_t n = 1; n <= N; ++n) {
        double ln = std::log(static_cast<double>(n));
        stepv[n - 1] = std::polar(1.0, -ln * h);
        coef[n - 1] = conjugate ? std::conj(tbl(n)) : tbl(n);
    }
    for (std::size_t i = 0; i < K; ++i) {
        long k = k_lo + static_cast<long>(i);
        if (i % 64 == 0) {
            reset(k);  // bounds the drift of the phase recurrence
        } else {
            for (std::size_t n = 0; n < N; ++n) cur[n] *= stepv[n];
        }
        cplx s = 0.0;
        for (std::size_t n = 0; n < N; ++n) s += coef[n] * cur[n];
        D[i] = s;
    }
}

}  // namespace

std::size_t required_terms(const LFunctionSpec& spec, double t_max, EvaluationOptions opts) {
    double pad = 2.0 / std::log(std::fabs(t_max) + 10.0) + 1.0;
    return std::max(terms_for(spec, std::fabs(t_max) + pad, opts.X, opts),
                    terms_for(spec, std::fabs(t_max) + pad, 1.0 / opts.X, opts));
}

double EvaluationContext::max_shift(double t) { return 2.0 / std::log(std::fabs(t) + 10.0); }

EvaluationContext::EvaluationContext(const LFunctionSpec& spec, double t_lo, double t_hi,
                                     EvaluationOptions opts)
    : spec_(&spec), dual_(dual_spec(spec)), opts_(opts), t_lo_(t_lo), t_hi_(t_hi) {
    if (!(t_lo <= t_hi)) throw DomainError("evaluation window is empty");
    if (t_lo < 2.0 && t_hi > -2.0) throw DomainError("evaluation window must avoid |t| < 2");
    if (!(opts.X > 0.0) || !(opts.trunc_epsilon > 0.0) || opts.trunc_epsilon >= 1.0 ||
        !(opts.B > 0.0) || !(opts.step > 0.0) || !(opts.line > 1.0))
        throw DomainError("evaluation options out of range");
    spec.validate();

    double tmin = std::min(std::fabs(t_lo), std::fabs(t_hi));
    double tmax = std::max(std::fabs(t_lo), std::fabs(t_hi));
    double amax = max_shift(tmin);
    double c_max = opts.line + amax;
    sigma0_ = 0.5 + opts.line;

    // |integrand| ~ exp(-v^2/B + (pi m / 4)|v| + c log y0); cut where it drops below 1e-18
    double m = spec.fe.degree;
    double a = kPi * m / 4.0;
    double K = c_max * std::max(0.0, log_scale(spec, tmax + 40.0) + std::fabs(std::log(opts.X))) +
               c_max * c_max / opts.B + 41.5;
    v_max_ = 0.5 * opts.B * (a + std::sqrt(a * a + 4.0 * K / opts.B));
    reach_ = static_cast<long>(std::ceil(v_max_ / opts.step));

    double h = opts.step;
    double im_lo = t_lo - amax, im_hi = t_hi + amax;
    k_main_lo_ = static_cast<long>(std::floor(im_lo / h)) - reach_ - 1;
    long k_main_hi = static_cast<long>(std::ceil(im_hi / h)) + reach_ + 1;
    k_dual_lo_ = static_cast<long>(std::floor(-im_hi / h)) - reach_ - 1;
    long k_dual_hi = static_cast<long>(std::ceil(-im_lo / h)) + reach_ + 1;

    double t_need = tmax + amax + 1.0;
    n_main_ = terms_for(spec, t_need, opts.X, opts);
    n_dual_ = terms_for(spec, t_need, 1.0 / opts.X, opts);
    std::size_t have = spec.coefficients->size();
    if (n_main_ > have || n_dual_ > have)
        throw ResourceError("spec " + spec.name + " needs " +
                            std::to_string(std::max(n_main_, n_dual_)) +
                            " coefficients for |t| <= " + std::to_string(tmax) + ", table has " +
                            std::to_string(have));

    auto km = static_cast<std::size_t>(k_main_hi - k_main_lo_ + 1);
    auto kd = static_cast<std::size_t>(k_dual_hi - k_dual_lo_ + 1);
    fill_lattice(*spec.coefficients, false, n_main_, sigma0_, h, k_main_lo_, km, d_main_);
    fill_lattice(*spec.coefficients, true, n_dual_, sigma0_, h, k_dual_lo_, kd, d_dual_);
    lg_main_.resize(km);
    lg_dual_.resize(kd);
    for (std::size_t i = 0; i < km; ++i)
        lg_main_[i] = log_gamma_factor(spec.fe, cplx(sigma0_, h * static_cast<double>(k_main_lo_ + static_cast<long>(i))));
    for (std::size_t i = 0; i < kd; ++i)
        lg_dual_[i] = log_gamma_factor(spec.fe, cplx(sigma0_, h * static_cast<double>(k_dual_lo_ + static_cast<long>(i))), true);

    if (spec.pole_residue != cplx(0.0)) {
        // residues of the completed function at s = 1 and s = 0
        r1_ = std::exp(log_gamma_factor(spec.fe, 1.0)) * spec.pole_residue;
        cplx r1_dual = std::exp(log_gamma_factor(spec.fe, 1.0, true)) * dual_.pole_residue;
        r0_ = -spec.fe.epsilon * r1_dual;
    }
}

cplx EvaluationContext::sum_side(const std::vector<cplx>& D, const std::vector<cplx>& lg,
                                 long k_lo, cplx s, double log_x, cplx log_gamma_s) const {
    double h = opts_.step;
    long kc = std::lround(s.imag() / h);
    cplx acc = 0.0;
    for (long k = kc - reach_; k <= kc + reach_; ++k) {
        auto i = static_cast<std::size_t>(k - k_lo);
        cplx w = cplx(sigma0_, h * static_cast<double>(k)) - s;
        acc += std::exp(w * w / opts_.B + w * log_x + lg[i] - log_gamma_s) * D[i] / w;
    }
    return acc * (h / (2.0 * kPi));
}

cplx EvaluationContext::evaluate(double t, cplx alpha) const {
    if (std::fabs(t) < 2.0) throw DomainError("evaluate: |t| must be >= 2");
    if (t < t_lo_ - 1e-12 || t > t_hi_ + 1e-12)
        throw DomainError("evaluate: t = " + std::to_string(t) + " outside the context window");
    if (std::abs(alpha) > max_shift(t) * (1.0 + 1e-12))
        throw DomainError("evaluate: shift larger than 2 / log(|t| + 10)");
    cplx s(0.5 + alpha.real(), t + alpha.imag());
    cplx lgs = log_gamma_factor(spec_->fe, s);
    double lx = std::log(opts_.X);
    cplx main = sum_side(d_main_, lg_main_, k_main_lo_, s, lx, lgs);
    cplx dual = sum_side(d_dual_, lg_dual_, k_dual_lo_, 1.0 - s, -lx, lgs);
    cplx v = main + spec_->fe.epsilon * dual;
    if (r1_ != cplx(0.0) || r0_ != cplx(0.0)) {
        cplx u = 1.0 - s;
        v -= std::exp(u * lx + u * u / opts_.B - lgs) * r1_ / u;
        v -= std::exp(-s * lx + s * s / opts_.B - lgs) * r0_ / (-s);
    }
    return v;
}

std::vector<cplx> EvaluationContext::derivatives(double t, int max_order, int M) const {
    if (max_order < 0 || max_order > 3) throw DomainError("derivative: order must be in 0..3");
    if (M < 8) throw DomainError("derivative: need at least 8 circle nodes");
    std::vector<cplx> out(static_cast<std::size_t>(max_order) + 1, 0.0);
    if (max_order == 0) {
        out[0] = evaluate(t);
        return out;
    }
    double r = 1.0 / std::log(std::fabs(t) + 10.0);
    std::vector<cplx> samples(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j) samples[j] = evaluate(t, std::polar(r, 2.0 * kPi * j / M));
    double fact = 1.0;
    for (int mu = 0; mu <= max_order; ++mu) {
        if (mu > 0) fact *= mu;
        if (mu == 0) {
            out[0] = evaluate(t);
            continue;
        }
        cplx s = 0.0;
        for (int j = 0; j < M; ++j) s += samples[j] * std::polar(1.0, -2.0 * kPi * mu * j / M);
        out[mu] = s * (fact / (M * std::pow(r, mu)));
    }
    return out;
}

cplx EvaluationContext::derivative(double t, int order, int M) const {
    if (order == 0) return evaluate(t);
    return derivatives(t, order, M)[static_cast<std::size_t>(order)];
}

namespace {

bool is_zeta(const LFunctionSpec& spec) {
    return spec.coefficients->source == CoefficientSource::kZeta && spec.fe.degree == 1.0;
}

}  // namespace

std::vector<double> afe_residuals(const EvaluationContext& ctx, const std::vector<double>& ts) {
    std::vector<double> out;
    out.reserve(ts.size());
    const LFunctionSpec& spec = ctx.spec();
    if (is_zeta(spec)) {
        for (double t : ts)
            out.push_back(std::abs(ctx.evaluate(t) - zeta_euler_maclaurin(cplx(0.5, t))));
        return out;
    }
    if (ts.empty()) return out;
    auto [lo, hi] = std::minmax_element(ts.begin(), ts.end());
    EvaluationOptions o = ctx.options();
    o.X *= std::exp(0.3);
    LFunctionSpec dual = dual_spec(spec);
    EvaluationContext reflected(dual, -*hi, -*lo, o);
    for (double t : ts) {
        cplx l = ctx.evaluate(t);
        cplx ld = reflected.evaluate(-t);
        cplx s(0.5, t);
        cplx rhs = spec.fe.epsilon * phi_factor(spec, s) * ld;
        out.push_back(std::abs(l - rhs));
    }
    return out;
}

double afe_residual(const EvaluationContext& ctx, double t) { return afe_residuals(ctx, {t}).front(); }

cplx main_sums(const LFunctionSpec& spec, double t, cplx alpha, double trunc_epsilon) {
    if (t < 2.0) throw DomainError("main_sums: t must be >= 2");
    double X = t / (2.0 * kPi);
    auto N1 = static_cast<std::size_t>(std::ceil(X * std::log(1.0 / trunc_epsilon)));
    const auto& a = *spec.coefficients;
    if (N1 > a.size()) throw ResourceError("main_sums: coefficient table too short");
    cplx s(0.5 + alpha.real(), t + alpha.imag());
    cplx s1 = 0.0;
    for (std::size_t n = 1; n <= N1; ++n) {
        double ln = std::log(static_cast<double>(n));
        s1 += a(n) * std::exp(-s * ln) * mellin_smoother(static_cast<double>(n) / X);
    }
    cplx s2 = 0.0;
    for (std::size_t n = 1; static_cast<double>(n) <= X; ++n) {
        double ln = std::log(static_cast<double>(n));
        s2 += std::conj(a(n)) * std::exp((s - 1.0) * ln);
    }
    return s1 + spec.fe.epsilon * phi_factor(spec, s) * s2;
}

double convexity_diagnostic(const LFunctionSpec& spec, double sigma, double t, cplx l_value) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("convexity_diagnostic: need 0 < sigma < 1");
    double q = analytic_conductor(spec, cplx(0.5, t));
    return std::abs(l_value) / std::pow(q, (1.0 - sigma) / 2.0 + 0.01);
}

}  // namespace zerogap
