#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zerogap/afe.hpp"
#include "zerogap/lfunc.hpp"

namespace zerogap {

struct Rational {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

// (-1)^{mu+nu} 2^{mu+nu+1} / (mu + nu + 1), reduced
Rational moment_main_coefficient(int mu, int nu);

// coefficient * c_f * T * (log T)^{mu+nu+1}; throws DomainError without a residue
double predicted_moment(const LFunctionSpec& spec, double T, int mu, int nu);
double predicted_moment(double cf, double T, int mu, int nu);

// [t log(t / 2 pi) + (2 gamma_E - 1) t]_T^{2T}, the classical mean square of zeta.
double zeta_mean_square_main_term(double T);

struct MomentOptions {
    int nodes = 10;                  // Gauss-Legendre nodes per panel
    double panel_fraction = 0.5;     // panel <= fraction * pi / log(sqrt(q) t)
    std::size_t node_budget = 4'000'000;
};

struct MomentReport {
    std::string spec_name;
    double T = 0.0;
    int mu = 0, nu = 0;
    cplx numeric;
    double predicted = 0.0;       // NaN when no residue is known
    cplx ratio;
    std::size_t panels = 0;
    std::size_t nodes = 0;        // integrand evaluations
    std::size_t node_budget = 0;
    std::optional<double> cf;
    double cf_error = 0.0;
    std::string coefficient_hash;
};

// int_T^{2T} L^(mu)(1/2 + it) L_dual^(nu)(1/2 - it) dt. The context must cover [T, 2T].
MomentReport numeric_moment(const EvaluationContext& ctx, double T, int mu, int nu,
                            MomentOptions opts = {});
MomentReport numeric_moment(const LFunctionSpec& spec, double T, int mu, int nu,
                            MomentOptions opts = {});

std::string to_json(const MomentReport& r);

// L(s, f x conj f): exact zeta for the control spec, otherwise the tail-corrected partial sum.
cplx rankin_selberg_at(const LFunctionSpec& spec, cplx s, double cf);

// int_T^{2T} {L(1 + x, f x f) + (t / 2 pi)^{-2x} L(1 - x, f x f)} dt, x = alpha + beta != 0
cplx shifted_moment_prediction(const LFunctionSpec& spec, double T, cplx alpha, cplx beta,
                               double cf);
// int_T^{2T} L(s + alpha) L_dual(1 - s + beta) dt by the same quadrature as numeric_moment
cplx shifted_moment_numeric(const EvaluationContext& ctx, double T, cplx alpha, cplx beta,
                            MomentOptions opts = {});

// c_f T sum_{n < terms} (-1)^n 2^{n+1} x^n (log T)^{n+1} / (n+1)!
cplx f_series(double cf, cplx x, double T, int terms);
cplx f_series_closed(double cf, cplx x, double T);

struct MeanValueCheck {
    double lhs = 0.0;
    double diag = 0.0;
    double bound = 0.0;
};

// int_{T0}^{T0+H} |sum a_n n^{it}|^2 dt against H sum |a_n|^2 and sum n |a_n|^2
MeanValueCheck mv_meanvalue_check(const std::vector<cplx>& a, double H, double T0 = 0.0);
// Same with a weight g(t) under the integral; diag becomes sum |a_n|^2 int g.
MeanValueCheck weighted_meanvalue_check(const std::vector<cplx>& a, double T0, double H,
                                        const std::function<double(double)>& g);

struct SumCheck {
    cplx lhs;
    cplx rhs;
    std::size_t terms = 0;
};

// sum |a(n)|^2 n^{-1-x} e^{-2n/T} against L(1+x, f x f) + c_f Gamma(-x) (T/2)^{-x}
SumCheck weighted_sum_check(const LFunctionSpec& spec, double T, cplx alpha, cplx beta, double cf);
// sum_{n <= T} |a(n)|^2 n^{-1+x} against L(1-x, f x f) + T^x c_f / x
SumCheck truncated_sum_check(const LFunctionSpec& spec, double T, cplx alpha, cplx beta, double cf);

// sum |a(n)|^2 n^{-3/4 + a} e^{-n/X}; bounded by a constant times X^{1/4 + a}
double smoothed_square_sum(const LFunctionSpec& spec, double X, double a);

}  // namespace zerogap
