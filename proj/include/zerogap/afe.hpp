#pragma once

#include <complex>
#include <vector>

#include "zerogap/lfunc.hpp"

namespace zerogap {

struct EvaluationOptions {
    double X = 1.0;               // balance between the direct and the reflected sum
    double trunc_epsilon = 1e-18; // smoothing weight allowed at the Dirichlet cutoff
    double B = 8.0;               // G(w) = exp(w^2 / B)
    double line = 1.5;            // Re w of the integration line
    double step = 0.2;            // trapezoid step along the line
};

// Smoothed approximate functional equation
//   L(s) gamma(s) = I(X, s) + eps I_dual(1/X, 1 - s) - (pole terms)
//   I(X, s) = (1 / 2 pi i) int_(c) X^w G(w) gamma(s + w) D(s + w) dw / w
// evaluated by the trapezoid rule on a fixed lattice z_k = 1/2 + c + i k h. D and log
// gamma are cached on the lattice for the whole t-window, so one evaluation touches only
// the ~100 lattice points within reach of the Gaussian.
class EvaluationContext {
public:
    EvaluationContext(const LFunctionSpec& spec, double t_lo, double t_hi,
                      EvaluationOptions opts = {});

    const LFunctionSpec& spec() const { return *spec_; }
    const EvaluationOptions& options() const { return opts_; }
    double t_lo() const { return t_lo_; }
    double t_hi() const { return t_hi_; }
    std::size_t terms() const { return n_main_; }
    std::size_t dual_terms() const { return n_dual_; }

    // Largest shift accepted at ordinate t: 2 / log(|t| + 10).
    static double max_shift(double t);

    // L(1/2 + alpha + it)
    cplx evaluate(double t, cplx alpha = 0.0) const;

    // L^(order)(1/2 + it) via the trapezoid rule on the circle |alpha| = 1/log(|t| + 10).
    cplx derivative(double t, int order, int M = 32) const;
    // Orders 0..max_order from one set of circle samples.
    std::vector<cplx> derivatives(double t, int max_order, int M = 32) const;

private:
    cplx sum_side(const std::vector<cplx>& D, const std::vector<cplx>& lg, long k0, cplx s,
                  double log_x, cplx log_gamma_s) const;

    const LFunctionSpec* spec_;
    LFunctionSpec dual_;
    EvaluationOptions opts_;
    double t_lo_, t_hi_;
    double sigma0_ = 0.0;
    double v_max_ = 0.0;
    long reach_ = 0;
    std::size_t n_main_ = 0, n_dual_ = 0;
    long k_main_lo_ = 0, k_dual_lo_ = 0;
    std::vector<cplx> d_main_, lg_main_, d_dual_, lg_dual_;
    cplx r1_ = 0.0, r0_ = 0.0;
};

// Coefficients needed so the smoothing weight falls below eps at ordinate t.
std::size_t required_terms(const LFunctionSpec& spec, double t_max, EvaluationOptions opts = {});

// Independent check of one evaluation: the Euler-Maclaurin value for zeta; otherwise the
// functional-equation closure |L(s) - eps Phi(s) L_dual(1 - s)| with L_dual(1 - s) taken from
// a second context whose balance parameter is X e^0.3.
double afe_residual(const EvaluationContext& ctx, double t);
std::vector<double> afe_residuals(const EvaluationContext& ctx, const std::vector<double>& ts);

// The two explicit sums of the classical smoothed approximation with X = t / 2 pi:
//   sum_{n <= N1} a(n) n^{-s} e^{-n/X} + eps Phi(s) sum_{n <= X} conj a(n) n^{s-1},
// N1 = ceil(X ln(1/eps)). The contour terms are left out, so this is a diagnostic only.
cplx main_sums(const LFunctionSpec& spec, double t, cplx alpha = 0.0,
               double trunc_epsilon = 1e-18);

// |L(sigma + it)| / q(1/2 + it)^{(1 - sigma)/2 + 0.01}
double convexity_diagnostic(const LFunctionSpec& spec, double sigma, double t, cplx l_value);

}  // namespace zerogap
