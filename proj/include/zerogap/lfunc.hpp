#pragma once

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zerogap/coefficients.hpp"

namespace zerogap {

using cplx = std::complex<double>;

// L_inf(s) = Q^s prod_j Gamma(w_j s + mu_j)
struct FunctionalEquationData {
    double Q = 1.0;
    std::vector<double> weights;
    std::vector<cplx> shifts;
    cplx epsilon = 1.0;
    int level = 1;
    double degree = 0.0;

    // Throws ShapeError when the stored data breaks an invariant.
    void validate() const;
};

struct LFunctionSpec {
    std::string name;
    FunctionalEquationData fe;
    std::shared_ptr<const CoefficientTable> coefficients;
    bool self_dual = true;
    std::optional<double> residue_cf;
    // Residue of L(s) at s = 1 (zeta only; zero for entire L-functions).
    cplx pole_residue = 0.0;

    void validate() const;
    bool is_control() const { return fe.degree < 1.5; }
};

LFunctionSpec zeta_spec(std::size_t N = 200000);

// Weight-12 cusp form Delta: Q = 1/pi, mu = 11/4, 13/4 (the parameterization that
// satisfies the functional equation with the tau coefficients).
LFunctionSpec delta_spec(std::size_t N = 200000);
LFunctionSpec delta_spec(std::shared_ptr<const CoefficientTable> table);

// Same, with the shifts (k-1)/2, (k+1)/2 inside Gamma(s/2 + mu) taken literally.
LFunctionSpec delta_spec_literal_shifts(std::shared_ptr<const CoefficientTable> table);

// Conjugated coefficients, conjugated shifts, conjugated root number.
LFunctionSpec dual_spec(const LFunctionSpec& spec);

// log L_inf(s) on the principal log-gamma branch.
cplx log_gamma_factor(const FunctionalEquationData& fe, cplx s, bool dual = false);
// d/ds log L_inf(s)
cplx gamma_factor_log_derivative(const FunctionalEquationData& fe, cplx s, bool dual = false);

// Phi(s) = L_inf(1-s, dual) / L_inf(s), through log-gamma differences.
cplx phi_factor(const LFunctionSpec& spec, cplx s);
cplx log_phi_factor(const LFunctionSpec& spec, cplx s);

// L_inf(s) * l_value, formed in log scale.
cplx completed_lambda(const LFunctionSpec& spec, cplx s, cplx l_value);

// |Lambda(s) - eps Lambda_dual(1 - s)| from L(s) and L_dual(1 - s).
double functional_equation_residual(const LFunctionSpec& spec, cplx s, cplx l_value,
                                    cplx l_dual_value);

// Continuous phase theta(t) = arg L_inf(1/2 + it) - arg(eps)/2, with theta(0) = 0 for
// real shifts and eps = 1. The rotation is omega(t) = exp(i theta(t)).
double rotation_phase(const LFunctionSpec& spec, double t);
double rotation_phase_derivative(const LFunctionSpec& spec, double t);

// omega(t) * l_value; real up to rounding for self-dual specs.
cplx rotated_value(const LFunctionSpec& spec, double t, cplx l_value);
double hardy_z(const LFunctionSpec& spec, double t, cplx l_value);

// Per-scan branch tracker: follows arg omega by unwrapping increments and refuses steps
// larger than the configured bound. Not to be shared between workers.
class RotationTracker {
public:
    explicit RotationTracker(const LFunctionSpec& spec, double max_step = 0.0);
    double max_step(double t) const;
    // Tracked phase at t; t must advance from the anchor 0+ in steps within max_step.
    double phase(double t);
    double z(double t, cplx l_value);

private:
    const LFunctionSpec* spec_;
    double fixed_step_;
    double last_t_ = 0.0;
    double last_phase_ = 0.0;
    bool started_ = false;
};

// q (2 pi)^-2 |s + 2 mu_1| |s + 2 mu_2|
double analytic_conductor(const LFunctionSpec& spec, cplx s);

// (T/pi) log(sqrt(q) T / (2 pi e)); degree-1 control: (T/2pi) log(T/(2 pi e)) + 7/8.
double zero_count_main_term(const LFunctionSpec& spec, double T);

// Euler-Maclaurin evaluation of zeta(s), independent of the approximate functional equation.
cplx zeta_euler_maclaurin(cplx s, int N = 0, int terms = 0);

// Named specs parsed from "key = value" blocks separated by blank lines or [name] headers.
class SpecRegistry {
public:
    SpecRegistry();  // empty; built-ins are constructed on demand by callers
    void add(LFunctionSpec spec);
    void load_text(const std::string& text, const std::string& base_dir = ".");
    void load_file(const std::string& path);
    const LFunctionSpec& get(const std::string& name) const;
    bool contains(const std::string& name) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, LFunctionSpec> specs_;
};

}  // namespace zerogap
