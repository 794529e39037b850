#pragma once

#include <functional>
#include <string>
#include <vector>

namespace zerogap {

// h^(a) = max(1 - |a| + sin(2 pi |a|) / (2 pi), 0): transform of the Selberg minorant of
// the indicator of [-1, 1] among functions with transform supported in [-1, 1].
double selberg_h_hat(double a);
double selberg_h_hat_d1(double a);
double selberg_h_hat_d2(double a);

// Inverse transform of selberg_h_hat in closed form: (sin pi u / pi u)^2 / (1 - u^2).
double selberg_h(double u);

// (sin pi xi u / pi xi u)^2 and its triangular transform max(xi - |a|, 0) / xi^2.
double fejer_r(double u, double xi);
double fejer_r_hat(double a, double xi);

// 4 / (4 + u^2) = int e^{-2|x|} e^{ixu} dx
double pair_weight(double u);

struct KernelPair {
    std::string name;
    std::function<double(double)> direct;
    std::function<double(double)> transform;
    double support = 0.0;  // transform vanishes for |a| >= support
    std::vector<double> kinks;  // points in (0, support) where the transform is not smooth
};

KernelPair fejer_pair(double xi);
// r(u) = h(u / lambda), r^(a) = lambda h^(lambda a)
KernelPair selberg_minorant_pair(double lambda = 1.0);

// int r(u) e(a u) du for an even r decaying like u^-2 or faster: Gauss panels on [0, U]
// plus a tail term from the mean of u^2 r(u) cos(2 pi a u) over [U/2, U].
double numerical_fourier_transform(const std::function<double(double)>& r, double a,
                                   double U = 2000.0);

// int r^(a) e(-u a) da over the compact support, kinks respected.
double numerical_inverse_transform(const KernelPair& k, double u);

struct FormFactorCurve {
    std::vector<double> alphas;
    std::vector<double> values;
    double T = 0.0;
    double m = 0.0;
    std::size_t zero_count = 0;
    bool factored = false;
};

inline constexpr std::size_t kDirectPairLimit = 5000;

// (m T log T / 2 pi)^-1 sum_{g, g' <= T} T^{i m a (g - g')} w(g - g'). Pairs are summed
// directly up to `direct_limit` zeros; beyond it the sum is rewritten as
// int_0^inf e^{-2x} (|S(th + x)|^2 + |S(th - x)|^2) dx with S(th) = sum_g e^{i th g}.
FormFactorCurve form_factor(const std::vector<double>& zeros, double m, double T,
                            const std::vector<double>& alphas,
                            std::size_t direct_limit = kDirectPairLimit);

// |a| + m T^{-2|a| m} log T below 1, 1 above.
double form_factor_model(double a, double m, double T);

struct ConvolutionSum {
    double lhs = 0.0;
    double rhs = 0.0;
    std::size_t nodes = 0;
};

// lhs = sum_{g, g'} r((g - g') m log T / 2 pi) w(g - g')
// rhs = (m T log T / 2 pi) int r^(a) F(a) da by quadrature over the support.
ConvolutionSum convolution_sum(const std::vector<double>& zeros, const KernelPair& k, double m,
                               double T);

// Several kernels against one shared table of F values.
std::vector<ConvolutionSum> convolution_sums(const std::vector<double>& zeros,
                                             const std::vector<KernelPair>& ks, double m,
                                             double T);

// xi^2 / 2 - xi / 2 (1 + 1/m^2) + 1 / (3 m^3)
double i_xi_bound(double xi, double m);

struct MinorantReport {
    double h_hat_at_1 = 0.0;
    double h_hat_d1_at_1 = 0.0;
    double max_d2_error = 0.0;  // closed-form h^'' against a 5-point difference quotient
    double max_above_indicator = 0.0;  // max of r(u) - 1_{[-lambda, lambda]}(u) on the grid
    bool ok = false;
};

MinorantReport selberg_minorant_checks(double lambda = 1.0, int grid = 10000);

void write_form_factor_csv(const FormFactorCurve& c, const std::string& path,
                           const std::string& provenance);

}  // namespace zerogap
