#pragma once

#include <complex>
#include <cstdint>

namespace zerogap {

using cplx = std::complex<double>;

// Principal branch of log Gamma, continuous on C minus (-inf, 0].
cplx log_gamma(cplx z);
double log_gamma(double x);

// Both regimes are exposed so they can be checked against each other.
cplx log_gamma_lanczos(cplx z);   // Re z >= 1/2
cplx log_gamma_stirling(cplx z);  // |z| >= 10, Re z >= 1/2

cplx digamma(cplx z);
cplx trigamma(cplx z);

// e^{-x^2} * int_0^x e^{u^2} du
double dawson(double x);

double erfc_complementary(double x);

// e^{-u}; kernel of the Mellin smoothing in the two-sum approximate functional equation.
double mellin_smoother(double u);

// Smallest n with mellin_smoother(n / X) < eps.
std::int64_t smoothing_cutoff(double X, double eps);

inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kPi = 3.14159265358979323846;

}  // namespace zerogap
