#include "zerogap/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "zerogap/errors.hpp"

namespace zerogap {

namespace {

const double kHalfLog2Pi = 0.91893853320467274178;

bool is_pole(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real();
}

// B_{2k} / (2k (2k-1)), k = 1..10
const std::array<double, 10> kStirling = {
    1.0 / 12.0,           -1.0 / 360.0,           1.0 / 1260.0,
    -1.0 / 1680.0,        1.0 / 1188.0,           -691.0 / 360360.0,
    1.0 / 156.0,          -3617.0 / 122400.0,     43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

// B_{2k} / (2k), k = 1..10
const std::array<double, 10> kDigammaTail = {
    1.0 / 12.0,      -1.0 / 120.0,       1.0 / 252.0,        -1.0 / 240.0,
    1.0 / 132.0,     -691.0 / 32760.0,   1.0 / 12.0,         -3617.0 / 8160.0,
    43867.0 / 14364.0, -174611.0 / 6600.0,
};

// g = 7, n = 9
const std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
};

// Upper half plane only; the lower half follows by conjugation.
cplx log_gamma_upper(cplx z) {
    cplx shift = 0.0;
    if (z.real() < 0.5) {
        int n = static_cast<int>(std::ceil(0.5 - z.real()));
        for (int k = 0; k < n; ++k) shift += std::log(z + static_cast<double>(k));
        z += static_cast<double>(n);
    }
    cplx v = std::abs(z) < 10.0 ? log_gamma_lanczos(z) : log_gamma_stirling(z);
    return v - shift;
}

}  // namespace

cplx log_gamma_lanczos(cplx z) {
    z -= 1.0;
    cplx a = kLanczos[0];
    for (int k = 1; k < 9; ++k) a += kLanczos[k] / (z + static_cast<double>(k));
    cplx t = z + 7.5;
    return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(a);
}

cplx log_gamma_stirling(cplx z) {
    cplx inv = 1.0 / z;
    cplx inv2 = inv * inv;
    cplx tail = 0.0;
    cplx p = inv;
    for (double c : kStirling) {
        tail += c * p;
        p *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + tail;
}

cplx log_gamma(cplx z) {
    if (is_pole(z)) throw PoleError("log_gamma: pole at non-positive integer");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("log_gamma: non-finite argument");
    if (z.imag() < 0.0) return std::conj(log_gamma_upper(std::conj(z)));
    return log_gamma_upper(z);
}

double log_gamma(double x) {
    if (x > 0.0) return std::lgamma(x);
    return log_gamma(cplx(x, 0.0)).real();
}

cplx digamma(cplx z) {
    if (is_pole(z)) throw PoleError("digamma: pole at non-positive integer");
    cplx acc = 0.0;
    while (z.real() < 10.0) {
        acc -= 1.0 / z;
        z += 1.0;
    }
    cplx inv2 = 1.0 / (z * z);
    cplx p = inv2;
    cplx tail = 0.0;
    for (double c : kDigammaTail) {
        tail += c * p;
        p *= inv2;
    }
    return acc + std::log(z) - 0.5 / z - tail;
}

cplx trigamma(cplx z) {
    if (is_pole(z)) throw PoleError("trigamma: pole at non-positive integer");
    cplx acc = 0.0;
    while (z.real() < 10.0) {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    // psi'(z) ~ 1/z + 1/(2z^2) + sum B_{2k} / z^{2k+1}
    static const std::array<double, 8> b = {
        1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
        5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0,
    };
    cplx inv = 1.0 / z;
    cplx inv2 = inv * inv;
    cplx p = inv2 * inv;
    cplx tail = inv + 0.5 * inv2;
    for (double c : b) {
        tail += c * p;
        p *= inv2;
    }
    return acc + tail;
}

double dawson(double x) {
    if (!std::isfinite(x)) {
        if (std::isnan(x)) return x;
        return 0.0;
    }
    double ax = std::fabs(x);
    double sign = x < 0.0 ? -1.0 : 1.0;
    if (ax <= 4.0) {
        // e^{-x^2} sum x^{2n+1} / (n! (2n+1)); all terms positive
        double x2 = ax * ax;
        double term = ax;  // x^{2n+1}/n!
        double sum = ax;
        for (int n = 1; n < 200; ++n) {
            term *= x2 / n;
            double add = term / (2 * n + 1);
            sum += add;
            if (add < 1e-17 * sum) break;
        }
        return sign * std::exp(-x2) * sum;
    }
    if (ax > 50.0) {
        double inv2 = 1.0 / (2.0 * ax * ax);
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 12; ++k) {
            term *= (2 * k - 1) * inv2;
            sum += term;
        }
        return sign * sum / (2.0 * ax);
    }
    // x / (1 + 2x^2/(3 - 4x^2/(5 + 6x^2/(7 - ...))))
    double x2 = ax * ax;
    int depth = static_cast<int>(20.0 * ax) + 40;
    double v = 2.0 * depth + 1.0;
    for (int k = depth; k >= 1; --k) {
        double num = 2.0 * k * x2 * ((k % 2 == 1) ? 1.0 : -1.0);
        v = (2.0 * k - 1.0) + num / v;
    }
    return sign * ax / v;
}

double erfc_complementary(double x) { return std::erfc(x); }

double mellin_smoother(double u) {
    if (!(u > 0.0)) throw DomainError("mellin_smoother: requires u > 0");
    return std::exp(-u);
}

std::int64_t smoothing_cutoff(double X, double eps) {
    if (!(X > 0.0) || !(eps > 0.0) || eps >= 1.0)
        throw DomainError("smoothing_cutoff: requires X > 0 and 0 < eps < 1");
    double bound = X * std::log(1.0 / eps);
    auto n = static_cast<std::int64_t>(std::floor(bound)) + 1;
    // guard the rounding of the product at the boundary
    while (n > 1 && std::exp(-static_cast<double>(n - 1) / X) < eps) --n;
    while (std::exp(-static_cast<double>(n) / X) >= eps) ++n;
    return n;
}

}  // namespace zerogap
