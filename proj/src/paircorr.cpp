#include "zerogap/paircorr.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <limits>

#include "zerogap/errors.hpp"
#include "zerogap/parallel.hpp"
#include "zerogap/quadrature.hpp"
#include "zerogap/special_functions.hpp"

namespace zerogap {

double selberg_h_hat(double a) {
    double x = std::fabs(a);
    if (x >= 1.0) return 0.0;
    return std::max(1.0 - x + std::sin(2.0 * kPi * x) / (2.0 * kPi), 0.0);
}

double selberg_h_hat_d1(double a) {
    double x = std::fabs(a);
    if (x >= 1.0) return 0.0;
    double d = -1.0 + std::cos(2.0 * kPi * x);
    return a < 0.0 ? -d : d;
}

double selberg_h_hat_d2(double a) {
    double x = std::fabs(a);
    if (x >= 1.0) return 0.0;
    return -2.0 * kPi * std::sin(2.0 * kPi * x);
}

double selberg_h(double u) {
    double x = std::fabs(u);
    if (x < 1e-4) {
        // sinc^2(x) / (1 - x^2) near the origin
        double p2 = kPi * kPi * x * x;
        return (1.0 - p2 / 3.0 + 2.0 * p2 * p2 / 45.0) * (1.0 + x * x);
    }
    double d = x - 1.0;
    if (std::fabs(d) < 1e-4) {
        // sin(pi x) = -sin(pi d); the zero of 1 - x^2 cancels against sin^2
        if (d == 0.0) return 0.0;
        double s = std::sin(kPi * d);
        return -(s * s) / (kPi * kPi * x * x * d * (x + 1.0));
    }
    double s = std::sin(kPi * x) / (kPi * x);
    return s * s / (1.0 - x * x);
}

double fejer_r(double u, double xi) {
    double z = kPi * xi * u;
    if (std::fabs(z) < 1e-6) return 1.0 - z * z / 3.0;
    double s = std::sin(z) / z;
    return s * s;
}

double fejer_r_hat(double a, double xi) { return std::max(xi - std::fabs(a), 0.0) / (xi * xi); }

double pair_weight(double u) { return 4.0 / (4.0 + u * u); }

KernelPair fejer_pair(double xi) {
    if (!(xi > 0.0)) throw DomainError("fejer_pair: xi must be positive");
    KernelPair k;
    k.name = "fejer-" + std::to_string(xi);
    k.direct = [xi](double u) { return fejer_r(u, xi); };
    k.transform = [xi](double a) { return fejer_r_hat(a, xi); };
    k.support = xi;
    return k;
}

KernelPair selberg_minorant_pair(double lambda) {
    if (!(lambda > 0.0)) throw DomainError("selberg_minorant_pair: lambda must be positive");
    KernelPair k;
    k.name = lambda == 1.0 ? "selberg-minorant" : "dilated-" + std::to_string(lambda);
    k.direct = [lambda](double u) { return selberg_h(u / lambda); };
    k.transform = [lambda](double a) { return lambda * selberg_h_hat(lambda * a); };
    k.support = 1.0 / lambda;
    return k;
}

double numerical_fourier_transform(const std::function<double(double)>& r, double a, double U) {
    if (!(U > 0.0)) throw DomainError("numerical_fourier_transform: U must be positive");
    double k = 2.0 * kPi * std::fabs(a);
    // panels short against both the kernel's own oscillation (assumed <= 2 pi * 8) and cos(k u)
    double width = std::min(0.25, kPi / (k + 1.0));
    auto f = [&](double u) { return r(u) * std::cos(k * u); };
    double body = composite_gauss(f, 0.0, U, width, 10);
    // mean of u^2 r(u) cos(ku) on [U/2, U] gives the 1/U tail of non-oscillating parts
    auto g = [&](double u) { return u * u * f(u); };
    double mean = composite_gauss(g, 0.5 * U, U, width, 10) / (0.5 * U);
    return 2.0 * (body + mean / U);
}

namespace {

std::vector<double> support_breaks(const KernelPair& k) {
    std::vector<double> b{0.0};
    for (double x : k.kinks)
        if (x > 0.0 && x < k.support) b.push_back(x);
    b.push_back(k.support);
    std::sort(b.begin(), b.end());
    return b;
}

}  // namespace

double numerical_inverse_transform(const KernelPair& k, double u) {
    auto b = support_breaks(k);
    double w = 2.0 * kPi * std::fabs(u);
    double width = std::min(0.05, kPi / (w + 1.0));
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
        s += composite_gauss([&](double a) { return k.transform(a) * std::cos(w * a); }, b[i],
                             b[i + 1], width, 20);
    return 2.0 * s;
}

namespace {

struct PairTable {
    std::vector<double> d;  // gamma_j - gamma_i, i < j
    std::vector<double> w;
    double diag = 0.0;
    double dmax = 0.0;
};

PairTable make_pairs(const std::vector<double>& z) {
    PairTable p;
    std::size_t n = z.size();
    p.diag = static_cast<double>(n);
    p.d.reserve(n * (n - 1) / 2);
    p.w.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = z[j] - z[i];
            p.d.push_back(d);
            p.w.push_back(pair_weight(d));
            p.dmax = std::max(p.dmax, std::fabs(d));
        }
    return p;
}

// sum over ordered pairs of w cos(theta d), diagonal included
double pair_sum(const PairTable& p, double theta) {
    const std::size_t n = p.d.size();
    const std::size_t block = 4096;
    std::vector<double> parts((n + block - 1) / block);
    for (std::size_t b = 0; b < parts.size(); ++b) {
        double s = 0.0;
        std::size_t end = std::min(n, (b + 1) * block);
        for (std::size_t i = b * block; i < end; ++i) s += p.w[i] * std::cos(theta * p.d[i]);
        parts[b] = s;
    }
    return p.diag + 2.0 * pairwise_sum(parts);
}

double factored_sum(const std::vector<double>& z, double span, double theta) {
    auto s2 = [&](double phi) {
        double c = 0.0, s = 0.0;
        for (double g : z) {
            c += std::cos(phi * g);
            s += std::sin(phi * g);
        }
        return c * c + s * s;
    };
    // e^{-2x} below 1e-19 of the diagonal beyond x = 22
    const double xmax = 22.0;
    double width = std::min(0.5, kPi / (span + 1.0));
    auto f = [&](double x) { return std::exp(-2.0 * x) * (s2(theta + x) + s2(theta - x)); };
    return composite_gauss(f, 0.0, xmax, width, 16);
}

double ff_norm(double m, double T) { return m * T * std::log(T) / (2.0 * kPi); }

void check_inputs(const std::vector<double>& zeros, double m, double T) {
    if (zeros.empty()) throw DomainError("form factor: empty zero list");
    if (!(m > 0.0) || !(T > 1.0)) throw DomainError("form factor: need m > 0 and T > 1");
}

}  // namespace

FormFactorCurve form_factor(const std::vector<double>& zeros, double m, double T,
                            const std::vector<double>& alphas, std::size_t direct_limit) {
    check_inputs(zeros, m, T);
    FormFactorCurve c;
    c.alphas = alphas;
    c.T = T;
    c.m = m;
    c.zero_count = zeros.size();
    c.values.resize(alphas.size());
    double norm = ff_norm(m, T);
    double rate = m * std::log(T);
    c.factored = zeros.size() > direct_limit;
    if (!c.factored) {
        PairTable p = make_pairs(zeros);
        parallel_for(alphas.size(),
                     [&](std::size_t i) { c.values[i] = pair_sum(p, rate * alphas[i]) / norm; });
    } else {
        auto [lo, hi] = std::minmax_element(zeros.begin(), zeros.end());
        double span = *hi - *lo;
        parallel_for(alphas.size(), [&](std::size_t i) {
            c.values[i] = factored_sum(zeros, span, rate * alphas[i]) / norm;
        });
    }
    return c;
}

double form_factor_model(double a, double m, double T) {
    double x = std::fabs(a);
    if (x > 1.0) return 1.0;
    return x + m * std::pow(T, -2.0 * x * m) * std::log(T);
}

std::vector<ConvolutionSum> convolution_sums(const std::vector<double>& zeros,
                                             const std::vector<KernelPair>& ks, double m,
                                             double T) {
    check_inputs(zeros, m, T);
    PairTable p = make_pairs(zeros);
    double rate = m * std::log(T);
    double scale = rate / (2.0 * kPi);

    std::vector<ConvolutionSum> out(ks.size());
    for (std::size_t k = 0; k < ks.size(); ++k) {
        std::vector<double> parts(p.d.size());
        for (std::size_t i = 0; i < p.d.size(); ++i)
            parts[i] = ks[k].direct(p.d[i] * scale) * p.w[i];
        out[k].lhs = p.diag * ks[k].direct(0.0) + 2.0 * pairwise_sum(parts);
    }

    // shared breakpoints so F is evaluated once per node for every kernel
    std::vector<double> breaks{0.0};
    for (const auto& k : ks) {
        auto b = support_breaks(k);
        breaks.insert(breaks.end(), b.begin(), b.end());
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double x, double y) { return std::fabs(x - y) < 1e-14; }),
                 breaks.end());
    // half an oscillation of the fastest pair term per panel
    double width = kPi / (rate * p.dmax + 1.0);
    const int nodes = 16;
    const GaussRule& g = gauss_legendre(nodes);

    struct Panel {
        double a, b;
    };
    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        double a = breaks[i], b = breaks[i + 1];
        auto n = static_cast<std::size_t>(std::ceil((b - a) / width));
        n = std::max<std::size_t>(n, 1);
        double h = (b - a) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j)
            panels.push_back({a + h * static_cast<double>(j), a + h * static_cast<double>(j + 1)});
    }
    std::vector<double> F(panels.size() * nodes);
    parallel_for(panels.size(), [&](std::size_t i) {
        double c = 0.5 * (panels[i].a + panels[i].b), h = 0.5 * (panels[i].b - panels[i].a);
        for (int q = 0; q < nodes; ++q) F[i * nodes + q] = pair_sum(p, rate * (c + h * g.nodes[q]));
    });

    for (std::size_t k = 0; k < ks.size(); ++k) {
        std::vector<double> parts;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            if (panels[i].a >= ks[k].support - 1e-14) break;
            double c = 0.5 * (panels[i].a + panels[i].b), h = 0.5 * (panels[i].b - panels[i].a);
            double s = 0.0;
            for (int q = 0; q < nodes; ++q)
                s += g.weights[q] * ks[k].transform(c + h * g.nodes[q]) * F[i * nodes + q];
            parts.push_back(s * h);
        }
        // F carries the pair sum, the normalization (m T log T / 2 pi) cancels against F's
        out[k].rhs = 2.0 * pairwise_sum(parts);
        out[k].nodes = parts.size() * nodes;
    }
    return out;
}

ConvolutionSum convolution_sum(const std::vector<double>& zeros, const KernelPair& k, double m,
                               double T) {
    return convolution_sums(zeros, {k}, m, T).front();
}

double i_xi_bound(double xi, double m) {
    return 0.5 * xi * xi - 0.5 * xi * (1.0 + 1.0 / (m * m)) + 1.0 / (3.0 * m * m * m);
}

MinorantReport selberg_minorant_checks(double lambda, int grid) {
    MinorantReport r;
    r.h_hat_at_1 = selberg_h_hat(1.0);
    r.h_hat_d1_at_1 = selberg_h_hat_d1(1.0);
    const double h = 1e-3;
    for (int i = 1; i < 100; ++i) {
        double x = 0.01 * i;
        if (x - 2 * h <= 0.0 || x + 2 * h >= 1.0) continue;
        double fd = (-selberg_h_hat(x + 2 * h) + 16 * selberg_h_hat(x + h) - 30 * selberg_h_hat(x) +
                     16 * selberg_h_hat(x - h) - selberg_h_hat(x - 2 * h)) /
                    (12 * h * h);
        r.max_d2_error = std::max(r.max_d2_error, std::fabs(fd - selberg_h_hat_d2(x)));
    }
    r.max_above_indicator = -std::numeric_limits<double>::infinity();
    double umax = 4.0 * lambda;
    for (int i = 0; i <= grid; ++i) {
        double u = -umax + 2.0 * umax * i / grid;
        double ind = std::fabs(u) <= lambda ? 1.0 : 0.0;
        r.max_above_indicator = std::max(r.max_above_indicator, selberg_h(u / lambda) - ind);
    }
    r.ok = std::fabs(r.h_hat_at_1) < 1e-15 && std::fabs(r.h_hat_d1_at_1) < 1e-15 &&
           r.max_d2_error < 1e-8 && r.max_above_indicator <= 1e-15;
    return r;
}

void write_form_factor_csv(const FormFactorCurve& c, const std::string& path,
                           const std::string& provenance) {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot write " + path);
    out.imbue(std::locale::classic());
    out << "# " << provenance << "\n";
    out << "# T=" << std::setprecision(15) << c.T << " m=" << c.m << " zeros=" << c.zero_count
        << " path=" << (c.factored ? "factored" : "direct") << "\n";
    out << "# alpha,F\n";
    for (std::size_t i = 0; i < c.alphas.size(); ++i)
        out << std::setprecision(15) << c.alphas[i] << "," << c.values[i] << "\n";
}

}  // namespace zerogap
