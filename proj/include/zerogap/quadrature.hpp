#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace zerogap {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Cached per n; safe to call concurrently after first use of a given n.
const GaussRule& gauss_legendre(int n);

// Sum in a fixed binary tree so the result does not depend on how work was split.
template <class T>
T pairwise_sum(std::span<const T> v) {
    if (v.empty()) return T{};
    if (v.size() <= 8) {
        T s{};
        for (const T& x : v) s += x;
        return s;
    }
    std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(std::span<const T>(v.data(), v.size()));
}

// Integrate f over [a, b] with a single n-point Gauss-Legendre panel.
template <class F>
auto gauss_panel(const F& f, double a, double b, int n = 10) {
    const GaussRule& g = gauss_legendre(n);
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    using R = decltype(f(a));
    R s{};
    for (int i = 0; i < n; ++i) s += g.weights[i] * f(c + h * g.nodes[i]);
    return s * h;
}

// Equal panels no longer than max_panel.
template <class F>
auto composite_gauss(const F& f, double a, double b, double max_panel, int n = 10) {
    using R = decltype(f(a));
    auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_panel));
    if (panels == 0) panels = 1;
    std::vector<R> parts(panels);
    double w = (b - a) / static_cast<double>(panels);
    for (std::size_t i = 0; i < panels; ++i)
        parts[i] = gauss_panel(f, a + w * static_cast<double>(i), a + w * static_cast<double>(i + 1), n);
    return pairwise_sum(parts);
}

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
    bool converged = true;
};

// Interval halving until the two-half estimate moves less than tol (absolute, shared
// across the interval in proportion to its length).
AdaptiveResult adaptive_gauss(const std::function<double(double)>& f, double a, double b,
                              double tol = 1e-10, int n = 10, int max_depth = 40);

}  // namespace zerogap
