#include "zerogap/quadrature.hpp"

#include <limits>
#include <map>
#include <mutex>

#include "zerogap/special_functions.hpp"

namespace zerogap {

namespace {

GaussRule build_rule(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

void adaptive_step(const std::function<double(double)>& f, double a, double b, double whole,
                   double tol, int n, int depth, int max_depth, AdaptiveResult& out) {
    double m = 0.5 * (a + b);
    double left = gauss_panel(f, a, m, n);
    double right = gauss_panel(f, m, b, n);
    double diff = std::fabs(left + right - whole);
    // below a few ulps of the panel mass the halving only chases rounding noise
    double floor = 64.0 * std::numeric_limits<double>::epsilon() * (std::fabs(left) + std::fabs(right));
    if (diff < tol || diff <= floor || depth >= max_depth) {
        if (diff >= tol) out.converged = false;
        out.value += left + right;
        out.error += diff;
        out.panels += 2;
        return;
    }
    adaptive_step(f, a, m, left, 0.5 * tol, n, depth + 1, max_depth, out);
    adaptive_step(f, m, b, right, 0.5 * tol, n, depth + 1, max_depth, out);
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

AdaptiveResult adaptive_gauss(const std::function<double(double)>& f, double a, double b,
                              double tol, int n, int max_depth) {
    AdaptiveResult out;
    if (a == b) return out;
    double whole = gauss_panel(f, a, b, n);
    adaptive_step(f, a, b, whole, tol, n, 0, max_depth, out);
    return out;
}

}  // namespace zerogap
