#include <doctest.h>

#include <cmath>
#include <vector>

#include "zerogap/parallel.hpp"
#include "zerogap/quadrature.hpp"
#include "zerogap/special_functions.hpp"

using namespace zerogap;

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
    for (int n : {2, 5, 10, 16}) {
        const GaussRule& g = gauss_legendre(n);
        double wsum = 0.0;
        for (double w : g.weights) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        // x^(2n-2) integrates to 2 / (2n-1)
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], 2 * n - 2);
        CHECK(s == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
    }
}

TEST_CASE("composite and adaptive rules") {
    double v = composite_gauss([](double x) { return std::cos(x); }, 0.0, 10.0, 0.5);
    CHECK(v == doctest::Approx(std::sin(10.0)).epsilon(1e-13));
    auto r = adaptive_gauss([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12);
    CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
    CHECK(r.error < 1e-10);
    auto p = adaptive_gauss([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, 1e-10);
    CHECK(p.converged);
    CHECK(p.value == doctest::Approx(2.0 * std::atan(100.0) / 1e-2).epsilon(1e-12));
    // a kink inside the interval forces refinement but must terminate quickly
    auto k = adaptive_gauss([](double x) { return std::fabs(x - 0.3); }, 0.0, 1.0, 1e-12);
    CHECK(k.value == doctest::Approx(0.5 * 0.09 + 0.5 * 0.49).epsilon(1e-11));
    CHECK(k.panels < 2000);
}

TEST_CASE("pairwise sum is independent of the worker count") {
    std::vector<double> parts(1000);
    auto fill = [&] {
        parallel_for(parts.size(), [&](std::size_t i) { parts[i] = 1.0 / (1.0 + static_cast<double>(i)); });
        return pairwise_sum(parts);
    };
    set_worker_count(1);
    double a = fill();
    set_worker_count(4);
    double b = fill();
    set_worker_count(0);
    CHECK(a == b);
}

TEST_CASE("parallel_for rethrows") {
    set_worker_count(3);
    CHECK_THROWS(parallel_for(10, [](std::size_t i) {
        if (i == 7) throw std::runtime_error("boom");
    }));
    set_worker_count(0);
}
