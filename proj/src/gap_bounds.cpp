#include "zerogap/gap_bounds.hpp"

#include <cmath>

#include "zerogap/errors.hpp"
#include "zerogap/paircorr.hpp"
#include "zerogap/quadrature.hpp"
#include "zerogap/special_functions.hpp"

namespace zerogap {

double kappa(int m) {
    if (m < 1) throw DomainError("kappa: degree must be >= 1");
    double md = m;
    double rad = 3.0 - 8.0 * md + 6.0 * md * md + 3.0 * md * md * md * md;
    return 0.5 * (1.0 + 1.0 / (md * md) + std::sqrt(rad) / (md * md * std::sqrt(3.0)));
}

double bracket(double lambda, int m, TailConstant tail) {
    if (m < 1) throw DomainError("bracket: degree must be >= 1");
    double k = kappa(m);
    if (!(lambda > 0.0) || lambda > 1.0 / k)
        throw DomainError("bracket: lambda must lie in (0, 1/kappa(m)]");
    double md = m;
    double c = tail == TailConstant::kSquare ? 1.0 / (3.0 * md * md) : 1.0 / (3.0 * md * md * md);
    auto head = adaptive_gauss([&](double a) { return selberg_h_hat(lambda * a) * a; }, 0.0,
                               1.0 / md, 1e-12);
    auto body = adaptive_gauss(
        [&](double a) {
            double p = 0.5 * a * a - 0.5 * a * (1.0 + 1.0 / (md * md)) + c;
            return std::sin(2.0 * kPi * lambda * a) * p;
        },
        k, 1.0 / lambda, 1e-12);
    return lambda - 1.0 + 2.0 * lambda * head.value -
           4.0 * kPi * lambda * lambda * lambda * body.value;
}

GapBoundResult small_gap_root(int m, double tol, TailConstant tail) {
    if (m < 1) throw DomainError("small_gap_root: degree must be >= 1");
    if (!(tol > 0.0)) throw DomainError("small_gap_root: tol must be positive");
    GapBoundResult r;
    r.m = m;
    r.kappa = kappa(m);
    double hi_end = 1.0 / r.kappa;
    const int grid = 400;
    double lo = 0.01, flo = bracket(lo, m, tail);
    bool found = false;
    double hi = lo;
    for (int i = 1; i <= grid; ++i) {
        double x = i == grid ? hi_end : 0.01 + (hi_end - 0.01) * i / grid;
        double fx = bracket(x, m, tail);
        if ((flo < 0.0) != (fx < 0.0)) {
            hi = x;
            found = true;
            break;
        }
        lo = x;
        flo = fx;
    }
    if (!found) throw VerificationError("small_gap_root: bracket has no sign change");
    int it = 0;
    while (hi - lo > tol && it < 200) {
        double mid = 0.5 * (lo + hi);
        double fm = bracket(mid, m, tail);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        ++it;
    }
    r.lambda_star = 0.5 * (lo + hi);
    r.bracket_at_root = bracket(r.lambda_star, m, tail);
    r.iterations = it;
    return r;
}

std::vector<GapBoundResult> gap_table(int m_max, double tol, TailConstant tail) {
    if (m_max < 1) throw DomainError("gap_table: m_max must be >= 1");
    std::vector<GapBoundResult> out;
    for (int m = 1; m <= m_max; ++m) out.push_back(small_gap_root(m, tol, tail));
    return out;
}

LargeGapResult large_gap_bound(double c0, double c1, double c2) {
    if (!(c0 > 0.0)) throw DomainError("large_gap_bound: c0 must be positive");
    LargeGapResult r;
    r.rho_star = -c1 / c0;
    double denom = c2 + 2.0 * r.rho_star * c1 + r.rho_star * r.rho_star * c0;
    if (!(denom > 0.0)) throw DomainError("large_gap_bound: non-positive denominator");
    r.bound = std::sqrt(c0 / denom);
    r.a = 3.0;
    r.b = 6.0 * c1 / c0;
    r.c = 3.0 * c2 / c0;
    return r;
}

}  // namespace zerogap
