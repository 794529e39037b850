#pragma once

#include <vector>

namespace zerogap {

// Constant term of the quadratic used inside the tail integral of the small-gap bracket.
// kSquare (1/(3m^2)) reproduces the published table; kCube (1/(3m^3)) is the literal
// lemma constant. kappa always uses the cube form.
enum class TailConstant { kSquare, kCube };

struct GapBoundResult {
    int m = 0;
    double kappa = 0.0;
    double lambda_star = 0.0;
    double bracket_at_root = 0.0;
    int iterations = 0;
};

struct LargeGapResult {
    double rho_star = 0.0;
    double bound = 0.0;
    // normalized so that the gap bound is sqrt(3 / (a rho^2 + b rho + c))
    double a = 0.0, b = 0.0, c = 0.0;
};

double kappa(int m);

// lambda - 1 + 2 lambda int_0^{1/m} h^(lambda a) a da
//   - 4 pi lambda^3 int_{kappa}^{1/lambda} sin(2 pi lambda a) P(a) da
double bracket(double lambda, int m, TailConstant tail = TailConstant::kSquare);

GapBoundResult small_gap_root(int m, double tol = 1e-8,
                              TailConstant tail = TailConstant::kSquare);

std::vector<GapBoundResult> gap_table(int m_max, double tol = 1e-8,
                                      TailConstant tail = TailConstant::kSquare);

LargeGapResult large_gap_bound(double c0 = 2.0, double c1 = -2.0, double c2 = 8.0 / 3.0);

}  // namespace zerogap
