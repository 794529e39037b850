#pragma once

#include <functional>
#include <string>
#include <vector>

#include "zerogap/afe.hpp"
#include "zerogap/lfunc.hpp"

namespace zerogap {

struct ZeroList {
    std::vector<double> ordinates;  // strictly increasing, 15 significant digits
    double refine_tol = 1e-9;
    double scan_step = 0.0;
    std::string spec_name;
    double t_min = 0.0, t_max = 0.0;
    std::vector<std::string> warnings;
};

struct ScanOptions {
    double refine_tol = 1e-9;
    double step = 0.0;         // 0: pi / (8 log(sqrt(q) t_max))
    bool newton_polish = true;
    int windows = 0;           // sub-windows scanned independently; 0: one per worker
    EvaluationOptions eval;
};

double default_scan_step(const LFunctionSpec& spec, double t_max);

// Sign changes of the rotated function on a grid, bisected to refine_tol and polished by
// one Newton step when it stays inside the bracket. Zeros of even order are not seen.
ZeroList scan_zeros(const LFunctionSpec& spec, double t_min, double t_max, ScanOptions opts = {});
// Same, reusing a context whose window covers [t_min, t_max].
ZeroList scan_zeros(const EvaluationContext& ctx, double t_min, double t_max, ScanOptions opts = {});

// Which local spacing the gaps are divided by.
//  kDensity: pi / log(sqrt(q) g / 2 pi) for degree 2 (2 pi / log(g / 2 pi) for degree 1),
//            the reciprocal of the derivative of the zero-counting main term.
//  kLiteral: pi / log(sqrt(q) g) for degree 2 (2 pi / log g for degree 1).
enum class GapNormalization { kDensity, kLiteral };

struct GapStatistics {
    std::vector<double> normalized_gaps;
    double max_gap = 0.0;
    double min_gap = 0.0;
    double lambda_hat = 0.0;
    double mu_hat = 0.0;
    double mean_gap = 0.0;
    GapNormalization normalization = GapNormalization::kDensity;
    bool control = false;  // degree-1 spec, normalized with the degree-1 spacing
};

double local_spacing(const LFunctionSpec& spec, double gamma, GapNormalization norm);

GapStatistics gap_statistics(const ZeroList& zl, const LFunctionSpec& spec,
                             GapNormalization norm = GapNormalization::kDensity);
// Only gaps whose left zero lies in [lo, hi].
GapStatistics gap_statistics(const ZeroList& zl, const LFunctionSpec& spec, double lo, double hi,
                             GapNormalization norm = GapNormalization::kDensity);

struct WirtingerInterval {
    double a = 0.0, b = 0.0;
    double lhs = 0.0;  // int_a^b |g|^2
    double rhs = 0.0;  // ((b - a) / pi)^2 int_a^b |g'|^2
    bool converged = true;
};

// g(t) = exp(i rho t log T) L(1/2 + it) on each pair of consecutive zeros inside [lo, hi].
// Samples of L and L' are shared across all rho.
std::vector<std::vector<WirtingerInterval>> wirtinger_check(const EvaluationContext& ctx,
                                                            const ZeroList& zl,
                                                            const std::vector<double>& rhos,
                                                            double T, double lo, double hi);

// Wirtinger's inequality for a synthetic y vanishing at a and b (y' supplied).
WirtingerInterval wirtinger_interval(const std::function<double(double)>& y,
                                     const std::function<double(double)>& dy, double a, double b);

struct CountComparison {
    long count = 0;
    double main = 0.0;
};

CountComparison count_vs_main_term(const ZeroList& zl, const LFunctionSpec& spec, double T);

// '#' header lines then one ordinate per line at 15 significant digits.
void write_zero_cache(const ZeroList& zl, const std::string& path, const std::string& hash = "");
ZeroList read_zero_cache(const std::string& path, std::string* hash = nullptr);
// Adds ordinates above the cached t_max (single writer).
void append_zero_cache(const ZeroList& extra, const std::string& path);

}  // namespace zerogap
