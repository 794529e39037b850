#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace zerogap {

using cplx = std::complex<double>;
using int128 = __int128;

enum class CoefficientSource { kZeta, kDelta, kFile, kDerived };

const char* source_tag(CoefficientSource s);

// a(1..N) in the analytic normalization (critical line at 1/2).
struct CoefficientTable {
    std::string name;
    CoefficientSource source = CoefficientSource::kFile;
    int degree = 2;             // local Euler factor degree (1 for zeta)
    std::vector<cplx> values;   // values[n - 1] = a(n)
    std::vector<int128> tau;    // exact integers when source == kDelta

    std::size_t size() const { return values.size(); }
    cplx operator()(std::size_t n) const { return values[n - 1]; }
};

enum class EtaStrategy {
    kSquaring,     // (eta^3)^2 exactly, then two number-theoretic-transform squarings
                   // modulo three primes recombined by CRT
    kJacobiCube,   // q * (sum (-1)^k (2k+1) q^{k(k+1)/2})^8
    kPentagonal,   // q * (sum (-1)^k q^{k(3k-1)/2})^24
};

inline constexpr std::size_t kMaxDeltaTerms = 2'000'000;

CoefficientTable gen_zeta(std::size_t N);

// tau(n) exactly, then a(n) = tau(n) / n^{11/2}. Throws ResourceError above max_terms.
CoefficientTable gen_delta(std::size_t N, EtaStrategy strategy = EtaStrategy::kSquaring,
                           std::size_t max_terms = kMaxDeltaTerms);

// tau(1..N) only.
std::vector<int128> ramanujan_tau(std::size_t N, EtaStrategy strategy);

std::string to_string(int128 v);
int128 parse_int128(const std::string& s);

// Deligne: |a(n)| <= d(n). Returns the first violating n, or 0.
std::size_t deligne_violation(const CoefficientTable& tbl, std::size_t n_max);

// a(mn) = a(m) a(n) on `pairs` random coprime pairs; returns the worst deviation.
double multiplicativity_defect(const CoefficientTable& tbl, int pairs, unsigned seed = 12345);

CoefficientTable rankin_selberg_table(const CoefficientTable& tbl);

struct SatakeLocal {
    std::int64_t p = 0;
    cplx alpha, beta;
};

SatakeLocal satake(const CoefficientTable& tbl, std::int64_t p);

// b(n) and upsilon(n) = b(n) log n, indexed by n (entry 0 unused).
struct LogCoefficientTable {
    std::vector<cplx> b;
    std::vector<cplx> upsilon;
    std::size_t size() const { return b.empty() ? 0 : b.size() - 1; }
};

LogCoefficientTable log_coefficients(const CoefficientTable& tbl, std::size_t N);

// sum_{n <= x} |upsilon(n)|^2 / (x log x)
double hypothesis_s_ratio(const LogCoefficientTable& log_tbl, double x);

struct ResidueEstimate {
    double value = 0.0;
    double error = 0.0;
};

// Slope of S(x) = sum_{n<=x} |a(n)|^2 over integer samples in [X/2, X].
ResidueEstimate residue_estimate(const CoefficientTable& rs_tbl, double X, int samples = 64,
                                 int bootstrap = 200, unsigned seed = 2024);

struct SeriesValue {
    cplx value;
    double error = 0.0;
};

// Partial sum to the table length plus the smooth tail cf X^{1-s}/(s-1).
SeriesValue rankin_selberg_value(const CoefficientTable& rs_tbl, cplx s, double cf);

// Partial sums S(x) = sum_{n<=x} |a(n)|^2 for every x <= N (index x).
std::vector<double> square_partial_sums(const CoefficientTable& tbl);

std::vector<std::int64_t> primes_up_to(std::int64_t n);

// User file: one "n re im" row per n, contiguous from 1.
CoefficientTable load_coefficient_file(const std::string& path, const std::string& name,
                                       int degree = 2);

// Cache format with '#' header lines; tau is stored exactly when present.
void write_coefficient_cache(const CoefficientTable& tbl, const std::string& path);
CoefficientTable read_coefficient_cache(const std::string& path);

}  // namespace zerogap
