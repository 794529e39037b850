#include "zerogap/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "zerogap/errors.hpp"

namespace zerogap {

namespace {

struct SparseTerm {
    std::size_t exponent;
    std::int64_t coeff;
};

std::vector<SparseTerm> jacobi_cube(std::size_t N) {
    std::vector<SparseTerm> out;
    for (std::int64_t k = 0;; ++k) {
        auto e = static_cast<std::size_t>(k * (k + 1) / 2);
        if (e > N) break;
        out.push_back({e, (k % 2 == 0 ? 1 : -1) * (2 * k + 1)});
    }
    return out;
}

std::vector<SparseTerm> pentagonal(std::size_t N) {
    std::vector<SparseTerm> out{{0, 1}};
    for (std::int64_t k = 1;; ++k) {
        auto e1 = static_cast<std::size_t>(k * (3 * k - 1) / 2);
        auto e2 = static_cast<std::size_t>(k * (3 * k + 1) / 2);
        if (e1 > N) break;
        std::int64_t s = (k % 2 == 0) ? 1 : -1;
        out.push_back({e1, s});
        if (e2 <= N) out.push_back({e2, s});
    }
    std::sort(out.begin(), out.end(),
              [](const SparseTerm& a, const SparseTerm& b) { return a.exponent < b.exponent; });
    return out;
}

// c <- c * sparse, truncated at degree N-1 (c has N entries).
void multiply_sparse(std::vector<int128>& c, const std::vector<SparseTerm>& sparse) {
    const std::size_t N = c.size();
    for (std::size_t n = N; n-- > 0;) {
        int128 acc = 0;
        for (const SparseTerm& t : sparse) {
            if (t.exponent > n) break;
            int128 prod;
            if (__builtin_mul_overflow(c[n - t.exponent], static_cast<int128>(t.coeff), &prod) ||
                __builtin_add_overflow(acc, prod, &acc))
                throw ResourceError("eta product: 128-bit overflow");
        }
        c[n] = acc;
    }
}


using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Montgomery arithmetic modulo an odd p < 2^62.
struct Montgomery {
    u64 p, pinv, r2;
    explicit Montgomery(u64 mod) : p(mod) {
        u64 inv = 1;
        for (int i = 0; i < 6; ++i) inv *= 2 - p * inv;
        pinv = ~inv + 1;  // -p^{-1} mod 2^64
        u64 r = static_cast<u64>((static_cast<u128>(1) << 64) % p);
        r2 = static_cast<u64>(static_cast<u128>(r) * r % p);
    }
    u64 mul(u64 a, u64 b) const {
        u128 t = static_cast<u128>(a) * b;
        u64 m = static_cast<u64>(t) * pinv;
        u64 u = static_cast<u64>((t + static_cast<u128>(m) * p) >> 64);
        return u >= p ? u - p : u;
    }
    u64 to(u64 a) const { return mul(a % p, r2); }
    u64 from(u64 a) const { return mul(a, 1); }
    u64 pow(u64 a, u64 e) const {  // a in Montgomery form
        u64 r = to(1);
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
};

struct NttPrime {
    u64 p;
    u64 root;
};

// p - 1 divisible by 2^27 or more, so transforms up to 2^27 points are available
const NttPrime kNttPrimes[3] = {
    {4611685944339202049ULL, 3},
    {4611685989973229569ULL, 7},
    {4611685984336084993ULL, 15},
};

void ntt(std::vector<u64>& a, bool invert, const Montgomery& m, u64 root) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    u64 g = m.to(root);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        u64 w = m.pow(g, (m.p - 1) / len);
        if (invert) w = m.pow(w, m.p - 2);
        std::vector<u64> tw(len / 2);
        tw[0] = m.to(1);
        for (std::size_t k = 1; k < len / 2; ++k) tw[k] = m.mul(tw[k - 1], w);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                u64 u = a[i + k];
                u64 v = m.mul(a[i + k + len / 2], tw[k]);
                u64 s = u + v;
                a[i + k] = s >= m.p ? s - m.p : s;
                a[i + k + len / 2] = u >= v ? u - v : u + m.p - v;
            }
        }
    }
    if (invert) {
        u64 inv_n = m.pow(m.to(n % m.p), m.p - 2);
        for (auto& x : a) x = m.mul(x, inv_n);
    }
}

// Square a series (Montgomery residues, length N) modulo x^N.
void square_truncated(std::vector<u64>& c, std::size_t N, const Montgomery& m, u64 root) {
    std::size_t size = 1;
    while (size < 2 * N) size <<= 1;
    c.resize(size, 0);
    std::fill(c.begin() + static_cast<std::ptrdiff_t>(N), c.end(), 0);
    ntt(c, false, m, root);
    for (auto& x : c) x = m.mul(x, x);
    ntt(c, true, m, root);
    c.resize(N);
}

std::vector<int128> tau_by_squaring(std::size_t N) {
    // E^2 exactly, E = prod (1 - q^j)^3 in Jacobi's sparse form
    auto E = jacobi_cube(N);
    std::vector<std::int64_t> e2(N, 0);
    for (const auto& a : E)
        for (const auto& b : E) {
            if (a.exponent + b.exponent >= N) break;
            e2[a.exponent + b.exponent] += a.coeff * b.coeff;
        }
    std::vector<std::vector<u64>> residues;
    for (const NttPrime& pr : kNttPrimes) {
        Montgomery m(pr.p);
        std::vector<u64> c(N);
        for (std::size_t i = 0; i < N; ++i) {
            std::int64_t v = e2[i] % static_cast<std::int64_t>(pr.p);
            if (v < 0) v += static_cast<std::int64_t>(pr.p);
            c[i] = m.to(static_cast<u64>(v));
        }
        square_truncated(c, N, m, pr.root);  // E^4
        square_truncated(c, N, m, pr.root);  // E^8
        for (auto& x : c) x = m.from(x);
        residues.push_back(std::move(c));
    }
    // Garner: x = a1 + a2 p1 + a3 p1 p2, then reduce to the signed value modulo 2^128
    const u64 p1 = kNttPrimes[0].p, p2 = kNttPrimes[1].p, p3 = kNttPrimes[2].p;
    auto mulmod = [](u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); };
    auto powmod = [&](u64 a, u64 e, u64 p) {
        u64 r = 1;
        a %= p;
        while (e) {
            if (e & 1) r = mulmod(r, a, p);
            a = mulmod(a, a, p);
            e >>= 1;
        }
        return r;
    };
    const u64 inv_p1_mod_p2 = powmod(p1 % p2, p2 - 2, p2);
    const u64 inv_p1p2_mod_p3 = powmod(mulmod(p1 % p3, p2 % p3, p3), p3 - 2, p3);
    const u128 p1p2 = static_cast<u128>(p1) * p2;
    const u128 P_wrapped = p1p2 * p3;  // P mod 2^128
    std::vector<int128> out(N);
    for (std::size_t i = 0; i < N; ++i) {
        u64 r1 = residues[0][i], r2 = residues[1][i], r3 = residues[2][i];
        u64 a1 = r1;
        u64 a2 = mulmod((r2 + p2 - r1 % p2) % p2, inv_p1_mod_p2, p2);
        u64 partial = static_cast<u64>((static_cast<u128>(a1) + static_cast<u128>(a2) * p1) % p3);
        u64 a3 = mulmod((r3 + p3 - partial) % p3, inv_p1p2_mod_p3, p3);
        u128 x = static_cast<u128>(a1) + static_cast<u128>(a2) * p1 + static_cast<u128>(a3) * p1p2;
        if (a3 > p3 / 2) x -= P_wrapped;
        out[i] = static_cast<int128>(x);
    }
    return out;
}

double pow_half_weight(std::size_t n) {
    // n^{11/2}
    double x = static_cast<double>(n);
    return std::pow(x, 5.5);
}

double to_double(int128 v) { return static_cast<double>(v); }

}  // namespace

const char* source_tag(CoefficientSource s) {
    switch (s) {
        case CoefficientSource::kZeta: return "builtin-zeta";
        case CoefficientSource::kDelta: return "builtin-delta";
        case CoefficientSource::kFile: return "file";
        case CoefficientSource::kDerived: return "derived";
    }
    return "file";
}

std::string to_string(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    // work with negative values so the minimum is representable
    std::string s;
    int128 x = neg ? v : -v;
    while (x != 0) {
        int digit = -static_cast<int>(x % 10);
        s.push_back(static_cast<char>('0' + digit));
        x /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

int128 parse_int128(const std::string& s) {
    if (s.empty()) throw CacheError("parse_int128: empty field");
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw CacheError("parse_int128: no digits");
    int128 v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw CacheError("parse_int128: bad digit in '" + s + "'");
        if (__builtin_mul_overflow(v, static_cast<int128>(10), &v) ||
            __builtin_sub_overflow(v, static_cast<int128>(s[i] - '0'), &v))
            throw CacheError("parse_int128: overflow");
    }
    if (!neg) {
        if (__builtin_mul_overflow(v, static_cast<int128>(-1), &v))
            throw CacheError("parse_int128: overflow");
    }
    return v;
}

CoefficientTable gen_zeta(std::size_t N) {
    if (N < 1) throw DomainError("gen_zeta: N must be >= 1");
    CoefficientTable t;
    t.name = "zeta";
    t.source = CoefficientSource::kZeta;
    t.degree = 1;
    t.values.assign(N, cplx(1.0, 0.0));
    return t;
}

std::vector<int128> ramanujan_tau(std::size_t N, EtaStrategy strategy) {
    // coefficients of prod (1 - q^j)^24 up to q^{N-1}; tau(n) is the q^{n-1} entry
    std::vector<int128> c(N, 0);
    c[0] = 1;
    if (strategy == EtaStrategy::kSquaring) return tau_by_squaring(N);
    if (strategy == EtaStrategy::kJacobiCube) {
        auto sparse = jacobi_cube(N);
        for (int k = 0; k < 8; ++k) multiply_sparse(c, sparse);
    } else {
        auto sparse = pentagonal(N);
        for (int k = 0; k < 24; ++k) multiply_sparse(c, sparse);
    }
    return c;
}

CoefficientTable gen_delta(std::size_t N, EtaStrategy strategy, std::size_t max_terms) {
    if (N < 1) throw DomainError("gen_delta: N must be >= 1");
    if (N > max_terms)
        throw ResourceError(fmt::format("gen_delta: N = {} exceeds the configured maximum {}", N,
                                        max_terms));
    CoefficientTable t;
    t.name = "delta";
    t.source = CoefficientSource::kDelta;
    t.degree = 2;
    t.tau = ramanujan_tau(N, strategy);
    t.values.resize(N);
    for (std::size_t n = 1; n <= N; ++n) t.values[n - 1] = to_double(t.tau[n - 1]) / pow_half_weight(n);
    if (std::size_t bad = deligne_violation(t, std::min<std::size_t>(N, 10000)))
        throw VerificationError(fmt::format("gen_delta: Deligne bound fails at n = {}", bad));
    return t;
}

std::size_t deligne_violation(const CoefficientTable& tbl, std::size_t n_max) {
    n_max = std::min(n_max, tbl.size());
    std::vector<int> d(n_max + 1, 0);
    for (std::size_t i = 1; i <= n_max; ++i)
        for (std::size_t j = i; j <= n_max; j += i) ++d[j];
    for (std::size_t n = 1; n <= n_max; ++n)
        if (std::abs(tbl(n)) > d[n] * (1.0 + 1e-12)) return n;
    return 0;
}

double multiplicativity_defect(const CoefficientTable& tbl, int pairs, unsigned seed) {
    std::mt19937_64 rng(seed);
    auto N = static_cast<std::int64_t>(tbl.size());
    std::int64_t lim = static_cast<std::int64_t>(std::sqrt(static_cast<double>(N)));
    if (lim < 2) return 0.0;
    std::uniform_int_distribution<std::int64_t> pick(2, lim);
    double worst = 0.0;
    int done = 0;
    while (done < pairs) {
        std::int64_t m = pick(rng), n = pick(rng);
        if (std::gcd(m, n) != 1 || m * n > N) continue;
        cplx lhs = tbl(static_cast<std::size_t>(m * n));
        cplx rhs = tbl(static_cast<std::size_t>(m)) * tbl(static_cast<std::size_t>(n));
        worst = std::max(worst, std::abs(lhs - rhs));
        ++done;
    }
    return worst;
}

CoefficientTable rankin_selberg_table(const CoefficientTable& tbl) {
    CoefficientTable out;
    out.name = tbl.name + "-rs";
    out.source = CoefficientSource::kDerived;
    out.degree = tbl.degree * tbl.degree;
    out.values.resize(tbl.size());
    for (std::size_t i = 0; i < tbl.size(); ++i) out.values[i] = std::norm(tbl.values[i]);
    return out;
}

SatakeLocal satake(const CoefficientTable& tbl, std::int64_t p) {
    if (p < 2 || static_cast<std::size_t>(p) > tbl.size())
        throw DomainError("satake: p outside the table");
    cplx a = tbl(static_cast<std::size_t>(p));
    cplx disc = std::sqrt(a * a - 4.0);
    SatakeLocal s;
    s.p = p;
    s.alpha = 0.5 * (a + disc);
    s.beta = 0.5 * (a - disc);
    return s;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
    std::vector<std::int64_t> out;
    if (n < 2) return out;
    std::vector<bool> comp(static_cast<std::size_t>(n) + 1, false);
    for (std::int64_t i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (std::int64_t j = i * i; j <= n; j += i) comp[j] = true;
    }
    return out;
}

LogCoefficientTable log_coefficients(const CoefficientTable& tbl, std::size_t N) {
    if (N > tbl.size()) throw DomainError("log_coefficients: N exceeds the table");
    LogCoefficientTable out;
    out.b.assign(N + 1, cplx(0.0));
    out.upsilon.assign(N + 1, cplx(0.0));
    for (std::int64_t p : primes_up_to(static_cast<std::int64_t>(N))) {
        cplx alpha, beta;
        if (tbl.degree == 1) {
            alpha = tbl(static_cast<std::size_t>(p));
            beta = 0.0;
        } else {
            SatakeLocal s = satake(tbl, p);
            alpha = s.alpha;
            beta = s.beta;
        }
        cplx pa = 1.0, pb = 1.0;
        std::size_t pl = 1;
        for (int l = 1;; ++l) {
            if (pl > N / static_cast<std::size_t>(p)) break;
            pl *= static_cast<std::size_t>(p);
            pa *= alpha;
            pb *= beta;
            cplx b = (tbl.degree == 1 ? pa : pa + pb) / static_cast<double>(l);
            out.b[pl] = b;
            out.upsilon[pl] = b * std::log(static_cast<double>(pl));
        }
    }
    return out;
}

double hypothesis_s_ratio(const LogCoefficientTable& log_tbl, double x) {
    if (x < 2.0) throw DomainError("hypothesis_s_ratio: x must be >= 2");
    auto n_max = static_cast<std::size_t>(std::floor(x));
    if (n_max > log_tbl.size()) throw DomainError("hypothesis_s_ratio: x exceeds the table");
    double s = 0.0;
    for (std::size_t n = 2; n <= n_max; ++n) s += std::norm(log_tbl.upsilon[n]);
    return s / (x * std::log(x));
}

std::vector<double> square_partial_sums(const CoefficientTable& tbl) {
    std::vector<double> S(tbl.size() + 1, 0.0);
    for (std::size_t n = 1; n <= tbl.size(); ++n) S[n] = S[n - 1] + std::norm(tbl(n));
    return S;
}

namespace {

double ls_slope(const std::vector<double>& x, const std::vector<double>& y,
                const std::vector<std::size_t>& idx) {
    double mx = 0, my = 0;
    for (std::size_t i : idx) {
        mx += x[i];
        my += y[i];
    }
    mx /= idx.size();
    my /= idx.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i : idx) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace

ResidueEstimate residue_estimate(const CoefficientTable& rs_tbl, double X, int samples,
                                 int bootstrap, unsigned seed) {
    if (X > static_cast<double>(rs_tbl.size()) || X < 4.0)
        throw DomainError("residue_estimate: X must lie in [4, N]");
    if (samples < 3) throw DomainError("residue_estimate: need at least 3 samples");
    // rs_tbl holds |a(n)|^2 already
    std::vector<double> S(rs_tbl.size() + 1, 0.0);
    for (std::size_t n = 1; n <= rs_tbl.size(); ++n) S[n] = S[n - 1] + rs_tbl(n).real();
    std::vector<double> xs, ys;
    for (int i = 0; i < samples; ++i) {
        double x = 0.5 * X + 0.5 * X * i / (samples - 1);
        auto xi = static_cast<std::size_t>(std::llround(x));
        xi = std::min(xi, rs_tbl.size());
        xs.push_back(static_cast<double>(xi));
        ys.push_back(S[xi]);
    }
    std::vector<std::size_t> all(xs.size());
    std::iota(all.begin(), all.end(), 0);
    ResidueEstimate r;
    r.value = ls_slope(xs, ys, all);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
    double m1 = 0, m2 = 0;
    for (int b = 0; b < bootstrap; ++b) {
        std::vector<std::size_t> idx(xs.size());
        for (auto& i : idx) i = pick(rng);
        double sl = ls_slope(xs, ys, idx);
        m1 += sl;
        m2 += sl * sl;
    }
    if (bootstrap > 1) {
        m1 /= bootstrap;
        r.error = std::sqrt(std::max(0.0, m2 / bootstrap - m1 * m1));
    }
    return r;
}

SeriesValue rankin_selberg_value(const CoefficientTable& rs_tbl, cplx s, double cf) {
    if (s == cplx(1.0, 0.0)) throw DomainError("rankin_selberg_value: pole at s = 1");
    if (s.real() <= 0.5) throw DomainError("rankin_selberg_value: requires Re s > 1/2");
    const std::size_t N = rs_tbl.size();
    cplx sum = 0.0;
    double S = 0.0;
    for (std::size_t n = N; n >= 1; --n) {
        double v = rs_tbl(n).real();
        S += v;
        sum += v * std::exp(-s * std::log(static_cast<double>(n)));
    }
    double X = static_cast<double>(N);
    cplx tail = cf * std::exp((1.0 - s) * std::log(X)) / (s - 1.0);
    SeriesValue out;
    out.value = sum + tail;
    out.error = (std::fabs(S - cf * X) + 1.0) * std::pow(X, -s.real());
    return out;
}

CoefficientTable load_coefficient_file(const std::string& path, const std::string& name,
                                       int degree) {
    std::ifstream in(path);
    if (!in) throw CacheError("cannot open coefficient file " + path);
    CoefficientTable t;
    t.name = name;
    t.source = CoefficientSource::kFile;
    t.degree = degree;
    std::string line;
    std::size_t expect = 1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::size_t n;
        double re, im;
        if (!(ls >> n >> re >> im)) throw CacheError("malformed coefficient row: " + line);
        if (n != expect) throw CacheError(fmt::format("coefficient rows must be contiguous; expected n = {}", expect));
        t.values.emplace_back(re, im);
        ++expect;
    }
    if (t.values.empty()) throw CacheError("empty coefficient file " + path);
    if (std::abs(t.values[0] - cplx(1.0)) > 1e-12)
        throw VerificationError("coefficient file must start with a(1) = 1");
    return t;
}

void write_coefficient_cache(const CoefficientTable& tbl, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw CacheError("cannot write coefficient cache " + path);
    out << "# name=" << tbl.name << "\n";
    out << "# N=" << tbl.size() << "\n";
    out << "# normalization=analytic\n";
    out << "# source=" << source_tag(tbl.source) << "\n";
    out << "# degree=" << tbl.degree << "\n";
    bool with_tau = tbl.tau.size() == tbl.size();
    for (std::size_t n = 1; n <= tbl.size(); ++n) {
        out << n << ' ' << fmt::format("{:.17g} {:.17g}", tbl(n).real(), tbl(n).imag());
        if (with_tau) out << ' ' << to_string(tbl.tau[n - 1]);
        out << '\n';
    }
    if (!out) throw CacheError("write failed for " + path);
}

CoefficientTable read_coefficient_cache(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CacheError("cannot open coefficient cache " + path);
    CoefficientTable t;
    std::size_t declared = 0;
    std::string line, source;
    std::size_t expect = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(2, eq - 2), val = line.substr(eq + 1);
            if (key == "name") t.name = val;
            else if (key == "N") declared = std::stoull(val);
            else if (key == "source") source = val;
            else if (key == "degree") t.degree = std::stoi(val);
            else if (key == "normalization" && val != "analytic")
                throw CacheError("unsupported normalization " + val);
            continue;
        }
        std::istringstream ls(line);
        std::size_t n;
        double re, im;
        if (!(ls >> n >> re >> im) || n != expect) throw CacheError("corrupt coefficient cache row: " + line);
        std::string tau;
        if (ls >> tau) t.tau.push_back(parse_int128(tau));
        t.values.emplace_back(re, im);
        ++expect;
    }
    if (t.values.size() != declared) throw CacheError("coefficient cache length mismatch");
    if (source == "builtin-zeta") t.source = CoefficientSource::kZeta;
    else if (source == "builtin-delta") t.source = CoefficientSource::kDelta;
    else if (source == "derived") t.source = CoefficientSource::kDerived;
    else t.source = CoefficientSource::kFile;
    if (!t.tau.empty()) {
        if (t.tau.size() != t.values.size()) throw CacheError("partial tau column in cache");
        for (std::size_t n = 1; n <= t.size(); ++n)
            t.values[n - 1] = to_double(t.tau[n - 1]) / pow_half_weight(n);
    }
    return t;
}

}  // namespace zerogap
