#include "zerogap/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zerogap/errors.hpp"
#include "zerogap/parallel.hpp"
#include "zerogap/quadrature.hpp"
#include "zerogap/special_functions.hpp"

namespace zerogap {

namespace {

double round15(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return std::strtod(buf, nullptr);
}

std::string fmt15(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

double z_at(const EvaluationContext& ctx, double t) { return hardy_z(ctx.spec(), t, ctx.evaluate(t)); }

double z_prime(const EvaluationContext& ctx, double t) {
    const LFunctionSpec& spec = ctx.spec();
    auto d = ctx.derivatives(t, 1);
    cplx om = std::polar(1.0, rotation_phase(spec, t));
    double th1 = rotation_phase_derivative(spec, t);
    cplx i(0.0, 1.0);
    return (om * (i * th1 * d[0] + i * d[1])).real();
}

std::vector<double> scan_window(const EvaluationContext& ctx, double t0, double step, long i0,
                                long i1, double t_end, const ScanOptions& o) {
    const LFunctionSpec& spec = ctx.spec();
    RotationTracker tracker(spec);
    std::vector<double> found;
    auto grid = [&](long i) { return std::min(t0 + step * static_cast<double>(i), t_end); };
    double tp = grid(i0);
    cplx lp = ctx.evaluate(tp);
    double zp = tracker.z(tp, lp);
    for (long i = i0 + 1; i <= i1; ++i) {
        double t = grid(i);
        cplx l = ctx.evaluate(t);
        double z = tracker.z(t, l);
        // the tracked rotation must agree with the closed-form phase
        double drift = std::abs(std::polar(1.0, tracker.phase(t)) - std::polar(1.0, rotation_phase(spec, t)));
        if (drift > 1e-6) throw BranchError("rotation tracker lost the branch near t = " + fmt15(t));
        if ((zp < 0.0) != (z < 0.0) || z == 0.0) {
            double lo = tp, hi = t, zlo = zp;
            if (z == 0.0) {
                found.push_back(t);
            } else {
                while (hi - lo > o.refine_tol) {
                    double mid = 0.5 * (lo + hi);
                    double zm = z_at(ctx, mid);
                    if (zm == 0.0) {
                        lo = hi = mid;
                        break;
                    }
                    if ((zm < 0.0) == (zlo < 0.0)) {
                        lo = mid;
                        zlo = zm;
                    } else {
                        hi = mid;
                    }
                }
                double r = 0.5 * (lo + hi);
                if (o.newton_polish && hi > lo) {
                    double dz = z_prime(ctx, r);
                    if (dz != 0.0) {
                        double r1 = r - z_at(ctx, r) / dz;
                        if (r1 >= lo && r1 <= hi) r = r1;
                    }
                }
                found.push_back(round15(r));
            }
        }
        tp = t;
        zp = z;
    }
    return found;
}

}  // namespace

double default_scan_step(const LFunctionSpec& spec, double t_max) {
    double q = spec.fe.level;
    return kPi / (8.0 * std::log(std::sqrt(q) * t_max));
}

ZeroList scan_zeros(const EvaluationContext& ctx, double t_min, double t_max, ScanOptions o) {
    if (!(t_min >= 2.0) || !(t_max > t_min)) throw DomainError("scan_zeros: need 2 <= t_min < t_max");
    if (!(o.refine_tol > 0.0)) throw DomainError("scan_zeros: refine_tol must be positive");
    const LFunctionSpec& spec = ctx.spec();
    if (!spec.self_dual) throw DomainError("scan_zeros: spec must be self-dual");
    double step = o.step > 0.0 ? o.step : default_scan_step(spec, t_max);
    auto n = static_cast<long>(std::ceil((t_max - t_min) / step));
    int w = o.windows > 0 ? o.windows : static_cast<int>(worker_count());
    w = static_cast<int>(std::max<long>(1, std::min<long>(w, n)));
    // windows share their boundary grid point, so every grid interval is seen exactly once
    std::vector<std::vector<double>> parts(static_cast<std::size_t>(w));
    parallel_for(parts.size(), [&](std::size_t k) {
        long i0 = n * static_cast<long>(k) / w, i1 = n * static_cast<long>(k + 1) / w;
        parts[k] = scan_window(ctx, t_min, step, i0, i1, t_max, o);
    });
    ZeroList zl;
    for (auto& p : parts) zl.ordinates.insert(zl.ordinates.end(), p.begin(), p.end());
    std::sort(zl.ordinates.begin(), zl.ordinates.end());
    std::vector<double> merged;
    for (double g : zl.ordinates)
        if (merged.empty() || g - merged.back() > o.refine_tol) merged.push_back(g);
    zl.ordinates = std::move(merged);
    zl.refine_tol = o.refine_tol;
    zl.scan_step = step;
    zl.spec_name = spec.name;
    zl.t_min = t_min;
    zl.t_max = t_max;
    double expected = zero_count_main_term(spec, t_max) - (t_min >= 1.0 ? zero_count_main_term(spec, std::max(t_min, 1.0)) : 0.0);
    double dev = static_cast<double>(zl.ordinates.size()) - expected;
    if (std::fabs(dev) > 5.0)
        zl.warnings.push_back("suspected missed zeros: found " + std::to_string(zl.ordinates.size()) +
                              ", main term predicts " + fmt15(expected));
    return zl;
}

ZeroList scan_zeros(const LFunctionSpec& spec, double t_min, double t_max, ScanOptions o) {
    EvaluationContext ctx(spec, t_min, t_max, o.eval);
    return scan_zeros(ctx, t_min, t_max, o);
}

double local_spacing(const LFunctionSpec& spec, double gamma, GapNormalization norm) {
    double lg;
    double q = spec.fe.level;
    if (spec.is_control())
        lg = std::log(gamma / (2.0 * kPi)) / 2.0;
    else if (norm == GapNormalization::kDensity)
        lg = std::log(std::sqrt(q) * gamma / (2.0 * kPi));
    else
        lg = std::log(std::sqrt(q) * gamma);
    if (!(lg > 0.0)) throw DomainError("local_spacing: ordinate too small for the normalization");
    return kPi / lg;
}

GapStatistics gap_statistics(const ZeroList& zl, const LFunctionSpec& spec, double lo, double hi,
                             GapNormalization norm) {
    GapStatistics g;
    g.normalization = norm;
    g.control = spec.is_control();
    const auto& z = zl.ordinates;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        if (z[i] < lo || z[i] > hi) continue;
        g.normalized_gaps.push_back((z[i + 1] - z[i]) / local_spacing(spec, z[i], norm));
    }
    if (g.normalized_gaps.empty()) throw DomainError("gap_statistics: need at least 2 zeros");
    auto [mn, mx] = std::minmax_element(g.normalized_gaps.begin(), g.normalized_gaps.end());
    g.min_gap = g.mu_hat = *mn;
    g.max_gap = g.lambda_hat = *mx;
    g.mean_gap = pairwise_sum(g.normalized_gaps) / static_cast<double>(g.normalized_gaps.size());
    return g;
}

GapStatistics gap_statistics(const ZeroList& zl, const LFunctionSpec& spec, GapNormalization norm) {
    return gap_statistics(zl, spec, -INFINITY, INFINITY, norm);
}

WirtingerInterval wirtinger_interval(const std::function<double(double)>& y,
                                     const std::function<double(double)>& dy, double a, double b) {
    WirtingerInterval w;
    w.a = a;
    w.b = b;
    auto l = adaptive_gauss([&](double x) { double v = y(x); return v * v; }, a, b, 1e-13);
    auto r = adaptive_gauss([&](double x) { double v = dy(x); return v * v; }, a, b, 1e-13);
    w.lhs = l.value;
    w.rhs = (b - a) * (b - a) / (kPi * kPi) * r.value;
    w.converged = l.converged && r.converged;
    return w;
}

std::vector<std::vector<WirtingerInterval>> wirtinger_check(const EvaluationContext& ctx,
                                                            const ZeroList& zl,
                                                            const std::vector<double>& rhos,
                                                            double T, double lo, double hi) {
    if (!(T > 1.0)) throw DomainError("wirtinger_check: T must exceed 1");
    const auto& z = zl.ordinates;
    std::vector<std::pair<double, double>> iv;
    for (std::size_t i = 0; i + 1 < z.size(); ++i)
        if (z[i] >= lo && z[i + 1] <= hi) iv.emplace_back(z[i], z[i + 1]);
    const double lt = std::log(T);
    const GaussRule& g = gauss_legendre(10);

    // integrals of |L|^2, Re(conj(L) L') and |L'|^2 on 2 and on 3 panels
    struct Moments {
        double ll = 0, lx = 0, xx = 0;
    };
    auto integrate = [&](double a, double b, int panels) {
        Moments m;
        double w = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            double c = a + w * (p + 0.5), h = 0.5 * w;
            for (int q = 0; q < 10; ++q) {
                auto d = ctx.derivatives(c + h * g.nodes[q], 1);
                double wt = g.weights[q] * h;
                m.ll += wt * std::norm(d[0]);
                m.lx += wt * (std::conj(d[0]) * d[1]).real();
                m.xx += wt * std::norm(d[1]);
            }
        }
        return m;
    };
    std::vector<Moments> m2(iv.size()), m3(iv.size());
    parallel_for(iv.size(), [&](std::size_t i) {
        m2[i] = integrate(iv[i].first, iv[i].second, 2);
        m3[i] = integrate(iv[i].first, iv[i].second, 3);
    });

    std::vector<std::vector<WirtingerInterval>> out;
    for (double rho : rhos) {
        std::vector<WirtingerInterval> row;
        double k = rho * lt;
        for (std::size_t i = 0; i < iv.size(); ++i) {
            // |g'|^2 = |rho log T L + L'|^2
            auto side = [&](const Moments& m) { return k * k * m.ll + 2.0 * k * m.lx + m.xx; };
            WirtingerInterval w;
            w.a = iv[i].first;
            w.b = iv[i].second;
            double len = w.b - w.a;
            w.lhs = m3[i].ll;
            w.rhs = len * len / (kPi * kPi) * side(m3[i]);
            double dl = std::fabs(m3[i].ll - m2[i].ll), dr = std::fabs(side(m3[i]) - side(m2[i]));
            w.converged = dl <= 1e-8 * std::max(1e-300, m3[i].ll) && dr <= 1e-8 * std::max(1e-300, side(m3[i]));
            row.push_back(w);
        }
        out.push_back(std::move(row));
    }
    return out;
}

CountComparison count_vs_main_term(const ZeroList& zl, const LFunctionSpec& spec, double T) {
    if (T > zl.t_max + 1e-12 || T < zl.t_min)
        throw DomainError("count_vs_main_term: T outside the scanned range");
    CountComparison c;
    c.count = std::count_if(zl.ordinates.begin(), zl.ordinates.end(), [&](double g) { return g <= T; });
    c.main = zero_count_main_term(spec, T);
    return c;
}

void write_zero_cache(const ZeroList& zl, const std::string& path, const std::string& hash) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw CacheError("cannot write zero cache " + path);
        out << "# spec=" << zl.spec_name << "\n";
        out << "# refine_tol=" << fmt15(zl.refine_tol) << "\n";
        out << "# scan_step=" << fmt15(zl.scan_step) << "\n";
        out << "# t_min=" << fmt15(zl.t_min) << "\n";
        out << "# t_max=" << fmt15(zl.t_max) << "\n";
        if (!hash.empty()) out << "# hash=" << hash << "\n";
        for (double g : zl.ordinates) out << fmt15(g) << "\n";
    }
    std::filesystem::rename(tmp, path);
}

ZeroList read_zero_cache(const std::string& path, std::string* hash) {
    std::ifstream in(path);
    if (!in) throw CacheError("cannot open zero cache " + path);
    ZeroList zl;
    std::string line;
    bool have_spec = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string k = line.substr(2, eq - 2), v = line.substr(eq + 1);
            try {
                if (k == "spec") {
                    zl.spec_name = v;
                    have_spec = true;
                } else if (k == "refine_tol") {
                    zl.refine_tol = std::stod(v);
                } else if (k == "scan_step") {
                    zl.scan_step = std::stod(v);
                } else if (k == "t_min") {
                    zl.t_min = std::stod(v);
                } else if (k == "t_max") {
                    zl.t_max = std::stod(v);
                } else if (k == "hash" && hash) {
                    *hash = v;
                }
            } catch (const std::exception&) {
                throw CacheError("zero cache " + path + ": bad header line '" + line + "'");
            }
            continue;
        }
        char* end = nullptr;
        double g = std::strtod(line.c_str(), &end);
        if (end == line.c_str() || *end != '\0') throw CacheError("zero cache " + path + ": bad row '" + line + "'");
        if (!zl.ordinates.empty() && g <= zl.ordinates.back())
            throw CacheError("zero cache " + path + ": ordinates not increasing");
        zl.ordinates.push_back(g);
    }
    if (!have_spec) throw CacheError("zero cache " + path + ": missing spec header");
    return zl;
}

void append_zero_cache(const ZeroList& extra, const std::string& path) {
    std::string hash;
    ZeroList zl = read_zero_cache(path, &hash);
    if (extra.spec_name != zl.spec_name) throw CacheError("append_zero_cache: spec mismatch");
    for (double g : extra.ordinates)
        if (g > zl.t_max && (zl.ordinates.empty() || g - zl.ordinates.back() > zl.refine_tol))
            zl.ordinates.push_back(g);
    zl.t_max = std::max(zl.t_max, extra.t_max);
    write_zero_cache(zl, path, hash);
}

}  // namespace zerogap
