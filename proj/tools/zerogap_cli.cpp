// zerogap: command-line front end for the gap, moment, zero and pair-correlation pipelines.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "zerogap/afe.hpp"
#include "zerogap/cache.hpp"
#include "zerogap/coefficients.hpp"
#include "zerogap/errors.hpp"
#include "zerogap/gap_bounds.hpp"
#include "zerogap/lfunc.hpp"
#include "zerogap/moments.hpp"
#include "zerogap/paircorr.hpp"
#include "zerogap/parallel.hpp"
#include "zerogap/zeros.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace zerogap;

namespace {

enum Exit { kOk = 0, kUsage = 2, kVerify = 3, kBudget = 4, kCache = 5 };

std::string num(double v) { return fmt::format("{:.15g}", v); }

// Values that JSON cannot carry become null.
json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Common {
    std::string form = "zeta";
    std::string spec_file;
    std::string format = "table";
    std::optional<std::size_t> terms;
    std::optional<double> cf;
};

void add_form_options(CLI::App* cmd, Common& c, bool form_required = true) {
    auto* f = cmd->add_option("--form", c.form, "zeta, delta, or a name from --spec-file");
    if (form_required) f->required();
    cmd->add_option("--spec-file", c.spec_file, "file of key = value spec blocks")->check(CLI::ExistingFile);
    cmd->add_option("--coeffs", c.terms, "coefficient table length (default: what the window needs)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--cf", c.cf, "Rankin-Selberg residue override")->check(CLI::PositiveNumber);
}

// ---------------------------------------------------------------------------------------------
// coefficient tables and specs, cached under the cache directory

std::string coefficient_cache_path(const std::string& form, std::size_t N) {
    return (fs::path(cache_directory()) / fmt::format("coeffs-{}-{}.txt", form, N)).string();
}

std::shared_ptr<const CoefficientTable> cached_delta_table(std::size_t N) {
    std::string path = coefficient_cache_path("delta", N);
    std::string sidecar = path + ".sha1";
    if (fs::exists(path)) {
        std::ifstream h(sidecar);
        std::string stored;
        if (!(h >> stored)) throw CacheError("coefficient cache " + path + " has no hash file");
        auto tbl = std::make_shared<CoefficientTable>(read_coefficient_cache(path));
        if (table_hash(*tbl) != stored) throw CacheError("coefficient cache " + path + ": hash mismatch");
        if (tbl->size() != N || tbl->tau.size() != N)
            throw CacheError("coefficient cache " + path + ": unexpected length");
        return tbl;
    }
    auto tbl = std::make_shared<CoefficientTable>(gen_delta(N));
    std::string tmp = path + ".tmp";
    write_coefficient_cache(*tbl, tmp);
    fs::rename(tmp, path);
    std::ofstream(sidecar) << table_hash(*tbl) << '\n';
    return tbl;
}

struct ResolvedSpec {
    LFunctionSpec spec;
    double cf_error = 0.0;
};

// Residue estimates always use the same table length so every command reports the same c_f.
constexpr std::size_t kResidueTerms = 200000;

ResolvedSpec resolve_spec(const Common& c, double t_max, std::size_t min_terms = 0) {
    ResolvedSpec out;
    std::size_t need = min_terms;
    if (c.form == "zeta") {
        LFunctionSpec probe = zeta_spec(16);
        need = std::max(need, required_terms(probe, t_max) * 21 / 20 + 16);
        out.spec = zeta_spec(c.terms.value_or(need));
        out.spec.residue_cf = 1.0;
    } else if (c.form == "delta") {
        LFunctionSpec probe = delta_spec(std::make_shared<CoefficientTable>(gen_delta(16)));
        need = std::max({need, required_terms(probe, t_max) * 21 / 20 + 16, kResidueTerms});
        out.spec = delta_spec(cached_delta_table(c.terms.value_or(need)));
        if (!out.spec.residue_cf) {
            auto rs = rankin_selberg_table(*out.spec.coefficients);
            double X = static_cast<double>(std::min(rs.size(), kResidueTerms));
            ResidueEstimate est = residue_estimate(rs, X);
            out.spec.residue_cf = est.value;
            out.cf_error = est.error;
        }
    } else {
        if (c.spec_file.empty())
            throw ShapeError("unknown form '" + c.form + "' (give --spec-file for custom specs)");
        SpecRegistry reg;
        reg.load_file(c.spec_file);
        out.spec = reg.get(c.form);
        std::size_t have = out.spec.coefficients ? out.spec.coefficients->size() : 0;
        if (t_max > 0 && have < required_terms(out.spec, t_max))
            throw ResourceError(fmt::format("spec {} has {} coefficients, window needs {}", c.form,
                                            have, required_terms(out.spec, t_max)));
    }
    if (c.cf) {
        out.spec.residue_cf = *c.cf;
        out.cf_error = 0.0;
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// zero cache: one file per spec and scan parameters, extended upward on demand

std::string zero_parameter_hash(const LFunctionSpec& spec, double refine_tol) {
    EvaluationOptions e;
    // built-in tables are fixed functions of n, so their length does not change the zeros
    std::string coeffs;
    if (spec.coefficients) {
        auto src = spec.coefficients->source;
        coeffs = (src == CoefficientSource::kZeta || src == CoefficientSource::kDelta)
                     ? source_tag(src)
                     : table_hash(*spec.coefficients);
    }
    std::string params = fmt::format("spec={}\ncoefficients={}\nrefine_tol={:.17g}\nB={:.17g}\nline={:.17g}\n"
                                     "step={:.17g}\nX={:.17g}\ntrunc={:.17g}\n",
                                     spec.name, coeffs,
                                     refine_tol, e.B, e.line, e.step, e.X, e.trunc_epsilon);
    return content_hash(params);
}

struct ZeroRun {
    ZeroList zeros;
    std::string path;
    bool extended = false;
    bool reused = false;
};

ZeroRun cached_zeros(const LFunctionSpec& spec, double t_min, double t_max, double refine_tol) {
    std::string hash = zero_parameter_hash(spec, refine_tol);
    ZeroRun run;
    run.path = (fs::path(cache_directory()) / fmt::format("zeros-{}-{}.txt", spec.name, hash.substr(0, 12))).string();
    ScanOptions opts;
    opts.refine_tol = refine_tol;
    if (fs::exists(run.path)) {
        std::string stored;
        ZeroList zl = read_zero_cache(run.path, &stored);
        if (stored != hash || zl.spec_name != spec.name)
            throw CacheError("zero cache " + run.path + ": parameter hash mismatch");
        if (zl.t_min <= t_min + 1e-12) {
            if (zl.t_max < t_max) {
                ZeroList extra = scan_zeros(spec, zl.t_max, t_max, opts);
                append_zero_cache(extra, run.path);
                zl = read_zero_cache(run.path, &stored);
                run.extended = true;
            } else {
                run.reused = true;
            }
            run.zeros = zl;
            return run;
        }
    }
    run.zeros = scan_zeros(spec, t_min, t_max, opts);
    std::string tmp = run.path + ".tmp";
    write_zero_cache(run.zeros, tmp, hash);
    fs::rename(tmp, run.path);
    return run;
}

std::vector<double> zeros_between(const ZeroList& zl, double lo, double hi) {
    std::vector<double> out;
    for (double g : zl.ordinates)
        if (g >= lo && g <= hi) out.push_back(g);
    return out;
}

// ---------------------------------------------------------------------------------------------
// subcommands

struct SmallGapsArgs {
    std::optional<int> degree;
    std::optional<int> degree_max;
    double tol = 1e-8;
    std::string tail = "square";
    std::string format = "table";
};

int cmd_smallgaps(const SmallGapsArgs& a) {
    if (!a.degree && !a.degree_max) throw ShapeError("smallgaps needs --degree or --degree-max");
    if (a.degree && a.degree_max) throw ShapeError("give only one of --degree and --degree-max");
    int lo = a.degree ? *a.degree : 1;
    int hi = a.degree ? *a.degree : *a.degree_max;
    if (lo < 1) throw DomainError("degree must be >= 1");
    TailConstant tail = a.tail == "cube" ? TailConstant::kCube : TailConstant::kSquare;

    std::vector<GapBoundResult> rows;
    bool ok = true;
    for (int m = lo; m <= hi; ++m) {
        GapBoundResult r = small_gap_root(m, a.tol, tail);
        // the root must sit between a negative and a positive bracket value
        double d = std::max(10.0 * a.tol, 1e-7);
        if (!(bracket(r.lambda_star - d, m, tail) < 0.0 && bracket(r.lambda_star + d, m, tail) > 0.0))
            ok = false;
        rows.push_back(r);
    }
    if (a.format == "json") {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"m", r.m}, {"kappa", r.kappa}, {"lambda_star", r.lambda_star},
                           {"bracket_at_root", r.bracket_at_root}});
        std::cout << json{{"command", "smallgaps"}, {"rows", arr}}.dump(2) << '\n';
    } else if (a.format == "csv") {
        std::cout << "# small-gap bracket roots\n# m,kappa,lambda_star\n";
        for (const auto& r : rows) std::cout << r.m << ',' << num(r.kappa) << ',' << num(r.lambda_star) << '\n';
    } else {
        std::cout << "m, kappa, lambda_star\n";
        for (const auto& r : rows) std::cout << fmt::format("{}, {:.6f}, {:.6f}\n", r.m, r.kappa, r.lambda_star);
    }
    return ok ? kOk : kVerify;
}

struct LargeGapArgs {
    double c0 = 2.0, c1 = -2.0, c2 = 8.0 / 3.0;
    std::string format = "table";
};

int cmd_largegap(const LargeGapArgs& a) {
    LargeGapResult r = large_gap_bound(a.c0, a.c1, a.c2);
    if (a.format == "json") {
        std::cout << json{{"command", "largegap"}, {"rho_star", r.rho_star}, {"bound", r.bound}}.dump(2) << '\n';
    } else if (a.format == "csv") {
        std::cout << "# rho_star,bound\n" << num(r.rho_star) << ',' << num(r.bound) << '\n';
    } else {
        std::cout << fmt::format("rho*={:.6f} bound={:.7f}\n", r.rho_star, r.bound);
    }
    return kOk;
}

struct MomentArgs {
    Common c;
    std::optional<double> T;
    std::optional<int> mu, nu;
    std::size_t node_budget = MomentOptions{}.node_budget;
    double panel_fraction = MomentOptions{}.panel_fraction;
};

int cmd_moments(MomentArgs& a) {
    double T = *a.T;
    if (!(T >= 10.0)) throw DomainError("--T must be >= 10");
    ResolvedSpec rs = resolve_spec(a.c, 2.0 * T);
    MomentOptions opts;
    opts.node_budget = a.node_budget;
    opts.panel_fraction = a.panel_fraction;
    MomentReport r = numeric_moment(rs.spec, T, *a.mu, *a.nu, opts);
    r.cf_error = rs.cf_error;
    if (a.c.format == "csv") {
        std::cout << "# moment report, spec " << r.spec_name << "\n"
                  << "# T,mu,nu,numeric_re,numeric_im,predicted,ratio_re,ratio_im,panels,node_budget\n"
                  << num(r.T) << ',' << r.mu << ',' << r.nu << ',' << num(r.numeric.real()) << ','
                  << num(r.numeric.imag()) << ',' << num(r.predicted) << ',' << num(r.ratio.real()) << ','
                  << num(r.ratio.imag()) << ',' << r.panels << ',' << r.node_budget << '\n';
    } else {
        std::cout << to_json(r) << '\n';
    }
    return kOk;
}

cplx parse_complex(const std::string& s) {
    // "a" or "a,b"
    std::string t = s;
    for (char& ch : t)
        if (ch == ',') ch = ' ';
    std::istringstream in(t);
    double re = 0.0, im = 0.0;
    if (!(in >> re)) throw ShapeError("bad complex value '" + s + "'");
    if (!(in >> im)) im = 0.0;
    std::string rest;
    if (in >> rest) throw ShapeError("bad complex value '" + s + "'");
    return {re, im};
}

struct ShiftedArgs {
    Common c;
    std::optional<double> T;
    std::string alpha, beta;
    bool scaled = false;
};

int cmd_shifted(ShiftedArgs& a) {
    double T = *a.T;
    if (!(T >= 10.0)) throw DomainError("--T must be >= 10");
    cplx al = parse_complex(a.alpha), be = parse_complex(a.beta);
    if (a.scaled) {
        al /= std::log(T);
        be /= std::log(T);
    }
    ResolvedSpec rs = resolve_spec(a.c, 2.0 * T);
    double cf = rs.spec.residue_cf.value_or(1.0);
    cplx pred = shifted_moment_prediction(rs.spec, T, al, be, cf);
    EvaluationContext ctx(rs.spec, T, 2.0 * T);
    cplx numeric = shifted_moment_numeric(ctx, T, al, be);
    cplx ratio = numeric / pred;
    if (a.c.format == "csv") {
        std::cout << "# shifted moment, spec " << rs.spec.name << "\n"
                  << "# T,alpha_re,alpha_im,beta_re,beta_im,numeric_re,numeric_im,predicted_re,predicted_im\n"
                  << num(T) << ',' << num(al.real()) << ',' << num(al.imag()) << ',' << num(be.real()) << ','
                  << num(be.imag()) << ',' << num(numeric.real()) << ',' << num(numeric.imag()) << ','
                  << num(pred.real()) << ',' << num(pred.imag()) << '\n';
    } else {
        json j{{"command", "shifted-moments"},
               {"spec", rs.spec.name},
               {"T", T},
               {"alpha", {{"re", al.real()}, {"im", al.imag()}}},
               {"beta", {{"re", be.real()}, {"im", be.imag()}}},
               {"numeric", {{"re", numeric.real()}, {"im", numeric.imag()}}},
               {"predicted", {{"re", pred.real()}, {"im", pred.imag()}}},
               {"ratio", {{"re", jnum(ratio.real())}, {"im", jnum(ratio.imag())}}},
               {"c_f", cf}};
        std::cout << j.dump(2) << '\n';
    }
    return kOk;
}

struct ZerosArgs {
    Common c;
    double tmin = 2.0;
    std::optional<double> tmax;
    double refine_tol = 1e-9;
    std::string output;
};

int cmd_zeros(ZerosArgs& a) {
    double tmax = *a.tmax;
    if (!(a.tmin >= 2.0) || !(tmax > a.tmin)) throw DomainError("need 2 <= --tmin < --tmax");
    ResolvedSpec rs = resolve_spec(a.c, tmax);
    ZeroRun run = cached_zeros(rs.spec, a.tmin, tmax, a.refine_tol);
    auto zs = zeros_between(run.zeros, a.tmin, tmax);
    CountComparison cc = count_vs_main_term(run.zeros, rs.spec, tmax);
    if (!a.output.empty()) {
        std::ofstream out(a.output);
        if (!out) throw CacheError("cannot write " + a.output);
        out << "# zeros of " << rs.spec.name << " in [" << num(a.tmin) << ", " << num(tmax) << "]\n# gamma\n";
        for (double g : zs) out << num(g) << '\n';
    }
    if (a.c.format == "json") {
        json j{{"command", "zeros"},       {"spec", rs.spec.name}, {"t_min", a.tmin},
               {"t_max", tmax},            {"count", zs.size()},   {"main_term", cc.main},
               {"cache", run.path},        {"extended", run.extended}, {"reused", run.reused},
               {"warnings", run.zeros.warnings}};
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << fmt::format("spec={} zeros={} main_term={:.6f} cache={}\n", rs.spec.name, zs.size(),
                                 cc.main, run.path);
        for (const auto& w : run.zeros.warnings) std::cerr << "warning: " << w << '\n';
    }
    return kOk;
}

struct GapsArgs {
    Common c;
    double tmin = 2.0;
    std::optional<double> tmax;
    std::optional<double> lo, hi;
    std::string normalization = "density";
};

int cmd_gaps(GapsArgs& a) {
    double tmax = *a.tmax;
    if (!(a.tmin >= 2.0) || !(tmax > a.tmin)) throw DomainError("need 2 <= --tmin < --tmax");
    ResolvedSpec rs = resolve_spec(a.c, tmax);
    ZeroRun run = cached_zeros(rs.spec, a.tmin, tmax, 1e-9);
    GapNormalization norm = a.normalization == "literal" ? GapNormalization::kLiteral : GapNormalization::kDensity;
    double lo = a.lo.value_or(a.tmin), hi = a.hi.value_or(tmax);
    GapStatistics g = gap_statistics(run.zeros, rs.spec, lo, hi, norm);
    if (a.c.format == "json") {
        json j{{"command", "gaps"},        {"spec", rs.spec.name},       {"lo", lo},
               {"hi", hi},                 {"normalization", a.normalization},
               {"count", g.normalized_gaps.size()},
               {"mean", jnum(g.mean_gap)}, {"lambda_hat", jnum(g.lambda_hat)},
               {"mu_hat", jnum(g.mu_hat)}, {"control", g.control}};
        std::cout << j.dump(2) << '\n';
    } else if (a.c.format == "csv") {
        std::cout << "# normalized gaps of " << rs.spec.name << ", " << a.normalization << " spacing\n# gap\n";
        for (double v : g.normalized_gaps) std::cout << num(v) << '\n';
    } else {
        std::cout << fmt::format("spec={} gaps={} mean={:.6f} lambda_hat={:.6f} mu_hat={:.6f}{}\n", rs.spec.name,
                                 g.normalized_gaps.size(), g.mean_gap, g.lambda_hat, g.mu_hat,
                                 g.control ? " (control)" : "");
    }
    return kOk;
}

struct PairArgs {
    Common c;
    std::optional<double> T;
    double m = 0.0;
    double alpha_min = 0.0, alpha_max = 2.0, alpha_step = 0.05;
    std::string output;
    bool kernels = false;
};

int cmd_paircorr(PairArgs& a) {
    double T = *a.T;
    if (!(T > 10.0)) throw DomainError("--T must exceed 10");
    if (!(a.alpha_step > 0.0) || a.alpha_max < a.alpha_min) throw DomainError("bad alpha grid");
    ResolvedSpec rs = resolve_spec(a.c, T);
    double m = a.m > 0.0 ? a.m : rs.spec.fe.degree;
    ZeroRun run = cached_zeros(rs.spec, 2.0, T, 1e-9);
    auto zs = zeros_between(run.zeros, 0.0, T);
    std::vector<double> alphas;
    auto steps = static_cast<long>(std::floor((a.alpha_max - a.alpha_min) / a.alpha_step + 1e-9));
    for (long i = 0; i <= steps; ++i) alphas.push_back(a.alpha_min + a.alpha_step * static_cast<double>(i));
    FormFactorCurve curve = form_factor(zs, m, T, alphas);

    if (!a.output.empty()) write_form_factor_csv(curve, a.output, rs.spec.name);
    json checks = json::array();
    if (a.kernels) {
        std::vector<KernelPair> ks{fejer_pair(1.0), fejer_pair(2.0), selberg_minorant_pair(0.6),
                                   selberg_minorant_pair(0.8), selberg_minorant_pair(1.0)};
        auto sums = convolution_sums(zs, ks, m, T);
        for (std::size_t i = 0; i < ks.size(); ++i)
            checks.push_back({{"kernel", ks[i].name}, {"lhs", sums[i].lhs}, {"rhs", sums[i].rhs}});
    }
    if (a.c.format == "json") {
        json pts = json::array();
        for (std::size_t i = 0; i < alphas.size(); ++i) pts.push_back({{"alpha", alphas[i]}, {"F", curve.values[i]}});
        json j{{"command", "paircorr"}, {"spec", rs.spec.name}, {"T", T}, {"m", m},
               {"zeros", zs.size()},    {"factored", curve.factored}, {"curve", pts}, {"kernels", checks}};
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "# form factor of " << rs.spec.name << " zeros up to T = " << num(T) << "\n# alpha,F\n";
        for (std::size_t i = 0; i < alphas.size(); ++i) std::cout << num(alphas[i]) << ',' << num(curve.values[i]) << '\n';
        for (const auto& k : checks)
            std::cout << "# kernel " << k["kernel"].get<std::string>() << " lhs=" << num(k["lhs"].get<double>())
                      << " rhs=" << num(k["rhs"].get<double>()) << '\n';
    }
    return kOk;
}

struct HypArgs {
    Common c;
    double x = 1e5;
};

int cmd_hypcheck(HypArgs& a) {
    if (!(a.x >= 1e2)) throw DomainError("--x must be >= 100");
    auto N = static_cast<std::size_t>(std::floor(a.x));
    ResolvedSpec rs = resolve_spec(a.c, 0.0, N);
    LogCoefficientTable lt = log_coefficients(*rs.spec.coefficients, N);
    std::vector<std::pair<double, double>> traj;
    for (double x = 1e3; x < a.x * (1.0 - 1e-12); x *= 10.0) traj.emplace_back(x, hypothesis_s_ratio(lt, x));
    traj.emplace_back(a.x, hypothesis_s_ratio(lt, a.x));
    if (a.c.format == "json") {
        json arr = json::array();
        for (auto [x, r] : traj) arr.push_back({{"x", x}, {"ratio", r}});
        std::cout << json{{"command", "hypcheck"}, {"spec", rs.spec.name}, {"trajectory", arr}}.dump(2) << '\n';
    } else {
        std::cout << "# sum |upsilon(n)|^2 / (x log x) for " << rs.spec.name << "\n# x,ratio\n";
        for (auto [x, r] : traj) std::cout << num(x) << ',' << num(r) << '\n';
    }
    return kOk;
}

struct CoeffArgs {
    Common c;
    std::size_t N = 1000;
    std::size_t show = 10;
};

int cmd_coeffs(CoeffArgs& a) {
    ResolvedSpec rs = resolve_spec(a.c, 0.0, a.N);
    const CoefficientTable& tbl = *rs.spec.coefficients;
    std::size_t bad = deligne_violation(tbl, std::min(a.N, tbl.size()));
    double defect = multiplicativity_defect(tbl, 200);
    bool ok = bad == 0 && defect < 1e-9;
    std::size_t show = std::min(a.show, tbl.size());
    if (a.c.format == "json") {
        json vals = json::array();
        for (std::size_t n = 1; n <= show; ++n) {
            json v{{"n", n}, {"re", tbl(n).real()}, {"im", tbl(n).imag()}};
            if (!tbl.tau.empty()) v["tau"] = to_string(tbl.tau[n - 1]);
            vals.push_back(v);
        }
        json j{{"command", "coeffs"}, {"spec", rs.spec.name}, {"N", tbl.size()}, {"hash", table_hash(tbl)},
               {"deligne_violation", bad}, {"multiplicativity_defect", defect}, {"values", vals}};
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "# coefficients of " << rs.spec.name << ", N = " << tbl.size() << ", hash " << table_hash(tbl)
                  << "\n# deligne_violation=" << bad << " multiplicativity_defect=" << num(defect)
                  << "\n# n,re,im" << (tbl.tau.empty() ? "" : ",tau") << '\n';
        for (std::size_t n = 1; n <= show; ++n) {
            std::cout << n << ',' << num(tbl(n).real()) << ',' << num(tbl(n).imag());
            if (!tbl.tau.empty()) std::cout << ',' << to_string(tbl.tau[n - 1]);
            std::cout << '\n';
        }
    }
    return ok ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zerogap: zero gaps, moments and pair correlation of L-functions"};
    app.set_config("--config", "", "TOML run configuration; unknown keys are rejected");
    app.allow_config_extras(false);
    app.require_subcommand(1);
    app.allow_extras(false);
    unsigned workers = 0;
    app.add_option("--workers", workers, "worker threads (0: machine parallelism)");

    const std::vector<std::string> formats{"table", "csv", "json"};

    SmallGapsArgs sg;
    auto* c_sg = app.add_subcommand("smallgaps", "small-gap bracket roots by degree");
    c_sg->add_option("--degree", sg.degree, "single degree m");
    c_sg->add_option("--degree-max", sg.degree_max, "degrees 1..m")->check(CLI::PositiveNumber);
    c_sg->add_option("--tol", sg.tol, "root tolerance")->check(CLI::PositiveNumber);
    c_sg->add_option("--tail", sg.tail, "tail constant")->check(CLI::IsMember({"square", "cube"}));
    c_sg->add_option("--format", sg.format)->check(CLI::IsMember(formats));

    LargeGapArgs lg;
    auto* c_lg = app.add_subcommand("largegap", "optimal rotation and large-gap constant");
    c_lg->add_option("--c0", lg.c0);
    c_lg->add_option("--c1", lg.c1);
    c_lg->add_option("--c2", lg.c2);
    c_lg->add_option("--format", lg.format)->check(CLI::IsMember(formats));

    MomentArgs mo;
    mo.c.format = "json";
    auto* c_mo = app.add_subcommand("moments", "dyadic moment of derivatives against the main term");
    add_form_options(c_mo, mo.c);
    c_mo->add_option("--T", mo.T)->required();
    c_mo->add_option("--mu", mo.mu)->required()->check(CLI::Range(0, 2));
    c_mo->add_option("--nu", mo.nu)->required()->check(CLI::Range(0, 2));
    c_mo->add_option("--node-budget", mo.node_budget)->check(CLI::PositiveNumber);
    c_mo->add_option("--panel-fraction", mo.panel_fraction)->check(CLI::PositiveNumber);
    c_mo->add_option("--format", mo.c.format)->check(CLI::IsMember({"csv", "json"}));

    ShiftedArgs sh;
    sh.c.format = "json";
    auto* c_sh = app.add_subcommand("shifted-moments", "shifted second moment against its prediction");
    add_form_options(c_sh, sh.c);
    c_sh->add_option("--T", sh.T)->required();
    c_sh->add_option("--alpha", sh.alpha, "re or re,im")->required();
    c_sh->add_option("--beta", sh.beta, "re or re,im")->required();
    c_sh->add_flag("--scaled", sh.scaled, "shifts are given in units of 1/log T");
    c_sh->add_option("--format", sh.c.format)->check(CLI::IsMember({"csv", "json"}));

    ZerosArgs ze;
    auto* c_ze = app.add_subcommand("zeros", "scan zeros into the cache, count against the main term");
    add_form_options(c_ze, ze.c);
    c_ze->add_option("--tmin", ze.tmin);
    c_ze->add_option("--tmax", ze.tmax)->required();
    c_ze->add_option("--refine-tol", ze.refine_tol)->check(CLI::PositiveNumber);
    c_ze->add_option("--output", ze.output, "also write the ordinates as CSV");
    c_ze->add_option("--format", ze.c.format)->check(CLI::IsMember(formats));

    GapsArgs ga;
    auto* c_ga = app.add_subcommand("gaps", "normalized gap statistics");
    add_form_options(c_ga, ga.c);
    c_ga->add_option("--tmin", ga.tmin);
    c_ga->add_option("--tmax", ga.tmax)->required();
    c_ga->add_option("--lo", ga.lo, "left end of the gap window");
    c_ga->add_option("--hi", ga.hi, "right end of the gap window");
    c_ga->add_option("--normalization", ga.normalization)->check(CLI::IsMember({"density", "literal"}));
    c_ga->add_option("--format", ga.c.format)->check(CLI::IsMember(formats));

    PairArgs pc;
    pc.c.format = "csv";
    auto* c_pc = app.add_subcommand("paircorr", "form factor curve and kernel identities");
    add_form_options(c_pc, pc.c, false);
    c_pc->add_option("--T", pc.T)->required();
    c_pc->add_option("--m", pc.m, "degree in the normalization (default: the spec's)");
    c_pc->add_option("--alpha-min", pc.alpha_min);
    c_pc->add_option("--alpha-max", pc.alpha_max);
    c_pc->add_option("--alpha-step", pc.alpha_step)->check(CLI::PositiveNumber);
    c_pc->add_option("--output", pc.output, "CSV file for the curve");
    c_pc->add_flag("--kernels", pc.kernels, "also report the convolution identities");
    c_pc->add_option("--format", pc.c.format)->check(CLI::IsMember({"csv", "json"}));

    HypArgs hy;
    hy.c.format = "csv";
    auto* c_hy = app.add_subcommand("hypcheck", "prime-square sum ratio trajectory");
    add_form_options(c_hy, hy.c);
    c_hy->add_option("--x", hy.x)->check(CLI::PositiveNumber);
    c_hy->add_option("--format", hy.c.format)->check(CLI::IsMember({"csv", "json"}));

    CoeffArgs co;
    co.c.format = "csv";
    auto* c_co = app.add_subcommand("coeffs", "generate, cache and check a coefficient table");
    add_form_options(c_co, co.c);
    c_co->add_option("--N", co.N)->check(CLI::PositiveNumber);
    c_co->add_option("--show", co.show);
    c_co->add_option("--format", co.c.format)->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        set_worker_count(workers);
        if (*c_co) {
            if (co.c.terms) co.N = *co.c.terms;
            co.c.terms = co.N;
        }
        if (*c_sg) return cmd_smallgaps(sg);
        if (*c_lg) return cmd_largegap(lg);
        if (*c_mo) return cmd_moments(mo);
        if (*c_sh) return cmd_shifted(sh);
        if (*c_ze) return cmd_zeros(ze);
        if (*c_ga) return cmd_gaps(ga);
        if (*c_pc) return cmd_paircorr(pc);
        if (*c_hy) return cmd_hypcheck(hy);
        if (*c_co) return cmd_coeffs(co);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ShapeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const VerificationError& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return kVerify;
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return kBudget;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return kBudget;
    } catch (const CacheError& e) {
        std::cerr << "cache error: " << e.what() << '\n';
        return kCache;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kUsage;
}
