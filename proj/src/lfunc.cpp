#include "zerogap/lfunc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zerogap/errors.hpp"
#include "zerogap/special_functions.hpp"

namespace zerogap {

namespace {

bool conj_closed(const std::vector<cplx>& mu) {
    std::vector<bool> used(mu.size(), false);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (used[i]) continue;
        bool hit = false;
        for (std::size_t j = 0; j < mu.size(); ++j) {
            if (used[j] || (j == i && mu[i].imag() != 0.0)) continue;
            if (std::abs(mu[j] - std::conj(mu[i])) < 1e-14) {
                used[i] = used[j] = true;
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

double wrap_pi(double x) {
    double y = std::remainder(x, 2.0 * kPi);
    return y;
}

}  // namespace

void FunctionalEquationData::validate() const {
    if (!(Q > 0.0) || !std::isfinite(Q)) throw ShapeError("fe: Q must be positive");
    if (weights.empty() || weights.size() != shifts.size())
        throw ShapeError("fe: weights and shifts must be non-empty and of equal length");
    double sw = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw ShapeError("fe: gamma weights must be positive");
        sw += w;
    }
    for (cplx m : shifts)
        if (m.real() < 0.0) throw ShapeError("fe: gamma shifts need Re(mu) >= 0");
    if (std::fabs(degree - 2.0 * sw) > 1e-14) throw ShapeError("fe: degree must equal 2 sum w_j");
    if (!conj_closed(shifts)) throw ShapeError("fe: shifts not closed under conjugation");
    if (std::fabs(std::abs(epsilon) - 1.0) > 1e-14) throw ShapeError("fe: |epsilon| must be 1");
    if (level < 1) throw ShapeError("fe: level must be a positive integer");
}

void LFunctionSpec::validate() const {
    fe.validate();
    if (!coefficients || coefficients->size() == 0)
        throw ShapeError("spec " + name + ": no coefficients");
    if (std::abs((*coefficients)(1) - cplx(1.0)) > 1e-14)
        throw ShapeError("spec " + name + ": a(1) must be 1");
    if (self_dual)
        for (cplx a : coefficients->values)
            if (a.imag() != 0.0) throw ShapeError("spec " + name + ": self-dual needs real a(n)");
}

LFunctionSpec zeta_spec(std::size_t N) {
    LFunctionSpec s;
    s.name = "zeta";
    s.fe.Q = 1.0 / std::sqrt(kPi);
    s.fe.weights = {0.5};
    s.fe.shifts = {0.0};
    s.fe.degree = 1.0;
    s.coefficients = std::make_shared<CoefficientTable>(gen_zeta(N));
    s.residue_cf = 1.0;
    s.pole_residue = 1.0;
    s.validate();
    return s;
}

LFunctionSpec delta_spec(std::shared_ptr<const CoefficientTable> table) {
    LFunctionSpec s;
    s.name = "delta";
    s.fe.Q = 1.0 / kPi;
    s.fe.weights = {0.5, 0.5};
    s.fe.shifts = {2.75, 3.25};
    s.fe.degree = 2.0;
    s.coefficients = std::move(table);
    s.validate();
    return s;
}

LFunctionSpec delta_spec(std::size_t N) {
    return delta_spec(std::make_shared<CoefficientTable>(gen_delta(N)));
}

LFunctionSpec delta_spec_literal_shifts(std::shared_ptr<const CoefficientTable> table) {
    LFunctionSpec s = delta_spec(std::move(table));
    s.name = "delta-literal";
    s.fe.shifts = {5.5, 6.5};
    s.validate();
    return s;
}

LFunctionSpec dual_spec(const LFunctionSpec& spec) {
    if (spec.self_dual) return spec;
    LFunctionSpec d = spec;
    d.name = spec.name + "-dual";
    auto tbl = std::make_shared<CoefficientTable>(*spec.coefficients);
    for (cplx& a : tbl->values) a = std::conj(a);
    tbl->name += "-dual";
    d.coefficients = tbl;
    for (cplx& m : d.fe.shifts) m = std::conj(m);
    d.fe.epsilon = std::conj(spec.fe.epsilon);
    d.pole_residue = std::conj(spec.pole_residue);
    return d;
}

cplx log_gamma_factor(const FunctionalEquationData& fe, cplx s, bool dual) {
    cplx v = s * std::log(fe.Q);
    for (std::size_t j = 0; j < fe.weights.size(); ++j) {
        cplx mu = dual ? std::conj(fe.shifts[j]) : fe.shifts[j];
        v += log_gamma(fe.weights[j] * s + mu);
    }
    return v;
}

cplx gamma_factor_log_derivative(const FunctionalEquationData& fe, cplx s, bool dual) {
    cplx v = std::log(fe.Q);
    for (std::size_t j = 0; j < fe.weights.size(); ++j) {
        cplx mu = dual ? std::conj(fe.shifts[j]) : fe.shifts[j];
        v += fe.weights[j] * digamma(fe.weights[j] * s + mu);
    }
    return v;
}

cplx log_phi_factor(const LFunctionSpec& spec, cplx s) {
    return log_gamma_factor(spec.fe, 1.0 - s, true) - log_gamma_factor(spec.fe, s, false);
}

cplx phi_factor(const LFunctionSpec& spec, cplx s) { return std::exp(log_phi_factor(spec, s)); }

cplx completed_lambda(const LFunctionSpec& spec, cplx s, cplx l_value) {
    if (l_value == cplx(0.0)) return 0.0;
    return std::exp(log_gamma_factor(spec.fe, s) + std::log(l_value));
}

double functional_equation_residual(const LFunctionSpec& spec, cplx s, cplx l_value,
                                    cplx l_dual_value) {
    cplx a = completed_lambda(spec, s, l_value);
    cplx b = 0.0;
    if (l_dual_value != cplx(0.0))
        b = spec.fe.epsilon *
            std::exp(log_gamma_factor(spec.fe, 1.0 - s, true) + std::log(l_dual_value));
    return std::abs(a - b);
}

double rotation_phase(const LFunctionSpec& spec, double t) {
    return log_gamma_factor(spec.fe, cplx(0.5, t)).imag() - 0.5 * std::arg(spec.fe.epsilon);
}

double rotation_phase_derivative(const LFunctionSpec& spec, double t) {
    return gamma_factor_log_derivative(spec.fe, cplx(0.5, t)).real();
}

cplx rotated_value(const LFunctionSpec& spec, double t, cplx l_value) {
    return std::polar(1.0, rotation_phase(spec, t)) * l_value;
}

double hardy_z(const LFunctionSpec& spec, double t, cplx l_value) {
    if (!spec.self_dual) throw DomainError("hardy_z: spec is not self-dual");
    return rotated_value(spec, t, l_value).real();
}

RotationTracker::RotationTracker(const LFunctionSpec& spec, double max_step)
    : spec_(&spec), fixed_step_(max_step) {}

double RotationTracker::max_step(double t) const {
    if (fixed_step_ > 0.0) return fixed_step_;
    double q = spec_->fe.level;
    return kPi / (4.0 * std::log(std::sqrt(q) * (std::fabs(t) + 10.0)));
}

double RotationTracker::phase(double t) {
    if (!started_) {
        // anchor at 0+: omega^2 = 1 / (eps Phi(1/2)) with the principal argument
        last_t_ = 0.0;
        last_phase_ = -0.5 * std::arg(spec_->fe.epsilon * phi_factor(*spec_, cplx(0.5, 0.0)));
        started_ = true;
    }
    double dt = t - last_t_;
    double step = max_step(std::max(std::fabs(t), std::fabs(last_t_)));
    int pieces = 1;
    if (std::fabs(dt) > step) {
        // only the very first move away from the anchor may be subdivided
        if (last_t_ != 0.0)
            throw BranchError("rotation tracker: step " + std::to_string(std::fabs(dt)) +
                              " exceeds branch-tracking bound " + std::to_string(step));
        pieces = static_cast<int>(std::ceil(std::fabs(dt) / step));
    }
    for (int k = 1; k <= pieces; ++k) {
        double tk = last_t_ + dt * k / pieces;
        double tprev = last_t_ + dt * (k - 1) / pieces;
        // omega^2 = (eps Phi)^-1; follow arg(omega^2) / 2 by unwrapping increments
        double a1 = -std::arg(spec_->fe.epsilon * phi_factor(*spec_, cplx(0.5, tk)));
        double a0 = -std::arg(spec_->fe.epsilon * phi_factor(*spec_, cplx(0.5, tprev)));
        last_phase_ += 0.5 * wrap_pi(a1 - a0);
    }
    last_t_ = t;
    return last_phase_;
}

double RotationTracker::z(double t, cplx l_value) {
    return (std::polar(1.0, phase(t)) * l_value).real();
}

double analytic_conductor(const LFunctionSpec& spec, cplx s) {
    if (spec.fe.shifts.size() != 2)
        throw ShapeError("analytic_conductor: spec " + spec.name + " is not GL(2) shaped");
    double q = spec.fe.level;
    return q / (4.0 * kPi * kPi) * std::abs(s + 2.0 * spec.fe.shifts[0]) *
           std::abs(s + 2.0 * spec.fe.shifts[1]);
}

double zero_count_main_term(const LFunctionSpec& spec, double T) {
    if (T < 1.0) throw DomainError("zero_count_main_term: T must be >= 1");
    if (spec.is_control())
        return T / (2.0 * kPi) * std::log(T / (2.0 * kPi * std::exp(1.0))) + 7.0 / 8.0;
    double q = spec.fe.level;
    return T / kPi * std::log(std::sqrt(q) * T / (2.0 * kPi * std::exp(1.0)));
}

cplx zeta_euler_maclaurin(cplx s, int N, int terms) {
    if (s == cplx(1.0)) throw PoleError("zeta: pole at s = 1");
    // B_{2k} / (2k)!
    static const std::array<double, 15> b = {
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0,
        43867.0 / 5109094217170944000.0,
        -174611.0 / 802857662698291200000.0,
        77683.0 / 14101100039391805440000.0,
        -236364091.0 / 1693824136731743669452800000.0,
        657931.0 / 186134520519971831808000000.0,
        -3392780147.0 / 37893265687455865519472640000000.0,
        1723168255201.0 / 759790291646040068357842010112000000.0,
    };
    if (N <= 0) N = 20 + static_cast<int>(std::fabs(s.imag()));
    if (terms <= 0 || terms > static_cast<int>(b.size())) terms = static_cast<int>(b.size());
    cplx sum = 0.0;
    for (int n = N - 1; n >= 1; --n) sum += std::exp(-s * std::log(static_cast<double>(n)));
    double lN = std::log(static_cast<double>(N));
    cplx Ns = std::exp(-s * lN);
    sum += Ns * static_cast<double>(N) / (s - 1.0) + 0.5 * Ns;
    // s (s+1) ... (s+2k-2) N^{-s-2k+1}
    cplx poch = s;
    cplx pw = Ns / static_cast<double>(N);
    for (int k = 0; k < terms; ++k) {
        sum += b[k] * poch * pw;
        poch *= (s + (2.0 * k + 1.0)) * (s + (2.0 * k + 2.0));
        pw /= static_cast<double>(N) * N;
    }
    return sum;
}

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_real(const std::string& v, const std::string& key) {
    if (trim(v) == "pi") return kPi;
    std::istringstream is(v);
    is.imbue(std::locale::classic());
    double x;
    if (!(is >> x)) throw ShapeError("registry: bad number for " + key + ": " + v);
    std::string rest;
    if (is >> rest) {
        if (rest == "/" || rest.front() == '/') {
            // a / b or a/b
            std::string den = rest == "/" ? "" : rest.substr(1);
            if (den.empty()) is >> den;
            return x / parse_real(den, key);
        }
        throw ShapeError("registry: trailing text for " + key + ": " + v);
    }
    return x;
}

// "x" or "(re,im)"
cplx parse_complex(const std::string& v, const std::string& key) {
    std::string t = trim(v);
    if (!t.empty() && t.front() == '(') {
        if (t.back() != ')') throw ShapeError("registry: bad complex for " + key);
        auto comma = t.find(',');
        if (comma == std::string::npos) throw ShapeError("registry: bad complex for " + key);
        return {parse_real(t.substr(1, comma - 1), key),
                parse_real(t.substr(comma + 1, t.size() - comma - 2), key)};
    }
    return parse_real(t, key);
}

std::vector<std::string> split_list(const std::string& v) {
    // commas inside parentheses belong to complex numbers
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : v) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if ((c == ',' || c == ';') && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ShapeError("registry: bad boolean for " + key + ": " + v);
}

}  // namespace

SpecRegistry::SpecRegistry() = default;

void SpecRegistry::add(LFunctionSpec spec) {
    spec.validate();
    specs_[spec.name] = std::move(spec);
}

void SpecRegistry::load_text(const std::string& text, const std::string& base_dir) {
    std::map<std::string, std::string> block;
    auto flush = [&] {
        if (block.empty()) return;
        static const std::vector<std::string> known = {
            "name",  "Q",       "weights",    "shifts",   "epsilon",    "level",
            "degree", "coefficients", "N",    "self_dual", "residue_cf", "pole_residue"};
        for (auto& [k, v] : block)
            if (std::find(known.begin(), known.end(), k) == known.end())
                throw ShapeError("registry: unknown key '" + k + "'");
        for (const char* req : {"name", "Q", "weights", "shifts", "coefficients"})
            if (!block.count(req)) throw ShapeError(std::string("registry: missing key ") + req);
        LFunctionSpec s;
        s.name = block["name"];
        s.fe.Q = parse_real(block["Q"], "Q");
        for (auto& w : split_list(block["weights"])) s.fe.weights.push_back(parse_real(w, "weights"));
        for (auto& m : split_list(block["shifts"])) s.fe.shifts.push_back(parse_complex(m, "shifts"));
        double sw = 0.0;
        for (double w : s.fe.weights) sw += w;
        s.fe.degree = block.count("degree") ? parse_real(block["degree"], "degree") : 2.0 * sw;
        if (block.count("epsilon")) s.fe.epsilon = parse_complex(block["epsilon"], "epsilon");
        if (block.count("level")) {
            double l = parse_real(block["level"], "level");
            if (l != std::floor(l) || l < 1) throw ShapeError("registry: level must be a positive integer");
            s.fe.level = static_cast<int>(l);
        }
        std::size_t N = 0;
        if (block.count("N")) N = static_cast<std::size_t>(parse_real(block["N"], "N"));
        const std::string& src = block["coefficients"];
        int deg = s.fe.degree < 1.5 ? 1 : 2;
        if (src == "zeta") {
            s.coefficients = std::make_shared<CoefficientTable>(gen_zeta(N ? N : 200000));
        } else if (src == "delta") {
            s.coefficients = std::make_shared<CoefficientTable>(gen_delta(N ? N : 200000));
        } else {
            std::filesystem::path p(src);
            if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
            s.coefficients =
                std::make_shared<CoefficientTable>(load_coefficient_file(p.string(), s.name, deg));
        }
        s.self_dual = block.count("self_dual") ? parse_bool(block["self_dual"], "self_dual") : true;
        if (block.count("residue_cf")) s.residue_cf = parse_real(block["residue_cf"], "residue_cf");
        if (block.count("pole_residue"))
            s.pole_residue = parse_complex(block["pole_residue"], "pole_residue");
        add(std::move(s));
        block.clear();
    };
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) {
            flush();
            continue;
        }
        if (line.front() == '[') {
            flush();
            if (line.back() != ']') throw ShapeError("registry: bad header at line " + std::to_string(lineno));
            block["name"] = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ShapeError("registry: expected key = value at line " + std::to_string(lineno));
        std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (block.count(k) && !(k == "name" && block[k] == v))
            throw ShapeError("registry: duplicate key '" + k + "' at line " + std::to_string(lineno));
        block[k] = v;
    }
    flush();
}

void SpecRegistry::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("registry: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    load_text(ss.str(), std::filesystem::path(path).parent_path().string());
}

const LFunctionSpec& SpecRegistry::get(const std::string& name) const {
    auto it = specs_.find(name);
    if (it == specs_.end()) throw ShapeError("registry: unknown spec '" + name + "'");
    return it->second;
}

bool SpecRegistry::contains(const std::string& name) const { return specs_.count(name) > 0; }

std::vector<std::string> SpecRegistry::names() const {
    std::vector<std::string> out;
    for (auto& [k, v] : specs_) out.push_back(k);
    return out;
}

}  // namespace zerogap
