#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "zerogap/coefficients.hpp"
#include "zerogap/errors.hpp"
#include "zerogap/moments.hpp"
#include "zerogap/special_functions.hpp"

using namespace zerogap;

namespace {
const LFunctionSpec& delta() {
    static LFunctionSpec s = [] {
        LFunctionSpec d = delta_spec(250000);
        d.residue_cf = residue_estimate(rankin_selberg_table(*d.coefficients), 200000).value;
        return d;
    }();
    return s;
}
const LFunctionSpec& zeta() {
    static LFunctionSpec s = [] {
        LFunctionSpec z = zeta_spec(250000);
        z.residue_cf = 1.0;
        return z;
    }();
    return s;
}
}  // namespace

TEST_CASE("main coefficient") {
    CHECK(moment_main_coefficient(0, 0) == Rational{2, 1});
    CHECK(moment_main_coefficient(1, 0) == Rational{-2, 1});
    CHECK(moment_main_coefficient(1, 1) == Rational{8, 3});
    CHECK(moment_main_coefficient(2, 2) == Rational{32, 5});
    CHECK(moment_main_coefficient(0, 3) == Rational{-4, 1});
    CHECK_THROWS_AS(moment_main_coefficient(-1, 0), DomainError);
}

TEST_CASE("predicted moment") {
    double T = 300.0;
    double r = predicted_moment(0.5, 2.0 * T, 1, 1) / predicted_moment(0.5, T, 1, 1);
    CHECK(r == doctest::Approx(2.0 * std::pow(std::log(2.0 * T) / std::log(T), 3)).epsilon(1e-13));
    CHECK(predicted_moment(0.5, T, 1, 0) < 0.0);
    CHECK(predicted_moment(0.5, T, 1, 1) > 0.0);
    LFunctionSpec bare = delta_spec(100);
    CHECK_THROWS_AS(predicted_moment(bare, 100.0, 0, 0), DomainError);
}

TEST_CASE("series in the shift and its closed form") {
    double cf = 0.7;
    CHECK(f_series(cf, 0.0, 50.0, 10).real() == doctest::Approx(cf * 50.0 * 2.0 * std::log(50.0)));
    cplx x = 0.1;
    double T = std::exp(1.0);
    cplx s = f_series(1.0, x, T, 30);
    CHECK(std::abs(s - T * (1.0 - std::exp(-0.2)) / 0.1) < 1e-12);
    CHECK(std::abs(f_series(cf, cplx(0.03, 0.02), 200.0, 60) - f_series_closed(cf, cplx(0.03, 0.02), 200.0)) <
          1e-9 * std::abs(f_series_closed(cf, cplx(0.03, 0.02), 200.0)));
    // first derivative at zero is -2 c_f T (log T)^2
    double h = 1e-6;
    double d1 = (f_series_closed(cf, h, 200.0) - f_series_closed(cf, -h, 200.0)).real() / (2.0 * h);
    CHECK(d1 == doctest::Approx(-2.0 * cf * 200.0 * std::pow(std::log(200.0), 2)).epsilon(1e-7));
}

TEST_CASE("zeta mean square against the classical main term") {
    MomentReport r = numeric_moment(zeta(), 200.0, 0, 0);
    double classical = zeta_mean_square_main_term(200.0);
    CHECK(std::fabs(r.numeric.real() / classical - 1.0) < 0.25);
    CHECK(std::fabs(r.numeric.imag()) <= 1e-8 * r.numeric.real());
    CHECK(r.panels * 10 == r.nodes);
}

TEST_CASE("conjugate symmetry of mixed moments") {
    EvaluationContext ctx(delta(), 50.0, 100.0);
    MomentReport a = numeric_moment(ctx, 50.0, 1, 0);
    MomentReport b = numeric_moment(ctx, 50.0, 0, 1);
    CHECK(std::abs(a.numeric - std::conj(b.numeric)) <= 1e-8 * std::abs(a.numeric));
    MomentReport c = numeric_moment(ctx, 50.0, 1, 1);
    CHECK(std::fabs(c.ratio.imag()) <= 0.1 * std::abs(c.ratio));
    CHECK(c.numeric.real() > 0.0);
}

TEST_CASE("quadrature converges and respects its budget") {
    EvaluationContext ctx(delta(), 200.0, 400.0);
    MomentReport a = numeric_moment(ctx, 200.0, 0, 0);
    MomentOptions fine;
    fine.panel_fraction = 0.25;
    MomentReport b = numeric_moment(ctx, 200.0, 0, 0, fine);
    CHECK(b.nodes >= 2 * a.nodes - 10);
    CHECK(std::fabs(b.numeric.real() / a.numeric.real() - 1.0) < 0.005);
    CHECK(a.ratio.real() > 0.5);
    CHECK(a.ratio.real() < 1.5);
    MomentOptions tight;
    tight.node_budget = 100;
    CHECK_THROWS_AS(numeric_moment(ctx, 200.0, 0, 0, tight), BudgetError);
    CHECK_THROWS_AS(numeric_moment(ctx, 100.0, 0, 0), DomainError);
}

TEST_CASE("moment report JSON") {
    EvaluationContext ctx(zeta(), 20.0, 40.0);
    MomentReport r = numeric_moment(ctx, 20.0, 0, 0);
    auto j = nlohmann::json::parse(to_json(r));
    CHECK(j["T"].get<double>() == 20.0);
    CHECK(j["provenance"]["spec"] == "zeta");
    CHECK(j["provenance"]["coefficient_hash"].get<std::string>().size() == 40);
    CHECK(j["provenance"]["c_f"].get<double>() == 1.0);
}

TEST_CASE("shifted prediction") {
    double T = 200.0, L = std::log(T);
    cplx a = 0.3 / L;
    cplx p1 = shifted_moment_prediction(delta(), T, a, 0.1 / L, *delta().residue_cf);
    cplx p2 = shifted_moment_prediction(delta(), T, 0.1 / L, a, *delta().residue_cf);
    CHECK(std::abs(p1 - p2) < 1e-12 * std::abs(p1));
    CHECK_THROWS_AS(shifted_moment_prediction(delta(), T, a, -a, 1.0), DomainError);
    CHECK_THROWS_AS(shifted_moment_prediction(delta(), T, 3.0 / L, 0.0, 1.0), DomainError);
    // the two poles cancel as the shift shrinks
    double prev = 0.0;
    for (double k : {0.1, 0.05, 0.025}) {
        cplx d = k / L;
        cplx v = shifted_moment_prediction(zeta(), T, d, 0.0, 1.0) + shifted_moment_prediction(zeta(), T, -d, 0.0, 1.0);
        CHECK(std::abs(v) < 10.0 * T * L);
        if (prev != 0.0) CHECK(std::fabs(v.real() - prev) < 0.01 * std::fabs(prev));
        prev = v.real();
    }
}

TEST_CASE("shifted moment against its prediction") {
    double T = 200.0;
    cplx s = 0.5 / std::log(T);
    EvaluationContext ctx(delta(), T, 2.0 * T);
    cplx num = shifted_moment_numeric(ctx, T, s, s);
    cplx pred = shifted_moment_prediction(delta(), T, s, s, *delta().residue_cf);
    CHECK(std::abs(num / pred - 1.0) < 0.5);
}

TEST_CASE("mean value theorem for Dirichlet polynomials") {
    MeanValueCheck one = mv_meanvalue_check({1.0}, 123.0);
    CHECK(one.lhs == doctest::Approx(123.0).epsilon(1e-12));
    CHECK(one.diag == 123.0);
    CHECK(one.bound == 1.0);
    MeanValueCheck two = mv_meanvalue_check({1.0, 1.0}, 1000.0);
    CHECK(std::fabs(two.lhs - 2000.0) <= 10.0 * 3.0);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> a;
    while (a.size() < 20) {
        cplx z(u(rng), u(rng));
        if (std::abs(z) <= 1.0) a.push_back(z);
    }
    double prev = 1e9;
    for (double H : {1e2, 1e3, 1e4}) {
        MeanValueCheck m = mv_meanvalue_check(a, H);
        double dev = std::fabs(m.lhs / m.diag - 1.0);
        CHECK(dev < prev);
        prev = dev;
    }
}

TEST_CASE("weighted mean value with a smooth weight") {
    std::vector<cplx> a = {1.0, 0.5, cplx(0.0, 0.25), -0.3};
    double x = 0.2 / std::log(1000.0);
    auto g = [&](double t) { return std::pow(t / (2.0 * kPi), -2.0 * x); };
    MeanValueCheck m = weighted_meanvalue_check(a, 1000.0, 2000.0, g);
    CHECK(std::fabs(m.lhs - m.diag) <= 10.0 * m.bound);
}

TEST_CASE("smoothed Rankin-Selberg sums against their main terms") {
    double T = 1e4, L = std::log(T);
    SumCheck w = weighted_sum_check(zeta(), T, 0.1 / L, 0.1 / L, 1.0);
    CHECK(std::abs(w.lhs - w.rhs) < 1e-2);
    SumCheck t = truncated_sum_check(zeta(), T, 0.15 / L, 0.15 / L, 1.0);
    CHECK(std::abs(t.lhs - t.rhs) < 0.02 * std::abs(t.lhs));

    // small shifts: sum_{n <= T} 1/n against log T + gamma from the pole pair
    SumCheck tiny = truncated_sum_check(zeta(), T, 1e-5, 0.0, 1.0);
    CHECK(tiny.lhs.real() == doctest::Approx(std::log(T) + kEulerGamma).epsilon(1e-3));
    CHECK(tiny.rhs.real() == doctest::Approx(tiny.lhs.real()).epsilon(0.1));

    SumCheck lo = truncated_sum_check(zeta(), 5000.0, 0.15 / L, 0.15 / L, 1.0);
    CHECK(lo.lhs.real() < t.lhs.real());
    CHECK_THROWS_AS(weighted_sum_check(zeta(), T, 0.1 / L, -0.1 / L, 1.0), DomainError);
    LFunctionSpec small = zeta_spec(1000);
    CHECK_THROWS_AS(weighted_sum_check(small, T, 0.1 / L, 0.1 / L, 1.0), ResourceError);
}

TEST_CASE("Delta smoothed sums") {
    double T = 1e4, L = std::log(T);
    double cf = *delta().residue_cf;
    SumCheck w = weighted_sum_check(delta(), T, 0.1 / L, 0.1 / L, cf);
    CHECK(std::abs(w.lhs - w.rhs) < 0.05 * std::abs(w.lhs));
    // sum |a(n)|^2 n^{-3/4 + a} e^{-n/X} grows like X^{1/4 + a}
    for (double a : {0.0, 0.1}) {
        double prev = 0.0;
        for (double X : {1e2, 1e3, 1e4}) {
            double v = smoothed_square_sum(delta(), X, a) / std::pow(X, 0.25 + a);
            CHECK(v < 3.0);
            if (prev > 0.0) CHECK(v == doctest::Approx(prev).epsilon(0.2));
            prev = v;
        }
    }
}
