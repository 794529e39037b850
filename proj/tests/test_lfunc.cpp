#include <doctest.h>

#include <cmath>
#include <random>

#include "zerogap/afe.hpp"
#include "zerogap/errors.hpp"
#include "zerogap/lfunc.hpp"
#include "zerogap/special_functions.hpp"

using namespace zerogap;

namespace {
const LFunctionSpec& delta() {
    static LFunctionSpec s = delta_spec(20000);
    return s;
}
const LFunctionSpec& zeta() {
    static LFunctionSpec s = zeta_spec(20000);
    return s;
}
}  // namespace

TEST_CASE("built-in specs satisfy their invariants") {
    CHECK_NOTHROW(zeta().validate());
    CHECK_NOTHROW(delta().validate());
    CHECK(zeta().fe.degree == 1.0);
    CHECK(delta().fe.degree == 2.0);
    CHECK(zeta().is_control());
    CHECK_FALSE(delta().is_control());
    CHECK((*delta().coefficients)(1) == cplx(1.0, 0.0));
}

TEST_CASE("malformed functional equation data is rejected") {
    FunctionalEquationData fe = delta().fe;
    fe.degree = 3.0;
    CHECK_THROWS_AS(fe.validate(), ShapeError);
    fe = delta().fe;
    fe.epsilon = cplx(0.0, 1.1);
    CHECK_THROWS_AS(fe.validate(), ShapeError);
    fe = delta().fe;
    fe.shifts[0] = cplx(2.75, 1.0);  // partner missing
    CHECK_THROWS_AS(fe.validate(), ShapeError);
}

TEST_CASE("Phi reciprocal identity and unit modulus") {
    cplx s(0.3, 7.0);
    LFunctionSpec d = dual_spec(delta());
    CHECK(std::abs(phi_factor(delta(), s) * phi_factor(d, 1.0 - s) - 1.0) < 1e-10);
    CHECK(std::abs(std::abs(phi_factor(delta(), cplx(0.5, 10.0))) - 1.0) < 1e-10);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> re(0.01, 0.99), im(1.0, 50.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        cplx z(re(rng), (i % 2 ? 1.0 : -1.0) * im(rng));
        worst = std::max(worst, std::abs(phi_factor(zeta(), z) * phi_factor(zeta(), 1.0 - z) - 1.0));
        worst = std::max(worst, std::abs(phi_factor(delta(), z) * phi_factor(d, 1.0 - z) - 1.0));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("Stirling form of the gamma ratio") {
    const LFunctionSpec& s = delta();
    LFunctionSpec d = dual_spec(s);
    double worst = 0.0;
    for (double t = 50.0; t <= 500.0; t += 25.0) {
        cplx a = 0.05, b = 0.05;
        cplx lhs = phi_factor(s, cplx(0.5, t) + a) * phi_factor(d, cplx(0.5, -t) + b);
        cplx rhs = std::exp(-2.0 * (a + b) * std::log(s.fe.Q) - s.fe.degree * (a + b) * std::log(t / 2.0));
        worst = std::max(worst, std::abs(lhs / rhs - 1.0) * t);
    }
    CHECK(worst < 10.0);
}

TEST_CASE("completed zeta at s = 2") {
    cplx l = cplx(kPi * kPi / 6.0, 0.0);
    CHECK(std::abs(completed_lambda(zeta(), 2.0, l) - kPi / 6.0) < 1e-14);
}

TEST_CASE("functional equation residuals from the evaluator") {
    cplx s(0.4, 3.0);
    // L(0.4 + 3i) = L(1/2 - 0.1 + 3i); L(1 - s) = conj(L(0.6 + 3i))
    cplx ls = zeta_euler_maclaurin(s), lr = zeta_euler_maclaurin(1.0 - s);
    CHECK(functional_equation_residual(zeta(), s, ls, lr) < 1e-9);

    EvaluationContext c(delta(), 5.0, 40.0);
    cplx l = c.evaluate(9.0);
    CHECK(functional_equation_residual(delta(), cplx(0.5, 9.0), l, std::conj(l)) < 1e-8);
}

TEST_CASE("Delta gamma factor agrees with the single-gamma form") {
    // pi^-s Gamma(s/2 + 11/4) Gamma(s/2 + 13/4) = c (2 pi)^-s Gamma(s + 11/2) by duplication
    auto ratio = [&](const LFunctionSpec& s, cplx z) {
        return log_gamma_factor(s.fe, z) - (-z * std::log(2.0 * kPi) + log_gamma(z + 5.5));
    };
    cplx r0 = ratio(delta(), cplx(0.5, 0.0));
    for (cplx z : {cplx(0.5, 10.0), cplx(0.2, -3.0), cplx(0.9, 40.0)})
        CHECK(std::abs(ratio(delta(), z) - r0) < 1e-10);

    // the literal-shift variant does not reduce to a constant multiple
    LFunctionSpec lit = delta_spec_literal_shifts(delta().coefficients);
    cplx q0 = ratio(lit, cplx(0.5, 0.0));
    CHECK(std::abs(ratio(lit, cplx(0.5, 10.0)) - q0) > 1.0);
}

TEST_CASE("rotated function is real and keeps the modulus") {
    for (const LFunctionSpec* s : {&zeta(), &delta()}) {
        EvaluationContext c(*s, 5.0, 50.0);
        RotationTracker tr(*s);
        double worst = 0.0;
        for (double t = 5.0; t <= 50.0 + 1e-9; t += 0.05) {
            cplx l = c.evaluate(t);
            cplx z = rotated_value(*s, t, l);
            worst = std::max(worst, std::fabs(z.imag()) / (std::abs(z) + 1.0));
            CHECK(std::fabs(z.real() * z.real() - std::norm(l)) <= 1e-10 * (std::norm(l) + 1e-300));
            CHECK(std::fabs(tr.z(t, l) - hardy_z(*s, t, l)) < 1e-9 * (std::abs(l) + 1.0));
        }
        CHECK(worst < 1e-7);
    }
}

TEST_CASE("Hardy function changes sign at the first zeta zero") {
    EvaluationContext c(zeta(), 5.0, 20.0);
    double a = hardy_z(zeta(), 14.0, c.evaluate(14.0));
    double b = hardy_z(zeta(), 14.2, c.evaluate(14.2));
    CHECK(a * b < 0.0);
}

TEST_CASE("branch tracker refuses large steps") {
    RotationTracker tr(delta());
    CHECK_NOTHROW(tr.phase(5.0));
    CHECK_THROWS_AS(tr.phase(50.0), BranchError);
    CHECK(tr.max_step(100.0) == doctest::Approx(kPi / (4.0 * std::log(110.0))));
    LFunctionSpec nsd = delta();
    nsd.self_dual = false;
    CHECK_THROWS(hardy_z(nsd, 10.0, cplx(1.0, 0.0)));
}

TEST_CASE("analytic conductor") {
    LFunctionSpec lit = delta_spec_literal_shifts(delta().coefficients);
    CHECK(analytic_conductor(lit, 0.5) == doctest::Approx(11.5 * 13.5 / (4.0 * kPi * kPi)).epsilon(1e-12));
    double r = analytic_conductor(delta(), cplx(0.5, 100.0)) / analytic_conductor(delta(), cplx(0.5, 200.0));
    CHECK(r == doctest::Approx(0.25).epsilon(1e-3));
    LFunctionSpec q4 = delta();
    q4.fe.level = 4;
    CHECK(analytic_conductor(q4, 0.5) == doctest::Approx(4.0 * analytic_conductor(delta(), 0.5)));
    CHECK_THROWS_AS(analytic_conductor(zeta(), 0.5), ShapeError);
}

TEST_CASE("zero-count main term") {
    CHECK(zero_count_main_term(delta(), 50.0) == doctest::Approx(50.0 / kPi * std::log(50.0 / (2.0 * kPi * std::exp(1.0)))));
    CHECK(zero_count_main_term(delta(), 50.0) == doctest::Approx(17.10).epsilon(1e-3));
    CHECK(zero_count_main_term(zeta(), 50.0) == doctest::Approx(9.42278).epsilon(1e-6));
    double prev = zero_count_main_term(delta(), 2.0 * kPi * std::exp(1.0));
    for (double T = 20.0; T < 500.0; T += 10.0) {
        double v = zero_count_main_term(delta(), T);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("Euler-Maclaurin zeta") {
    CHECK(std::abs(zeta_euler_maclaurin(2.0) - kPi * kPi / 6.0) < 1e-14);
    CHECK(std::abs(zeta_euler_maclaurin(cplx(0.5, 20.0)) - cplx(0.429913860437843372, -1.06429144308058911)) < 1e-12);
    CHECK(std::abs(zeta_euler_maclaurin(cplx(0.5, 100.0)) - cplx(2.69261988568132409, -0.0203860296025981618)) < 1e-11);
}

TEST_CASE("spec registry parsing") {
    SpecRegistry reg;
    reg.load_text(R"(
# a twisted copy of Delta
[mydelta]
Q = 1/pi
weights = 1/2, 1/2
shifts = 11/4, 13/4
epsilon = 1
level = 1
degree = 2
coefficients = delta
N = 500

[myzeta]
Q = 0.5641895835477563
weights = 1/2
shifts = 0
epsilon = (1,0)
degree = 1
coefficients = zeta
N = 100
pole_residue = 1
residue_cf = 1
)");
    CHECK(reg.contains("mydelta"));
    CHECK(reg.get("mydelta").fe.Q == doctest::Approx(1.0 / kPi));
    CHECK(reg.get("mydelta").coefficients->size() == 500);
    CHECK(reg.get("myzeta").residue_cf.value() == 1.0);
    CHECK(reg.names().size() == 2);
    CHECK_THROWS_AS(reg.load_text("[x]\nQ = 1\nbogus = 3\n"), ShapeError);
    CHECK_THROWS(reg.get("nothere"));
}
