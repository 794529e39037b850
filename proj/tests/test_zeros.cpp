#include <doctest.h>

#include <cmath>
#include <fstream>
#include <filesystem>

#include "zerogap/errors.hpp"
#include "zerogap/special_functions.hpp"
#include "zerogap/zeros.hpp"

using namespace zerogap;

namespace {
const LFunctionSpec& delta() {
    static LFunctionSpec s = delta_spec(60000);
    return s;
}
const LFunctionSpec& zeta() {
    static LFunctionSpec s = zeta_spec(20000);
    return s;
}
const ZeroList& delta_zeros() {
    static ZeroList z = scan_zeros(delta(), 2.0, 130.0);
    return z;
}
}  // namespace

TEST_CASE("first zeta zeros") {
    ZeroList z = scan_zeros(zeta(), 2.0, 50.0);
    const double known[] = {14.1347251417346938, 21.0220396387715550, 25.0108575801456888,
                            30.4248761258595132, 32.9350615877391897, 37.5861781588256713,
                            40.9187190121474952, 43.3270732809149995, 48.0051508811671597,
                            49.7738324776723022};
    REQUIRE(z.ordinates.size() == 10);
    for (int i = 0; i < 10; ++i) CHECK(z.ordinates[i] == doctest::Approx(known[i]).epsilon(1e-10));
    CountComparison c = count_vs_main_term(z, zeta(), 50.0);
    CHECK(c.count == 10);
    CHECK(c.main == doctest::Approx(9.42278).epsilon(1e-6));
}

TEST_CASE("Delta zeros and counts") {
    const ZeroList& z = delta_zeros();
    CHECK(z.ordinates.front() == doctest::Approx(9.22237939992110).epsilon(1e-9));
    for (double T : {50.0, 100.0}) {
        CountComparison c = count_vs_main_term(z, delta(), T);
        CHECK(std::fabs(c.count - c.main) <= 3.0);
        CHECK(std::fabs(c.count - c.main) <= 2.0 * std::log(analytic_conductor(delta(), cplx(0.0, T))));
    }
    for (std::size_t i = 1; i < z.ordinates.size(); ++i) CHECK(z.ordinates[i] > z.ordinates[i - 1]);
}

TEST_CASE("halving the scan step keeps every zero") {
    ScanOptions fine;
    fine.step = 0.5 * default_scan_step(delta(), 60.0);
    ZeroList a = scan_zeros(delta(), 20.0, 60.0);
    ZeroList b = scan_zeros(delta(), 20.0, 60.0, fine);
    CHECK(b.ordinates.size() >= a.ordinates.size());
    for (double g : a.ordinates) {
        bool found = false;
        for (double h : b.ordinates) found = found || std::fabs(g - h) < 1e-8;
        CHECK(found);
    }
}

TEST_CASE("window splitting does not change the result") {
    ScanOptions one, many;
    one.windows = 1;
    many.windows = 5;
    ZeroList a = scan_zeros(delta(), 20.0, 80.0, one);
    ZeroList b = scan_zeros(delta(), 20.0, 80.0, many);
    REQUIRE(a.ordinates.size() == b.ordinates.size());
    for (std::size_t i = 0; i < a.ordinates.size(); ++i) CHECK(a.ordinates[i] == doctest::Approx(b.ordinates[i]).epsilon(1e-12));
}

TEST_CASE("normalized gaps") {
    GapStatistics g = gap_statistics(delta_zeros(), delta(), 60.0, 120.0);
    CHECK(g.mean_gap == doctest::Approx(1.0).epsilon(0.1));
    GapStatistics w = gap_statistics(delta_zeros(), delta(), 20.0, 120.0);
    CHECK(w.mu_hat < 1.0);
    CHECK(w.lambda_hat > 1.0);
    GapStatistics lit = gap_statistics(delta_zeros(), delta(), 60.0, 120.0, GapNormalization::kLiteral);
    CHECK(lit.mean_gap > g.mean_gap);

    ZeroList two;
    double g1 = 50.0;
    two.ordinates = {g1, g1 + kPi / std::log(g1 / (2.0 * kPi))};
    GapStatistics one = gap_statistics(two, delta());
    CHECK(one.normalized_gaps.at(0) == doctest::Approx(1.0).epsilon(1e-12));
    two.ordinates = {g1, g1 + kPi / std::log(g1)};
    CHECK(gap_statistics(two, delta(), GapNormalization::kLiteral).normalized_gaps.at(0) ==
          doctest::Approx(1.0).epsilon(1e-12));

    ZeroList zz = scan_zeros(zeta(), 2.0, 120.0);
    GapStatistics zc = gap_statistics(zz, zeta(), 60.0, 120.0);
    CHECK(zc.control);
    CHECK(zc.lambda_hat >= 1.0);
    CHECK(zc.mu_hat <= 1.0);
}

TEST_CASE("Wirtinger inequality") {
    WirtingerInterval s = wirtinger_interval([](double x) { return std::sin(x); },
                                             [](double x) { return std::cos(x); }, 0.0, kPi);
    CHECK(s.lhs == doctest::Approx(kPi / 2.0).epsilon(1e-12));
    CHECK(s.rhs == doctest::Approx(kPi / 2.0).epsilon(1e-12));

    EvaluationContext ctx(delta(), 45.0, 105.0);
    auto w = wirtinger_check(ctx, delta_zeros(), {0.0, 0.5, 1.0}, 50.0, 50.0, 100.0);
    REQUIRE(w.size() == 3);
    for (const auto& row : w) {
        CHECK(row.size() > 30);
        for (const auto& iv : row) {
            CHECK(iv.converged);
            CHECK(iv.lhs <= iv.rhs * (1.0 + 1e-6));
        }
    }
}

TEST_CASE("zero cache round trip") {
    auto dir = std::filesystem::temp_directory_path() / "zerogap_zero_cache_test";
    std::filesystem::create_directories(dir);
    std::string path = (dir / "z.txt").string();
    ZeroList z = scan_zeros(delta(), 2.0, 40.0);
    write_zero_cache(z, path, "abc123");
    std::string hash;
    ZeroList back = read_zero_cache(path, &hash);
    CHECK(hash == "abc123");
    bool same = back.ordinates == z.ordinates;
    CHECK(same);
    CHECK(back.spec_name == z.spec_name);

    ZeroList more = scan_zeros(delta(), 40.0, 60.0);
    append_zero_cache(more, path);
    ZeroList ext = read_zero_cache(path);
    CHECK(ext.t_max == doctest::Approx(60.0));
    CHECK(ext.ordinates.size() == z.ordinates.size() + more.ordinates.size());

    {
        std::ofstream out(path, std::ios::app);
        out << "not-a-number\n";
    }
    CHECK_THROWS_AS(read_zero_cache(path), CacheError);
    std::filesystem::remove_all(dir);
}
