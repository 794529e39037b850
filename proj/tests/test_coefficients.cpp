#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "zerogap/coefficients.hpp"
#include "zerogap/errors.hpp"

using namespace zerogap;

TEST_CASE("tau from exact integer generation") {
    auto tau = ramanujan_tau(10, EtaStrategy::kSquaring);
    const long long expect[] = {1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920};
    for (int i = 0; i < 10; ++i) CHECK(static_cast<long long>(tau[i]) == expect[i]);
}

TEST_CASE("the three generation strategies agree bit for bit") {
    auto a = ramanujan_tau(10000, EtaStrategy::kSquaring);
    auto b = ramanujan_tau(10000, EtaStrategy::kJacobiCube);
    auto c = ramanujan_tau(3000, EtaStrategy::kPentagonal);
    bool same_ab = a == b;
    CHECK(same_ab);
    bool same_ac = std::equal(c.begin(), c.end(), a.begin());
    CHECK(same_ac);
}

TEST_CASE("large tau values survive the exact pipeline") {
    // tau(p^2) = tau(p)^2 - p^11 for a prime p
    auto tau = ramanujan_tau(40000, EtaStrategy::kSquaring);
    for (long long p : {2LL, 13LL, 199LL}) {
        int128 p11 = 1;
        for (int i = 0; i < 11; ++i) p11 *= p;
        CHECK(to_string(tau[p * p - 1]) == to_string(tau[p - 1] * tau[p - 1] - p11));
    }
    CHECK(parse_int128(to_string(tau[39999])) == tau[39999]);
    CHECK(to_string(static_cast<int128>(-1234567890123456789LL) * 1000) == "-1234567890123456789000");
}

TEST_CASE("Delta table: Deligne bound and multiplicativity") {
    CoefficientTable t = gen_delta(20000);
    CHECK(t(1) == cplx(1.0, 0.0));
    CHECK(t(2).real() == doctest::Approx(-24.0 / std::pow(2.0, 5.5)).epsilon(1e-14));
    CHECK(deligne_violation(t, t.size()) == 0);
    CHECK(multiplicativity_defect(t, 500) < 1e-12);
}

TEST_CASE("Delta generation refuses oversize requests") {
    CHECK_THROWS_AS(gen_delta(100, EtaStrategy::kSquaring, 50), ResourceError);
}

TEST_CASE("Satake parameters reconstruct prime powers") {
    CoefficientTable t = gen_delta(5000);
    for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17}) {
        SatakeLocal s = satake(t, p);
        CHECK(std::abs(s.alpha * s.beta - 1.0) < 1e-12);
        CHECK(std::abs(s.alpha) == doctest::Approx(1.0).epsilon(1e-12));
        std::int64_t q = p;
        for (int l = 1; q <= 5000; ++l, q *= p) {
            cplx sum = 0.0;
            for (int i = 0; i <= l; ++i) sum += std::pow(s.alpha, i) * std::pow(s.beta, l - i);
            CHECK(std::abs(sum - t(static_cast<std::size_t>(q))) < 1e-10);
        }
    }
}

TEST_CASE("zeta coefficients and their log coefficients") {
    CoefficientTable z = gen_zeta(1000);
    CHECK(z.degree == 1);
    CHECK(z(997) == cplx(1.0, 0.0));
    LogCoefficientTable lt = log_coefficients(z, 1000);
    // b(p^k) = 1/k for zeta, so upsilon(p^k) = log p
    CHECK(lt.upsilon[8].real() == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(lt.upsilon[6] == cplx(0.0, 0.0));
}

TEST_CASE("Hypothesis S ratio for zeta increases toward one") {
    CoefficientTable z = gen_zeta(100000);
    LogCoefficientTable lt = log_coefficients(z, 100000);
    double r3 = hypothesis_s_ratio(lt, 1e3), r4 = hypothesis_s_ratio(lt, 1e4), r5 = hypothesis_s_ratio(lt, 1e5);
    CHECK(r3 < r4);
    CHECK(r4 < r5);
    CHECK(r5 > 0.826);
    CHECK(r5 < 1.05);
}

TEST_CASE("Rankin-Selberg residue and value") {
    CoefficientTable z = gen_zeta(50000);
    CoefficientTable rz = rankin_selberg_table(z);
    ResidueEstimate ez = residue_estimate(rz, 50000);
    CHECK(ez.value == doctest::Approx(1.0).epsilon(1e-3));
    // zeta(2) from the partial sum plus tail
    SeriesValue v = rankin_selberg_value(rz, cplx(2.0, 0.0), 1.0);
    CHECK(v.value.real() == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-9));
    CHECK_THROWS_AS(rankin_selberg_value(rz, cplx(1.0, 0.0), 1.0), DomainError);

    CoefficientTable d = gen_delta(100000);
    ResidueEstimate ed = residue_estimate(rankin_selberg_table(d), 100000);
    CHECK(ed.value > 0.3);
    CHECK(ed.value < 0.45);
    CHECK(ed.error < 0.01);
}

TEST_CASE("square partial sums stay within the H4 band") {
    CoefficientTable d = gen_delta(100000);
    auto S = square_partial_sums(d);
    for (std::size_t x = 1000; x <= 100000; x += 1000) CHECK(S[x] / static_cast<double>(x) <= 10.0);
}

TEST_CASE("coefficient cache round trip and file loading") {
    auto dir = std::filesystem::temp_directory_path() / "zerogap_coeff_test";
    std::filesystem::create_directories(dir);
    CoefficientTable d = gen_delta(500);
    std::string path = (dir / "delta.txt").string();
    write_coefficient_cache(d, path);
    CoefficientTable back = read_coefficient_cache(path);
    CHECK(back.size() == d.size());
    bool exact = back.tau == d.tau;
    CHECK(exact);
    CHECK(back(499) == d(499));

    std::string user = (dir / "user.txt").string();
    {
        std::ofstream out(user);
        out << "# two coefficients\n1 1 0\n2 0.5 -0.25\n";
    }
    CoefficientTable u = load_coefficient_file(user, "user", 2);
    CHECK(u.size() == 2);
    CHECK(u(2) == cplx(0.5, -0.25));
    {
        std::ofstream out(user);
        out << "1 1 0\n3 0.5 0\n";
    }
    CHECK_THROWS_AS(load_coefficient_file(user, "user", 2), CacheError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("primes") {
    auto p = primes_up_to(30);
    CHECK(p == std::vector<std::int64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
}
