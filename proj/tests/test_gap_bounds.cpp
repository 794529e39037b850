#include <doctest.h>

#include <cmath>

#include "zerogap/errors.hpp"
#include "zerogap/gap_bounds.hpp"
#include "zerogap/paircorr.hpp"

using namespace zerogap;

TEST_CASE("small-gap table") {
    const double printed[] = {0.606894, 0.822897, 0.905604, 0.942914, 0.962190};
    for (int m = 1; m <= 5; ++m) CHECK(std::fabs(small_gap_root(m).lambda_star - printed[m - 1]) < 5e-6);
    auto table = gap_table(5);
    CHECK(table.size() == 5);
    CHECK(table[1].kappa == doctest::Approx(1.179339).epsilon(1e-6));
}

TEST_CASE("literal tail constant gives the other table") {
    const double cube[] = {0.6068936, 0.8237732, 0.9057551, 0.9429424, 0.9621968};
    for (int m = 1; m <= 5; ++m)
        CHECK(small_gap_root(m, 1e-9, TailConstant::kCube).lambda_star == doctest::Approx(cube[m - 1]).epsilon(2e-7));
}

TEST_CASE("roots increase toward one, kappa decreases toward one") {
    double prev = 0.0;
    for (int m = 1; m <= 20; ++m) {
        double l = small_gap_root(m).lambda_star;
        CHECK(l > prev);
        CHECK(l < 1.0);
        prev = l;
    }
    double pk = 10.0;
    for (int m = 1; m <= 50; ++m) {
        double k = kappa(m);
        CHECK(k < pk);
        CHECK(k > 1.0);
        CHECK(std::fabs(i_xi_bound(k, m)) < 1e-12);
        pk = k;
    }
}

TEST_CASE("bracket sign and domain") {
    CHECK(bracket(0.05, 1) < 0.0);
    CHECK(bracket(0.05, 1) == doctest::Approx(-7.4e-5).epsilon(0.05));
    CHECK(bracket(0.5, 2) < 0.0);
    CHECK(bracket(0.84, 2) > 0.0);
    CHECK_THROWS_AS(bracket(0.5, 0), DomainError);
    CHECK_THROWS_AS(bracket(2.0, 2), DomainError);
}

TEST_CASE("large-gap constant") {
    LargeGapResult r = large_gap_bound();
    CHECK(std::fabs(r.rho_star - 1.0) < 1e-8);
    CHECK(std::fabs(r.bound - std::sqrt(3.0)) < 1e-10);
}
