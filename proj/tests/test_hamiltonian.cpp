#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "lumpsum/error.hpp"
#include "lumpsum/hamiltonian.hpp"

using namespace lumpsum;

namespace {

// Independent maximization of z + a z^2 / 2 by scanning n points of [-K, K].
double scan_max(double a, double K, int n) {
    double best = -INFINITY;
    for (int j = 0; j < n; ++j) {
        const double z = -K + 2.0 * K * j / (n - 1);
        best = std::max(best, z + 0.5 * a * z * z);
    }
    return best;
}

}  // namespace

TEST_CASE("optimal_z closed form") {
    HamiltonianResult r = optimal_z(-1.0, 5.0);
    CHECK(r.z_star == doctest::Approx(1.0));
    CHECK(r.value == doctest::Approx(0.5));
    CHECK(r.curvature == -1.0);

    r = optimal_z(0.0, 2.0);
    CHECK(r.z_star == 2.0);
    CHECK(r.value == 2.0);

    r = optimal_z(-0.1, 5.0);
    CHECK(r.z_star == 5.0);
    CHECK(r.value == doctest::Approx(3.75));

    r = optimal_z(2.0, 1.0);
    CHECK(r.z_star == 1.0);
    CHECK(r.value == doctest::Approx(2.0));

    CHECK_THROWS_AS(optimal_z(NAN, 1.0), Error);
    CHECK_THROWS_AS(optimal_z(INFINITY, 1.0), Error);
    CHECK_THROWS_AS(optimal_z(-1.0, 0.0), Error);
}

TEST_CASE("hamiltonian_G examples") {
    CHECK(hamiltonian_G(0.0, 3.0, -4.0, 0.7, 5.0) == doctest::Approx(0.5));
    CHECK(hamiltonian_G(1.0, 1.0, -2.0, 0.2, 5.0) == doctest::Approx(0.7));
    CHECK(hamiltonian_G(2.0, 0.0, 0.0, 0.0, 3.0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(hamiltonian_G(-1.0, 0.0, 0.0, 0.0, 3.0), Error);
    CHECK_THROWS_AS(hamiltonian_G(1.0, NAN, 0.0, 0.0, 3.0), Error);
}

TEST_CASE("optimal_z_discrete examples") {
    HamiltonianResult r = optimal_z_discrete(-1.0, 5.0, 11);
    CHECK(r.z_star == doctest::Approx(1.0));
    CHECK(r.value == doctest::Approx(0.5));

    r = optimal_z_discrete(0.0, 2.0, 2);
    CHECK(r.z_star == 2.0);
    CHECK(r.value == 2.0);

    // Brute force over the 101-point grid plus the candidate -1/a = 4.
    double best_z = 0.0, best_v = -INFINITY;
    for (int j = 0; j < 101; ++j) {
        const double z = -10.0 + 20.0 * j / 100.0;
        const double v = z - 0.125 * z * z;
        if (v > best_v) best_v = v, best_z = z;
    }
    if (4.0 - 0.125 * 16.0 > best_v) best_v = 2.0, best_z = 4.0;
    r = optimal_z_discrete(-0.25, 10.0, 101);
    CHECK(r.z_star == doctest::Approx(best_z));
    CHECK(r.value == doctest::Approx(best_v));
    CHECK(r.z_star == doctest::Approx(4.0));
    CHECK(r.value == doctest::Approx(2.0));

    CHECK_THROWS_AS(optimal_z_discrete(-1.0, 1.0, 1), Error);
    CHECK_THROWS_AS(optimal_z_grid_only(-1.0, 1.0, 1), Error);
}

TEST_CASE("optimal_z dominates a fine scan and respects the bound") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> ua(-20.0, 5.0);
    std::uniform_real_distribution<double> uk(0.01, 12.0);
    for (int trial = 0; trial < 400; ++trial) {
        const double a = ua(gen);
        const double K = uk(gen);
        const HamiltonianResult r = optimal_z(a, K);
        CHECK(std::abs(r.z_star) <= K);
        CHECK(r.value >= scan_max(a, K, 10001) - 1e-12);
        CHECK(r.value == doctest::Approx(r.z_star + 0.5 * a * r.z_star * r.z_star));
    }
}

TEST_CASE("value is nondecreasing in K") {
    for (double a : {-3.0, -0.5, -0.01, 0.0, 0.7}) {
        double previous = -INFINITY;
        for (double K = 0.05; K < 20.0; K *= 1.3) {
            const double v = optimal_z(a, K).value;
            CHECK(v >= previous);
            previous = v;
        }
    }
}

TEST_CASE("discrete optimizer approaches the closed form from below") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> ua(-5.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = ua(gen);
        const double K = 3.0;
        const double exact = optimal_z(a, K).value;
        double previous = -INFINITY;
        // Nested grids: M = 2^m + 1 contains every coarser grid.
        for (int m = 1; m <= 12; ++m) {
            const int M = (1 << m) + 1;
            const double v = optimal_z_grid_only(a, K, M).value;
            CHECK(v >= previous);
            CHECK(v <= exact + 1e-15);
            previous = v;
            CHECK(optimal_z_discrete(a, K, M).value == exact);
        }
        CHECK(exact - previous <= 1e-5);
    }
}
