#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "lumpsum/bounds.hpp"

using namespace lumpsum;

namespace {

ContractSolution small_solution(double k_a) {
    ModelParams p;
    p.k_a = k_a;
    p.K = 5.0;
    p.schedule = {0.0, 0.5, 1.0};
    GridSpec g;
    g.y_max = 4.0;
    g.n_y = 40;
    return solve_initial(validate(p), g);
}

}  // namespace

TEST_CASE("phi_single examples") {
    const Delta d{1.0, 1.0, 2.0};
    CHECK(phi_single(1.0, 1.0, 2.0, 1.0, d, 1.0) == doctest::Approx(0.632121).epsilon(1e-6));
    // t = 0: -1 + e + e (1 - 1/e) = 2e - 2.
    CHECK(phi_single(0.0, 1.0, 2.0, 1.0, d, 1.0) == doctest::Approx(2.0 * std::numbers::e - 2.0));
    CHECK(phi_single(0.0, 1.0, 2.0, 1.0, d, 1.0) == doctest::Approx(3.436564).epsilon(1e-6));
    for (double t : {0.0, 0.3, 1.0}) {
        CHECK(phi_single(t, 0.0, 2.0, 0.7, {3.0, 2.0, 5.0}, 1.0) == 0.0);
        CHECK(phi_aggregate(t, 0.0, 2.5, {3.0, 2.0, 5.0}, {0.0, 0.4, 1.0}) == 0.0);
    }
}

TEST_CASE("barrier weights") {
    CHECK(barrier_weight(1, 1, 2.0) == 1.0);
    CHECK(barrier_weight(3, 3, 2.7) == 1.0);
    CHECK(barrier_weight(1, 2, 2.0) == 0.5);
    CHECK(barrier_weight(1, 2, 2.0, WeightExponent::gamma) == 0.25);
    CHECK(barrier_weight(1, 4, 3.0) == doctest::Approx(1.0 / 16.0));

    const Delta d{0.3, 1.5, 3.0};
    const std::vector<double> one{0.0, 2.0};
    CHECK(phi_aggregate(1.0, 1.3, 2.0, d, one) == phi_single(1.0, 1.3, 2.0, 1.0, d, 2.0));
    const std::vector<double> two{0.0, 1.0, 2.0};
    CHECK(phi_aggregate(1.5, 1.3, 2.0, d, two) == phi_single(1.5, 1.3, 2.0, 1.0, d, 2.0));
    CHECK(phi_aggregate(0.5, 1.3, 2.0, d, two) == phi_single(0.5, 1.3, 2.0, 0.5, d, 2.0));
    CHECK(phi_aggregate(0.0, 1.3, 2.0, d, two) == phi_single(0.0, 1.3, 2.0, 0.5, d, 2.0));
    CHECK(phi_aggregate(1.0, 1.3, 2.0, d, two) == phi_single(1.0, 1.3, 2.0, 0.5, d, 2.0));
}

TEST_CASE("analytic derivatives match centered differences") {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> ut(0.05, 0.95), uy(0.1, 6.0), ub(0.05, 1.0), uc(0.1, 4.0), um(2.1, 8.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double T = 2.0;
        const double t = T * ut(gen), y = uy(gen), gamma = 1.5 + trial % 3 * 0.5, a = 1.0 / (1 + trial % 4);
        const Delta d{ub(gen), uc(gen), um(gen)};
        const PhiJet j = phi_jet(t, y, gamma, a, d, T);
        const auto f = [&](double tt, double yy) { return phi_single(tt, yy, gamma, a, d, T); };
        const double h = 1e-5;
        const double ft = (f(t + h, y) - f(t - h, y)) / (2 * h);
        const double fy = (f(t, y + h) - f(t, y - h)) / (2 * h);
        const double k = 1e-4;
        const double fyy = (f(t, y + k) - 2 * f(t, y) + f(t, y - k)) / (k * k);
        CHECK(j.value == doctest::Approx(f(t, y)).epsilon(1e-12));
        CHECK(j.t == doctest::Approx(ft).epsilon(1e-6));
        CHECK(j.y == doctest::Approx(fy).epsilon(1e-6));
        CHECK(j.yy == doctest::Approx(fyy).epsilon(1e-5).scale(std::abs(fy)));
        CHECK(j.curvature == doctest::Approx(j.y + j.yy).epsilon(1e-9).scale(std::abs(j.y)));
    }
}

TEST_CASE("phi increases in b and c") {
    std::mt19937_64 gen(43);
    std::uniform_real_distribution<double> ut(0.0, 0.99), uy(0.01, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double t = ut(gen), y = uy(gen);
        const Delta d{0.3, 1.0, 3.0};
        const double base = phi_single(t, y, 2.0, 0.5, d, 1.0);
        CHECK(phi_single(t, y, 2.0, 0.5, {0.31, 1.0, 3.0}, 1.0) > base);
        CHECK(phi_single(t, y, 2.0, 0.5, {0.3, 1.01, 3.0}, 1.0) > base);
    }
}

TEST_CASE("supersolution verification") {
    const VerificationGrid vg{4.0, 0.1, 201, 401};
    CHECK(vg.y(0) == doctest::Approx(0.01));
    CHECK(vg.y(400) == doctest::Approx(8.0));

    SUBCASE("constraint-respecting candidate for N = 2") {
        const Delta d{0.1, 5.0, 3.0};
        CHECK(satisfies_constraints(d, 2.0, 2, 0.0, 1.0));
        CHECK(verify_supersolution(d, 2.0, 2, 0.0, 1.0, 10.0, vg).min_residual >= 0.0);
    }
    SUBCASE("N = 1 admits b = 0.5, M = 3") {
        const Delta d{0.5, 5.0, 3.0};
        CHECK(satisfies_constraints(d, 2.0, 1, 0.0, 1.0));
        CHECK(verify_supersolution(d, 2.0, 1, 0.0, 1.0, 10.0, vg).min_residual >= 0.0);
    }
    SUBCASE("violating delta is detected") {
        const Delta d{100.0, 0.01, 2.0};
        CHECK_FALSE(satisfies_constraints(d, 2.0, 2, 0.0, 1.0));
        CHECK(verify_supersolution(d, 2.0, 2, 0.0, 1.0, 10.0, vg).min_residual < 0.0);
    }
    SUBCASE("residual is finite at the smallest node") {
        const SupersolutionReport r = verify_supersolution({0.2, 3.0, 2.5}, 2.0, 3, 0.1, 2.0, 10.0, vg);
        CHECK(std::isfinite(r.min_residual));
        const PhiJet j = phi_jet(0.0, vg.y(0), 2.0, 1.0, {0.2, 3.0, 2.5}, 2.0);
        CHECK(std::isfinite(j.y));
        CHECK(std::isfinite(j.yy));
    }
    CHECK_THROWS_AS(verify_supersolution({0.0, 1.0, 3.0}, 2.0, 1, 0.0, 1.0, 10.0, vg), Error);
}

TEST_CASE("search_delta0 respects the constraints") {
    const VerificationGrid vg{4.0, 0.1, 101, 201};
    struct Case {
        double gamma;
        int N;
        double k_a;
        double T;
    };
    for (const Case c : {Case{2.0, 2, 0.0, 1.0}, Case{2.0, 1, 0.0, 1.0}, Case{2.0, 4, 0.2, 8.0}, Case{3.0, 3, 0.05, 2.0}}) {
        const Delta d = search_delta0(c.gamma, c.N, c.k_a, c.T, 10.0, vg);
        CHECK(satisfies_constraints(d, c.gamma, c.N, c.k_a, c.T));
        CHECK(verify_supersolution(d, c.gamma, c.N, c.k_a, c.T, 10.0, vg).min_residual >= 0.0);
    }
    const Delta d = search_delta0(2.0, 2, 1.0, 10.0, 10.0, vg);
    CHECK(d.M > 10.0);

    DeltaSearchBox empty;
    empty.c_steps.clear();
    try {
        search_delta0(2.0, 1, 0.0, 1.0, 10.0, vg, empty);
        FAIL("expected an exhausted search");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("no delta found") != std::string::npos);
    }
    CHECK_THROWS_AS(search_delta0(1.0, 1, 0.0, 1.0, 10.0, vg), Error);
}

TEST_CASE("value sandwich") {
    for (double k_a : {0.0, 0.2}) {
        ContractSolution s = small_solution(k_a);
        const VerificationGrid vg = VerificationGrid::from(s.grid);
        const Delta d = search_delta0(2.0, 2, k_a, 1.0, 5.0, vg);
        const SandwichReport r = check_sandwich(s, d);
        CHECK(r.passed(1e-6));
        CHECK(r.nodes_checked > 0);

        // Both margins are exactly zero at y = 0.
        CHECK(s.period(1).surface.front()[0] == 0.0);
        CHECK(phi_single(0.0, 0.0, 2.0, 0.5, d, 1.0) == 0.0);
        CHECK(r.lower_margin <= 0.0);
        CHECK(r.upper_margin <= 0.0);

        for (auto& level : s.periods[0].surface) {
            for (std::size_t j = 1; j < level.size(); ++j) level[j] += 10.0;
        }
        const SandwichReport bad = check_sandwich(s, d);
        CHECK(bad.upper_margin < -1.0);
        CHECK_FALSE(bad.passed(1e-6));
    }
}
