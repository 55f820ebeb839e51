#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lumpsum/contract_pipeline.hpp"

using namespace lumpsum;

namespace {

ValidatedModel make_model(std::vector<double> schedule, double k_a = 0.0, double R_a = 0.0, double K = 5.0) {
    ModelParams p;
    p.k_a = k_a;
    p.R_a = R_a;
    p.K = K;
    p.schedule = std::move(schedule);
    return validate(p);
}

GridSpec coarse(double y_max = 4.0, int n_y = 60) {
    GridSpec g;
    g.y_max = y_max;
    g.n_y = n_y;
    return g;
}

}  // namespace

TEST_CASE("single payment produces one period and no layers") {
    const ContractSolution s = solve_initial(make_model({0.0, 1.0}), coarse());
    CHECK(s.periods.size() == 1);
    CHECK(s.payments.empty());
    const GridFunction terminal = s.period(1).terminal();
    for (std::size_t j = 0; j < terminal.size(); ++j) {
        const double y = terminal.y(static_cast<int>(j));
        CHECK(terminal[j] == -y * y);
    }
}

TEST_CASE("stitching identity and the free-payment bound") {
    const ValidatedModel m = make_model({0.0, 0.5, 1.0}, 0.1);
    const ContractSolution s = solve_initial(m, coarse());
    REQUIRE(s.periods.size() == 2);
    REQUIRE(s.payments.size() == 1);
    const auto& f1 = s.payment(1).f.values;
    CHECK(s.period(1).surface.back() == f1);
    const auto& v_after = s.period(2).surface.front();
    for (std::size_t j = 0; j < f1.size(); ++j) CHECK(f1[j] >= v_after[j]);
    CHECK(value_at(s, 0.75, 1.0) == eval(s.period(2), 0.75, 1.0));
    CHECK(value_at(s, 0.25, 1.0) == eval(s.period(1), 0.25, 1.0));
}

TEST_CASE("principal value and informational rent") {
    const ValidatedModel m = make_model({0.0, 1.0});
    const ContractSolution s = solve_initial(m, coarse());
    const GridFunction v0 = s.initial_value();

    const NegotiationReport r0 = principal_value(s, 0.0);
    CHECK(r0.Y0_star > 0.0);
    CHECK(r0.rent == r0.Y0_star);
    CHECK(r0.V_p == doctest::Approx(v0.at(r0.Y0_star)));
    for (std::size_t j = 0; j < v0.size(); ++j) CHECK(v0[j] <= r0.V_p);

    const double beyond = 3.3;
    const NegotiationReport r1 = principal_value(s, beyond);
    CHECK(r1.Y0_star == beyond);
    CHECK(r1.rent == 0.0);
    CHECK(r1.V_p == doctest::Approx(v0.at(beyond)));

    CHECK_THROWS_AS(principal_value(s, 4.5), Error);
    CHECK_THROWS_AS(principal_value(s, -0.1), Error);

    ModelParams p = m.params();
    p.x0 = 2.5;
    const ContractSolution shifted = solve_initial(validate(p), coarse());
    CHECK(principal_value(shifted, 0.0).V_p == doctest::Approx(r0.V_p + 2.5));
}

TEST_CASE("optimal promised utility is stable under doubling y_max") {
    const ValidatedModel m = make_model({0.0, 1.0});
    const NegotiationReport a = principal_value(solve_initial(m, coarse(4.0, 60)), 0.0);
    const NegotiationReport b = principal_value(solve_initial(m, coarse(8.0, 120)), 0.0);
    CHECK(std::abs(a.Y0_star - b.Y0_star) <= 4.0 / 60 + 1e-12);
}

TEST_CASE("employment interval and truncation region") {
    const ValidatedModel m = make_model({0.0, 0.5, 1.0, 1.5}, 0.2);
    const ContractSolution s = solve_initial(m, coarse());
    for (int i = 1; i <= 2; ++i) {
        const Indicator e = employment_interval(s, i);
        CHECK(e.contains(0));
        CHECK(e.mask.size() == 61);
        const Indicator t = truncation_region(s, i);
        CHECK(t.contains(0));
        for (int j : t.nodes()) CHECK(s.payment(i).eta_star[static_cast<std::size_t>(j)] <= 1e-10);
    }
    CHECK_THROWS_AS(employment_interval(s, 0), Error);
    CHECK_THROWS_AS(employment_interval(s, 3), Error);
    CHECK_THROWS_AS(truncation_region(s, 3), Error);

    PaymentLayer flat;
    flat.f = sample([](double) { return 0.0; }, 4.0, 40);
    flat.eta_star = flat.f;
    CHECK(truncation_region(flat).count() == 41);
}

TEST_CASE("renegotiation reservations") {
    ModelParams p;
    p.schedule = {0.0, 2.0, 4.0, 6.0, 8.0};
    p.R_a = 0.909;
    std::vector<double> r = renegotiation_reservations(validate(p));
    REQUIRE(r.size() == 4);
    for (double x : r) CHECK(x == doctest::Approx(0.227250).epsilon(1e-9));

    p.k_a = 0.4;
    p.R_a = 0.131;
    r = renegotiation_reservations(validate(p));
    // e^{0.8} = 2.225540928492468 from the series, times 0.25 * 0.131.
    CHECK(r[1] == doctest::Approx(2.225540928492468 * 0.25 * 0.131).epsilon(1e-12));
    CHECK(r[1] == doctest::Approx(0.072885).epsilon(1e-5));
    CHECK(r[0] == doctest::Approx(0.25 * 0.131));

    p.R_a = 0.0;
    for (double x : renegotiation_reservations(validate(p))) CHECK(x == 0.0);
}

TEST_CASE("renegotiation with one period equals initial negotiation") {
    const ValidatedModel m = make_model({0.0, 1.0}, 0.1, 0.3);
    const GridSpec g = coarse();
    const NegotiationReport init = principal_value(solve_initial(m, g), m.R_a());
    for (ReservationUnits u : {ReservationUnits::time_zero, ReservationUnits::period_start}) {
        const NegotiationReport ren = solve_renegotiation(m, g, u);
        CHECK(ren.V_p == init.V_p);
        CHECK(ren.Y0_star == init.Y0_star);
        CHECK(ren.setting == Setting::renegotiation);
        CHECK(ren.periods.size() == 1);
    }
}

TEST_CASE("period-start reservations never beat initial negotiation") {
    const GridSpec g = coarse();
    for (double k_a : {0.0, 0.4}) {
        for (double R : {0.0, 0.25, 0.9}) {
            const ValidatedModel m = make_model({0.0, 0.5, 1.0, 1.5, 2.0}, k_a, R);
            const double init = principal_value(solve_initial(m, g), R).V_p;
            const double ren = solve_renegotiation(m, g, ReservationUnits::period_start).V_p;
            CHECK(init >= ren - 1e-12);
        }
    }
}

TEST_CASE("renegotiation rejects reservations beyond the grid") {
    const ValidatedModel m = make_model({0.0, 1.0, 2.0}, 0.0, 20.0);
    CHECK_THROWS_AS(solve_renegotiation(m, coarse()), Error);
}

TEST_CASE("compare_settings reports a winner or a tie") {
    const ValidatedModel m = make_model({0.0, 0.5, 1.0}, 0.0, 0.2);
    const GridSpec g = coarse();
    const NegotiationComparison c = compare_settings(m, g, 1e6);
    CHECK(c.winner == "indistinguishable");
    CHECK(c.difference == doctest::Approx(c.initial.V_p - c.renegotiation.V_p));
    const NegotiationComparison d = compare_settings(m, g, 0.0);
    CHECK((d.winner == "initial" || d.winner == "renegotiation"));
    CHECK(d.winner == (d.difference > 0 ? "initial" : "renegotiation"));
    const NegotiationComparison a = compare_settings(m, g);
    CHECK(a.tolerance >= 0.0);
}

TEST_CASE("single-payment value is concave at zero discount") {
    const ValidatedModel m = make_model({0.0, 1.0}, 0.0, 0.0, 10.0);
    const GridSpec g = coarse(4.0, 80);
    const GridFunction v0 = solve_initial(m, g).initial_value();
    for (int j = 1; j < 80; ++j) {
        const auto js = static_cast<std::size_t>(j);
        CHECK(v0[js + 1] - 2.0 * v0[js] + v0[js - 1] <= 1e-9);
    }
}

TEST_CASE("payments grow with utility at zero discount") {
    const ValidatedModel m = make_model({0.0, 0.5, 1.0, 1.5}, 0.0, 0.0, 10.0);
    const ContractSolution s = solve_initial(m, coarse(4.0, 60));
    const double dy = 4.0 / 60;
    for (int i = 1; i <= 2; ++i) {
        const GridFunction& eta = s.payment(i).eta_star;
        for (std::size_t j = 0; j + 1 < eta.size(); ++j) CHECK(eta[j + 1] >= eta[j] - dy);
    }
}
