#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "lumpsum/error.hpp"
#include "lumpsum/payment_map.hpp"

using namespace lumpsum;

namespace {

GridFunction random_slice(std::mt19937_64& gen, int n, double y_max) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    GridFunction g(std::vector<double>(static_cast<std::size_t>(n) + 1), y_max / n);
    double level = 0.0;
    for (int j = 1; j <= n; ++j) {
        level += 0.3 * u(gen) - 0.05 * j * g.dy;
        g.values[static_cast<std::size_t>(j)] = level;
    }
    return g;
}

// Objective -eta^gamma + v(y - eta), with v linearly interpolated.
double objective(const GridFunction& v, double gamma, double y, double eta) {
    return -std::pow(eta, gamma) + v.at(y - eta);
}

}  // namespace

TEST_CASE("quadratic continuation splits the utility in half") {
    const GridFunction v = sample([](double y) { return -y * y; }, 4.0, 80);
    const PaymentLayer layer = intermediate_value(v, 2.0, 1);
    for (int j = 0; j <= 80; ++j) {
        const double y = v.y(j);
        CHECK(std::abs(layer.eta_star[static_cast<std::size_t>(j)] - y / 2) <= v.dy / 4 + 1e-12);
        CHECK(std::abs(layer.f[static_cast<std::size_t>(j)] + y * y / 2) <= v.dy * v.dy);
    }
    CHECK(layer.f[0] == 0.0);
    CHECK(layer.eta_star[0] == 0.0);
    CHECK(layer.index == 1);
}

TEST_CASE("zero continuation pays nothing") {
    for (double gamma : {1.5, 2.0, 4.0}) {
        const GridFunction v = sample([](double) { return 0.0; }, 4.0, 40);
        const PaymentLayer layer = intermediate_value(v, gamma);
        for (std::size_t j = 0; j < v.size(); ++j) {
            CHECK(layer.f[j] == 0.0);
            CHECK(layer.eta_star[j] == 0.0);
        }
    }
}

TEST_CASE("rejects slices that do not vanish at zero") {
    GridFunction v = sample([](double y) { return 1.0 - y; }, 4.0, 40);
    CHECK_THROWS_AS(intermediate_value(v, 2.0), Error);
    v.values[0] = NAN;
    CHECK_THROWS_AS(intermediate_value(v, 2.0), Error);
}

TEST_CASE("matches an exhaustive scan at ten times finer payment resolution") {
    std::mt19937_64 gen(23);
    const double gamma = 2.0;
    for (int trial = 0; trial < 20; ++trial) {
        const GridFunction v = random_slice(gen, 40, 4.0);
        const PaymentLayer layer = intermediate_value(v, gamma);
        double lip = 0.0;
        for (int j = 0; j < 40; ++j) {
            lip = std::max(lip, std::abs(v[static_cast<std::size_t>(j + 1)] - v[static_cast<std::size_t>(j)]) / v.dy);
        }
        const double L = std::max(lip, gamma * std::pow(4.0, gamma - 1.0));
        for (int j = 0; j <= 40; ++j) {
            const double y = v.y(j);
            double brute = -INFINITY;
            const int steps = 40 * j;  // step dy / 40
            for (int s = 0; s <= steps; ++s) brute = std::max(brute, objective(v, gamma, y, s * v.dy / 40.0));
            const double f = layer.f[static_cast<std::size_t>(j)];
            CHECK(f <= brute + 1e-12);
            CHECK(brute - f <= 2.0 * v.dy * L);
            CHECK(objective(v, gamma, y, layer.eta_star[static_cast<std::size_t>(j)]) == doctest::Approx(f));
        }
    }
}

TEST_CASE("payment layer invariants on random slices") {
    std::mt19937_64 gen(29);
    for (int trial = 0; trial < 20; ++trial) {
        const double gamma = 1.5 + trial * 0.1;
        const GridFunction v = random_slice(gen, 60, 3.0);
        const PaymentLayer layer = intermediate_value(v, gamma);
        const double h = v.dy / 4;
        double lip = 0.0;
        for (int j = 0; j < 60; ++j) {
            lip = std::max(lip, std::abs(v[static_cast<std::size_t>(j + 1)] - v[static_cast<std::size_t>(j)]) / v.dy);
        }
        const double cont = std::max(lip, gamma * std::pow(3.0, gamma - 1.0)) * v.dy + 1e-9;
        for (int j = 0; j <= 60; ++j) {
            const auto js = static_cast<std::size_t>(j);
            const double y = v.y(j);
            const double eta = layer.eta_star[js];
            CHECK(eta >= 0.0);
            CHECK(eta <= y + 1e-12);
            CHECK(layer.f[js] >= v[js]);
            CHECK(layer.f[js] >= -std::pow(y, gamma) - 1e-12);
            // Minimality: every smaller sub-grid payment is strictly worse.
            for (double e = 0.0; e < eta - 0.5 * h; e += h) {
                CHECK(objective(v, gamma, y, e) < layer.f[js] - kPaymentTieTolerance + 1e-15);
            }
            if (j < 60) CHECK(std::abs(layer.f[js + 1] - layer.f[js]) <= cont);
        }
    }
}

TEST_CASE("ties resolve to the smallest payment") {
    // At y = 2 with unit cells: eta = 0 gives v(2), eta = 1 gives -1 + v(1) = -1.
    auto layer_for = [](double v2) {
        const GridFunction v({0.0, 0.0, v2, -4.0, -9.0}, 1.0);
        return intermediate_value(v, 2.0, 1, 1);
    };
    CHECK(layer_for(-1.0).eta_star[2] == 0.0);
    CHECK(layer_for(-1.0 - 0.5e-10).eta_star[2] == 0.0);
    CHECK(layer_for(-1.0 - 1e-9).eta_star[2] == 1.0);
    CHECK(layer_for(-1.0 - 1e-9).f[2] == -1.0);
}
