#include "lumpsum/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lumpsum/hamiltonian.hpp"

namespace lumpsum {

double barrier_weight(int i, int N, double gamma, WeightExponent exponent) {
    const double p = exponent == WeightExponent::gamma_minus_one ? gamma - 1.0 : gamma;
    return 1.0 / std::pow(static_cast<double>(1 + N - i), p);
}

double phi_single(double t, double y, double gamma, double a, const Delta& d, double T) {
    return -a * std::pow(y, gamma) + d.b * std::exp((T - t) / T) * std::pow(y, 1.0 / d.M) +
           std::exp(d.c * (T - t)) * (1.0 - std::exp(-y));
}

PhiJet phi_jet(double t, double y, double gamma, double a, const Delta& d, double T) {
    const double E = std::exp((T - t) / T);
    const double C = std::exp(d.c * (T - t));
    const double ey = std::exp(-y);
    const double inv_M = 1.0 / d.M;
    const double root = std::pow(y, inv_M);  // y^{1/M}
    const double power = std::pow(y, gamma);
    PhiJet j;
    j.value = -a * power + d.b * E * root + C * (1.0 - ey);
    j.t = -(d.b / T) * E * root - d.c * C * (1.0 - ey);
    // y^{1/M - 1} = root / y and y^{1/M - 2} = root / y^2 keep y -> 0 finite.
    j.y = -a * gamma * power / y + d.b * E * inv_M * root / y + C * ey;
    j.yy = -a * gamma * (gamma - 1.0) * power / (y * y) - d.b * E * (d.M - 1.0) * inv_M * inv_M * root / (y * y) -
           C * ey;
    j.curvature = -a * gamma * power / y - a * gamma * (gamma - 1.0) * power / (y * y) +
                  d.b * E * inv_M * (root / y - (d.M - 1.0) * inv_M * root / (y * y));
    return j;
}

namespace {

int period_of(double t, const std::vector<double>& schedule) {
    const int N = static_cast<int>(schedule.size()) - 1;
    for (int i = 1; i <= N; ++i) {
        if (t <= schedule[static_cast<std::size_t>(i)]) return i;
    }
    return N;
}

}  // namespace

double phi_aggregate(double t, double y, double gamma, const Delta& delta, const std::vector<double>& schedule,
                     WeightExponent exponent) {
    const int N = static_cast<int>(schedule.size()) - 1;
    const int i = period_of(t, schedule);
    return phi_single(t, y, gamma, barrier_weight(i, N, gamma, exponent), delta, schedule.back());
}

bool satisfies_constraints(const Delta& d, double gamma, int N, double k_a, double T) {
    const double M_min = std::max({k_a * T, 1.0 / (gamma - 1.0), 2.0});
    const double b_max = d.M * std::pow(1.0 / N, gamma - 1.0) * gamma * (gamma - 1.0) / std::exp(1.0);
    return d.M > M_min && d.c > 3.0 * k_a && d.b > 0.0 && d.b < b_max;
}

namespace {

SupersolutionReport scan(const Delta& d, double gamma, int N, double k_a, double T, double K,
                         const VerificationGrid& grid, WeightExponent exponent, bool stop_at_negative) {
    SupersolutionReport worst{std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0};
    for (int m = 1; m <= N; ++m) {
        const double a = barrier_weight(1, m, gamma, exponent);  // 1 / m^p
        for (int k = 0; k < grid.n_t; ++k) {
            const double t = (k == grid.n_t - 1) ? T : T * k / (grid.n_t - 1);
            for (int j = 0; j < grid.n_y; ++j) {
                const double y = grid.y(j);
                const PhiJet phi = phi_jet(t, y, gamma, a, d, T);
                const double residual = -phi.t - optimal_z(phi.curvature, K).value - k_a * y * phi.y;
                if (residual < worst.min_residual || std::isnan(residual)) {
                    worst = {residual, t, y, a};
                    if (stop_at_negative && !(residual >= 0.0)) return worst;
                }
            }
        }
    }
    return worst;
}

}  // namespace

SupersolutionReport verify_supersolution(const Delta& delta, double gamma, int N, double k_a, double T,
                                         double K, const VerificationGrid& grid, WeightExponent exponent) {
    if (!(delta.b > 0.0 && delta.c > 0.0 && delta.M > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "verify_supersolution: delta must be positive");
    }
    return scan(delta, gamma, N, k_a, T, K, grid, exponent, false);
}

Delta search_delta0(double gamma, int N, double k_a, double T, double K, const VerificationGrid& grid,
                    const DeltaSearchBox& box, WeightExponent exponent) {
    if (!(gamma > 1.0)) throw Error(ErrorCode::invalid_argument, "search_delta0: gamma must exceed 1");
    const double M_min = std::max({k_a * T, 1.0 / (gamma - 1.0), 2.0});
    for (double dM : box.M_offsets) {
        const double M = M_min + dM;
        const double b_max = M * std::pow(1.0 / N, gamma - 1.0) * gamma * (gamma - 1.0) / std::exp(1.0);
        for (double fb : box.b_fractions) {
            for (double dc : box.c_steps) {
                const Delta d{fb * b_max, 3.0 * k_a + dc, M};
                if (!satisfies_constraints(d, gamma, N, k_a, T)) continue;
                if (scan(d, gamma, N, k_a, T, K, grid, exponent, true).min_residual >= 0.0) return d;
            }
        }
    }
    throw Error(ErrorCode::numerical, "search_delta0: no delta found in the search box");
}

SandwichReport check_sandwich(const ContractSolution& solution, const Delta& delta, WeightExponent exponent) {
    const ValidatedModel& model = solution.model;
    const double gamma = model.gamma();
    const double T = model.T();
    const int N = model.N();
    SandwichReport r;
    r.lower_margin = std::numeric_limits<double>::infinity();
    r.upper_margin = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= N; ++i) {
        const PeriodSolution& p = solution.period(i);
        const double a = barrier_weight(i, N, gamma, exponent);
        for (std::size_t k = 0; k < p.n_levels(); ++k) {
            const double t = p.times[k];
            const auto& v = p.surface[k];
            for (std::size_t j = 0; j < v.size(); ++j) {
                const double y = static_cast<double>(j) * p.dy;
                const double lower = v[j] - zero_control_value(model, t, y);
                const double upper = phi_single(t, y, gamma, a, delta, T) - v[j];
                if (lower < r.lower_margin) {
                    r.lower_margin = lower;
                    r.lower_t = t;
                    r.lower_y = y;
                }
                if (upper < r.upper_margin) {
                    r.upper_margin = upper;
                    r.upper_t = t;
                    r.upper_y = y;
                }
                ++r.nodes_checked;
            }
        }
    }
    return r;
}

}  // namespace lumpsum
