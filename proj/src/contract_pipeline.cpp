#include "lumpsum/contract_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lumpsum {

std::string_view to_string(Setting s) noexcept {
    return s == Setting::initial ? "initial" : "renegotiation";
}

ContractSolution solve_initial(const ValidatedModel& model, const GridSpec& grid) {
    validate_grid(grid);
    const int N = model.N();
    const double gamma = model.gamma();
    GridFunction terminal = sample([gamma](double y) { return -std::pow(y, gamma); }, grid.y_max, grid.n_y);

    std::vector<PeriodSolution> periods(static_cast<std::size_t>(N));
    std::vector<PaymentLayer> payments(static_cast<std::size_t>(N - 1));
    for (int i = N; i >= 1; --i) {
        periods[static_cast<std::size_t>(i - 1)] =
            solve_period(terminal, model.period_start(i), model.period_end(i), model, grid, i);
        if (i > 1) {
            PaymentLayer layer = intermediate_value(periods[static_cast<std::size_t>(i - 1)].initial(), gamma, i - 1);
            terminal = layer.f;
            payments[static_cast<std::size_t>(i - 2)] = std::move(layer);
        }
    }
    return ContractSolution{model, grid, std::move(periods), std::move(payments)};
}

double value_at(const ContractSolution& solution, double t, double y) {
    const int N = solution.model.N();
    for (int i = 1; i <= N; ++i) {
        if (t < solution.model.period_end(i) || i == N) return eval(solution.period(i), t, y);
    }
    return eval(solution.periods.back(), t, y);
}

std::pair<double, double> best_start(const GridFunction& v0, double R_a) {
    if (!(R_a >= 0.0)) throw Error(ErrorCode::domain, "principal_value: R_a must be nonnegative");
    if (R_a > v0.y_max() * (1.0 + 1e-12)) {
        throw Error(ErrorCode::domain, "principal_value: R_a exceeds y_max; enlarge the grid");
    }
    double best_y = std::min(R_a, v0.y_max());
    double best_v = v0.at(best_y);
    const int n = v0.n_cells();
    for (int j = 0; j <= n; ++j) {
        const double y = v0.y(j);
        if (!(y > R_a)) continue;
        if (v0[static_cast<std::size_t>(j)] > best_v) {
            best_v = v0[static_cast<std::size_t>(j)];
            best_y = y;
        }
    }
    return {best_y, best_v};
}

NegotiationReport principal_value(const ContractSolution& solution, double R_a) {
    const auto [y0, v] = best_start(solution.initial_value(), R_a);
    NegotiationReport r;
    r.V_p = solution.model.x0() + v;
    r.Y0_star = y0;
    r.rent = y0 - R_a;
    r.setting = Setting::initial;
    return r;
}

namespace {

void check_payment_index(const ContractSolution& solution, int i, const char* what) {
    if (i < 1 || i > solution.model.N() - 1) {
        throw Error(ErrorCode::invalid_argument, std::string(what) + ": payment index out of range");
    }
}

}  // namespace

Indicator employment_interval(const ContractSolution& solution, int i) {
    check_payment_index(solution, i, "employment_interval");
    const auto& before = solution.period(i).surface.front();
    const auto& after = solution.period(i).surface.back();  // f_i, before the payment at T_i
    Indicator out;
    out.dy = solution.grid.dy();
    out.mask.resize(before.size());
    for (std::size_t j = 0; j < before.size(); ++j) out.mask[j] = before[j] >= after[j] - 1e-9 ? 1 : 0;
    return out;
}

Indicator truncation_region(const PaymentLayer& layer) {
    Indicator out;
    out.dy = layer.eta_star.dy;
    out.mask.resize(layer.eta_star.size());
    for (std::size_t j = 0; j < out.mask.size(); ++j) out.mask[j] = layer.eta_star[j] <= 1e-10 ? 1 : 0;
    return out;
}

Indicator truncation_region(const ContractSolution& solution, int i) {
    check_payment_index(solution, i, "truncation_region");
    return truncation_region(solution.payment(i));
}

std::vector<double> renegotiation_reservations(const ValidatedModel& model) {
    const double T = model.T();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(model.N()));
    for (int i = 1; i <= model.N(); ++i) {
        const double start = model.period_start(i);
        out.push_back(std::exp(model.k_a() * start) * (model.period_end(i) - start) / T * model.R_a());
    }
    return out;
}

NegotiationReport solve_renegotiation(const ValidatedModel& model, const GridSpec& grid,
                                      ReservationUnits units) {
    validate_grid(grid);
    const std::vector<double> reservations = renegotiation_reservations(model);
    std::vector<double> levels(reservations.size());
    for (int i = 1; i <= model.N(); ++i) {
        const double r = reservations[static_cast<std::size_t>(i - 1)];
        levels[static_cast<std::size_t>(i - 1)] =
            units == ReservationUnits::time_zero ? std::exp(-model.k_a() * model.period_start(i)) * r : r;
        if (levels[static_cast<std::size_t>(i - 1)] > grid.y_max) {
            throw Error(ErrorCode::domain, "solve_renegotiation: R_a^i exceeds y_max");
        }
    }
    // The single-payment problem only depends on the period length.
    std::map<double, GridFunction> by_length;
    NegotiationReport report;
    report.setting = Setting::renegotiation;
    double total = model.x0();
    for (int i = 1; i <= model.N(); ++i) {
        const double length = model.period_end(i) - model.period_start(i);
        auto it = by_length.find(length);
        if (it == by_length.end()) {
            ModelParams p = model.params();
            p.schedule = {0.0, length};
            p.R_a = levels[static_cast<std::size_t>(i - 1)];
            p.x0 = 0.0;
            const ContractSolution single = solve_initial(validate(p), grid);
            it = by_length.emplace(length, single.initial_value()).first;
        }
        const double level = levels[static_cast<std::size_t>(i - 1)];
        const auto [y0, v] = best_start(it->second, level);
        report.periods.push_back({i, reservations[static_cast<std::size_t>(i - 1)], level, y0, v});
        total += v;
    }
    report.V_p = total;
    report.Y0_star = report.periods.front().Y0_star;
    report.rent = report.Y0_star - report.periods.front().constraint;
    return report;
}

NegotiationComparison compare_settings(const ValidatedModel& model, const GridSpec& grid,
                                       std::optional<double> tolerance, ReservationUnits units) {
    NegotiationComparison c;
    c.initial = principal_value(solve_initial(model, grid), model.R_a());
    c.renegotiation = solve_renegotiation(model, grid, units);
    c.difference = c.initial.V_p - c.renegotiation.V_p;
    if (tolerance) {
        c.tolerance = *tolerance;
    } else {
        GridSpec coarse = grid;
        coarse.n_y = std::max(16, grid.n_y / 2);
        const double init_coarse = principal_value(solve_initial(model, coarse), model.R_a()).V_p;
        const double reneg_coarse = solve_renegotiation(model, coarse, units).V_p;
        c.tolerance = std::max(std::abs(init_coarse - c.initial.V_p), std::abs(reneg_coarse - c.renegotiation.V_p));
    }
    if (std::abs(c.difference) <= c.tolerance) {
        c.winner = "indistinguishable";
    } else {
        c.winner = c.difference > 0.0 ? "initial" : "renegotiation";
    }
    return c;
}

}  // namespace lumpsum
