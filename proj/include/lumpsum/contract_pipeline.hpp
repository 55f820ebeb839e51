#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lumpsum/grid_function.hpp"
#include "lumpsum/hjb_solver.hpp"
#include "lumpsum/model.hpp"
#include "lumpsum/payment_map.hpp"

namespace lumpsum {

/// Backward-induction solution over all contracting periods.
/// periods[i-1] covers [T_{i-1}, T_i]; payments[i-1] is the layer at T_i
/// for i < N. Period i's terminal slice equals payments[i-1].f.
struct ContractSolution {
    ValidatedModel model;
    GridSpec grid;
    std::vector<PeriodSolution> periods;
    std::vector<PaymentLayer> payments;

    const PeriodSolution& period(int i) const { return periods.at(static_cast<std::size_t>(i - 1)); }
    const PaymentLayer& payment(int i) const { return payments.at(static_cast<std::size_t>(i - 1)); }
    /// v(0, .)
    GridFunction initial_value() const { return periods.front().initial(); }
};

enum class Setting { initial, renegotiation };
std::string_view to_string(Setting s) noexcept;

struct PeriodReservation {
    int index = 1;
    double R_a = 0.0;           ///< R_a^i
    double constraint = 0.0;    ///< level imposed on the period's starting utility
    double Y0_star = 0.0;
    double value = 0.0;         ///< max over y >= constraint of v_i(T_{i-1}, y)
};

struct NegotiationReport {
    double V_p = 0.0;
    double Y0_star = 0.0;
    double rent = 0.0;
    Setting setting = Setting::initial;
    /// Renegotiation only: the per-period single-payment problems.
    std::vector<PeriodReservation> periods;
};

ContractSolution solve_initial(const ValidatedModel& model, const GridSpec& grid);

/// Evaluates v(t, y), picking the period whose [T_{i-1}, T_i) contains t.
double value_at(const ContractSolution& solution, double t, double y);

/// Smallest maximizer of v0 over {R_a} united with the nodes above R_a,
/// with v0 interpolated at R_a. Returns (Y0_star, v0(Y0_star)).
std::pair<double, double> best_start(const GridFunction& v0, double R_a);

/// Principal's value x0 + max_{Y0 >= R_a} v(0, Y0).
NegotiationReport principal_value(const ContractSolution& solution, double R_a);

/// Nodes where v(T_{i-1}, y) >= f_i(y) - 1e-9, for 1 <= i <= N-1: starting
/// period i at utility y is worth at least reaching its payment time T_i
/// with the same utility.
Indicator employment_interval(const ContractSolution& solution, int i);

/// Nodes where eta*_i(y) <= 1e-10, for 1 <= i <= N-1.
Indicator truncation_region(const ContractSolution& solution, int i);
Indicator truncation_region(const PaymentLayer& layer);

/// R_a^i = exp(k_a T_{i-1}) (T_i - T_{i-1}) / T * R_a.
std::vector<double> renegotiation_reservations(const ValidatedModel& model);

/// Units in which each renegotiated period's participation level is imposed.
///
/// time_zero: the period's starting utility must reach exp(-k_a T_{i-1}) R_a^i,
/// the right-hand side of the per-period participation constraint. The
/// per-period levels then sum to R_a.
/// period_start: the starting utility must reach R_a^i itself. Under this
/// reading the concatenated renegotiated contracts form a feasible long-term
/// contract, so initial negotiation can never lose.
enum class ReservationUnits { time_zero, period_start };

/// Sum of independent single-payment problems, one per period, each with its
/// own participation level.
NegotiationReport solve_renegotiation(const ValidatedModel& model, const GridSpec& grid,
                                      ReservationUnits units = ReservationUnits::time_zero);

struct NegotiationComparison {
    NegotiationReport initial;
    NegotiationReport renegotiation;
    double difference = 0.0;  ///< initial.V_p - renegotiation.V_p
    double tolerance = 0.0;
    std::string winner;       ///< "initial", "renegotiation" or "indistinguishable"
};

/// Runs both settings on the same grid. Without an explicit tolerance the
/// scheme tolerance is the larger V_p change between `grid` and the same grid
/// with half the cells.
NegotiationComparison compare_settings(const ValidatedModel& model, const GridSpec& grid,
                                       std::optional<double> tolerance = std::nullopt,
                                       ReservationUnits units = ReservationUnits::time_zero);

}  // namespace lumpsum
