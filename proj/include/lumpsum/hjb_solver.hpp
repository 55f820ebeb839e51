#pragma once

#include <cstddef>
#include <vector>

#include "lumpsum/grid_function.hpp"
#include "lumpsum/model.hpp"

namespace lumpsum {

/// Value surface and feedback control of one contracting period
/// [T_{i-1}, T_i], stored at ascending time levels.
///
/// Long periods keep a decimated set of levels: the initial and terminal
/// slices plus `GridSpec::checkpoints` pairs of consecutive explicit steps.
/// `step_to_next[k] > 0` marks that level k was produced from level k + 1 by
/// exactly one explicit step of that size, which is what the residual check
/// replays.
struct PeriodSolution {
    int index = 1;
    double dy = 0.0;
    std::vector<double> times;
    std::vector<std::vector<double>> surface;
    std::vector<std::vector<double>> feedback;
    std::vector<double> step_to_next;
    std::size_t total_steps = 0;

    std::size_t n_levels() const noexcept { return times.size(); }
    int n_y() const noexcept { return static_cast<int>(surface.front().size()) - 1; }
    double t_start() const noexcept { return times.front(); }
    double t_end() const noexcept { return times.back(); }
    GridFunction initial() const { return {surface.front(), dy}; }
    GridFunction terminal() const { return {surface.back(), dy}; }
};

/// Largest stable step of the explicit scheme:
/// safety * dy^2 / (K^2 + (K^2/2 + k_a y_max) dy). Every frozen control in
/// [-K, K] then yields nonnegative stencil weights at every node.
double cfl_dt(const GridSpec& grid, const ValidatedModel& model);

/// -exp(gamma k_a (T - t)) y^gamma: the value of never exposing the agent
/// (Z = 0) and making no intermediate payment.
double zero_control_value(const ValidatedModel& model, double t, double y);

/// Solves v_t + G(y, v_y, v_yy) = 0 backward from `terminal` at t_end to
/// t_start with an explicit monotone upwind scheme. v(t, 0) = 0 and
/// v(t, y_max) = zero_control_value(t, y_max).
PeriodSolution solve_period(const GridFunction& terminal, double t_start, double t_end,
                            const ValidatedModel& model, const GridSpec& grid,
                            int period_index = 1);

/// Max absolute one-step residual over every stored step pair, replayed with
/// the stored feedback, including the boundary pins.
double discrete_residual(const PeriodSolution& solution, const ValidatedModel& model,
                         const GridSpec& grid);

/// Bilinear interpolation of the value surface; exact at nodes.
double eval(const PeriodSolution& solution, double t, double y);
/// Bilinear interpolation of the feedback control.
double eval_feedback(const PeriodSolution& solution, double t, double y);

/// Locates t among the stored levels: returns (k, w) with
/// t = (1 - w) times[k] + w times[k + 1]. Clamped to the period.
struct TimeBracket {
    std::size_t lower = 0;
    double weight = 0.0;
};
TimeBracket bracket_time(const PeriodSolution& solution, double t) noexcept;

}  // namespace lumpsum
