#include "lumpsum/hjb_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lumpsum/hamiltonian.hpp"

namespace lumpsum {

namespace {

struct SavedLevel {
    std::size_t step = 0;  // explicit steps taken from the terminal slice
    double t = 0.0;
    double dt_in = 0.0;    // size of the step that produced this level
    std::vector<double> values;
    std::vector<double> feedback;
};

// One explicit step: next = cur + dt * max_z F_z(cur). Writes the maximizing
// control for `cur` into z. Interior nodes only; callers set the pins.
class Stepper {
public:
    Stepper(const ValidatedModel& model, const GridSpec& grid)
        : n_(grid.n_y), K_(model.K()), z_grid_(grid.z_grid_points),
          inv_dy_(1.0 / grid.dy()), inv_dy2_(1.0 / (grid.dy() * grid.dy())),
          drift_(static_cast<std::size_t>(grid.n_y) + 1) {
        // Discount drift k_a y v_y, upwinded with a coefficient scaled so the
        // forward difference is exact on y^gamma. The coefficient never
        // exceeds k_a y (y^gamma is convex), so the CFL bound is unaffected,
        // and the zero-control solution stays a discrete subsolution.
        const double gamma = model.gamma();
        const double dy = grid.dy();
        for (int j = 1; j <= n_; ++j) {
            const double y = grid.node(j);
            const double rise = std::pow(y + dy, gamma) - std::pow(y, gamma);
            drift_[static_cast<std::size_t>(j)] = model.k_a() * gamma * std::pow(y, gamma) * dy / rise;
        }
    }

    void step(const std::vector<double>& cur, std::vector<double>& next, std::vector<double>& z,
              double dt) const {
        const double* v = cur.data();
        double* out = next.data();
        double* zo = z.data();
        for (int j = 1; j < n_; ++j) {
            const double dp = (v[j + 1] - v[j]) * inv_dy_;
            const double d2 = (v[j + 1] - 2.0 * v[j] + v[j - 1]) * inv_dy2_;
            const HamiltonianResult h = optimize(d2 + dp);
            out[j] = v[j] + dt * (h.value + drift_[static_cast<std::size_t>(j)] * dp);
            zo[j] = h.z_star;
        }
        zo[0] = 0.0;
        zo[n_] = 0.0;
    }

    void feedback(const std::vector<double>& cur, std::vector<double>& z) const {
        const double* v = cur.data();
        for (int j = 1; j < n_; ++j) {
            const double dp = (v[j + 1] - v[j]) * inv_dy_;
            const double d2 = (v[j + 1] - 2.0 * v[j] + v[j - 1]) * inv_dy2_;
            z[static_cast<std::size_t>(j)] = optimize(d2 + dp).z_star;
        }
        z.front() = 0.0;
        z.back() = 0.0;
    }

    // Same arithmetic as step() but with the control frozen to z[j].
    double replay(const std::vector<double>& cur, const std::vector<double>& z, int j,
                  double dt) const {
        const double* v = cur.data();
        const double dp = (v[j + 1] - v[j]) * inv_dy_;
        const double d2 = (v[j + 1] - 2.0 * v[j] + v[j - 1]) * inv_dy2_;
        const double a = d2 + dp;
        const double zj = z[static_cast<std::size_t>(j)];
        const double value = zj + 0.5 * a * zj * zj;
        return v[j] + dt * (value + drift_[static_cast<std::size_t>(j)] * dp);
    }

private:
    HamiltonianResult optimize(double a) const {
        if (z_grid_ >= 2) return optimal_z_discrete(a, K_, z_grid_);
        return detail::optimal_z_unchecked(a, K_);
    }

    int n_;
    double K_;
    int z_grid_;
    double inv_dy_;
    double inv_dy2_;
    std::vector<double> drift_;
};

[[noreturn]] void report_non_finite(const std::vector<double>& values, double t, double dy) {
    std::size_t j = 0;
    while (j < values.size() && std::isfinite(values[j])) ++j;
    std::ostringstream os;
    os << "solve_period: non-finite value at t=" << t << ", y=" << static_cast<double>(j) * dy;
    throw Error(ErrorCode::numerical, os.str());
}

}  // namespace

double cfl_dt(const GridSpec& grid, const ValidatedModel& model) {
    const double dy = grid.dy();
    const double K2 = model.K() * model.K();
    const double denom = K2 + (0.5 * K2 + model.k_a() * grid.y_max) * dy;
    if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
    return grid.safety * dy * dy / denom;
}

double zero_control_value(const ValidatedModel& model, double t, double y) {
    return -std::exp(model.gamma() * model.k_a() * (model.T() - t)) * std::pow(y, model.gamma());
}

PeriodSolution solve_period(const GridFunction& terminal, double t_start, double t_end,
                            const ValidatedModel& model, const GridSpec& grid, int period_index) {
    validate_grid(grid);
    const int n = grid.n_y;
    if (terminal.size() != static_cast<std::size_t>(n) + 1) {
        throw Error(ErrorCode::invalid_argument, "solve_period: terminal slice does not match the grid");
    }
    if (!(t_start <= t_end)) throw Error(ErrorCode::invalid_argument, "solve_period: t_start must not exceed t_end");
    if (!terminal.all_finite()) throw Error(ErrorCode::numerical, "solve_period: terminal slice is not finite");
    if (terminal[0] != 0.0) throw Error(ErrorCode::invalid_argument, "solve_period: terminal slice must vanish at y = 0");

    const Stepper stepper(model, grid);
    const double length = t_end - t_start;
    const double dt_max = std::min(cfl_dt(grid, model), length);
    const std::size_t n_steps =
        length > 0.0 ? static_cast<std::size_t>(std::ceil(length / dt_max - 1e-9)) : 0;
    const std::size_t stride =
        std::max<std::size_t>(1, (n_steps + static_cast<std::size_t>(grid.checkpoints) - 1) /
                                     static_cast<std::size_t>(grid.checkpoints));
    const auto keep = [&](std::size_t k) {
        return k == 0 || k == n_steps || k % stride == 0 || (k - 1) % stride == 0;
    };

    std::vector<SavedLevel> saved;
    std::vector<double> cur = terminal.values;
    std::vector<double> next(cur.size());
    std::vector<double> z(cur.size());
    const double boundary_scale = std::pow(grid.y_max, model.gamma());
    double t = t_end;
    double dt_in = 0.0;

    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t_next = (k + 1 == n_steps) ? t_start : t_end - static_cast<double>(k + 1) * dt_max;
        const double dt = t - t_next;
        if (dt > dt_max * (1.0 + 1e-9)) {
            throw Error(ErrorCode::invariant, "solve_period: step exceeds the CFL bound");
        }
        stepper.step(cur, next, z, dt);
        next.front() = 0.0;
        next.back() = -std::exp(model.gamma() * model.k_a() * (model.T() - t_next)) * boundary_scale;
        if (keep(k)) saved.push_back({k, t, dt_in, cur, z});

        double sum = 0.0;
        for (double v : next) sum += v;
        if (!std::isfinite(sum)) report_non_finite(next, t_next, grid.dy());

        cur.swap(next);
        t = t_next;
        dt_in = dt;
    }
    stepper.feedback(cur, z);
    saved.push_back({n_steps, t_start, dt_in, cur, z});

    PeriodSolution out;
    out.index = period_index;
    out.dy = grid.dy();
    out.total_steps = n_steps;
    const std::size_t m = saved.size();
    out.times.reserve(m);
    out.surface.reserve(m);
    out.feedback.reserve(m);
    out.step_to_next.assign(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        SavedLevel& level = saved[m - 1 - r];
        out.times.push_back(level.t);
        out.surface.push_back(std::move(level.values));
        out.feedback.push_back(std::move(level.feedback));
    }
    // Ascending index r corresponds to saved[m-1-r]; level r was produced from
    // level r+1 when their step counters differ by one.
    for (std::size_t r = 0; r + 1 < m; ++r) {
        const SavedLevel& earlier = saved[m - 1 - r];
        const SavedLevel& later = saved[m - 2 - r];
        if (earlier.step == later.step + 1) out.step_to_next[r] = earlier.dt_in;
    }
    out.times.front() = t_start;
    return out;
}

double discrete_residual(const PeriodSolution& solution, const ValidatedModel& model,
                         const GridSpec& grid) {
    const Stepper stepper(model, grid);
    const int n = solution.n_y();
    if (n != grid.n_y) throw Error(ErrorCode::invalid_argument, "discrete_residual: grid mismatch");
    const double boundary_scale = std::pow(grid.y_max, model.gamma());
    double worst = 0.0;
    for (std::size_t k = 0; k < solution.n_levels(); ++k) {
        worst = std::max(worst, std::abs(solution.surface[k].front()));
    }
    for (std::size_t k = 0; k + 1 < solution.n_levels(); ++k) {
        const double dt = solution.step_to_next[k];
        if (!(dt > 0.0)) continue;
        const auto& later = solution.surface[k + 1];
        const auto& earlier = solution.surface[k];
        for (int j = 1; j < n; ++j) {
            const double predicted = stepper.replay(later, solution.feedback[k + 1], j, dt);
            worst = std::max(worst, std::abs(earlier[static_cast<std::size_t>(j)] - predicted));
        }
        const double pin =
            -std::exp(model.gamma() * model.k_a() * (model.T() - solution.times[k])) * boundary_scale;
        worst = std::max(worst, std::abs(earlier.back() - pin));
    }
    return worst;
}

TimeBracket bracket_time(const PeriodSolution& s, double t) noexcept {
    const auto& ts = s.times;
    if (ts.size() < 2 || t <= ts.front()) return {0, 0.0};
    if (t >= ts.back()) return {ts.size() - 2, 1.0};
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const auto hi = static_cast<std::size_t>(it - ts.begin());
    const std::size_t lo = hi - 1;
    const double span = ts[hi] - ts[lo];
    return {lo, span > 0.0 ? (t - ts[lo]) / span : 0.0};
}

namespace {

double bilinear(const PeriodSolution& s, const std::vector<std::vector<double>>& data, double t,
                double y, const char* what) {
    const double eps = 1e-12 * std::max(1.0, std::abs(s.t_end()));
    if (!(t >= s.t_start() - eps && t <= s.t_end() + eps)) {
        throw Error(ErrorCode::domain, std::string(what) + ": t outside the period");
    }
    const double y_max = s.dy * s.n_y();
    if (!(y >= 0.0 && y <= y_max * (1.0 + 1e-12))) {
        throw Error(ErrorCode::domain, std::string(what) + ": y outside [0, y_max]");
    }
    if (s.n_levels() == 1) return interpolate(data.front(), s.dy, y);
    const TimeBracket b = bracket_time(s, t);
    const double lo = interpolate(data[b.lower], s.dy, y);
    if (b.weight == 0.0) return lo;
    const double hi = interpolate(data[b.lower + 1], s.dy, y);
    if (b.weight == 1.0) return hi;
    return (1.0 - b.weight) * lo + b.weight * hi;
}

}  // namespace

double eval(const PeriodSolution& solution, double t, double y) {
    return bilinear(solution, solution.surface, t, y, "eval");
}

double eval_feedback(const PeriodSolution& solution, double t, double y) {
    return bilinear(solution, solution.feedback, t, y, "eval_feedback");
}

}  // namespace lumpsum
