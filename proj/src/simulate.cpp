#include "lumpsum/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>

#include "lumpsum/io.hpp"
#include "lumpsum/parallel.hpp"
#include "lumpsum/rng.hpp"

namespace lumpsum {

namespace {

// Per-period step layout shared by every path: step sizes, the exact
// one-step growth factors of the linear drift, and the stored time levels
// bracketing each step's left endpoint.
struct PeriodPlan {
    const PeriodSolution* period = nullptr;
    double t0 = 0.0;
    double dt = 0.0;
    double sqrt_dt = 0.0;
    double growth = 1.0;    // e^{k_a dt}
    double integral = 0.0;  // int_0^dt e^{k_a s} ds
    std::vector<TimeBracket> brackets;
};

std::vector<PeriodPlan> make_plan(const ContractSolution& solution, int n_steps) {
    const ValidatedModel& model = solution.model;
    std::vector<PeriodPlan> plan(static_cast<std::size_t>(model.N()));
    for (int i = 1; i <= model.N(); ++i) {
        PeriodPlan& p = plan[static_cast<std::size_t>(i - 1)];
        p.period = &solution.period(i);
        p.t0 = model.period_start(i);
        p.dt = (model.period_end(i) - p.t0) / n_steps;
        p.sqrt_dt = std::sqrt(p.dt);
        const double k = model.k_a();
        p.growth = std::exp(k * p.dt);
        p.integral = k > 0.0 ? std::expm1(k * p.dt) / k : p.dt;
        p.brackets.reserve(static_cast<std::size_t>(n_steps));
        for (int s = 0; s < n_steps; ++s) p.brackets.push_back(bracket_time(*p.period, p.t0 + s * p.dt));
    }
    return plan;
}

double feedback_at(const PeriodPlan& p, int step, double y) noexcept {
    const PeriodSolution& s = *p.period;
    if (s.n_levels() == 1) return interpolate(s.feedback.front(), s.dy, y);
    const TimeBracket b = p.brackets[static_cast<std::size_t>(step)];
    const double lo = interpolate(s.feedback[b.lower], s.dy, y);
    if (b.weight == 0.0) return lo;
    const double hi = interpolate(s.feedback[b.lower + 1], s.dy, y);
    return (1.0 - b.weight) * lo + b.weight * hi;
}

void check_config(const ContractSolution& solution, const SimConfig& cfg) {
    if (solution.periods.empty()) throw Error(ErrorCode::invalid_argument, "simulate: contract is not solved");
    if (cfg.n_paths < 1) throw Error(ErrorCode::invalid_argument, "simulate: n_paths must be at least 1");
    if (cfg.n_steps_per_period < 1) {
        throw Error(ErrorCode::invalid_argument, "simulate: n_steps_per_period must be at least 1");
    }
    if (!(cfg.y0 >= 0.0 && cfg.y0 <= solution.grid.y_max)) {
        throw Error(ErrorCode::domain, "simulate: y0 must lie in [0, y_max]");
    }
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& x) {
    const auto n = static_cast<double>(x.size());
    const double mean = pairwise_sum(x) / n;
    if (x.size() < 2) return {mean, 0.0};
    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
    return {mean, std::sqrt(pairwise_sum(sq) / (n - 1.0) / n)};
}

}  // namespace

SimReport simulate_principal(const ContractSolution& solution, const SimConfig& cfg, const PolicyOverride& policy,
                             const std::string& paths_csv) {
    check_config(solution, cfg);
    const ValidatedModel& model = solution.model;
    const double gamma = model.gamma();
    const int N = model.N();
    const std::vector<PeriodPlan> plan = make_plan(solution, cfg.n_steps_per_period);
    const auto n_paths = static_cast<std::size_t>(cfg.n_paths);

    std::vector<double> payoff(n_paths), final_y(n_paths), paid(n_paths);
    std::vector<std::uint8_t> clamped(n_paths, 0);

    parallel_for(n_paths, cfg.threads, [&](std::size_t path) {
        Philox rng(cfg.seed, path);
        double y = cfg.y0;
        double value = model.x0();
        double eta_total = 0.0;
        bool absorbed = false;
        for (int i = 1; i <= N; ++i) {
            const PeriodPlan& p = plan[static_cast<std::size_t>(i - 1)];
            for (int s = 0; s < cfg.n_steps_per_period; ++s) {
                const double xi = rng.normal();
                double z = 0.0;
                if (!absorbed) z = policy.constant_z ? *policy.constant_z : feedback_at(p, s, y);
                value += z * p.dt;
                y = y * p.growth + 0.5 * z * z * p.integral + z * p.sqrt_dt * xi;
                if (y < 0.0) {
                    y = 0.0;
                    absorbed = true;
                }
            }
            if (i < N && !policy.suppress_payments) {
                const double eta = std::clamp(solution.payment(i).eta_star.at(y), 0.0, y);
                y -= eta;
                value -= std::pow(eta, gamma);
                eta_total += eta;
            }
        }
        value -= std::pow(y, gamma);
        payoff[path] = value;
        final_y[path] = y;
        paid[path] = eta_total;
        clamped[path] = absorbed ? 1 : 0;
    });

    const MeanSe stats = mean_and_se(payoff);
    SimReport r;
    r.estimate = stats.mean;
    r.std_error = stats.se;
    r.pde_value = model.x0() + eval(solution.period(1), 0.0, cfg.y0);
    r.z_score = r.std_error > 0.0 ? (r.estimate - r.pde_value) / r.std_error : 0.0;
    r.n_paths = cfg.n_paths;
    r.seed = cfg.seed;
    r.n_steps_per_period = cfg.n_steps_per_period;
    for (const PeriodPlan& p : plan) r.max_dt = std::max(r.max_dt, p.dt);
    r.clamp_fraction =
        static_cast<double>(std::count(clamped.begin(), clamped.end(), std::uint8_t{1})) / static_cast<double>(n_paths);

    if (!paths_csv.empty()) {
        std::string text = "path,payoff,Y_T,sum_eta\n";
        for (std::size_t k = 0; k < n_paths; ++k) {
            text += std::to_string(k) + ',' + format_double(payoff[k]) + ',' + format_double(final_y[k]) + ',' +
                    format_double(paid[k]) + '\n';
        }
        write_text_file(paths_csv, text);
    }
    return r;
}

Deviation Deviation::constant(double value) {
    char label[64];
    std::snprintf(label, sizeof label, "constant %+g", value);
    return {[value](double, double) { return value; }, label};
}

DeviationReport agent_deviation(const ContractSolution& solution, const SimConfig& cfg, const Deviation& deviation) {
    check_config(solution, cfg);
    if (!deviation.eps) throw Error(ErrorCode::invalid_argument, "agent_deviation: deviation is empty");
    const ValidatedModel& model = solution.model;
    const double k = model.k_a();
    const int N = model.N();
    const std::vector<PeriodPlan> plan = make_plan(solution, cfg.n_steps_per_period);
    const auto n_paths = static_cast<std::size_t>(cfg.n_paths);

    struct Arm {
        double y = 0.0;
        double J = 0.0;
        bool absorbed = false;
    };
    // Advances one arm by a step; `eps` is the effort perturbation.
    const auto advance = [](Arm& a, const PeriodPlan& p, double z, double eps, double xi, double weight) {
        const double alpha = z + eps;
        a.J -= 0.5 * weight * alpha * alpha * p.dt;
        a.y = a.y * p.growth + (0.5 * z * z + z * eps) * p.integral + z * p.sqrt_dt * xi;
        if (a.y < 0.0) {
            a.y = 0.0;
            a.absorbed = true;
        }
    };
    const auto pay = [](Arm& a, const PaymentLayer& layer, double weight) {
        const double eta = std::clamp(layer.eta_star.at(a.y), 0.0, a.y);
        a.y -= eta;
        a.J += weight * eta;
    };

    std::vector<double> j_star(n_paths), j_dev(n_paths), diff(n_paths);
    parallel_for(n_paths, cfg.threads, [&](std::size_t path) {
        Philox rng(cfg.seed, path);
        Arm star{cfg.y0}, dev{cfg.y0};
        for (int i = 1; i <= N; ++i) {
            const PeriodPlan& p = plan[static_cast<std::size_t>(i - 1)];
            for (int s = 0; s < cfg.n_steps_per_period; ++s) {
                const double t = p.t0 + s * p.dt;
                const double weight = std::exp(-k * t);
                const double xi = rng.normal();
                const double z_star = star.absorbed ? 0.0 : feedback_at(p, s, star.y);
                advance(star, p, z_star, 0.0, xi, weight);
                const double z_dev = dev.absorbed ? 0.0 : feedback_at(p, s, dev.y);
                const double eps = deviation.eps(t, dev.y);
                if (!(std::abs(eps) <= 1.0)) {
                    throw Error(ErrorCode::invalid_argument, "agent_deviation: deviation exceeds |eps| <= 1");
                }
                advance(dev, p, z_dev, eps, xi, weight);
            }
            if (i < N) {
                const double weight = std::exp(-k * model.period_end(i));
                pay(star, solution.payment(i), weight);
                pay(dev, solution.payment(i), weight);
            }
        }
        const double terminal = std::exp(-k * model.T());
        star.J += terminal * star.y;
        dev.J += terminal * dev.y;
        j_star[path] = star.J;
        j_dev[path] = dev.J;
        diff[path] = dev.J - star.J;
    });

    const MeanSe s = mean_and_se(j_star);
    const MeanSe d = mean_and_se(j_dev);
    const MeanSe delta = mean_and_se(diff);
    DeviationReport r;
    r.J_star = s.mean;
    r.J_dev = d.mean;
    r.se_star = s.se;
    r.se_dev = d.se;
    r.se_diff = delta.se;
    r.n_paths = cfg.n_paths;
    r.seed = cfg.seed;
    r.label = deviation.label;
    return r;
}

}  // namespace lumpsum
