#include "lumpsum/dp_oracle.hpp"

#include <cmath>
#include <sstream>

#include "lumpsum/hjb_solver.hpp"

namespace lumpsum {

namespace {

struct Branch {
    double up = 0.0;
    double stay = 0.0;
    double down = 0.0;
};

Branch trinomial(double z, double y, double k_a, double dt, double dy) {
    const double mean = (0.5 * z * z + k_a * y) * dt;
    const double second = z * z * dt + mean * mean;
    const double diff = mean / dy;            // p_up - p_down
    const double sum = second / (dy * dy);    // p_up + p_down
    Branch b{0.5 * (sum + diff), 1.0 - sum, 0.5 * (sum - diff)};
    const double slack = 1e-14;
    if (b.up < -slack || b.down < -slack || b.stay < -slack) {
        std::ostringstream os;
        os << "dp_oracle: moment matching infeasible at z=" << z << ", y=" << y
           << " (p_up=" << b.up << ", p_stay=" << b.stay << ", p_down=" << b.down << ")";
        throw Error(ErrorCode::invalid_argument, os.str());
    }
    return b;
}

}  // namespace

GridFunction dp_oracle(const ValidatedModel& model, const DpOracleConfig& cfg) {
    if (cfg.n_t < 1 || cfg.n_y < 2 || !(cfg.y_max > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "dp_oracle: need n_t >= 1, n_y >= 2, y_max > 0");
    }
    std::vector<double> z = cfg.z_values;
    if (z.empty()) {
        if (cfg.n_z < 1) throw Error(ErrorCode::invalid_argument, "dp_oracle: n_z must be positive");
        const double K = model.K();
        if (cfg.n_z == 1) {
            z.push_back(0.0);
        } else {
            for (int m = 0; m < cfg.n_z; ++m) z.push_back(-K + 2.0 * K * m / (cfg.n_z - 1));
        }
    }
    const double work = static_cast<double>(cfg.n_t) * (cfg.n_y + 1) * static_cast<double>(z.size());
    if (work > kDpOracleMaxWork) throw Error(ErrorCode::invalid_argument, "dp_oracle: size guard exceeded");

    const double T = model.T();
    const double dt = T / cfg.n_t;
    const double dy = cfg.y_max / cfg.n_y;
    const double gamma = model.gamma();
    const int n = cfg.n_y;

    // Step index of each intermediate payment time.
    std::vector<int> payment_step;
    for (int i = 1; i < model.N(); ++i) {
        const double s = model.period_end(i) / dt;
        const double r = std::round(s);
        if (std::abs(s - r) > 1e-9 * std::max(1.0, s)) {
            throw Error(ErrorCode::invalid_argument, "dp_oracle: payment times must fall on time steps");
        }
        payment_step.push_back(static_cast<int>(r));
    }

    // Transition probabilities per (control, node), validated once.
    std::vector<Branch> table(z.size() * static_cast<std::size_t>(n + 1));
    for (std::size_t m = 0; m < z.size(); ++m) {
        for (int j = 1; j < n; ++j) table[m * (n + 1) + j] = trinomial(z[m], j * dy, model.k_a(), dt, dy);
    }

    std::vector<double> v(static_cast<std::size_t>(n) + 1), next(v.size());
    for (int j = 0; j <= n; ++j) v[static_cast<std::size_t>(j)] = -std::pow(j * dy, gamma);
    for (int step = cfg.n_t - 1; step >= 0; --step) {
        for (int j = 1; j < n; ++j) {
            double best = -INFINITY;
            for (std::size_t m = 0; m < z.size(); ++m) {
                const Branch& b = table[m * (n + 1) + j];
                const double value = z[m] * dt + b.up * v[j + 1] + b.stay * v[j] + b.down * v[j - 1];
                best = std::max(best, value);
            }
            next[static_cast<std::size_t>(j)] = best;
        }
        next.front() = 0.0;
        next.back() = zero_control_value(model, step * dt, cfg.y_max);
        v.swap(next);

        for (int s : payment_step) {
            if (s != step) continue;
            for (int j = n; j >= 1; --j) {
                double best = v[static_cast<std::size_t>(j)];
                for (int m = 0; m < j; ++m) {
                    best = std::max(best, -std::pow((j - m) * dy, gamma) + v[static_cast<std::size_t>(m)]);
                }
                next[static_cast<std::size_t>(j)] = best;
            }
            for (int j = 1; j <= n; ++j) v[static_cast<std::size_t>(j)] = next[static_cast<std::size_t>(j)];
        }
    }
    return GridFunction(std::move(v), dy);
}

}  // namespace lumpsum
