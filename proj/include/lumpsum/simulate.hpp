#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "lumpsum/contract_pipeline.hpp"

namespace lumpsum {

struct SimConfig {
    int n_paths = 100000;
    int n_steps_per_period = 200;
    std::uint64_t seed = 20240601;
    double y0 = 0.0;    ///< initial promised utility
    unsigned threads = 0;  ///< 0 = all cores; results do not depend on it
};

/// Replaces parts of the optimal policy, for diagnostics.
struct PolicyOverride {
    std::optional<double> constant_z;  ///< use this sensitivity everywhere
    bool suppress_payments = false;    ///< skip the intermediate payments
};

struct SimReport {
    double estimate = 0.0;   ///< mean principal payoff
    double std_error = 0.0;
    double pde_value = 0.0;  ///< x0 + v(0, y0)
    double z_score = 0.0;    ///< (estimate - pde_value) / std_error, 0 when std_error = 0
    int n_paths = 0;
    std::uint64_t seed = 0;
    int n_steps_per_period = 0;
    double max_dt = 0.0;           ///< largest Euler step used
    double clamp_fraction = 0.0;   ///< share of paths absorbed at Y = 0 by clamping
};

/// Simulates the continuation utility
///   dY = (Z^2/2 + k_a Y) dt + Z dB,  Y(T_i) = Y(T_i-) - eta*_i(Y(T_i-)),
/// under the solved feedback Z = z*(t, Y), and averages the principal payoff
///   x0 + sum Z dt - sum_i (eta_i)^gamma - Y_T^gamma.
/// Each Euler step integrates the linear part k_a Y exactly.
/// If `paths_csv` is non-empty, writes path,payoff,Y_T,sum_eta per path.
SimReport simulate_principal(const ContractSolution& solution, const SimConfig& cfg,
                             const PolicyOverride& policy = {}, const std::string& paths_csv = {});

/// Bounded effort perturbation eps(t, y), |eps| <= 1.
struct Deviation {
    std::function<double(double t, double y)> eps;
    std::string label;

    static Deviation constant(double value);
};

struct DeviationReport {
    double J_star = 0.0;  ///< agent objective under effort z*
    double J_dev = 0.0;   ///< agent objective under effort z* + eps
    double se_star = 0.0;
    double se_dev = 0.0;
    double se_diff = 0.0;  ///< standard error of the paired difference J_dev - J_star
    int n_paths = 0;
    std::uint64_t seed = 0;
    std::string label;
};

/// Agent's realized objective
///   sum_i e^{-k_a T_i} eta_i + e^{-k_a T} Y_T - 1/2 int e^{-k_a s} alpha^2 ds
/// under effort alpha = z* and alpha = z* + eps, with the payment rule held
/// fixed and both arms driven by the same Brownian increments. Under
/// effort alpha the utility drifts by k_a Y + z^2/2 + z (alpha - z).
DeviationReport agent_deviation(const ContractSolution& solution, const SimConfig& cfg,
                                const Deviation& deviation);

}  // namespace lumpsum
