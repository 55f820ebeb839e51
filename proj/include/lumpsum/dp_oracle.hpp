#pragma once

#include <vector>

#include "lumpsum/grid_function.hpp"
#include "lumpsum/model.hpp"

namespace lumpsum {

/// Discrete-time dynamic programme used as an independent check of the PDE
/// solver on small instances.
struct DpOracleConfig {
    int n_t = 400;         ///< time steps over [0, T]; payment times must fall on steps
    int n_y = 40;          ///< cells on [0, y_max]
    int n_z = 101;         ///< uniform control grid on [-K, K]
    double y_max = 4.0;
    /// Explicit control set; overrides n_z when non-empty.
    std::vector<double> z_values;
};

inline constexpr double kDpOracleMaxWork = 1e7;

/// Value table at t = 0 of
///   V_n(y) = max_z { z dt + E[V_{n+1}(Y')] },  V_{n_t}(y) = -y^gamma,
/// where Y' moves to y - dy, y, y + dy with probabilities matching the
/// mean (z^2/2 + k_a y) dt and second moment z^2 dt + mean^2 of
/// dY = (z^2/2 + k_a y) dt + z dW. At payment times
/// V(y) <- max over nodes y' <= y of -(y - y')^gamma + V(y'). V(0) = 0 and
/// V(y_max) follows the zero-control value. Throws when
/// n_t * (n_y + 1) * |z-grid| exceeds kDpOracleMaxWork or when the
/// probabilities leave [0, 1], naming the offending (z, y).
GridFunction dp_oracle(const ValidatedModel& model, const DpOracleConfig& cfg);

}  // namespace lumpsum
