#pragma once

namespace lumpsum {

/// Pointwise maximizer of z -> z + a z^2 / 2 over |z| <= K, where the
/// curvature aggregate is a = v_y + v_yy.
struct HamiltonianResult {
    double z_star = 0.0;
    double value = 0.0;
    double curvature = 0.0;
};

namespace detail {

// Hot-loop kernel: no argument checks.
inline HamiltonianResult optimal_z_unchecked(double a, double K) noexcept {
    // For a < 0 the map is concave with vertex at -1/a; otherwise it is convex
    // (or linear) and the right endpoint wins because z enters with slope +1.
    double z = K;
    if (a * K < -1.0) z = -1.0 / a;
    return {z, z + 0.5 * a * z * z, a};
}

}  // namespace detail

/// Closed-form supremum of z + a z^2 / 2 over [-K, K].
HamiltonianResult optimal_z(double a, double K);

/// k_a y v_y + sup_{|z| <= K} { z + (v_y + v_yy) z^2 / 2 }.
double hamiltonian_G(double y, double v_y, double v_yy, double k_a, double K);

/// Maximum over the uniform grid {-K + 2K j/(M-1)} together with the
/// closed-form candidate. With the candidate included the result coincides
/// with optimal_z.
HamiltonianResult optimal_z_discrete(double a, double K, int M);

/// Grid-only variant (no closed-form candidate); used to observe the
/// monotone approach as M grows.
HamiltonianResult optimal_z_grid_only(double a, double K, int M);

}  // namespace lumpsum
