#include "lumpsum/hamiltonian.hpp"

#include <cmath>
#include <string>

#include "lumpsum/error.hpp"

namespace lumpsum {

namespace {

void check_args(double a, double K) {
    if (!std::isfinite(a)) throw Error(ErrorCode::numerical, "hamiltonian: curvature aggregate is not finite");
    if (!(K > 0.0) || !std::isfinite(K)) throw Error(ErrorCode::invalid_argument, "hamiltonian: K must be positive");
}

HamiltonianResult scan_grid(double a, double K, int M) {
    HamiltonianResult best{-K, -K + 0.5 * a * K * K, a};
    for (int j = 1; j < M; ++j) {
        const double z = (j == M - 1) ? K : -K + 2.0 * K * j / (M - 1);
        const double value = z + 0.5 * a * z * z;
        if (value > best.value) best = {z, value, a};
    }
    return best;
}

}  // namespace

HamiltonianResult optimal_z(double a, double K) {
    check_args(a, K);
    return detail::optimal_z_unchecked(a, K);
}

double hamiltonian_G(double y, double v_y, double v_yy, double k_a, double K) {
    if (y < 0.0) throw Error(ErrorCode::domain, "hamiltonian_G: y must be nonnegative");
    return k_a * y * v_y + optimal_z(v_y + v_yy, K).value;
}

HamiltonianResult optimal_z_discrete(double a, double K, int M) {
    if (M < 2) throw Error(ErrorCode::invalid_argument, "optimal_z_discrete: M must be at least 2");
    check_args(a, K);
    HamiltonianResult best = scan_grid(a, K, M);
    const HamiltonianResult candidate = detail::optimal_z_unchecked(a, K);
    if (candidate.value >= best.value) best = candidate;
    return best;
}

HamiltonianResult optimal_z_grid_only(double a, double K, int M) {
    if (M < 2) throw Error(ErrorCode::invalid_argument, "optimal_z_grid_only: M must be at least 2");
    check_args(a, K);
    return scan_grid(a, K, M);
}

}  // namespace lumpsum
