#pragma once

#include <vector>

#include "lumpsum/contract_pipeline.hpp"

namespace lumpsum {

/// Shape parameters (b, c, M) of the barrier family
///   phi(t, y) = -a y^gamma + b e^{(T-t)/T} y^{1/M} + e^{c (T-t)} (1 - e^{-y}).
struct Delta {
    double b = 0.0;
    double c = 0.0;
    double M = 0.0;
};

/// Which exponent the per-period barrier weights use:
/// a_i = 1 / (1 + N - i)^{gamma - 1} (default) or 1 / (1 + N - i)^gamma.
enum class WeightExponent { gamma_minus_one, gamma };

double barrier_weight(int i, int N, double gamma, WeightExponent exponent = WeightExponent::gamma_minus_one);

/// phi together with its partial derivatives, for y > 0.
struct PhiJet {
    double value = 0.0;
    double t = 0.0;
    double y = 0.0;
    double yy = 0.0;
    /// phi_yy + phi_y with the e^{c(T-t)} e^{-y} terms cancelled exactly.
    double curvature = 0.0;
};

double phi_single(double t, double y, double gamma, double a, const Delta& delta, double T);
PhiJet phi_jet(double t, double y, double gamma, double a, const Delta& delta, double T);

/// Barrier with the weight of the period containing t, periods being
/// (T_{i-1}, T_i]; t = 0 uses the first period.
double phi_aggregate(double t, double y, double gamma, const Delta& delta,
                     const std::vector<double>& schedule,
                     WeightExponent exponent = WeightExponent::gamma_minus_one);

/// Constraints on delta under which the barrier's curvature aggregate is
/// negative: M > max(k_a T, 1/(gamma-1), 2), c > 3 k_a,
/// b < M (1/N)^{gamma-1} gamma (gamma-1) / e.
bool satisfies_constraints(const Delta& delta, double gamma, int N, double k_a, double T);

/// Nodes on which the supersolution inequality is checked:
/// n_t times spanning [0, T]; n_y values of y, the first at dy/10 and the
/// rest evenly spaced up to 2 y_max.
struct VerificationGrid {
    double y_max = 8.0;
    double dy = 0.02;
    int n_t = 201;
    int n_y = 401;

    static VerificationGrid from(const GridSpec& grid) { return {grid.y_max, grid.dy(), 201, 401}; }
    double y(int j) const noexcept { return j == 0 ? dy / 10.0 : j * (2.0 * y_max) / (n_y - 1); }
};

struct SupersolutionReport {
    double min_residual = 0.0;
    double t = 0.0;
    double y = 0.0;
    double a = 0.0;
};

/// Minimum over the verification grid and over every period weight a of
///   -phi_t - sup_{|z|<=K} { z + (phi_yy + phi_y) z^2 / 2 } - k_a y phi_y.
SupersolutionReport verify_supersolution(const Delta& delta, double gamma, int N, double k_a, double T,
                                         double K, const VerificationGrid& grid,
                                         WeightExponent exponent = WeightExponent::gamma_minus_one);

/// Candidate values scanned by search_delta0, relative to the constraint
/// bounds: M = M_min + offset, b = fraction * b_max, c = 3 k_a + step.
struct DeltaSearchBox {
    std::vector<double> M_offsets{0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<double> b_fractions{0.9, 0.5, 0.25, 0.1, 0.01};
    std::vector<double> c_steps{0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0, 34.0};
};

/// First (M ascending, b descending, c ascending) constraint-satisfying delta
/// whose verified minimum residual is nonnegative. Throws "no delta found"
/// when the box is exhausted.
Delta search_delta0(double gamma, int N, double k_a, double T, double K, const VerificationGrid& grid,
                    const DeltaSearchBox& box = {},
                    WeightExponent exponent = WeightExponent::gamma_minus_one);

struct SandwichReport {
    double lower_margin = 0.0;  ///< min of v - (zero-control lower bound)
    double upper_margin = 0.0;  ///< min of phi - v
    double lower_t = 0.0, lower_y = 0.0;
    double upper_t = 0.0, upper_y = 0.0;
    std::size_t nodes_checked = 0;

    bool passed(double tolerance) const noexcept {
        return lower_margin >= -tolerance && upper_margin >= -tolerance;
    }
};

/// Checks -e^{gamma k_a (T-t)} y^gamma <= v(t, y) <= phi(t, y) at every stored
/// node of every period. Nodes of period i are compared with the barrier
/// weight a_i, including the period's opening slice.
SandwichReport check_sandwich(const ContractSolution& solution, const Delta& delta,
                              WeightExponent exponent = WeightExponent::gamma_minus_one);

}  // namespace lumpsum
