#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lumpsum/error.hpp"

namespace lumpsum {

/// Economic primitives of the benchmark contracting model.
///
/// The agent has power utility U(x) = x^{1/gamma}, discounts at rate k_a and
/// exerts effort with quadratic cost. The principal pays N lump sums at the
/// times schedule[1..N]; schedule[0] is always 0.
struct ModelParams {
    double gamma = 2.0;
    double k_a = 0.0;
    double K = 10.0;   ///< bound on the sensitivity |Z|
    double R_a = 0.0;  ///< reservation utility
    double x0 = 0.0;   ///< initial output
    std::vector<double> schedule{0.0, 4.0};
};

/// Immutable, invariant-checked model. Only `validate` constructs one.
class ValidatedModel {
public:
    double gamma() const noexcept { return p_.gamma; }
    double k_a() const noexcept { return p_.k_a; }
    double K() const noexcept { return p_.K; }
    double R_a() const noexcept { return p_.R_a; }
    double x0() const noexcept { return p_.x0; }
    const std::vector<double>& schedule() const noexcept { return p_.schedule; }

    /// Number of payments.
    int N() const noexcept { return static_cast<int>(p_.schedule.size()) - 1; }
    /// Horizon T = T_N.
    double T() const noexcept { return p_.schedule.back(); }
    /// Start T_{i-1} of the 1-based period i.
    double period_start(int i) const { return p_.schedule.at(static_cast<std::size_t>(i - 1)); }
    /// End T_i of the 1-based period i.
    double period_end(int i) const { return p_.schedule.at(static_cast<std::size_t>(i)); }

    const ModelParams& params() const noexcept { return p_; }

private:
    explicit ValidatedModel(ModelParams p) : p_(std::move(p)) {}
    friend ValidatedModel validate(const ModelParams& params);

    ModelParams p_;
};

/// Checks every model invariant and throws Error(invalid_model) naming the
/// first one violated.
ValidatedModel validate(const ModelParams& params);

/// Discretization of the agent-utility axis [0, y_max] plus scheme knobs.
struct GridSpec {
    double y_max = 8.0;
    int n_y = 400;
    double safety = 0.9;  ///< CFL safety factor in (0, 1]
    /// 0 selects the closed-form pointwise optimizer; M >= 2 maximizes over an
    /// M-point control grid augmented with the closed-form candidate.
    int z_grid_points = 0;
    /// Number of one-step checkpoint pairs kept per period in addition to the
    /// terminal and initial slices. Periods with few steps are stored densely.
    int checkpoints = 200;

    double dy() const noexcept { return y_max / n_y; }
    double node(int j) const noexcept { return j * dy(); }
};

void validate_grid(const GridSpec& grid);

/// y_max = 4 * max(2 R_a, 2), n_y = 400.
GridSpec default_grid(const ValidatedModel& model);

/// U(xi) = xi^{1/gamma}; negative payments are rejected.
double utility(double xi, double gamma);
/// U^{-1}(eta) = eta^gamma; negative utilities are rejected.
double inverse_utility(double eta, double gamma);

/// Reads a model from a JSON object with exactly the keys
/// gamma, k_a, K, R_a, x0, schedule (any subset; absent keys keep defaults).
ModelParams model_from_json_text(const std::string& text);
ModelParams load_model_file(const std::string& path);
std::string model_to_json_text(const ModelParams& params);

}  // namespace lumpsum
