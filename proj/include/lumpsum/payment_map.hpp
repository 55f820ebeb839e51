#pragma once

#include "lumpsum/grid_function.hpp"

namespace lumpsum {

/// Value just before the payment time T_i and the minimal optimal payment
/// (in utils) as functions of the pre-payment continuation utility.
struct PaymentLayer {
    GridFunction f;
    GridFunction eta_star;
    int index = 1;
};

/// Objectives within this distance of the maximum count as maximal.
inline constexpr double kPaymentTieTolerance = 1e-10;

/// f(y) = max_{0 <= eta <= y} -eta^gamma + v_next(y - eta), with eta searched
/// on the y-grid refined `refine` times and v_next linearly interpolated
/// off-node. Among near-maximal candidates the smallest eta is returned.
PaymentLayer intermediate_value(const GridFunction& v_next, double gamma, int index = 1,
                                int refine = 4);

}  // namespace lumpsum
