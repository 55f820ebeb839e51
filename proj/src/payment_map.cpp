#include "lumpsum/payment_map.hpp"

#include <algorithm>
#include <cmath>

#include "lumpsum/error.hpp"

namespace lumpsum {

PaymentLayer intermediate_value(const GridFunction& v_next, double gamma, int index, int refine) {
    if (v_next.size() < 2) throw Error(ErrorCode::invalid_argument, "intermediate_value: empty slice");
    if (v_next[0] != 0.0) {
        throw Error(ErrorCode::invalid_argument, "intermediate_value: v_next(0) must be 0");
    }
    if (refine < 1) throw Error(ErrorCode::invalid_argument, "intermediate_value: refine must be positive");
    if (!v_next.all_finite()) throw Error(ErrorCode::numerical, "intermediate_value: v_next is not finite");

    const int n = v_next.n_cells();
    const int m = n * refine;
    const double h = v_next.dy / refine;

    // Sub-grid samples of v_next and of the payment cost eta^gamma.
    std::vector<double> w(static_cast<std::size_t>(m) + 1);
    std::vector<double> cost(static_cast<std::size_t>(m) + 1);
    for (int s = 0; s <= m; ++s) {
        const int j = s / refine;
        const int r = s % refine;
        const auto js = static_cast<std::size_t>(j);
        w[static_cast<std::size_t>(s)] =
            r == 0 ? v_next[js]
                   : (1.0 - static_cast<double>(r) / refine) * v_next[js] +
                         (static_cast<double>(r) / refine) * v_next[js + 1];
        cost[static_cast<std::size_t>(s)] = std::pow(s * h, gamma);
    }

    PaymentLayer layer;
    layer.index = index;
    layer.f = GridFunction(std::vector<double>(static_cast<std::size_t>(n) + 1), v_next.dy);
    layer.eta_star = GridFunction(std::vector<double>(static_cast<std::size_t>(n) + 1), v_next.dy);
    for (int j = 0; j <= n; ++j) {
        const int top = j * refine;
        double best = -INFINITY;
        for (int k = 0; k <= top; ++k) {
            best = std::max(best, w[static_cast<std::size_t>(top - k)] - cost[static_cast<std::size_t>(k)]);
        }
        int k_star = 0;
        while (w[static_cast<std::size_t>(top - k_star)] - cost[static_cast<std::size_t>(k_star)] <
               best - kPaymentTieTolerance) {
            ++k_star;
        }
        layer.f.values[static_cast<std::size_t>(j)] = best;
        layer.eta_star.values[static_cast<std::size_t>(j)] = k_star * h;
    }
    return layer;
}

}  // namespace lumpsum
