#include "lumpsum/grid_function.hpp"

#include <algorithm>
#include <cmath>

namespace lumpsum {

double interpolate(std::span<const double> values, double dy, double y) noexcept {
    const int n = static_cast<int>(values.size()) - 1;
    if (n <= 0) return values.empty() ? 0.0 : values[0];
    if (!(y > 0.0)) return values[0];
    const double s = y / dy;
    if (s >= n) return values[static_cast<std::size_t>(n)];
    const int j = std::min(static_cast<int>(s), n - 1);
    const double w = s - j;
    const auto lo = static_cast<std::size_t>(j);
    if (w == 0.0) return values[lo];
    return (1.0 - w) * values[lo] + w * values[lo + 1];
}

double GridFunction::at(double y) const noexcept { return interpolate(values, dy, y); }

bool GridFunction::all_finite() const noexcept {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

int Indicator::count() const noexcept {
    return static_cast<int>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

std::vector<int> Indicator::nodes() const {
    std::vector<int> out;
    for (std::size_t j = 0; j < mask.size(); ++j) {
        if (mask[j]) out.push_back(static_cast<int>(j));
    }
    return out;
}

}  // namespace lumpsum
