#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lumpsum {

/// A scalar function sampled at y_j = j * dy, j = 0..n.
struct GridFunction {
    std::vector<double> values;
    double dy = 0.0;

    GridFunction() = default;
    GridFunction(std::vector<double> v, double spacing) : values(std::move(v)), dy(spacing) {}

    std::size_t size() const noexcept { return values.size(); }
    int n_cells() const noexcept { return static_cast<int>(values.size()) - 1; }
    double y_max() const noexcept { return dy * n_cells(); }
    double y(int j) const noexcept { return j * dy; }
    double operator[](std::size_t j) const noexcept { return values[j]; }

    /// Piecewise-linear interpolation; y is clamped to [0, y_max].
    double at(double y) const noexcept;
    bool all_finite() const noexcept;
};

/// Samples f on the n+1 nodes of [0, y_max].
template <typename F>
GridFunction sample(F&& f, double y_max, int n) {
    GridFunction g(std::vector<double>(static_cast<std::size_t>(n) + 1), y_max / n);
    for (int j = 0; j <= n; ++j) g.values[static_cast<std::size_t>(j)] = f(g.y(j));
    return g;
}

/// Node-wise 0/1 set over the y-grid.
struct Indicator {
    std::vector<std::uint8_t> mask;
    double dy = 0.0;

    int count() const noexcept;
    bool contains(std::size_t j) const noexcept { return mask[j] != 0; }
    std::vector<int> nodes() const;
};

/// Linear interpolation inside a sampled span with spacing dy, clamped.
double interpolate(std::span<const double> values, double dy, double y) noexcept;

}  // namespace lumpsum
