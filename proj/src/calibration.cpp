#include "bsnet/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace bsnet {

namespace {

void check_points(std::span<const MeasuredPoint> points) {
    if (points.empty())
        throw std::invalid_argument("calibration needs at least one measured point");
    double total = 0.0;
    for (const auto &p : points) {
        if (!(p.measured_tdr >= 0.0 && p.measured_tdr <= 1.0))
            throw std::invalid_argument(fmt::format("measured tdr must lie in [0, 1], got {}", p.measured_tdr));
        if (!(p.weight >= 0.0) || !std::isfinite(p.weight))
            throw std::invalid_argument(fmt::format("weight must be nonnegative, got {}", p.weight));
        total += p.weight;
    }
    if (!(total > 0.0))
        throw std::invalid_argument("total weight must be positive");
}

double rmse_unchecked(std::span<const MeasuredPoint> points, double alpha) {
    double sum = 0.0;
    double weights = 0.0;
    for (const auto &p : points) {
        const double err = tdr_exact(p.config, ChannelModel(alpha)) - p.measured_tdr;
        sum += p.weight * err * err;
        weights += p.weight;
    }
    return std::sqrt(sum / weights);
}

} // namespace

double rmse(std::span<const MeasuredPoint> points, double alpha) {
    check_points(points);
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument(fmt::format("alpha must lie in [0, 1], got {}", alpha));
    return rmse_unchecked(points, alpha);
}

AlphaFit fit_alpha(std::span<const MeasuredPoint> points, double grid_step) {
    check_points(points);
    if (!(grid_step > 0.0 && grid_step <= 0.1))
        throw std::invalid_argument(fmt::format("grid step must lie in (0, 0.1], got {}", grid_step));

    // Grid points are i * step; 1 is appended when the step does not divide it.
    // Dividing by an integral 1/step keeps grid values equal to their decimal literals.
    const double inverse = 1.0 / grid_step;
    const bool integral = std::abs(inverse - std::round(inverse)) < 1e-9;
    const auto steps = static_cast<std::int64_t>(std::floor(inverse + 1e-9));
    std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
    for (std::int64_t i = 0; i <= steps; ++i) {
        const auto x = static_cast<double>(i);
        grid[static_cast<std::size_t>(i)] = std::min(1.0, integral ? x / std::round(inverse) : x * grid_step);
    }
    if (grid.back() < 1.0 - 1e-12)
        grid.push_back(1.0);

    std::vector<double> values(grid.size());
    const auto n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        values[static_cast<std::size_t>(i)] = rmse_unchecked(points, grid[static_cast<std::size_t>(i)]);

    AlphaFit fit;
    fit.grid_step = grid_step;
    fit.curve.reserve(grid.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        fit.curve.emplace_back(grid[i], values[i]);
        if (values[i] < values[best])
            best = i;
    }
    fit.alpha_hat = grid[best];
    fit.rmse = values[best];
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    fit.degenerate = (*hi - *lo) < kDegenerateSpread;
    return fit;
}

} // namespace bsnet
