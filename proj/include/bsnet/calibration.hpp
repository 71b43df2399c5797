#ifndef BSNET_CALIBRATION_HPP_
#define BSNET_CALIBRATION_HPP_

#include <span>
#include <utility>
#include <vector>

#include "bsnet/model.hpp"

namespace bsnet {

struct MeasuredPoint {
    NetworkConfig config;
    double measured_tdr;
    double weight = 1.0;
};

struct AlphaFit {
    double alpha_hat = 0.0;
    double rmse = 0.0;
    double grid_step = 0.0;
    std::vector<std::pair<double, double>> curve; // (alpha, rmse)
    bool degenerate = false;                      // RMSE curve flat to within 1e-6
};

inline constexpr double kDefaultAlphaGridStep = 0.001;
inline constexpr double kDegenerateSpread = 1e-6;

/// Weighted RMSE between tdr_exact at `alpha` and the measurements.
double rmse(std::span<const MeasuredPoint> points, double alpha);

/// Grid search over {0, step, 2 step, ..., 1}; ties go to the smaller alpha.
AlphaFit fit_alpha(std::span<const MeasuredPoint> points, double grid_step = kDefaultAlphaGridStep);

} // namespace bsnet

#endif // BSNET_CALIBRATION_HPP_
