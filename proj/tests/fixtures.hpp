#ifndef BSNET_TESTS_FIXTURES_HPP_
#define BSNET_TESTS_FIXTURES_HPP_

#include <algorithm>
#include <random>
#include <vector>

#include "bsnet/calibration.hpp"
#include "bsnet/model.hpp"

namespace fixtures {

// Wired-testbed-like measurement grid: 1 ms packets (N_rep = 10 at 200 kBaud),
// K = 2..8 tags, cycle periods 2.5 to 20 ms, L = 1..4.
inline std::vector<bsnet::NetworkConfig> testbed_grid() {
    std::vector<bsnet::NetworkConfig> out;
    for (std::uint32_t k = 2; k <= 8; ++k)
        for (double t_cycle : {2.5e-3, 5e-3, 10e-3, 20e-3})
            for (std::uint32_t l = 1; l <= 4; ++l)
                out.emplace_back(k, l, l * t_cycle, bsnet::PacketSpec(10, 200e3));
    return out;
}

// Measurements drawn from the closed form at `alpha`, with additive Gaussian
// noise, clipped to [0, 1].
inline std::vector<bsnet::MeasuredPoint> synthetic_points(const std::vector<bsnet::NetworkConfig> &configs,
                                                          double alpha, double sigma, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<bsnet::MeasuredPoint> out;
    for (const auto &c : configs) {
        double v = bsnet::tdr_exact(c, bsnet::ChannelModel(alpha)).value();
        if (sigma > 0.0)
            v = std::clamp(v + noise(gen), 0.0, 1.0);
        out.push_back(bsnet::MeasuredPoint{c, v, 1.0});
    }
    return out;
}

} // namespace fixtures

#endif // BSNET_TESTS_FIXTURES_HPP_
