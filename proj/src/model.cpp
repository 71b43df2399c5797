#include "bsnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace bsnet {

namespace {

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

void require_fraction(double v, const char *name) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument(fmt::format("{} must lie in [0, 1], got {}", name, v));
}

} // namespace

PacketSpec::PacketSpec(std::uint32_t n_rep, double symbol_rate_baud, std::uint32_t preamble_symbols,
                       std::uint32_t id_symbols)
    : preamble_symbols_(preamble_symbols), id_symbols_(id_symbols), n_rep_(n_rep),
      symbol_rate_baud_(symbol_rate_baud) {
    if (n_rep_ < 1)
        throw std::invalid_argument("n_rep must be >= 1");
    if (id_symbols_ < 1)
        throw std::invalid_argument("id_symbols must be >= 1");
    if (!(symbol_rate_baud_ > 0.0) || !std::isfinite(symbol_rate_baud_))
        throw std::invalid_argument(fmt::format("symbol rate must be positive, got {}", symbol_rate_baud_));
}

NetworkConfig::NetworkConfig(std::uint32_t k_tags, std::uint32_t cycles, double inventory_period_s,
                             PacketSpec packet)
    : k_tags_(k_tags), cycles_(cycles), inventory_period_s_(inventory_period_s), packet_(packet) {
    if (k_tags_ < 1)
        throw std::invalid_argument("k_tags must be >= 1");
    if (cycles_ < 1)
        throw std::invalid_argument("cycles must be >= 1");
    if (!(inventory_period_s_ > 0.0) || !std::isfinite(inventory_period_s_))
        throw std::invalid_argument(fmt::format("inventory period must be positive, got {}", inventory_period_s_));
    const double t_p = packet_duration(packet_);
    if (t_p > cycle_period_s())
        throw std::invalid_argument(
            fmt::format("packet duration {} s exceeds cycle period {} s", t_p, cycle_period_s()));
}

ChannelModel::ChannelModel(double alpha, double ber) : alpha_(alpha), ber_(ber) {
    require_fraction(alpha_, "alpha");
    if (!(ber_ >= 0.0 && ber_ <= 0.5))
        throw std::invalid_argument(fmt::format("ber must lie in [0, 0.5], got {}", ber_));
}

TdrValue::TdrValue(double value) : value_(value) { require_fraction(value_, "tdr"); }

double packet_duration(const PacketSpec &spec) {
    return static_cast<double>(spec.total_symbols()) / spec.symbol_rate_baud();
}

double occupied_bandwidth(const PacketSpec &spec) { return 6.0 * spec.symbol_rate_baud(); }

OccupancyMetrics occupancies(const NetworkConfig &config) {
    const double t_p = packet_duration(config.packet());
    OccupancyMetrics m{};
    m.d_cycle = t_p / config.cycle_period_s();
    m.d_inv = t_p / config.inventory_period_s();
    m.d_slot = config.k_tags() * m.d_inv;
    return m;
}

TdrValue tdr_exact(std::uint32_t k_tags, std::uint32_t cycles, double d_cycle, double alpha) {
    const double beta = 1.0 - alpha;
    if (k_tags <= 1 || beta <= 0.0 || d_cycle <= 0.0)
        return TdrValue(0.0);
    // P(no corrupting neighbour) = (1 - beta*D)^(2(K-1))
    const double clear = std::exp(2.0 * (k_tags - 1.0) * std::log1p(-beta * d_cycle));
    return TdrValue(clamp_unit(std::pow(1.0 - clear, cycles)));
}

TdrValue tdr_exact(const NetworkConfig &config, const ChannelModel &channel) {
    return tdr_exact(config.k_tags(), config.cycles(), occupancies(config).d_cycle, channel.alpha());
}

TdrValue tdr_approx_cycle(std::uint32_t k_tags, std::uint32_t cycles, double d_cycle, double alpha) {
    const double x = (1.0 - alpha) * k_tags * d_cycle;
    return TdrValue(clamp_unit(std::pow(clamp_unit(2.0 * x - 2.0 * x * x), cycles)));
}

TdrValue tdr_approx_cycle(const NetworkConfig &config, const ChannelModel &channel) {
    return tdr_approx_cycle(config.k_tags(), config.cycles(), occupancies(config).d_cycle, channel.alpha());
}

TdrValue tdr_approx_slot(std::uint32_t cycles, double d_slot, double alpha) {
    const double x = (1.0 - alpha) * cycles * d_slot;
    return TdrValue(clamp_unit(std::pow(clamp_unit(2.0 * x - 2.0 * x * x), cycles)));
}

bool approximation_valid(std::uint32_t k_tags, double d_cycle, double alpha) {
    return (1.0 - alpha) * k_tags * d_cycle < kApproximationThreshold;
}

bool approximation_valid(const NetworkConfig &config, const ChannelModel &channel) {
    return approximation_valid(config.k_tags(), occupancies(config).d_cycle, channel.alpha());
}

double bit_majority_failure(std::uint32_t n_rep, double ber) {
    if (!(ber >= 0.0 && ber <= 0.5))
        throw std::invalid_argument(fmt::format("ber must lie in [0, 0.5], got {}", ber));
    if (n_rep < 1)
        throw std::invalid_argument("n_rep must be >= 1");
    if (ber == 0.0)
        return 0.0;
    // Sum the binomial tail k >= n/2 with the pmf built up incrementally.
    double pmf = std::pow(1.0 - ber, n_rep); // k = 0
    double fail = 0.0;
    for (std::uint32_t k = 0; k <= n_rep; ++k) {
        if (2 * k >= n_rep)
            fail += pmf;
        pmf *= static_cast<double>(n_rep - k) / (k + 1.0) * ber / (1.0 - ber);
    }
    return clamp_unit(fail);
}

double packet_error_rate(const PacketSpec &spec, double ber) {
    const double q = bit_majority_failure(spec.n_rep(), ber);
    return clamp_unit(-std::expm1(spec.id_symbols() * std::log1p(-q)));
}

TdrValue tdr_with_noise(const NetworkConfig &config, const ChannelModel &channel) {
    const double collided = tdr_exact(config.k_tags(), 1, occupancies(config).d_cycle, channel.alpha());
    const double per = packet_error_rate(config.packet(), channel.ber());
    const double cycle_fail = 1.0 - (1.0 - collided) * (1.0 - per);
    return TdrValue(clamp_unit(std::pow(cycle_fail, config.cycles())));
}

std::uint32_t optimal_cycles(double d_slot, double alpha, std::uint32_t l_max) {
    if (l_max < 1)
        throw std::invalid_argument("l_max must be >= 1");
    const double beta = 1.0 - alpha;
    std::uint32_t best = 1;
    double best_tdr = tdr_approx_slot(1, d_slot, alpha);
    for (std::uint32_t l = 2; l <= l_max; ++l) {
        if (!(beta * l * d_slot < kApproximationThreshold))
            break;
        const double v = tdr_approx_slot(l, d_slot, alpha);
        if (v < best_tdr) {
            best_tdr = v;
            best = l;
        }
    }
    return best;
}

} // namespace bsnet
