#ifndef BSNET_MODEL_HPP_
#define BSNET_MODEL_HPP_

#include <cstdint>

namespace bsnet {

/// Tag packet layout: preamble followed by `n_rep` copies of the tag ID.
class PacketSpec {
  public:
    PacketSpec(std::uint32_t n_rep, double symbol_rate_baud, std::uint32_t preamble_symbols = 40,
               std::uint32_t id_symbols = 16);

    std::uint32_t preamble_symbols() const { return preamble_symbols_; }
    std::uint32_t id_symbols() const { return id_symbols_; }
    std::uint32_t n_rep() const { return n_rep_; }
    double symbol_rate_baud() const { return symbol_rate_baud_; }
    std::uint32_t total_symbols() const { return preamble_symbols_ + id_symbols_ * n_rep_; }

  private:
    std::uint32_t preamble_symbols_;
    std::uint32_t id_symbols_;
    std::uint32_t n_rep_;
    double symbol_rate_baud_;
};

/// K tags, each waking once per cycle, L cycles per inventory period T_R.
/// Construction fails if a packet does not fit in one cycle.
class NetworkConfig {
  public:
    NetworkConfig(std::uint32_t k_tags, std::uint32_t cycles, double inventory_period_s, PacketSpec packet);

    std::uint32_t k_tags() const { return k_tags_; }
    std::uint32_t cycles() const { return cycles_; }
    double inventory_period_s() const { return inventory_period_s_; }
    double cycle_period_s() const { return inventory_period_s_ / cycles_; }
    const PacketSpec &packet() const { return packet_; }

  private:
    std::uint32_t k_tags_;
    std::uint32_t cycles_;
    double inventory_period_s_;
    PacketSpec packet_;
};

struct OccupancyMetrics {
    double d_cycle; // T_p / T_cycle
    double d_inv;   // T_p / T_R
    double d_slot;  // K * d_inv
};

/// Collision zone parameter alpha and channel bit error rate.
class ChannelModel {
  public:
    explicit ChannelModel(double alpha, double ber = 0.0);

    double alpha() const { return alpha_; }
    double beta() const { return 1.0 - alpha_; }
    double ber() const { return ber_; }

  private:
    double alpha_;
    double ber_;
};

class TdrValue {
  public:
    explicit TdrValue(double value);
    double value() const { return value_; }
    operator double() const { return value_; }

  private:
    double value_;
};

double packet_duration(const PacketSpec &spec);
double occupied_bandwidth(const PacketSpec &spec);
OccupancyMetrics occupancies(const NetworkConfig &config);

// Collision-limited TDR, (1 - (1 - beta*D_cycle)^(2(K-1)))^L. The config
// overload ignores channel.ber().
TdrValue tdr_exact(std::uint32_t k_tags, std::uint32_t cycles, double d_cycle, double alpha);
TdrValue tdr_exact(const NetworkConfig &config, const ChannelModel &channel);

// Second-order expansion in beta*K*D_cycle, clamped to [0, 1].
TdrValue tdr_approx_cycle(std::uint32_t k_tags, std::uint32_t cycles, double d_cycle, double alpha);
TdrValue tdr_approx_cycle(const NetworkConfig &config, const ChannelModel &channel);
TdrValue tdr_approx_slot(std::uint32_t cycles, double d_slot, double alpha);

inline constexpr double kApproximationThreshold = 0.35;

bool approximation_valid(std::uint32_t k_tags, double d_cycle, double alpha);
bool approximation_valid(const NetworkConfig &config, const ChannelModel &channel);

/// Probability that a bitwise majority vote over `n_rep` noisy copies decodes
/// the wrong bit. An even split counts as a failure.
double bit_majority_failure(std::uint32_t n_rep, double ber);

/// 1 - (1 - bit_majority_failure)^id_symbols. The preamble is always detected.
double packet_error_rate(const PacketSpec &spec, double ber);

/// Collision and noise combined: a packet survives a cycle when it escapes
/// every corrupting overlap and then decodes.
TdrValue tdr_with_noise(const NetworkConfig &config, const ChannelModel &channel);

/// argmin of tdr_approx_slot over L in [1, l_max], restricted to the cycles
/// where the expansion is valid (beta*L*d_slot < 0.35); L = 1 is always
/// admissible. Ties go to the smaller L.
std::uint32_t optimal_cycles(double d_slot, double alpha, std::uint32_t l_max);

} // namespace bsnet

#endif // BSNET_MODEL_HPP_
