#ifndef BSNET_SIMULATOR_HPP_
#define BSNET_SIMULATOR_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

#include "bsnet/model.hpp"
#include "bsnet/random.hpp"

namespace bsnet {

enum class CollisionScope {
    per_cycle,          // only packets of the same cycle interact
    continuous_timeline // packets may spill into the next cycle and collide there
};

enum class SubthresholdOverlap {
    harmless, // overlap <= alpha costs nothing beyond BER flips
    erased    // ID symbols inside any overlap decode as coin flips
};

struct SimOptions {
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    CollisionScope collision_scope = CollisionScope::per_cycle;
    SubthresholdOverlap subthreshold_overlap = SubthresholdOverlap::harmless;
};

struct TdrEstimate {
    double tdr = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t dropped_tag_inventories = 0;
    std::uint64_t total_tag_inventories = 0;
    double std_error = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const TdrEstimate &, const TdrEstimate &) = default;
};

CollisionScope parse_collision_scope(std::string_view name);
SubthresholdOverlap parse_subthreshold_overlap(std::string_view name);
std::string_view to_string(CollisionScope scope);
std::string_view to_string(SubthresholdOverlap mode);

/// Fraction of a packet of length t_p covered by another packet when their
/// start times differ by |t_i - t_j|.
double overlap_fraction(double t_i, double t_j, double t_p);

/// True iff the overlap exceeds alpha, i.e. |t_i - t_j| < (1 - alpha) t_p.
bool overlap_corrupts(double t_i, double t_j, double t_p, double alpha);

/// One inventory period. Returns one flag per tag, 1 if at least one of its
/// L packets survived collisions and decoded.
std::vector<std::uint8_t> simulate_inventory(const NetworkConfig &config, const ChannelModel &channel,
                                             const SimOptions &options, TrialStream &stream);

/// Trials run in parallel (OpenMP); results are identical to the serial path.
TdrEstimate estimate_tdr(const NetworkConfig &config, const ChannelModel &channel, const SimOptions &options);

/// Single-threaded reference implementation.
TdrEstimate estimate_tdr_serial(const NetworkConfig &config, const ChannelModel &channel,
                                const SimOptions &options);

} // namespace bsnet

#endif // BSNET_SIMULATOR_HPP_
