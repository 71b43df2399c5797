#include "bsnet/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/core.h>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bsnet {

CollisionScope parse_collision_scope(std::string_view name) {
    if (name == "per_cycle")
        return CollisionScope::per_cycle;
    if (name == "continuous_timeline")
        return CollisionScope::continuous_timeline;
    throw std::invalid_argument(fmt::format("unknown collision scope '{}'", name));
}

SubthresholdOverlap parse_subthreshold_overlap(std::string_view name) {
    if (name == "harmless")
        return SubthresholdOverlap::harmless;
    if (name == "erased")
        return SubthresholdOverlap::erased;
    throw std::invalid_argument(fmt::format("unknown subthreshold overlap mode '{}'", name));
}

std::string_view to_string(CollisionScope scope) {
    return scope == CollisionScope::per_cycle ? "per_cycle" : "continuous_timeline";
}

std::string_view to_string(SubthresholdOverlap mode) {
    return mode == SubthresholdOverlap::harmless ? "harmless" : "erased";
}

double overlap_fraction(double t_i, double t_j, double t_p) {
    return std::max(0.0, t_p - std::abs(t_i - t_j)) / t_p;
}

bool overlap_corrupts(double t_i, double t_j, double t_p, double alpha) {
    return std::abs(t_i - t_j) < (1.0 - alpha) * t_p;
}

namespace {

// Scratch buffers for one inventory period; one instance per thread.
class InventoryKernel {
  public:
    InventoryKernel(const NetworkConfig &config, const ChannelModel &channel, const SimOptions &options)
        : config_(config), channel_(channel), options_(options), k_(config.k_tags()), l_(config.cycles()),
          t_cycle_(config.cycle_period_s()), t_p_(packet_duration(config.packet())),
          flip_threshold_(probability_threshold(channel.ber())), starts_(std::size_t{k_} * l_),
          order_(std::size_t{k_} * l_), corrupted_(std::size_t{k_} * l_), prefix_(std::size_t{k_} * l_),
          suffix_(std::size_t{k_} * l_), wrong_(config.packet().id_symbols()), success_(k_) {}

    // Returns the number of dropped tags and leaves per-tag flags in success().
    std::uint64_t run(TrialStream &stream) {
        const std::size_t n = starts_.size();
        const bool continuous = options_.collision_scope == CollisionScope::continuous_timeline;
        // Draw schedule: all wakeups cycle by cycle, then ID symbol draws packet by packet.
        for (std::uint32_t c = 0; c < l_; ++c)
            for (std::uint32_t k = 0; k < k_; ++k)
                starts_[c * std::size_t{k_} + k] = stream.next_unit() * t_cycle_ + (continuous ? c * t_cycle_ : 0.0);

        std::fill(corrupted_.begin(), corrupted_.end(), 0);
        std::fill(prefix_.begin(), prefix_.end(), 0.0);
        std::fill(suffix_.begin(), suffix_.end(), 0.0);
        if (continuous) {
            detect(0, n);
        } else {
            for (std::uint32_t c = 0; c < l_; ++c)
                detect(c * std::size_t{k_}, k_);
        }

        std::fill(success_.begin(), success_.end(), 0);
        for (std::uint32_t c = 0; c < l_; ++c)
            for (std::uint32_t k = 0; k < k_; ++k) {
                const std::size_t idx = c * std::size_t{k_} + k;
                const bool decoded = decode(stream, idx);
                if (decoded && !corrupted_[idx])
                    success_[k] = 1;
            }
        return static_cast<std::uint64_t>(std::count(success_.begin(), success_.end(), 0));
    }

    const std::vector<std::uint8_t> &success() const { return success_; }

  private:
    // Marks corrupted packets among starts_[first, first+count) and, for the
    // erased mode, records how much of each packet's head/tail is overlapped.
    void detect(std::size_t first, std::size_t count) {
        auto begin = order_.begin() + static_cast<std::ptrdiff_t>(first);
        auto end = begin + static_cast<std::ptrdiff_t>(count);
        std::iota(begin, end, first);
        std::sort(begin, end, [this](std::size_t a, std::size_t b) {
            return starts_[a] < starts_[b] || (starts_[a] == starts_[b] && a < b);
        });
        const double alpha = channel_.alpha();
        // Nearest neighbour on each side has the largest overlap on that side.
        for (std::size_t p = 0; p + 1 < count; ++p) {
            const std::size_t i = begin[static_cast<std::ptrdiff_t>(p)];
            const std::size_t j = begin[static_cast<std::ptrdiff_t>(p + 1)];
            if (overlap_corrupts(starts_[i], starts_[j], t_p_, alpha)) {
                corrupted_[i] = 1;
                corrupted_[j] = 1;
            }
        }
        if (options_.subthreshold_overlap != SubthresholdOverlap::erased)
            return;
        for (std::size_t p = 0; p < count; ++p) {
            const std::size_t i = begin[static_cast<std::ptrdiff_t>(p)];
            for (std::size_t q = p + 1; q < count; ++q) {
                const std::size_t j = begin[static_cast<std::ptrdiff_t>(q)];
                const double gap = starts_[j] - starts_[i];
                if (gap >= t_p_)
                    break;
                const double shared = t_p_ - gap;
                suffix_[i] = std::max(suffix_[i], shared);
                prefix_[j] = std::max(prefix_[j], shared);
            }
        }
    }

    bool decode(TrialStream &stream, std::size_t idx) {
        const PacketSpec &spec = config_.packet();
        const std::uint32_t id = spec.id_symbols();
        const std::uint32_t reps = spec.n_rep();
        const double rate = spec.symbol_rate_baud();
        const double total = spec.total_symbols();
        const double head = prefix_[idx] * rate;
        const double tail = total - suffix_[idx] * rate;
        constexpr std::uint64_t coin = std::uint64_t{1} << 63;

        std::fill(wrong_.begin(), wrong_.end(), 0u);
        for (std::uint32_t r = 0; r < reps; ++r)
            for (std::uint32_t p = 0; p < id; ++p) {
                // Drawn even for corrupted packets so the stream schedule is fixed.
                const std::uint64_t u = stream.next_u64();
                const double s = spec.preamble_symbols() + static_cast<double>(r) * id + p;
                const bool erased = s < head || s + 1.0 > tail;
                wrong_[p] += (u < (erased ? coin : flip_threshold_)) ? 1u : 0u;
            }
        for (std::uint32_t p = 0; p < id; ++p)
            if (2 * wrong_[p] >= reps)
                return false;
        return true;
    }

    const NetworkConfig &config_;
    const ChannelModel &channel_;
    const SimOptions &options_;
    std::uint32_t k_;
    std::uint32_t l_;
    double t_cycle_;
    double t_p_;
    std::uint64_t flip_threshold_;
    std::vector<double> starts_;
    std::vector<std::size_t> order_;
    std::vector<std::uint8_t> corrupted_;
    std::vector<double> prefix_;
    std::vector<double> suffix_;
    std::vector<std::uint32_t> wrong_;
    std::vector<std::uint8_t> success_;
};

void check_options(const SimOptions &options) {
    if (options.trials < 1)
        throw std::invalid_argument("trials must be >= 1");
}

TdrEstimate make_estimate(const NetworkConfig &config, const SimOptions &options, std::uint64_t dropped) {
    TdrEstimate est;
    est.trials = options.trials;
    est.seed = options.seed;
    est.dropped_tag_inventories = dropped;
    est.total_tag_inventories = options.trials * config.k_tags();
    est.tdr = static_cast<double>(dropped) / static_cast<double>(est.total_tag_inventories);
    est.std_error = std::sqrt(est.tdr * (1.0 - est.tdr) / static_cast<double>(est.total_tag_inventories));
    return est;
}

} // namespace

std::vector<std::uint8_t> simulate_inventory(const NetworkConfig &config, const ChannelModel &channel,
                                             const SimOptions &options, TrialStream &stream) {
    InventoryKernel kernel(config, channel, options);
    kernel.run(stream);
    return kernel.success();
}

TdrEstimate estimate_tdr_serial(const NetworkConfig &config, const ChannelModel &channel,
                                const SimOptions &options) {
    check_options(options);
    InventoryKernel kernel(config, channel, options);
    std::uint64_t dropped = 0;
    for (std::uint64_t t = 0; t < options.trials; ++t) {
        TrialStream stream = TrialStream::for_trial(options.seed, t);
        dropped += kernel.run(stream);
    }
    return make_estimate(config, options, dropped);
}

TdrEstimate estimate_tdr(const NetworkConfig &config, const ChannelModel &channel, const SimOptions &options) {
    check_options(options);
    const auto trials = static_cast<std::int64_t>(options.trials);
    std::uint64_t dropped = 0;
#pragma omp parallel reduction(+ : dropped)
    {
        InventoryKernel kernel(config, channel, options);
#pragma omp for schedule(static)
        for (std::int64_t t = 0; t < trials; ++t) {
            TrialStream stream = TrialStream::for_trial(options.seed, static_cast<std::uint64_t>(t));
            dropped += kernel.run(stream);
        }
    }
    return make_estimate(config, options, dropped);
}

} // namespace bsnet
