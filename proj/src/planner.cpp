#include "bsnet/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

namespace bsnet {

namespace {

// BER grid {0, res, ..., 0.5}; index -> value without accumulating error.
class BerGrid {
  public:
    explicit BerGrid(double resolution) : resolution_(resolution) {
        if (!(resolution > 0.0 && resolution <= kMaxBer))
            throw std::invalid_argument(fmt::format("ber resolution must lie in (0, 0.5], got {}", resolution));
        const double inverse = 1.0 / resolution;
        integral_ = std::abs(inverse - std::round(inverse)) < 1e-9;
        inverse_ = std::round(inverse);
        last_ = static_cast<std::int64_t>(std::floor(kMaxBer / resolution + 1e-9));
    }

    std::int64_t last() const { return last_; }

    double at(std::int64_t i) const {
        const auto x = static_cast<double>(i);
        return std::min(kMaxBer, integral_ ? x / inverse_ : x * resolution_);
    }

  private:
    double resolution_;
    double inverse_ = 1.0;
    bool integral_ = false;
    std::int64_t last_ = 0;
};

// Largest grid index with pass(i) true, assuming pass is monotone
// (true then false). Returns -1 if pass(0) is false.
template <typename Pass> std::int64_t bisect_last_pass(std::int64_t last, Pass &&pass) {
    if (!pass(0))
        return -1;
    if (pass(last))
        return last;
    std::int64_t lo = 0;
    std::int64_t hi = last;
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (pass(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

} // namespace

DesignRequirement::DesignRequirement(std::uint32_t k_tags, double max_tdr, double inventory_period_s,
                                     double max_bandwidth_hz, double symbol_rate_baud)
    : k_tags_(k_tags), max_tdr_(max_tdr), inventory_period_s_(inventory_period_s),
      max_bandwidth_hz_(max_bandwidth_hz), symbol_rate_baud_(symbol_rate_baud) {
    if (k_tags_ < 1)
        throw std::invalid_argument("k_tags must be >= 1");
    if (!(max_tdr_ > 0.0 && max_tdr_ < 1.0))
        throw std::invalid_argument(fmt::format("max tdr must lie in (0, 1), got {}", max_tdr_));
    if (!(inventory_period_s_ > 0.0))
        throw std::invalid_argument(fmt::format("inventory period must be positive, got {}", inventory_period_s_));
    if (!(symbol_rate_baud_ > 0.0))
        throw std::invalid_argument(fmt::format("symbol rate must be positive, got {}", symbol_rate_baud_));
    if (6.0 * symbol_rate_baud_ > max_bandwidth_hz_)
        throw std::invalid_argument(fmt::format("occupied bandwidth 6 x {} baud exceeds {} Hz", symbol_rate_baud_,
                                                max_bandwidth_hz_));
}

void check_resolvable(const DesignRequirement &req, std::uint64_t trials) {
    const double tag_inventories = static_cast<double>(req.k_tags()) * static_cast<double>(trials);
    if (tag_inventories < 10.0 / req.max_tdr())
        throw UnresolvableTarget(fmt::format("unresolvable delta: K * trials = {} < 10 / delta = {}", tag_inventories,
                                             10.0 / req.max_tdr()));
}

NetworkConfig design_config(const DesignRequirement &req, std::uint32_t n_rep, std::uint32_t l_cycles) {
    return NetworkConfig(req.k_tags(), l_cycles, req.inventory_period_s(), PacketSpec(n_rep, req.symbol_rate_baud()));
}

std::optional<BerSearchResult> max_tolerable_ber(const DesignRequirement &req, double alpha, std::uint32_t n_rep,
                                                 std::uint32_t l_cycles, const SimOptions &options,
                                                 double ber_resolution) {
    check_resolvable(req, options.trials);
    const NetworkConfig config = design_config(req, n_rep, l_cycles);
    const BerGrid grid(ber_resolution);

    std::optional<TdrEstimate> best;
    std::int64_t best_index = -1;
    auto pass = [&](std::int64_t i) {
        const TdrEstimate est = estimate_tdr(config, ChannelModel(alpha, grid.at(i)), options);
        const bool ok = est.tdr + kStatisticalMargin * est.std_error <= req.max_tdr();
        if (ok && i > best_index) {
            best_index = i;
            best = est;
        }
        return ok;
    };
    const std::int64_t found = bisect_last_pass(grid.last(), pass);
    if (found < 0)
        return std::nullopt;
    return BerSearchResult{grid.at(found), *best};
}

std::optional<double> max_tolerable_ber_analytic(const DesignRequirement &req, double alpha, std::uint32_t n_rep,
                                                 std::uint32_t l_cycles, double ber_resolution) {
    const NetworkConfig config = design_config(req, n_rep, l_cycles);
    const BerGrid grid(ber_resolution);
    const std::int64_t found = bisect_last_pass(grid.last(), [&](std::int64_t i) {
        return tdr_with_noise(config, ChannelModel(alpha, grid.at(i))).value() <= req.max_tdr();
    });
    if (found < 0)
        return std::nullopt;
    return grid.at(found);
}

std::vector<DesignCandidate> sweep(const DesignRequirement &req, double alpha, std::span<const std::uint32_t> n_rep_set,
                                   std::span<const std::uint32_t> l_set, const SimOptions &options,
                                   const SweepOptions &sweep_options) {
    if (n_rep_set.empty() || l_set.empty())
        throw std::invalid_argument("sweep needs non-empty n_rep and L sets");
    if (!sweep_options.analytic_only)
        check_resolvable(req, options.trials);

    std::vector<DesignCandidate> rows;
    for (const std::uint32_t l : l_set)
        for (const std::uint32_t n_rep : n_rep_set) {
            std::optional<NetworkConfig> config;
            try {
                config.emplace(design_config(req, n_rep, l));
            } catch (const std::invalid_argument &) {
                continue; // packet does not fit in a cycle
            }
            DesignCandidate row;
            row.l_cycles = l;
            row.t_cycle_s = config->cycle_period_s();
            row.n_rep = n_rep;
            row.t_p_s = packet_duration(config->packet());

            if (sweep_options.analytic_only) {
                if (auto ber = max_tolerable_ber_analytic(req, alpha, n_rep, l, sweep_options.ber_resolution)) {
                    row.feasible = true;
                    row.max_tolerable_ber = *ber;
                    row.achieved_tdr_at_max_ber = tdr_with_noise(*config, ChannelModel(alpha, *ber));
                }
            } else if (!sweep_options.prefilter ||
                       tdr_exact(*config, ChannelModel(alpha)).value() <= kPrefilterSlack * req.max_tdr()) {
                SimOptions cell = options;
                cell.seed = derive_seed(options.seed, n_rep, l);
                if (auto found = max_tolerable_ber(req, alpha, n_rep, l, cell, sweep_options.ber_resolution)) {
                    row.feasible = true;
                    row.max_tolerable_ber = found->max_tolerable_ber;
                    row.achieved_tdr_at_max_ber = found->estimate_at_max.tdr;
                    row.std_error_at_max_ber = found->estimate_at_max.std_error;
                }
            }
            rows.push_back(row);
        }
    if (rows.empty())
        throw std::invalid_argument("no (n_rep, L) pair is constructible: packets exceed every cycle period");
    std::stable_sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) {
        return a.l_cycles != b.l_cycles ? a.l_cycles < b.l_cycles : a.n_rep < b.n_rep;
    });
    return rows;
}

DesignCandidate recommend(std::span<const DesignCandidate> candidates) {
    const DesignCandidate *best = nullptr;
    for (const auto &c : candidates) {
        if (!c.feasible)
            continue;
        if (best == nullptr || c.max_tolerable_ber > best->max_tolerable_ber ||
            (c.max_tolerable_ber == best->max_tolerable_ber &&
             (c.l_cycles > best->l_cycles || (c.l_cycles == best->l_cycles && c.n_rep < best->n_rep))))
            best = &c;
    }
    if (best == nullptr)
        throw std::invalid_argument("no feasible design candidate");
    return *best;
}

bool elementary_design_feasible(const DesignRequirement &req, double alpha, std::uint32_t n_rep,
                                std::uint32_t l_cycles) {
    const double beta = 1.0 - alpha;
    // (a) largest slot occupancy meeting delta: solve 2z - 2z^2 = delta^(1/L), z = beta L D_slot < 1/2.
    const double target = std::pow(req.max_tdr(), 1.0 / l_cycles);
    const double z_max = target >= 0.5 ? 0.5 : 0.5 * (1.0 - std::sqrt(1.0 - 2.0 * target));
    const double d_slot_max =
        beta > 0.0 ? z_max / (beta * l_cycles) : std::numeric_limits<double>::infinity();
    // (b) packet short enough for that occupancy.
    const double t_p = packet_duration(PacketSpec(n_rep, req.symbol_rate_baud()));
    const bool short_enough = t_p < req.inventory_period_s() * d_slot_max / req.k_tags();
    // (c) bandwidth, also a DesignRequirement invariant.
    const bool fits_band = 6.0 * req.symbol_rate_baud() <= req.max_bandwidth_hz();
    return short_enough && fits_band && t_p <= req.inventory_period_s() / l_cycles;
}

} // namespace bsnet
