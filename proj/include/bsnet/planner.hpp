#ifndef BSNET_PLANNER_HPP_
#define BSNET_PLANNER_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "bsnet/model.hpp"
#include "bsnet/simulator.hpp"

namespace bsnet {

/// Network requirement: K tags, TDR below max_tdr within each inventory
/// period, occupied bandwidth 6 R_s within max_bandwidth_hz.
class DesignRequirement {
  public:
    DesignRequirement(std::uint32_t k_tags, double max_tdr, double inventory_period_s, double max_bandwidth_hz,
                      double symbol_rate_baud);

    std::uint32_t k_tags() const { return k_tags_; }
    double max_tdr() const { return max_tdr_; }
    double inventory_period_s() const { return inventory_period_s_; }
    double max_bandwidth_hz() const { return max_bandwidth_hz_; }
    double symbol_rate_baud() const { return symbol_rate_baud_; }

  private:
    std::uint32_t k_tags_;
    double max_tdr_;
    double inventory_period_s_;
    double max_bandwidth_hz_;
    double symbol_rate_baud_;
};

struct DesignCandidate {
    std::uint32_t l_cycles = 0;
    double t_cycle_s = 0.0;
    std::uint32_t n_rep = 0;
    double t_p_s = 0.0;
    bool feasible = false;
    double max_tolerable_ber = 0.0;        // meaningful only when feasible
    double achieved_tdr_at_max_ber = 0.0;  // estimate (or model value) at max_tolerable_ber
    double std_error_at_max_ber = 0.0;
};

/// Thrown when the trial budget cannot resolve the TDR target (K * trials < 10 / delta).
class UnresolvableTarget : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct BerSearchResult {
    double max_tolerable_ber;
    TdrEstimate estimate_at_max;
};

inline constexpr double kMaxBer = 0.5;
inline constexpr double kStatisticalMargin = 2.0; // std errors added to the point estimate
inline constexpr double kPrefilterSlack = 2.0;    // skip Monte Carlo when the closed-form TDR at zero BER exceeds slack * delta

void check_resolvable(const DesignRequirement &req, std::uint64_t trials);

/// Builds the network for one (n_rep, L) design point.
NetworkConfig design_config(const DesignRequirement &req, std::uint32_t n_rep, std::uint32_t l_cycles);

/// Largest BER on the grid {0, res, 2 res, ..., 0.5} whose simulated TDR plus
/// two standard errors stays within max_tdr. The same per-cell seed is used at
/// every BER, so TDR is monotone in BER sample-path by sample-path and
/// bisection is exact on the grid. nullopt when even BER 0 fails.
std::optional<BerSearchResult> max_tolerable_ber(const DesignRequirement &req, double alpha, std::uint32_t n_rep,
                                                 std::uint32_t l_cycles, const SimOptions &options,
                                                 double ber_resolution);

/// Same search against the closed-form model (collision TDR composed with PER).
std::optional<double> max_tolerable_ber_analytic(const DesignRequirement &req, double alpha, std::uint32_t n_rep,
                                                 std::uint32_t l_cycles, double ber_resolution);

struct SweepOptions {
    double ber_resolution = 0.0005;
    bool analytic_only = false;
    bool prefilter = true;
};

/// One candidate per constructible (n_rep, L) pair, sorted by L then n_rep.
/// Cell seeds are derived from (options.seed, n_rep, L).
std::vector<DesignCandidate> sweep(const DesignRequirement &req, double alpha, std::span<const std::uint32_t> n_rep_set,
                                   std::span<const std::uint32_t> l_set, const SimOptions &options,
                                   const SweepOptions &sweep_options = {});

/// Feasible candidate with the highest tolerable BER; ties go to larger L,
/// then smaller n_rep.
DesignCandidate recommend(std::span<const DesignCandidate> candidates);

/// Three-step design by the slot-occupancy approximation at zero BER: the
/// (L, D_slot) point meets delta, D_slot implies T_p < T_R D_slot / K, and
/// 6 R_s fits the bandwidth.
bool elementary_design_feasible(const DesignRequirement &req, double alpha, std::uint32_t n_rep,
                                std::uint32_t l_cycles);

} // namespace bsnet

#endif // BSNET_PLANNER_HPP_
