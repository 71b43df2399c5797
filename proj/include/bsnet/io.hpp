#ifndef BSNET_IO_HPP_
#define BSNET_IO_HPP_

#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include <json.hpp>

#include "bsnet/calibration.hpp"
#include "bsnet/planner.hpp"
#include "bsnet/simulator.hpp"
#include "bsnet/traces.hpp"

namespace bsnet {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char *kMeasuredPointsHeader = "k,l,tr_s,preamble,id_symbols,nrep,rs_baud,measured_tdr";

/// Measured-point CSV; an optional ninth `weight` column is accepted. Errors
/// are TraceError with the offending line number.
std::vector<MeasuredPoint> parse_measured_points(std::istream &source);
void write_measured_points(std::ostream &out, std::span<const MeasuredPoint> points);

ordered_json to_json(const TdrEstimate &est);
ordered_json to_json(const AlphaFit &fit);
ordered_json to_json(const TraceTdrReport &report);
ordered_json to_json(const DesignCandidate &row);

TdrEstimate tdr_estimate_from_json(const ordered_json &j);
DesignCandidate design_candidate_from_json(const ordered_json &j);

inline constexpr const char *kDesignTableHeader =
    "l_cycles,t_cycle_s,n_rep,t_p_s,feasible,max_tolerable_ber,achieved_tdr_at_max_ber,std_error_at_max_ber";

void write_design_table(std::ostream &out, std::span<const DesignCandidate> rows);
std::vector<DesignCandidate> parse_design_table(std::istream &source);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

} // namespace bsnet

#endif // BSNET_IO_HPP_
