#ifndef BSNET_TRACES_HPP_
#define BSNET_TRACES_HPP_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bsnet {

struct ReceptionRecord {
    double recv_time_s;
    std::string tag_id;
    bool decode_ok;
};

struct TraceTdrReport {
    std::uint32_t l_cycles = 0;
    double t_cycle_s = 0.0;
    double window_s = 0.0;
    std::uint64_t n_windows = 0;
    std::set<std::string> expected_tags;
    double tdr = 0.0;
    std::vector<std::uint64_t> per_window_missing;

    /// Smallest nonzero TDR this measurement can resolve.
    double resolution() const {
        return 1.0 / (static_cast<double>(n_windows) * static_cast<double>(expected_tags.size()));
    }
};

/// Parse error carrying the 1-based line number of the offending line.
class TraceError : public std::runtime_error {
  public:
    TraceError(std::size_t line, const std::string &what);
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

inline constexpr const char *kTraceHeader = "recv_time_s,tag_id,decode_ok";

/// Reads `recv_time_s,tag_id,decode_ok` CSV. Lines starting with '#' and
/// blank lines are skipped. Timestamps must be nonnegative and non-decreasing.
std::vector<ReceptionRecord> parse_trace(std::istream &source);

/// Tiles [t0, t0 + n * L * t_cycle) into inventory windows anchored at the
/// earliest record and counts the expected tags with no successful record in
/// each. The trailing partial window is dropped.
TraceTdrReport window_tdr(std::span<const ReceptionRecord> records, const std::set<std::string> &expected_tags,
                          std::uint32_t l_cycles, double t_cycle_s);

std::string trim(std::string_view s);

} // namespace bsnet

#endif // BSNET_TRACES_HPP_
