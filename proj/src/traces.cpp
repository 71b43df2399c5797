#include "bsnet/traces.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include <fmt/core.h>

namespace bsnet {

namespace {

// Slack on floor() so exact multiples of the window are not lost to rounding.
constexpr double kWindowSlack = 1e-9;

std::vector<std::string> split_fields(const std::string &line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

} // namespace

TraceError::TraceError(std::size_t line, const std::string &what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<ReceptionRecord> parse_trace(std::istream &source) {
    std::vector<ReceptionRecord> records;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    double last_time = 0.0;
    while (std::getline(source, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty() || body.front() == '#')
            continue;
        if (!have_header) {
            if (body != kTraceHeader)
                throw TraceError(line_no, fmt::format("expected header '{}', got '{}'", kTraceHeader, body));
            have_header = true;
            continue;
        }
        const auto fields = split_fields(body);
        if (fields.size() != 3)
            throw TraceError(line_no, fmt::format("expected 3 fields, got {}", fields.size()));

        ReceptionRecord rec;
        const auto &t = fields[0];
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), rec.recv_time_s);
        if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(rec.recv_time_s))
            throw TraceError(line_no, fmt::format("non-numeric timestamp '{}'", t));
        if (rec.recv_time_s < 0.0)
            throw TraceError(line_no, fmt::format("negative timestamp {}", rec.recv_time_s));
        if (!records.empty() && rec.recv_time_s < last_time)
            throw TraceError(line_no, fmt::format("timestamp {} goes backwards", rec.recv_time_s));
        if (fields[1].empty())
            throw TraceError(line_no, "empty tag_id");
        rec.tag_id = fields[1];
        if (fields[2] == "1")
            rec.decode_ok = true;
        else if (fields[2] == "0")
            rec.decode_ok = false;
        else
            throw TraceError(line_no, fmt::format("decode_ok must be 0 or 1, got '{}'", fields[2]));
        last_time = rec.recv_time_s;
        records.push_back(std::move(rec));
    }
    if (!have_header)
        throw TraceError(std::max<std::size_t>(line_no, 1), "empty trace: missing header");
    return records;
}

TraceTdrReport window_tdr(std::span<const ReceptionRecord> records, const std::set<std::string> &expected_tags,
                          std::uint32_t l_cycles, double t_cycle_s) {
    if (!(t_cycle_s > 0.0) || !std::isfinite(t_cycle_s))
        throw std::invalid_argument(fmt::format("t_cycle must be positive, got {}", t_cycle_s));
    if (l_cycles < 1)
        throw std::invalid_argument("l_cycles must be >= 1");
    if (expected_tags.empty())
        throw std::invalid_argument("expected tag set is empty");
    if (records.empty())
        throw std::invalid_argument("trace has no records: zero complete windows");

    TraceTdrReport report;
    report.l_cycles = l_cycles;
    report.t_cycle_s = t_cycle_s;
    report.window_s = l_cycles * t_cycle_s;
    for (const auto &tag : expected_tags)
        report.expected_tags.insert(trim(tag));

    const auto [lo, hi] = std::minmax_element(records.begin(), records.end(),
                                              [](const auto &a, const auto &b) { return a.recv_time_s < b.recv_time_s; });
    const double t0 = lo->recv_time_s;
    const double span = hi->recv_time_s - t0;
    const double windows = std::floor(span / report.window_s + kWindowSlack);
    if (windows < 1.0)
        throw std::invalid_argument(
            fmt::format("trace span {} s is shorter than one window of {} s", span, report.window_s));
    report.n_windows = static_cast<std::uint64_t>(windows);

    std::map<std::string, std::vector<std::uint8_t>> seen;
    for (const auto &tag : report.expected_tags)
        seen[tag].assign(report.n_windows, 0);
    for (const auto &rec : records) {
        if (!rec.decode_ok)
            continue;
        const double w = std::floor((rec.recv_time_s - t0) / report.window_s + kWindowSlack);
        if (w >= windows)
            continue;
        auto it = seen.find(trim(rec.tag_id));
        if (it != seen.end())
            it->second[static_cast<std::size_t>(w)] = 1;
    }

    report.per_window_missing.assign(report.n_windows, 0);
    std::uint64_t missing = 0;
    for (const auto &[tag, flags] : seen)
        for (std::size_t w = 0; w < flags.size(); ++w)
            if (!flags[w]) {
                ++report.per_window_missing[w];
                ++missing;
            }
    report.tdr = static_cast<double>(missing) /
                 (static_cast<double>(report.n_windows) * static_cast<double>(report.expected_tags.size()));
    return report;
}

} // namespace bsnet
