#include "bsnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include <fmt/core.h>

namespace bsnet {

namespace {

std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

template <typename T> T parse_field(const std::string &text, std::size_t line, const char *name) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw TraceError(line, fmt::format("field '{}' is not a valid number: '{}'", name, text));
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value))
            throw TraceError(line, fmt::format("field '{}' is not finite", name));
    }
    return value;
}

} // namespace

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::vector<MeasuredPoint> parse_measured_points(std::istream &source) {
    std::vector<MeasuredPoint> points;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    bool weighted = false;
    while (std::getline(source, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty() || body.front() == '#')
            continue;
        if (!have_header) {
            if (body == kMeasuredPointsHeader)
                weighted = false;
            else if (body == std::string(kMeasuredPointsHeader) + ",weight")
                weighted = true;
            else
                throw TraceError(line_no, fmt::format("expected header '{}', got '{}'", kMeasuredPointsHeader, body));
            have_header = true;
            continue;
        }
        const auto f = split_csv(body);
        const std::size_t expected = weighted ? 9 : 8;
        if (f.size() != expected)
            throw TraceError(line_no, fmt::format("expected {} fields, got {}", expected, f.size()));
        try {
            PacketSpec packet(parse_field<std::uint32_t>(f[5], line_no, "nrep"),
                              parse_field<double>(f[6], line_no, "rs_baud"),
                              parse_field<std::uint32_t>(f[3], line_no, "preamble"),
                              parse_field<std::uint32_t>(f[4], line_no, "id_symbols"));
            NetworkConfig config(parse_field<std::uint32_t>(f[0], line_no, "k"),
                                 parse_field<std::uint32_t>(f[1], line_no, "l"),
                                 parse_field<double>(f[2], line_no, "tr_s"), packet);
            const double tdr = parse_field<double>(f[7], line_no, "measured_tdr");
            if (tdr < 0.0 || tdr > 1.0)
                throw TraceError(line_no, fmt::format("measured_tdr {} outside [0, 1]", tdr));
            const double weight = weighted ? parse_field<double>(f[8], line_no, "weight") : 1.0;
            if (weight < 0.0)
                throw TraceError(line_no, fmt::format("negative weight {}", weight));
            points.push_back(MeasuredPoint{config, tdr, weight});
        } catch (const std::invalid_argument &e) {
            throw TraceError(line_no, e.what());
        }
    }
    if (!have_header)
        throw TraceError(std::max<std::size_t>(line_no, 1), "empty measured-points file: missing header");
    if (points.empty())
        throw TraceError(line_no, "measured-points file has no data rows");
    return points;
}

void write_measured_points(std::ostream &out, std::span<const MeasuredPoint> points) {
    out << kMeasuredPointsHeader << ",weight\n";
    for (const auto &p : points) {
        const auto &pk = p.config.packet();
        out << p.config.k_tags() << ',' << p.config.cycles() << ',' << format_number(p.config.inventory_period_s())
            << ',' << pk.preamble_symbols() << ',' << pk.id_symbols() << ',' << pk.n_rep() << ','
            << format_number(pk.symbol_rate_baud()) << ',' << format_number(p.measured_tdr) << ','
            << format_number(p.weight) << '\n';
    }
}

ordered_json to_json(const TdrEstimate &est) {
    return ordered_json{{"tdr", est.tdr},
                        {"trials", est.trials},
                        {"dropped_tag_inventories", est.dropped_tag_inventories},
                        {"total_tag_inventories", est.total_tag_inventories},
                        {"std_error", est.std_error},
                        {"seed", est.seed}};
}

TdrEstimate tdr_estimate_from_json(const ordered_json &j) {
    TdrEstimate est;
    est.tdr = j.at("tdr").get<double>();
    est.trials = j.at("trials").get<std::uint64_t>();
    est.dropped_tag_inventories = j.at("dropped_tag_inventories").get<std::uint64_t>();
    est.total_tag_inventories = j.at("total_tag_inventories").get<std::uint64_t>();
    est.std_error = j.at("std_error").get<double>();
    est.seed = j.at("seed").get<std::uint64_t>();
    return est;
}

ordered_json to_json(const AlphaFit &fit) {
    ordered_json curve = ordered_json::array();
    for (const auto &[alpha, err] : fit.curve)
        curve.push_back(ordered_json{{"alpha", alpha}, {"rmse", err}});
    return ordered_json{{"alpha_hat", fit.alpha_hat},
                        {"rmse", fit.rmse},
                        {"grid_step", fit.grid_step},
                        {"degenerate", fit.degenerate},
                        {"curve", curve}};
}

ordered_json to_json(const TraceTdrReport &report) {
    return ordered_json{{"l_cycles", report.l_cycles},
                        {"t_cycle_s", report.t_cycle_s},
                        {"window_s", report.window_s},
                        {"n_windows", report.n_windows},
                        {"expected_tags", report.expected_tags},
                        {"tdr", report.tdr},
                        {"resolution", report.resolution()},
                        {"per_window_missing", report.per_window_missing}};
}

ordered_json to_json(const DesignCandidate &row) {
    return ordered_json{{"l_cycles", row.l_cycles},
                        {"t_cycle_s", row.t_cycle_s},
                        {"n_rep", row.n_rep},
                        {"t_p_s", row.t_p_s},
                        {"feasible", row.feasible},
                        {"max_tolerable_ber", row.max_tolerable_ber},
                        {"achieved_tdr_at_max_ber", row.achieved_tdr_at_max_ber},
                        {"std_error_at_max_ber", row.std_error_at_max_ber}};
}

DesignCandidate design_candidate_from_json(const ordered_json &j) {
    DesignCandidate row;
    row.l_cycles = j.at("l_cycles").get<std::uint32_t>();
    row.t_cycle_s = j.at("t_cycle_s").get<double>();
    row.n_rep = j.at("n_rep").get<std::uint32_t>();
    row.t_p_s = j.at("t_p_s").get<double>();
    row.feasible = j.at("feasible").get<bool>();
    row.max_tolerable_ber = j.at("max_tolerable_ber").get<double>();
    row.achieved_tdr_at_max_ber = j.at("achieved_tdr_at_max_ber").get<double>();
    row.std_error_at_max_ber = j.at("std_error_at_max_ber").get<double>();
    return row;
}

void write_design_table(std::ostream &out, std::span<const DesignCandidate> rows) {
    out << kDesignTableHeader << '\n';
    for (const auto &r : rows)
        out << r.l_cycles << ',' << format_number(r.t_cycle_s) << ',' << r.n_rep << ',' << format_number(r.t_p_s)
            << ',' << (r.feasible ? 1 : 0) << ',' << format_number(r.max_tolerable_ber) << ','
            << format_number(r.achieved_tdr_at_max_ber) << ',' << format_number(r.std_error_at_max_ber) << '\n';
}

std::vector<DesignCandidate> parse_design_table(std::istream &source) {
    std::vector<DesignCandidate> rows;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(source, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty() || body.front() == '#')
            continue;
        if (!have_header) {
            if (body != kDesignTableHeader)
                throw TraceError(line_no, "unexpected design table header");
            have_header = true;
            continue;
        }
        const auto f = split_csv(body);
        if (f.size() != 8)
            throw TraceError(line_no, fmt::format("expected 8 fields, got {}", f.size()));
        DesignCandidate r;
        r.l_cycles = parse_field<std::uint32_t>(f[0], line_no, "l_cycles");
        r.t_cycle_s = parse_field<double>(f[1], line_no, "t_cycle_s");
        r.n_rep = parse_field<std::uint32_t>(f[2], line_no, "n_rep");
        r.t_p_s = parse_field<double>(f[3], line_no, "t_p_s");
        r.feasible = parse_field<int>(f[4], line_no, "feasible") != 0;
        r.max_tolerable_ber = parse_field<double>(f[5], line_no, "max_tolerable_ber");
        r.achieved_tdr_at_max_ber = parse_field<double>(f[6], line_no, "achieved_tdr_at_max_ber");
        r.std_error_at_max_ber = parse_field<double>(f[7], line_no, "std_error_at_max_ber");
        rows.push_back(r);
    }
    return rows;
}

} // namespace bsnet
