#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include "bsnet/calibration.hpp"
#include "bsnet/io.hpp"
#include "bsnet/model.hpp"
#include "bsnet/planner.hpp"
#include "bsnet/simulator.hpp"
#include "bsnet/traces.hpp"

namespace bsnet::cli {

namespace {

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string utc_now() {
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(
                                                     std::chrono::system_clock::now())));
}

std::vector<std::string> split_list(const std::string &text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

double to_real(const std::string &s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception &) {
        throw UsageError(fmt::format("'{}' is not a number", s));
    }
    if (pos != s.size() || !std::isfinite(v))
        throw UsageError(fmt::format("'{}' is not a number", s));
    return v;
}

std::uint32_t to_count(const std::string &s) {
    const double v = to_real(s);
    if (v < 0.0 || v != std::floor(v) || v > 4294967295.0)
        throw UsageError(fmt::format("'{}' is not a nonnegative integer", s));
    return static_cast<std::uint32_t>(v);
}

// "1,2,5", "1:10" or "1:15:2" (inclusive).
std::vector<std::uint32_t> parse_count_set(const std::string &text) {
    std::vector<std::uint32_t> out;
    for (const auto &item : split_list(text)) {
        std::vector<std::string> parts;
        std::stringstream ss(item);
        std::string p;
        while (std::getline(ss, p, ':'))
            parts.push_back(trim(p));
        if (parts.size() == 1) {
            out.push_back(to_count(parts[0]));
        } else if (parts.size() == 2 || parts.size() == 3) {
            const std::uint32_t lo = to_count(parts[0]);
            const std::uint32_t hi = to_count(parts[1]);
            const std::uint32_t step = parts.size() == 3 ? to_count(parts[2]) : 1;
            if (step == 0 || hi < lo)
                throw UsageError(fmt::format("bad integer range '{}'", item));
            for (std::uint32_t v = lo; v <= hi; v += step)
                out.push_back(v);
        } else {
            throw UsageError(fmt::format("bad integer range '{}'", item));
        }
    }
    if (out.empty())
        throw UsageError(fmt::format("empty set '{}'", text));
    return out;
}

// "a:b" with `points` evenly spaced values, or "a:b:step".
std::vector<double> parse_real_range(const std::string &text, std::uint32_t points) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ':'))
        parts.push_back(trim(p));
    if (parts.size() == 1)
        return {to_real(parts[0])};
    if (parts.size() != 2 && parts.size() != 3)
        throw UsageError(fmt::format("bad range '{}'", text));
    const double lo = to_real(parts[0]);
    const double hi = to_real(parts[1]);
    if (hi < lo)
        throw UsageError(fmt::format("bad range '{}'", text));
    std::vector<double> out;
    if (parts.size() == 3) {
        const double step = to_real(parts[2]);
        if (!(step > 0.0))
            throw UsageError(fmt::format("bad range step in '{}'", text));
        const auto n = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
        for (std::int64_t i = 0; i <= n; ++i)
            out.push_back(lo + static_cast<double>(i) * step);
    } else {
        if (points < 2)
            throw UsageError("--points must be >= 2 for a range");
        for (std::uint32_t i = 0; i < points; ++i)
            out.push_back(lo + (hi - lo) * i / (points - 1));
    }
    return out;
}

struct GlobalOptions {
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "json";
    std::string config;
};

struct NetworkArgs {
    std::string k = "1000";
    std::uint32_t l = 1;
    double tr = 1.0;
    std::uint32_t nrep = 4;
    double rs = 2e6;
    std::uint32_t preamble = 40;
    std::uint32_t id_symbols = 16;
    double alpha = 0.37;

    void add_to(CLI::App &app) {
        app.add_option("--k", k, "tag count K (analytic accepts a comma list)")->capture_default_str();
        app.add_option("--l", l, "cycles per inventory period L")->capture_default_str();
        app.add_option("--tr", tr, "inventory period T_R in seconds")->capture_default_str();
        app.add_option("--nrep", nrep, "tag ID repetitions")->capture_default_str();
        app.add_option("--rs", rs, "symbol rate in baud")->capture_default_str();
        app.add_option("--preamble", preamble, "preamble symbols")->capture_default_str();
        app.add_option("--id-symbols", id_symbols, "tag ID symbols")->capture_default_str();
        app.add_option("--alpha", alpha, "collision zone parameter")->capture_default_str();
    }

    PacketSpec packet() const { return PacketSpec(nrep, rs, preamble, id_symbols); }

    ordered_json params() const {
        return ordered_json{{"k", k},   {"l", l},           {"tr", tr},
                            {"nrep", nrep}, {"rs", rs},     {"preamble", preamble},
                            {"id_symbols", id_symbols}, {"alpha", alpha}};
    }
};

struct SimArgs {
    std::uint64_t trials = 20000;
    std::string scope = "per_cycle";
    std::string subthreshold = "harmless";

    void add_to(CLI::App &app) {
        app.add_option("--trials", trials, "simulated inventory periods")->capture_default_str();
        app.add_option("--scope", scope, "collision scope: per_cycle | continuous_timeline")->capture_default_str();
        app.add_option("--subthreshold", subthreshold, "sub-threshold overlap: harmless | erased")
            ->capture_default_str();
    }

    SimOptions options(std::uint64_t seed) const {
        SimOptions o;
        o.trials = trials;
        o.seed = seed;
        o.collision_scope = parse_collision_scope(scope);
        o.subthreshold_overlap = parse_subthreshold_overlap(subthreshold);
        return o;
    }

    ordered_json params() const {
        return ordered_json{{"trials", trials}, {"scope", scope}, {"subthreshold", subthreshold}};
    }
};

// Writes one command's result in the requested format, with its manifest.
class Emitter {
  public:
    Emitter(const GlobalOptions &g, std::ostream &out, std::string command)
        : g_(g), out_(out), command_(std::move(command)), started_at_(utc_now()) {
        if (g_.format != "json" && g_.format != "csv")
            throw UsageError(fmt::format("--format must be csv or json, got '{}'", g_.format));
    }

    bool csv() const { return g_.format == "csv"; }

    void emit(ordered_json params, ordered_json result, const std::function<void(std::ostream &)> &write_csv) {
        ordered_json manifest{{"command", command_},
                              {"parameters", std::move(params)},
                              {"seed", g_.seed},
                              {"tool_version", kToolVersion},
                              {"started_at", started_at_},
                              {"finished_at", utc_now()}};
        if (!csv()) {
            ordered_json doc{{"manifest", manifest}, {"result", std::move(result)}};
            write_to([&](std::ostream &os) { os << doc.dump(2) << '\n'; });
            return;
        }
        write_to(write_csv);
        if (!g_.out.empty()) {
            std::ofstream side(g_.out + ".manifest.json");
            if (!side)
                throw UsageError(fmt::format("cannot write '{}.manifest.json'", g_.out));
            side << manifest.dump(2) << '\n';
        }
    }

  private:
    void write_to(const std::function<void(std::ostream &)> &writer) {
        if (g_.out.empty()) {
            writer(out_);
            return;
        }
        std::ofstream file(g_.out);
        if (!file)
            throw UsageError(fmt::format("cannot write '{}'", g_.out));
        writer(file);
    }

    const GlobalOptions &g_;
    std::ostream &out_;
    std::string command_;
    std::string started_at_;
};

std::ifstream open_input(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw UsageError(fmt::format("cannot open '{}'", path));
    return in;
}

// ---- analytic -------------------------------------------------------------

struct AnalyticArgs {
    NetworkArgs net;
    std::optional<double> d_cycle;
    std::optional<double> d_slot;
    std::vector<std::string> sweep;
    std::uint32_t points = 50;
    std::uint32_t l_max = 15;
};

struct AnalyticRow {
    std::uint32_t k;
    std::uint32_t l;
    double alpha;
    double d_cycle;
};

ordered_json analytic_row_json(const AnalyticRow &r) {
    const double d_inv = r.d_cycle / r.l;
    const double d_slot = r.k * d_inv;
    return ordered_json{{"k", r.k},
                        {"l", r.l},
                        {"alpha", r.alpha},
                        {"d_cycle", r.d_cycle},
                        {"d_inv", d_inv},
                        {"d_slot", d_slot},
                        {"tdr_exact", tdr_exact(r.k, r.l, r.d_cycle, r.alpha).value()},
                        {"tdr_approx_cycle", tdr_approx_cycle(r.k, r.l, r.d_cycle, r.alpha).value()},
                        {"tdr_approx_slot", tdr_approx_slot(r.l, d_slot, r.alpha).value()},
                        {"approx_valid", approximation_valid(r.k, r.d_cycle, r.alpha)}};
}

int cmd_analytic(const AnalyticArgs &a, const GlobalOptions &g, std::ostream &out) {
    Emitter emitter(g, out, "analytic");
    const auto ks = parse_count_set(a.net.k);
    std::string sweep_var;
    std::string sweep_range;
    if (!a.sweep.empty()) {
        if (a.sweep.size() != 2)
            throw UsageError("--sweep takes a variable name and a range");
        sweep_var = a.sweep[0];
        sweep_range = a.sweep[1];
    }

    // The occupancy is fixed by whichever of d_slot, d_cycle or the packet is given.
    auto d_cycle_for = [&](std::uint32_t k, std::uint32_t l, std::optional<double> d_slot,
                           std::optional<double> d_cycle) {
        if (d_slot)
            return *d_slot * l / k;
        if (d_cycle)
            return *d_cycle;
        return packet_duration(a.net.packet()) * l / a.net.tr;
    };

    std::vector<AnalyticRow> rows;
    auto add = [&](std::uint32_t k, std::uint32_t l, double alpha, std::optional<double> d_slot,
                   std::optional<double> d_cycle) {
        const double dc = d_cycle_for(k, l, d_slot, d_cycle);
        if (!(dc > 0.0 && dc <= 1.0))
            throw UsageError(fmt::format("cycle occupancy {} outside (0, 1] for K={}, L={}", dc, k, l));
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw UsageError(fmt::format("alpha {} outside [0, 1]", alpha));
        if (k < 1 || l < 1)
            throw UsageError("K and L must be >= 1");
        rows.push_back(AnalyticRow{k, l, alpha, dc});
    };

    for (const std::uint32_t k : ks) {
        if (sweep_var.empty()) {
            add(k, a.net.l, a.net.alpha, a.d_slot, a.d_cycle);
        } else if (sweep_var == "l") {
            for (const std::uint32_t l : parse_count_set(sweep_range))
                add(k, l, a.net.alpha, a.d_slot, a.d_cycle);
        } else if (sweep_var == "d_slot") {
            for (const double v : parse_real_range(sweep_range, a.points))
                add(k, a.net.l, a.net.alpha, v, std::nullopt);
        } else if (sweep_var == "d_cycle") {
            for (const double v : parse_real_range(sweep_range, a.points))
                add(k, a.net.l, a.net.alpha, std::nullopt, v);
        } else if (sweep_var == "alpha") {
            for (const double v : parse_real_range(sweep_range, a.points))
                add(k, a.net.l, v, a.d_slot, a.d_cycle);
        } else {
            throw UsageError(fmt::format("unknown sweep variable '{}' (l, d_slot, d_cycle, alpha)", sweep_var));
        }
    }

    ordered_json result;
    ordered_json series = ordered_json::array();
    for (const auto &r : rows)
        series.push_back(analytic_row_json(r));
    result["rows"] = series;
    if (sweep_var == "l" && a.d_slot) {
        ordered_json best{{"d_slot", *a.d_slot},
                          {"optimal_cycles_slot_model", optimal_cycles(*a.d_slot, a.net.alpha, a.l_max)}};
        ordered_json exact = ordered_json::object();
        for (const std::uint32_t k : ks) {
            const AnalyticRow *arg = nullptr;
            for (const auto &r : rows)
                if (r.k == k && (arg == nullptr || tdr_exact(r.k, r.l, r.d_cycle, r.alpha).value() <
                                                       tdr_exact(arg->k, arg->l, arg->d_cycle, arg->alpha).value()))
                    arg = &r;
            exact[std::to_string(k)] = arg->l;
        }
        best["argmin_exact_by_k"] = exact;
        result["optimal_cycles"] = best;
    }

    ordered_json params = a.net.params();
    if (a.d_cycle)
        params["d_cycle"] = *a.d_cycle;
    if (a.d_slot)
        params["d_slot"] = *a.d_slot;
    if (!sweep_var.empty())
        params["sweep"] = {sweep_var, sweep_range};
    params["points"] = a.points;
    params["l_max"] = a.l_max;

    emitter.emit(params, result, [&](std::ostream &os) {
        os << "k,l,alpha,d_cycle,d_inv,d_slot,tdr_exact,tdr_approx_cycle,tdr_approx_slot,approx_valid\n";
        for (const auto &row : series)
            os << row["k"].get<std::uint32_t>() << ',' << row["l"].get<std::uint32_t>() << ','
               << format_number(row["alpha"]) << ',' << format_number(row["d_cycle"]) << ','
               << format_number(row["d_inv"]) << ',' << format_number(row["d_slot"]) << ','
               << format_number(row["tdr_exact"]) << ',' << format_number(row["tdr_approx_cycle"]) << ','
               << format_number(row["tdr_approx_slot"]) << ',' << (row["approx_valid"].get<bool>() ? 1 : 0) << '\n';
    });
    return kOk;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
    NetworkArgs net;
    SimArgs sim;
    double ber = 0.0;
    bool serial = false;
};

int cmd_simulate(const SimulateArgs &a, const GlobalOptions &g, std::ostream &out) {
    Emitter emitter(g, out, "simulate");
    const NetworkConfig config(to_count(a.net.k), a.net.l, a.net.tr, a.net.packet());
    const ChannelModel channel(a.net.alpha, a.ber);
    const SimOptions options = a.sim.options(g.seed);
    const TdrEstimate est = a.serial ? estimate_tdr_serial(config, channel, options)
                                     : estimate_tdr(config, channel, options);

    ordered_json result = to_json(est);
    result["analytic_tdr"] = tdr_with_noise(config, channel).value();
    ordered_json params = a.net.params();
    params["ber"] = a.ber;
    params.update(a.sim.params());
    emitter.emit(params, result, [&](std::ostream &os) {
        os << "tdr,trials,dropped_tag_inventories,total_tag_inventories,std_error,seed,analytic_tdr\n"
           << format_number(est.tdr) << ',' << est.trials << ',' << est.dropped_tag_inventories << ','
           << est.total_tag_inventories << ',' << format_number(est.std_error) << ',' << est.seed << ','
           << format_number(result["analytic_tdr"].get<double>()) << '\n';
    });
    return kOk;
}

// ---- fit ------------------------------------------------------------------

struct FitArgs {
    std::string points;
    double grid_step = kDefaultAlphaGridStep;
};

int cmd_fit(const FitArgs &a, const GlobalOptions &g, std::ostream &out, std::ostream &err) {
    Emitter emitter(g, out, "fit");
    auto in = open_input(a.points);
    const auto points = parse_measured_points(in);
    const AlphaFit fit = fit_alpha(points, a.grid_step);
    if (fit.degenerate)
        fmt::print(err, "warning: degenerate fit, the RMSE curve is flat (data carries no information on alpha)\n");
    fmt::print(err, "alpha_hat = {}  rmse = {}\n", fit.alpha_hat, fit.rmse);
    ordered_json params{{"points", a.points}, {"grid_step", a.grid_step}, {"n_points", points.size()}};
    emitter.emit(params, to_json(fit), [&](std::ostream &os) {
        os << "alpha,rmse\n";
        for (const auto &[alpha, e] : fit.curve)
            os << format_number(alpha) << ',' << format_number(e) << '\n';
    });
    return kOk;
}

// ---- trace-tdr ------------------------------------------------------------

struct TraceArgs {
    std::string trace;
    std::string tags;
    std::string tags_file;
    std::uint32_t l = 1;
    double t_cycle = 0.0;
};

int cmd_trace_tdr(const TraceArgs &a, const GlobalOptions &g, std::ostream &out) {
    Emitter emitter(g, out, "trace-tdr");
    std::set<std::string> expected;
    for (const auto &t : split_list(a.tags))
        expected.insert(t);
    if (!a.tags_file.empty()) {
        auto in = open_input(a.tags_file);
        std::string line;
        while (std::getline(in, line))
            if (auto t = trim(line); !t.empty() && t.front() != '#')
                expected.insert(t);
    }
    auto in = open_input(a.trace);
    const auto records = parse_trace(in);
    const TraceTdrReport report = window_tdr(records, expected, a.l, a.t_cycle);
    ordered_json params{{"trace", a.trace}, {"tags", a.tags}, {"tags_file", a.tags_file}, {"l", a.l},
                        {"t_cycle", a.t_cycle}};
    emitter.emit(params, to_json(report), [&](std::ostream &os) {
        os << "window,missing\n";
        for (std::size_t w = 0; w < report.per_window_missing.size(); ++w)
            os << w << ',' << report.per_window_missing[w] << '\n';
        os << "# tdr," << format_number(report.tdr) << '\n';
    });
    return kOk;
}

// ---- plan -----------------------------------------------------------------

struct PlanArgs {
    std::uint32_t k = 1000;
    double delta = 0.001;
    double tr = 1.0;
    double bandwidth = 12e6;
    double rs = 2e6;
    double alpha = 0.37;
    std::string nrep_set = "1:10";
    std::string l_set = "1:15";
    double ber_resolution = 0.0005;
    bool analytic_only = false;
    bool no_prefilter = false;
    SimArgs sim;
};

int cmd_plan(const PlanArgs &a, const GlobalOptions &g, std::ostream &out, std::ostream &err) {
    Emitter emitter(g, out, "plan");
    const DesignRequirement req(a.k, a.delta, a.tr, a.bandwidth, a.rs);
    const auto nreps = parse_count_set(a.nrep_set);
    const auto ls = parse_count_set(a.l_set);
    SweepOptions so;
    so.ber_resolution = a.ber_resolution;
    so.analytic_only = a.analytic_only;
    so.prefilter = !a.no_prefilter;
    const auto rows = sweep(req, a.alpha, nreps, ls, a.sim.options(g.seed), so);

    ordered_json table = ordered_json::array();
    for (const auto &r : rows)
        table.push_back(to_json(r));
    ordered_json result{{"table", table}};
    std::optional<DesignCandidate> best;
    try {
        best = recommend(rows);
        result["recommendation"] = to_json(*best);
    } catch (const std::invalid_argument &) {
        result["recommendation"] = nullptr;
    }

    ordered_json params{{"k", a.k},
                        {"delta", a.delta},
                        {"tr", a.tr},
                        {"bandwidth", a.bandwidth},
                        {"rs", a.rs},
                        {"alpha", a.alpha},
                        {"nrep_set", a.nrep_set},
                        {"l_set", a.l_set},
                        {"ber_resolution", a.ber_resolution},
                        {"analytic_only", a.analytic_only},
                        {"prefilter", !a.no_prefilter}};
    params.update(a.sim.params());
    emitter.emit(params, result, [&](std::ostream &os) { write_design_table(os, rows); });

    if (!best) {
        fmt::print(err, "no feasible design for the requirement\n");
        return kNoFeasibleDesign;
    }
    fmt::print(err, "recommended: L={} N_rep={} T_p={} ms max tolerable BER={}\n", best->l_cycles, best->n_rep,
               best->t_p_s * 1e3, best->max_tolerable_ber);
    return kOk;
}

// ---- --config -------------------------------------------------------------

// Expands `--config file.json` into flags placed right after the subcommand,
// so flags given on the command line (later) take precedence.
std::vector<std::string> expand_config(const std::vector<std::string> &args, const std::set<std::string> &subcommands) {
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw UsageError("--config needs a file");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty())
        return rest;

    auto in = open_input(path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception &e) {
        throw UsageError(fmt::format("invalid JSON in '{}': {}", path, e.what()));
    }
    if (!doc.is_object())
        throw UsageError(fmt::format("'{}' must hold a JSON object", path));

    std::vector<std::string> injected;
    for (const auto &[key, value] : doc.items()) {
        std::string flag = "--" + key;
        std::replace(flag.begin() + 2, flag.end(), '_', '-');
        if (value.is_boolean()) {
            if (value.get<bool>())
                injected.push_back(flag);
        } else if (value.is_array()) {
            for (const auto &v : value) {
                injected.push_back(flag);
                injected.push_back(v.is_string() ? v.get<std::string>() : v.dump());
            }
        } else {
            injected.push_back(flag);
            injected.push_back(value.is_string() ? value.get<std::string>() : value.dump());
        }
    }
    auto pos = std::find_if(rest.begin(), rest.end(), [&](const auto &a) { return subcommands.count(a) > 0; });
    if (pos == rest.end())
        throw UsageError("--config requires a subcommand");
    rest.insert(pos + 1, injected.begin(), injected.end());
    return rest;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Reliability analysis, simulation, calibration and planning for bi-static backscatter networks",
                 "bsnet"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    GlobalOptions g;
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--out", g.out, "write output to this file instead of stdout");
    app.add_option("--format", g.format, "csv | json")->capture_default_str();
    // Consumed by expand_config; registered so it shows up in --help.
    app.add_option("--config", g.config, "JSON file of flag values (flags on the command line win)");

    AnalyticArgs analytic;
    auto *a_cmd = app.add_subcommand("analytic", "closed-form TDR, occupancies and sweeps");
    analytic.net.add_to(*a_cmd);
    a_cmd->add_option("--d-cycle", analytic.d_cycle, "cycle occupancy (overrides the packet)");
    a_cmd->add_option("--d-slot", analytic.d_slot, "slot occupancy (overrides the packet)");
    a_cmd->add_option("--sweep", analytic.sweep, "VAR RANGE, VAR in l|d_slot|d_cycle|alpha")->expected(2);
    a_cmd->add_option("--points", analytic.points, "points for an a:b range")->capture_default_str();
    a_cmd->add_option("--l-max", analytic.l_max, "largest L for optimal_cycles")->capture_default_str();

    SimulateArgs simulate;
    auto *s_cmd = app.add_subcommand("simulate", "Monte Carlo TDR estimate");
    simulate.net.add_to(*s_cmd);
    simulate.sim.add_to(*s_cmd);
    s_cmd->add_option("--ber", simulate.ber, "channel bit error rate")->capture_default_str();
    s_cmd->add_flag("--serial", simulate.serial, "use the single-threaded reference path");

    FitArgs fit;
    auto *f_cmd = app.add_subcommand("fit", "fit the collision zone parameter to measured TDR");
    f_cmd->add_option("--points", fit.points, "measured-points CSV")->required();
    f_cmd->add_option("--grid-step", fit.grid_step, "alpha grid step")->capture_default_str();

    TraceArgs trace;
    auto *t_cmd = app.add_subcommand("trace-tdr", "measured TDR from a reception trace");
    t_cmd->add_option("--trace", trace.trace, "trace CSV")->required();
    t_cmd->add_option("--tags", trace.tags, "comma-separated expected tag IDs");
    t_cmd->add_option("--tags-file", trace.tags_file, "file with one expected tag ID per line");
    t_cmd->add_option("--l", trace.l, "cycles per inventory window")->capture_default_str();
    t_cmd->add_option("--t-cycle", trace.t_cycle, "cycle period in seconds")->required();

    PlanArgs plan;
    auto *p_cmd = app.add_subcommand("plan", "sweep (N_rep, L) and find the maximum tolerable BER");
    p_cmd->add_option("--k", plan.k, "tag count")->capture_default_str();
    p_cmd->add_option("--delta", plan.delta, "target TDR")->capture_default_str();
    p_cmd->add_option("--tr", plan.tr, "inventory period in seconds")->capture_default_str();
    p_cmd->add_option("--bandwidth", plan.bandwidth, "maximum bandwidth in Hz")->capture_default_str();
    p_cmd->add_option("--rs", plan.rs, "symbol rate in baud")->capture_default_str();
    p_cmd->add_option("--alpha", plan.alpha, "collision zone parameter")->capture_default_str();
    p_cmd->add_option("--nrep-set", plan.nrep_set, "N_rep values, e.g. 1:10")->capture_default_str();
    p_cmd->add_option("--l-set", plan.l_set, "L values, e.g. 1:15")->capture_default_str();
    p_cmd->add_option("--ber-resolution", plan.ber_resolution, "BER grid step")->capture_default_str();
    p_cmd->add_flag("--analytic-only", plan.analytic_only, "closed-form evaluation, no Monte Carlo");
    p_cmd->add_flag("--no-prefilter", plan.no_prefilter, "Monte Carlo every cell");
    plan.sim.trials = 400;
    plan.sim.add_to(*p_cmd);

    for (auto *sub : {a_cmd, s_cmd, f_cmd, t_cmd, p_cmd})
        sub->fallthrough();

    try {
        std::vector<std::string> argv =
            expand_config(args, {"analytic", "simulate", "fit", "trace-tdr", "plan"});
        std::reverse(argv.begin(), argv.end());
        app.parse(argv);
    } catch (const CLI::ParseError &e) {
        // --help and --version exit cleanly; anything else is a usage error
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    } catch (const std::exception &e) {
        fmt::print(err, "error: {}\n", e.what());
        return kUsageError;
    }

    try {
        if (a_cmd->parsed())
            return cmd_analytic(analytic, g, out);
        if (s_cmd->parsed())
            return cmd_simulate(simulate, g, out);
        if (f_cmd->parsed())
            return cmd_fit(fit, g, out, err);
        if (t_cmd->parsed())
            return cmd_trace_tdr(trace, g, out);
        if (p_cmd->parsed())
            return cmd_plan(plan, g, out, err);
    } catch (const UnresolvableTarget &e) {
        fmt::print(err, "error: {}\n", e.what());
        return kUnresolvable;
    } catch (const std::exception &e) {
        fmt::print(err, "error: {}\n", e.what());
        return kUsageError;
    }
    return kUsageError;
}

} // namespace bsnet::cli
