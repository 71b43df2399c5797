#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "bsnet/io.hpp"
#include "fixtures.hpp"

using namespace bsnet;

namespace {

std::size_t error_line(const std::string &text) {
    std::istringstream in(text);
    try {
        parse_measured_points(in);
    } catch (const TraceError &e) {
        return e.line();
    }
    return 0;
}

bool same_config(const NetworkConfig &a, const NetworkConfig &b) {
    return a.k_tags() == b.k_tags() && a.cycles() == b.cycles() && a.inventory_period_s() == b.inventory_period_s() &&
           a.packet().preamble_symbols() == b.packet().preamble_symbols() &&
           a.packet().id_symbols() == b.packet().id_symbols() && a.packet().n_rep() == b.packet().n_rep() &&
           a.packet().symbol_rate_baud() == b.packet().symbol_rate_baud();
}

} // namespace

TEST_CASE("format_number round-trips") {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        const double v = i % 2 ? u(gen) : std::ldexp(u(gen), -40);
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(0.1) == "0.1");
    CHECK(std::stod(format_number(2e6)) == 2e6);
    CHECK(format_number(0.37) == "0.37");
}

TEST_CASE("measured points parse") {
    std::istringstream in("k,l,tr_s,preamble,id_symbols,nrep,rs_baud,measured_tdr\n"
                          "# bench run 3\n"
                          "4,2,0.01,40,16,10,200000,0.125\n"
                          "\n"
                          "8,1,0.005,40,16,10,200000,0.5\n");
    const auto pts = parse_measured_points(in);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].config.k_tags() == 4);
    CHECK(pts[0].config.cycles() == 2);
    CHECK(pts[0].config.cycle_period_s() == doctest::Approx(0.005));
    CHECK(pts[0].measured_tdr == 0.125);
    CHECK(pts[0].weight == 1.0);
    CHECK(pts[1].config.packet().n_rep() == 10);

    std::istringstream weighted("k,l,tr_s,preamble,id_symbols,nrep,rs_baud,measured_tdr,weight\n"
                                "4,2,0.01,40,16,10,200000,0.125,3\n");
    CHECK(parse_measured_points(weighted).at(0).weight == 3.0);
}

TEST_CASE("measured points errors carry line numbers") {
    const std::string h = "k,l,tr_s,preamble,id_symbols,nrep,rs_baud,measured_tdr\n";
    CHECK(error_line("") == 1);
    CHECK(error_line(h) != 0);
    CHECK(error_line("k,l\n1,1\n") == 1);
    CHECK(error_line(h + "4,2,0.01,40,16,10,200000,0.1\n4,2,0.01,40,16,10,200000\n") == 3);
    CHECK(error_line(h + "4,2,0.01,40,16,10,fast,0.1\n") == 2);
    CHECK(error_line(h + "4,2,0.01,40,16,10,200000,1.5\n") == 2);
    CHECK(error_line(h + "0,2,0.01,40,16,10,200000,0.1\n") == 2);
    // 1 ms packet in a 0.5 ms cycle
    CHECK(error_line(h + "# ok\n4,20,0.01,40,16,10,200000,0.1\n") == 3);
    CHECK(error_line(h + "4,2,0.01,40,16,10,200000,nan\n") == 2);
}

TEST_CASE("measured points round trip") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto pts = fixtures::synthetic_points(fixtures::testbed_grid(), 0.41, 0.02, 6);
    for (auto &p : pts)
        p.weight = std::floor(u(gen) * 5.0) + u(gen);
    std::stringstream buf;
    write_measured_points(buf, pts);
    const auto back = parse_measured_points(buf);
    REQUIRE(back.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CAPTURE(i);
        CHECK(same_config(back[i].config, pts[i].config));
        CHECK(back[i].measured_tdr == pts[i].measured_tdr);
        CHECK(back[i].weight == pts[i].weight);
    }
    CHECK(fit_alpha(back).alpha_hat == fit_alpha(pts).alpha_hat);
}

TEST_CASE("design table round trip") {
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    std::vector<DesignCandidate> rows;
    for (std::uint32_t l = 1; l <= 6; ++l)
        for (std::uint32_t n = 1; n <= 4; ++n) {
            DesignCandidate c;
            c.l_cycles = l;
            c.n_rep = n;
            c.t_cycle_s = 1.0 / l;
            c.t_p_s = (40.0 + 16.0 * n) / 2e6;
            c.feasible = (l + n) % 3 != 0;
            if (c.feasible) {
                c.max_tolerable_ber = u(gen);
                c.achieved_tdr_at_max_ber = u(gen) / 100;
                c.std_error_at_max_ber = u(gen) / 1000;
            }
            rows.push_back(c);
        }
    std::stringstream buf;
    write_design_table(buf, rows);
    CHECK(buf.str().rfind(std::string(kDesignTableHeader) + "\n", 0) == 0);
    const auto back = parse_design_table(buf);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CAPTURE(i);
        CHECK(back[i].l_cycles == rows[i].l_cycles);
        CHECK(back[i].n_rep == rows[i].n_rep);
        CHECK(back[i].t_cycle_s == rows[i].t_cycle_s);
        CHECK(back[i].t_p_s == rows[i].t_p_s);
        CHECK(back[i].feasible == rows[i].feasible);
        CHECK(back[i].max_tolerable_ber == rows[i].max_tolerable_ber);
        CHECK(back[i].achieved_tdr_at_max_ber == rows[i].achieved_tdr_at_max_ber);
        CHECK(back[i].std_error_at_max_ber == rows[i].std_error_at_max_ber);

        const auto j = design_candidate_from_json(ordered_json::parse(to_json(rows[i]).dump()));
        CHECK(j.max_tolerable_ber == rows[i].max_tolerable_ber);
        CHECK(j.feasible == rows[i].feasible);
        CHECK(j.l_cycles == rows[i].l_cycles);
    }

    std::istringstream bad(std::string(kDesignTableHeader) + "\n1,1,1,0.1,yes,0,0,0\n");
    CHECK_THROWS_AS(parse_design_table(bad), TraceError);
    std::istringstream wrong("a,b\n");
    CHECK_THROWS_AS(parse_design_table(wrong), TraceError);
}

TEST_CASE("json round trip of estimates and reports") {
    const NetworkConfig cfg(30, 3, 0.1, PacketSpec(4, 200e3));
    SimOptions opt;
    opt.trials = 300;
    opt.seed = 77;
    const auto est = estimate_tdr(cfg, ChannelModel(0.37, 0.01), opt);
    const auto back = tdr_estimate_from_json(ordered_json::parse(to_json(est).dump()));
    CHECK(back == est);

    TraceTdrReport rep;
    rep.l_cycles = 2;
    rep.t_cycle_s = 0.5;
    rep.window_s = 1.0;
    rep.n_windows = 3;
    rep.expected_tags = {"A", "B"};
    rep.tdr = 1.0 / 6.0;
    rep.per_window_missing = {0, 1, 0};
    const auto j = to_json(rep);
    CHECK(j.at("tdr").get<double>() == rep.tdr);
    CHECK(j.at("n_windows").get<std::uint64_t>() == 3);
    CHECK(j.at("resolution").get<double>() == doctest::Approx(1.0 / 6.0));

    const auto fit = fit_alpha(fixtures::synthetic_points(fixtures::testbed_grid(), 0.37, 0.0, 1), 0.01);
    const auto jf = to_json(fit);
    CHECK(jf.at("alpha_hat").get<double>() == fit.alpha_hat);
    CHECK(jf.at("curve").size() == fit.curve.size());
}
