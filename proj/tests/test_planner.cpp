#include <doctest.h>

#include <cmath>
#include <vector>

#include "bsnet/planner.hpp"
#include "oracles.hpp"

using namespace bsnet;

namespace {

std::vector<std::uint32_t> range(std::uint32_t lo, std::uint32_t hi) {
    std::vector<std::uint32_t> v;
    for (auto i = lo; i <= hi; ++i)
        v.push_back(i);
    return v;
}

DesignCandidate row(std::uint32_t l, std::uint32_t n, bool feasible, double ber) {
    DesignCandidate c;
    c.l_cycles = l;
    c.n_rep = n;
    c.feasible = feasible;
    c.max_tolerable_ber = ber;
    return c;
}

} // namespace

TEST_CASE("requirement validation") {
    CHECK_NOTHROW(DesignRequirement(1000, 0.001, 1.0, 12e6, 2e6));
    CHECK_THROWS_AS(DesignRequirement(0, 0.001, 1.0, 12e6, 2e6), std::invalid_argument);
    CHECK_THROWS_AS(DesignRequirement(10, 0.0, 1.0, 12e6, 2e6), std::invalid_argument);
    CHECK_THROWS_AS(DesignRequirement(10, 1.0, 1.0, 12e6, 2e6), std::invalid_argument);
    CHECK_THROWS_AS(DesignRequirement(10, 0.01, 0.0, 12e6, 2e6), std::invalid_argument);
    CHECK_THROWS_AS(DesignRequirement(10, 0.01, 1.0, 11.9e6, 2e6), std::invalid_argument);
    CHECK_NOTHROW(DesignRequirement(10, 0.01, 1.0, 12e6, 2e6)); // equality fits
}

TEST_CASE("unresolvable targets are rejected before any simulation") {
    const DesignRequirement req(1000, 1e-9, 1.0, 12e6, 2e6);
    SimOptions opt;
    opt.trials = 400;
    CHECK_THROWS_AS(check_resolvable(req, 400), UnresolvableTarget);
    const auto n = range(1, 3);
    const auto l = range(1, 3);
    CHECK_THROWS_AS(sweep(req, 0.37, n, l, opt), UnresolvableTarget);
    CHECK_THROWS_AS(max_tolerable_ber(req, 0.37, 1, 1, opt, 0.01), UnresolvableTarget);
    // boundary: K * trials == 10 / delta is resolvable
    CHECK_NOTHROW(check_resolvable(DesignRequirement(10, 0.01, 1.0, 12e6, 2e6), 100));
    CHECK_THROWS_AS(check_resolvable(DesignRequirement(10, 0.01, 1.0, 12e6, 2e6), 99), UnresolvableTarget);
    // analytic sweeps need no trial budget
    SweepOptions analytic;
    analytic.analytic_only = true;
    CHECK_NOTHROW(sweep(req, 0.37, n, l, opt, analytic));
}

TEST_CASE("single tag with full capture tolerates the PER bound") {
    // alpha = 1: no collisions, so feasibility is purely PER^L <= delta.
    const DesignRequirement req(1, 0.1, 1.0, 12e6, 2e6);
    SimOptions opt;
    opt.trials = 20000;
    opt.seed = 3;
    const auto found = max_tolerable_ber(req, 1.0, 5, 1, opt, 0.02);
    REQUIRE(found);
    // PER(5 reps) is 0.070 at 0.08 and 0.128 at 0.10, far outside 2 standard errors
    CHECK(found->max_tolerable_ber == 0.08);
    CHECK(found->estimate_at_max.tdr + 2 * found->estimate_at_max.std_error <= 0.1);

    opt.seed = 99;
    const auto above = estimate_tdr(design_config(req, 5, 1), ChannelModel(1.0, 0.10), opt);
    CHECK(above.tdr > 0.1);

    const auto analytic = max_tolerable_ber_analytic(req, 1.0, 5, 1, 0.02);
    REQUIRE(analytic);
    CHECK(*analytic == 0.08);
}

TEST_CASE("zero collisions make only BER 0.5 fail") {
    const DesignRequirement req(1, 0.5, 1.0, 12e6, 2e6);
    const auto ber = max_tolerable_ber_analytic(req, 1.0, 3, 4, 0.05);
    REQUIRE(ber);
    // expected value: walk the BER grid through the closed-form PER
    double expected = -1;
    for (int i = 0; i <= 10; ++i) {
        const double g = i / 20.0;
        if (std::pow(packet_error_rate(PacketSpec(3, 2e6), g), 4) <= 0.5)
            expected = g;
    }
    CHECK(*ber == expected);
}

TEST_CASE("sweep layout") {
    // T_R = 1 ms, R_s = 200 kbaud: T_p(n) = (40 + 16 n) / 200e3 = 0.28 .. 0.52 ms
    const DesignRequirement req(4, 0.05, 1e-3, 1.2e6, 200e3);
    SweepOptions analytic;
    analytic.analytic_only = true;
    analytic.ber_resolution = 0.01;
    const std::vector<std::uint32_t> n{4, 1, 2};
    const std::vector<std::uint32_t> l{3, 1, 2};
    const auto rows = sweep(req, 0.37, n, l, SimOptions{}, analytic);
    // T_cycle is 1, 0.5 and 0.333 ms; the 0.52 ms packet (n_rep = 4) only fits L = 1.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> got;
    for (const auto &r : rows) {
        got.emplace_back(r.l_cycles, r.n_rep);
        CHECK(r.t_p_s <= r.t_cycle_s);
        CHECK(r.t_cycle_s == doctest::Approx(1e-3 / r.l_cycles));
    }
    const std::vector<std::pair<std::uint32_t, std::uint32_t>> want{{1, 1}, {1, 2}, {1, 4},
                                                                      {2, 1}, {2, 2}, {3, 1}};
    CHECK(got == want);

    const std::vector<std::uint32_t> huge{40};
    const std::vector<std::uint32_t> many{50};
    CHECK_THROWS_AS(sweep(req, 0.37, huge, many, SimOptions{}, analytic), std::invalid_argument);
}

TEST_CASE("recommend") {
    const std::vector<DesignCandidate> rows{row(8, 2, true, 0.05), row(12, 4, true, 0.05), row(12, 3, true, 0.05),
                                            row(14, 1, false, 0.0), row(6, 1, true, 0.01)};
    const auto best = recommend(rows);
    CHECK(best.l_cycles == 12);
    CHECK(best.n_rep == 3);

    const std::vector<DesignCandidate> one{row(3, 7, true, 0.0)};
    CHECK(recommend(one).n_rep == 7);

    const std::vector<DesignCandidate> none{row(3, 7, false, 0.3)};
    CHECK_THROWS_AS(recommend(none), std::invalid_argument);
    CHECK_THROWS_AS(recommend(std::vector<DesignCandidate>{}), std::invalid_argument);

    const std::vector<DesignCandidate> higher{row(2, 2, true, 0.02), row(9, 9, true, 0.04)};
    const auto pick = recommend(higher);
    CHECK(pick.l_cycles == 9);
    CHECK(pick.max_tolerable_ber == 0.04);
}

TEST_CASE("Monte Carlo and closed-form feasibility agree away from the boundary") {
    const DesignRequirement req(20, 0.05, 0.1, 1.2e6, 200e3);
    const double alpha = 0.37;
    SimOptions opt;
    opt.trials = 4000;
    opt.seed = 11;
    SweepOptions mc;
    mc.ber_resolution = 0.5; // grid {0, 0.5}: feasibility at zero BER
    mc.prefilter = false;
    const auto n = range(1, 4);
    const auto l = range(1, 6);
    const auto rows = sweep(req, alpha, n, l, opt, mc);
    int compared = 0;
    for (const auto &r : rows) {
        const NetworkConfig cfg = design_config(req, r.n_rep, r.l_cycles);
        const double d = occupancies(cfg).d_cycle;
        const double truth = oracle::edge_aware_tdr(20, r.l_cycles, d, alpha);
        const double eq = tdr_exact(cfg, ChannelModel(alpha));
        const double sigma = std::sqrt(std::max(truth * (1 - truth), 1e-12) / (20.0 * opt.trials));
        const double lo = std::min(truth, eq);
        const double hi = std::max(truth, eq);
        if (hi + 5 * sigma >= req.max_tdr() && lo - 3 * sigma <= req.max_tdr())
            continue; // borderline for either the estimator or the closed form
        ++compared;
        CAPTURE(r.l_cycles);
        CAPTURE(r.n_rep);
        CHECK(r.feasible == (eq <= req.max_tdr()));
        if (r.feasible)
            CHECK(r.max_tolerable_ber == 0.0);
    }
    CHECK(compared >= 18);
}

TEST_CASE("relaxing the target never shrinks the feasible set") {
    SimOptions opt;
    opt.trials = 2000;
    opt.seed = 5;
    SweepOptions so;
    so.ber_resolution = 0.01;
    const auto n = range(1, 3);
    const auto l = range(1, 4);
    const auto tight = sweep(DesignRequirement(20, 0.02, 0.1, 1.2e6, 200e3), 0.37, n, l, opt, so);
    const auto loose = sweep(DesignRequirement(20, 0.05, 0.1, 1.2e6, 200e3), 0.37, n, l, opt, so);
    REQUIRE(tight.size() == loose.size());
    for (std::size_t i = 0; i < tight.size(); ++i) {
        CAPTURE(i);
        if (tight[i].feasible) {
            CHECK(loose[i].feasible);
            CHECK(loose[i].max_tolerable_ber >= tight[i].max_tolerable_ber);
        }
    }
}

TEST_CASE("single-tag sweep follows the PER model") {
    const DesignRequirement req(1, 0.1, 1.0, 12e6, 2e6);
    SimOptions opt;
    opt.trials = 20000;
    opt.seed = 8;
    SweepOptions so;
    so.ber_resolution = 0.01;
    const std::vector<std::uint32_t> n{1, 3, 5};
    const std::vector<std::uint32_t> l{1};
    const auto rows = sweep(req, 1.0, n, l, opt, so);
    REQUIRE(rows.size() == 3);
    for (const auto &r : rows) {
        CAPTURE(r.n_rep);
        REQUIRE(r.feasible);
        const double per = packet_error_rate(PacketSpec(r.n_rep, 2e6), r.max_tolerable_ber);
        CHECK(per <= 0.1);
        // the margin can cost one grid step, never more
        const double per_after = packet_error_rate(PacketSpec(r.n_rep, 2e6), r.max_tolerable_ber + 0.02);
        CHECK(per_after > 0.1 - 1e-3);
    }
    CHECK(rows[0].max_tolerable_ber < rows[1].max_tolerable_ber);
    CHECK(rows[1].max_tolerable_ber < rows[2].max_tolerable_ber);
}

TEST_CASE("elementary procedure matches the slot approximation where it is valid") {
    const double alpha = 0.37;
    int compared = 0;
    for (double delta : {0.001, 0.01, 0.05}) {
        const DesignRequirement req(200, delta, 1.0, 12e6, 2e6);
        for (std::uint32_t n = 1; n <= 10; ++n)
            for (std::uint32_t l = 1; l <= 15; ++l) {
                const NetworkConfig cfg = design_config(req, n, l);
                const ChannelModel ch(alpha);
                if (!approximation_valid(cfg, ch))
                    continue;
                const double slot = tdr_approx_slot(l, occupancies(cfg).d_slot, alpha);
                if (std::abs(slot - delta) < 1e-9 * delta)
                    continue;
                ++compared;
                CAPTURE(n);
                CAPTURE(l);
                CHECK(elementary_design_feasible(req, alpha, n, l) == (slot < delta));
            }
    }
    CHECK(compared > 100);
}
