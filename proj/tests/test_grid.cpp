#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "robopf/grid.hpp"
#include "robopf/splitmix64.hpp"

#include <cmath>
#include <string>

using namespace robopf;

namespace {

const char* kSmallCase = R"(# three-bus toy
[bus]
1 3 50 10 0 0 1 1.0 0 100 1 1.05 0.95
2 1 30  6 0 0 1 0.0 0 100 1 1.05 0.95
3 2  0  0 0 0 1 1.0 0 100 1 1.05 0.95
[gen]
1 10 -10 1 80 0
3 20 -10 1 90 0
[branch]
1 2 0.10 1.0 120 150 150 0 0
2 3 0.20 2.0 110 150 150 0 0
)";

std::string data_path(const char* name) {
    return std::string(ROBOPF_DATA_DIR) + "/" + name;
}

} // namespace

TEST_CASE("splitmix64 reference stream, seed 0") {
    SplitMix64 g(0);
    CHECK(g.next() == 0xE220A8397B1DCDAFULL);
    CHECK(g.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(g.next() == 0x06C45D188009454FULL);
    CHECK(g.next() == 0xF88BB8A8724C81ECULL);
    CHECK(g.next() == 0x1B39896A51A8749BULL);
}

TEST_CASE("splitmix64 reference stream, seed 42") {
    SplitMix64 g(42);
    CHECK(g.next() == 0xBDD732262FEB6E95ULL);
    CHECK(g.next() == 0x28EFE333B266F103ULL);
    CHECK(g.next() == 0x47526757130F9F52ULL);
    CHECK(g.next() == 0x581CE1FF0E4AE394ULL);
    CHECK(g.next() == 0x09BC585A244823F2ULL);
}

TEST_CASE("splitmix64 unit doubles stay in [0,1) and match next()") {
    SplitMix64 a(7), b(7);
    for (int i = 0; i < 1000; ++i) {
        double u = a.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        double want = static_cast<double>(b.next()) * std::pow(2.0, -64);
        CHECK(u == want);   // bit identity, not approximate
    }
}

TEST_CASE("draw_var_samples is bit-reproducible") {
    std::vector<double> dbar{80, 240, 40, 160, 240};
    std::vector<double> dhat{8, 24, 4, 16, 24};
    auto s = draw_var_samples(dbar, dhat, 10, 42);
    REQUIRE(s.size() == 10);
    for (const auto& row : s) REQUIRE(row.size() == 5);

    // frozen expectations from an independent reimplementation of the stream
    const double row0[5] = {83.865038060349, 223.675698858092, 38.228809042041,
                            155.014102928756, 217.825448089932};
    const double row9[5] = {77.142260629405, 220.055125310398, 37.140015198144,
                            160.155877256726, 262.529819422443};
    for (int k = 0; k < 5; ++k) {
        CHECK(s[0][k] == doctest::Approx(row0[k]).epsilon(1e-12));
        CHECK(s[9][k] == doctest::Approx(row9[k]).epsilon(1e-12));
        for (int i = 0; i < 10; ++i) {
            CHECK(s[i][k] >= dbar[k] - dhat[k]);
            CHECK(s[i][k] <= dbar[k] + dhat[k]);
        }
    }

    // draw order is sample-major: same seed, same values, independent of caller
    auto again = draw_var_samples(dbar, dhat, 10, 42);
    CHECK(again == s);
}

TEST_CASE("parse_case reads buses, gens, branches") {
    Network net = parse_case(kSmallCase);
    REQUIRE(net.buses.size() == 3);
    REQUIRE(net.gens.size() == 2);
    REQUIRE(net.branches.size() == 2);

    CHECK(net.buses[0].id == 1);
    CHECK(net.buses[0].kind == BusKind::slack);
    CHECK(net.buses[0].demand == 50.0);
    CHECK(net.buses[0].base_kv == 100.0);
    CHECK(net.buses[1].kind == BusKind::load);
    CHECK(net.buses[2].kind == BusKind::generator_capable);

    CHECK(net.gens[0].bus == 1);
    CHECK(net.gens[0].p_max == 80.0);
    CHECK(net.gens[1].bus == 3);

    CHECK(net.branches[0].id == 1);
    CHECK(net.branches[0].from == 1);
    CHECK(net.branches[0].to == 2);
    CHECK(net.branches[0].resistance == 0.10);
    CHECK(net.branches[0].rate_a == 120.0);
    // default current cap: rateA over the from-bus base voltage
    CHECK(net.branches[0].y_cap == doctest::Approx(1.2));
    CHECK(net.thermal_rhs(net.branches[0]) == doctest::Approx(1.2 * 1.2 * 0.10));
    CHECK_FALSE(net.branches[0].candidate);

    CHECK(net.load_buses() == std::vector<int>{1, 2});
    CHECK(net.candidate_ids().empty());
    CHECK(net.find_bus(2) != nullptr);
    CHECK(net.find_bus(9) == nullptr);
}

TEST_CASE("serialize_case round-trips") {
    Network net = parse_case(kSmallCase);
    Network again = parse_case(serialize_case(net));
    REQUIRE(again.buses.size() == net.buses.size());
    REQUIRE(again.gens.size() == net.gens.size());
    REQUIRE(again.branches.size() == net.branches.size());
    for (size_t i = 0; i < net.buses.size(); ++i) {
        CHECK(again.buses[i].id == net.buses[i].id);
        CHECK(again.buses[i].kind == net.buses[i].kind);
        CHECK(again.buses[i].demand == net.buses[i].demand);
    }
    for (size_t i = 0; i < net.branches.size(); ++i) {
        CHECK(again.branches[i].from == net.branches[i].from);
        CHECK(again.branches[i].to == net.branches[i].to);
        CHECK(again.branches[i].y_cap == doctest::Approx(net.branches[i].y_cap));
    }
}

TEST_CASE("parser rejects malformed input with line context") {
    CHECK_THROWS_AS(parse_case("[bus]\n1 3 50\n"), ParseError);
    // duplicate bus id
    CHECK_THROWS_AS(parse_case("[bus]\n"
                               "1 3 50 10 0 0 1 1 0 100 1 1.05 0.95\n"
                               "1 1 30 6 0 0 1 0 0 100 1 1.05 0.95\n"
                               "[gen]\n1 1 -1 1 80 0\n[branch]\n"),
                    ParseError);
    // generator on unknown bus
    CHECK_THROWS_AS(parse_case("[bus]\n1 3 50 10 0 0 1 1 0 100 1 1.05 0.95\n"
                               "[gen]\n7 1 -1 1 80 0\n[branch]\n"),
                    ParseError);
    // nonpositive resistance
    CHECK_THROWS_AS(parse_case("[bus]\n"
                               "1 3 50 10 0 0 1 1 0 100 1 1.05 0.95\n"
                               "2 1 30 6 0 0 1 0 0 100 1 1.05 0.95\n"
                               "[gen]\n1 1 -1 1 80 0\n"
                               "[branch]\n1 2 0.0 1.0 120 150 150 0 0\n"),
                    ParseError);
    // bus unreachable from the rest of the grid
    CHECK_THROWS_AS(parse_case("[bus]\n"
                               "1 3 50 10 0 0 1 1 0 100 1 1.05 0.95\n"
                               "2 1 30 6 0 0 1 0 0 100 1 1.05 0.95\n"
                               "3 1 10 2 0 0 1 0 0 100 1 1.05 0.95\n"
                               "[gen]\n1 1 -1 1 80 0\n"
                               "[branch]\n1 2 0.1 1.0 120 150 150 0 0\n"),
                    ParseError);

    // error messages carry the offending line number
    try {
        parse_case("[bus]\n1 3 50\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("parse_uncertainty augments the network") {
    Network base = parse_case(kSmallCase);
    auto [net, spec] = parse_uncertainty(base, R"(
[costs]
gen 1 = 2.0
gen 3 = 1.0
[candidates]
1 3 0.30 3.0 100 40
[thermal]
thermal_rhs 1 = 60
[budget]
kappa = 1.5
tau = 1
dispersion_fraction = 0.2
)");

    REQUIRE(net.branches.size() == 3);
    CHECK(net.branches[2].id == 3);
    CHECK(net.branches[2].candidate);
    CHECK(net.branches[2].build_cost == 40.0);
    CHECK(net.candidate_ids() == std::vector<int>{3});
    CHECK(net.gens[0].cost == 2.0);
    CHECK(net.gens[1].cost == 1.0);

    // thermal override fixes the power cap directly: y_cap = sqrt(rhs / R)
    CHECK(net.thermal_rhs(net.branches[0]) == doctest::Approx(60.0));
    CHECK(net.branches[0].y_cap == doctest::Approx(std::sqrt(60.0 / 0.10)));

    REQUIRE(spec.has_budget);
    CHECK_FALSE(spec.has_var);
    CHECK(spec.budget.kappa == 1.5);
    CHECK(spec.budget.tau == 1.0);
    CHECK(spec.budget.dhat.at(1) == doctest::Approx(10.0));
    CHECK(spec.budget.dhat.at(2) == doctest::Approx(6.0));

    CHECK(nominal_demand(net) == std::vector<double>{50, 30});
    auto dev = deviation_vector(net, spec.budget);
    REQUIRE(dev.size() == 2);
    CHECK(dev[0] == doctest::Approx(10.0));
    CHECK(dev[1] == doctest::Approx(6.0));
}

TEST_CASE("kappa above tau * |K| is clamped") {
    Network base = parse_case(kSmallCase);
    auto [net, spec] = parse_uncertainty(base,
        "[costs]\ngen 1 = 2.0\ngen 3 = 1.0\n[budget]\nkappa = 9\ntau = 1\n");
    (void)net;
    REQUIRE(spec.has_budget);
    CHECK(spec.budget.kappa == doctest::Approx(2.0));  // two load buses
}

TEST_CASE("var section draws samples at parse time") {
    Network base = parse_case(kSmallCase);
    auto [net, spec] = parse_uncertainty(base, R"(
[costs]
gen 1 = 2.0
gen 3 = 1.0
[var]
alpha = 0.5
samples = 4
seed = 42
)");
    REQUIRE(spec.has_var);
    CHECK(spec.var.alpha == 0.5);
    CHECK(spec.var.n_samples == 4);
    CHECK(spec.var.seed == 42);
    REQUIRE(spec.var.samples.size() == 4);
    REQUIRE(spec.var.samples[0].size() == 2);

    // default dispersion is 10% of nominal
    auto expect = draw_var_samples(nominal_demand(net), {5.0, 3.0}, 4, 42);
    CHECK(spec.var.samples == expect);
}

TEST_CASE("missing generation cost is an error") {
    Network base = parse_case(kSmallCase);
    CHECK_THROWS_AS(parse_uncertainty(base, "[costs]\ngen 1 = 2.0\n"), ParseError);
    CHECK_THROWS_AS(parse_uncertainty(base, "[costs]\ngen 1 = 2.0\ngen 3 = 0\n"), ParseError);
}

TEST_CASE("shipped instance parses with expected shape") {
    Network base = parse_case_file(data_path("garver.case"));
    auto [net, spec] = parse_uncertainty_file(base, data_path("garver.unc"));

    REQUIRE(net.buses.size() == 6);
    REQUIRE(net.gens.size() == 3);
    REQUIRE(net.branches.size() == 12);
    CHECK(net.candidate_ids() == std::vector<int>{10, 11, 12});
    CHECK(net.load_buses() == std::vector<int>{1, 2, 3, 4, 5});

    CHECK(nominal_demand(net) == std::vector<double>{80, 240, 40, 160, 240});
    CHECK(net.gens[0].cost == 2.0);
    CHECK(net.gens[1].cost == 1.5);
    CHECK(net.gens[2].cost == 1.0);

    // every corridor carries the explicit MW limit from the sidecar
    const double rhs[12] = {108, 90, 216, 108, 108, 216, 216, 216, 216, 216, 216, 216};
    for (int i = 0; i < 12; ++i)
        CHECK(net.thermal_rhs(net.branches[i]) == doctest::Approx(rhs[i]));
    for (int i = 9; i < 12; ++i) {
        CHECK(net.branches[i].candidate);
        CHECK(net.branches[i].build_cost == 100.0);
    }

    REQUIRE(spec.has_budget);
    CHECK(spec.budget.kappa == 3.0);
    CHECK(spec.budget.tau == 1.0);
    auto dev = deviation_vector(net, spec.budget);
    CHECK(dev == std::vector<double>{8, 24, 4, 16, 24});

    REQUIRE(spec.has_var);
    CHECK(spec.var.alpha == 0.5);
    CHECK(spec.var.n_samples == 10);
    CHECK(spec.var.seed == 62);
    REQUIRE(spec.var.samples.size() == 10);
    const double row0[5] = {75.136575399558, 251.385824073300, 43.975330501648,
                            144.066660822306, 235.947720373644};
    for (int k = 0; k < 5; ++k)
        CHECK(spec.var.samples[0][k] == doctest::Approx(row0[k]).epsilon(1e-12));
}
