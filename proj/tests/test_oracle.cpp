#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "robopf/formulations.hpp"
#include "robopf/grid.hpp"
#include "robopf/model.hpp"
#include "robopf/oracle.hpp"
#include "robopf/paths.hpp"
#include "robopf/splitmix64.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

using namespace robopf;

namespace {

// same hand-solvable three-bus instance as the formulation tests
const char* kToyCase = R"([bus]
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

const char* kToySidecar = R"([costs]
gen 1 = 2.0
gen 3 = 1.0
[candidates]
1 3 0.30 3.0 100 10
[thermal]
thermal_rhs 1 = 60
thermal_rhs 2 = 55
thermal_rhs 3 = 70
[budget]
kappa = 1
tau = 1
dispersion_fraction = 0.1
[var]
alpha = 0.5
samples = 4
seed = 9
)";

struct Toy {
    Network net;
    UncertaintySpec spec;
    PathSet ps;
};

Toy make_toy() {
    Network base = parse_case(kToyCase);
    auto aug = parse_uncertainty(base, kToySidecar);
    Toy toy{std::move(aug.first), std::move(aug.second), {}};
    toy.ps = build_path_sets(toy.net, 2, PathWeight::resistance);
    return toy;
}

double norm1(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
}

double norminf(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::fabs(x));
    return s;
}

std::set<std::vector<double>> as_set(const std::vector<std::vector<double>>& pts) {
    return {pts.begin(), pts.end()};
}

} // namespace

TEST_CASE("budget vertex enumeration") {
    {
        // integral budget: q coordinates at +-tau
        auto v = budget_vertices(5, 3, 1);
        CHECK(v.space == VertexList::Space::xi);
        REQUIRE(v.points.size() == 80);             // C(5,3) * 2^3
        for (const auto& xi : v.points) {
            CHECK(norm1(xi) == doctest::Approx(3.0));
            CHECK(norminf(xi) == doctest::Approx(1.0));
            int nz = 0;
            for (double x : xi) nz += x != 0.0;
            CHECK(nz == 3);
        }
        CHECK(as_set(v.points).size() == 80);       // all distinct
    }
    {
        // fractional remainder lands on one extra coordinate
        auto v = budget_vertices(3, 2.5, 1);
        REQUIRE(v.points.size() == 24);             // C(3,2) * 4 * 2 * (3-2)
        for (const auto& xi : v.points) {
            CHECK(norm1(xi) == doctest::Approx(2.5));
            std::vector<double> mags;
            for (double x : xi) mags.push_back(std::fabs(x));
            std::sort(mags.begin(), mags.end());
            CHECK(mags[0] == doctest::Approx(0.5));
            CHECK(mags[1] == doctest::Approx(1.0));
            CHECK(mags[2] == doctest::Approx(1.0));
        }
    }
    {
        // ray cap below the coordinate cap
        auto v = budget_vertices(3, 5, 2);
        REQUIRE(v.points.size() == 24);
        for (const auto& xi : v.points) {
            CHECK(norm1(xi) == doctest::Approx(5.0));
            CHECK(norminf(xi) == doctest::Approx(2.0));
        }
    }
    {
        // budget beyond the box saturates every coordinate
        auto v = budget_vertices(5, 7, 1);
        REQUIRE(v.points.size() == 32);
        for (const auto& xi : v.points) CHECK(norm1(xi) == doctest::Approx(5.0));
    }
    // a zero in either radius collapses the set to the origin
    CHECK(budget_vertices(4, 0, 1).points == std::vector<std::vector<double>>{{0, 0, 0, 0}});
    CHECK(budget_vertices(4, 2, 0).points == std::vector<std::vector<double>>{{0, 0, 0, 0}});

    CHECK_THROWS_AS(budget_vertices(0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(budget_vertices(3, -1, 1), std::invalid_argument);
    CHECK_THROWS_AS(budget_vertices(30, 30, 1), std::length_error);
}

TEST_CASE("sample vertex enumeration") {
    auto samples = draw_var_samples({10, 20}, {2, 5}, 4, 123);
    {
        // alpha = 0: the mean is the only point
        auto v = var_vertices(samples, 0.0);
        CHECK(v.space == VertexList::Space::demand);
        REQUIRE(v.points.size() == 1);
        for (size_t c = 0; c < 2; ++c) {
            double mean = 0.0;
            for (const auto& s : samples) mean += s[c] / 4.0;
            CHECK(v.points[0][c] == doctest::Approx(mean));
        }
    }
    {
        // cap 1/2: averages of every sample pair
        auto v = var_vertices(samples, 0.5);
        REQUIRE(v.points.size() == 6);
        std::set<std::vector<double>> expect;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                expect.insert({0.5 * (samples[i][0] + samples[j][0]),
                               0.5 * (samples[i][1] + samples[j][1])});
        for (const auto& p : v.points) {
            bool hit = false;
            for (const auto& e : expect)
                if (std::fabs(p[0] - e[0]) < 1e-12 && std::fabs(p[1] - e[1]) < 1e-12) hit = true;
            CHECK(hit);
        }
        CHECK(as_set(v.points).size() == 6);
    }
    {
        // cap above 1: each sample is its own vertex
        auto v = var_vertices(samples, 0.9);
        REQUIRE(v.points.size() == 4);
        CHECK(as_set(v.points) == as_set(samples));
    }
    {
        // fractional cap: one sample at the cap plus a remainder sample
        auto v = var_vertices(draw_var_samples({5}, {1}, 3, 3), 0.4);
        CHECK(v.points.size() == 6);                // 3 picks * 2 leftovers
    }

    CHECK_THROWS_AS(var_vertices({}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(var_vertices(samples, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(var_vertices({{1, 2}, {1}}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(var_vertices(draw_var_samples({5}, {1}, 40, 3), 0.5), std::length_error);
}

TEST_CASE("recourse solve returns dispatch and certifying duals") {
    Toy toy = make_toy();
    ExpansionPlan build3;
    build3.build = {3};

    RecourseResult r = recourse_cost(toy.net, toy.ps, build3, {50, 30});
    REQUIRE(r.feasible);
    CHECK(r.cost == doctest::Approx(80.0));
    REQUIRE(r.p.size() == 2);
    REQUIRE(r.s.size() == toy.ps.paths.size());
    CHECK(r.p[0] + r.p[1] == doctest::Approx(80.0));

    // multipliers are sign-normalized and satisfy strong duality:
    // cost = lambda . d - sum_l lim_l eta_l (balance rows have zero rhs)
    REQUIRE(r.lambda.size() == 2);
    REQUIRE(r.phi.size() == 2);
    REQUIRE(r.eta.size() == toy.net.branches.size());
    for (double v : r.lambda) CHECK(v >= -1e-9);
    for (double v : r.phi) CHECK(v >= -1e-9);
    for (double v : r.eta) CHECK(v >= -1e-9);
    double dual_val = r.lambda[0] * 50 + r.lambda[1] * 30;
    for (size_t li = 0; li < toy.net.branches.size(); ++li) {
        const Branch& b = toy.net.branches[li];
        double lim = b.candidate ? (build3.builds(b.id) ? toy.net.thermal_rhs(b) : 0.0)
                                 : toy.net.thermal_rhs(b);
        dual_val -= lim * r.eta[li];
    }
    CHECK(dual_val == doctest::Approx(r.cost).epsilon(1e-9));

    // without the build the cheap generator is capped at 55
    ExpansionPlan none;
    RecourseResult r0 = recourse_cost(toy.net, toy.ps, none, {50, 30});
    REQUIRE(r0.feasible);
    CHECK(r0.cost == doctest::Approx(105.0));

    // demand beyond every corridor into bus 2 is infeasible
    RecourseResult bad = recourse_cost(toy.net, toy.ps, none, {50, 200});
    CHECK_FALSE(bad.feasible);
}

TEST_CASE("vertex sweep reports the exact worst case") {
    Toy toy = make_toy();
    ExpansionPlan build3, none;
    build3.build = {3};

    auto demands = vertex_demands(toy.net, toy.spec, UncertainSet::budget);
    REQUIRE(demands.size() == 4);
    CHECK(demands[0] == std::vector<double>{55, 30});
    CHECK(demands[2] == std::vector<double>{50, 33});

    WorstCaseResult w = worst_case_cost(toy.net, toy.ps, build3, toy.spec, UncertainSet::budget);
    REQUIRE(w.robust_feasible);
    CHECK(w.invest_cost == doctest::Approx(10.0));
    CHECK(w.worst_recourse == doctest::Approx(85.0));
    CHECK(w.worst_vertex == 0);
    CHECK(w.total() == doctest::Approx(95.0));
    REQUIRE(w.vertex_costs.size() == 4);
    CHECK(w.vertex_costs[0] == doctest::Approx(85.0));
    CHECK(w.vertex_costs[1] == doctest::Approx(75.0));
    CHECK(w.vertex_costs[2] == doctest::Approx(83.0));
    CHECK(w.vertex_costs[3] == doctest::Approx(77.0));

    WorstCaseResult w0 = worst_case_cost(toy.net, toy.ps, none, toy.spec, UncertainSet::budget);
    REQUIRE(w0.robust_feasible);
    CHECK(w0.worst_recourse == doctest::Approx(115.0));
    CHECK(w0.total() == doctest::Approx(115.0));

    // interior realizations can never exceed the vertex worst case
    SplitMix64 rng(55);
    for (int t = 0; t < 25; ++t) {
        double lam = rng.next_unit();
        std::vector<double> xi(2);
        auto verts = budget_vertices(2, toy.spec.budget.kappa, toy.spec.budget.tau);
        const auto& a = verts.points[rng.next() % verts.points.size()];
        const auto& b = verts.points[rng.next() % verts.points.size()];
        for (int k = 0; k < 2; ++k) xi[k] = lam * a[k] + (1 - lam) * b[k];
        auto r = recourse_cost(toy.net, toy.ps, build3, demand_at_xi(toy.net, toy.spec.budget, xi));
        REQUIRE(r.feasible);
        CHECK(r.cost <= w.worst_recourse + 1e-7);
    }

    // serial and parallel sweeps agree exactly
    WorstCaseResult ws = worst_case_cost(toy.net, toy.ps, build3, toy.spec, UncertainSet::budget,
                                         false);
    CHECK(ws.worst_recourse == w.worst_recourse);
    CHECK(ws.worst_vertex == w.worst_vertex);

    ExpansionPlan bogus;
    bogus.build = {99};
    CHECK_THROWS_AS(worst_case_cost(toy.net, toy.ps, bogus, toy.spec, UncertainSet::budget),
                    std::invalid_argument);
    UncertaintySpec nospec;
    CHECK_THROWS_AS(vertex_demands(toy.net, nospec, UncertainSet::budget), std::invalid_argument);
    CHECK_THROWS_AS(vertex_demands(toy.net, nospec, UncertainSet::var), std::invalid_argument);
}

TEST_CASE("exhaustive plan search finds the robust optimum") {
    Toy toy = make_toy();
    BruteForceResult bf = brute_force_arc(toy.net, toy.ps, toy.spec, UncertainSet::budget);
    REQUIRE(bf.found);
    CHECK(bf.best.build == std::vector<int>{3});
    CHECK(bf.objective == doctest::Approx(95.0));
    CHECK(bf.feasible.size() == 2);                 // both plans survive this set
    CHECK(bf.infeasible.empty());

    BruteForceResult bv = brute_force_arc(toy.net, toy.ps, toy.spec, UncertainSet::var);
    REQUIRE(bv.found);
    CHECK(bv.feasible.size() + bv.infeasible.size() == 2);
}

TEST_CASE("dual certificate matches the sweep on both sets") {
    Toy toy = make_toy();
    for (auto which : {UncertainSet::budget, UncertainSet::var}) {
        for (std::vector<int> build : {std::vector<int>{}, std::vector<int>{3}}) {
            ExpansionPlan plan;
            plan.build = build;
            auto rep = check_pb2pp_equivalence(toy.net, toy.ps, plan, toy.spec, which);
            REQUIRE(rep.plan_feasible);
            CHECK_MESSAGE(rep.gap <= 1e-7, "build=", build.size(), " set=",
                          which == UncertainSet::budget ? "budget" : "var",
                          " sweep=", rep.worst_recourse, " certified=", rep.certified);
        }
    }

    // a set wide enough to break every plan is reported, not certified
    UncertaintySpec wide = toy.spec;
    wide.budget.dhat[2] = 200.0;
    ExpansionPlan none;
    auto rep = check_pb2pp_equivalence(toy.net, toy.ps, none, wide, UncertainSet::budget);
    CHECK_FALSE(rep.plan_feasible);
}

TEST_CASE("vertex-expanded model: dominated blocks dropped, optimum exact") {
    Toy toy = make_toy();
    {
        auto built = build_arc_budget(toy.net, toy.ps, toy.spec.budget);
        // (45,30) and (50,27) are dominated; two blocks remain
        REQUIRE(built.second.blocks.size() == 2);
        auto sol = solve_milp(built.first);
        REQUIRE(sol.status == SolveStatus::optimal);
        CHECK(sol.objective == doctest::Approx(95.0));
    }
    {
        auto built = build_arc_var(toy.net, toy.ps, toy.spec.var);
        auto sol = solve_milp(built.first);
        REQUIRE(sol.status == SolveStatus::optimal);
        BruteForceResult bf = brute_force_arc(toy.net, toy.ps, toy.spec, UncertainSet::var);
        CHECK(sol.objective == doctest::Approx(bf.objective).epsilon(1e-9));
    }
}

TEST_CASE("scenario generation reaches the exact optimum") {
    Toy toy = make_toy();
    for (auto which : {UncertainSet::budget, UncertainSet::var}) {
        ArcSolveResult arc = solve_arc(toy.net, toy.ps, toy.spec, which);
        REQUIRE(arc.solution.status == SolveStatus::optimal);
        BruteForceResult bf = brute_force_arc(toy.net, toy.ps, toy.spec, which);
        REQUIRE(bf.found);
        CHECK(arc.solution.objective == doctest::Approx(bf.objective).epsilon(1e-9));
        CHECK(arc.rounds >= 1);

        // the returned plan's own worst case equals the reported objective
        WorstCaseResult w = worst_case_cost(toy.net, toy.ps, arc.plan, toy.spec, which);
        REQUIRE(w.robust_feasible);
        CHECK(w.total() == doctest::Approx(arc.solution.objective).epsilon(1e-7));
    }

    // stats reflect the full vertex-expanded model, not the final master
    auto full = build_arc_budget(toy.net, toy.ps, toy.spec.budget);
    ArcSolveResult arc = solve_arc(toy.net, toy.ps, toy.spec, UncertainSet::budget);
    CHECK(arc.stats == model_stats(full.first));
}

TEST_CASE("full-scale agreement between master, monolith, and enumeration") {
    Network base = parse_case_file(std::string(ROBOPF_DATA_DIR) + "/garver.case");
    auto aug = parse_uncertainty_file(base, std::string(ROBOPF_DATA_DIR) + "/garver.unc");
    Network& net = aug.first;
    UncertaintySpec spec = aug.second;
    spec.budget.kappa = 2.0;                        // 40 vertices, 10 undominated
    PathSet ps = build_path_sets(net, 2, PathWeight::resistance);

    BruteForceResult bf = brute_force_arc(net, ps, spec, UncertainSet::budget);
    REQUIRE(bf.found);

    auto built = build_arc_budget(net, ps, spec.budget);
    CHECK(built.second.blocks.size() == 10);
    auto mono = solve_milp(built.first);
    REQUIRE(mono.status == SolveStatus::optimal);
    CHECK(mono.objective == doctest::Approx(bf.objective).epsilon(1e-8));

    ArcSolveResult arc = solve_arc(net, ps, spec, UncertainSet::budget);
    REQUIRE(arc.solution.status == SolveStatus::optimal);
    CHECK(arc.solution.objective == doctest::Approx(bf.objective).epsilon(1e-8));

    WorstCaseResult w = worst_case_cost(net, ps, arc.plan, spec, UncertainSet::budget);
    REQUIRE(w.robust_feasible);
    CHECK(w.total() == doctest::Approx(arc.solution.objective).epsilon(1e-7));
}
