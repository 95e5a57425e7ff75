#include "robopf/grid.hpp"
#include "robopf/model.hpp"
#include "robopf/oracle.hpp"
#include "robopf/paths.hpp"
#include "robopf/report.hpp"
#include "robopf/splitmix64.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace robopf;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

struct CommonArgs {
    std::string case_path, unc_path;
    std::string model = "pb2";
    double kappa = -1.0, tau = -1.0;    // negative marks "not supplied"
    std::vector<double> kappa_sweep, alpha_sweep;
    double alpha = -1.0;
    int samples = 0;
    uint64_t seed = 0;
    bool seed_given = false;
    int k = 2;
    std::string weight = "resistance";
    double meta = 0.0;                  // dual cap for linearized counterparts; the
                                        // exact vertex formulation has no use for it
    std::string csv_path, policy_path;
    bool no_timing = false;
};

double feas_tolerance() {
    if (const char* env = std::getenv("ROBOPF_TOL")) {
        const double v = std::atof(env);
        if (v > 0.0) return v;
    }
    return 1e-6;
}

SolverOptions solver_options() {
    SolverOptions opt;
    if (const char* env = std::getenv("ROBOPF_TOL")) {
        const double v = std::atof(env);
        if (v > 0.0) opt.feas_tol = v;
    }
    return opt;
}

PathWeight parse_weight(const std::string& w) {
    return w == "hops" ? PathWeight::hops : PathWeight::resistance;
}

std::string status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        default: return "iteration_limit";
    }
}

// load case + sidecar and fold command line overrides into the uncertainty
std::pair<Network, UncertaintySpec> load_instance(const CommonArgs& a) {
    Network base = parse_case_file(a.case_path);
    Network net = base;
    UncertaintySpec spec;
    if (!a.unc_path.empty()) {
        auto parsed = parse_uncertainty_file(base, a.unc_path);
        net = std::move(parsed.first);
        spec = std::move(parsed.second);
    }
    if (a.kappa >= 0.0 || a.tau >= 0.0) {
        spec.has_budget = true;
        if (a.tau >= 0.0) spec.budget.tau = a.tau;
        if (a.kappa >= 0.0) spec.budget.kappa = a.kappa;
    }
    if (spec.has_budget) {
        const double lim = spec.budget.tau * static_cast<double>(net.load_buses().size());
        if (spec.budget.kappa > lim) {
            std::fprintf(stderr, "warning: kappa %g exceeds tau*|K| = %g; clamped\n",
                         spec.budget.kappa, lim);
            spec.budget.kappa = lim;
        }
    }
    const bool redraw = a.alpha >= 0.0 || a.samples > 0 || a.seed_given;
    if (redraw) {
        spec.has_var = true;
        if (a.alpha >= 0.0) spec.var.alpha = a.alpha;
        if (a.samples > 0) spec.var.n_samples = a.samples;
        if (a.seed_given) spec.var.seed = a.seed;
        if (spec.var.n_samples <= 0) spec.var.n_samples = 10;
        spec.var.samples = draw_var_samples(nominal_demand(net), deviation_vector(net, spec.budget),
                                            spec.var.n_samples, spec.var.seed);
    }
    return {std::move(net), std::move(spec)};
}

RunRecord base_record(const CommonArgs& a, const UncertaintySpec& spec, const std::string& model) {
    RunRecord r;
    r.model = model;
    r.k_paths = a.k;
    r.weight = a.weight;
    r.with_timing = !a.no_timing;
    if (spec.has_budget && (model == "aar-xi" || model == "arc-xi")) {
        r.kappa = spec.budget.kappa;
        r.tau = spec.budget.tau;
    }
    if (spec.has_var && (model == "aar-xip" || model == "arc-xip" || model == "oracle")) {
        r.alpha = spec.var.alpha;
        r.samples = spec.var.n_samples;
        r.seed = spec.var.seed;
    }
    return r;
}

std::vector<int> plan_of(const ModelIndex& idx, const Solution& sol) {
    std::vector<int> plan;
    if (sol.status != SolveStatus::optimal) return plan;
    for (auto [bid, col] : idx.x_cols)
        if (sol.primal[col] > 0.5) plan.push_back(bid);
    return plan;
}

// one model solve; shared by cmd_solve and the compare sweep
RunRecord run_model(const Network& net, const PathSet& ps, const UncertaintySpec& spec,
                    const CommonArgs& a, const std::string& model, const SolverOptions& opt,
                    AffinePolicy* policy_out = nullptr) {
    RunRecord rec = base_record(a, spec, model);
    if (model == "pb1") {
        auto [m, idx] = build_pb1(net, ps, 1.0);
        std::tie(rec.cons, rec.vars) = model_stats(m);
        const Solution sol = solve_pb1(net, ps, 1.0, opt);
        rec.status = status_name(sol.status);
        rec.objective = sol.objective;
        rec.nodes = sol.nodes;
        rec.time_s = sol.wall_seconds;
        if (sol.status == SolveStatus::optimal) rec.plan = plan_of(idx, sol);
        return rec;
    }
    if (model == "pb2") {
        auto [m, idx] = build_pb2(net, ps);
        std::tie(rec.cons, rec.vars) = model_stats(m);
        const Solution sol = solve_milp(m, opt);
        rec.status = status_name(sol.status);
        rec.objective = sol.objective;
        rec.nodes = sol.nodes;
        rec.time_s = sol.wall_seconds;
        rec.plan = plan_of(idx, sol);
        return rec;
    }
    if (model == "aar-xi" || model == "aar-xip") {
        const bool budget = model == "aar-xi";
        if (budget && !spec.has_budget) throw std::invalid_argument("budget set not configured");
        if (!budget && !spec.has_var) throw std::invalid_argument("sample set not configured");
        auto [m, idx] = budget ? build_aar_budget(net, ps, spec.budget)
                               : build_aar_var(net, ps, spec.var);
        std::tie(rec.cons, rec.vars) = model_stats(m);
        const Solution sol = solve_milp(m, opt);
        rec.status = status_name(sol.status);
        rec.objective = sol.objective;
        rec.nodes = sol.nodes;
        rec.time_s = sol.wall_seconds;
        rec.plan = plan_of(idx, sol);
        if (policy_out && sol.status == SolveStatus::optimal)
            *policy_out = extract_policy(idx, sol, net,
                                         budget ? AffinePolicy::Space::xi : AffinePolicy::Space::demand);
        return rec;
    }
    if (model == "arc-xi" || model == "arc-xip") {
        const bool budget = model == "arc-xi";
        if (budget && !spec.has_budget) throw std::invalid_argument("budget set not configured");
        if (!budget && !spec.has_var) throw std::invalid_argument("sample set not configured");
        const ArcSolveResult res =
            solve_arc(net, ps, spec, budget ? UncertainSet::budget : UncertainSet::var, opt);
        rec.cons = res.stats.first;
        rec.vars = res.stats.second;
        rec.status = status_name(res.solution.status);
        rec.objective = res.solution.objective;
        rec.nodes = res.solution.nodes;
        rec.time_s = res.solution.wall_seconds;
        rec.plan = res.plan.build;
        return rec;
    }
    throw std::invalid_argument("unknown model tag " + model);
}

int cmd_solve(const CommonArgs& a) {
    auto [net, spec] = load_instance(a);
    const PathSet ps = build_path_sets(net, a.k, parse_weight(a.weight));
    const SolverOptions opt = solver_options();
    AffinePolicy pol;
    const bool wants_policy = !a.policy_path.empty() && (a.model == "aar-xi" || a.model == "aar-xip");
    RunRecord rec = run_model(net, ps, spec, a, a.model, opt, wants_policy ? &pol : nullptr);
    std::fputs(format_run_table({rec}).c_str(), stdout);
    if (!a.csv_path.empty()) write_csv(a.csv_path, {rec});
    if (wants_policy && rec.status == "optimal") {
        write_policy_file(a.policy_path, pol);
        std::printf("policy written to %s\n", a.policy_path.c_str());
    }
    return rec.status == "optimal" ? kExitOk : kExitInfeasible;
}

int cmd_compare(const CommonArgs& a) {
    auto [net, spec] = load_instance(a);
    const PathSet ps = build_path_sets(net, a.k, parse_weight(a.weight));
    SolverOptions opt = solver_options();
    const int n_loads = static_cast<int>(net.load_buses().size());

    struct Task {
        std::string label, model;
        UncertaintySpec spec;
    };
    std::vector<Task> tasks;
    tasks.push_back({"PB2", "pb2", spec});
    std::vector<size_t> block1, block2;
    block1.push_back(0);
    block2.push_back(0);
    if (spec.has_budget) {
        std::vector<double> sweep = a.kappa_sweep;
        if (sweep.empty()) sweep = {2.0, 3.0};
        std::sort(sweep.begin(), sweep.end());
        sweep.push_back(spec.budget.tau * n_loads);    // full protection
        for (double kap : sweep) {
            UncertaintySpec s = spec;
            s.budget.kappa = std::min(kap, spec.budget.tau * n_loads);
            const bool full = kap >= spec.budget.tau * n_loads;
            char label[32];
            std::snprintf(label, sizeof label, full ? "full" : "k=%g", kap);
            block1.push_back(tasks.size());
            tasks.push_back({label, "aar-xi", s});
        }
    }
    if (spec.has_var) {
        std::vector<double> sweep = a.alpha_sweep;
        if (sweep.empty()) sweep = {0.0, 0.5};
        std::sort(sweep.begin(), sweep.end());
        const double full = (spec.var.n_samples - 1.0) / spec.var.n_samples;
        sweep.push_back(full);
        for (double al : sweep) {
            UncertaintySpec s = spec;
            s.var.alpha = std::min(al, full);
            char label[32];
            std::snprintf(label, sizeof label, al >= full ? "full" : "a=%g", al);
            block2.push_back(tasks.size());
            tasks.push_back({label, "aar-xip", s});
        }
    }

    std::vector<RunRecord> recs(tasks.size());
    std::vector<std::string> errors(tasks.size());
    // columns solve in parallel; each inner solve stays serial
    SolverOptions inner = opt;
    inner.parallel_pivot = false;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (size_t t = 0; t < tasks.size(); ++t) {
        try {
            recs[t] = run_model(net, ps, tasks[t].spec, a, tasks[t].model, inner);
        } catch (const std::exception& e) {
            errors[t] = e.what();
        }
    }
    for (size_t t = 0; t < tasks.size(); ++t)
        if (!errors[t].empty()) throw std::runtime_error(tasks[t].model + ": " + errors[t]);

    auto print_block = [&](const char* title, const std::vector<size_t>& cols,
                           const char* reference) {
        if (cols.size() <= 1) return;
        std::printf("%s\n", title);
        std::printf("%-10s", "");
        for (size_t c : cols) std::printf(" %12s", tasks[c].label.c_str());
        std::printf("\n");
        auto row = [&](const char* name, auto value) {
            std::printf("%-10s", name);
            for (size_t c : cols) std::printf(" %12s", value(recs[c]).c_str());
            std::printf("\n");
        };
        char buf[64];
        row("Obj", [&](const RunRecord& r) {
            std::snprintf(buf, sizeof buf, "%.2f", r.objective);
            return std::string(buf);
        });
        row("Cons", [&](const RunRecord& r) { return std::to_string(r.cons); });
        row("Vars", [&](const RunRecord& r) { return std::to_string(r.vars); });
        row("Nodes", [&](const RunRecord& r) { return std::to_string(r.nodes); });
        row("Time(s.)", [&](const RunRecord& r) {
            if (!r.with_timing) return std::string("-");
            std::snprintf(buf, sizeof buf, "%.3f", r.time_s);
            return std::string(buf);
        });
        row("plan", [&](const RunRecord& r) { return plan_string(r.plan); });
        for (size_t i = 1; i < cols.size(); ++i)
            if (recs[cols[i]].objective < recs[cols[i - 1]].objective - 1e-6)
                std::printf("WARNING: objectives not nondecreasing toward full protection\n");
        std::printf("reference shape (published data differs): %s\n\n", reference);
    };
    print_block("protection sweep, budget set", block1, "PB2 1160 | k=2 1256 | k=3 1288 | full 1312");
    print_block("protection sweep, sample set", block2, "PB2 1160 | a=0 1217 | a=0.5 1268 | full 1332");

    if (!a.csv_path.empty()) {
        std::vector<RunRecord> all;
        for (size_t c : block1) all.push_back(recs[c]);
        for (size_t i = 1; i < block2.size(); ++i) all.push_back(recs[block2[i]]);
        write_csv(a.csv_path, all);
    }
    for (const auto& r : recs)
        if (r.status != "optimal") return kExitInfeasible;
    return kExitOk;
}

int cmd_paths(const CommonArgs& a) {
    auto [net, spec] = load_instance(a);
    (void)spec;
    const PathSet ps = build_path_sets(net, a.k, parse_weight(a.weight));
    for (const PairPaths& pp : ps.pairs) {
        int rank = 1;
        for (int pid : pp.path_ids) {
            const Path& p = ps.paths[pid];
            std::printf("%d %d %d %.9g", pp.load_bus, pp.gen_bus, rank++, p.weight);
            for (int e : p.edges) std::printf(" %d", e);
            std::printf("\n");
        }
    }
    return kExitOk;
}

int cmd_oracle(const CommonArgs& a) {
    auto [net, spec] = load_instance(a);
    const PathSet ps = build_path_sets(net, a.k, parse_weight(a.weight));
    const UncertainSet which = a.model == "arc-xip" ? UncertainSet::var : UncertainSet::budget;
    if (which == UncertainSet::budget && !spec.has_budget)
        throw std::invalid_argument("budget set not configured");
    if (which == UncertainSet::var && !spec.has_var)
        throw std::invalid_argument("sample set not configured");

    const auto t0 = std::chrono::steady_clock::now();
    const auto demands = vertex_demands(net, spec, which);
    const BruteForceResult bf = brute_force_arc(net, ps, spec, which, true);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::printf("set vertices: %zu\n", demands.size());
    for (const auto& [plan, total] : bf.feasible)
        std::printf("plan %-9s total %.6f\n", plan_string(plan.build).c_str(), total);
    for (const auto& plan : bf.infeasible)
        std::printf("plan %-9s infeasible\n", plan_string(plan.build).c_str());
    if (!bf.found) {
        std::printf("no robust feasible plan\n");
        return kExitInfeasible;
    }
    std::printf("best plan %s objective %.6f\n", plan_string(bf.best.build).c_str(), bf.objective);

    RunRecord rec = base_record(a, spec, "oracle");
    auto [model, idx] = which == UncertainSet::budget ? build_arc_budget(net, ps, spec.budget)
                                                      : build_arc_var(net, ps, spec.var);
    (void)idx;
    std::tie(rec.cons, rec.vars) = model_stats(model);
    rec.status = "optimal";
    rec.objective = bf.objective;
    rec.nodes = static_cast<long>(bf.feasible.size() + bf.infeasible.size());
    rec.time_s = secs;
    rec.plan = bf.best.build;
    if (!a.csv_path.empty()) write_csv(a.csv_path, {rec});
    return kExitOk;
}

int cmd_evaluate(const CommonArgs& a) {
    if (a.policy_path.empty()) throw std::invalid_argument("evaluate requires --policy");
    const AffinePolicy pol = read_policy_file(a.policy_path);
    auto [net, spec] = load_instance(a);
    const PathSet ps = build_path_sets(net, a.k, parse_weight(a.weight));
    if (pol.load_buses != net.load_buses() || pol.s0.size() != ps.paths.size())
        throw std::invalid_argument("policy does not match this instance");

    const bool budget = pol.space == AffinePolicy::Space::xi;
    if (budget && !spec.has_budget) throw std::invalid_argument("budget set not configured");
    if (!budget && !spec.has_var) throw std::invalid_argument("sample set not configured");

    std::vector<std::vector<double>> coords;    // policy coordinates
    if (budget) {
        coords = budget_vertices(static_cast<int>(pol.load_buses.size()), spec.budget.kappa,
                                 spec.budget.tau)
                     .points;
    } else {
        coords = var_vertices(spec.var.samples, spec.var.alpha).points;
    }
    const size_t n_vertices = coords.size();

    // interior points: seeded convex combinations of three vertices
    SplitMix64 rng{a.seed_given ? a.seed : 9001};
    const int interior = 1000;
    for (int i = 0; i < interior; ++i) {
        double w[3];
        size_t v[3];
        double tot = 0.0;
        for (int j = 0; j < 3; ++j) {
            v[j] = static_cast<size_t>(rng.next() % n_vertices);
            w[j] = rng.next_unit() + 1e-9;
            tot += w[j];
        }
        std::vector<double> r(coords[0].size(), 0.0);
        for (int j = 0; j < 3; ++j)
            for (size_t c = 0; c < r.size(); ++c) r[c] += w[j] / tot * coords[v[j]][c];
        coords.push_back(std::move(r));
    }

    const double tol = feas_tolerance();
    double max_violation = 0.0, max_cost = 0.0, cost_sum = 0.0;
    std::vector<double> gen_costs;
    for (const Generator& g : net.gens) gen_costs.push_back(g.cost);
    for (const auto& r : coords) {
        const auto [p, s] = evaluate_policy(pol, r);
        const std::vector<double> demand = budget ? demand_at_xi(net, spec.budget, r) : r;
        const FeasibilityReport rep = check_recourse_feasibility(net, ps, pol.plan, demand, p, s, tol);
        max_violation = std::max(max_violation, rep.max_violation);
        double cost = 0.0;
        for (size_t gi = 0; gi < p.size(); ++gi) cost += gen_costs[gi] * p[gi];
        max_cost = std::max(max_cost, cost);
        cost_sum += cost;
    }
    std::printf("checked %zu vertices + %d interior points\n", n_vertices, interior);
    std::printf("max violation %.3e (tolerance %g)\n", max_violation, tol);
    std::printf("realized generation cost: mean %.6f max %.6f\n",
                cost_sum / static_cast<double>(coords.size()), max_cost);
    std::printf("policy objective %.6f\n", pol.objective);

    const ArcSolveResult arc =
        solve_arc(net, ps, spec, budget ? UncertainSet::budget : UncertainSet::var, solver_options());
    if (arc.solution.status == SolveStatus::optimal)
        std::printf("gap to exact counterpart %.6f (restriction bound, expected >= 0)\n",
                    pol.objective - arc.solution.objective);

    if (max_violation > tol) {
        std::printf("policy verdict: INFEASIBLE\n");
        return kExitInfeasible;
    }
    std::printf("policy verdict: robust feasible\n");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"path-based optimal power flow with expansion planning under demand uncertainty"};
    app.require_subcommand(1);
    CommonArgs a;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--case", a.case_path, "case file")->required();
        c->add_option("--unc", a.unc_path, "uncertainty sidecar file");
        c->add_option("--model", a.model, "model tag: pb1 pb2 aar-xi aar-xip arc-xi arc-xip");
        c->add_option("--kappa", a.kappa, "budget set 1-norm radius");
        c->add_option("--tau", a.tau, "budget set inf-norm radius");
        c->add_option("--alpha", a.alpha, "sample set tail level in [0,1)");
        c->add_option("--samples", a.samples, "number of demand samples");
        auto* seed_opt = c->add_option("--seed", a.seed, "sample draw seed");
        c->callback([&a, seed_opt] { a.seed_given = seed_opt->count() > 0; });
        c->add_option("--k", a.k, "paths per load-generator pair")->check(CLI::PositiveNumber);
        c->add_option("--weight", a.weight, "path weight metric")
            ->check(CLI::IsMember({"resistance", "hops"}));
        c->add_option("--meta", a.meta, "dual cap for linearized counterparts (accepted, unused)");
        c->add_option("--csv", a.csv_path, "write records as CSV");
        c->add_option("--policy", a.policy_path, "policy file to write (solve) or read (evaluate)");
        c->add_flag("--no-timing", a.no_timing, "blank wall-time fields for reproducible output");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve one model and print its record");
    CLI::App* compare = app.add_subcommand("compare", "sweep protection levels, print the family table");
    compare->add_option("--kappa-sweep", a.kappa_sweep, "budget sweep values");
    compare->add_option("--alpha-sweep", a.alpha_sweep, "sample tail sweep values");
    CLI::App* evaluate = app.add_subcommand("evaluate", "check a saved policy across its uncertainty set");
    CLI::App* paths = app.add_subcommand("paths", "dump the path pool, one line per path");
    CLI::App* oracle = app.add_subcommand("oracle", "brute-force worst case over plans and vertices");
    for (CLI::App* c : {solve, compare, evaluate, paths, oracle}) add_common(c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(a);
        if (compare->parsed()) return cmd_compare(a);
        if (evaluate->parsed()) return cmd_evaluate(a);
        if (paths->parsed()) return cmd_paths(a);
        return cmd_oracle(a);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
}
