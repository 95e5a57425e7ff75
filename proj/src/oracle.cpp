#include "robopf/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace robopf {
namespace {

constexpr double kZeroTol = 1e-12;
constexpr double kMaxVertices = 1e6;

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// visit every k-subset of {0..n-1} in lexicographic order
template <typename Fn>
void for_each_combo(int n, int k, Fn fn) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    if (k == 0) {
        fn(idx);
        return;
    }
    if (k > n) return;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

double plan_cost(const Network& net, const ExpansionPlan& plan) {
    double total = 0.0;
    for (int id : plan.build) {
        bool hit = false;
        for (const Branch& b : net.branches)
            if (b.id == id) {
                if (!b.candidate) throw std::invalid_argument("plan builds a non-candidate branch");
                total += b.build_cost;
                hit = true;
            }
        if (!hit) throw std::invalid_argument("plan references an unknown branch");
    }
    return total;
}

struct Sweep {
    bool feasible = false;
    double worst = 0.0;
    int worst_vertex = -1;
    std::vector<double> costs;
    std::vector<int> infeasible;
};

Sweep sweep_vertices(const Network& net, const PathSet& ps, const ExpansionPlan& plan,
                     const std::vector<std::vector<double>>& demands, bool parallel) {
    const int n = static_cast<int>(demands.size());
    Sweep sw;
    sw.costs.assign(n, 0.0);
    std::vector<char> ok(n, 0);
    SolverOptions o;
    o.parallel_pivot = false; // vertex solves are tiny; parallelism lives across them
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (int v = 0; v < n; ++v) {
        RecourseResult r = recourse_cost(net, ps, plan, demands[v], o);
        ok[v] = r.feasible ? 1 : 0;
        sw.costs[v] = r.feasible ? r.cost : 0.0;
    }
    (void)parallel;
    for (int v = 0; v < n; ++v)
        if (!ok[v]) sw.infeasible.push_back(v);
    sw.feasible = sw.infeasible.empty();
    for (int v = 0; v < n; ++v)
        if (ok[v] && (sw.worst_vertex < 0 || sw.costs[v] > sw.worst)) {
            sw.worst = sw.costs[v];
            sw.worst_vertex = v;
        }
    return sw;
}

} // namespace

VertexList budget_vertices(int dim, double kappa, double tau) {
    if (dim <= 0) throw std::invalid_argument("dimension must be positive");
    if (kappa < 0.0 || tau < 0.0) throw std::invalid_argument("negative uncertainty budget");
    VertexList out;
    out.space = VertexList::Space::xi;
    if (kappa <= kZeroTol || tau <= kZeroTol) {
        out.points.assign(1, std::vector<double>(dim, 0.0));
        return out;
    }
    const double keff = std::min(kappa, tau * dim);
    int q = static_cast<int>(std::floor(keff / tau + 1e-9));
    q = std::min(q, dim);
    double frac = keff - q * tau;
    if (frac < kZeroTol) frac = 0.0;

    const double count =
        binom(dim, q) * std::ldexp(1.0, q) * (frac > 0.0 ? 2.0 * (dim - q) : 1.0);
    if (count > kMaxVertices) throw std::length_error("budget vertex enumeration too large");

    for_each_combo(dim, q, [&](const std::vector<int>& combo) {
        const unsigned long signs = 1ul << q;
        for (unsigned long mask = 0; mask < signs; ++mask) {
            std::vector<double> xi(dim, 0.0);
            for (int i = 0; i < q; ++i) xi[combo[i]] = (mask >> i & 1u) ? -tau : tau;
            if (frac == 0.0) {
                out.points.push_back(xi);
                continue;
            }
            for (int extra = 0; extra < dim; ++extra) {
                if (std::find(combo.begin(), combo.end(), extra) != combo.end()) continue;
                for (double s : {frac, -frac}) {
                    std::vector<double> p = xi;
                    p[extra] = s;
                    out.points.push_back(std::move(p));
                }
            }
        }
    });
    return out;
}

VertexList var_vertices(const std::vector<std::vector<double>>& samples, double alpha) {
    if (samples.empty()) throw std::invalid_argument("no demand samples");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha outside [0,1)");
    const int n = static_cast<int>(samples.size());
    const size_t dim = samples[0].size();
    for (const auto& s : samples)
        if (s.size() != dim) throw std::invalid_argument("ragged sample matrix");
    const double cap = 1.0 / (n * (1.0 - alpha));
    int full = static_cast<int>(std::floor(1.0 / cap + 1e-9));
    full = std::min(full, n);
    double rem = 1.0 - full * cap;
    if (rem < kZeroTol) rem = 0.0;

    const double count = binom(n, full) * (rem > 0.0 ? static_cast<double>(n - full) : 1.0);
    if (count > kMaxVertices) throw std::length_error("sample vertex enumeration too large");

    VertexList out;
    out.space = VertexList::Space::demand;
    for_each_combo(n, full, [&](const std::vector<int>& combo) {
        std::vector<double> base(dim, 0.0);
        for (int i : combo)
            for (size_t c = 0; c < dim; ++c) base[c] += cap * samples[i][c];
        if (rem == 0.0) {
            out.points.push_back(std::move(base));
            return;
        }
        for (int extra = 0; extra < n; ++extra) {
            if (std::find(combo.begin(), combo.end(), extra) != combo.end()) continue;
            std::vector<double> p = base;
            for (size_t c = 0; c < dim; ++c) p[c] += rem * samples[extra][c];
            out.points.push_back(std::move(p));
        }
    });
    return out;
}

RecourseResult recourse_cost(const Network& net, const PathSet& ps, const ExpansionPlan& plan,
                             const std::vector<double>& demand, const SolverOptions& opt) {
    auto [m, idx] = build_pb2(net, ps, &demand, &plan);
    const Solution sol = solve_lp(m, opt);
    RecourseResult r;
    r.iterations = sol.iterations;
    if (sol.status != SolveStatus::optimal) return r;
    r.feasible = true;
    r.cost = sol.objective;
    for (int c : idx.gen_cols) r.p.push_back(sol.primal[c]);
    for (int c : idx.flow_cols) r.s.push_back(sol.primal[c]);
    // demand rows are >= (dual lambda >= 0); generation and thermal rows are
    // <= (duals <= 0), flipped to the nonnegative multipliers phi and eta
    for (int bus : net.load_buses()) r.lambda.push_back(sol.dual[idx.row_of.at("demand_k" + std::to_string(bus))]);
    for (const Generator& g : net.gens) r.phi.push_back(-sol.dual[idx.row_of.at("gen_g" + std::to_string(g.bus))]);
    for (const Branch& b : net.branches) r.eta.push_back(-sol.dual[idx.row_of.at("thermal_l" + std::to_string(b.id))]);
    return r;
}

std::vector<std::vector<double>> vertex_demands(const Network& net, const UncertaintySpec& spec,
                                                UncertainSet which) {
    if (which == UncertainSet::budget) {
        if (!spec.has_budget) throw std::invalid_argument("no budget uncertainty configured");
        const int dim = static_cast<int>(net.load_buses().size());
        const VertexList verts = budget_vertices(dim, spec.budget.kappa, spec.budget.tau);
        std::vector<std::vector<double>> demands;
        demands.reserve(verts.points.size());
        for (const auto& xi : verts.points) demands.push_back(demand_at_xi(net, spec.budget, xi));
        return demands;
    }
    if (!spec.has_var) throw std::invalid_argument("no sample uncertainty configured");
    return var_vertices(spec.var.samples, spec.var.alpha).points;
}

WorstCaseResult worst_case_cost(const Network& net, const PathSet& ps, const ExpansionPlan& plan,
                                const UncertaintySpec& spec, UncertainSet which, bool parallel) {
    const auto demands = vertex_demands(net, spec, which);
    const Sweep sw = sweep_vertices(net, ps, plan, demands, parallel);
    WorstCaseResult res;
    res.invest_cost = plan_cost(net, plan);
    res.robust_feasible = sw.feasible;
    res.worst_recourse = sw.worst;
    res.worst_vertex = sw.worst_vertex;
    res.vertex_costs = sw.costs;
    res.infeasible_vertices = sw.infeasible;
    return res;
}

BruteForceResult brute_force_arc(const Network& net, const PathSet& ps, const UncertaintySpec& spec,
                                 UncertainSet which, bool parallel) {
    const std::vector<int> cands = net.candidate_ids();
    if (cands.size() > 20) throw std::length_error("too many candidates to enumerate");
    const auto demands = vertex_demands(net, spec, which);
    const long n_plans = 1L << cands.size();

    std::vector<double> totals(n_plans, 0.0);
    std::vector<char> ok(n_plans, 0);
    std::vector<ExpansionPlan> plans(n_plans);
    for (long mask = 0; mask < n_plans; ++mask)
        for (size_t i = 0; i < cands.size(); ++i)
            if (mask >> i & 1) plans[mask].build.push_back(cands[i]);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (long mask = 0; mask < n_plans; ++mask) {
        const Sweep sw = sweep_vertices(net, ps, plans[mask], demands, false);
        ok[mask] = sw.feasible ? 1 : 0;
        totals[mask] = sw.feasible ? plan_cost(net, plans[mask]) + sw.worst : 0.0;
    }
    (void)parallel;

    BruteForceResult out;
    long best = -1;
    for (long mask = 0; mask < n_plans; ++mask) {
        if (!ok[mask]) {
            out.infeasible.push_back(plans[mask]);
            continue;
        }
        out.feasible.emplace_back(plans[mask], totals[mask]);
        if (best < 0 || totals[mask] < totals[best]) best = mask;
    }
    if (best >= 0) {
        out.found = true;
        out.best = plans[best];
        out.objective = totals[best];
    }
    return out;
}

EquivalenceReport check_pb2pp_equivalence(const Network& net, const PathSet& ps,
                                          const ExpansionPlan& plan, const UncertaintySpec& spec,
                                          UncertainSet which) {
    const auto demands = vertex_demands(net, spec, which);
    const Sweep sw = sweep_vertices(net, ps, plan, demands, true);
    EquivalenceReport rep;
    rep.plan_feasible = sw.feasible;
    if (!sw.feasible) return rep;
    rep.worst_recourse = sw.worst;

    // optimal recourse duals at the worst vertex
    SolverOptions o;
    const RecourseResult at_worst = recourse_cost(net, ps, plan, demands[sw.worst_vertex], o);
    if (!at_worst.feasible) throw std::logic_error("worst vertex lost feasibility on re-solve");

    // price the fixed dual point over the whole set: gamma >= lambda . d(r)
    // for every r, through the same robustified-row machinery the compact
    // counterparts use
    OptModel aux;
    const int gamma = aux.add_var("gamma", -kInf, kInf, 1.0);
    UncertainRow row;
    row.name = "price";
    row.nominal.add(gamma, -1.0);
    const std::vector<int> loads = net.load_buses();
    if (which == UncertainSet::budget) {
        const std::vector<double> dbar = nominal_demand(net);
        const std::vector<double> dhat = deviation_vector(net, spec.budget);
        row.coeff.assign(loads.size(), {});
        for (size_t k = 0; k < loads.size(); ++k) {
            row.nominal.constant += at_worst.lambda[k] * dbar[k];
            row.coeff[k].constant = at_worst.lambda[k] * dhat[k];
        }
        robustify_budget_row(aux, row, spec.budget.kappa, spec.budget.tau);
    } else {
        row.coeff.assign(loads.size(), {});
        for (size_t k = 0; k < loads.size(); ++k) row.coeff[k].constant = at_worst.lambda[k];
        robustify_var_row(aux, row, spec.var.samples, spec.var.alpha);
    }
    const Solution priced = solve_lp(aux);
    if (priced.status != SolveStatus::optimal) throw std::logic_error("dual pricing LP failed");

    // dual objective at demand d: lambda . d - sum_l cap_l x_l eta_l
    double cap_term = 0.0;
    for (size_t li = 0; li < net.branches.size(); ++li) {
        const Branch& b = net.branches[li];
        const double lim = b.candidate ? (plan.builds(b.id) ? net.thermal_rhs(b) : 0.0) : net.thermal_rhs(b);
        cap_term += lim * at_worst.eta[li];
    }
    rep.certified = priced.objective - cap_term;
    rep.gap = std::abs(rep.certified - rep.worst_recourse);
    return rep;
}

ArcSolveResult solve_arc(const Network& net, const PathSet& ps, const UncertaintySpec& spec,
                         UncertainSet which, const SolverOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    ArcSolveResult out;
    {
        auto [full, idx] = which == UncertainSet::budget ? build_arc_budget(net, ps, spec.budget)
                                                         : build_arc_var(net, ps, spec.var);
        out.stats = model_stats(full);
    }
    const auto all_demands = vertex_demands(net, spec, which);
    std::vector<std::vector<double>> kept;
    for (int i : pareto_maximal(all_demands)) kept.push_back(all_demands[i]);

    auto total_demand = [](const std::vector<double>& d) {
        double t = 0.0;
        for (double v : d) t += v;
        return t;
    };
    // seed the master with the heaviest vertex, the usual binding one
    std::vector<char> in_master(kept.size(), 0);
    std::vector<std::vector<double>> master_demands;
    {
        int seed_v = 0;
        for (size_t i = 1; i < kept.size(); ++i)
            if (total_demand(kept[i]) > total_demand(kept[seed_v])) seed_v = static_cast<int>(i);
        in_master[seed_v] = 1;
        master_demands.push_back(kept[seed_v]);
    }

    for (size_t round = 0; round <= kept.size(); ++round) {
        out.rounds = static_cast<int>(round) + 1;
        auto [master, idx] = build_arc_from_vertices(net, ps, master_demands);
        const Solution sol = solve_milp(master, opt);
        out.solution.iterations += sol.iterations;
        out.solution.nodes += sol.nodes;
        if (sol.status != SolveStatus::optimal) {
            // the master is a relaxation of the full model, so its
            // infeasibility is conclusive
            out.solution.status = sol.status;
            break;
        }
        ExpansionPlan plan;
        for (auto [bid, col] : idx.x_cols)
            if (sol.primal[col] > 0.5) plan.build.push_back(bid);
        const Sweep sw = sweep_vertices(net, ps, plan, kept, opt.parallel_pivot);

        int add = -1;
        if (!sw.feasible) {
            for (int v : sw.infeasible)
                if (add < 0 || total_demand(kept[v]) > total_demand(kept[add])) add = v;
        } else {
            const double gamma = sol.objective - plan_cost(net, plan);
            if (sw.worst > gamma + 1e-7) add = sw.worst_vertex;
        }
        if (add < 0) {
            out.solution.status = SolveStatus::optimal;
            out.solution.objective = sol.objective;
            out.solution.primal = sol.primal;
            out.plan = std::move(plan);
            break;
        }
        if (in_master[add]) throw std::logic_error("scenario generation revisited a vertex");
        in_master[add] = 1;
        master_demands.push_back(kept[add]);
    }
    out.solution.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

} // namespace robopf
