#include "robopf/formulations.hpp"

#include "robopf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace robopf {
namespace {

std::string itos(int v) { return std::to_string(v); }

void finalize_index(const OptModel& m, ModelIndex& idx) {
    idx.col_of.clear();
    idx.row_of.clear();
    for (int j = 0; j < static_cast<int>(m.vars.size()); ++j) idx.col_of[m.vars[j].name] = j;
    for (int i = 0; i < static_cast<int>(m.rows.size()); ++i) idx.row_of[m.rows[i].name] = i;
}

LinExpr sum_over(const std::vector<int>& path_ids, const std::vector<int>& cols) {
    LinExpr e;
    for (int pid : path_ids) e.add(cols[pid], 1.0);
    return e;
}

LinExpr scaled(const LinExpr& e, double s) {
    LinExpr out;
    out.constant = e.constant * s;
    for (auto [c, v] : e.terms) out.add(c, v * s);
    return out;
}

std::vector<int> incident_paths(const PathSet& ps, int branch_id) {
    auto it = ps.incidence.find(branch_id);
    return it == ps.incidence.end() ? std::vector<int>{} : it->second;
}

} // namespace

std::pair<OptModel, ModelIndex> build_pb2(const Network& net, const PathSet& ps,
                                          const std::vector<double>* demand,
                                          const ExpansionPlan* fixed) {
    OptModel m;
    ModelIndex idx;
    const std::vector<int> loads = net.load_buses();
    const std::vector<double> d = demand ? *demand : nominal_demand(net);
    if (d.size() != loads.size()) throw std::invalid_argument("demand vector size mismatch");

    if (!fixed)
        for (const Branch& b : net.branches)
            if (b.candidate)
                idx.x_cols.emplace_back(b.id, m.add_var("x_" + itos(b.id), 0.0, 1.0, b.build_cost, true));
    for (const Generator& g : net.gens)
        idx.gen_cols.push_back(m.add_var("p_g" + itos(g.bus), 0.0, kInf, g.cost));
    for (int pid = 0; pid < static_cast<int>(ps.paths.size()); ++pid)
        idx.flow_cols.push_back(m.add_var("s_" + itos(pid), 0.0, kInf, 0.0));

    for (int k = 0; k < static_cast<int>(loads.size()); ++k)
        m.add_row("demand_k" + itos(loads[k]), sum_over(ps.paths_of_load(loads[k]), idx.flow_cols),
                  RowSense::ge, d[k]);
    for (int gi = 0; gi < static_cast<int>(net.gens.size()); ++gi) {
        LinExpr e = sum_over(ps.paths_of_gen(net.gens[gi].bus), idx.flow_cols);
        e.add(idx.gen_cols[gi], -1.0);
        m.add_row("gen_g" + itos(net.gens[gi].bus), e, RowSense::le, 0.0);
    }
    for (const Branch& b : net.branches) {
        LinExpr e = sum_over(incident_paths(ps, b.id), idx.flow_cols);
        const double cap = net.thermal_rhs(b);
        if (!b.candidate) {
            m.add_row("thermal_l" + itos(b.id), e, RowSense::le, cap);
        } else if (fixed) {
            m.add_row("thermal_l" + itos(b.id), e, RowSense::le, fixed->builds(b.id) ? cap : 0.0);
        } else {
            for (auto [bid, col] : idx.x_cols)
                if (bid == b.id) e.add(col, -cap);
            m.add_row("thermal_l" + itos(b.id), e, RowSense::le, 0.0);
        }
    }
    finalize_index(m, idx);
    return {std::move(m), std::move(idx)};
}

std::pair<OptModel, ModelIndex> build_pb1(const Network& net, const PathSet& ps, double r_global) {
    if (!(r_global > 0.0)) throw std::invalid_argument("r_global must be positive");
    OptModel m;
    ModelIndex idx;
    const std::vector<int> loads = net.load_buses();
    const std::vector<double> d = nominal_demand(net);

    for (const Branch& b : net.branches)
        if (b.candidate)
            idx.x_cols.emplace_back(b.id, m.add_var("x_" + itos(b.id), 0.0, 1.0, b.build_cost, true));
    for (const Generator& g : net.gens)
        idx.gen_cols.push_back(m.add_var("p_g" + itos(g.bus), 0.0, kInf, g.cost));
    for (int pid = 0; pid < static_cast<int>(ps.paths.size()); ++pid)
        idx.flow_cols.push_back(m.add_var("y_" + itos(pid), 0.0, kInf, 0.0));

    for (int k = 0; k < static_cast<int>(loads.size()); ++k)
        m.add_row("demand_k" + itos(loads[k]), sum_over(ps.paths_of_load(loads[k]), idx.flow_cols),
                  RowSense::ge, std::sqrt(d[k] / r_global));
    // thermal rows cap current directly; the quadratic generation coupling is
    // added as tangent cuts by solve_pb1
    for (const Branch& b : net.branches) {
        LinExpr e = sum_over(incident_paths(ps, b.id), idx.flow_cols);
        if (b.candidate) {
            for (auto [bid, col] : idx.x_cols)
                if (bid == b.id) e.add(col, -b.y_cap);
            m.add_row("thermal_l" + itos(b.id), e, RowSense::le, 0.0);
        } else {
            m.add_row("thermal_l" + itos(b.id), e, RowSense::le, b.y_cap);
        }
    }
    finalize_index(m, idx);
    return {std::move(m), std::move(idx)};
}

Solution solve_pb1(const Network& net, const PathSet& ps, double r_global,
                   const SolverOptions& opt, int max_rounds, double cut_tol) {
    auto [m, idx] = build_pb1(net, ps, r_global);
    Solution sol;
    long iters = 0, nodes = 0;
    double wall = 0.0;
    for (int round = 0; round < max_rounds; ++round) {
        sol = solve_milp(m, opt);
        iters += sol.iterations;
        nodes += sol.nodes;
        wall += sol.wall_seconds;
        if (sol.status != SolveStatus::optimal) break;
        // R (sum y)^2 <= p_g, linearized at the current aggregate current Y:
        // 2 R Y sum y - p_g <= R Y^2
        double worst = 0.0;
        for (int gi = 0; gi < static_cast<int>(net.gens.size()); ++gi) {
            const auto pids = ps.paths_of_gen(net.gens[gi].bus);
            double y_sum = 0.0;
            for (int pid : pids) y_sum += sol.primal[idx.flow_cols[pid]];
            const double viol = r_global * y_sum * y_sum - sol.primal[idx.gen_cols[gi]];
            worst = std::max(worst, viol);
            if (viol > cut_tol) {
                LinExpr e;
                for (int pid : pids) e.add(idx.flow_cols[pid], 2.0 * r_global * y_sum);
                e.add(idx.gen_cols[gi], -1.0);
                m.add_row("cut" + itos(round) + "_g" + itos(net.gens[gi].bus), e, RowSense::le,
                          r_global * y_sum * y_sum);
            }
        }
        if (worst <= cut_tol) break;
    }
    sol.iterations = iters;
    sol.nodes = nodes;
    sol.wall_seconds = wall;
    return sol;
}

void robustify_budget_row(OptModel& m, const UncertainRow& row, double kappa, double tau) {
    if (kappa < 0.0 || tau < 0.0) throw std::invalid_argument("negative uncertainty budget");
    const int h_dim = static_cast<int>(row.coeff.size());
    const int t = m.add_var(row.name + ".t", 0.0, kInf, 0.0);
    std::vector<int> w(h_dim);
    for (int h = 0; h < h_dim; ++h) w[h] = m.add_var(row.name + ".w" + itos(h), 0.0, kInf, 0.0);

    LinExpr main = row.nominal;
    main.add(t, kappa);
    for (int h = 0; h < h_dim; ++h) main.add(w[h], tau);
    m.add_row(row.name, main, RowSense::le, row.rhs);

    // t + w_h >= |coeff_h|; minimizing kappa*t + tau*sum w prices the worst
    // xi in the intersection of the 1-norm and inf-norm balls
    for (int h = 0; h < h_dim; ++h) {
        LinExpr lo;
        lo.add(t, 1.0).add(w[h], 1.0);
        LinExpr hi = lo;
        lo += scaled(row.coeff[h], -1.0);
        hi += row.coeff[h];
        m.add_row(row.name + ".lo" + itos(h), lo, RowSense::ge, 0.0);
        m.add_row(row.name + ".hi" + itos(h), hi, RowSense::ge, 0.0);
    }
}

void robustify_var_row(OptModel& m, const UncertainRow& row,
                       const std::vector<std::vector<double>>& samples, double alpha) {
    if (samples.empty()) throw std::invalid_argument("no demand samples");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha outside [0,1)");
    const int n = static_cast<int>(samples.size());
    const double cap = 1.0 / (n * (1.0 - alpha));
    const int t = m.add_var(row.name + ".t", -kInf, kInf, 0.0);
    std::vector<int> w(n);
    for (int i = 0; i < n; ++i) w[i] = m.add_var(row.name + ".w" + itos(i), 0.0, kInf, 0.0);

    LinExpr main = row.nominal;
    main.add(t, 1.0);
    for (int i = 0; i < n; ++i) main.add(w[i], cap);
    m.add_row(row.name, main, RowSense::le, row.rhs);

    // t + w_i >= coeff(d^i); the capped convex-combination worst case prices
    // out to t + (1/(N(1-alpha))) sum_i w_i
    for (int i = 0; i < n; ++i) {
        if (samples[i].size() != row.coeff.size())
            throw std::invalid_argument("sample dimension mismatch");
        LinExpr e;
        e.add(t, 1.0).add(w[i], 1.0);
        for (size_t h = 0; h < row.coeff.size(); ++h) e += scaled(row.coeff[h], -samples[i][h]);
        m.add_row(row.name + ".s" + itos(i), e, RowSense::ge, 0.0);
    }
}

namespace {

// Shared skeleton of both affinely adjustable counterparts. Every uncertain
// row of the apparent-power model under the rule p = p0 + P r, s = s0 + S r
// goes through the robustifier matching the set.
std::pair<OptModel, ModelIndex> build_aar_common(const Network& net, const PathSet& ps,
                                                 const UncertaintyBudget* budget,
                                                 const UncertaintyVaR* var) {
    const bool budget_space = budget != nullptr;
    OptModel m;
    ModelIndex idx;
    const std::vector<int> loads = net.load_buses();
    const int h_dim = static_cast<int>(loads.size());
    const std::vector<double> dbar = nominal_demand(net);
    std::vector<double> dhat;
    if (budget_space) dhat = deviation_vector(net, *budget);

    for (const Branch& b : net.branches)
        if (b.candidate)
            idx.x_cols.emplace_back(b.id, m.add_var("x_" + itos(b.id), 0.0, 1.0, b.build_cost, true));
    idx.gamma_col = m.add_var("gamma", 0.0, kInf, 1.0);

    // xi = 0 lies in the budget set, so the rule values p0/s0 are themselves
    // feasible dispatches there; the VaR set need not contain r = 0
    const double vlb = budget_space ? 0.0 : -kInf;
    for (const Generator& g : net.gens)
        idx.p0_cols.push_back(m.add_var("p0_g" + itos(g.bus), vlb, kInf, 0.0));
    idx.P_cols.assign(net.gens.size(), {});
    for (size_t gi = 0; gi < net.gens.size(); ++gi)
        for (int h = 0; h < h_dim; ++h)
            idx.P_cols[gi].push_back(
                m.add_var("pc_g" + itos(net.gens[gi].bus) + "_h" + itos(loads[h]), -kInf, kInf, 0.0));
    for (int pid = 0; pid < static_cast<int>(ps.paths.size()); ++pid)
        idx.s0_cols.push_back(m.add_var("s0_" + itos(pid), vlb, kInf, 0.0));
    idx.S_cols.assign(ps.paths.size(), {});
    for (size_t pid = 0; pid < ps.paths.size(); ++pid)
        for (int h = 0; h < h_dim; ++h)
            idx.S_cols[pid].push_back(
                m.add_var("sc_" + itos(static_cast<int>(pid)) + "_h" + itos(loads[h]), -kInf, kInf, 0.0));

    auto emit = [&](const UncertainRow& r) {
        if (budget_space)
            robustify_budget_row(m, r, budget->kappa, budget->tau);
        else
            robustify_var_row(m, r, var->samples, var->alpha);
    };

    // worst-case generation cost epigraph: sum_g c_g p_g(r) - gamma <= 0
    {
        UncertainRow r;
        r.name = "cost";
        for (size_t gi = 0; gi < net.gens.size(); ++gi)
            r.nominal.add(idx.p0_cols[gi], net.gens[gi].cost);
        r.nominal.add(idx.gamma_col, -1.0);
        r.coeff.assign(h_dim, {});
        for (int h = 0; h < h_dim; ++h)
            for (size_t gi = 0; gi < net.gens.size(); ++gi)
                r.coeff[h].add(idx.P_cols[gi][h], net.gens[gi].cost);
        emit(r);
    }
    // demand coverage: d_k(r) - sum_{p in P_k} s_p(r) <= 0
    for (int k = 0; k < h_dim; ++k) {
        UncertainRow r;
        r.name = "demand_k" + itos(loads[k]);
        const auto pids = ps.paths_of_load(loads[k]);
        r.nominal.constant = budget_space ? dbar[k] : 0.0;
        for (int pid : pids) r.nominal.add(idx.s0_cols[pid], -1.0);
        r.coeff.assign(h_dim, {});
        for (int h = 0; h < h_dim; ++h) {
            if (h == k) r.coeff[h].constant = budget_space ? dhat[k] : 1.0;
            for (int pid : pids) r.coeff[h].add(idx.S_cols[pid][h], -1.0);
        }
        emit(r);
    }
    // generation balance: sum_{p in P_g} s_p(r) - p_g(r) <= 0
    for (size_t gi = 0; gi < net.gens.size(); ++gi) {
        UncertainRow r;
        r.name = "gen_g" + itos(net.gens[gi].bus);
        const auto pids = ps.paths_of_gen(net.gens[gi].bus);
        for (int pid : pids) r.nominal.add(idx.s0_cols[pid], 1.0);
        r.nominal.add(idx.p0_cols[gi], -1.0);
        r.coeff.assign(h_dim, {});
        for (int h = 0; h < h_dim; ++h) {
            for (int pid : pids) r.coeff[h].add(idx.S_cols[pid][h], 1.0);
            r.coeff[h].add(idx.P_cols[gi][h], -1.0);
        }
        emit(r);
    }
    // thermal caps: sum_{p through l} s_p(r) <= cap_l (x_l)
    for (const Branch& b : net.branches) {
        UncertainRow r;
        r.name = "thermal_l" + itos(b.id);
        const auto pids = incident_paths(ps, b.id);
        const double cap = net.thermal_rhs(b);
        for (int pid : pids) r.nominal.add(idx.s0_cols[pid], 1.0);
        if (b.candidate) {
            for (auto [bid, col] : idx.x_cols)
                if (bid == b.id) r.nominal.add(col, -cap);
            r.rhs = 0.0;
        } else {
            r.rhs = cap;
        }
        r.coeff.assign(h_dim, {});
        for (int h = 0; h < h_dim; ++h)
            for (int pid : pids) r.coeff[h].add(idx.S_cols[pid][h], 1.0);
        emit(r);
    }
    // dispatch stays nonnegative for every realization
    for (size_t gi = 0; gi < net.gens.size(); ++gi) {
        UncertainRow r;
        r.name = "nn_p_g" + itos(net.gens[gi].bus);
        r.nominal.add(idx.p0_cols[gi], -1.0);
        r.coeff.assign(h_dim, {});
        for (int h = 0; h < h_dim; ++h) r.coeff[h].add(idx.P_cols[gi][h], -1.0);
        emit(r);
    }
    for (size_t pid = 0; pid < ps.paths.size(); ++pid) {
        UncertainRow r;
        r.name = "nn_s_" + itos(static_cast<int>(pid));
        r.nominal.add(idx.s0_cols[pid], -1.0);
        r.coeff.assign(h_dim, {});
        for (int h = 0; h < h_dim; ++h) r.coeff[h].add(idx.S_cols[pid][h], -1.0);
        emit(r);
    }

    finalize_index(m, idx);
    return {std::move(m), std::move(idx)};
}

} // namespace

std::pair<OptModel, ModelIndex> build_aar_budget(const Network& net, const PathSet& ps,
                                                 const UncertaintyBudget& budget) {
    return build_aar_common(net, ps, &budget, nullptr);
}

std::pair<OptModel, ModelIndex> build_aar_var(const Network& net, const PathSet& ps,
                                              const UncertaintyVaR& var) {
    if (var.samples.empty()) throw std::invalid_argument("no demand samples");
    return build_aar_common(net, ps, nullptr, &var);
}

std::pair<OptModel, ModelIndex> build_arc_from_vertices(const Network& net, const PathSet& ps,
                                                        const std::vector<std::vector<double>>& vdemands) {
    OptModel m;
    ModelIndex idx;
    const std::vector<int> loads = net.load_buses();
    // recourse cost and feasibility are nondecreasing in demand, so dominated
    // vertex demands can never attain the worst case
    const std::vector<int> keep = pareto_maximal(vdemands);

    for (const Branch& b : net.branches)
        if (b.candidate)
            idx.x_cols.emplace_back(b.id, m.add_var("x_" + itos(b.id), 0.0, 1.0, b.build_cost, true));
    idx.gamma_col = m.add_var("gamma", 0.0, kInf, 1.0);

    for (int bi = 0; bi < static_cast<int>(keep.size()); ++bi) {
        const std::vector<double>& d = vdemands[keep[bi]];
        ModelIndex::VertexBlock blk;
        blk.demand = d;
        const std::string tag = "_v" + itos(bi);
        for (const Generator& g : net.gens)
            blk.p_cols.push_back(m.add_var("p" + tag + "_g" + itos(g.bus), 0.0, kInf, 0.0));
        for (int pid = 0; pid < static_cast<int>(ps.paths.size()); ++pid)
            blk.s_cols.push_back(m.add_var("s" + tag + "_" + itos(pid), 0.0, kInf, 0.0));

        for (int k = 0; k < static_cast<int>(loads.size()); ++k)
            m.add_row("demand" + tag + "_k" + itos(loads[k]),
                      sum_over(ps.paths_of_load(loads[k]), blk.s_cols), RowSense::ge, d[k]);
        for (size_t gi = 0; gi < net.gens.size(); ++gi) {
            LinExpr e = sum_over(ps.paths_of_gen(net.gens[gi].bus), blk.s_cols);
            e.add(blk.p_cols[gi], -1.0);
            m.add_row("gen" + tag + "_g" + itos(net.gens[gi].bus), e, RowSense::le, 0.0);
        }
        for (const Branch& b : net.branches) {
            LinExpr e = sum_over(incident_paths(ps, b.id), blk.s_cols);
            const double cap = net.thermal_rhs(b);
            if (b.candidate) {
                for (auto [bid, col] : idx.x_cols)
                    if (bid == b.id) e.add(col, -cap);
                m.add_row("thermal" + tag + "_l" + itos(b.id), e, RowSense::le, 0.0);
            } else {
                m.add_row("thermal" + tag + "_l" + itos(b.id), e, RowSense::le, cap);
            }
        }
        LinExpr link;
        for (size_t gi = 0; gi < net.gens.size(); ++gi) link.add(blk.p_cols[gi], net.gens[gi].cost);
        link.add(idx.gamma_col, -1.0);
        blk.link_row = m.add_row("link" + tag, link, RowSense::le, 0.0);
        idx.blocks.push_back(std::move(blk));
    }
    finalize_index(m, idx);
    return {std::move(m), std::move(idx)};
}

std::pair<OptModel, ModelIndex> build_arc_budget(const Network& net, const PathSet& ps,
                                                 const UncertaintyBudget& budget) {
    const std::vector<int> loads = net.load_buses();
    const VertexList verts = budget_vertices(static_cast<int>(loads.size()), budget.kappa, budget.tau);
    std::vector<std::vector<double>> vdemands;
    vdemands.reserve(verts.points.size());
    for (const auto& xi : verts.points) vdemands.push_back(demand_at_xi(net, budget, xi));
    return build_arc_from_vertices(net, ps, vdemands);
}

std::pair<OptModel, ModelIndex> build_arc_var(const Network& net, const PathSet& ps,
                                              const UncertaintyVaR& var) {
    const VertexList verts = var_vertices(var.samples, var.alpha);
    return build_arc_from_vertices(net, ps, verts.points);
}

AffinePolicy extract_policy(const ModelIndex& idx, const Solution& sol, const Network& net,
                            AffinePolicy::Space space) {
    if (idx.p0_cols.empty()) throw std::invalid_argument("model carries no decision rule columns");
    AffinePolicy pol;
    pol.space = space;
    pol.load_buses = net.load_buses();
    for (const Generator& g : net.gens) pol.gen_buses.push_back(g.bus);
    pol.objective = sol.objective;
    for (auto [bid, col] : idx.x_cols)
        if (sol.primal[col] > 0.5) pol.plan.build.push_back(bid);
    for (int c : idx.p0_cols) pol.p0.push_back(sol.primal[c]);
    for (const auto& row : idx.P_cols) {
        std::vector<double> r;
        for (int c : row) r.push_back(sol.primal[c]);
        pol.P.push_back(std::move(r));
    }
    for (int c : idx.s0_cols) pol.s0.push_back(sol.primal[c]);
    for (const auto& row : idx.S_cols) {
        std::vector<double> r;
        for (int c : row) r.push_back(sol.primal[c]);
        pol.S.push_back(std::move(r));
    }
    return pol;
}

std::pair<std::vector<double>, std::vector<double>> evaluate_policy(const AffinePolicy& pol,
                                                                    const std::vector<double>& r) {
    if (r.size() != pol.load_buses.size()) throw std::invalid_argument("coordinate size mismatch");
    std::vector<double> p(pol.p0), s(pol.s0);
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t h = 0; h < r.size(); ++h) p[i] += pol.P[i][h] * r[h];
    for (size_t i = 0; i < s.size(); ++i)
        for (size_t h = 0; h < r.size(); ++h) s[i] += pol.S[i][h] * r[h];
    return {std::move(p), std::move(s)};
}

FeasibilityReport check_recourse_feasibility(const Network& net, const PathSet& ps,
                                             const ExpansionPlan& plan,
                                             const std::vector<double>& demand,
                                             const std::vector<double>& p,
                                             const std::vector<double>& s, double tol) {
    const std::vector<int> loads = net.load_buses();
    if (demand.size() != loads.size() || p.size() != net.gens.size() || s.size() != ps.paths.size())
        throw std::invalid_argument("dispatch vector size mismatch");
    FeasibilityReport rep;
    auto push = [&](const std::string& name, double slack) {
        rep.rows.emplace_back(name, slack);
        if (slack < -tol) rep.feasible = false;
        rep.max_violation = std::max(rep.max_violation, -slack);
    };
    for (int k = 0; k < static_cast<int>(loads.size()); ++k) {
        double served = 0.0;
        for (int pid : ps.paths_of_load(loads[k])) served += s[pid];
        push("demand_k" + itos(loads[k]), served - demand[k]);
    }
    for (size_t gi = 0; gi < net.gens.size(); ++gi) {
        double drawn = 0.0;
        for (int pid : ps.paths_of_gen(net.gens[gi].bus)) drawn += s[pid];
        push("gen_g" + itos(net.gens[gi].bus), p[gi] - drawn);
    }
    for (const Branch& b : net.branches) {
        double flow = 0.0;
        for (int pid : incident_paths(ps, b.id)) flow += s[pid];
        const double cap = net.thermal_rhs(b);
        const double lim = b.candidate ? (plan.builds(b.id) ? cap : 0.0) : cap;
        push("thermal_l" + itos(b.id), lim - flow);
    }
    for (size_t gi = 0; gi < net.gens.size(); ++gi) push("nn_p_g" + itos(net.gens[gi].bus), p[gi]);
    for (size_t pid = 0; pid < ps.paths.size(); ++pid)
        push("nn_s_" + itos(static_cast<int>(pid)), s[pid]);
    return rep;
}

std::vector<int> pareto_maximal(const std::vector<std::vector<double>>& pts) {
    const int n = static_cast<int>(pts.size());
    std::vector<int> keep;
    for (int i = 0; i < n; ++i) {
        bool dominated = false;
        for (int j = 0; j < n && !dominated; ++j) {
            if (j == i) continue;
            bool ge_all = true, strict = false;
            for (size_t c = 0; c < pts[i].size(); ++c) {
                if (pts[j][c] < pts[i][c] - 1e-12) {
                    ge_all = false;
                    break;
                }
                if (pts[j][c] > pts[i][c] + 1e-12) strict = true;
            }
            // ties keep the earliest point
            if (ge_all && (strict || j < i)) dominated = true;
        }
        if (!dominated) keep.push_back(i);
    }
    return keep;
}

std::vector<double> demand_at_xi(const Network& net, const UncertaintyBudget& budget,
                                 const std::vector<double>& xi) {
    const std::vector<double> dbar = nominal_demand(net);
    const std::vector<double> dhat = deviation_vector(net, budget);
    if (xi.size() != dbar.size()) throw std::invalid_argument("xi size mismatch");
    std::vector<double> d(dbar.size());
    for (size_t k = 0; k < d.size(); ++k) d[k] = dbar[k] + xi[k] * dhat[k];
    return d;
}

} // namespace robopf
