#pragma once
#include "robopf/grid.hpp"
#include "robopf/model.hpp"
#include "robopf/paths.hpp"

#include <map>
#include <string>
#include <vector>

namespace robopf {

// Candidate branches selected for construction, by branch id.
struct ExpansionPlan {
    std::vector<int> build;

    bool builds(int branch_id) const {
        for (int b : build)
            if (b == branch_id) return true;
        return false;
    }
};

// Symbol table for a built model: every column and row is reachable either
// through the structured fields or the name maps.
struct ModelIndex {
    std::map<std::string, int> col_of;
    std::map<std::string, int> row_of;

    std::vector<std::pair<int, int>> x_cols;        // (candidate branch id, column)
    int gamma_col = -1;
    std::vector<int> flow_cols;                     // y/s column per global path id
    std::vector<int> gen_cols;                      // p column per generator (net.gens order)

    // affine decision rule columns: value part and coefficient part
    std::vector<int> p0_cols, s0_cols;
    std::vector<std::vector<int>> P_cols;           // [gen][h]
    std::vector<std::vector<int>> S_cols;           // [path][h]

    // exact counterpart recourse blocks, one per uncertainty vertex kept
    struct VertexBlock {
        std::vector<double> demand;
        std::vector<int> s_cols, p_cols;
        int link_row = -1;
    };
    std::vector<VertexBlock> blocks;
};

// Affine decision rule: p = p0 + P r, s = s0 + S r, with r the uncertainty
// coordinate vector (xi for the budget set, realized demand for the VaR set).
struct AffinePolicy {
    enum class Space { xi, demand };
    Space space = Space::xi;
    std::vector<int> load_buses;                    // coordinate order, ascending
    std::vector<int> gen_buses;
    std::vector<double> p0;
    std::vector<std::vector<double>> P;             // |G| x |H|
    std::vector<double> s0;
    std::vector<std::vector<double>> S;             // |paths| x |H|
    double objective = 0.0;
    ExpansionPlan plan;
};

// Current-flow model: y per path, demand rows at sqrt(d/R), thermal caps on
// current; the quadratic generation coupling R (sum y)^2 <= p is enforced by
// tangent cuts added in solve_pb1.
std::pair<OptModel, ModelIndex> build_pb1(const Network& net, const PathSet& ps, double r_global);
Solution solve_pb1(const Network& net, const PathSet& ps, double r_global,
                   const SolverOptions& opt = {}, int max_rounds = 200, double cut_tol = 1e-6);

// Apparent-power model. demand defaults to the nominal vector; fixed pins the
// expansion decision (recourse form, investment cost excluded from the
// objective).
std::pair<OptModel, ModelIndex> build_pb2(const Network& net, const PathSet& ps,
                                          const std::vector<double>* demand = nullptr,
                                          const ExpansionPlan* fixed = nullptr);

// Row with uncertain data: nominal + sum_h coeff[h] * r_h <= rhs for every r
// in the uncertainty set.
struct UncertainRow {
    std::string name;
    LinExpr nominal;
    std::vector<LinExpr> coeff;
    double rhs = 0.0;
};

// Budget-set counterpart: emits t >= 0, w_h >= 0, the protected main row
// nominal + kappa t + tau sum_h w_h <= rhs and t + w_h >= +-coeff_h.
void robustify_budget_row(OptModel& m, const UncertainRow& row, double kappa, double tau);

// VaR-set counterpart: emits free t, w_i >= 0 per sample, the protected row
// nominal + t + (1/(N(1-alpha))) sum_i w_i <= rhs and t + w_i >= coeff(d^i).
void robustify_var_row(OptModel& m, const UncertainRow& row,
                       const std::vector<std::vector<double>>& samples, double alpha);

// Affinely adjustable counterparts: every uncertain row of the apparent-power
// model under the decision rule is passed through the matching robustifier.
std::pair<OptModel, ModelIndex> build_aar_budget(const Network& net, const PathSet& ps,
                                                 const UncertaintyBudget& budget);
std::pair<OptModel, ModelIndex> build_aar_var(const Network& net, const PathSet& ps,
                                              const UncertaintyVaR& var);

// Exact counterparts: one recourse block per Pareto-maximal vertex demand of
// the uncertainty set plus a shared epigraph on the recourse cost. Recourse
// cost is nondecreasing in demand, so dominated vertices can never bind.
std::pair<OptModel, ModelIndex> build_arc_budget(const Network& net, const PathSet& ps,
                                                 const UncertaintyBudget& budget);
std::pair<OptModel, ModelIndex> build_arc_var(const Network& net, const PathSet& ps,
                                              const UncertaintyVaR& var);

// Same block structure over an explicit vertex demand list; the scenario
// generation master in solve_arc restricts the full model to a growing subset
// of blocks through this.
std::pair<OptModel, ModelIndex> build_arc_from_vertices(const Network& net, const PathSet& ps,
                                                        const std::vector<std::vector<double>>& vdemands);

AffinePolicy extract_policy(const ModelIndex& idx, const Solution& sol,
                            const Network& net, AffinePolicy::Space space);

// (p, s) realized by the rule at coordinate vector r.
std::pair<std::vector<double>, std::vector<double>> evaluate_policy(const AffinePolicy& pol,
                                                                    const std::vector<double>& r);

struct FeasibilityReport {
    bool feasible = true;
    double max_violation = 0.0;                         // positive = infeasible by that much
    std::vector<std::pair<std::string, double>> rows;   // name, signed slack (>= 0 is satisfied)
};
FeasibilityReport check_recourse_feasibility(const Network& net, const PathSet& ps,
                                             const ExpansionPlan& plan,
                                             const std::vector<double>& demand,
                                             const std::vector<double>& p,
                                             const std::vector<double>& s,
                                             double tol = 1e-6);

// Pareto filter shared with the oracle: keep points not weakly dominated by
// another point (componentwise <=, with strict inequality somewhere).
std::vector<int> pareto_maximal(const std::vector<std::vector<double>>& pts);

std::vector<double> demand_at_xi(const Network& net, const UncertaintyBudget& budget,
                                 const std::vector<double>& xi);

} // namespace robopf
