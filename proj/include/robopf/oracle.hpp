#pragma once
#include "robopf/formulations.hpp"
#include "robopf/grid.hpp"
#include "robopf/model.hpp"
#include "robopf/paths.hpp"

#include <cstdint>
#include <vector>

namespace robopf {

enum class UncertainSet { budget, var };

// Vertices of the uncertainty set. space tells whether points are xi vectors
// (budget set) or realized demand vectors (VaR set).
struct VertexList {
    enum class Space { xi, demand };
    Space space = Space::xi;
    std::vector<std::vector<double>> points;
};

// Extreme points of { |xi|_1 <= kappa, |xi|_inf <= tau }: floor(kappa/tau)
// coordinates at +-tau and any remainder on one more coordinate.
VertexList budget_vertices(int dim, double kappa, double tau);

// Extreme points of the sample-convex-hull set with per-sample weight cap
// 1/(N(1-alpha)): floor(N(1-alpha)) samples at the cap, remainder on one more.
VertexList var_vertices(const std::vector<std::vector<double>>& samples, double alpha);

struct RecourseResult {
    bool feasible = false;
    double cost = 0.0;                     // generation cost only
    std::vector<double> p, s;              // dispatch and path flows
    std::vector<double> lambda, phi, eta;  // demand, generation, thermal duals
    long iterations = 0;
};
// Cheapest feasible dispatch for a fixed plan at a fixed demand.
RecourseResult recourse_cost(const Network& net, const PathSet& ps, const ExpansionPlan& plan,
                             const std::vector<double>& demand, const SolverOptions& opt = {});

struct WorstCaseResult {
    bool robust_feasible = false;
    double invest_cost = 0.0;
    double worst_recourse = 0.0;
    int worst_vertex = -1;
    std::vector<double> vertex_costs;      // aligned with the vertex list
    std::vector<int> infeasible_vertices;
    double total() const { return invest_cost + worst_recourse; }
};
// Exact worst-case recourse of a plan by sweeping every vertex of the set.
WorstCaseResult worst_case_cost(const Network& net, const PathSet& ps, const ExpansionPlan& plan,
                                const UncertaintySpec& spec, UncertainSet which,
                                bool parallel = true);

struct BruteForceResult {
    bool found = false;                    // some plan is robust feasible
    ExpansionPlan best;
    double objective = 0.0;                // investment + worst-case recourse
    std::vector<std::pair<ExpansionPlan, double>> feasible;
    std::vector<ExpansionPlan> infeasible;
};
// Ground-truth robust optimum: enumerate every candidate subset (capped at
// 2^20 plans) and take the best worst-case total.
BruteForceResult brute_force_arc(const Network& net, const PathSet& ps,
                                 const UncertaintySpec& spec, UncertainSet which,
                                 bool parallel = true);

struct EquivalenceReport {
    bool plan_feasible = false;
    double worst_recourse = 0.0;           // vertex sweep value
    double certified = 0.0;                // dual-certificate value
    double gap = 0.0;                      // |certified - worst_recourse|
};
// Certifies the vertex-sweep worst case with a single dual point: the optimal
// recourse duals at the worst vertex, priced over the whole set by an
// auxiliary LP. Weak duality makes the certificate a lower bound everywhere
// and strong duality makes it tight at the worst vertex.
EquivalenceReport check_pb2pp_equivalence(const Network& net, const PathSet& ps,
                                          const ExpansionPlan& plan, const UncertaintySpec& spec,
                                          UncertainSet which);

// Vertex demand vectors of the selected set (budget xi vertices are mapped
// through d(xi)).
std::vector<std::vector<double>> vertex_demands(const Network& net, const UncertaintySpec& spec,
                                                UncertainSet which);

// Exact counterpart solve by scenario generation on the vertex-expanded
// model: the master restricts the model to a growing subset of vertex blocks;
// each round the incumbent plan is certified by an exact vertex sweep and the
// violating or costlier vertex joins the master. The master is a relaxation
// throughout, so at convergence its optimum equals the full model's. stats
// reports the full vertex-expanded model size; nodes accumulates
// branch-and-bound subproblems across master solves.
struct ArcSolveResult {
    Solution solution;
    ExpansionPlan plan;
    std::pair<int, int> stats;
    int rounds = 0;                // scenario generation iterations
};
ArcSolveResult solve_arc(const Network& net, const PathSet& ps, const UncertaintySpec& spec,
                         UncertainSet which, const SolverOptions& opt = {});

} // namespace robopf
