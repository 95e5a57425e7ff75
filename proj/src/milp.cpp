#include "robopf/model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <vector>

namespace robopf {

namespace {

struct Node {
    double bound;                                   // parent LP objective
    long seq;                                       // creation order, tie-break
    std::vector<std::pair<int, int>> fixes;         // (column, 0 or 1)
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;   // best-first
        return a.seq > b.seq;
    }
};

} // namespace

Solution solve_milp(const OptModel& m, const SolverOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<int> bins;
    for (size_t j = 0; j < m.vars.size(); ++j)
        if (m.vars[j].is_binary) bins.push_back(static_cast<int>(j));

    auto solve_with = [&](const std::vector<std::pair<int, int>>& fixes, Solution& out) {
        OptModel sub = m;
        for (auto [col, val] : fixes) {
            sub.vars[col].lb = val;
            sub.vars[col].ub = val;
        }
        out = solve_lp(sub, opt);
    };

    Solution root;
    solve_with({}, root);
    root.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (bins.empty() || root.status != SolveStatus::optimal) {
        root.nodes = 0;
        return root;
    }

    auto most_fractional = [&](const Solution& s) -> int {
        int pick = -1;
        double best = opt.int_tol;
        for (int j : bins) {
            double f = s.primal[j] - std::floor(s.primal[j]);
            double dist = std::min(f, 1.0 - f);
            if (dist > best + 1e-15) { best = dist; pick = j; }
        }
        return pick;
    };

    Solution incumbent;
    incumbent.status = SolveStatus::infeasible;
    double cutoff = kInf;
    long nodes = 0, total_iters = root.iterations, seq = 0;

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;

    auto process = [&](const Solution& s, const std::vector<std::pair<int, int>>& fixes) {
        if (s.status != SolveStatus::optimal) return;   // infeasible subtree
        if (s.objective >= cutoff - opt.gap_abs) return;
        int frac = most_fractional(s);
        if (frac < 0) {
            incumbent = s;
            cutoff = s.objective;
            return;
        }
        for (int v = 0; v <= 1; ++v) {
            Node child;
            child.bound = s.objective;
            child.seq = seq++;
            child.fixes = fixes;
            child.fixes.emplace_back(frac, v);
            open.push(std::move(child));
        }
    };

    if (root.status == SolveStatus::optimal) process(root, {});
    while (!open.empty()) {
        Node nd = open.top();
        open.pop();
        if (nd.bound >= cutoff - opt.gap_abs) continue;
        Solution s;
        solve_with(nd.fixes, s);
        ++nodes;
        total_iters += s.iterations;
        if (s.status == SolveStatus::unbounded) {
            s.nodes = nodes;
            s.iterations = total_iters;
            return s;
        }
        process(s, nd.fixes);
    }

    Solution out = incumbent;
    out.nodes = nodes;
    out.iterations = total_iters;
    out.dual.clear();           // duals are not meaningful for the integer program
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

} // namespace robopf
