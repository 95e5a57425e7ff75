#pragma once
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace robopf {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { le, ge, eq };

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

// Sparse linear expression over model columns plus a constant term.
struct LinExpr {
    std::vector<std::pair<int, double>> terms;
    double constant = 0.0;

    LinExpr& add(int col, double coef) {
        if (coef != 0.0) terms.emplace_back(col, coef);
        return *this;
    }
    LinExpr& operator+=(const LinExpr& o) {
        terms.insert(terms.end(), o.terms.begin(), o.terms.end());
        constant += o.constant;
        return *this;
    }
};

// Minimization model. Bounds live on the columns; rows are sparse.
struct OptModel {
    struct Var {
        std::string name;
        double lb = 0.0, ub = kInf;
        double obj = 0.0;
        bool is_binary = false;
    };
    struct Row {
        std::string name;
        std::vector<std::pair<int, double>> coeffs;
        RowSense sense = RowSense::le;
        double rhs = 0.0;
    };

    std::vector<Var> vars;
    std::vector<Row> rows;

    int add_var(const std::string& name, double lb, double ub, double obj, bool binary = false) {
        vars.push_back({name, lb, ub, obj, binary});
        return static_cast<int>(vars.size()) - 1;
    }
    int add_row(const std::string& name, const LinExpr& e, RowSense sense, double rhs) {
        // constant folds into the right-hand side
        Row r{name, {}, sense, rhs - e.constant};
        std::map<int, double> acc;
        for (auto [c, v] : e.terms) acc[c] += v;
        for (auto [c, v] : acc)
            if (v != 0.0) r.coeffs.emplace_back(c, v);
        rows.push_back(std::move(r));
        return static_cast<int>(rows.size()) - 1;
    }
    int n_binary() const {
        int n = 0;
        for (const auto& v : vars) n += v.is_binary;
        return n;
    }
};

struct Solution {
    SolveStatus status = SolveStatus::infeasible;
    double objective = 0.0;
    std::vector<double> primal;     // per column
    std::vector<double> dual;       // per model row (LP solves)
    std::vector<double> reduced_cost;
    long iterations = 0;            // simplex pivots, cumulative for MILP
    long nodes = 0;                 // branch-and-bound subproblems beyond the root
    double wall_seconds = 0.0;
};

struct SolverOptions {
    double feas_tol = 1e-7;
    double int_tol = 1e-6;
    double gap_abs = 1e-6;          // branch-and-bound absolute gap
    long max_iters = 2000000;
    bool parallel_pivot = true;     // OpenMP tableau update when compiled in
};

// Two-phase primal simplex with Dantzig pricing, switching to Bland's rule
// after 5*(rows+cols) pivots; Harris-style two-pass ratio test. The claimed
// point is audited against the model rows, a failed audit or non-optimal
// verdict triggers one safe-mode rerun (Bland pricing throughout, exact ratio
// test), and a point that still fails the audit comes back as
// iteration_limit rather than optimal. Returns row duals and reduced costs.
Solution solve_lp(const OptModel& m, const SolverOptions& opt = {});

// Best-first branch and bound on the binary columns; branches on the most
// fractional column, ties to the lowest index.
Solution solve_milp(const OptModel& m, const SolverOptions& opt = {});

// (rows, cols) of the model as written
std::pair<int, int> model_stats(const OptModel& m);

// LP-format text export, a debugging aid for cross-checking models.
std::string write_lp(const OptModel& m);

} // namespace robopf
