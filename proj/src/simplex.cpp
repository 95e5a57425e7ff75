#include "robopf/model.hpp"
#include "robopf/kernels.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

namespace robopf {

void eliminate_column_serial(double* tab, int n_rows, int w, int r, int q) {
    // rows are disjoint slices of tab, so prow never aliases row (i != r)
    const double* __restrict prow = tab + static_cast<size_t>(r) * w;
    for (int i = 0; i < n_rows; ++i) {
        if (i == r) continue;
        double* __restrict row = tab + static_cast<size_t>(i) * w;
        double f = row[q];
        if (f == 0.0) continue;
        for (int c = 0; c < w; ++c) row[c] -= f * prow[c];
        row[q] = 0.0;
    }
}

void eliminate_column_parallel(double* tab, int n_rows, int w, int r, int q) {
    const double* __restrict prow = tab + static_cast<size_t>(r) * w;
#ifdef ROBOPF_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n_rows; ++i) {
        if (i == r) continue;
        double* __restrict row = tab + static_cast<size_t>(i) * w;
        double f = row[q];
        if (f == 0.0) continue;
        for (int c = 0; c < w; ++c) row[c] -= f * prow[c];
        row[q] = 0.0;
    }
}

namespace {

constexpr double kPivTol = 1e-9;

// column classes inside the standard-form tableau
enum class ColKind { structural, upper_bound_slack, row_slack, artificial };

struct InternalCol {
    ColKind kind;
    int model_var = -1;     // structural: which model column
    double sign = 1.0;      // x_model contribution sign of this z column
    double shift = 0.0;     // x_model = sign * z + shift (applied once per var)
    int row = -1;           // slack/artificial: owning internal row
};

struct InternalRow {
    int model_row = -1;     // -1 for bound rows
    double neg = 1.0;       // -1 when the row was negated for rhs >= 0
};

struct Tableau {
    int m = 0;              // constraint rows
    int n = 0;              // columns
    int w = 0;              // row width = n + 1, last entry is rhs
    std::vector<double> t;  // (m + 2) rows: constraints, phase-1 costs, phase-2 costs
    std::vector<int> basis; // basic column per constraint row
    std::vector<char> blocked;

    double* row(int i) { return t.data() + static_cast<size_t>(i) * w; }
    double& at(int i, int c) { return t[static_cast<size_t>(i) * w + c]; }
    double rhs(int i) const { return t[static_cast<size_t>(i) * w + (w - 1)]; }
};

// worst signed violation of the returned point over model rows and bounds
double primal_violation(const OptModel& m, const Solution& s) {
    double worst = 0.0;
    for (size_t j = 0; j < m.vars.size(); ++j) {
        const auto& v = m.vars[j];
        double lb = v.is_binary ? std::max(v.lb, 0.0) : v.lb;
        double ub = v.is_binary ? std::min(v.ub, 1.0) : v.ub;
        worst = std::max(worst, lb - s.primal[j]);
        worst = std::max(worst, s.primal[j] - ub);
    }
    for (const auto& row : m.rows) {
        double lhs = 0.0;
        for (auto [j, coef] : row.coeffs) lhs += coef * s.primal[j];
        if (row.sense != RowSense::ge) worst = std::max(worst, lhs - row.rhs);
        if (row.sense != RowSense::le) worst = std::max(worst, row.rhs - lhs);
    }
    return worst;
}

Solution solve_lp_once(const OptModel& m, const SolverOptions& opt, bool safe_mode) {
    auto t0 = std::chrono::steady_clock::now();
    Solution sol;
    const int n_model = static_cast<int>(m.vars.size());

    // per-model-var decomposition into nonnegative internal columns
    std::vector<InternalCol> cols;
    std::vector<int> primary_col(n_model, -1), mirror_col(n_model, -1);
    std::vector<int> pinned_cols;
    struct UbRow { int var_col; double rhs; };
    std::vector<UbRow> ub_rows;
    for (int j = 0; j < n_model; ++j) {
        const auto& v = m.vars[j];
        double lb = v.lb, ub = v.ub;
        if (v.is_binary) {
            lb = std::max(lb, 0.0);
            ub = std::min(ub, 1.0);
        }
        if (lb > ub + 1e-12) { sol.status = SolveStatus::infeasible; return sol; }
        if (lb != -kInf && ub - lb <= 1e-12) {
            // fixed column (every branch-and-bound node pins binaries this
            // way): substitute the value, never let the column move
            primary_col[j] = static_cast<int>(cols.size());
            cols.push_back({ColKind::structural, j, 1.0, lb, -1});
            pinned_cols.push_back(primary_col[j]);
        } else if (lb == -kInf && ub == kInf) {
            primary_col[j] = static_cast<int>(cols.size());
            cols.push_back({ColKind::structural, j, 1.0, 0.0, -1});
            mirror_col[j] = static_cast<int>(cols.size());
            cols.push_back({ColKind::structural, j, -1.0, 0.0, -1});
        } else if (lb != -kInf) {
            primary_col[j] = static_cast<int>(cols.size());
            cols.push_back({ColKind::structural, j, 1.0, lb, -1});
            if (ub != kInf) ub_rows.push_back({primary_col[j], ub - lb});
        } else {
            // lb = -inf, finite ub: mirror the column, x = ub - z
            primary_col[j] = static_cast<int>(cols.size());
            cols.push_back({ColKind::structural, j, -1.0, ub, -1});
        }
    }

    const int m_model = static_cast<int>(m.rows.size());
    const int m_total = m_model + static_cast<int>(ub_rows.size());
    std::vector<InternalRow> irows(m_total);

    // dense row assembly in internal-column space
    std::vector<std::vector<double>> a(m_total, std::vector<double>(cols.size(), 0.0));
    std::vector<double> b(m_total, 0.0);
    std::vector<RowSense> sense(m_total, RowSense::le);
    for (int i = 0; i < m_model; ++i) {
        irows[i].model_row = i;
        sense[i] = m.rows[i].sense;
        double shift_acc = 0.0;
        for (auto [j, coef] : m.rows[i].coeffs) {
            int pc = primary_col[j];
            a[i][pc] += coef * cols[pc].sign;
            shift_acc += coef * cols[pc].shift;
            if (mirror_col[j] >= 0) a[i][mirror_col[j]] += coef * cols[mirror_col[j]].sign;
        }
        b[i] = m.rows[i].rhs - shift_acc;
    }
    for (size_t u = 0; u < ub_rows.size(); ++u) {
        int i = m_model + static_cast<int>(u);
        a[i][ub_rows[u].var_col] = 1.0;
        b[i] = ub_rows[u].rhs;
        sense[i] = RowSense::le;
    }

    // slacks, rhs-sign normalization, artificials: every row is scaled so its
    // rhs is nonnegative; at rhs 0 the scale is free and gets picked so the
    // slack ends up with coefficient +1 and can start the basis. Only rows
    // whose slack cannot start (or equalities) pay for an artificial.
    int n_cols = static_cast<int>(cols.size());
    std::vector<int> slack_col(m_total, -1), art_col(m_total, -1);
    std::vector<double> flip(m_total, 1.0);
    for (int i = 0; i < m_total; ++i) {
        if (sense[i] != RowSense::eq) {
            slack_col[i] = n_cols++;
            cols.push_back({ColKind::row_slack, -1, sense[i] == RowSense::le ? 1.0 : -1.0, 0.0, i});
        }
        if (b[i] < 0.0 || (b[i] == 0.0 && sense[i] == RowSense::ge)) flip[i] = -1.0;
        bool startable = slack_col[i] >= 0 && flip[i] * cols[slack_col[i]].sign > 0.0;
        if (!startable) {
            art_col[i] = n_cols++;
            cols.push_back({ColKind::artificial, -1, 1.0, 0.0, i});
        }
    }

    Tableau tb;
    tb.m = m_total;
    tb.n = n_cols;
    tb.w = n_cols + 1;
    tb.t.assign(static_cast<size_t>(m_total + 2) * tb.w, 0.0);
    tb.basis.resize(m_total);
    tb.blocked.assign(n_cols, 0);

    for (int i = 0; i < m_total; ++i) {
        irows[i].neg = flip[i];
        double* row = tb.row(i);
        for (int c = 0; c < static_cast<int>(a[i].size()); ++c) row[c] = flip[i] * a[i][c];
        if (slack_col[i] >= 0) row[slack_col[i]] = flip[i] * cols[slack_col[i]].sign;
        if (art_col[i] >= 0) row[art_col[i]] = 1.0;
        row[tb.w - 1] = flip[i] * b[i];
        tb.basis[i] = art_col[i] >= 0 ? art_col[i] : slack_col[i];
    }
    a.clear();
    a.shrink_to_fit();

    // artificials and fixed columns may never enter the basis
    for (int i = 0; i < m_total; ++i)
        if (art_col[i] >= 0) tb.blocked[art_col[i]] = 1;
    for (int pc : pinned_cols) tb.blocked[pc] = 1;

    const int p1 = m_total;      // phase-1 cost row index
    const int p2 = m_total + 1;  // phase-2 cost row index
    // phase-2 costs over structural columns
    {
        double* r2 = tb.row(p2);
        for (int c = 0; c < n_cols; ++c)
            if (cols[c].kind == ColKind::structural) r2[c] = m.vars[cols[c].model_var].obj * cols[c].sign;
        // phase-1 cost = sum of artificials; express reduced costs against the
        // starting basis by subtracting each artificial-basic row (slack-basic
        // rows contribute nothing: their slack is the only unit entry)
        double* r1 = tb.row(p1);
        for (int i = 0; i < m_total; ++i) {
            if (art_col[i] < 0) continue;
            const double* row = tb.row(i);
            for (int c = 0; c < tb.w; ++c) r1[c] -= row[c];
        }
        for (int i = 0; i < m_total; ++i)
            if (art_col[i] >= 0) r1[art_col[i]] = 0.0;
    }

    long iters = 0;
    const long bland_after = 5L * (m_total + n_cols);
    auto price = [&](int cost_row) -> int {
        const double* d = tb.row(cost_row);
        int q = -1;
        if (!safe_mode && iters < bland_after) {
            double best = -kPivTol;
            for (int c = 0; c < n_cols; ++c)
                if (!tb.blocked[c] && d[c] < best) { best = d[c]; q = c; }
        } else {
            for (int c = 0; c < n_cols; ++c)
                if (!tb.blocked[c] && d[c] < -kPivTol) { q = c; break; }
        }
        return q;
    };
    auto ratio_exact = [&](int q) -> int {
        // textbook minimum ratio with smallest-basis-index ties; paired with
        // Bland pricing this is the finite-termination path
        int r = -1;
        double best = kInf;
        for (int i = 0; i < tb.m; ++i) {
            double aq = tb.at(i, q);
            if (aq <= kPivTol) continue;
            double ratio = std::max(tb.rhs(i), 0.0) / aq;
            if (ratio < best - 1e-12 ||
                (ratio < best + 1e-12 && (r == -1 || tb.basis[i] < tb.basis[r]))) {
                best = ratio;
                r = i;
            }
        }
        return r;
    };
    auto ratio_harris = [&](int q) -> int {
        // two-pass Harris: bound the step by the smallest slightly relaxed
        // ratio, then take the largest pivot whose exact ratio fits the
        // bound. Feasibility drifts by at most the relaxation per pivot while
        // near-singular pivots are only ever taken when nothing stronger
        // fits, which keeps elimination roundoff from poisoning the tableau.
        double bound = kInf;
        for (int i = 0; i < tb.m; ++i) {
            double aq = tb.at(i, q);
            if (aq <= kPivTol) continue;
            double rhs = std::max(tb.rhs(i), 0.0);
            bound = std::min(bound, (rhs + 1e-9 + 1e-9 * rhs) / aq);
        }
        if (bound == kInf) return -1;
        int r = -1;
        double best_piv = 0.0;
        for (int i = 0; i < tb.m; ++i) {
            double aq = tb.at(i, q);
            if (aq <= kPivTol || std::max(tb.rhs(i), 0.0) > bound * aq) continue;
            if (r == -1 || aq > best_piv) { best_piv = aq; r = i; }
        }
        return r;
    };
    auto ratio_row = [&](int q) -> int {
        return safe_mode ? ratio_exact(q) : ratio_harris(q);
    };
    auto pivot = [&](int r, int q) {
        double piv = tb.at(r, q);
        double* prow = tb.row(r);
        double inv = 1.0 / piv;
        for (int c = 0; c < tb.w; ++c) prow[c] *= inv;
        prow[q] = 1.0;
        int total_rows = tb.m + 2;
        if (opt.parallel_pivot && static_cast<long>(total_rows) * tb.w > 200000)
            eliminate_column_parallel(tb.t.data(), total_rows, tb.w, r, q);
        else
            eliminate_column_serial(tb.t.data(), total_rows, tb.w, r, q);
        tb.basis[r] = q;
        ++iters;
    };

    // phase 1: drive artificial infeasibility to zero
    for (;;) {
        if (iters > opt.max_iters) { sol.status = SolveStatus::iteration_limit; return sol; }
        int q = price(p1);
        if (q < 0) break;
        int r = ratio_row(q);
        if (r < 0) break;   // phase-1 objective is bounded; treat as converged
        pivot(r, q);
    }
    double infeas = -tb.rhs(p1);    // cost rows carry -value in the rhs cell
    if (infeas > opt.feas_tol) {
        sol.status = SolveStatus::infeasible;
        sol.iterations = iters;
        return sol;
    }

    // drive leftover artificials out of the basis; rows that admit no pivot
    // are linearly dependent and get neutralized
    for (int i = 0; i < tb.m; ++i) {
        if (cols[tb.basis[i]].kind != ColKind::artificial) continue;
        int q = -1;
        for (int c = 0; c < n_cols; ++c)
            if (!tb.blocked[c] && std::abs(tb.at(i, c)) > 1e-7) { q = c; break; }
        if (q >= 0) pivot(i, q);
        else {
            double* row = tb.row(i);
            int keep = tb.basis[i];
            for (int c = 0; c < tb.w; ++c) row[c] = 0.0;
            row[keep] = 1.0;
        }
    }

    // phase 2 on the true costs
    for (;;) {
        if (iters > opt.max_iters) { sol.status = SolveStatus::iteration_limit; return sol; }
        int q = price(p2);
        if (q < 0) break;
        int r = ratio_row(q);
        if (r < 0) {
            sol.status = SolveStatus::unbounded;
            sol.iterations = iters;
            return sol;
        }
        pivot(r, q);
    }

    // primal recovery
    std::vector<double> z(n_cols, 0.0);
    for (int i = 0; i < tb.m; ++i) z[tb.basis[i]] = tb.rhs(i);
    sol.primal.assign(n_model, 0.0);
    for (int j = 0; j < n_model; ++j) {
        int pc = primary_col[j];
        sol.primal[j] = cols[pc].sign * z[pc] + cols[pc].shift;
        if (mirror_col[j] >= 0) sol.primal[j] += cols[mirror_col[j]].sign * z[mirror_col[j]];
    }
    sol.objective = 0.0;
    for (int j = 0; j < n_model; ++j) sol.objective += m.vars[j].obj * sol.primal[j];

    // duals: row i's unit column (its artificial, or the slack when the slack
    // started the basis) carries reduced cost -pi_i in the phase-2 row
    sol.dual.assign(m_model, 0.0);
    {
        const double* d2 = tb.row(p2);
        for (int i = 0; i < m_total; ++i) {
            if (irows[i].model_row < 0) continue;
            int unit = art_col[i] >= 0 ? art_col[i] : slack_col[i];
            sol.dual[irows[i].model_row] = -d2[unit] * irows[i].neg;
        }
    }
    // reduced costs recomputed from model data against the row duals
    sol.reduced_cost.assign(n_model, 0.0);
    for (int j = 0; j < n_model; ++j) sol.reduced_cost[j] = m.vars[j].obj;
    for (int i = 0; i < m_model; ++i)
        for (auto [j, coef] : m.rows[i].coeffs)
            sol.reduced_cost[j] -= sol.dual[i] * coef;

    sol.status = SolveStatus::optimal;
    sol.iterations = iters;
    sol.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

} // namespace

// a single pass can be misled when roundoff from a borderline pivot poisons
// the tableau, so the claimed point is audited against the original rows; on
// a failed audit or a non-optimal verdict the solve reruns in safe mode
// (Bland pricing from the first pivot). A rerun that still fails the audit is
// reported as iteration_limit rather than certified.
Solution solve_lp(const OptModel& m, const SolverOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Solution s = solve_lp_once(m, opt, false);
    bool ok = s.status == SolveStatus::optimal && primal_violation(m, s) <= 10.0 * opt.feas_tol;
    if (!ok && s.status != SolveStatus::iteration_limit) {
        long first_iters = s.iterations;
        Solution retry = solve_lp_once(m, opt, true);
        if (retry.status == SolveStatus::optimal && primal_violation(m, retry) > 10.0 * opt.feas_tol)
            retry.status = SolveStatus::iteration_limit;
        retry.iterations += first_iters;
        s = retry;
    }
    s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
}

} // namespace robopf
