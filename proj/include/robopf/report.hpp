#pragma once
#include "robopf/formulations.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace robopf {

// One solve (or oracle sweep) as reported by the CLI.
struct RunRecord {
    std::string model;
    double kappa = 0.0, tau = 0.0, alpha = 0.0;
    int samples = 0;
    uint64_t seed = 0;
    int k_paths = 0;
    std::string weight;
    std::string status;
    double objective = 0.0;
    int cons = 0, vars = 0;
    long nodes = 0;
    double time_s = 0.0;
    bool with_timing = true;        // false blanks the time column for reproducible output
    std::vector<int> plan;          // built candidate branch ids
};

// Fixed column order:
// model,kappa,tau,alpha,samples,seed,k,weight,objective,cons,vars,nodes,time_s,status,plan
std::string csv_header();
std::string csv_row(const RunRecord& r);
void write_csv(const std::string& path, const std::vector<RunRecord>& records);

// aligned text table, rows in the given order
std::string format_run_table(const std::vector<RunRecord>& records);

// "2+5" for built ids, "-" for the empty plan
std::string plan_string(const std::vector<int>& plan);

// Text round-trip for affine dispatch policies.
void write_policy_file(const std::string& path, const AffinePolicy& pol);
AffinePolicy read_policy_file(const std::string& path);

} // namespace robopf
