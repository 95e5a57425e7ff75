#include "robopf/report.hpp"

#include "robopf/grid.hpp"

#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace robopf {
namespace {

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

} // namespace

std::string plan_string(const std::vector<int>& plan) {
    if (plan.empty()) return "-";
    std::string s;
    for (size_t i = 0; i < plan.size(); ++i) {
        if (i) s += '+';
        s += std::to_string(plan[i]);
    }
    return s;
}

std::string csv_header() {
    return "model,kappa,tau,alpha,samples,seed,k,weight,objective,cons,vars,nodes,time_s,status,plan";
}

std::string csv_row(const RunRecord& r) {
    std::string row;
    row += r.model;
    row += fmt(",%g,%g,%g,%d,", r.kappa, r.tau, r.alpha, r.samples);
    row += fmt("%llu,%d,", static_cast<unsigned long long>(r.seed), r.k_paths);
    row += r.weight;
    row += fmt(",%.12g,%d,%d,%ld,", r.objective, r.cons, r.vars, r.nodes);
    if (r.with_timing) row += fmt("%.3f", r.time_s);
    row += ',';
    row += r.status;
    row += ',';
    row += plan_string(r.plan);
    return row;
}

void write_csv(const std::string& path, const std::vector<RunRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << csv_header() << '\n';
    for (const auto& r : records) out << csv_row(r) << '\n';
}

std::string format_run_table(const std::vector<RunRecord>& records) {
    std::string t = fmt("%-9s %7s %5s %6s %14s %-9s %6s %6s %6s %9s %s\n", "model", "kappa",
                        "tau", "alpha", "objective", "plan", "rows", "cols", "nodes", "time",
                        "status");
    for (const auto& r : records) {
        t += fmt("%-9s %7g %5g %6g %14.6f %-9s %6d %6d %6ld ", r.model.c_str(), r.kappa, r.tau,
                 r.alpha, r.objective, plan_string(r.plan).c_str(), r.cons, r.vars, r.nodes);
        t += r.with_timing ? fmt("%8.3fs ", r.time_s) : fmt("%9s ", "-");
        t += r.status;
        t += '\n';
    }
    return t;
}

namespace {

void write_vector(std::ofstream& out, const std::string& tag, const std::vector<double>& v) {
    out << tag;
    for (double x : v) out << ' ' << fmt("%.17g", x);
    out << '\n';
}

} // namespace

void write_policy_file(const std::string& path, const AffinePolicy& pol) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "space " << (pol.space == AffinePolicy::Space::xi ? "xi" : "demand") << '\n';
    out << "loads";
    for (int b : pol.load_buses) out << ' ' << b;
    out << '\n';
    out << "gens";
    for (int b : pol.gen_buses) out << ' ' << b;
    out << '\n';
    out << "plan";
    for (int b : pol.plan.build) out << ' ' << b;
    out << '\n';
    out << "objective " << fmt("%.17g", pol.objective) << '\n';
    write_vector(out, "p0", pol.p0);
    for (size_t i = 0; i < pol.P.size(); ++i) write_vector(out, "P" + std::to_string(i), pol.P[i]);
    write_vector(out, "s0", pol.s0);
    for (size_t i = 0; i < pol.S.size(); ++i) write_vector(out, "S" + std::to_string(i), pol.S[i]);
}

AffinePolicy read_policy_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    AffinePolicy pol;
    std::string line;
    int lineno = 0;
    auto bad = [&](const std::string& msg) {
        throw ParseError("policy line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto tok = split_ws(line);
        if (tok.empty() || tok[0][0] == '#') continue;
        const std::string& key = tok[0];
        auto doubles = [&](size_t from) {
            std::vector<double> v;
            for (size_t i = from; i < tok.size(); ++i) v.push_back(std::stod(tok[i]));
            return v;
        };
        auto ints = [&](size_t from) {
            std::vector<int> v;
            for (size_t i = from; i < tok.size(); ++i) v.push_back(std::stoi(tok[i]));
            return v;
        };
        if (key == "space") {
            if (tok.size() != 2 || (tok[1] != "xi" && tok[1] != "demand")) bad("space must be xi or demand");
            pol.space = tok[1] == "xi" ? AffinePolicy::Space::xi : AffinePolicy::Space::demand;
        } else if (key == "loads") {
            pol.load_buses = ints(1);
        } else if (key == "gens") {
            pol.gen_buses = ints(1);
        } else if (key == "plan") {
            pol.plan.build = ints(1);
        } else if (key == "objective") {
            if (tok.size() != 2) bad("objective takes one value");
            pol.objective = std::stod(tok[1]);
        } else if (key == "p0") {
            pol.p0 = doubles(1);
        } else if (key == "s0") {
            pol.s0 = doubles(1);
        } else if (key[0] == 'P') {
            if (static_cast<size_t>(std::stoi(key.substr(1))) != pol.P.size()) bad("P rows out of order");
            pol.P.push_back(doubles(1));
        } else if (key[0] == 'S') {
            if (static_cast<size_t>(std::stoi(key.substr(1))) != pol.S.size()) bad("S rows out of order");
            pol.S.push_back(doubles(1));
        } else {
            bad("unknown key " + key);
        }
    }
    if (pol.load_buses.empty() || pol.p0.size() != pol.P.size() || pol.s0.size() != pol.S.size())
        throw ParseError("policy file incomplete");
    for (const auto& row : pol.P)
        if (row.size() != pol.load_buses.size()) throw ParseError("policy P row width mismatch");
    for (const auto& row : pol.S)
        if (row.size() != pol.load_buses.size()) throw ParseError("policy S row width mismatch");
    return pol;
}

} // namespace robopf
