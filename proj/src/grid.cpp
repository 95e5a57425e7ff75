#include "robopf/grid.hpp"
#include "robopf/splitmix64.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

namespace robopf {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

std::string strip_comment(const std::string& s) {
    auto pos = s.find('#');
    return pos == std::string::npos ? s : s.substr(0, pos);
}

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

double to_real(const std::string& t, int line) {
    try {
        size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size()) fail(line, "bad number '" + t + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        fail(line, "bad number '" + t + "'");
    }
}

int to_int(const std::string& t, int line) {
    try {
        size_t used = 0;
        long v = std::stol(t, &used);
        if (used != t.size()) fail(line, "bad integer '" + t + "'");
        return static_cast<int>(v);
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        fail(line, "bad integer '" + t + "'");
    }
}

// every load bus must reach a generator bus through in-service branches
void check_reachability(const Network& net, int line) {
    std::set<int> gen_buses;
    for (const auto& g : net.gens) gen_buses.insert(g.bus);
    std::map<int, std::vector<int>> adj;
    for (const auto& b : net.branches) {
        adj[b.from].push_back(b.to);
        adj[b.to].push_back(b.from);
    }
    std::set<int> reach;
    std::queue<int> q;
    for (int g : gen_buses) { reach.insert(g); q.push(g); }
    while (!q.empty()) {
        int u = q.front(); q.pop();
        for (int v : adj[u])
            if (reach.insert(v).second) q.push(v);
    }
    for (const auto& b : net.buses)
        if (b.demand > 0.0 && !reach.count(b.id))
            fail(line, "disconnected load at bus " + std::to_string(b.id));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

const Bus* Network::find_bus(int id) const {
    for (const auto& b : buses)
        if (b.id == id) return &b;
    return nullptr;
}

std::vector<int> Network::load_buses() const {
    std::vector<int> out;
    for (const auto& b : buses)
        if (b.demand > 0.0) out.push_back(b.id);
    return out;
}

std::vector<int> Network::candidate_ids() const {
    std::vector<int> out;
    for (const auto& b : branches)
        if (b.candidate) out.push_back(b.id);
    return out;
}

Network parse_case(const std::string& text) {
    Network net;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto toks = tokens(strip_comment(raw));
        if (toks.empty()) continue;
        if (toks[0].front() == '[') {
            if (toks.size() != 1 || toks[0].back() != ']') fail(line, "malformed section header");
            section = toks[0].substr(1, toks[0].size() - 2);
            if (section != "bus" && section != "gen" && section != "branch")
                fail(line, "unknown section [" + section + "]");
            continue;
        }
        if (section == "bus") {
            // id type Pd Qd Gs Bs area Vm Va baseKV zone Vmax Vmin
            if (toks.size() < 13) fail(line, "bus row needs 13 columns");
            Bus b;
            b.id = to_int(toks[0], line);
            int type = to_int(toks[1], line);
            if (type == 3) b.kind = BusKind::slack;
            else if (type == 2) b.kind = BusKind::generator_capable;
            else if (type == 1) b.kind = BusKind::load;
            else fail(line, "bus type must be 1, 2 or 3");
            b.demand = to_real(toks[2], line);
            if (b.demand < 0) fail(line, "negative demand at bus " + std::to_string(b.id));
            b.base_kv = to_real(toks[9], line);
            if (b.base_kv <= 0) fail(line, "baseKV must be positive at bus " + std::to_string(b.id));
            for (const auto& prev : net.buses)
                if (prev.id == b.id) fail(line, "duplicate bus id " + std::to_string(b.id));
            net.buses.push_back(b);
        } else if (section == "gen") {
            // bus Qmax Qmin Vg Pmax Pmin ... (extra columns ignored)
            if (toks.size() < 6) fail(line, "gen row needs at least 6 columns");
            Generator g;
            g.bus = to_int(toks[0], line);
            g.p_max = to_real(toks[4], line);
            if (g.p_max <= 0) fail(line, "Pmax must be positive at bus " + std::to_string(g.bus));
            net.gens.push_back(g);
        } else if (section == "branch") {
            // fbus tbus r x rateA rateB rateC ratio angle
            if (toks.size() < 9) fail(line, "branch row needs 9 columns");
            Branch b;
            b.from = to_int(toks[0], line);
            b.to = to_int(toks[1], line);
            b.resistance = to_real(toks[2], line);
            b.reactance = to_real(toks[3], line);
            b.rate_a = to_real(toks[4], line);
            if (b.resistance <= 0) fail(line, "branch resistance must be positive");
            net.branches.push_back(b);
        } else {
            fail(line, "data row outside any section");
        }
    }
    if (net.buses.empty()) fail(line, "no [bus] rows");
    if (net.gens.empty()) fail(line, "no [gen] rows");
    std::sort(net.buses.begin(), net.buses.end(), [](const Bus& a, const Bus& b) { return a.id < b.id; });
    std::sort(net.gens.begin(), net.gens.end(), [](const Generator& a, const Generator& b) { return a.bus < b.bus; });
    for (size_t i = 0; i + 1 < net.gens.size(); ++i)
        if (net.gens[i].bus == net.gens[i + 1].bus) fail(line, "duplicate generator bus " + std::to_string(net.gens[i].bus));
    int next_id = 1;
    for (auto& b : net.branches) {
        if (!net.find_bus(b.from) || !net.find_bus(b.to))
            fail(line, "branch endpoint references unknown bus");
        if (b.from == b.to) fail(line, "branch endpoints coincide");
        b.id = next_id++;
        // default current cap: rateA over the from-bus voltage base
        b.y_cap = b.rate_a / net.find_bus(b.from)->base_kv;
    }
    for (const auto& g : net.gens)
        if (!net.find_bus(g.bus)) fail(line, "generator references unknown bus " + std::to_string(g.bus));
    check_reachability(net, line);
    return net;
}

Network parse_case_file(const std::string& path) {
    return parse_case(read_file(path));
}

std::string serialize_case(const Network& net) {
    std::ostringstream out;
    char buf[512];
    out << "[bus]\n";
    for (const auto& b : net.buses) {
        int type = b.kind == BusKind::slack ? 3 : b.kind == BusKind::generator_capable ? 2 : 1;
        std::snprintf(buf, sizeof buf, "%d %d %.17g 0 0 0 1 1 0 %.17g 1 1.1 0.9\n", b.id, type, b.demand, b.base_kv);
        out << buf;
    }
    out << "[gen]\n";
    for (const auto& g : net.gens) {
        std::snprintf(buf, sizeof buf, "%d 0 0 1 %.17g 0\n", g.bus, g.p_max);
        out << buf;
    }
    out << "[branch]\n";
    for (const auto& b : net.branches) {
        if (b.candidate) continue;
        std::snprintf(buf, sizeof buf, "%d %d %.17g %.17g %.17g 0 0 0 0\n", b.from, b.to, b.resistance, b.reactance, b.rate_a);
        out << buf;
    }
    return out.str();
}

std::vector<std::vector<double>> draw_var_samples(const std::vector<double>& dbar,
                                                  const std::vector<double>& dhat,
                                                  int n, uint64_t seed) {
    if (dbar.size() != dhat.size()) throw std::invalid_argument("dbar/dhat size mismatch");
    if (n <= 0) throw std::invalid_argument("sample count must be positive");
    SplitMix64 rng(seed);
    std::vector<std::vector<double>> out(n, std::vector<double>(dbar.size()));
    for (int i = 0; i < n; ++i)
        for (size_t k = 0; k < dbar.size(); ++k)
            out[i][k] = dbar[k] - dhat[k] + rng.next_unit() * 2.0 * dhat[k];
    return out;
}

std::vector<double> nominal_demand(const Network& net) {
    std::vector<double> d;
    for (int k : net.load_buses()) d.push_back(net.find_bus(k)->demand);
    return d;
}

std::vector<double> deviation_vector(const Network& net, const UncertaintyBudget& budget) {
    std::vector<double> dh;
    for (int k : net.load_buses()) {
        auto it = budget.dhat.find(k);
        dh.push_back(it == budget.dhat.end() ? 0.0 : it->second);
    }
    return dh;
}

std::pair<Network, UncertaintySpec> parse_uncertainty(const Network& base, const std::string& text) {
    Network net = base;
    UncertaintySpec spec;
    double dispersion_fraction = 0.1;
    std::map<int, double> dispersion_abs;        // per-bus override
    std::map<int, double> thermal_override;      // branch id -> y^2 R value
    bool saw_budget = false, saw_var = false;
    double kappa = 0.0, tau = 1.0, alpha = 0.0;
    int n_samples = 10;
    uint64_t seed = 0;

    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto toks = tokens(strip_comment(raw));
        if (toks.empty()) continue;
        if (toks[0].front() == '[') {
            if (toks.size() != 1 || toks[0].back() != ']') fail(line, "malformed section header");
            section = toks[0].substr(1, toks[0].size() - 2);
            if (section != "costs" && section != "candidates" && section != "budget" &&
                section != "var" && section != "thermal")
                fail(line, "unknown section [" + section + "]");
            if (section == "budget") saw_budget = true;
            if (section == "var") saw_var = true;
            continue;
        }
        if (section == "costs") {
            // gen <bus> = <cost>
            if (toks.size() != 4 || toks[0] != "gen" || toks[2] != "=") fail(line, "expected 'gen <bus> = <cost>'");
            int bus = to_int(toks[1], line);
            double c = to_real(toks[3], line);
            if (c < 0) fail(line, "negative generation cost");
            bool found = false;
            for (auto& g : net.gens)
                if (g.bus == bus) { g.cost = c; found = true; }
            if (!found) fail(line, "cost for unknown generator bus " + std::to_string(bus));
        } else if (section == "candidates") {
            // fbus tbus r x rateA cost
            if (toks.size() != 6) fail(line, "candidate row needs 6 columns");
            Branch b;
            b.from = to_int(toks[0], line);
            b.to = to_int(toks[1], line);
            b.resistance = to_real(toks[2], line);
            b.reactance = to_real(toks[3], line);
            b.rate_a = to_real(toks[4], line);
            b.build_cost = to_real(toks[5], line);
            b.candidate = true;
            if (!net.find_bus(b.from) || !net.find_bus(b.to))
                fail(line, "candidate endpoint references unknown bus");
            if (b.resistance <= 0) fail(line, "candidate resistance must be positive");
            if (b.build_cost < 0) fail(line, "negative candidate build cost");
            b.id = static_cast<int>(net.branches.size()) + 1;
            b.y_cap = b.rate_a / net.find_bus(b.from)->base_kv;
            net.branches.push_back(b);
        } else if (section == "budget") {
            if (toks.size() == 3 && toks[1] == "=") {
                if (toks[0] == "kappa") kappa = to_real(toks[2], line);
                else if (toks[0] == "tau") tau = to_real(toks[2], line);
                else if (toks[0] == "dispersion_fraction") dispersion_fraction = to_real(toks[2], line);
                else fail(line, "unknown budget key '" + toks[0] + "'");
            } else if (toks.size() == 4 && toks[0] == "dispersion" && toks[2] == "=") {
                dispersion_abs[to_int(toks[1], line)] = to_real(toks[3], line);
            } else {
                fail(line, "malformed budget row");
            }
        } else if (section == "var") {
            if (toks.size() != 3 || toks[1] != "=") fail(line, "expected '<key> = <value>'");
            if (toks[0] == "alpha") alpha = to_real(toks[2], line);
            else if (toks[0] == "samples") n_samples = to_int(toks[2], line);
            else if (toks[0] == "seed") seed = static_cast<uint64_t>(std::stoull(toks[2]));
            else fail(line, "unknown var key '" + toks[0] + "'");
        } else if (section == "thermal") {
            // thermal_rhs <branch> = <value>, value is the y^2 R power cap
            if (toks.size() != 4 || toks[0] != "thermal_rhs" || toks[2] != "=") fail(line, "expected 'thermal_rhs <branch> = <value>'");
            int id = to_int(toks[1], line);
            double v = to_real(toks[3], line);
            if (v <= 0) fail(line, "thermal_rhs must be positive");
            thermal_override[id] = v;
        } else {
            fail(line, "data row outside any section");
        }
    }

    for (const auto& g : net.gens)
        if (g.cost <= 0.0)
            fail(line, "missing generation cost for bus " + std::to_string(g.bus));
    for (auto [id, v] : thermal_override) {
        bool found = false;
        for (auto& b : net.branches)
            if (b.id == id) { b.y_cap = std::sqrt(v / b.resistance); found = true; }
        if (!found) fail(line, "thermal_rhs for unknown branch " + std::to_string(id));
    }

    if (kappa < 0) fail(line, "kappa must be nonnegative");
    if (tau < 0) fail(line, "tau must be nonnegative");
    if (alpha < 0 || alpha >= 1) fail(line, "alpha must lie in [0, 1)");

    auto loads = net.load_buses();
    if (saw_budget || saw_var) {
        UncertaintyBudget b;
        double clamp = tau * static_cast<double>(loads.size());
        if (kappa > clamp) {
            std::fprintf(stderr, "warning: kappa %.6g exceeds tau*|K| = %.6g, clamping\n", kappa, clamp);
            kappa = clamp;
        }
        b.kappa = kappa;
        b.tau = tau;
        for (int k : loads) {
            auto it = dispersion_abs.find(k);
            double dh = it != dispersion_abs.end() ? it->second : dispersion_fraction * net.find_bus(k)->demand;
            if (dh < 0) fail(line, "negative dispersion at bus " + std::to_string(k));
            b.dhat[k] = dh;
        }
        spec.budget = b;
        spec.has_budget = saw_budget;
        if (saw_var) {
            UncertaintyVaR v;
            v.alpha = alpha;
            v.n_samples = n_samples;
            v.seed = seed;
            v.samples = draw_var_samples(nominal_demand(net), deviation_vector(net, b), n_samples, seed);
            spec.var = v;
            spec.has_var = true;
        }
    }
    return {net, spec};
}

std::pair<Network, UncertaintySpec> parse_uncertainty_file(const Network& base, const std::string& path) {
    return parse_uncertainty(base, read_file(path));
}

} // namespace robopf
