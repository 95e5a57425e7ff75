#pragma once
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace robopf {

// Error carrying file/line context from the text parsers.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class BusKind { load, generator_capable, slack };

struct Bus {
    int id = 0;                 // 1-based external id
    BusKind kind = BusKind::load;
    double demand = 0.0;        // nominal MW draw, >= 0
    double base_kv = 0.0;       // > 0
};

struct Generator {
    int bus = 0;
    double p_max = 0.0;         // parsed, not enforced as a row
    double cost = 0.0;          // $/MW, from the sidecar [costs] section
};

struct Branch {
    int id = 0;                 // 1-based position in the merged branch list
    int from = 0, to = 0;
    double resistance = 0.0;    // > 0
    double reactance = 0.0;
    double rate_a = 0.0;
    double y_cap = 0.0;         // current cap; thermal rhs for power rows is y_cap^2 * resistance
    bool candidate = false;     // candidate branches carry a build cost and a binary in the models
    double build_cost = 0.0;
};

struct Network {
    std::vector<Bus> buses;         // ascending id
    std::vector<Generator> gens;    // ascending bus id
    std::vector<Branch> branches;   // existing first, candidates appended

    const Bus* find_bus(int id) const;
    // load set K: buses with positive nominal demand, ascending id
    std::vector<int> load_buses() const;
    std::vector<int> candidate_ids() const;
    double thermal_rhs(const Branch& b) const { return b.y_cap * b.y_cap * b.resistance; }
};

// Budget set: xi in [-tau, tau]^K with ||xi||_1 <= kappa; d_k = dbar_k + xi_k * dhat_k.
struct UncertaintyBudget {
    double kappa = 0.0;
    double tau = 1.0;
    std::map<int, double> dhat;     // bus id -> deviation magnitude, >= 0
};

// Value-at-risk set: convex combinations of N sampled demand vectors with
// per-sample weight capped at 1/(N(1-alpha)).
struct UncertaintyVaR {
    double alpha = 0.0;             // in [0, 1)
    int n_samples = 0;
    uint64_t seed = 0;
    // samples[i][k]: demand of the k-th load bus (ascending id) in sample i
    std::vector<std::vector<double>> samples;
};

struct UncertaintySpec {
    bool has_budget = false;
    bool has_var = false;
    UncertaintyBudget budget;
    UncertaintyVaR var;
};

// Parse the sectioned case format ([bus]/[gen]/[branch], '#' comments).
Network parse_case(const std::string& text);
Network parse_case_file(const std::string& path);

// Serialize back to the case format; parse(serialize(net)) == net for
// networks without candidate branches.
std::string serialize_case(const Network& net);

// Parse the sidecar ([costs]/[candidates]/[budget]/[var]/[thermal]) against a
// base network; returns the candidate-augmented network plus the uncertainty
// description. VaR samples are drawn here when a [var] section is present.
std::pair<Network, UncertaintySpec> parse_uncertainty(const Network& base, const std::string& text);
std::pair<Network, UncertaintySpec> parse_uncertainty_file(const Network& base, const std::string& path);

// N x |K| demand samples, row-major draw order (sample-major, then ascending
// load bus), d ~ uniform[dbar - dhat, dbar + dhat] via SplitMix64.
std::vector<std::vector<double>> draw_var_samples(const std::vector<double>& dbar,
                                                  const std::vector<double>& dhat,
                                                  int n, uint64_t seed);

// Nominal demand / deviation vectors over the load set, ascending bus id.
std::vector<double> nominal_demand(const Network& net);
std::vector<double> deviation_vector(const Network& net, const UncertaintyBudget& budget);

} // namespace robopf
