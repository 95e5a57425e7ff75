#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "robopf/grid.hpp"
#include "robopf/paths.hpp"
#include "robopf/splitmix64.hpp"

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

using namespace robopf;

namespace {

Network make_net(int n, const std::vector<std::tuple<int, int, double>>& edges) {
    Network net;
    for (int i = 1; i <= n; ++i) {
        Bus b;
        b.id = i;
        b.kind = i == 1 ? BusKind::slack : BusKind::load;
        b.demand = 1.0;
        b.base_kv = 100.0;
        net.buses.push_back(b);
    }
    int id = 0;
    for (auto [f, t, r] : edges) {
        Branch br;
        br.id = ++id;
        br.from = f;
        br.to = t;
        br.resistance = r;
        br.reactance = 10 * r;
        br.rate_a = 100;
        br.y_cap = 1.0;
        net.branches.push_back(br);
    }
    return net;
}

void dfs_all(const Network& net, int cur, int dst, std::vector<char>& used,
             std::vector<int>& edges, double w, PathWeight pw, std::vector<Path>& out) {
    if (cur == dst) {
        out.push_back({edges, w});
        return;
    }
    for (const auto& b : net.branches) {
        int nxt;
        if (b.from == cur) nxt = b.to;
        else if (b.to == cur) nxt = b.from;
        else continue;
        if (used[nxt]) continue;
        used[nxt] = 1;
        edges.push_back(b.id);
        double step = pw == PathWeight::resistance ? b.resistance : 1.0;
        dfs_all(net, nxt, dst, used, edges, w + step, pw, out);
        edges.pop_back();
        used[nxt] = 0;
    }
}

// ground truth: every loopless path by depth-first enumeration, sorted by
// (weight, lexicographic edge ids)
std::vector<Path> enumerate_paths(const Network& net, int src, int dst, PathWeight pw) {
    std::vector<char> used(net.buses.size() + 1, 0);
    used[src] = 1;
    std::vector<int> edges;
    std::vector<Path> out;
    dfs_all(net, src, dst, used, edges, 0.0, pw, out);
    std::sort(out.begin(), out.end(), [](const Path& a, const Path& b) {
        if (a.weight != b.weight) return a.weight < b.weight;
        return a.edges < b.edges;
    });
    return out;
}

std::string data_path(const char* name) {
    return std::string(ROBOPF_DATA_DIR) + "/" + name;
}

} // namespace

TEST_CASE("ranked paths match exhaustive enumeration on random graphs") {
    SplitMix64 rng(2024);
    int graphs = 0;
    while (graphs < 100) {
        int n = 2 + static_cast<int>(rng.next() % 7);
        int maxm = std::min(12, n * (n - 1) / 2 + 3);
        int m = 1 + static_cast<int>(rng.next() % maxm);
        std::vector<std::tuple<int, int, double>> edges;
        for (int e = 0; e < m; ++e) {
            int f = 1 + static_cast<int>(rng.next() % n);
            int t = 1 + static_cast<int>(rng.next() % n);
            if (f == t) continue;
            // dyadic weights: every path weight is exact, so ties are exact too
            double r = (1.0 + static_cast<double>(rng.next() % 8)) / 16.0;
            edges.emplace_back(f, t, r);
        }
        if (edges.empty()) continue;
        Network net = make_net(n, edges);
        int src = 1 + static_cast<int>(rng.next() % n);
        int dst = 1 + static_cast<int>(rng.next() % n);
        if (src == dst) continue;
        ++graphs;

        for (PathWeight pw : {PathWeight::resistance, PathWeight::hops}) {
            auto all = enumerate_paths(net, src, dst, pw);
            for (int k : {1, 2, 5}) {
                auto got = yen_k_shortest(net, src, dst, k, pw);
                size_t expect = std::min<size_t>(static_cast<size_t>(k), all.size());
                REQUIRE(got.size() == expect);
                for (size_t i = 0; i < expect; ++i) {
                    CHECK(got[i].edges == all[i].edges);
                    CHECK(got[i].weight == all[i].weight);
                }
            }
        }
    }
}

TEST_CASE("parallel circuits tie-break on edge ids") {
    Network net = make_net(2, {{1, 2, 0.25}, {1, 2, 0.25}});
    auto got = yen_k_shortest(net, 1, 2, 3, PathWeight::resistance);
    REQUIRE(got.size() == 2);
    CHECK(got[0].edges == std::vector<int>{1});
    CHECK(got[1].edges == std::vector<int>{2});
    CHECK(got[0].weight == got[1].weight);
}

TEST_CASE("endpoint handling") {
    Network net = make_net(3, {{1, 2, 0.5}, {2, 3, 0.5}});
    // source equals target: one empty path
    auto self = yen_k_shortest(net, 2, 2, 4, PathWeight::resistance);
    REQUIRE(self.size() == 1);
    CHECK(self[0].edges.empty());
    CHECK(self[0].weight == 0.0);

    CHECK_THROWS_AS(yen_k_shortest(net, 1, 3, 0, PathWeight::hops), std::invalid_argument);
    CHECK_THROWS_AS(yen_k_shortest(net, 1, 9, 1, PathWeight::hops), std::invalid_argument);

    // disconnected endpoints yield no paths
    Network split = make_net(4, {{1, 2, 0.5}, {3, 4, 0.5}});
    CHECK(yen_k_shortest(split, 1, 4, 5, PathWeight::resistance).empty());
}

TEST_CASE("pool construction over the shipped instance") {
    Network base = parse_case_file(data_path("garver.case"));
    auto [net, spec] = parse_uncertainty_file(base, data_path("garver.unc"));
    (void)spec;

    PathSet ps = build_path_sets(net, 2, PathWeight::resistance);
    CHECK(ps.k_paths == 2);
    REQUIRE(ps.pairs.size() == 15);         // 5 loads x 3 generators

    for (const auto& pp : ps.pairs) {
        CHECK(pp.path_ids.size() <= 2);
        CHECK(!pp.path_ids.empty());
        // pool order mirrors the ranking: weights nondecreasing within a pair
        for (size_t i = 0; i + 1 < pp.path_ids.size(); ++i)
            CHECK(ps.paths[pp.path_ids[i]].weight <= ps.paths[pp.path_ids[i + 1]].weight);
    }

    // generator bus 1 carries load bus 1: the pair collapses to the empty path
    const PairPaths* self = ps.pair(1, 1);
    REQUIRE(self != nullptr);
    REQUIRE(self->path_ids.size() == 1);
    CHECK(ps.paths[self->path_ids[0]].edges.empty());

    // corridor 3-6 exists twice (built circuit candidate is branch 11); the
    // two cheapest routes 6->5 tie at 0.034 and order by edge ids
    const PairPaths* p56 = ps.pair(5, 6);
    REQUIRE(p56 != nullptr);
    REQUIRE(p56->path_ids.size() == 2);
    CHECK(ps.paths[p56->path_ids[0]].edges == std::vector<int>{8, 7});
    CHECK(ps.paths[p56->path_ids[1]].edges == std::vector<int>{11, 7});
    CHECK(ps.paths[p56->path_ids[0]].weight == doctest::Approx(0.034));
    CHECK(ps.paths[p56->path_ids[1]].weight == doctest::Approx(0.034));

    // incidence is exactly the membership relation
    for (const auto& [eid, pids] : ps.incidence)
        for (int pid : pids) {
            const auto& e = ps.paths[pid].edges;
            CHECK(std::count(e.begin(), e.end(), eid) == 1);
        }
    for (size_t pid = 0; pid < ps.paths.size(); ++pid)
        for (int eid : ps.paths[pid].edges) {
            const auto& inc = ps.incidence.at(eid);
            CHECK(std::count(inc.begin(), inc.end(), static_cast<int>(pid)) == 1);
        }

    // per-load and per-gen pools partition the pair pools
    size_t total = 0;
    for (int k : net.load_buses()) total += ps.paths_of_load(k).size();
    CHECK(total == ps.paths.size());
    total = 0;
    for (const auto& g : net.gens) total += ps.paths_of_gen(g.bus).size();
    CHECK(total == ps.paths.size());
}

TEST_CASE("unreachable load reported by pool construction") {
    // gens on one island, a load alone on the other
    Network net = make_net(3, {{1, 2, 0.5}});
    net.gens.push_back({1, 10.0, 1.0});
    CHECK_THROWS_AS(build_path_sets(net, 2, PathWeight::resistance), std::invalid_argument);
}
