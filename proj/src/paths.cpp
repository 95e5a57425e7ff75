#include "robopf/paths.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace robopf {

namespace {

struct Edge {
    int id;
    int from, to;
    double w;
};

struct Graph {
    std::vector<Edge> edges;
    std::map<int, std::vector<int>> adj;    // bus -> edge indices (both directions)

    int other(int eidx, int bus) const {
        const Edge& e = edges[eidx];
        return e.from == bus ? e.to : e.from;
    }
};

Graph make_graph(const Network& net, PathWeight w) {
    Graph g;
    for (const auto& b : net.branches) {
        double wt = w == PathWeight::resistance ? b.resistance : 1.0;
        g.edges.push_back({b.id, b.from, b.to, wt});
        int idx = static_cast<int>(g.edges.size()) - 1;
        g.adj[b.from].push_back(idx);
        g.adj[b.to].push_back(idx);
    }
    return g;
}

// total order on paths: weight, then lexicographic edge-id sequence
bool path_less(const Path& a, const Path& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.edges < b.edges;
}

// Dijkstra returning the unique (weight, lex edge sequence)-minimal path.
// banned_edges are edge ids removed for this run; banned_buses are interior
// nodes of the root path that the spur may not revisit. Graphs at this scale
// are tiny, so per-node path sequences are kept for the lexicographic rule.
bool dijkstra(const Graph& g, int src, int dst,
              const std::set<int>& banned_edges, const std::set<int>& banned_buses,
              Path& out) {
    struct Label {
        double dist = std::numeric_limits<double>::infinity();
        std::vector<int> seq;
        bool done = false;
    };
    std::map<int, Label> lab;
    lab[src].dist = 0.0;
    for (;;) {
        int best = 0;
        bool found = false;
        for (auto& [bus, l] : lab) {
            if (l.done || l.dist == std::numeric_limits<double>::infinity()) continue;
            if (!found || l.dist < lab[best].dist ||
                (l.dist == lab[best].dist && l.seq < lab[best].seq)) {
                best = bus;
                found = true;
            }
        }
        if (!found) return false;
        if (best == dst) {
            out.edges = lab[best].seq;
            out.weight = lab[best].dist;
            return true;
        }
        lab[best].done = true;
        Label cur = lab[best];
        auto it = g.adj.find(best);
        if (it == g.adj.end()) continue;
        for (int eidx : it->second) {
            const Edge& e = g.edges[eidx];
            if (banned_edges.count(e.id)) continue;
            int nxt = g.other(eidx, best);
            if (banned_buses.count(nxt)) continue;
            Label& nl = lab[nxt];
            if (nl.done) continue;
            double nd = cur.dist + e.w;
            std::vector<int> nseq = cur.seq;
            nseq.push_back(e.id);
            if (nd < nl.dist || (nd == nl.dist && nseq < nl.seq)) {
                nl.dist = nd;
                nl.seq = std::move(nseq);
            }
        }
    }
}

std::vector<int> path_buses(const Graph& g, int src, const std::vector<int>& edges) {
    std::vector<int> buses{src};
    int cur = src;
    for (int id : edges) {
        for (const auto& e : g.edges)
            if (e.id == id && (e.from == cur || e.to == cur)) {
                cur = e.from == cur ? e.to : e.from;
                break;
            }
        buses.push_back(cur);
    }
    return buses;
}

} // namespace

std::vector<Path> yen_k_shortest(const Network& net, int src, int dst, int k, PathWeight w) {
    if (k <= 0) throw std::invalid_argument("path count must be positive");
    if (!net.find_bus(src) || !net.find_bus(dst)) throw std::invalid_argument("unknown endpoint bus");
    if (src == dst) return {Path{}};        // single empty path, weight 0

    Graph g = make_graph(net, w);
    std::vector<Path> A;
    std::vector<Path> B;                    // candidate pool, kept sorted on pop

    Path first;
    if (!dijkstra(g, src, dst, {}, {}, first)) return {};
    A.push_back(first);

    while (static_cast<int>(A.size()) < k) {
        const Path& prev = A.back();
        std::vector<int> prev_buses = path_buses(g, src, prev.edges);
        // one spur per prefix position of the newest accepted path
        for (size_t i = 0; i + 1 < prev_buses.size(); ++i) {
            int spur = prev_buses[i];
            std::vector<int> root_edges(prev.edges.begin(), prev.edges.begin() + i);
            double root_w = 0.0;
            for (int id : root_edges)
                for (const auto& e : g.edges)
                    if (e.id == id) root_w += e.w;

            std::set<int> banned_edges;
            for (const auto& p : A) {
                if (p.edges.size() > i &&
                    std::equal(root_edges.begin(), root_edges.end(), p.edges.begin()))
                    banned_edges.insert(p.edges[i]);
            }
            std::set<int> banned_buses(prev_buses.begin(), prev_buses.begin() + i);

            Path spur_path;
            if (!dijkstra(g, spur, dst, banned_edges, banned_buses, spur_path)) continue;
            Path total;
            total.edges = root_edges;
            total.edges.insert(total.edges.end(), spur_path.edges.begin(), spur_path.edges.end());
            total.weight = root_w + spur_path.weight;
            bool dup = std::any_of(A.begin(), A.end(), [&](const Path& p) { return p == total; }) ||
                       std::any_of(B.begin(), B.end(), [&](const Path& p) { return p == total; });
            if (!dup) B.push_back(total);
        }
        if (B.empty()) break;
        auto best = std::min_element(B.begin(), B.end(), path_less);
        A.push_back(*best);
        B.erase(best);
    }
    return A;
}

std::vector<int> PathSet::paths_of_load(int k) const {
    std::vector<int> out;
    for (const auto& pp : pairs)
        if (pp.load_bus == k)
            out.insert(out.end(), pp.path_ids.begin(), pp.path_ids.end());
    return out;
}

std::vector<int> PathSet::paths_of_gen(int g) const {
    std::vector<int> out;
    for (const auto& pp : pairs)
        if (pp.gen_bus == g)
            out.insert(out.end(), pp.path_ids.begin(), pp.path_ids.end());
    return out;
}

const PairPaths* PathSet::pair(int k, int g) const {
    for (const auto& pp : pairs)
        if (pp.load_bus == k && pp.gen_bus == g) return &pp;
    return nullptr;
}

PathSet build_path_sets(const Network& net, int k, PathWeight w) {
    if (k <= 0) throw std::invalid_argument("path count must be positive");
    PathSet ps;
    ps.k_paths = k;
    ps.weight = w;
    auto loads = net.load_buses();

    struct Task { int load, gen; };
    std::vector<Task> tasks;
    for (int kb : loads)
        for (const auto& g : net.gens)
            tasks.push_back({kb, g.bus});

    std::vector<std::vector<Path>> results(tasks.size());
#ifdef ROBOPF_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int t = 0; t < static_cast<int>(tasks.size()); ++t)
        results[t] = yen_k_shortest(net, tasks[t].gen, tasks[t].load, k, w);

    // assemble in deterministic (load, gen) order regardless of thread count
    for (size_t t = 0; t < tasks.size(); ++t) {
        PairPaths pp;
        pp.load_bus = tasks[t].load;
        pp.gen_bus = tasks[t].gen;
        for (const auto& path : results[t]) {
            int gid = static_cast<int>(ps.paths.size());
            ps.paths.push_back(path);
            pp.path_ids.push_back(gid);
            for (int eid : path.edges) ps.incidence[eid].push_back(gid);
        }
        ps.pairs.push_back(pp);
    }
    for (int kb : loads)
        if (ps.paths_of_load(kb).empty())
            throw std::invalid_argument("no path serves load bus " + std::to_string(kb));
    return ps;
}

std::string weight_name(PathWeight w) {
    return w == PathWeight::resistance ? "resistance" : "hops";
}

} // namespace robopf
