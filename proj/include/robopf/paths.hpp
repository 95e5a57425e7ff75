#pragma once
#include "robopf/grid.hpp"

#include <map>
#include <string>
#include <vector>

namespace robopf {

enum class PathWeight { resistance, hops };

// Loopless path as an ordered branch-id sequence; empty when source == target.
struct Path {
    std::vector<int> edges;
    double weight = 0.0;

    bool operator==(const Path& o) const { return edges == o.edges; }
};

// Candidate branches participate in enumeration like existing ones.
// Returns up to K shortest loopless src->dst paths ordered by weight,
// ties broken by lexicographic edge-id sequence.
std::vector<Path> yen_k_shortest(const Network& net, int src, int dst, int k, PathWeight w);

// Path pool for one (load, generator) pair.
struct PairPaths {
    int load_bus = 0;
    int gen_bus = 0;
    std::vector<int> path_ids;      // global ids into PathSet::paths
};

struct PathSet {
    int k_paths = 0;
    PathWeight weight = PathWeight::resistance;
    std::vector<Path> paths;                        // global id = position
    std::vector<PairPaths> pairs;                   // ascending load bus, then gen bus
    std::map<int, std::vector<int>> incidence;      // branch id -> global path ids through it

    // global path ids serving load k / drawing on generator bus g
    std::vector<int> paths_of_load(int k) const;
    std::vector<int> paths_of_gen(int g) const;
    const PairPaths* pair(int k, int g) const;
};

// K shortest paths per (load, generator) pair over the candidate-augmented
// network. Throws std::invalid_argument when some load has no path to any
// generator (instance infeasible).
PathSet build_path_sets(const Network& net, int k, PathWeight w);

std::string weight_name(PathWeight w);

} // namespace robopf
