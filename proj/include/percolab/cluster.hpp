#pragma once

#include <iosfwd>
#include <vector>

#include "percolab/config_space.hpp"

namespace percolab {

// Finite rooted connected subgraph, rooted at the identity, known exactly out
// to word distance `truncation` from the root.
struct RootedGraph {
    std::vector<GroupElement> vertices;  // sorted, contains the identity
    std::vector<EdgeId> edges;           // sorted, endpoints within vertices
    int truncation = 0;
};

// Labeled vertex/edge-set equality; the truncation horizon is bookkeeping.
bool same_graph(const RootedGraph& a, const RootedGraph& b);

struct RootedGraphHash {
    size_t operator()(const RootedGraph& g) const;
};
struct RootedGraphEq {
    bool operator()(const RootedGraph& a, const RootedGraph& b) const {
        return same_graph(a, b);
    }
};

// Sorts, validates (root present, endpoints covered, connected).
RootedGraph make_rooted(std::vector<GroupElement> vertices, std::vector<EdgeId> edges,
                        int truncation);

// Connected component of g through the open edges, re-rooted by g⁻¹ so the
// result is rooted at the identity. Truncation = window radius − d(g, center).
RootedGraph cluster_of(const Configuration& w, const GroupElement& g);

// Closed combinatorial ball: vertices within graph distance r of the root,
// edges induced between them.
RootedGraph ball(const RootedGraph& H, int r);

struct MetricResult {
    double value = 1.0;  // exp(−agreement)
    bool exact = false;  // false when agreement hit a truncation horizon
    int agreement = 0;   // largest radius with equal labeled balls
};

MetricResult gh_distance(const RootedGraph& a, const RootedGraph& b);

// Cluster-relation move: shift(w, g), defined only for g in the identity's cluster.
Configuration reroot(const Configuration& w, const GroupElement& g);

// True when the identity's cluster contains a vertex at word distance ≥ radius.
bool cluster_reaches(const Configuration& w, int radius);
bool boundary_reach(const Configuration& w);

// Header line "root <element> truncation <t>", then the edge list.
void write_rooted_graph(std::ostream& out, const RootedGraph& g);
RootedGraph read_rooted_graph(std::istream& in, const GroupSpec& spec);

}  // namespace percolab
