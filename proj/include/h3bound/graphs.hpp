#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace h3bound {

/// Connected trivalent multigraph (loops and parallel edges allowed) in
/// half-edge form: half-edge h belongs to vertex vertex_of[h] and is glued
/// to involution[h]. Edges are the involution orbits; edge ids are assigned
/// by the smaller half-edge, in increasing order.
struct TrivalentGraph {
    std::vector<int> involution;
    std::vector<int> vertex_of;

    int num_half_edges() const { return static_cast<int>(involution.size()); }
    int num_vertices() const;
    int num_edges() const { return num_half_edges() / 2; }
    int rank() const { return num_edges() - num_vertices() + 1; }

    /// Edge list as (half-edge, partner) with half-edge < partner; the index
    /// in this list is the edge id used everywhere else.
    std::vector<std::pair<int, int>> edges() const;

    /// Edge id of the edge containing half-edge h.
    int edge_of_half(int h) const;

    bool is_connected() const;

    /// Validates trivalence, involution shape, and connectivity.
    void validate() const;

    /// Minimum lexicographic encoding of the loop/multiplicity matrix over
    /// vertex orderings sorted by an isomorphism-invariant vertex key;
    /// equal codes iff isomorphic.
    std::string canonical_code() const;

    static TrivalentGraph theta();
    static TrivalentGraph dumbbell();
};

/// Number of edges of an n-graph, 3(n-1). Errors for n <= 1.
int edge_count(int n);

/// All connected trivalent graphs of rank n up to isomorphism, sorted by
/// canonical code. Supported for 2 <= n <= 5.
std::vector<TrivalentGraph> enumerate_n_graphs(int n);

struct DirectedEdge {
    int edge = 0;
    bool forward = true;

    bool operator==(const DirectedEdge&) const = default;
};

/// Edge path; steps are (edge id, orientation). Orientation "forward" runs
/// from the vertex of the smaller half-edge to the vertex of the larger.
struct DirectedEdgePath {
    std::vector<DirectedEdge> steps;
};

int path_start_vertex(const TrivalentGraph& g, const DirectedEdge& s);
int path_end_vertex(const TrivalentGraph& g, const DirectedEdge& s);

/// Consecutive steps chain head to tail and the path returns to its start.
bool path_is_closed(const TrivalentGraph& g, const DirectedEdgePath& p);

/// No immediate backtrack e e^-1, including across the closing point.
bool path_is_reduced(const TrivalentGraph& g, const DirectedEdgePath& p);

struct LengthAssignment {
    std::vector<double> length; // by edge id, all > 0
};

struct GirthResult {
    double length = 0;
    std::vector<int> cycle_edges; // witness simple cycle
};

/// Minimum total length over simple cycles (1-edge loops and 2-edge bigons
/// included), with a witness.
GirthResult girth_length(const TrivalentGraph& g, const LengthAssignment& w);

struct WindowCheckResult {
    bool pass = true;
    int violating_window_start = -1; // first failing window when !pass
};

/// Checks that every cyclic window of 3(n-1) consecutive steps of a reduced
/// closed path contains an edge of length >= girth_bound / (3(n-1)).
/// Preconditions (reduced+closed path; girth >= girth_bound) raise errors
/// distinct from a reported violation.
WindowCheckResult window_long_edge_check(const TrivalentGraph& g, const LengthAssignment& w,
                                         const DirectedEdgePath& path, int n,
                                         double girth_bound);

/// Seeded uniform sampling of a reduced closed path with k steps; throws
/// when no such path exists.
DirectedEdgePath random_reduced_closed_path(const TrivalentGraph& g, int k,
                                            std::uint64_t seed);

} // namespace h3bound
