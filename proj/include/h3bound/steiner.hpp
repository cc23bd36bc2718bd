#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "h3bound/geom.hpp"
#include "h3bound/graphs.hpp"

namespace h3bound {

/// Geometric realization of a graph with some vertices pinned. The edge
/// list is general (pinned terminals may have any valence) but every free
/// vertex must be trivalent.
struct CarrierConfig {
    std::vector<std::pair<int, int>> edges; // vertex index pairs
    std::vector<HPoint> positions;          // by vertex
    std::vector<bool> pinned;               // by vertex

    int num_vertices() const { return static_cast<int>(positions.size()); }
    void validate() const;

    /// Realization of a trivalent graph: one position per vertex, edges from
    /// the graph's edge list, nothing pinned unless marked afterwards.
    static CarrierConfig from_graph(const TrivalentGraph& g, std::vector<HPoint> positions);
};

/// Sum of hyperbolic edge lengths.
double total_length(const CarrierConfig& c);

/// Per-edge lengths in edge-list order.
LengthAssignment edge_lengths(const CarrierConfig& c);

struct OptimizeOptions {
    double tol = 1e-8;        // gradient norm target per free vertex
    int max_iterations = 20000;
    std::vector<double>* trace = nullptr; // accepted total lengths, if wanted
};

/// Thrown when the iteration budget runs out; carries the best iterate.
struct ConvergenceError : std::runtime_error {
    CarrierConfig best;
    explicit ConvergenceError(CarrierConfig b)
        : std::runtime_error("optimize: iteration budget exhausted"), best(std::move(b)) {}
};

/// Length minimization over free-vertex positions: per-vertex steepest
/// descent in the tangent space with exp_map retraction and backtracking
/// line search. Accepted iterates never increase the total length.
CarrierConfig optimize(const CarrierConfig& c, const OptimizeOptions& opt = {});

struct VertexAngleReport {
    int vertex = -1;
    double angles[3] = {0, 0, 0}; // pairwise incidence angles, radians
    double angle_sum = 0;
    double coplanarity_residual = 0; // third direction's distance from the
                                     // plane of the first two
};

struct YReport {
    std::vector<VertexAngleReport> vertices; // free trivalent vertices
};

/// Incidence-angle audit of the free vertices. A zero-length incident edge
/// is an error pointing the caller at zero_edge_repair.
YReport y_report(const CarrierConfig& c, double min_edge = 1e-9);

struct CornerShortcut {
    double gain = 0;        // 2c - (stem + 2 side), maximized over depth
    double depth = 0;       // distance from the corner to the inserted vertex
    double side_length = 0; // distance from the inserted vertex to each cut point
};

/// Optimal cut of a corner formed by two length-c arms meeting at angle
/// gamma: a new vertex on the bisector replaces the corner passage. The
/// gain is positive exactly when gamma < 2 pi / 3.
CornerShortcut corner_shortcut(double c_len, double gamma);

struct RepairResult {
    CarrierConfig config;
    bool changed = false; // false when no collapsed edge was present
};

/// Rewires a collapsed edge between two distinct free vertices: the four
/// outer edges are re-partitioned between the pair, each candidate is
/// re-optimized, and the shortest result wins. Never increases length.
RepairResult zero_edge_repair(const CarrierConfig& c, double tol = 1e-7);

} // namespace h3bound
