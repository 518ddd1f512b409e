#pragma once

#include "qperc/locc.hpp"
#include "qperc/qstate.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qperc {

enum class NodeColor { Red, Blue };

/// Brick-wall honeycomb lattice: `height` rows of 2*width nodes. Node (r, c)
/// has horizontal edges to (r, c+-1) and one vertical edge to (r+1, c) when
/// r + c is even (so every bulk node has degree 3). Each node owns three
/// qubit slots, one per incident edge: 0 = left, 1 = right, 2 = vertical.
/// Every edge carries the same PairState. Red nodes are those with r + c
/// even; the coloring is proper.
class HoneycombLattice {
public:
    struct Edge {
        int a;
        int slot_a;
        int b;
        int slot_b;
    };

    HoneycombLattice(int width, int height, PairState pair);

    int width() const { return width_; }
    int height() const { return height_; }
    const PairState& pair() const { return pair_; }

    int num_nodes() const { return 2 * width_ * height_; }
    int node_id(int row, int col) const { return row * 2 * width_ + col; }
    int row_of(int node) const { return node / (2 * width_); }
    int col_of(int node) const { return node % (2 * width_); }

    NodeColor color(int node) const {
        return (row_of(node) + col_of(node)) % 2 == 0 ? NodeColor::Red
                                                      : NodeColor::Blue;
    }

    const std::vector<Edge>& edges() const { return edges_; }
    /// Edge index at a node's slot, or -1 when the slot is unused (boundary).
    int edge_at(int node, int slot) const { return node_edges_[node][slot]; }
    int degree(int node) const;
    /// Neighbor reached through `slot`, or -1.
    int neighbor(int node, int slot) const;

private:
    int width_;
    int height_;
    PairState pair_;
    std::vector<Edge> edges_;
    std::vector<std::array<int, 3>> node_edges_;
};

HoneycombLattice build_honeycomb(int width, int height, PairState pair);

/// One fundamental triangle of the transformed lattice: the three blue
/// neighbors of an interior red node, each corner naming (node, slot) of the
/// qubit left behind by the measurement.
struct Triangle {
    int red_node;
    std::array<std::pair<int, int>, 3> corners; // (blue node, slot)
};

/// Adjacency between two triangles sharing a blue node; corner_* are the
/// corner indices (0..2) of the shared node inside each triangle.
struct TriangleAdjacency {
    int t_a;
    int t_b;
    int node;
    int corner_a;
    int corner_b;
};

/// Triangular lattice of generalized GHZ states produced by measuring every
/// interior red node in the GHZ basis. Red nodes disappear from the model;
/// `occupied` flags which triangles currently hold a (distilled) state.
struct TriGhzLattice {
    int width = 0;
    int height = 0;
    std::vector<Triangle> triangles;
    std::vector<TriangleAdjacency> adjacency;
    std::vector<uint8_t> occupied; // per triangle, defaults to 1
};

TriGhzLattice ghz_transform(const HoneycombLattice& h);

enum class Boundary { Open, Wrapping };
enum class PercMode { Site, Bond };

/// Percolation substrate: a flat graph whose edges carry the displacement of
/// the step on the unwrapped lattice (used to detect wrapping clusters), plus
/// boundary masks for side-to-side spanning and the two probe sites used for
/// the two-point connectivity estimate.
struct SiteLattice {
    std::string name;
    int L = 0;
    Boundary boundary = Boundary::Open;
    PercMode mode = PercMode::Site;
    int32_t num_sites = 0;

    struct GraphEdge {
        int32_t a;
        int32_t b;
        int16_t dx;
        int16_t dy;
    };
    std::vector<GraphEdge> edges;

    // bit 0: left, 1: right, 2: top, 3: bottom (open boundaries only).
    std::vector<uint8_t> side_mask;
    int32_t probe_a = 0;
    int32_t probe_b = 0;
    double p0 = 0.0;
};

/// Canonical L x L triangular site lattice (bulk coordination 6).
SiteLattice triangular_sites(int L, Boundary boundary);
/// L x L square site lattice, used as an engine self-check.
SiteLattice square_sites(int L, Boundary boundary);
/// Honeycomb bond lattice with L cells per row and L rows (2 L^2 nodes).
SiteLattice honeycomb_bonds(int L, Boundary boundary);

/// One site per triangle, adjacent iff the triangles share a blue node.
SiteLattice to_site_model(const TriGhzLattice& t, double p0);

/// Raised by planning when the requested targets do not sit inside one
/// connected cluster of occupied triangles.
struct NotPercolatingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FusionStep {
    int t_a;
    int t_b;
    int node;
    int corner_a;
    int corner_b;
};

struct RemovalStep {
    int t;
    int corner;
    int node;
};

/// Ordered measurement plan turning a cluster of occupied triangles into a
/// cat state over one qubit per target node: Bell fusions along a spanning
/// tree of the chosen region, then sigma_x removals of every other active
/// qubit.
struct MeasurementPlan {
    std::vector<int> region;                        // triangle ids
    std::vector<FusionStep> fusions;                // tree edges, BFS order
    std::vector<RemovalStep> removals;
    std::vector<std::pair<int, int>> cat_qubits;    // (triangle, corner) per target
    std::vector<int> targets;                       // target nodes, as given
};

MeasurementPlan plan_cat_region(const TriGhzLattice& t,
                                const std::vector<int>& target_nodes);

/// Desk-scale execution of a plan on the statevector, for one assignment of
/// measurement outcomes (one entry per fusion in 0..3, one per removal in
/// {+1,-1}). Starts from an ideal 3-qubit cat on every region triangle.
struct ExecutedPlan {
    double probability;
    PureState state;
    std::vector<std::pair<int, int>> qubits; // (triangle, corner), state order
};
ExecutedPlan execute_plan(const MeasurementPlan& plan,
                          const std::vector<int>& fusion_outcomes,
                          const std::vector<int>& removal_outcomes);

enum class Strategy { CEP, QEP };

/// Measurement budget for building a boundary cat state (QEP) or a
/// corner-to-corner Bell pair (CEP) inside an l x l window of the honeycomb
/// lattice. The window is built as width = l cells and height = 2l rows, so
/// one unit of breadth spans two hexagon rows.
struct ResourceCount {
    int l = 0;
    Strategy strategy = Strategy::QEP;
    int64_t single_qubit = 0;
    int64_t two_qubit = 0;
    int64_t three_qubit = 0;
};

ResourceCount count_measurements(int l, Strategy strategy);

nlohmann::json to_json(const HoneycombLattice& h);
nlohmann::json to_json(const TriGhzLattice& t);

} // namespace qperc
