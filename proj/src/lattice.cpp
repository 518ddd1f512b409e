#include "qperc/lattice.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace qperc {

HoneycombLattice::HoneycombLattice(int width, int height, PairState pair)
    : width_(width), height_(height), pair_(pair) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("HoneycombLattice: sizes must be >= 1");
    node_edges_.assign(num_nodes(), {-1, -1, -1});

    const int cols = 2 * width_;
    for (int r = 0; r < height_; ++r) {
        for (int c = 0; c + 1 < cols; ++c) {
            const int a = node_id(r, c), b = node_id(r, c + 1);
            node_edges_[a][1] = static_cast<int>(edges_.size());
            node_edges_[b][0] = static_cast<int>(edges_.size());
            edges_.push_back({a, 1, b, 0});
        }
    }
    for (int r = 0; r + 1 < height_; ++r) {
        for (int c = 0; c < cols; ++c) {
            if ((r + c) % 2 != 0) continue;
            const int a = node_id(r, c), b = node_id(r + 1, c);
            node_edges_[a][2] = static_cast<int>(edges_.size());
            node_edges_[b][2] = static_cast<int>(edges_.size());
            edges_.push_back({a, 2, b, 2});
        }
    }
}

int HoneycombLattice::degree(int node) const {
    int d = 0;
    for (int s = 0; s < 3; ++s)
        if (node_edges_[node][s] >= 0) ++d;
    return d;
}

int HoneycombLattice::neighbor(int node, int slot) const {
    const int e = node_edges_[node][slot];
    if (e < 0) return -1;
    return edges_[e].a == node ? edges_[e].b : edges_[e].a;
}

HoneycombLattice build_honeycomb(int width, int height, PairState pair) {
    return HoneycombLattice(width, height, pair);
}

TriGhzLattice ghz_transform(const HoneycombLattice& h) {
    TriGhzLattice t;
    t.width = h.width();
    t.height = h.height();

    for (int node = 0; node < h.num_nodes(); ++node) {
        if (h.color(node) != NodeColor::Red) continue;
        if (h.degree(node) != 3) continue; // boundary red node: no triangle
        Triangle tri;
        tri.red_node = node;
        for (int slot = 0; slot < 3; ++slot) {
            const auto& e = h.edges()[h.edge_at(node, slot)];
            const int blue = e.a == node ? e.b : e.a;
            const int blue_slot = e.a == node ? e.slot_b : e.slot_a;
            tri.corners[slot] = {blue, blue_slot};
        }
        t.triangles.push_back(tri);
    }
    t.occupied.assign(t.triangles.size(), 1);

    // Triangles are adjacent iff they share a blue corner node.
    std::map<int, std::vector<std::pair<int, int>>> by_node; // node -> (tri, corner)
    for (std::size_t i = 0; i < t.triangles.size(); ++i)
        for (int k = 0; k < 3; ++k)
            by_node[t.triangles[i].corners[k].first].push_back(
                {static_cast<int>(i), k});
    for (const auto& [node, incid] : by_node)
        for (std::size_t i = 0; i < incid.size(); ++i)
            for (std::size_t j = i + 1; j < incid.size(); ++j)
                t.adjacency.push_back({incid[i].first, incid[j].first, node,
                                       incid[i].second, incid[j].second});
    return t;
}

SiteLattice triangular_sites(int L, Boundary boundary) {
    if (L < 2) throw std::invalid_argument("triangular_sites: L must be >= 2");
    SiteLattice g;
    g.name = "tri-site";
    g.L = L;
    g.boundary = boundary;
    g.mode = PercMode::Site;
    g.num_sites = L * L;

    const std::array<std::array<int, 2>, 3> steps{{{0, 1}, {1, 0}, {1, -1}}}; // (di, dj)
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j)
            for (const auto& s : steps) {
                int ni = i + s[0], nj = j + s[1];
                if (boundary == Boundary::Wrapping) {
                    ni = (ni + L) % L;
                    nj = (nj + L) % L;
                } else if (ni < 0 || ni >= L || nj < 0 || nj >= L) {
                    continue;
                }
                g.edges.push_back({i * L + j, ni * L + nj,
                                   static_cast<int16_t>(s[1]),
                                   static_cast<int16_t>(s[0])});
            }

    if (boundary == Boundary::Open) {
        g.side_mask.assign(g.num_sites, 0);
        for (int i = 0; i < L; ++i)
            for (int j = 0; j < L; ++j) {
                uint8_t m = 0;
                if (j == 0) m |= 1;
                if (j == L - 1) m |= 2;
                if (i == 0) m |= 4;
                if (i == L - 1) m |= 8;
                g.side_mask[i * L + j] = m;
            }
        g.probe_a = 0;
        g.probe_b = g.num_sites - 1;
    } else {
        g.probe_a = 0;
        g.probe_b = (L / 2) * L + (L / 2);
    }
    return g;
}

SiteLattice square_sites(int L, Boundary boundary) {
    SiteLattice g = triangular_sites(L, boundary);
    g.name = "square-site";
    // Drop the diagonal generator: keep only axis steps.
    std::vector<SiteLattice::GraphEdge> kept;
    for (const auto& e : g.edges)
        if (!(e.dx == -1 && e.dy == 1)) kept.push_back(e);
    g.edges = std::move(kept);
    return g;
}

SiteLattice honeycomb_bonds(int L, Boundary boundary) {
    if (L < 2) throw std::invalid_argument("honeycomb_bonds: L must be >= 2");
    if (boundary == Boundary::Wrapping && L % 2 != 0)
        throw std::invalid_argument("honeycomb_bonds: wrapping needs even L");
    SiteLattice g;
    g.name = "hex-bond";
    g.L = L;
    g.boundary = boundary;
    g.mode = PercMode::Bond;
    const int cols = 2 * L, rows = L;
    g.num_sites = cols * rows;

    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const int a = r * cols + c;
            if (boundary == Boundary::Wrapping || c + 1 < cols)
                g.edges.push_back({a, r * cols + (c + 1) % cols, 1, 0});
            if ((r + c) % 2 == 0 &&
                (boundary == Boundary::Wrapping || r + 1 < rows))
                g.edges.push_back({a, ((r + 1) % rows) * cols + c, 0, 1});
        }

    if (boundary == Boundary::Open) {
        g.side_mask.assign(g.num_sites, 0);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                uint8_t m = 0;
                if (c == 0) m |= 1;
                if (c == cols - 1) m |= 2;
                if (r == 0) m |= 4;
                if (r == rows - 1) m |= 8;
                g.side_mask[r * cols + c] = m;
            }
        g.probe_a = 0;
        g.probe_b = g.num_sites - 1;
    } else {
        g.probe_a = 0;
        g.probe_b = (rows / 2) * cols + L;
    }
    return g;
}

SiteLattice to_site_model(const TriGhzLattice& t, double p0) {
    SiteLattice g;
    g.name = "tri-ghz";
    g.L = t.width;
    g.boundary = Boundary::Open;
    g.mode = PercMode::Site;
    g.num_sites = static_cast<int32_t>(t.triangles.size());
    g.p0 = p0;
    if (g.num_sites == 0) return g;

    // Use the measured red node's (row, col) as the site's embedding.
    const int cols = 2 * t.width;
    auto row_of = [&](int tri) { return t.triangles[tri].red_node / cols; };
    auto col_of = [&](int tri) { return t.triangles[tri].red_node % cols; };
    for (const auto& adj : t.adjacency)
        g.edges.push_back(
            {adj.t_a, adj.t_b,
             static_cast<int16_t>(col_of(adj.t_b) - col_of(adj.t_a)),
             static_cast<int16_t>(row_of(adj.t_b) - row_of(adj.t_a))});

    g.side_mask.assign(g.num_sites, 0);
    for (int32_t i = 0; i < g.num_sites; ++i) {
        uint8_t m = 0;
        if (col_of(i) <= 2) m |= 1;
        if (col_of(i) >= cols - 3) m |= 2;
        if (row_of(i) == 0) m |= 4;
        if (row_of(i) == t.height - 2) m |= 8;
        g.side_mask[i] = m;
    }
    g.probe_a = 0;
    g.probe_b = g.num_sites - 1;
    return g;
}

MeasurementPlan plan_cat_region(const TriGhzLattice& t,
                                const std::vector<int>& target_nodes) {
    if (target_nodes.size() < 2)
        throw std::invalid_argument("plan_cat_region: need at least two targets");
    {
        std::vector<int> sorted(target_nodes);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("plan_cat_region: duplicate target node");
    }
    const int nt = static_cast<int>(t.triangles.size());

    auto is_target = [&](int node) {
        return std::find(target_nodes.begin(), target_nodes.end(), node) !=
               target_nodes.end();
    };

    // Host triangles per target: occupied triangles touching the node.
    std::vector<std::vector<std::pair<int, int>>> hosts(target_nodes.size());
    for (int i = 0; i < nt; ++i) {
        if (!t.occupied[i]) continue;
        for (int k = 0; k < 3; ++k)
            for (std::size_t j = 0; j < target_nodes.size(); ++j)
                if (t.triangles[i].corners[k].first == target_nodes[j])
                    hosts[j].push_back({i, k});
    }
    for (std::size_t j = 0; j < target_nodes.size(); ++j)
        if (hosts[j].empty())
            throw NotPercolatingError("target node not covered by any occupied triangle");

    // Adjacency over occupied triangles, excluding shared nodes that are
    // themselves targets (a fusion there could consume the cat qubit).
    std::vector<std::vector<int>> nbr(nt); // indices into t.adjacency
    for (std::size_t e = 0; e < t.adjacency.size(); ++e) {
        const auto& a = t.adjacency[e];
        if (!t.occupied[a.t_a] || !t.occupied[a.t_b]) continue;
        if (is_target(a.node)) continue;
        nbr[a.t_a].push_back(static_cast<int>(e));
        nbr[a.t_b].push_back(static_cast<int>(e));
    }

    // BFS tree from the lowest-indexed host of the first target.
    const int seed = hosts[0][0].first;
    std::vector<int> parent_edge(nt, -1), order(nt, -1);
    std::deque<int> queue{seed};
    order[seed] = 0;
    int next_order = 1;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int e : nbr[u]) {
            const auto& a = t.adjacency[e];
            const int v = a.t_a == u ? a.t_b : a.t_a;
            if (order[v] >= 0) continue;
            order[v] = next_order++;
            parent_edge[v] = e;
            queue.push_back(v);
        }
    }

    // Pick the first reachable host per target and collect the tree paths.
    MeasurementPlan plan;
    plan.targets = target_nodes;
    std::vector<uint8_t> in_region(nt, 0);
    std::vector<uint8_t> edge_used(t.adjacency.size(), 0);
    auto add_path = [&](int tri) {
        while (!in_region[tri]) {
            in_region[tri] = 1;
            const int e = parent_edge[tri];
            if (e < 0) break;
            edge_used[e] = 1;
            const auto& a = t.adjacency[e];
            tri = (order[a.t_a] < order[a.t_b]) ? a.t_a : a.t_b;
        }
    };
    for (std::size_t j = 0; j < target_nodes.size(); ++j) {
        int chosen = -1, corner = -1;
        for (const auto& [tri, k] : hosts[j])
            if (order[tri] >= 0 && (chosen < 0 || order[tri] < order[chosen])) {
                chosen = tri;
                corner = k;
            }
        if (chosen < 0)
            throw NotPercolatingError(
                "targets lie in different occupied clusters");
        add_path(chosen);
        plan.cat_qubits.push_back({chosen, corner});
    }

    for (int i = 0; i < nt; ++i)
        if (in_region[i]) plan.region.push_back(i);
    std::sort(plan.region.begin(), plan.region.end(),
              [&](int a, int b) { return order[a] < order[b]; });

    std::vector<int> used_edges;
    for (std::size_t e = 0; e < t.adjacency.size(); ++e)
        if (edge_used[e]) used_edges.push_back(static_cast<int>(e));
    std::sort(used_edges.begin(), used_edges.end(), [&](int x, int y) {
        const auto& a = t.adjacency[x];
        const auto& b = t.adjacency[y];
        return std::max(order[a.t_a], order[a.t_b]) <
               std::max(order[b.t_a], order[b.t_b]);
    });
    for (int e : used_edges) {
        const auto& a = t.adjacency[e];
        plan.fusions.push_back({a.t_a, a.t_b, a.node, a.corner_a, a.corner_b});
    }

    // Everything not fused away and not a cat qubit gets measured out.
    auto consumed = [&](int tri, int k) {
        for (const auto& f : plan.fusions) {
            if (f.t_a == tri && f.corner_a == k) return true;
            if (f.t_b == tri && f.corner_b == k) return true;
        }
        for (const auto& [ct, ck] : plan.cat_qubits)
            if (ct == tri && ck == k) return true;
        return false;
    };
    for (int tri : plan.region)
        for (int k = 0; k < 3; ++k)
            if (!consumed(tri, k))
                plan.removals.push_back(
                    {tri, k, t.triangles[tri].corners[k].first});
    return plan;
}

namespace {

int64_t bfs_distance(const HoneycombLattice& h, int from, int to) {
    std::vector<int> dist(h.num_nodes(), -1);
    std::deque<int> queue{from};
    dist[from] = 0;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        if (u == to) return dist[u];
        for (int s = 0; s < 3; ++s) {
            const int v = h.neighbor(u, s);
            if (v >= 0 && dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    throw std::logic_error("bfs_distance: lattice not connected");
}

} // namespace

ResourceCount count_measurements(int l, Strategy strategy) {
    if (l < 2) throw std::invalid_argument("count_measurements: l must be >= 2");
    const PairState pair = PairState::from_phi1(0.4); // counts are phi-independent
    const HoneycombLattice h = build_honeycomb(l, 2 * l, pair);

    ResourceCount rc;
    rc.l = l;
    rc.strategy = strategy;

    if (strategy == Strategy::CEP) {
        // One conversion measurement per edge, then Bell swaps along a
        // shortest path between two antipodal corner nodes.
        rc.single_qubit = static_cast<int64_t>(h.edges().size());
        const int64_t d = bfs_distance(h, 0, h.num_nodes() - 1);
        rc.two_qubit = d - 1;
        rc.three_qubit = 0;
        return rc;
    }

    const TriGhzLattice t = ghz_transform(h);
    const int nt = static_cast<int>(t.triangles.size());

    // Boundary ring of the transformed site lattice: sites missing at least
    // one of their six bulk neighbors.
    std::vector<int> deg(nt, 0);
    for (const auto& a : t.adjacency) {
        ++deg[a.t_a];
        ++deg[a.t_b];
    }
    std::vector<uint8_t> on_ring(nt, 0);
    int64_t ring = 0;
    for (int i = 0; i < nt; ++i)
        if (deg[i] < 6) {
            on_ring[i] = 1;
            ++ring;
        }

    // The cat spans 4 corner targets; fusions follow a spanning tree of the
    // ring, every other active qubit is measured out.
    rc.three_qubit = nt;                       // GHZ-basis node measurements
    rc.two_qubit = ring - 1;                   // Bell fusions along the ring
    rc.single_qubit = nt + (ring + 2 - 4);     // distillations + sigma_x removals
    return rc;
}

nlohmann::json to_json(const HoneycombLattice& h) {
    nlohmann::json j;
    j["width"] = h.width();
    j["height"] = h.height();
    j["pair"] = {{"phi0", h.pair().phi0}, {"phi1", h.pair().phi1}};
    auto& nodes = j["nodes"] = nlohmann::json::array();
    for (int n = 0; n < h.num_nodes(); ++n)
        nodes.push_back({{"id", n},
                         {"row", h.row_of(n)},
                         {"col", h.col_of(n)},
                         {"color", h.color(n) == NodeColor::Red ? "red" : "blue"}});
    auto& edges = j["edges"] = nlohmann::json::array();
    for (const auto& e : h.edges())
        edges.push_back(
            {{"a", e.a}, {"slot_a", e.slot_a}, {"b", e.b}, {"slot_b", e.slot_b}});
    return j;
}

nlohmann::json to_json(const TriGhzLattice& t) {
    nlohmann::json j;
    j["width"] = t.width;
    j["height"] = t.height;
    auto& tris = j["triangles"] = nlohmann::json::array();
    for (std::size_t i = 0; i < t.triangles.size(); ++i) {
        nlohmann::json corners = nlohmann::json::array();
        for (const auto& [node, slot] : t.triangles[i].corners)
            corners.push_back({{"node", node}, {"slot", slot}});
        tris.push_back({{"id", i},
                        {"red_node", t.triangles[i].red_node},
                        {"corners", corners},
                        {"occupied", static_cast<bool>(t.occupied[i])}});
    }
    auto& adj = j["adjacency"] = nlohmann::json::array();
    for (const auto& a : t.adjacency)
        adj.push_back({{"t_a", a.t_a}, {"t_b", a.t_b}, {"node", a.node}});
    return j;
}

} // namespace qperc
