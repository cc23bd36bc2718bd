#include "h3bound/graphs.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "h3bound/rng.hpp"

namespace h3bound {

namespace {

// Loop/multiplicity matrix of a graph on V vertices: m[i][j] is the number
// of edges between i and j for i != j, and m[i][i] is twice the number of
// loops at i (each loop contributes 2 to the degree). Row sums are 3.
using MultMatrix = std::vector<std::vector<int>>;

MultMatrix mult_matrix(const TrivalentGraph& g) {
    int V = g.num_vertices();
    MultMatrix m(V, std::vector<int>(V, 0));
    for (auto [h1, h2] : g.edges()) {
        int a = g.vertex_of[h1], b = g.vertex_of[h2];
        if (a == b) {
            m[a][a] += 2;
        } else {
            m[a][b] += 1;
            m[b][a] += 1;
        }
    }
    return m;
}

// Upper-triangle encoding in column-major order: (0,0), (0,1), (1,1),
// (0,2), (1,2), (2,2), ... so that placing one more vertex appends a
// contiguous block. Entries are at most 3, stored as digit characters.
std::string encode_by_perm(const MultMatrix& m, const std::vector<int>& perm) {
    int V = static_cast<int>(m.size());
    std::string code;
    code.reserve(V * (V + 1) / 2);
    for (int k = 0; k < V; ++k)
        for (int i = 0; i <= k; ++i)
            code.push_back(static_cast<char>('0' + m[perm[i]][perm[k]]));
    return code;
}

// Isomorphism-invariant vertex ranks: vertices are keyed by their loop
// count and sorted row profile, then refined once by the multiset of
// (multiplicity, neighbor key) pairs. Any isomorphism preserves ranks, so
// the canonical search only needs orderings sorted by rank. Hash collisions
// merely coarsen the partition, which stays sound.
std::vector<int> vertex_ranks(const MultMatrix& m) {
    int V = static_cast<int>(m.size());
    std::vector<std::uint64_t> key0(V), key(V);
    std::vector<int> row;
    for (int v = 0; v < V; ++v) {
        row.clear();
        for (int u = 0; u < V; ++u)
            if (u != v) row.push_back(m[v][u]);
        std::sort(row.begin(), row.end());
        std::uint64_t k = static_cast<std::uint64_t>(m[v][v]);
        for (int x : row) k = k * 4 + static_cast<std::uint64_t>(x);
        key0[v] = k;
    }
    std::vector<std::uint64_t> nbr;
    for (int v = 0; v < V; ++v) {
        nbr.clear();
        for (int u = 0; u < V; ++u)
            if (u != v && m[v][u] > 0)
                nbr.push_back(key0[u] * 4 + static_cast<std::uint64_t>(m[v][u]));
        std::sort(nbr.begin(), nbr.end());
        std::uint64_t h = key0[v];
        for (std::uint64_t x : nbr) h = h * 0x100000001b3ULL + x + 1;
        key[v] = h;
    }
    std::vector<std::uint64_t> sorted = key;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> rank(V);
    for (int v = 0; v < V; ++v)
        rank[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), key[v]) - sorted.begin());
    return rank;
}

// Minimum encoding over vertex orderings sorted by invariant rank, built
// position by position with prefix pruning.
std::string min_code(const MultMatrix& m) {
    int V = static_cast<int>(m.size());
    std::vector<int> rank = vertex_ranks(m);
    std::vector<int> identity(V);
    for (int i = 0; i < V; ++i) identity[i] = i;
    std::stable_sort(identity.begin(), identity.end(),
                     [&](int a, int b) { return rank[a] < rank[b]; });
    std::string best = encode_by_perm(m, identity);

    std::vector<int> perm(V, -1);
    std::vector<bool> used(V, false);
    std::string prefix;
    prefix.reserve(best.size());

    auto rec = [&](auto&& self, int k) -> void {
        int want = V * 4;
        for (int v = 0; v < V; ++v)
            if (!used[v] && rank[v] < want) want = rank[v];
        for (int v = 0; v < V; ++v) {
            if (used[v] || rank[v] != want) continue;
            size_t len0 = prefix.size();
            bool worse = false, better = false;
            for (int i = 0; i <= k; ++i) {
                int entry = (i == k) ? m[v][v] : m[perm[i]][v];
                char c = static_cast<char>('0' + entry);
                char b = best[prefix.size()];
                if (!better && c > b) { worse = true; break; }
                if (c < b) better = true;
                prefix.push_back(c);
            }
            if (!worse) {
                used[v] = true;
                perm[k] = v;
                if (better) {
                    // strictly smaller prefix: refresh the bound with some
                    // concrete rank-sorted completion so later comparisons
                    // stay valid
                    std::vector<int> rest;
                    for (int u = 0; u < V; ++u)
                        if (!used[u]) rest.push_back(u);
                    std::stable_sort(rest.begin(), rest.end(),
                                     [&](int a, int b) { return rank[a] < rank[b]; });
                    std::vector<int> full = perm;
                    std::copy(rest.begin(), rest.end(), full.begin() + k + 1);
                    best = encode_by_perm(m, full);
                }
                if (k + 1 < V) self(self, k + 1);
                perm[k] = -1;
                used[v] = false;
            }
            prefix.resize(len0);
        }
    };
    rec(rec, 0);
    return best;
}

// Deterministic half-edge realization of a multiplicity matrix: vertex v
// owns half-edges 3v..3v+2; loops are glued first, then cross edges in
// row-major order of the upper triangle.
TrivalentGraph graph_from_matrix(const MultMatrix& m) {
    int V = static_cast<int>(m.size());
    TrivalentGraph g;
    g.involution.assign(3 * V, -1);
    g.vertex_of.resize(3 * V);
    for (int v = 0; v < V; ++v)
        for (int s = 0; s < 3; ++s) g.vertex_of[3 * v + s] = v;

    std::vector<int> next_slot(V, 0);
    auto take = [&](int v) { return 3 * v + next_slot[v]++; };
    for (int i = 0; i < V; ++i) {
        for (int l = 0; l < m[i][i] / 2; ++l) {
            int a = take(i), b = take(i);
            g.involution[a] = b;
            g.involution[b] = a;
        }
        for (int j = i + 1; j < V; ++j) {
            for (int c = 0; c < m[i][j]; ++c) {
                int a = take(i), b = take(j);
                g.involution[a] = b;
                g.involution[b] = a;
            }
        }
    }
    return g;
}

bool matrix_connected(const MultMatrix& m) {
    int V = static_cast<int>(m.size());
    std::vector<bool> seen(V, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u = 0; u < V; ++u) {
            if (u != v && m[v][u] > 0 && !seen[u]) {
                seen[u] = true;
                ++count;
                stack.push_back(u);
            }
        }
    }
    return count == V;
}

} // namespace

int TrivalentGraph::num_vertices() const {
    int v = -1;
    for (int x : vertex_of) v = std::max(v, x);
    return v + 1;
}

std::vector<std::pair<int, int>> TrivalentGraph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(num_edges());
    for (int h = 0; h < num_half_edges(); ++h)
        if (h < involution[h]) out.emplace_back(h, involution[h]);
    return out;
}

int TrivalentGraph::edge_of_half(int h) const {
    int lead = std::min(h, involution[h]);
    int id = 0;
    for (int k = 0; k < lead; ++k)
        if (k < involution[k]) ++id;
    return id;
}

bool TrivalentGraph::is_connected() const {
    if (vertex_of.empty()) return false;
    int V = num_vertices();
    std::vector<bool> seen(V, false);
    std::vector<int> stack{vertex_of[0]};
    seen[vertex_of[0]] = true;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int h = 0; h < num_half_edges(); ++h) {
            if (vertex_of[h] != v) continue;
            int u = vertex_of[involution[h]];
            if (!seen[u]) {
                seen[u] = true;
                ++count;
                stack.push_back(u);
            }
        }
    }
    return count == V;
}

void TrivalentGraph::validate() const {
    int H = num_half_edges();
    if (H == 0 || H % 6 != 0 || vertex_of.size() != involution.size())
        throw std::invalid_argument("graph: half-edge count must be a positive multiple of 6");
    for (int h = 0; h < H; ++h) {
        int p = involution[h];
        if (p < 0 || p >= H || p == h || involution[p] != h)
            throw std::invalid_argument("graph: involution is not a fixed-point-free pairing");
        if (vertex_of[h] < 0 || vertex_of[h] >= H / 3)
            throw std::invalid_argument("graph: half-edge assigned to an out-of-range vertex");
    }
    std::vector<int> deg(H / 3, 0);
    for (int h = 0; h < H; ++h) ++deg[vertex_of[h]];
    for (int d : deg)
        if (d != 3) throw std::invalid_argument("graph: every vertex must have exactly 3 half-edges");
    if (!is_connected()) throw std::invalid_argument("graph: must be connected");
}

std::string TrivalentGraph::canonical_code() const {
    return min_code(mult_matrix(*this));
}

TrivalentGraph TrivalentGraph::theta() {
    TrivalentGraph g;
    g.involution = {3, 4, 5, 0, 1, 2};
    g.vertex_of = {0, 0, 0, 1, 1, 1};
    return g;
}

TrivalentGraph TrivalentGraph::dumbbell() {
    TrivalentGraph g;
    g.involution = {1, 0, 3, 2, 5, 4};
    g.vertex_of = {0, 0, 0, 1, 1, 1};
    return g;
}

int edge_count(int n) {
    if (n <= 1) throw std::domain_error("edge_count: requires n > 1");
    return 3 * (n - 1);
}

std::vector<TrivalentGraph> enumerate_n_graphs(int n) {
    if (n < 2 || n > 5) throw std::domain_error("enumerate_n_graphs: supported range is 2 <= n <= 5");
    int V = 2 * (n - 1);

    // Backtracking over symmetric multiplicity matrices with row sums 3,
    // filling the upper triangle row by row; diagonal entries are even.
    std::map<std::string, MultMatrix> canon;
    MultMatrix m(V, std::vector<int>(V, 0));
    std::vector<int> remaining(V, 3);

    auto place = [&](auto&& self, int i, int j) -> void {
        if (i == V) {
            // only canonicalize labeled matrices whose vertices already sit
            // in rank order; every isomorphism class has one of those, and
            // this skips the expensive search for the vast majority
            std::vector<int> rank = vertex_ranks(m);
            if (!std::is_sorted(rank.begin(), rank.end())) return;
            if (matrix_connected(m)) {
                std::string code = min_code(m);
                canon.emplace(std::move(code), m);
            }
            return;
        }
        if (j == V) {
            if (remaining[i] == 0) self(self, i + 1, i + 1);
            return;
        }
        if (i == j) {
            for (int d = 0; d <= remaining[i]; d += 2) {
                m[i][i] = d;
                remaining[i] -= d;
                self(self, i, j + 1);
                remaining[i] += d;
            }
            m[i][i] = 0;
            return;
        }
        int cap = std::min(remaining[i], remaining[j]);
        for (int c = 0; c <= cap; ++c) {
            m[i][j] = m[j][i] = c;
            remaining[i] -= c;
            remaining[j] -= c;
            self(self, i, j + 1);
            remaining[i] += c;
            remaining[j] += c;
        }
        m[i][j] = m[j][i] = 0;
    };
    place(place, 0, 0);

    std::vector<TrivalentGraph> out;
    out.reserve(canon.size());
    for (const auto& [code, mat] : canon) out.push_back(graph_from_matrix(mat));
    return out;
}

int path_start_vertex(const TrivalentGraph& g, const DirectedEdge& s) {
    auto e = g.edges().at(static_cast<size_t>(s.edge));
    return g.vertex_of[s.forward ? e.first : e.second];
}

int path_end_vertex(const TrivalentGraph& g, const DirectedEdge& s) {
    auto e = g.edges().at(static_cast<size_t>(s.edge));
    return g.vertex_of[s.forward ? e.second : e.first];
}

bool path_is_closed(const TrivalentGraph& g, const DirectedEdgePath& p) {
    if (p.steps.empty()) return false;
    size_t k = p.steps.size();
    for (size_t i = 0; i < k; ++i)
        if (path_end_vertex(g, p.steps[i]) != path_start_vertex(g, p.steps[(i + 1) % k]))
            return false;
    return true;
}

bool path_is_reduced(const TrivalentGraph& g, const DirectedEdgePath& p) {
    (void)g;
    size_t k = p.steps.size();
    if (k == 0) return false;
    for (size_t i = 0; i < k; ++i) {
        const DirectedEdge& a = p.steps[i];
        const DirectedEdge& b = p.steps[(i + 1) % k];
        if (k == 1) break; // a single loop traversal has no successor pair
        if (a.edge == b.edge && a.forward != b.forward) return false;
    }
    return true;
}

GirthResult girth_length(const TrivalentGraph& g, const LengthAssignment& w) {
    g.validate();
    auto edge_list = g.edges();
    int E = static_cast<int>(edge_list.size());
    if (static_cast<int>(w.length.size()) != E)
        throw std::invalid_argument("girth_length: length assignment does not match edge count");
    for (double l : w.length)
        if (!(l > 0)) throw std::invalid_argument("girth_length: lengths must be positive");

    int V = g.num_vertices();
    // half-edges at each vertex
    std::vector<std::vector<int>> at(V);
    for (int h = 0; h < g.num_half_edges(); ++h) at[g.vertex_of[h]].push_back(h);

    GirthResult best;
    best.length = -1;

    auto consider = [&](double len, const std::vector<int>& cyc) {
        if (best.length < 0 || len < best.length) {
            best.length = len;
            best.cycle_edges = cyc;
        }
    };

    // 1-edge loops
    for (int e = 0; e < E; ++e) {
        auto [h1, h2] = edge_list[e];
        if (g.vertex_of[h1] == g.vertex_of[h2]) consider(w.length[e], {e});
    }

    // cycles of length >= 2: DFS over simple paths whose minimal vertex is
    // the start, skipping loop edges (handled above)
    std::vector<bool> vertex_used(V, false);
    std::vector<bool> edge_used(E, false);
    std::vector<int> path_edges;

    auto dfs = [&](auto&& self, int start, int v, double len) -> void {
        for (int h : at[v]) {
            int e = g.edge_of_half(h);
            if (edge_used[e]) continue;
            int u = g.vertex_of[g.involution[h]];
            if (u == v) continue; // loop
            if (u == start) {
                if (path_edges.size() >= 1) {
                    path_edges.push_back(e);
                    consider(len + w.length[e], path_edges);
                    path_edges.pop_back();
                }
                continue;
            }
            if (u < start || vertex_used[u]) continue;
            vertex_used[u] = true;
            edge_used[e] = true;
            path_edges.push_back(e);
            self(self, start, u, len + w.length[e]);
            path_edges.pop_back();
            edge_used[e] = false;
            vertex_used[u] = false;
        }
    };

    for (int s = 0; s < V; ++s) {
        vertex_used[s] = true;
        dfs(dfs, s, s, 0.0);
        vertex_used[s] = false;
    }
    return best;
}

WindowCheckResult window_long_edge_check(const TrivalentGraph& g, const LengthAssignment& w,
                                         const DirectedEdgePath& path, int n,
                                         double girth_bound) {
    int W = edge_count(n);
    if (path.steps.empty() || !path_is_closed(g, path))
        throw std::invalid_argument("window_long_edge_check: path must be closed");
    if (!path_is_reduced(g, path))
        throw std::invalid_argument("window_long_edge_check: path must be reduced");
    for (const DirectedEdge& s : path.steps)
        if (s.edge < 0 || s.edge >= g.num_edges())
            throw std::invalid_argument("window_long_edge_check: path references an unknown edge");

    GirthResult girth = girth_length(g, w);
    if (girth.length < girth_bound - 1e-12)
        throw std::domain_error("window_long_edge_check: girth is below the stated bound");

    double threshold = girth_bound / W;
    int k = static_cast<int>(path.steps.size());
    for (int s = 0; s < k; ++s) {
        bool found = false;
        for (int i = 0; i < W; ++i) {
            if (w.length[path.steps[(s + i) % k].edge] >= threshold - 1e-12) {
                found = true;
                break;
            }
        }
        if (!found) return {false, s};
    }
    return {true, -1};
}

DirectedEdgePath random_reduced_closed_path(const TrivalentGraph& g, int k, std::uint64_t seed) {
    g.validate();
    if (k < 1) throw std::domain_error("random_reduced_closed_path: k must be >= 1");

    int V = g.num_vertices();
    auto edge_list = g.edges();
    // directed edges leaving each vertex; a loop contributes both directions
    std::vector<std::vector<DirectedEdge>> out(V);
    for (int e = 0; e < static_cast<int>(edge_list.size()); ++e) {
        auto [h1, h2] = edge_list[e];
        out[g.vertex_of[h1]].push_back({e, true});
        out[g.vertex_of[h2]].push_back({e, false});
    }

    if (k == 1) {
        bool has_loop = false;
        for (auto [h1, h2] : edge_list)
            if (g.vertex_of[h1] == g.vertex_of[h2]) has_loop = true;
        if (!has_loop)
            throw std::domain_error("random_reduced_closed_path: k=1 needs a loop edge");
    }

    Rng rng(seed);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        DirectedEdgePath p;
        int start = rng.uniform_int(V);
        int v = start;
        bool dead = false;
        for (int i = 0; i < k; ++i) {
            std::vector<DirectedEdge> options;
            for (const DirectedEdge& d : out[v]) {
                if (i > 0) {
                    const DirectedEdge& prev = p.steps.back();
                    if (d.edge == prev.edge && d.forward != prev.forward) continue;
                }
                options.push_back(d);
            }
            if (options.empty()) {
                dead = true;
                break;
            }
            DirectedEdge pick = options[rng.uniform_int(static_cast<int>(options.size()))];
            p.steps.push_back(pick);
            v = path_end_vertex(g, pick);
        }
        if (dead || v != start) continue;
        if (path_is_reduced(g, p)) return p;
    }
    throw std::domain_error("random_reduced_closed_path: no reduced closed path of this length found");
}

} // namespace h3bound
