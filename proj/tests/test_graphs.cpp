#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "h3bound/graphs.hpp"
#include "h3bound/rng.hpp"

using namespace h3bound;

namespace {

// Oracle: every trivalent graph on V labeled vertices as a perfect matching
// of the 3V half-edges (half-edge h lives at vertex h/3). Returns the set of
// canonical codes of the connected ones. Independent of the enumerator's
// multiplicity-matrix backtracking.
std::set<std::string> pairing_oracle_codes(int V) {
    std::set<std::string> codes;
    int H = 3 * V;
    std::vector<int> partner(H, -1);

    auto rec = [&](auto&& self) -> void {
        int h = 0;
        while (h < H && partner[h] >= 0) ++h;
        if (h == H) {
            TrivalentGraph g;
            g.involution = partner;
            g.vertex_of.resize(H);
            for (int i = 0; i < H; ++i) g.vertex_of[i] = i / 3;
            if (g.is_connected()) codes.insert(g.canonical_code());
            return;
        }
        for (int j = h + 1; j < H; ++j) {
            if (partner[j] >= 0) continue;
            partner[h] = j;
            partner[j] = h;
            self(self);
            partner[h] = -1;
            partner[j] = -1;
        }
    };
    rec(rec);
    return codes;
}

// Oracle: girth by scanning all edge subsets for single simple cycles
// (subset connected, every touched vertex of degree exactly 2, loops
// counting twice at their vertex).
GirthResult girth_by_subsets(const TrivalentGraph& g, const LengthAssignment& w) {
    auto edge_list = g.edges();
    int E = static_cast<int>(edge_list.size());
    int V = g.num_vertices();
    GirthResult best;
    best.length = -1;
    for (int mask = 1; mask < (1 << E); ++mask) {
        std::vector<int> deg(V, 0);
        double total = 0;
        std::vector<int> members;
        for (int e = 0; e < E; ++e) {
            if (!(mask & (1 << e))) continue;
            deg[g.vertex_of[edge_list[e].first]] += 1;
            deg[g.vertex_of[edge_list[e].second]] += 1;
            total += w.length[e];
            members.push_back(e);
        }
        bool ok = true;
        for (int v = 0; v < V; ++v)
            if (deg[v] != 0 && deg[v] != 2) ok = false;
        if (!ok) continue;
        // connectivity over the touched vertices via the chosen edges
        std::vector<int> comp(V, -1);
        std::vector<int> stack;
        int root = g.vertex_of[edge_list[members[0]].first];
        comp[root] = 0;
        stack.push_back(root);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int e : members) {
                int a = g.vertex_of[edge_list[e].first], b = g.vertex_of[edge_list[e].second];
                int u = -1;
                if (a == v) u = b;
                else if (b == v) u = a;
                if (u >= 0 && comp[u] < 0) {
                    comp[u] = 0;
                    stack.push_back(u);
                }
            }
        }
        for (int v = 0; v < V; ++v)
            if (deg[v] > 0 && comp[v] < 0) ok = false;
        if (!ok) continue;
        if (best.length < 0 || total < best.length) {
            best.length = total;
            best.cycle_edges = members;
        }
    }
    return best;
}

// Every reduced closed path with up to max_len steps, by direct walk.
std::vector<DirectedEdgePath> all_reduced_closed_paths(const TrivalentGraph& g, int max_len) {
    int V = g.num_vertices();
    auto edge_list = g.edges();
    std::vector<std::vector<DirectedEdge>> out(V);
    for (int e = 0; e < static_cast<int>(edge_list.size()); ++e) {
        out[g.vertex_of[edge_list[e].first]].push_back({e, true});
        out[g.vertex_of[edge_list[e].second]].push_back({e, false});
    }
    std::vector<DirectedEdgePath> found;
    DirectedEdgePath p;
    auto rec = [&](auto&& self, int start, int v) -> void {
        if (static_cast<int>(p.steps.size()) == max_len) return;
        for (const DirectedEdge& d : out[v]) {
            if (!p.steps.empty()) {
                const DirectedEdge& prev = p.steps.back();
                if (d.edge == prev.edge && d.forward != prev.forward) continue;
            }
            p.steps.push_back(d);
            int u = path_end_vertex(g, d);
            if (u == start && path_is_reduced(g, p)) found.push_back(p);
            self(self, start, u);
            p.steps.pop_back();
        }
    };
    for (int s = 0; s < V; ++s) rec(rec, s, s);
    return found;
}

// Scrambled isomorphic copy: permuted vertices, shuffled slots within each
// vertex. Used to probe canonical-code stability.
TrivalentGraph relabel(const TrivalentGraph& g, Rng& rng) {
    int V = g.num_vertices();
    int H = g.num_half_edges();
    std::vector<int> vperm(V);
    for (int i = 0; i < V; ++i) vperm[i] = i;
    for (int i = V - 1; i > 0; --i) std::swap(vperm[i], vperm[rng.uniform_int(i + 1)]);

    // map old half-edge -> new half-edge: vertex goes to vperm[v], and the
    // three slots at each vertex are shuffled
    std::vector<int> hmap(H);
    std::vector<std::vector<int>> at(V);
    for (int h = 0; h < H; ++h) at[g.vertex_of[h]].push_back(h);
    for (int v = 0; v < V; ++v) {
        std::vector<int> slots{0, 1, 2};
        for (int i = 2; i > 0; --i) std::swap(slots[i], slots[rng.uniform_int(i + 1)]);
        for (int s = 0; s < 3; ++s) hmap[at[v][s]] = 3 * vperm[v] + slots[s];
    }
    TrivalentGraph out;
    out.involution.resize(H);
    out.vertex_of.resize(H);
    for (int h = 0; h < H; ++h) {
        out.involution[hmap[h]] = hmap[g.involution[h]];
        out.vertex_of[hmap[h]] = g.vertex_of[h];
    }
    for (int h = 0; h < H; ++h) out.vertex_of[h] = h / 3;
    return out;
}

TrivalentGraph make_k4() {
    TrivalentGraph g;
    g.involution = {3, 6, 9, 0, 7, 10, 1, 4, 11, 2, 5, 8};
    g.vertex_of = {0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3};
    return g;
}

} // namespace

TEST_CASE("edge_count basics") {
    CHECK(edge_count(2) == 3);
    CHECK(edge_count(3) == 6);
    CHECK(edge_count(5) == 12);
    CHECK_THROWS_AS(edge_count(1), std::domain_error);
    CHECK_THROWS_AS(edge_count(0), std::domain_error);
}

TEST_CASE("builtin graphs validate") {
    TrivalentGraph t = TrivalentGraph::theta();
    TrivalentGraph d = TrivalentGraph::dumbbell();
    t.validate();
    d.validate();
    CHECK(t.num_vertices() == 2);
    CHECK(t.num_edges() == 3);
    CHECK(t.rank() == 2);
    CHECK(d.rank() == 2);
    CHECK(t.canonical_code() != d.canonical_code());
}

TEST_CASE("validate rejects malformed graphs") {
    TrivalentGraph g = TrivalentGraph::theta();
    g.involution[0] = 0; // fixed point
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);

    TrivalentGraph h;
    h.involution = {1, 0, 3, 2, 5, 4, 7, 6, 9, 8, 11, 10};
    h.vertex_of = {0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3};
    CHECK(!h.is_connected()); // two disjoint dumbbell-less pieces
    CHECK_THROWS_AS(h.validate(), std::invalid_argument);
}

TEST_CASE("enumerate_n_graphs n=2 gives theta and dumbbell") {
    auto graphs = enumerate_n_graphs(2);
    REQUIRE(graphs.size() == 2);
    std::set<std::string> codes;
    for (const auto& g : graphs) {
        g.validate();
        CHECK(g.rank() == 2);
        codes.insert(g.canonical_code());
    }
    CHECK(codes.count(TrivalentGraph::theta().canonical_code()) == 1);
    CHECK(codes.count(TrivalentGraph::dumbbell().canonical_code()) == 1);
}

TEST_CASE("enumerate_n_graphs matches half-edge pairing oracle for n=2,3") {
    for (int n = 2; n <= 3; ++n) {
        auto graphs = enumerate_n_graphs(n);
        std::set<std::string> got;
        for (const auto& g : graphs) got.insert(g.canonical_code());
        CHECK(got.size() == graphs.size());
        CHECK(got == pairing_oracle_codes(2 * (n - 1)));
    }
}

TEST_CASE("enumerate_n_graphs n=3 regression count and shape") {
    auto graphs = enumerate_n_graphs(3);
    CHECK(graphs.size() == 5);
    for (const auto& g : graphs) {
        CHECK(g.num_vertices() == 4);
        CHECK(g.num_edges() == 6);
    }
}

TEST_CASE("enumeration invariants across the supported range") {
    std::vector<size_t> counts;
    for (int n = 2; n <= 5; ++n) {
        auto graphs = enumerate_n_graphs(n);
        counts.push_back(graphs.size());
        std::vector<std::string> codes;
        for (const auto& g : graphs) {
            g.validate();
            CHECK(2 * g.num_edges() == 3 * g.num_vertices());
            CHECK(g.num_vertices() - g.num_edges() == 1 - n); // Euler characteristic
            CHECK(g.num_edges() == edge_count(n));
            codes.push_back(g.canonical_code());
        }
        CHECK(std::is_sorted(codes.begin(), codes.end()));
        CHECK(std::adjacent_find(codes.begin(), codes.end()) == codes.end());
    }
    CHECK(counts[0] == 2);
    CHECK(counts[1] == 5);
    // frozen regression values for the larger ranks
    CHECK(counts[2] == 17);
    CHECK(counts[3] == 71);
    CHECK_THROWS_AS(enumerate_n_graphs(1), std::domain_error);
    CHECK_THROWS_AS(enumerate_n_graphs(6), std::domain_error);
}

TEST_CASE("canonical code is stable under relabeling") {
    Rng rng(404);
    for (int n = 2; n <= 4; ++n) {
        for (const auto& g : enumerate_n_graphs(n)) {
            std::string code = g.canonical_code();
            for (int trial = 0; trial < 20; ++trial) {
                TrivalentGraph h = relabel(g, rng);
                h.validate();
                CHECK(h.canonical_code() == code);
            }
        }
    }
}

TEST_CASE("path closed and reduced predicates") {
    TrivalentGraph t = TrivalentGraph::theta();
    DirectedEdgePath bigon{{{0, true}, {1, false}}};
    CHECK(path_is_closed(t, bigon));
    CHECK(path_is_reduced(t, bigon));

    DirectedEdgePath backtrack{{{0, true}, {0, false}}};
    CHECK(path_is_closed(t, backtrack));
    CHECK(!path_is_reduced(t, backtrack));

    // backtrack only across the closing point
    DirectedEdgePath wrap{{{0, true}, {1, false}, {1, true}, {0, false}}};
    CHECK(path_is_closed(t, wrap));
    CHECK(!path_is_reduced(t, wrap));

    DirectedEdgePath open{{{0, true}}};
    CHECK(!path_is_closed(t, open));

    TrivalentGraph d = TrivalentGraph::dumbbell();
    DirectedEdgePath loop{{{0, true}}};
    CHECK(path_is_closed(d, loop));
    CHECK(path_is_reduced(d, loop));
    DirectedEdgePath loop_twice{{{0, true}, {0, true}}};
    CHECK(path_is_closed(d, loop_twice));
    CHECK(path_is_reduced(d, loop_twice));
}

TEST_CASE("girth examples") {
    TrivalentGraph t = TrivalentGraph::theta();
    GirthResult g1 = girth_length(t, {{1, 1, 1}});
    CHECK(g1.length == 2.0);
    CHECK(g1.cycle_edges.size() == 2);

    // dumbbell edges: 0 = loop at vertex 0, 1 = bar, 2 = loop at vertex 1
    TrivalentGraph d = TrivalentGraph::dumbbell();
    GirthResult g2 = girth_length(d, {{1, 2, 5}});
    CHECK(g2.length == 1.0);
    REQUIRE(g2.cycle_edges.size() == 1);
    CHECK(g2.cycle_edges[0] == 0);

    CHECK_THROWS_AS(girth_length(t, {{1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(girth_length(t, {{1, 1, -1}}), std::invalid_argument);
}

TEST_CASE("girth matches edge-subset oracle on all small graphs") {
    Rng rng(77);
    for (int n = 2; n <= 4; ++n) {
        for (const auto& g : enumerate_n_graphs(n)) {
            for (int trial = 0; trial < 50; ++trial) {
                LengthAssignment w;
                for (int e = 0; e < g.num_edges(); ++e)
                    w.length.push_back(rng.uniform(0.05, 4.0));
                GirthResult mine = girth_length(g, w);
                GirthResult ref = girth_by_subsets(g, w);
                CHECK(mine.length == doctest::Approx(ref.length).epsilon(1e-12));
                // witness really is a cycle of the reported length
                double total = 0;
                for (int e : mine.cycle_edges) total += w.length[e];
                CHECK(total == doctest::Approx(mine.length).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("window check: theta example passes") {
    TrivalentGraph t = TrivalentGraph::theta();
    DirectedEdgePath p{{{0, true}, {1, false}}};
    WindowCheckResult r = window_long_edge_check(t, {{1, 1, 1}}, p, 2, 2.0);
    CHECK(r.pass);
    CHECK(r.violating_window_start == -1);
}

TEST_CASE("window check: precondition errors are distinct") {
    TrivalentGraph t = TrivalentGraph::theta();
    LengthAssignment w{{1, 1, 1}};
    DirectedEdgePath bad{{{0, true}, {0, false}}};
    CHECK_THROWS_AS(window_long_edge_check(t, w, bad, 2, 2.0), std::invalid_argument);
    DirectedEdgePath open{{{0, true}}};
    CHECK_THROWS_AS(window_long_edge_check(t, w, open, 2, 2.0), std::invalid_argument);
    DirectedEdgePath good{{{0, true}, {1, false}}};
    CHECK_THROWS_AS(window_long_edge_check(t, w, good, 2, 2.5), std::domain_error);
}

TEST_CASE("window check: violation witness on an oversized graph") {
    // Rank-3 simple graph on 4 vertices checked with windows sized for rank
    // 2: a short 4-edge square with heavy diagonals walks right through the
    // window guarantee, exercising the violation branch.
    TrivalentGraph k4 = make_k4();
    k4.validate();
    CHECK(k4.rank() == 3);
    LengthAssignment w{{0.1, 10, 0.1, 0.1, 10, 0.1}};
    GirthResult g = girth_length(k4, w);
    CHECK(g.length == doctest::Approx(0.4));
    DirectedEdgePath square{{{0, true}, {3, true}, {5, true}, {2, false}}};
    CHECK(path_is_closed(k4, square));
    CHECK(path_is_reduced(k4, square));
    WindowCheckResult r = window_long_edge_check(k4, w, square, 2, 0.4);
    CHECK(!r.pass);
    CHECK(r.violating_window_start == 0);
}

TEST_CASE("window check: exhaustive sweep over rank-2 graphs") {
    Rng rng(505);
    for (const auto& g : enumerate_n_graphs(2)) {
        auto paths = all_reduced_closed_paths(g, 10);
        CHECK(paths.size() > 0);
        for (int trial = 0; trial < 100; ++trial) {
            LengthAssignment w;
            for (int e = 0; e < g.num_edges(); ++e)
                w.length.push_back(rng.uniform(0.05, 4.0));
            double girth = girth_length(g, w).length;
            for (double& l : w.length) l /= girth; // normalize girth to 1
            for (const auto& p : paths) {
                WindowCheckResult r = window_long_edge_check(g, w, p, 2, 1.0);
                CHECK(r.pass);
            }
        }
    }
}

TEST_CASE("window check: exhaustive sweep over rank-3 graphs") {
    Rng rng(606);
    for (const auto& g : enumerate_n_graphs(3)) {
        auto paths = all_reduced_closed_paths(g, 10);
        CHECK(paths.size() > 0);
        for (int trial = 0; trial < 100; ++trial) {
            LengthAssignment w;
            for (int e = 0; e < g.num_edges(); ++e)
                w.length.push_back(rng.uniform(0.05, 4.0));
            double girth = girth_length(g, w).length;
            for (double& l : w.length) l /= girth;
            for (const auto& p : paths) {
                WindowCheckResult r = window_long_edge_check(g, w, p, 3, 1.0);
                CHECK(r.pass);
            }
        }
    }
}

TEST_CASE("random paths: examples and determinism") {
    TrivalentGraph t = TrivalentGraph::theta();
    DirectedEdgePath bigon = random_reduced_closed_path(t, 2, 12345);
    REQUIRE(bigon.steps.size() == 2);
    CHECK(path_is_closed(t, bigon));
    CHECK(path_is_reduced(t, bigon));
    CHECK(bigon.steps[0].edge != bigon.steps[1].edge);

    DirectedEdgePath again = random_reduced_closed_path(t, 2, 12345);
    CHECK(again.steps == bigon.steps);

    TrivalentGraph d = TrivalentGraph::dumbbell();
    DirectedEdgePath loop = random_reduced_closed_path(d, 1, 9);
    CHECK(loop.steps.size() == 1);
    CHECK(path_is_reduced(d, loop));

    CHECK_THROWS_AS(random_reduced_closed_path(t, 1, 9), std::domain_error);
    CHECK_THROWS_AS(random_reduced_closed_path(t, 0, 9), std::domain_error);
    // theta is bipartite: no odd closed path exists at all
    CHECK_THROWS_AS(random_reduced_closed_path(t, 3, 9), std::domain_error);
}

TEST_CASE("random paths: 1000 samples satisfy the predicates") {
    auto graphs2 = enumerate_n_graphs(2);
    auto graphs3 = enumerate_n_graphs(3);
    std::vector<TrivalentGraph> pool(graphs2);
    pool.insert(pool.end(), graphs3.begin(), graphs3.end());
    // feasible lengths differ per graph (bipartite graphs have no odd
    // closed paths, simple graphs no bigons), so sample from what exists
    std::vector<std::vector<int>> feasible(pool.size());
    for (size_t i = 0; i < pool.size(); ++i) {
        std::set<int> ks;
        for (const auto& p : all_reduced_closed_paths(pool[i], 8))
            ks.insert(static_cast<int>(p.steps.size()));
        feasible[i].assign(ks.begin(), ks.end());
        CHECK(!feasible[i].empty());
    }
    Rng rng(808);
    for (int i = 0; i < 1000; ++i) {
        size_t gi = static_cast<size_t>(rng.uniform_int(static_cast<int>(pool.size())));
        const TrivalentGraph& g = pool[gi];
        int k = feasible[gi][rng.uniform_int(static_cast<int>(feasible[gi].size()))];
        DirectedEdgePath p = random_reduced_closed_path(g, k, rng.next_u64());
        CHECK(static_cast<int>(p.steps.size()) == k);
        CHECK(path_is_closed(g, p));
        CHECK(path_is_reduced(g, p));
    }
}
