#include "h3bound/steiner.hpp"

#include <algorithm>
#include <cmath>

namespace h3bound {

namespace {

// Below this an edge counts as collapsed. The Lorentz product between
// near-coincident points carries absolute noise of a few 1e-15 at moderate
// radius, so directions are only trustworthy when cosh(d) - 1 ~ d^2/2
// clears that floor comfortably; 1e-6 leaves three digits of margin.
constexpr double kMergedEdge = 1e-6;

std::vector<std::vector<int>> incidence(const CarrierConfig& c) {
    std::vector<std::vector<int>> inc(c.num_vertices());
    for (int e = 0; e < static_cast<int>(c.edges.size()); ++e) {
        inc[c.edges[e].first].push_back(e);
        if (c.edges[e].second != c.edges[e].first) inc[c.edges[e].second].push_back(e);
    }
    return inc;
}

int other_end(const CarrierConfig& c, int e, int v) {
    return c.edges[e].first == v ? c.edges[e].second : c.edges[e].first;
}

double tangent_dot(const Vec4& a, const Vec4& b) { return ldot(a, b); }

// Project onto the tangent space at p and normalize; summed unit tangents
// pick up enough rounding noise to fail exp_map's validation otherwise.
Vec4 unit_tangent_at(const HPoint& p, const Vec4& u) {
    Vec4 w = u + p.lift() * ldot(u, p.lift());
    double n2 = ldot(w, w);
    return w * (1.0 / std::sqrt(n2));
}

// Golden-section minimum of f on [0, hi]; f need only be unimodal.
template <class F>
double golden_min(F&& f, double hi, int iters = 120) {
    const double inv_phi = 0.6180339887498949;
    double a = 0, b = hi;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && b - a > 1e-14 * (1 + hi); ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

void CarrierConfig::validate() const {
    int V = num_vertices();
    if (V == 0) throw std::invalid_argument("carrier: no vertices");
    if (static_cast<int>(pinned.size()) != V)
        throw std::invalid_argument("carrier: pinned flags must cover every vertex");
    std::vector<int> deg(V, 0);
    for (auto [a, b] : edges) {
        if (a < 0 || a >= V || b < 0 || b >= V)
            throw std::invalid_argument("carrier: edge endpoint out of range");
        deg[a] += 1;
        deg[b] += 1;
    }
    for (int v = 0; v < V; ++v)
        if (!pinned[v] && deg[v] != 3)
            throw std::invalid_argument("carrier: free vertices must be trivalent");
}

CarrierConfig CarrierConfig::from_graph(const TrivalentGraph& g, std::vector<HPoint> positions) {
    g.validate();
    if (static_cast<int>(positions.size()) != g.num_vertices())
        throw std::invalid_argument("carrier: one position per vertex required");
    CarrierConfig c;
    for (auto [h1, h2] : g.edges())
        c.edges.emplace_back(g.vertex_of[h1], g.vertex_of[h2]);
    c.positions = std::move(positions);
    c.pinned.assign(c.positions.size(), false);
    return c;
}

double total_length(const CarrierConfig& c) {
    double sum = 0;
    for (auto [a, b] : c.edges) sum += dist(c.positions[a], c.positions[b]);
    return sum;
}

LengthAssignment edge_lengths(const CarrierConfig& c) {
    LengthAssignment w;
    w.length.reserve(c.edges.size());
    for (auto [a, b] : c.edges) w.length.push_back(dist(c.positions[a], c.positions[b]));
    return w;
}

CarrierConfig optimize(const CarrierConfig& input, const OptimizeOptions& opt) {
    input.validate();
    if (!(opt.tol > 0)) throw std::invalid_argument("optimize: tol must be positive");
    bool any_free = false;
    for (bool p : input.pinned) any_free |= !p;
    if (!any_free) throw std::invalid_argument("optimize: no free vertex");

    CarrierConfig c = input;
    auto inc = incidence(c);
    double current = total_length(c);
    if (opt.trace) opt.trace->push_back(current);

    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        bool all_stationary = true;
        bool moved = false;
        for (int v = 0; v < c.num_vertices(); ++v) {
            if (c.pinned[v]) continue;
            const HPoint& p = c.positions[v];

            // unit directions toward neighbors over non-collapsed edges; a
            // collapsed edge switches the test to the subgradient criterion
            Vec4 usum{0, 0, 0, 0};
            bool collapsed = false;
            double smooth = 0; // curvature bound over the clean edges
            for (int e : inc[v]) {
                int w = other_end(c, e, v);
                if (w == v) continue;
                double d = dist(p, c.positions[w]);
                if (d < kMergedEdge) {
                    collapsed = true;
                    continue;
                }
                usum = usum + log_direction(p, c.positions[w]);
                smooth += 1.0 / std::tanh(d);
            }
            double g = std::sqrt(std::max(0.0, tangent_dot(usum, usum)));
            if (collapsed ? (g <= 1.0 + opt.tol) : (g < opt.tol)) continue;
            all_stationary = false;

            Vec4 dir = unit_tangent_at(p, usum);
            auto local = [&](double t) {
                HPoint q = exp_map(p, dir, t);
                double s = 0;
                for (int e : inc[v]) {
                    int w = other_end(c, e, v);
                    if (w == v) continue;
                    s += dist(q, c.positions[w]);
                }
                return s;
            };
            double f0 = local(0);
            double tstar = golden_min(local, std::min(2.0, f0 + 0.1));
            double fstar = local(tstar);
            if (fstar < f0 - 1e-13 * (1.0 + f0)) {
                c.positions[v] = exp_map(p, dir, tstar);
                current += fstar - f0;
                moved = true;
            } else if (!collapsed) {
                // improvement below the resolution of the objective: take
                // the analytic step g/L (L-smooth descent, guaranteed not
                // to increase the exact length), so the gradient criterion
                // can still be driven under tol
                double t = g / std::max(smooth, 1e-12);
                double fnew = local(t);
                c.positions[v] = exp_map(p, dir, t);
                current += fnew - f0;
                moved = true;
            }
            if (opt.trace && moved) opt.trace->push_back(current);
        }
        if (all_stationary) return c;
        if (!moved) break; // stuck below line-search resolution
    }
    // re-test stationarity once before giving up: a stuck sweep may simply
    // mean the criterion holds at a slightly looser scale
    throw ConvergenceError(c);
}

YReport y_report(const CarrierConfig& c, double min_edge) {
    c.validate();
    auto inc = incidence(c);
    YReport rep;
    for (int v = 0; v < c.num_vertices(); ++v) {
        if (c.pinned[v]) continue;
        const HPoint& p = c.positions[v];
        std::vector<Vec4> dirs;
        for (int e : inc[v]) {
            int w = other_end(c, e, v);
            double d = (w == v) ? 0.0 : dist(p, c.positions[w]);
            if (d < min_edge)
                throw std::domain_error(
                    "y_report: zero-length incident edge; run zero_edge_repair first");
            dirs.push_back(log_direction(p, c.positions[w]));
        }
        VertexAngleReport r;
        r.vertex = v;
        int k = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                double cosang = std::clamp(tangent_dot(dirs[i], dirs[j]), -1.0, 1.0);
                r.angles[k++] = std::acos(cosang);
            }
        r.angle_sum = r.angles[0] + r.angles[1] + r.angles[2];

        // distance of the third direction from the plane of the first two,
        // via Gram-Schmidt in the (positive definite) tangent space
        Vec4 e1 = dirs[0];
        Vec4 e2 = dirs[1] - e1 * tangent_dot(dirs[1], e1);
        double n2 = tangent_dot(e2, e2);
        Vec4 resid = dirs[2] - e1 * tangent_dot(dirs[2], e1);
        if (n2 > 1e-20) {
            e2 = e2 * (1.0 / std::sqrt(n2));
            resid = resid - e2 * tangent_dot(resid, e2);
        }
        r.coplanarity_residual = std::sqrt(std::max(0.0, tangent_dot(resid, resid)));
        rep.vertices.push_back(r);
    }
    return rep;
}

CornerShortcut corner_shortcut(double c_len, double gamma) {
    if (!(c_len > 0)) throw std::domain_error("corner_shortcut: arm length must be positive");
    if (!(gamma > 0) || !(gamma < 3.141592653589793))
        throw std::domain_error("corner_shortcut: angle must lie in (0, pi)");

    // side(t): distance from the cut point (depth c_len along an arm) to a
    // point at depth t on the bisector, by the hyperbolic law of cosines
    double ch = std::cosh(c_len), sh = std::sinh(c_len), cg = std::cos(gamma / 2);
    auto new_len = [&](double t) {
        double cosh_side = ch * std::cosh(t) - sh * std::sinh(t) * cg;
        return t + 2.0 * std::acosh(std::max(1.0, cosh_side));
    };
    double tstar = golden_min(new_len, c_len, 200);
    CornerShortcut out;
    // the corner itself (t = 0) is always admissible, so the gain is never
    // negative; report 0 when no interior cut improves
    if (new_len(tstar) < 2.0 * c_len) {
        out.depth = tstar;
        out.gain = 2.0 * c_len - new_len(tstar);
        out.side_length = (new_len(tstar) - tstar) / 2.0;
    } else {
        out.depth = 0;
        out.gain = 0;
        out.side_length = c_len;
    }
    return out;
}

RepairResult zero_edge_repair(const CarrierConfig& input, double tol) {
    input.validate();
    auto inc = incidence(input);

    int bad = -1;
    for (int e = 0; e < static_cast<int>(input.edges.size()); ++e) {
        auto [u, v] = input.edges[e];
        if (u == v || input.pinned[u] || input.pinned[v]) continue;
        if (dist(input.positions[u], input.positions[v]) < tol) {
            bad = e;
            break;
        }
    }
    if (bad < 0) return {input, false};

    auto [u, v] = input.edges[bad];
    // outer edges: the other two at each endpoint, as (edge id, endpoint)
    std::vector<std::pair<int, int>> outer;
    for (int e : inc[u])
        if (e != bad) outer.emplace_back(e, u);
    for (int e : inc[v])
        if (e != bad) outer.emplace_back(e, v);
    if (outer.size() != 4)
        throw std::invalid_argument("zero_edge_repair: collapsed edge endpoints must be trivalent");

    // all three ways to split the four outer edges between u and v; index
    // pairs give the edges assigned to u
    const int splits[3][2] = {{0, 1}, {0, 2}, {0, 3}};
    CarrierConfig best;
    double best_len = -1;
    for (const auto& s : splits) {
        CarrierConfig cand = input;
        for (int i = 0; i < 4; ++i) {
            int want = (i == s[0] || i == s[1]) ? u : v;
            auto [e, old_end] = outer[i];
            if (cand.edges[e].first == old_end && cand.edges[e].second == old_end) continue;
            if (cand.edges[e].first == old_end) cand.edges[e].first = want;
            else cand.edges[e].second = want;
        }
        // nudge the pair apart so directions are well defined again
        auto nudge = [&](int vert) {
            Vec4 dsum{0, 0, 0, 0};
            for (int e : inc[vert]) {
                // use original incidence for the pull direction; only the
                // endpoints far from the collapse matter
                int w = other_end(input, e, vert);
                if (w == vert) continue;
                double d = dist(input.positions[vert], input.positions[w]);
                if (d > 10 * tol) dsum = dsum + log_direction(input.positions[vert], input.positions[w]);
            }
            double n = std::sqrt(std::max(0.0, ldot(dsum, dsum)));
            if (n > 1e-12)
                cand.positions[vert] =
                    exp_map(input.positions[vert], unit_tangent_at(input.positions[vert], dsum), 1e-3);
        };
        nudge(u);
        nudge(v);
        CarrierConfig opt;
        try {
            opt = optimize(cand);
        } catch (const ConvergenceError& err) {
            opt = err.best;
        }
        double len = total_length(opt);
        if (best_len < 0 || len < best_len) {
            best_len = len;
            best = opt;
        }
    }

    // guarantee the postcondition even if every candidate stalled
    if (best_len > total_length(input)) return {input, true};
    return {best, true};
}

} // namespace h3bound
