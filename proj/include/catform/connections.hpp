/*
 * Connections between fixed points and homoclinic cycles.
 *
 * The unstable set of a fixed vertex p is modeled by single exit steps
 * along its strictly descending directions; where such a step's orbit is
 * absorbed defines the connection digraph. Directed cycles in it are the
 * discrete homoclinic cycles.
 *
 * validate_star checks that the closed star of p behaves like a gradient
 * convex neighborhood: (b) each launched orbit visits any single lift of
 * the star in one contiguous block of times, and (c) nothing that leaves
 * the star comes back to a lift of its interior {p} with cumulative drop
 * <= -N. Returns to p that pass near other fixed points are chased
 * through their exit directions, i.e. along connection chains; a chain
 * that closes up can be wound around repeatedly, so it reaches every
 * threshold eventually (the witness records the winding count).
 */
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "catform/flow.hpp"

namespace catform {

struct Connection {
    std::string source, target;
    Rat drop;  // weight of the exit step + witness orbit drop; always < 0
    SignedEdge exit;
    Orbit witness;  // orbit of the exit step's endpoint

    friend bool operator==(const Connection&, const Connection&) = default;
};

/// An exit whose orbit never gets absorbed (descends a recurrent cycle).
struct Escape {
    std::string source;
    SignedEdge exit;
    Orbit witness;
};

struct ConnectionDigraph {
    std::vector<std::string> nodes;  // fixed vertices, ascending
    std::vector<Connection> edges;   // ordered by (source, exit)
    std::vector<Escape> escapes;
};

/// Strictly descending directions out of p, ascending by edge id.
inline std::vector<SignedEdge> exit_directions(const Complex& cx, const OneForm& w,
                                               const std::string& p) {
    require_closed(cx, w, "exit_directions");
    std::vector<SignedEdge> out;
    for (const auto& dir : cx.leaving(p))
        if (signed_weight(w, dir) < 0) out.push_back(dir);
    return out;
}

namespace detail {

inline ConnectionDigraph connections_unchecked(const Complex& cx, const OneForm& w,
                                               const LiftedPotential& pot, const Flow& fl) {
    ConnectionDigraph d;
    d.nodes.assign(fl.fixed.begin(), fl.fixed.end());
    for (const auto& p : d.nodes) {
        for (const auto& exit : exit_directions(cx, w, p)) {
            const CoverPoint off = lift_step(cx, w, pot, CoverPoint{p, Rat(0)}, exit);
            Orbit o = orbit(cx, w, pot, fl, off);
            if (o.absorbed) {
                Connection c{p, o.absorbed_at, signed_weight(w, exit) + o.total_drop(), exit,
                             std::move(o)};
                d.edges.push_back(std::move(c));
            } else {
                d.escapes.push_back(Escape{p, exit, std::move(o)});
            }
        }
    }
    return d;
}

}  // namespace detail

inline ConnectionDigraph connections(const Complex& cx, const OneForm& w, const Flow& fl) {
    require_valid_flow(cx, w, fl, "connections");
    return detail::connections_unchecked(cx, w, potential(cx, w), fl);
}

struct CycleRecord {
    std::vector<std::size_t> edge_index;  // indexes into digraph.edges
    std::vector<std::string> nodes;       // sources, starting at the least node
    Rat total;                            // sum of edge drops

    friend bool operator==(const CycleRecord&, const CycleRecord&) = default;
};

/*
 * All simple directed cycles (self-loops included; parallel connections
 * count separately), each rooted at its least node, sorted ascending by
 * |total drop|. Exhaustive search, guarded by an explicit node budget.
 */
inline std::vector<CycleRecord> homoclinic_cycles(const ConnectionDigraph& d) {
    if (d.nodes.size() > 20)
        throw Error("homoclinic_cycles: node budget exceeded (" + std::to_string(d.nodes.size()) +
                    " > 20)");
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < d.nodes.size(); ++i) index[d.nodes[i]] = i;
    std::vector<std::vector<std::size_t>> out_edges(d.nodes.size());
    for (std::size_t e = 0; e < d.edges.size(); ++e)
        out_edges[index.at(d.edges[e].source)].push_back(e);

    std::vector<CycleRecord> cycles;
    std::vector<std::size_t> path;
    std::vector<bool> on_path(d.nodes.size(), false);

    auto dfs = [&](auto&& self, std::size_t root, std::size_t u) -> void {
        on_path[u] = true;
        for (std::size_t e : out_edges[u]) {
            const std::size_t t = index.at(d.edges[e].target);
            if (t < root) continue;  // cycles are rooted at their least node
            if (t == root) {
                CycleRecord rec;
                rec.edge_index = path;
                rec.edge_index.push_back(e);
                Rat total(0);
                for (std::size_t i : rec.edge_index) {
                    rec.nodes.push_back(d.edges[i].source);
                    total += d.edges[i].drop;
                }
                rec.total = total;
                cycles.push_back(std::move(rec));
            } else if (!on_path[t]) {
                path.push_back(e);
                self(self, root, t);
                path.pop_back();
            }
        }
        on_path[u] = false;
    };
    for (std::size_t root = 0; root < d.nodes.size(); ++root) dfs(dfs, root, root);

    std::sort(cycles.begin(), cycles.end(), [&](const CycleRecord& a, const CycleRecord& b) {
        const Rat aa = rat_abs(a.total), bb = rat_abs(b.total);
        if (aa != bb) return aa < bb;
        if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
        if (a.nodes != b.nodes) return a.nodes < b.nodes;
        return a.edge_index < b.edge_index;
    });
    return cycles;
}

struct StarReport {
    std::string center;
    Rat threshold;
    bool strict = false;
    std::size_t orbits_tested = 0;
    bool b_ok = true;
    bool c_ok = true;

    struct BViolation {
        std::optional<SignedEdge> exit;  // set when the orbit was launched off an exit step
        Orbit orbit;
        Rat anchor;                      // deck coordinate of the offending star lift
        std::vector<std::size_t> times;  // non-contiguous visit times
    };
    struct CycleReturn {
        std::vector<Connection> hops;  // connection chain from center back to center
        mpz_class pump;                // windings needed to push the drop past -N
        Rat drop;                      // pump * chain total, <= -N
    };
    struct OrbitReturn {
        Orbit orbit;  // launched from a vertex, exits the star, absorbed back at center
        std::size_t exit_index;
        std::size_t return_index;
        Rat drop;  // drop accumulated between first exit and the return
    };

    std::vector<BViolation> b_violations;
    std::vector<CycleReturn> cycle_returns;
    std::vector<OrbitReturn> orbit_returns;

    bool ok() const { return b_ok && c_ok; }
};

namespace detail {

/// Shortest connection chain center -> ... -> center, if any (BFS, ties
/// broken by node then exit order so the witness is deterministic).
inline std::optional<std::vector<std::size_t>> shortest_cycle_through(
    const ConnectionDigraph& d, const std::string& center) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < d.nodes.size(); ++i) index[d.nodes[i]] = i;
    if (!index.count(center)) return std::nullopt;
    std::vector<std::vector<std::size_t>> out_edges(d.nodes.size());
    for (std::size_t e = 0; e < d.edges.size(); ++e)
        out_edges[index.at(d.edges[e].source)].push_back(e);

    const std::size_t n = d.nodes.size();
    const std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> dist(n, none), parent_edge(n, none);
    std::vector<std::size_t> queue{index.at(center)};
    dist[index.at(center)] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const std::size_t u = queue[qi];
        for (std::size_t e : out_edges[u]) {
            const std::size_t t = index.at(d.edges[e].target);
            if (d.edges[e].target == center) continue;  // closing edges handled below
            if (dist[t] != none) continue;
            dist[t] = dist[u] + 1;
            parent_edge[t] = e;
            queue.push_back(t);
        }
    }
    std::size_t best_edge = none;
    for (std::size_t e = 0; e < d.edges.size(); ++e) {
        if (d.edges[e].target != center) continue;
        const std::size_t u = index.at(d.edges[e].source);
        if (dist[u] == none) continue;
        if (best_edge == none || dist[u] < dist[index.at(d.edges[best_edge].source)]) best_edge = e;
    }
    if (best_edge == none) return std::nullopt;
    std::vector<std::size_t> chain{best_edge};
    std::size_t at = index.at(d.edges[best_edge].source);
    while (parent_edge[at] != none) {
        chain.push_back(parent_edge[at]);
        at = index.at(d.edges[parent_edge[at]].source);
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

inline StarReport validate_star_with(const Complex& cx, const OneForm& w,
                                     const LiftedPotential& pot, const Flow& fl,
                                     const ConnectionDigraph& digraph, const std::string& p,
                                     const Rat& threshold, bool strict) {
    StarReport rep;
    rep.center = p;
    rep.threshold = threshold;
    rep.strict = strict;

    std::set<std::string> star{p};
    for (const auto& dir : cx.leaving(p)) star.insert(cx.head_of(dir));

    struct Launched {
        std::optional<SignedEdge> exit;
        Orbit body;  // point/drop sequences already include the exit step if any
    };
    std::vector<Launched> launched;
    for (const auto& v : cx.sorted_vertices())
        launched.push_back({std::nullopt, orbit(cx, w, pot, fl, CoverPoint{v, Rat(0)})});
    for (const auto& exit : exit_directions(cx, w, p)) {
        const CoverPoint start{p, Rat(0)};
        Orbit tail = orbit(cx, w, pot, fl, lift_step(cx, w, pot, start, exit));
        Orbit o;
        o.start = start;
        o.steps.push_back(exit);
        o.steps.insert(o.steps.end(), tail.steps.begin(), tail.steps.end());
        o.points.push_back(start);
        o.points.insert(o.points.end(), tail.points.begin(), tail.points.end());
        o.drops.push_back(Rat(0));
        const Rat offset = signed_weight(w, exit);
        for (const auto& dr : tail.drops) o.drops.push_back(offset + dr);
        o.absorbed = tail.absorbed;
        o.absorbed_at = tail.absorbed_at;
        if (!tail.absorbed) {
            o.cycle_entry = tail.cycle_entry + 1;
            o.cycle_drop = tail.cycle_drop;
        }
        launched.push_back({exit, std::move(o)});
    }
    rep.orbits_tested = launched.size();

    // (b): visits to any single lift of the star form one contiguous block.
    // A point (v, s) with v in the star belongs to the lift anchored at
    // deck coordinate g when it matches (p, g) or one edge step off it.
    for (const auto& L : launched) {
        std::map<Rat, std::vector<std::size_t>> visits;
        for (std::size_t t = 0; t < L.body.points.size(); ++t) {
            const CoverPoint& x = L.body.points[t];
            if (!star.count(x.vertex)) continue;
            std::set<Rat> anchors;
            if (x.vertex == p) anchors.insert(x.shift);
            for (const auto& dir : cx.leaving(p))
                if (cx.head_of(dir) == x.vertex)
                    anchors.insert(x.shift - shift_delta(cx, w, pot, dir));
            for (const auto& a : anchors) visits[a].push_back(t);
        }
        for (const auto& [anchor, times] : visits) {
            if (times.back() - times.front() + 1 == times.size()) continue;
            rep.b_ok = false;
            rep.b_violations.push_back({L.exit, L.body, anchor, times});
        }
    }

    // (c) via connection chains: a chain from p back to p can be wound
    // around until its drop passes any threshold.
    if (const auto chain = shortest_cycle_through(digraph, p)) {
        StarReport::CycleReturn ret;
        Rat total(0);
        for (std::size_t e : *chain) {
            ret.hops.push_back(digraph.edges[e]);
            total += digraph.edges[e].drop;
        }
        ret.pump = strict ? mpz_class(1) : rat_ceil(threshold / rat_abs(total));
        if (ret.pump < 1) ret.pump = 1;
        ret.drop = Rat(ret.pump) * total;
        rep.c_ok = false;
        rep.cycle_returns.push_back(std::move(ret));
    }

    // (c) via single orbits: leave the star, get absorbed back at p deeply.
    for (const auto& L : launched) {
        if (L.exit) continue;  // exit launches are covered by the chains above
        const Orbit& o = L.body;
        if (!o.absorbed || o.absorbed_at != p) continue;
        std::optional<std::size_t> exit_at;
        for (std::size_t t = 1; t < o.points.size(); ++t) {
            if (star.count(o.points[t - 1].vertex) && !star.count(o.points[t].vertex)) {
                exit_at = t;
                break;
            }
        }
        if (!exit_at) continue;
        const std::size_t ret = o.points.size() - 1;
        const Rat drop = o.drops[ret] - o.drops[*exit_at];
        if (strict || drop <= -threshold) {
            rep.c_ok = false;
            rep.orbit_returns.push_back({o, *exit_at, ret, drop});
        }
    }
    return rep;
}

}  // namespace detail

inline StarReport validate_star(const Complex& cx, const OneForm& w, const Flow& fl,
                                const std::string& p, const Rat& threshold, bool strict = false) {
    require_valid_flow(cx, w, fl, "validate_star");
    if (!fl.fixed.count(p)) throw Error("validate_star: '" + p + "' is not a fixed vertex");
    if (threshold <= 0) throw Error("validate_star: threshold must be positive");
    const LiftedPotential pot = potential(cx, w);
    return detail::validate_star_with(cx, w, pot, fl, detail::connections_unchecked(cx, w, pot, fl),
                                      p, threshold, strict);
}

inline std::string serialize(const ConnectionDigraph& d) {
    std::ostringstream out;
    for (const auto& c : d.edges)
        out << "conn " << c.source << " " << c.target << " " << rat_str(c.drop) << " via "
            << to_string(c.exit) << "\n";
    for (const auto& e : d.escapes)
        out << "escape " << e.source << " via " << to_string(e.exit) << " descends-forever\n";
    return out.str();
}

inline std::string serialize_cycles(const std::vector<CycleRecord>& cycles) {
    std::ostringstream out;
    for (const auto& c : cycles) {
        out << "cycle";
        for (const auto& n : c.nodes) out << " " << n;
        out << " total " << rat_str(c.total) << "\n";
    }
    return out.str();
}

}  // namespace catform
