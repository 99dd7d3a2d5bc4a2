/*
 * Discrete gradient-like flows on the 1-skeleton.
 *
 * A flow fixes some vertices and gives every other vertex one strictly
 * descending successor direction; iterating successors on the cover
 * drives the lifted potential strictly downward. Orbits either get
 * absorbed by a fixed vertex or revisit a base vertex, which closes a
 * strictly negative cycle they then descend forever.
 */
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "catform/cover.hpp"

namespace catform {

struct Flow {
    std::set<std::string> fixed;
    std::map<std::string, SignedEdge> succ;  // non-fixed vertex -> descending step

    friend bool operator==(const Flow&, const Flow&) = default;
};

/*
 * Vertices no admissible flow can move: every incident direction out of
 * the vertex has weight >= 0, so a strictly descending successor cannot
 * exist. These are the discrete zero points forced by the form alone
 * (weak local minima of the lifted potential).
 */
inline std::set<std::string> forced_fixed(const Complex& cx, const OneForm& w) {
    require_closed(cx, w, "forced_fixed");
    std::set<std::string> out;
    for (const auto& v : cx.vertices()) {
        bool descending = false;
        for (const auto& dir : cx.leaving(v))
            if (signed_weight(w, dir) < 0) {
                descending = true;
                break;
            }
        if (!descending) out.insert(v);
    }
    return out;
}

/// Empty result iff fl is a valid gradient-like flow for w on cx.
inline std::vector<std::string> validate_flow(const Complex& cx, const OneForm& w,
                                              const Flow& fl) {
    std::vector<std::string> out;
    require_closed(cx, w, "validate_flow");
    for (const auto& v : fl.fixed) {
        if (!cx.has_vertex(v)) out.push_back("fixed vertex '" + v + "' is not in the complex");
        if (fl.succ.count(v)) out.push_back("vertex '" + v + "' is both fixed and has a successor");
    }
    for (const auto& [v, s] : fl.succ) {
        if (!cx.has_vertex(v)) {
            out.push_back("successor declared for unknown vertex '" + v + "'");
            continue;
        }
        if (!cx.has_edge(s.edge)) {
            out.push_back("successor of '" + v + "' uses unknown edge '" + s.edge + "'");
            continue;
        }
        if (cx.tail_of(s) != v)
            out.push_back("successor of '" + v + "' does not leave it (" + to_string(s) +
                          " starts at '" + cx.tail_of(s) + "')");
        else if (signed_weight(w, s) >= 0)
            out.push_back("non-strict descent at '" + v + "': " + to_string(s) + " has weight " +
                          rat_str(signed_weight(w, s)));
    }
    for (const auto& v : cx.vertices())
        if (!fl.fixed.count(v) && !fl.succ.count(v))
            out.push_back("vertex '" + v + "' is neither fixed nor has a successor");
    for (const auto& v : forced_fixed(cx, w))
        if (!fl.fixed.count(v)) out.push_back("forced vertex moved: '" + v + "' must be fixed");
    return out;
}

inline void require_valid_flow(const Complex& cx, const OneForm& w, const Flow& fl,
                               const char* who) {
    const auto v = validate_flow(cx, w, fl);
    if (!v.empty()) throw Error(std::string(who) + ": invalid flow: " + v.front());
}

enum class Policy { Steepest, First };

inline Policy policy_parse(const std::string& s) {
    if (s == "steepest") return Policy::Steepest;
    if (s == "first") return Policy::First;
    throw Error("unknown policy '" + s + "' (expected steepest or first)");
}

/*
 * Assigns every non-declared vertex a strictly descending successor.
 * steepest: most negative weight, ties by edge id then +e before -e;
 * first: least edge id among the descending directions.
 */
inline Flow build_flow(const Complex& cx, const OneForm& w, const std::set<std::string>& declared,
                       Policy policy) {
    require_closed(cx, w, "build_flow");
    for (const auto& v : declared)
        if (!cx.has_vertex(v)) throw Error("build_flow: declared fixed vertex '" + v + "' is unknown");
    for (const auto& v : forced_fixed(cx, w))
        if (!declared.count(v))
            throw Error("build_flow: declared fixed set is missing forced vertex '" + v + "'");
    Flow fl;
    fl.fixed = declared;
    for (const auto& v : cx.vertices()) {
        if (declared.count(v)) continue;
        std::optional<SignedEdge> best;
        for (const auto& dir : cx.leaving(v)) {
            const Rat dw = signed_weight(w, dir);
            if (dw >= 0) continue;
            if (!best) {
                best = dir;
                continue;
            }
            if (policy == Policy::Steepest) {
                const Rat bw = signed_weight(w, *best);
                if (dw < bw || (dw == bw && dir < *best)) best = dir;
            } else if (dir < *best) {
                best = dir;
            }
        }
        if (!best)  // unreachable when declared covers the forced set
            throw Error("build_flow: vertex '" + v + "' has no descending direction");
        fl.succ[v] = *best;
    }
    return fl;
}

/*
 * The forward orbit of a cover point. Stops at a fixed vertex (Absorbed)
 * or at the first repeat of a base vertex, which closes a strictly
 * negative base cycle (DescendsForever). Terminates within #vertices
 * steps by pigeonhole.
 */
struct Orbit {
    CoverPoint start;
    std::vector<SignedEdge> steps;
    std::vector<CoverPoint> points;  // points[0] == start; size == steps.size()+1
    std::vector<Rat> drops;          // drops[i] = f~(points[i]) - f~(start); strictly decreasing
    bool absorbed = false;
    std::string absorbed_at;         // set iff absorbed
    std::size_t cycle_entry = 0;     // iff recurrent: index of the repeated base's first visit
    Rat cycle_drop;                  // iff recurrent: strictly negative

    const Rat& total_drop() const { return drops.back(); }
    const CoverPoint& last() const { return points.back(); }

    std::vector<SignedEdge> cycle_steps() const {
        if (absorbed) return {};
        return std::vector<SignedEdge>(steps.begin() + static_cast<long>(cycle_entry), steps.end());
    }

    friend bool operator==(const Orbit&, const Orbit&) = default;
};

inline Orbit orbit(const Complex& cx, const OneForm& w, const LiftedPotential& pot, const Flow& fl,
                   const CoverPoint& start) {
    if (!cx.has_vertex(start.vertex)) throw Error("orbit: unknown start vertex '" + start.vertex + "'");
    Orbit o;
    o.start = start;
    o.points.push_back(start);
    o.drops.push_back(Rat(0));
    std::map<std::string, std::size_t> first_visit;
    for (;;) {
        const CoverPoint& here = o.points.back();
        if (fl.fixed.count(here.vertex)) {
            o.absorbed = true;
            o.absorbed_at = here.vertex;
            return o;
        }
        auto seen = first_visit.find(here.vertex);
        if (seen != first_visit.end()) {
            o.absorbed = false;
            o.cycle_entry = seen->second;
            o.cycle_drop = o.drops.back() - o.drops[seen->second];
            if (o.cycle_drop >= 0)
                throw Error("orbit: flow is not gradient-like (cycle drop " +
                            rat_str(o.cycle_drop) + " at '" + here.vertex + "')");
            return o;
        }
        first_visit.emplace(here.vertex, o.points.size() - 1);
        auto next = fl.succ.find(here.vertex);
        if (next == fl.succ.end())
            throw Error("orbit: vertex '" + here.vertex + "' is neither fixed nor has a successor");
        o.steps.push_back(next->second);
        o.points.push_back(lift_step(cx, w, pot, here, next->second));
        o.drops.push_back(o.drops.back() + signed_weight(w, next->second));
    }
}

inline Orbit orbit(const Complex& cx, const OneForm& w, const Flow& fl, const CoverPoint& start) {
    return orbit(cx, w, potential(cx, w), fl, start);
}

struct OmegaLimit {
    bool absorbed = false;
    std::string fixed_vertex;  // set iff absorbed
    Orbit witness;
};

/// Forward limit of the orbit launched from (v, 0).
inline OmegaLimit omega_limit(const Complex& cx, const OneForm& w, const Flow& fl,
                              const std::string& v) {
    OmegaLimit out;
    out.witness = orbit(cx, w, fl, CoverPoint{v, Rat(0)});
    out.absorbed = out.witness.absorbed;
    if (out.absorbed) out.fixed_vertex = out.witness.absorbed_at;
    return out;
}

}  // namespace catform
