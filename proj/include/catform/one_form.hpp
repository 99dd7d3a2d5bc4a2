/*
 * Closed 1-forms as rational edge cochains.
 *
 * A OneForm assigns one rational weight per oriented edge; closedness
 * means every face boundary word sums to zero. Integration along paths,
 * periods over fundamental cycles, exactness with explicit primitives,
 * class arithmetic, pullback along cellular maps and realization of a
 * prescribed period vector all live here. Everything is exact; there is
 * no tolerance anywhere.
 */
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catform/cell_complex.hpp"
#include "catform/rational.hpp"

namespace catform {

struct OneForm {
    std::map<std::string, Rat> weight;  // edge id -> weight

    friend bool operator==(const OneForm&, const OneForm&) = default;
};

struct VertexFunction {
    std::map<std::string, Rat> value;  // vertex id -> value

    friend bool operator==(const VertexFunction&, const VertexFunction&) = default;
};

/// Loop integrals over the fundamental cycles, in ascending edge-id order.
struct PeriodData {
    std::vector<std::pair<std::string, Rat>> entries;

    /// Generators of the deck group: the nonzero periods.
    std::vector<Rat> gamma_generators() const {
        std::vector<Rat> out;
        for (const auto& [id, p] : entries)
            if (p != 0) out.push_back(p);
        return out;
    }

    friend bool operator==(const PeriodData&, const PeriodData&) = default;
};

inline const Rat& weight_of(const OneForm& w, const std::string& edge) {
    auto it = w.weight.find(edge);
    if (it == w.weight.end()) throw Error("form has no weight for edge '" + edge + "'");
    return it->second;
}

/// Weight of a signed traversal (negated for the reverse direction).
inline Rat signed_weight(const OneForm& w, const SignedEdge& s) {
    const Rat& r = weight_of(w, s.edge);
    return s.forward ? r : Rat(-r);
}

inline void require_total(const Complex& cx, const OneForm& w) {
    for (const auto& e : cx.edges()) weight_of(w, e.id);
}

inline void require_total(const Complex& cx, const VertexFunction& f) {
    for (const auto& v : cx.vertices())
        if (!f.value.count(v)) throw Error("vertex function has no value for '" + v + "'");
}

struct ClosednessReport {
    bool closed = true;
    std::vector<std::pair<std::string, Rat>> residuals;  // nonzero face sums
};

inline ClosednessReport is_closed(const Complex& cx, const OneForm& w) {
    require_total(cx, w);
    ClosednessReport rep;
    for (const auto& f : cx.faces()) {
        Rat sum(0);
        for (const auto& s : f.word) sum += signed_weight(w, s);
        if (sum != 0) {
            rep.closed = false;
            rep.residuals.emplace_back(f.id, sum);
        }
    }
    return rep;
}

inline void require_closed(const Complex& cx, const OneForm& w, const char* who) {
    const auto rep = is_closed(cx, w);
    if (!rep.closed)
        throw Error(std::string(who) + ": form is not closed (face '" + rep.residuals.front().first +
                    "' has boundary sum " + rat_str(rep.residuals.front().second) + ")");
}

/// df: weight(e) = f(head) - f(tail). Always closed.
inline OneForm differential(const Complex& cx, const VertexFunction& f) {
    require_total(cx, f);
    OneForm w;
    for (const auto& e : cx.edges()) w.weight[e.id] = f.value.at(e.head) - f.value.at(e.tail);
    return w;
}

/// Signed sum of weights along a path. Additive under concatenation, odd
/// under reversal; telescopes to f(end) - f(start) on differentials.
inline Rat integrate(const Complex& cx, const OneForm& w, const Path& p) {
    require_path(cx, p);
    Rat sum(0);
    for (const auto& s : p.steps) sum += signed_weight(w, s);
    return sum;
}

inline PeriodData periods(const Complex& cx, const OneForm& w) {
    require_closed(cx, w, "periods");
    const SpanningForest f = spanning_forest(cx);
    PeriodData out;
    for (const auto& [edge, loop] : fundamental_cycles(cx, f))
        out.entries.emplace_back(edge, integrate(cx, w, loop));
    return out;
}

struct ExactnessResult {
    std::optional<VertexFunction> primitive;            // present iff exact
    std::optional<std::pair<std::string, Rat>> witness; // first nonzero period otherwise
};

/*
 * A closed form is exact iff all its periods vanish; the primitive is
 * then the tree-path integral from each component root (pinned to 0).
 */
inline ExactnessResult is_exact(const Complex& cx, const OneForm& w) {
    require_closed(cx, w, "is_exact");
    const SpanningForest forest = spanning_forest(cx);
    for (const auto& [edge, loop] : fundamental_cycles(cx, forest)) {
        const Rat p = integrate(cx, w, loop);
        if (p != 0) return {std::nullopt, std::make_pair(edge, p)};
    }
    VertexFunction f;
    for (const auto& v : cx.vertices()) f.value[v] = integrate(cx, w, tree_path(cx, forest, v));
    return {std::move(f), std::nullopt};
}

struct ClassComparison {
    bool same = false;
    std::optional<VertexFunction> primitive;             // of w1 - w2, when same
    std::optional<std::pair<std::string, Rat>> witness;  // differing period otherwise
};

inline OneForm combine(const Rat& a, const OneForm& w1, const Rat& b, const OneForm& w2) {
    if (w1.weight.size() != w2.weight.size()) throw Error("combine: carrier mismatch");
    OneForm out;
    for (const auto& [id, r] : w1.weight) {
        auto it = w2.weight.find(id);
        if (it == w2.weight.end()) throw Error("combine: carrier mismatch at edge '" + id + "'");
        out.weight[id] = a * r + b * it->second;
    }
    return out;
}

inline OneForm scaled(const Rat& a, const OneForm& w) { return combine(a, w, Rat(0), w); }

inline OneForm zero_form(const Complex& cx) {
    OneForm w;
    for (const auto& e : cx.edges()) w.weight[e.id] = 0;
    return w;
}

/// Two closed forms represent the same class iff their difference is exact.
inline ClassComparison same_class(const Complex& cx, const OneForm& w1, const OneForm& w2) {
    require_closed(cx, w1, "same_class");
    require_closed(cx, w2, "same_class");
    auto ex = is_exact(cx, combine(Rat(1), w1, Rat(-1), w2));
    if (ex.primitive) return {true, std::move(ex.primitive), std::nullopt};
    return {false, std::nullopt, std::move(ex.witness)};
}

/*
 * A cellular map: vertices to vertices, edges to edge paths whose ends
 * match the mapped endpoints. Edge paths may be empty (collapsed edges).
 */
struct CellularMap {
    std::map<std::string, std::string> vertex_map;  // domain vertex -> codomain vertex
    std::map<std::string, Path> edge_map;           // domain edge -> codomain path
};

inline void require_map(const Complex& domain, const Complex& codomain, const CellularMap& m) {
    for (const auto& v : domain.vertices()) {
        auto it = m.vertex_map.find(v);
        if (it == m.vertex_map.end()) throw Error("cellular map misses vertex '" + v + "'");
        if (!codomain.has_vertex(it->second))
            throw Error("cellular map sends '" + v + "' to unknown vertex '" + it->second + "'");
    }
    for (const auto& e : domain.edges()) {
        auto it = m.edge_map.find(e.id);
        if (it == m.edge_map.end()) throw Error("cellular map misses edge '" + e.id + "'");
        require_path(codomain, it->second);
        if (it->second.start != m.vertex_map.at(e.tail))
            throw Error("image path of edge '" + e.id + "' starts at '" + it->second.start +
                        "', expected image of tail '" + m.vertex_map.at(e.tail) + "'");
        if (path_end(codomain, it->second) != m.vertex_map.at(e.head))
            throw Error("image path of edge '" + e.id + "' ends at '" +
                        path_end(codomain, it->second) + "', expected image of head '" +
                        m.vertex_map.at(e.head) + "'");
    }
}

/// Pullback: domain edge weight = integral of w over the edge's image path.
inline OneForm pullback(const Complex& domain, const Complex& codomain, const CellularMap& m,
                        const OneForm& w) {
    require_map(domain, codomain, m);
    require_total(codomain, w);
    OneForm out;
    for (const auto& e : domain.edges()) out.weight[e.id] = integrate(codomain, w, m.edge_map.at(e.id));
    return out;
}

struct InfeasibleClass : Error {
    std::string face;
    Rat residual;
    InfeasibleClass(std::string face_, Rat residual_)
        : Error("realize_class: infeasible target (face '" + face_ + "' boundary sum " +
                rat_str(residual_) + " != 0)"),
          face(std::move(face_)),
          residual(std::move(residual_)) {}
};

/*
 * Builds a closed form with the prescribed periods, or proves there is
 * none. Pinning tree edges to 0 turns each fundamental-cycle constraint
 * into a direct assignment of the matching non-tree edge, so the face
 * rows are the only constraints left to check: the target is realizable
 * exactly when the assignment already satisfies them. (Any closed form
 * with these periods differs from the assignment by an exact form that
 * vanishes on tree edges, i.e. by nothing.)
 */
inline OneForm realize_class(const Complex& cx, const PeriodData& target) {
    const SpanningForest forest = spanning_forest(cx);
    std::vector<std::string> nontree;
    for (const auto& id : cx.sorted_edge_ids())
        if (!forest.tree_edges.count(id)) nontree.push_back(id);
    if (target.entries.size() != nontree.size())
        throw Error("realize_class: target has " + std::to_string(target.entries.size()) +
                    " periods, complex has " + std::to_string(nontree.size()) +
                    " fundamental cycles");
    OneForm w = zero_form(cx);
    for (std::size_t i = 0; i < nontree.size(); ++i) {
        if (target.entries[i].first != nontree[i])
            throw Error("realize_class: target period " + std::to_string(i) + " is for edge '" +
                        target.entries[i].first + "', expected '" + nontree[i] + "'");
        w.weight[nontree[i]] = target.entries[i].second;
    }
    const auto rep = is_closed(cx, w);
    if (!rep.closed) throw InfeasibleClass(rep.residuals.front().first, rep.residuals.front().second);
    return w;
}

}  // namespace catform
