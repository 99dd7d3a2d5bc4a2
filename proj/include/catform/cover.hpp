/*
 * The covering space attached to the kernel of the period homomorphism.
 *
 * The cover is never materialized. A point of it is a base vertex plus a
 * rational deck coordinate ("shift"); the pulled-back form integrates to
 * the potential f~(v, shift) = h(v) + shift, where h is the tree-path
 * integral per component. Shifts are stored relative to h so tree steps
 * are shift-neutral and "same lift" is a single rational comparison.
 */
#pragma once

#include <map>
#include <string>
#include <vector>

#include "catform/one_form.hpp"
#include "catform/rational.hpp"

namespace catform {

struct CoverPoint {
    std::string vertex;
    Rat shift;

    friend bool operator==(const CoverPoint&, const CoverPoint&) = default;
    friend bool operator<(const CoverPoint& a, const CoverPoint& b) {
        if (a.vertex != b.vertex) return a.vertex < b.vertex;
        return a.shift < b.shift;
    }
};

inline std::string to_string(const CoverPoint& p) {
    return "(" + p.vertex + ", " + rat_str(p.shift) + ")";
}

struct LiftedPotential {
    std::map<std::string, Rat> base;  // h: vertex -> tree-path integral

    Rat eval(const CoverPoint& p) const {
        auto it = base.find(p.vertex);
        if (it == base.end()) throw Error("potential has no value for vertex '" + p.vertex + "'");
        return it->second + p.shift;
    }
};

inline LiftedPotential potential(const Complex& cx, const OneForm& w) {
    require_closed(cx, w, "potential");
    const SpanningForest forest = spanning_forest(cx);
    LiftedPotential pot;
    for (const auto& v : cx.vertices()) pot.base[v] = integrate(cx, w, tree_path(cx, forest, v));
    return pot;
}

/// Crossing a lifted edge: f~ changes by exactly the signed weight.
inline CoverPoint lift_step(const Complex& cx, const OneForm& w, const LiftedPotential& pot,
                            const CoverPoint& pt, const SignedEdge& step) {
    const std::string tail = cx.tail_of(step);
    if (tail != pt.vertex)
        throw Error("lift_step: " + to_string(step) + " starts at '" + tail + "', point is at '" +
                    pt.vertex + "'");
    const std::string head = cx.head_of(step);
    CoverPoint out;
    out.vertex = head;
    out.shift = pt.shift + signed_weight(w, step) - (pot.base.at(head) - pot.base.at(tail));
    return out;
}

/// The shift change incurred by a signed step (0 on tree edges).
inline Rat shift_delta(const Complex& cx, const OneForm& w, const LiftedPotential& pot,
                       const SignedEdge& step) {
    return signed_weight(w, step) - (pot.base.at(cx.head_of(step)) - pot.base.at(cx.tail_of(step)));
}

struct LiftTrace {
    std::vector<CoverPoint> points;  // points[0] is the start
    Rat drop;                        // f~(end) - f~(start) = integral of w over the path

    const CoverPoint& end() const { return points.back(); }
};

inline LiftTrace lift_path(const Complex& cx, const OneForm& w, const LiftedPotential& pot,
                           const CoverPoint& start, const Path& p) {
    if (p.start != start.vertex)
        throw Error("lift_path: path starts at '" + p.start + "', point is at '" + start.vertex + "'");
    require_path(cx, p);
    LiftTrace t;
    t.points.push_back(start);
    for (const auto& s : p.steps) t.points.push_back(lift_step(cx, w, pot, t.points.back(), s));
    t.drop = pot.eval(t.points.back()) - pot.eval(start);
    return t;
}

/*
 * The deck group of the cover is the image of the period homomorphism, a
 * subgroup of Q. Finitely many rationals always generate a cyclic group;
 * gcd-reduction yields the generator, and membership is divisibility.
 */
struct DeckGroup {
    Rat generator;  // 0 for the trivial group

    bool trivial() const { return generator == 0; }
};

inline DeckGroup deck_group(const PeriodData& periods) {
    Rat g(0);
    for (const auto& p : periods.gamma_generators()) g = rat_gcd(g, p);
    return DeckGroup{g};
}

inline bool deck_contains(const DeckGroup& g, const Rat& x) {
    if (g.trivial()) return x == 0;
    const Rat q = x / g.generator;
    return q.get_den() == 1;
}

}  // namespace catform
