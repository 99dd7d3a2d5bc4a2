/*
 * Constructive category certificates.
 *
 * A certificate at threshold N partitions the work the cover F u F_1 u
 * ... u F_k does: F holds vertices whose orbits drop below -N (recurrent
 * orbits reach any depth by winding their negative cycle), each F_j
 * holds the vertices absorbed at the fixed point p_j with every prefix
 * drop still above -N, and every p_j's closed star must validate as a
 * gradient convex neighborhood at the same threshold. Verification
 * re-derives all of it from the stored witnesses.
 */
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "catform/connections.hpp"

namespace catform {

struct FWitness {
    Orbit orbit;
    mpz_class pump;          // extra windings of the recurrent cycle (0 if absorbed deep enough)
    std::size_t reach_index; // meaningful when pump == 0: first index with drop <= -N
    Rat reached_drop;        // the certified drop, <= -N

    friend bool operator==(const FWitness&, const FWitness&) = default;
};

struct FjEntry {
    std::string center;                   // p_j
    std::map<std::string, Orbit> members; // vertex -> absorbed witness, all drops > -N
    StarReport star;
};

struct CatCertificate {
    Rat threshold;
    std::map<std::string, FWitness> f_members;
    std::vector<FjEntry> fj;  // one entry per fixed vertex, ascending

    /// Number of F_j sets that actually carry vertices.
    std::size_t k() const {
        std::size_t n = 0;
        for (const auto& e : fj)
            if (!e.members.empty()) ++n;
        return n;
    }
};

struct FailureWitness {
    enum class Reason { StarB, StarC, Uncovered };
    Reason reason;
    std::string detail;
    std::optional<StarReport> star;    // for the star reasons
    std::optional<std::string> vertex; // offending vertex
};

inline const char* to_string(FailureWitness::Reason r) {
    switch (r) {
        case FailureWitness::Reason::StarB: return "star-b-violation";
        case FailureWitness::Reason::StarC: return "star-c-violation";
        case FailureWitness::Reason::Uncovered: return "uncovered-vertex";
    }
    return "?";
}

struct BuildOutcome {
    std::optional<CatCertificate> certificate;
    std::optional<FailureWitness> failure;

    bool ok() const { return certificate.has_value(); }
};

/*
 * Past this threshold the sets stop moving: every absorbed orbit's total
 * drop has magnitude < N*, so raising N further changes no membership.
 * Recurrent orbits reach any threshold and contribute nothing.
 */
inline Rat stabilization_bound(const Complex& cx, const OneForm& w, const Flow& fl) {
    require_valid_flow(cx, w, fl, "stabilization_bound");
    const LiftedPotential pot = potential(cx, w);
    Rat deepest(0);
    for (const auto& v : cx.sorted_vertices()) {
        const Orbit o = orbit(cx, w, pot, fl, CoverPoint{v, Rat(0)});
        if (!o.absorbed) continue;
        const Rat mag = rat_abs(o.total_drop());
        if (mag > deepest) deepest = mag;
    }
    return deepest + 1;
}

inline BuildOutcome build_certificate(const Complex& cx, const OneForm& w, const Flow& fl,
                                      const Rat& threshold) {
    require_valid_flow(cx, w, fl, "build_certificate");
    if (threshold <= 0) throw Error("build_certificate: threshold must be positive");
    const LiftedPotential pot = potential(cx, w);
    const ConnectionDigraph digraph = detail::connections_unchecked(cx, w, pot, fl);

    CatCertificate cert;
    cert.threshold = threshold;
    for (const auto& p : digraph.nodes) {
        StarReport star = detail::validate_star_with(cx, w, pot, fl, digraph, p, threshold, false);
        if (!star.ok()) {
            FailureWitness fail;
            fail.reason = star.b_ok ? FailureWitness::Reason::StarC : FailureWitness::Reason::StarB;
            fail.detail = std::string(to_string(fail.reason)) + " at '" + p + "'";
            fail.vertex = p;
            fail.star = std::move(star);
            return {std::nullopt, std::move(fail)};
        }
        cert.fj.push_back(FjEntry{p, {}, std::move(star)});
    }
    std::map<std::string, std::size_t> entry_of;
    for (std::size_t i = 0; i < cert.fj.size(); ++i) entry_of[cert.fj[i].center] = i;

    for (const auto& v : cx.sorted_vertices()) {
        Orbit o = orbit(cx, w, pot, fl, CoverPoint{v, Rat(0)});
        if (o.absorbed) {
            if (o.total_drop() <= -threshold) {
                std::size_t at = 0;
                while (o.drops[at] > -threshold) ++at;
                const Rat reached = o.drops[at];
                cert.f_members.emplace(v, FWitness{std::move(o), 0, at, reached});
            } else {
                cert.fj[entry_of.at(o.absorbed_at)].members.emplace(v, std::move(o));
            }
        } else {
            // wind the recurrent cycle until the drop passes -N
            mpz_class pump(0);
            Rat reached = o.total_drop();
            if (reached > -threshold) {
                pump = rat_ceil((threshold + o.total_drop()) / rat_abs(o.cycle_drop));
                if (pump < 1) pump = 1;
                reached = o.total_drop() + Rat(pump) * o.cycle_drop;
            }
            std::size_t at = 0;
            if (pump == 0)
                while (o.drops[at] > -threshold) ++at;
            cert.f_members.emplace(v, FWitness{std::move(o), pump, at, reached});
        }
    }
    return {std::move(cert), std::nullopt};
}

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> violations;
};

/*
 * Independent recheck: every membership is re-derived from a fresh orbit
 * computation, the stored witnesses must agree with it, coverage and
 * flow-closure must hold, and every star must pass at the certificate's
 * threshold.
 */
inline VerifyReport verify_certificate(const Complex& cx, const OneForm& w, const Flow& fl,
                                       const CatCertificate& cert) {
    VerifyReport rep;
    auto fail = [&](const std::string& msg) {
        rep.ok = false;
        rep.violations.push_back(msg);
    };
    if (cert.threshold <= 0) fail("threshold is not positive");
    {
        const auto flow_violations = validate_flow(cx, w, fl);
        for (const auto& v : flow_violations) fail("flow: " + v);
        if (!flow_violations.empty()) return rep;
    }
    const LiftedPotential pot = potential(cx, w);
    const ConnectionDigraph digraph = detail::connections_unchecked(cx, w, pot, fl);
    const Rat N = cert.threshold;

    std::set<std::string> fj_centers;
    for (const auto& entry : cert.fj) {
        if (!fl.fixed.count(entry.center)) {
            fail("Fj center '" + entry.center + "' is not a fixed vertex");
            continue;
        }
        fj_centers.insert(entry.center);
        const StarReport star =
            detail::validate_star_with(cx, w, pot, fl, digraph, entry.center, N, false);
        if (!star.b_ok) fail("star-b-violation at '" + entry.center + "'");
        if (!star.c_ok) fail("star-c-violation at '" + entry.center + "'");
        for (const auto& [v, witness] : entry.members) {
            const Orbit fresh = orbit(cx, w, pot, fl, CoverPoint{v, Rat(0)});
            if (!(witness == fresh)) {
                fail("Fj witness for '" + v + "' does not re-run to the stored orbit");
                continue;
            }
            if (!fresh.absorbed || fresh.absorbed_at != entry.center)
                fail("Fj member '" + v + "' is not absorbed at '" + entry.center + "'");
            else if (fresh.total_drop() <= -N)
                fail("Fj member '" + v + "' drops to " + rat_str(fresh.total_drop()) +
                     " <= -N before absorption");
            if (!fl.fixed.count(v)) {
                const SignedEdge& step = fl.succ.at(v);
                const std::string next = cx.head_of(step);
                if (!entry.members.count(next) && next != entry.center)
                    fail("flow-closure: successor of '" + v + "' leaves F_" + entry.center);
            }
        }
    }
    for (const auto& p : fl.fixed)
        if (!fj_centers.count(p)) fail("fixed vertex '" + p + "' has no star report");

    for (const auto& [v, witness] : cert.f_members) {
        const Orbit fresh = orbit(cx, w, pot, fl, CoverPoint{v, Rat(0)});
        if (!(witness.orbit == fresh)) {
            fail("F witness for '" + v + "' does not re-run to the stored orbit");
            continue;
        }
        if (witness.reached_drop > -N) {
            fail("F witness for '" + v + "' reaches only " + rat_str(witness.reached_drop) +
                 " > -N");
            continue;
        }
        if (witness.pump == 0) {
            if (witness.reach_index >= fresh.drops.size() ||
                fresh.drops[witness.reach_index] != witness.reached_drop)
                fail("F witness for '" + v + "' records a drop its orbit never attains");
        } else {
            if (fresh.absorbed)
                fail("F witness for '" + v + "' pumps an absorbed orbit");
            else if (fresh.total_drop() + Rat(witness.pump) * fresh.cycle_drop !=
                     witness.reached_drop)
                fail("F witness for '" + v + "' mis-states its wound drop");
        }
    }

    for (const auto& v : cx.vertices()) {
        if (cert.f_members.count(v)) continue;
        bool covered = false;
        for (const auto& entry : cert.fj)
            if (entry.members.count(v)) {
                covered = true;
                break;
            }
        if (!covered) fail("uncovered-vertex '" + v + "'");
    }
    return rep;
}

struct CatResult {
    std::optional<std::size_t> k;
    std::optional<FailureWitness> failure;
    Rat bound;  // the stabilization bound used

    bool ok() const { return k.has_value(); }
};

/*
 * Builds at the stabilization bound and at twice it; both must succeed
 * with identical sets. k counts the nonempty F_j sets.
 */
inline CatResult cat_upper(const Complex& cx, const OneForm& w, const Flow& fl) {
    CatResult out;
    out.bound = stabilization_bound(cx, w, fl);
    BuildOutcome once = build_certificate(cx, w, fl, out.bound);
    if (!once.ok()) {
        out.failure = std::move(once.failure);
        return out;
    }
    BuildOutcome twice = build_certificate(cx, w, fl, 2 * out.bound);
    if (!twice.ok()) {
        out.failure = std::move(twice.failure);
        return out;
    }
    auto keys = [](const CatCertificate& c) {
        std::map<std::string, std::set<std::string>> sets;
        for (const auto& [v, fw] : c.f_members) sets["F"].insert(v);
        for (const auto& e : c.fj)
            for (const auto& [v, o] : e.members) sets["Fj " + e.center].insert(v);
        return sets;
    };
    if (keys(*once.certificate) != keys(*twice.certificate))
        throw Error("cat_upper: certificate sets failed to stabilize at the bound");
    out.k = once.certificate->k();
    return out;
}

namespace detail {

inline void scale_orbit(Orbit& o, const Rat& lambda) {
    o.start.shift *= lambda;
    for (auto& p : o.points) p.shift *= lambda;
    for (auto& d : o.drops) d *= lambda;
    if (!o.absorbed) o.cycle_drop *= lambda;
}

inline void scale_star_report(StarReport& rep, const Rat& lambda) {
    rep.threshold *= lambda;
    for (auto& bv : rep.b_violations) {
        scale_orbit(bv.orbit, lambda);
        bv.anchor *= lambda;
    }
    for (auto& cr : rep.cycle_returns) {
        for (auto& hop : cr.hops) {
            hop.drop *= lambda;
            scale_orbit(hop.witness, lambda);
        }
        cr.drop *= lambda;
    }
    for (auto& orr : rep.orbit_returns) {
        scale_orbit(orr.orbit, lambda);
        orr.drop *= lambda;
    }
}

}  // namespace detail

/*
 * Transports a certificate for w to one for lambda*w at threshold
 * lambda*N by rescaling every integrated quantity in place; memberships
 * and winding counts are unchanged because every comparison scales.
 */
inline CatCertificate scaling_transport(const CatCertificate& cert, const Rat& lambda) {
    if (lambda <= 0) throw Error("scaling_transport: lambda must be positive");
    CatCertificate out = cert;
    out.threshold *= lambda;
    for (auto& [v, fw] : out.f_members) {
        detail::scale_orbit(fw.orbit, lambda);
        fw.reached_drop *= lambda;
    }
    for (auto& entry : out.fj) {
        for (auto& [v, o] : entry.members) detail::scale_orbit(o, lambda);
        detail::scale_star_report(entry.star, lambda);
    }
    return out;
}

inline std::string serialize(const CatCertificate& cert, bool verified) {
    std::ostringstream out;
    out << "cat-certificate k=" << cert.k() << " N=" << rat_str(cert.threshold) << "\n";
    out << "F:";
    for (const auto& [v, fw] : cert.f_members) out << " " << v;
    out << "\n";
    for (const auto& entry : cert.fj) {
        if (entry.members.empty()) continue;
        out << "Fj " << entry.center << ":";
        for (const auto& [v, o] : entry.members) out << " " << v;
        out << "\n";
    }
    out << "verified: " << (verified ? "true" : "false") << "\n";
    return out.str();
}

}  // namespace catform
