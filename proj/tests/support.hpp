/*
 * Shared randomized input builders for the test suites. Every generator
 * takes an explicit engine so suites stay reproducible under fixed seeds.
 */
#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "catform/connections.hpp"
#include "catform/flow.hpp"
#include "catform/linalg.hpp"
#include "catform/one_form.hpp"

namespace testsupport {

using Rng = std::mt19937_64;
using namespace catform;

inline int rand_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Rat rand_rat(Rng& rng, int max_num = 9, int max_den = 9) {
    Rat r{rand_int(rng, -max_num, max_num), rand_int(rng, 1, max_den)};
    r.canonicalize();
    return r;
}

/// Random walk of at most len steps starting at `from`.
inline Path rand_walk(Rng& rng, const Complex& cx, const std::string& from, int len) {
    Path p{from, {}};
    std::string at = from;
    for (int i = 0; i < len; ++i) {
        const auto& dirs = cx.leaving(at);
        if (dirs.empty()) break;
        const SignedEdge step = dirs[static_cast<std::size_t>(rand_int(rng, 0, static_cast<int>(dirs.size()) - 1))];
        p.steps.push_back(step);
        at = cx.head_of(step);
    }
    return p;
}

/*
 * A random valid complex: arbitrary multigraph plus faces whose words are
 * genuinely closed walks (walks cut at their first return, or doubled
 * with their reverse when they never return).
 */
inline Complex rand_complex(Rng& rng, int max_v = 40, int max_e = 80, int max_f = 10) {
    const int nv = rand_int(rng, 1, max_v);
    const int ne = rand_int(rng, 0, max_e);
    const int nf = rand_int(rng, 0, max_f);
    std::vector<std::string> vs;
    for (int i = 0; i < nv; ++i) vs.push_back("v" + std::to_string(i));
    std::vector<EdgeDecl> es;
    for (int i = 0; i < ne; ++i)
        es.push_back({"e" + std::to_string(i), vs[static_cast<std::size_t>(rand_int(rng, 0, nv - 1))],
                      vs[static_cast<std::size_t>(rand_int(rng, 0, nv - 1))]});
    Complex graph(vs, es, {});

    std::vector<FaceDecl> fs;
    for (int i = 0; i < nf && ne > 0; ++i) {
        const std::string from = vs[static_cast<std::size_t>(rand_int(rng, 0, nv - 1))];
        Path walk = rand_walk(rng, graph, from, rand_int(rng, 1, 6));
        if (walk.steps.empty()) continue;
        // cut at the first return to the start, else close with the reverse
        std::vector<SignedEdge> word;
        std::string at = from;
        bool closed = false;
        for (const auto& s : walk.steps) {
            word.push_back(s);
            at = graph.head_of(s);
            if (at == from) {
                closed = true;
                break;
            }
        }
        if (!closed) {
            const std::vector<SignedEdge> fwd = word;
            for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) word.push_back(reversed(*it));
        }
        fs.push_back({"f" + std::to_string(i), word});
    }
    return Complex(vs, es, fs);
}

/// Random closed form: a small rational combination of a basis of the
/// kernel of the face-boundary map over all edges.
inline OneForm rand_closed_form(Rng& rng, const Complex& cx, int max_num = 6, int max_den = 6) {
    const auto ids = cx.sorted_edge_ids();
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < ids.size(); ++i) col[ids[i]] = i;
    RatMatrix m;
    for (const auto& f : cx.faces()) {
        std::vector<Rat> row(ids.size(), Rat(0));
        for (const auto& s : f.word) row[col.at(s.edge)] += s.forward ? 1 : -1;
        m.push_back(std::move(row));
    }
    const auto basis = nullspace(std::move(m), ids.size());
    OneForm w = zero_form(cx);
    for (const auto& vec : basis) {
        const Rat c = rand_rat(rng, max_num, max_den);
        if (c == 0) continue;
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (vec[i] != 0) w.weight[ids[i]] += c * vec[i];
    }
    return w;
}

inline VertexFunction rand_vertex_function(Rng& rng, const Complex& cx, int max_num = 9,
                                           int max_den = 9) {
    VertexFunction f;
    for (const auto& v : cx.vertices()) f.value[v] = rand_rat(rng, max_num, max_den);
    return f;
}

/// forced vertices plus a sprinkle of voluntary ones.
inline std::set<std::string> rand_declared(Rng& rng, const Complex& cx, const OneForm& w) {
    std::set<std::string> declared = forced_fixed(cx, w);
    for (const auto& v : cx.vertices())
        if (rand_int(rng, 0, 3) == 0) declared.insert(v);
    return declared;
}

/// A synthetic digraph for the cycle-enumeration oracle tests.
inline ConnectionDigraph rand_digraph(Rng& rng, int max_nodes = 8, int max_edges = 14) {
    ConnectionDigraph d;
    const int n = rand_int(rng, 1, max_nodes);
    for (int i = 0; i < n; ++i) d.nodes.push_back("p" + std::to_string(i));
    const int m = rand_int(rng, 0, max_edges);
    for (int i = 0; i < m; ++i) {
        Connection c;
        c.source = d.nodes[static_cast<std::size_t>(rand_int(rng, 0, n - 1))];
        c.target = d.nodes[static_cast<std::size_t>(rand_int(rng, 0, n - 1))];
        Rat drop = rand_rat(rng, 9, 3);
        c.drop = drop < 0 ? drop : Rat(drop - 10);
        c.exit = SignedEdge{"x" + std::to_string(i), true};
        d.edges.push_back(std::move(c));
    }
    return d;
}

}  // namespace testsupport
