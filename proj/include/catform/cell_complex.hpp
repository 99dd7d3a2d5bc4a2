/*
 * Finite 2-dimensional CW complexes.
 *
 * Vertices and oriented edges form an arbitrary multigraph (loops and
 * parallel edges are first class); 2-cells are closed boundary words of
 * signed edges. Everything downstream (forms, flows, covers) lives on
 * this structure. All operations are pure; a Complex never mutates after
 * it has been assembled.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "catform/linalg.hpp"
#include "catform/rational.hpp"

namespace catform {

/// An edge id together with a traversal direction: +e runs tail->head.
struct SignedEdge {
    std::string edge;
    bool forward = true;

    friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
    friend bool operator<(const SignedEdge& a, const SignedEdge& b) {
        if (a.edge != b.edge) return a.edge < b.edge;
        return a.forward && !b.forward;  // +e before -e
    }
};

inline SignedEdge reversed(SignedEdge s) {
    s.forward = !s.forward;
    return s;
}

inline std::string to_string(const SignedEdge& s) {
    return (s.forward ? "+" : "-") + s.edge;
}

struct EdgeDecl {
    std::string id, tail, head;
    friend bool operator==(const EdgeDecl&, const EdgeDecl&) = default;
};

struct FaceDecl {
    std::string id;
    std::vector<SignedEdge> word;
    friend bool operator==(const FaceDecl&, const FaceDecl&) = default;
};

class Complex {
public:
    Complex() = default;
    Complex(std::vector<std::string> vertices, std::vector<EdgeDecl> edges,
            std::vector<FaceDecl> faces)
        : vertices_(std::move(vertices)), edges_(std::move(edges)), faces_(std::move(faces)) {
        rebuild_index();
    }

    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<EdgeDecl>& edges() const { return edges_; }
    const std::vector<FaceDecl>& faces() const { return faces_; }

    bool has_vertex(const std::string& id) const { return vertex_index_.count(id) != 0; }
    bool has_edge(const std::string& id) const { return edge_index_.count(id) != 0; }

    const EdgeDecl& edge(const std::string& id) const {
        auto it = edge_index_.find(id);
        if (it == edge_index_.end()) throw Error("unknown edge '" + id + "'");
        return edges_[it->second];
    }

    /// Start vertex of a signed traversal.
    std::string tail_of(const SignedEdge& s) const {
        const EdgeDecl& e = edge(s.edge);
        return s.forward ? e.tail : e.head;
    }

    /// End vertex of a signed traversal.
    std::string head_of(const SignedEdge& s) const {
        const EdgeDecl& e = edge(s.edge);
        return s.forward ? e.head : e.tail;
    }

    /// All signed directions out of v, sorted ascending (+e before -e).
    const std::vector<SignedEdge>& leaving(const std::string& v) const {
        auto it = leaving_.find(v);
        if (it == leaving_.end()) throw Error("unknown vertex '" + v + "'");
        return it->second;
    }

    /// Vertex ids ascending (the canonical processing order).
    std::vector<std::string> sorted_vertices() const {
        std::vector<std::string> out(vertices_);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<std::string> sorted_edge_ids() const {
        std::vector<std::string> out;
        out.reserve(edges_.size());
        for (const auto& e : edges_) out.push_back(e.id);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Structural equality: declaration order is immaterial, ids are not.
    friend bool operator==(const Complex& a, const Complex& b) {
        auto vs = [](const Complex& c) {
            auto v = c.vertices_;
            std::sort(v.begin(), v.end());
            return v;
        };
        auto es = [](const Complex& c) {
            std::map<std::string, EdgeDecl> m;
            for (const auto& e : c.edges_) m[e.id] = e;
            return m;
        };
        auto fs = [](const Complex& c) {
            std::map<std::string, FaceDecl> m;
            for (const auto& f : c.faces_) m[f.id] = f;
            return m;
        };
        return vs(a) == vs(b) && es(a) == es(b) && fs(a) == fs(b);
    }

private:
    std::vector<std::string> vertices_;  // declaration order
    std::vector<EdgeDecl> edges_;
    std::vector<FaceDecl> faces_;
    std::map<std::string, std::size_t> vertex_index_;
    std::map<std::string, std::size_t> edge_index_;
    std::map<std::string, std::vector<SignedEdge>> leaving_;

    void rebuild_index() {
        vertex_index_.clear();
        edge_index_.clear();
        leaving_.clear();
        for (std::size_t i = 0; i < vertices_.size(); ++i) vertex_index_.emplace(vertices_[i], i);
        for (std::size_t i = 0; i < edges_.size(); ++i) edge_index_.emplace(edges_[i].id, i);
        for (const auto& v : vertices_) leaving_[v];
        for (const auto& e : edges_) {
            if (vertex_index_.count(e.tail)) leaving_[e.tail].push_back({e.id, true});
            if (vertex_index_.count(e.head)) leaving_[e.head].push_back({e.id, false});
        }
        for (auto& [v, dirs] : leaving_) std::sort(dirs.begin(), dirs.end());
    }
};

/// Checks every Complex invariant; empty result means the complex is valid.
inline std::vector<std::string> validate(const Complex& cx) {
    std::vector<std::string> out;
    std::set<std::string> vseen, eseen, fseen;
    for (const auto& v : cx.vertices())
        if (!vseen.insert(v).second) out.push_back("duplicate vertex id '" + v + "'");
    for (const auto& e : cx.edges()) {
        if (!eseen.insert(e.id).second) out.push_back("duplicate edge id '" + e.id + "'");
        if (!vseen.count(e.tail))
            out.push_back("edge '" + e.id + "' has dangling endpoint '" + e.tail + "'");
        if (!vseen.count(e.head))
            out.push_back("edge '" + e.id + "' has dangling endpoint '" + e.head + "'");
    }
    for (const auto& f : cx.faces()) {
        if (!fseen.insert(f.id).second) out.push_back("duplicate face id '" + f.id + "'");
        if (f.word.empty()) {
            out.push_back("face '" + f.id + "' has an empty boundary word");
            continue;
        }
        bool resolvable = true;
        for (std::size_t i = 0; i < f.word.size(); ++i) {
            if (!cx.has_edge(f.word[i].edge)) {
                out.push_back("face '" + f.id + "' references undeclared edge '" +
                              f.word[i].edge + "' at position " + std::to_string(i + 1));
                resolvable = false;
            }
        }
        if (!resolvable) continue;
        std::string at = cx.tail_of(f.word.front());
        bool chained = true;
        for (std::size_t i = 0; i < f.word.size(); ++i) {
            if (cx.tail_of(f.word[i]) != at) {
                out.push_back("face '" + f.id + "' boundary word breaks at position " +
                              std::to_string(i + 1) + " (at vertex '" + at + "', step " +
                              to_string(f.word[i]) + " starts at '" + cx.tail_of(f.word[i]) +
                              "')");
                chained = false;
                break;
            }
            at = cx.head_of(f.word[i]);
        }
        if (chained && at != cx.tail_of(f.word.front()))
            out.push_back("face '" + f.id + "' boundary word not closed (ends at '" + at +
                          "', started at '" + cx.tail_of(f.word.front()) + "')");
    }
    return out;
}

/// An edge path: a start vertex and a chaining sequence of signed edges.
struct Path {
    std::string start;
    std::vector<SignedEdge> steps;

    friend bool operator==(const Path&, const Path&) = default;
};

/// Throws unless p chains head-to-tail inside cx.
inline void require_path(const Complex& cx, const Path& p) {
    if (!cx.has_vertex(p.start)) throw Error("path starts at unknown vertex '" + p.start + "'");
    std::string at = p.start;
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        if (!cx.has_edge(p.steps[i].edge))
            throw Error("path references unknown edge '" + p.steps[i].edge + "'");
        if (cx.tail_of(p.steps[i]) != at)
            throw Error("path breaks at step " + std::to_string(i + 1) + ": " +
                        to_string(p.steps[i]) + " does not start at '" + at + "'");
        at = cx.head_of(p.steps[i]);
    }
}

inline std::string path_end(const Complex& cx, const Path& p) {
    std::string at = p.start;
    for (const auto& s : p.steps) at = cx.head_of(s);
    return p.steps.empty() ? p.start : at;
}

inline Path reversed(const Complex& cx, const Path& p) {
    Path out{path_end(cx, p), {}};
    out.steps.reserve(p.steps.size());
    for (auto it = p.steps.rbegin(); it != p.steps.rend(); ++it)
        out.steps.push_back(reversed(*it));
    return out;
}

inline Path concat(const Complex& cx, const Path& a, const Path& b) {
    if (path_end(cx, a) != b.start)
        throw Error("cannot concatenate: first path ends at '" + path_end(cx, a) +
                    "', second starts at '" + b.start + "'");
    Path out = a;
    out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
    return out;
}

/*
 * Spanning forests. Growth is deterministic: components are rooted at
 * their lexicographically least vertex and grown by always taking the
 * least-id edge with exactly one endpoint reached so far.
 */
struct SpanningForest {
    std::vector<std::string> roots;                    // ascending
    std::set<std::string> tree_edges;                  // edge ids
    std::map<std::string, SignedEdge> parent_step;     // step parent -> v
    std::map<std::string, std::string> component;      // vertex -> root
};

inline SpanningForest spanning_forest(const Complex& cx) {
    SpanningForest f;
    std::set<std::string> visited;
    for (const auto& root : cx.sorted_vertices()) {
        if (visited.count(root)) continue;
        f.roots.push_back(root);
        visited.insert(root);
        f.component[root] = root;
        // frontier of signed edges leaving the reached set, keyed by edge id
        using Item = std::pair<std::string, SignedEdge>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> frontier;
        auto push_from = [&](const std::string& v) {
            for (const auto& dir : cx.leaving(v)) frontier.push({dir.edge, dir});
        };
        push_from(root);
        while (!frontier.empty()) {
            const SignedEdge step = frontier.top().second;
            frontier.pop();
            const std::string target = cx.head_of(step);
            if (visited.count(target)) continue;
            visited.insert(target);
            f.tree_edges.insert(step.edge);
            f.parent_step[target] = step;
            f.component[target] = root;
            push_from(target);
        }
    }
    return f;
}

/// The unique tree path from v's component root to v.
inline Path tree_path(const Complex& cx, const SpanningForest& f, const std::string& v) {
    auto comp = f.component.find(v);
    if (comp == f.component.end()) throw Error("vertex '" + v + "' is not in the forest");
    std::vector<SignedEdge> back;
    std::string at = v;
    while (at != comp->second) {
        const SignedEdge& step = f.parent_step.at(at);
        back.push_back(step);
        at = cx.tail_of(step);
    }
    std::reverse(back.begin(), back.end());
    return Path{comp->second, std::move(back)};
}

/*
 * One generating loop per non-tree edge: the tree path root -> tail, the
 * edge itself, then the tree path head -> root. These loops generate the
 * first homology of the 1-skeleton; loop integrals over them are the
 * periods of a form.
 */
inline std::vector<std::pair<std::string, Path>> fundamental_cycles(const Complex& cx,
                                                                    const SpanningForest& f) {
    std::vector<std::pair<std::string, Path>> out;
    for (const auto& id : cx.sorted_edge_ids()) {
        if (f.tree_edges.count(id)) continue;
        const EdgeDecl& e = cx.edge(id);
        Path loop = tree_path(cx, f, e.tail);
        loop.steps.push_back({id, true});
        Path back = reversed(cx, tree_path(cx, f, e.head));
        loop.steps.insert(loop.steps.end(), back.steps.begin(), back.steps.end());
        out.emplace_back(id, std::move(loop));
    }
    return out;
}

inline long long euler_characteristic(const Complex& cx) {
    return static_cast<long long>(cx.vertices().size()) -
           static_cast<long long>(cx.edges().size()) +
           static_cast<long long>(cx.faces().size());
}

/// Signed traversal counts of each non-tree edge, one row per face.
inline RatMatrix face_matrix(const Complex& cx, const std::vector<std::string>& nontree) {
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < nontree.size(); ++i) col[nontree[i]] = i;
    RatMatrix m;
    for (const auto& f : cx.faces()) {
        std::vector<Rat> row(nontree.size(), Rat(0));
        for (const auto& s : f.word) {
            auto it = col.find(s.edge);
            if (it != col.end()) row[it->second] += s.forward ? 1 : -1;
        }
        m.push_back(std::move(row));
    }
    return m;
}

/// Rational rank of first homology.
inline std::size_t betti1(const Complex& cx) {
    const SpanningForest f = spanning_forest(cx);
    std::vector<std::string> nontree;
    for (const auto& id : cx.sorted_edge_ids())
        if (!f.tree_edges.count(id)) nontree.push_back(id);
    return nontree.size() - rank(face_matrix(cx, nontree));
}

}  // namespace catform
