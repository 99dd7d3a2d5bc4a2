/*
 * The line-oriented text format. One declaration per line, '#' starts a
 * comment, ids match [A-Za-z0-9_]+:
 *
 *   vertex <id>
 *   edge <id> <tail-id> <head-id>
 *   face <id> <+/-edge-id> ...
 *   form <edge-id> <p>/<q>        (integer shorthand <p> allowed)
 *   val <vertex-id> <p>/<q>
 *   fixed <vertex-id>
 *   succ <vertex-id> <+/-edge-id>
 *
 * A file may carry any subset of the sections; parsing resolves every
 * reference and enforces the complex invariants, reporting 1-based line
 * numbers. Serialization emits declarations sorted by id within each
 * sort, rationals gcd-reduced with positive denominator.
 */
#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "catform/cell_complex.hpp"
#include "catform/rational.hpp"

namespace catform {

struct ParseError : Error {
    int line;
    ParseError(int line_, const std::string& what)
        : Error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

struct Bundle {
    Complex complex;
    std::map<std::string, Rat> form;   // edge -> weight
    std::map<std::string, Rat> vals;   // vertex -> value
    std::set<std::string> fixed;
    std::map<std::string, SignedEdge> succ;

    bool has_form() const { return !form.empty(); }
    bool has_flow() const { return !fixed.empty() || !succ.empty(); }
};

namespace detail {

inline bool valid_id(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
              c == '_'))
            return false;
    return true;
}

inline std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

inline SignedEdge parse_signed(const std::string& t, int line) {
    if (t.size() < 2 || (t[0] != '+' && t[0] != '-'))
        throw ParseError(line, "expected signed edge (+id or -id), got '" + t + "'");
    const std::string id = t.substr(1);
    if (!valid_id(id)) throw ParseError(line, "bad edge id '" + id + "'");
    return SignedEdge{id, t[0] == '+'};
}

inline std::string require_id(const std::string& t, int line) {
    if (!valid_id(t)) throw ParseError(line, "bad id '" + t + "'");
    return t;
}

inline Rat parse_rat_at(const std::string& t, int line) {
    try {
        return rat_parse(t);
    } catch (const Error& e) {
        throw ParseError(line, e.what());
    }
}

}  // namespace detail

inline Bundle parse_bundle(const std::string& text) {
    using namespace detail;
    std::vector<std::string> vertices;
    std::vector<EdgeDecl> edges;
    std::vector<FaceDecl> faces;
    Bundle b;
    // declaration lines, for reporting reference errors at their source
    std::map<std::string, int> edge_line, face_line;
    std::vector<std::pair<int, std::string>> form_decls, val_decls, fixed_decls;
    std::vector<std::pair<int, std::pair<std::string, SignedEdge>>> succ_decls;
    std::set<std::string> vseen, eseen, fseen;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const auto tok = tokens(raw);
        if (tok.empty()) continue;
        const std::string& kind = tok[0];
        if (kind == "vertex") {
            if (tok.size() != 2) throw ParseError(line, "vertex takes one id");
            const std::string id = require_id(tok[1], line);
            if (!vseen.insert(id).second) throw ParseError(line, "duplicate vertex id '" + id + "'");
            vertices.push_back(id);
        } else if (kind == "edge") {
            if (tok.size() != 4) throw ParseError(line, "edge takes <id> <tail> <head>");
            EdgeDecl e{require_id(tok[1], line), require_id(tok[2], line),
                       require_id(tok[3], line)};
            if (!eseen.insert(e.id).second) throw ParseError(line, "duplicate edge id '" + e.id + "'");
            edge_line[e.id] = line;
            edges.push_back(std::move(e));
        } else if (kind == "face") {
            if (tok.size() < 3) throw ParseError(line, "face takes <id> and a boundary word");
            FaceDecl f;
            f.id = require_id(tok[1], line);
            if (!fseen.insert(f.id).second) throw ParseError(line, "duplicate face id '" + f.id + "'");
            for (std::size_t i = 2; i < tok.size(); ++i) f.word.push_back(parse_signed(tok[i], line));
            face_line[f.id] = line;
            faces.push_back(std::move(f));
        } else if (kind == "form") {
            if (tok.size() != 3) throw ParseError(line, "form takes <edge-id> <p>/<q>");
            const std::string id = require_id(tok[1], line);
            if (b.form.count(id)) throw ParseError(line, "duplicate form weight for edge '" + id + "'");
            b.form[id] = parse_rat_at(tok[2], line);
            form_decls.emplace_back(line, id);
        } else if (kind == "val") {
            if (tok.size() != 3) throw ParseError(line, "val takes <vertex-id> <p>/<q>");
            const std::string id = require_id(tok[1], line);
            if (b.vals.count(id)) throw ParseError(line, "duplicate val for vertex '" + id + "'");
            b.vals[id] = parse_rat_at(tok[2], line);
            val_decls.emplace_back(line, id);
        } else if (kind == "fixed") {
            if (tok.size() != 2) throw ParseError(line, "fixed takes one vertex id");
            const std::string id = require_id(tok[1], line);
            if (!b.fixed.insert(id).second) throw ParseError(line, "duplicate fixed declaration '" + id + "'");
            fixed_decls.emplace_back(line, id);
        } else if (kind == "succ") {
            if (tok.size() != 3) throw ParseError(line, "succ takes <vertex-id> <+/-edge-id>");
            const std::string id = require_id(tok[1], line);
            if (b.succ.count(id)) throw ParseError(line, "duplicate succ for vertex '" + id + "'");
            b.succ[id] = parse_signed(tok[2], line);
            succ_decls.emplace_back(line, std::make_pair(id, b.succ[id]));
        } else {
            throw ParseError(line, "unknown declaration '" + kind + "'");
        }
    }

    b.complex = Complex(std::move(vertices), std::move(edges), std::move(faces));

    // resolve references, then enforce the complex invariants
    for (const auto& e : b.complex.edges()) {
        if (!vseen.count(e.tail))
            throw ParseError(edge_line[e.id], "edge '" + e.id + "' references undeclared vertex '" + e.tail + "'");
        if (!vseen.count(e.head))
            throw ParseError(edge_line[e.id], "edge '" + e.id + "' references undeclared vertex '" + e.head + "'");
    }
    for (const auto& f : b.complex.faces())
        for (const auto& s : f.word)
            if (!eseen.count(s.edge))
                throw ParseError(face_line[f.id], "face '" + f.id + "' references undeclared edge '" + s.edge + "'");
    for (const auto& [ln, id] : form_decls)
        if (!eseen.count(id)) throw ParseError(ln, "form references undeclared edge '" + id + "'");
    for (const auto& [ln, id] : val_decls)
        if (!vseen.count(id)) throw ParseError(ln, "val references undeclared vertex '" + id + "'");
    for (const auto& [ln, id] : fixed_decls)
        if (!vseen.count(id)) throw ParseError(ln, "fixed references undeclared vertex '" + id + "'");
    for (const auto& [ln, decl] : succ_decls) {
        if (!vseen.count(decl.first))
            throw ParseError(ln, "succ references undeclared vertex '" + decl.first + "'");
        if (!eseen.count(decl.second.edge))
            throw ParseError(ln, "succ references undeclared edge '" + decl.second.edge + "'");
    }

    const auto violations = validate(b.complex);
    if (!violations.empty()) {
        // attribute the first violation to its face where possible
        for (const auto& f : b.complex.faces())
            if (violations.front().find("'" + f.id + "'") != std::string::npos)
                throw ParseError(face_line.count(f.id) ? face_line[f.id] : 0, violations.front());
        throw ParseError(0, violations.front());
    }
    return b;
}

/// Parses and validates a complex, ignoring any form/val/flow sections.
inline Complex load_complex(const std::string& text) { return parse_bundle(text).complex; }

inline std::string serialize(const Complex& cx) {
    std::ostringstream out;
    for (const auto& v : cx.sorted_vertices()) out << "vertex " << v << "\n";
    std::map<std::string, const EdgeDecl*> es;
    for (const auto& e : cx.edges()) es[e.id] = &e;
    for (const auto& [id, e] : es) out << "edge " << id << " " << e->tail << " " << e->head << "\n";
    std::map<std::string, const FaceDecl*> fs;
    for (const auto& f : cx.faces()) fs[f.id] = &f;
    for (const auto& [id, f] : fs) {
        out << "face " << id;
        for (const auto& s : f->word) out << " " << to_string(s);
        out << "\n";
    }
    return out.str();
}

inline std::string serialize_form_lines(const std::map<std::string, Rat>& form) {
    std::ostringstream out;
    for (const auto& [id, r] : form) out << "form " << id << " " << rat_str(r) << "\n";
    return out.str();
}

inline std::string serialize_val_lines(const std::map<std::string, Rat>& vals) {
    std::ostringstream out;
    for (const auto& [id, r] : vals) out << "val " << id << " " << rat_str(r) << "\n";
    return out.str();
}

inline std::string serialize_flow_lines(const std::set<std::string>& fixed,
                                        const std::map<std::string, SignedEdge>& succ) {
    std::ostringstream out;
    for (const auto& v : fixed) out << "fixed " << v << "\n";
    for (const auto& [v, s] : succ) out << "succ " << v << " " << to_string(s) << "\n";
    return out.str();
}

}  // namespace catform
