/*
 * Canonical example bundles: a complex, a closed form, a suggested fixed
 * set and report metadata, generated deterministically. Angle-style
 * forms are normalized to total period 1 so everything stays rational.
 */
#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "catform/flow.hpp"
#include "catform/io.hpp"
#include "catform/one_form.hpp"

namespace catform {

struct ExampleSpec {
    std::string name;
    std::optional<int> size;
};

struct ExampleBundle {
    std::string name;
    Complex cx;
    OneForm form;
    Flow suggested_flow;
    std::vector<std::pair<std::string, std::string>> metadata;

    const std::set<std::string>& suggested_fixed() const { return suggested_flow.fixed; }
};

namespace detail {

inline ExampleBundle make_circle(int n) {
    if (n < 1 || n > 500) throw Error("circle: size out of range (1..500), got " + std::to_string(n));
    std::vector<std::string> vs;
    std::vector<EdgeDecl> es;
    for (int i = 0; i < n; ++i) vs.push_back("v" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        es.push_back({"e" + std::to_string(i), vs[static_cast<std::size_t>(i)],
                      vs[static_cast<std::size_t>((i + 1) % n)]});
    ExampleBundle b;
    b.name = "circle";
    b.cx = Complex(vs, es, {});
    for (const auto& e : b.cx.edges()) b.form.weight[e.id] = Rat(1, static_cast<unsigned long>(n));
    // free flow: descend against the orientation
    for (int i = 0; i < n; ++i)
        b.suggested_flow.succ[vs[static_cast<std::size_t>(i)]] =
            SignedEdge{"e" + std::to_string((i + n - 1) % n), false};
    b.metadata = {{"size", std::to_string(n)}, {"period-normalization", "1"}};
    return b;
}

inline ExampleBundle make_line_x3(int n) {
    if (n < 3 || n > 99 || n % 2 == 0)
        throw Error("line-x3: size must be odd and in 3..99, got " + std::to_string(n));
    std::vector<std::string> vs;
    std::vector<EdgeDecl> es;
    const int half = (n - 1) / 2;
    auto cube = [](long x) { return x * x * x; };
    for (int i = 0; i < n; ++i) vs.push_back("v" + std::to_string(i));
    ExampleBundle b;
    b.name = "line-x3";
    for (int i = 0; i + 1 < n; ++i) {
        const std::string id = "e" + std::to_string(i);
        es.push_back({id, vs[static_cast<std::size_t>(i)], vs[static_cast<std::size_t>(i + 1)]});
        b.form.weight[id] = Rat(cube(i + 1 - half) - cube(i - half));
    }
    b.cx = Complex(vs, es, {});
    b.suggested_flow.fixed = {vs.front()};
    // everything slides left toward the forced minimum
    for (int i = 1; i < n; ++i)
        b.suggested_flow.succ[vs[static_cast<std::size_t>(i)]] =
            SignedEdge{"e" + std::to_string(i - 1), false};
    b.metadata = {{"size", std::to_string(n)},
                  {"origin", "v" + std::to_string(half)},
                  {"forced", vs.front()}};
    return b;
}

inline ExampleBundle make_torus() {
    ExampleBundle b;
    b.name = "torus";
    b.cx = Complex({"v"}, {{"a", "v", "v"}, {"b", "v", "v"}},
                   {{"T", {{"a", true}, {"b", true}, {"a", false}, {"b", false}}}});
    b.form.weight["a"] = 1;
    b.form.weight["b"] = 0;
    b.suggested_flow.succ["v"] = SignedEdge{"a", false};
    b.metadata = {{"period-normalization", "1"}};
    return b;
}

inline ExampleBundle make_genus2() {
    // one-vertex genus-2 surface with the a1 loop subdivided at m
    ExampleBundle b;
    b.name = "genus2";
    b.cx = Complex(
        {"v", "m"},
        {{"a1p", "v", "m"}, {"a1q", "m", "v"}, {"b1", "v", "v"}, {"a2", "v", "v"}, {"b2", "v", "v"}},
        {{"R",
          {{"a1p", true},
           {"a1q", true},
           {"b1", true},
           {"a1q", false},
           {"a1p", false},
           {"b1", false},
           {"a2", true},
           {"b2", true},
           {"a2", false},
           {"b2", false}}}});
    b.form.weight["a1p"] = Rat(1, 2);
    b.form.weight["a1q"] = Rat(1, 2);
    b.form.weight["b1"] = 0;
    b.form.weight["a2"] = 0;
    b.form.weight["b2"] = 0;
    b.suggested_flow.fixed = {"v", "m"};
    b.metadata = {{"zeros", "2"}, {"cat-target", "1"}, {"period-normalization", "1"}};
    return b;
}

inline ExampleBundle make_pinched_genus2() {
    // two one-vertex tori wedged at v
    ExampleBundle b;
    b.name = "pinched-genus2";
    b.cx = Complex({"v"},
                   {{"a1", "v", "v"}, {"b1", "v", "v"}, {"a2", "v", "v"}, {"b2", "v", "v"}},
                   {{"T1", {{"a1", true}, {"b1", true}, {"a1", false}, {"b1", false}}},
                    {"T2", {{"a2", true}, {"b2", true}, {"a2", false}, {"b2", false}}}});
    b.form.weight["a1"] = 1;
    b.form.weight["b1"] = 0;
    b.form.weight["a2"] = 1;
    b.form.weight["b2"] = 0;
    b.suggested_flow.fixed = {"v"};
    b.metadata = {{"zeros", "1"}, {"cat-target", "1"}, {"period-normalization", "1"}};
    return b;
}

inline ExampleBundle make_c6_two_zeros() {
    ExampleBundle b;
    b.name = "c6-two-zeros";
    std::vector<std::string> vs;
    std::vector<EdgeDecl> es;
    for (int i = 0; i < 6; ++i) vs.push_back("v" + std::to_string(i));
    for (int i = 0; i < 6; ++i)
        es.push_back({"e" + std::to_string(i), vs[static_cast<std::size_t>(i)],
                      vs[static_cast<std::size_t>((i + 1) % 6)]});
    b.cx = Complex(vs, es, {});
    for (int i = 0; i < 5; ++i) b.form.weight["e" + std::to_string(i)] = -1;
    b.form.weight["e5"] = 6;
    b.suggested_flow.fixed = {"v2", "v5"};
    // forward flow; v0 also descends along -e5, but the suggested
    // dynamics walk the cycle so both basins stay two steps deep
    for (int i : {0, 1, 3, 4})
        b.suggested_flow.succ["v" + std::to_string(i)] = SignedEdge{"e" + std::to_string(i), true};
    b.metadata = {{"zeros", "2"}, {"suggested-N", "3"}};
    return b;
}

}  // namespace detail

inline ExampleBundle generate(const ExampleSpec& spec) {
    const auto sized = [&](int fallback) { return spec.size ? *spec.size : fallback; };
    const auto no_size = [&](ExampleBundle b) {
        if (spec.size) throw Error(spec.name + ": size parameter is not applicable");
        return b;
    };
    if (spec.name == "circle") return detail::make_circle(sized(3));
    if (spec.name == "line-x3") return detail::make_line_x3(sized(5));
    if (spec.name == "torus") return no_size(detail::make_torus());
    if (spec.name == "genus2") return no_size(detail::make_genus2());
    if (spec.name == "pinched-genus2") return no_size(detail::make_pinched_genus2());
    if (spec.name == "c6-two-zeros") return no_size(detail::make_c6_two_zeros());
    throw Error("unknown example '" + spec.name +
                "' (known: circle, line-x3, torus, genus2, pinched-genus2, c6-two-zeros)");
}

inline ExampleBundle generate(const std::string& name, std::optional<int> size = std::nullopt) {
    return generate(ExampleSpec{name, size});
}

/// Full bundle text: metadata as comments, then complex, form and flow lines.
inline std::string serialize(const ExampleBundle& b) {
    std::ostringstream out;
    out << "# catform example bundle: " << b.name << "\n";
    for (const auto& kv : b.metadata) out << "# meta " << kv.first << " " << kv.second << "\n";
    out << serialize(b.cx);
    out << serialize_form_lines(b.form.weight);
    out << serialize_flow_lines(b.suggested_flow.fixed, b.suggested_flow.succ);
    return out.str();
}

}  // namespace catform
