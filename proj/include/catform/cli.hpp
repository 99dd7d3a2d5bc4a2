/*
 * Command-line surface. run() is the whole tool: it parses argv, reads
 * the referenced files and prints byte-deterministic reports.
 *
 * Exit codes: 0 success, 1 domain failure (violation reports, failure
 * witnesses, non-exact forms, infeasible targets), 2 input error (bad
 * files, bad flags, unknown subcommands or examples).
 */
#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "catform/certificate.hpp"
#include "catform/generators.hpp"
#include "catform/io.hpp"

namespace catform {
namespace cli {

struct InputFailure {
    std::string message;  // exit 2
};
struct DomainFailure {
    std::string message;  // exit 1
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputFailure{"cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Bundle load(const std::string& path) {
    try {
        return parse_bundle(read_file(path));
    } catch (const ParseError& e) {
        throw InputFailure{path + ": " + e.what()};
    }
}

inline OneForm need_form(const std::string& path, const Bundle& b) {
    if (!b.has_form()) throw InputFailure{path + ": no form lines"};
    OneForm w{b.form};
    try {
        require_total(b.complex, w);
    } catch (const Error& e) {
        throw InputFailure{path + ": " + e.what()};
    }
    return w;
}

inline std::set<std::string> parse_fix(const std::string& csv) {
    std::set<std::string> out;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.insert(item);
    return out;
}

/*
 * The flow a command operates with: succ lines in the file win; else one
 * is built from the declared fixed set (--fix overrides the file's fixed
 * lines; with neither, the forced set gives the minimal flow).
 */
inline Flow resolve_flow(const Complex& cx, const OneForm& w, const Bundle& b,
                         const std::optional<std::string>& fix_csv, Policy policy) {
    if (!b.succ.empty() && !fix_csv) {
        Flow fl{b.fixed, b.succ};
        const auto violations = validate_flow(cx, w, fl);
        if (!violations.empty()) {
            std::string msg = "flow in file is invalid:";
            for (const auto& v : violations) msg += "\n  " + v;
            throw DomainFailure{msg};
        }
        return fl;
    }
    std::set<std::string> declared = fix_csv ? parse_fix(*fix_csv) : b.fixed;
    if (!fix_csv && declared.empty()) declared = forced_fixed(cx, w);
    try {
        return build_flow(cx, w, declared, policy);
    } catch (const Error& e) {
        throw DomainFailure{e.what()};
    }
}

inline Rat parse_threshold(const std::string& text) {
    Rat n;
    try {
        n = rat_parse(text);
    } catch (const Error& e) {
        throw InputFailure{e.what()};
    }
    if (n <= 0) throw InputFailure{"--N must be positive, got " + text};
    return n;
}

inline void print_star_report(std::ostream& out, const StarReport& rep) {
    out << "star " << rep.center << " N " << rat_str(rep.threshold)
        << (rep.strict ? " strict" : "") << "\n";
    out << "orbits-tested " << rep.orbits_tested << "\n";
    out << "b " << (rep.b_ok ? "ok" : "FAIL") << "\n";
    for (const auto& bv : rep.b_violations) {
        out << "b-violation anchor " << rat_str(bv.anchor) << " times";
        for (auto t : bv.times) out << " " << t;
        out << " launch " << to_string(bv.orbit.start);
        if (bv.exit) out << " exit " << to_string(*bv.exit);
        out << "\n";
    }
    out << "c " << (rep.c_ok ? "ok" : "FAIL") << "\n";
    for (const auto& cr : rep.cycle_returns) {
        out << "c-violation chain";
        for (const auto& hop : cr.hops) out << " " << hop.source;
        out << " -> " << rep.center << " pump " << cr.pump.get_str() << " drop "
            << rat_str(cr.drop) << " via " << to_string(cr.hops.front().exit) << "\n";
    }
    for (const auto& orr : rep.orbit_returns)
        out << "c-violation orbit " << to_string(orr.orbit.start) << " exit " << orr.exit_index
            << " return " << orr.return_index << " drop " << rat_str(orr.drop) << "\n";
}

inline void print_failure(std::ostream& out, const FailureWitness& fail) {
    out << to_string(fail.reason);
    if (fail.vertex) out << " at '" << *fail.vertex << "'";
    out << "\n";
    if (fail.star) print_star_report(out, *fail.star);
}

inline void print_orbit(std::ostream& out, const Complex& cx, const OneForm& w,
                        const LiftedPotential& pot, const Orbit& o) {
    out << "start " << to_string(o.start) << " f~ " << rat_str(pot.eval(o.start)) << "\n";
    for (std::size_t i = 0; i < o.steps.size(); ++i)
        out << "step " << to_string(o.steps[i]) << " -> " << to_string(o.points[i + 1]) << " f~ "
            << rat_str(pot.eval(o.points[i + 1])) << "\n";
    if (o.absorbed) {
        out << "absorbed at " << o.absorbed_at << " drop " << rat_str(o.total_drop()) << "\n";
    } else {
        out << "descends-forever at " << o.last().vertex << " cycle";
        for (const auto& s : o.cycle_steps()) out << " " << to_string(s);
        out << " drop " << rat_str(o.cycle_drop) << "\n";
    }
    (void)cx;
    (void)w;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    CLI::App app{"exact closed-1-form toolkit on finite 2-complexes"};
    app.require_subcommand(1);

    std::string file, file2, start_vertex, center, name;
    std::vector<std::string> path_steps;
    std::optional<std::string> fix_csv, n_text, out_path;
    std::string policy_text = "steepest";
    std::optional<int> size;
    bool strict_star = false;

    auto add_flow_flags = [&](CLI::App* sub) {
        sub->add_option("--fix", fix_csv, "comma-separated declared fixed vertices");
        sub->add_option("--policy", policy_text, "successor policy: steepest|first")
            ->check(CLI::IsMember({"steepest", "first"}));
    };

    auto* c_validate = app.add_subcommand("validate", "check a bundle file");
    c_validate->add_option("file", file)->required();
    auto* c_periods = app.add_subcommand("periods", "periods over the fundamental cycles");
    c_periods->add_option("file", file)->required();
    auto* c_class = app.add_subcommand("class", "compare the classes of two forms");
    c_class->add_option("file", file)->required();
    c_class->add_option("file2", file2)->required();
    auto* c_exact = app.add_subcommand("exact", "test exactness, print a primitive");
    c_exact->add_option("file", file)->required();
    auto* c_integrate = app.add_subcommand("integrate", "integrate along a path");
    c_integrate->add_option("file", file)->required();
    c_integrate->add_option("start", start_vertex)->required();
    c_integrate->add_option("steps", path_steps, "signed edges, e.g. +e0 -e1");
    auto* c_flow_build = app.add_subcommand("flow-build", "build a gradient-like flow");
    c_flow_build->add_option("file", file)->required();
    add_flow_flags(c_flow_build);
    auto* c_orbit = app.add_subcommand("orbit", "trace the orbit of a vertex");
    c_orbit->add_option("file", file)->required();
    c_orbit->add_option("start", start_vertex)->required();
    add_flow_flags(c_orbit);
    auto* c_connections = app.add_subcommand("connections", "connection digraph of the flow");
    c_connections->add_option("file", file)->required();
    add_flow_flags(c_connections);
    auto* c_homoclinic = app.add_subcommand("homoclinic", "simple cycles of the digraph");
    c_homoclinic->add_option("file", file)->required();
    add_flow_flags(c_homoclinic);
    auto* c_star = app.add_subcommand("star-check", "gradient convexity of a closed star");
    c_star->add_option("file", file)->required();
    c_star->add_option("center", center)->required();
    c_star->add_option("--N", n_text, "threshold p/q")->required();
    c_star->add_flag("--strict-star", strict_star, "flag any re-entry, not only deep ones");
    add_flow_flags(c_star);
    auto* c_cat = app.add_subcommand("cat-cert", "build and verify a category certificate");
    c_cat->add_option("file", file)->required();
    c_cat->add_option("--N", n_text, "threshold p/q (default: stabilization bound)");
    add_flow_flags(c_cat);
    auto* c_example = app.add_subcommand("example", "emit a canonical example bundle");
    c_example->add_option("name", name)->required();
    c_example->add_option("--size", size);
    c_example->add_option("--out", out_path, "write the bundle here instead of stdout");

    try {
        std::vector<std::string> reversed_args(args.rbegin(), args.rend());
        app.parse(reversed_args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        const Policy policy = policy_parse(policy_text);

        if (c_validate->parsed()) {
            const Bundle b = load(file);
            std::vector<std::string> violations = validate(b.complex);
            bool form_closed = false;
            if (b.has_form()) {
                const OneForm w = need_form(file, b);
                const auto rep = is_closed(b.complex, w);
                form_closed = rep.closed;
                for (const auto& [face, r] : rep.residuals)
                    violations.push_back("form is not closed on face '" + face + "' (sum " +
                                         rat_str(r) + ")");
            }
            if (!b.succ.empty()) {
                if (!b.has_form()) {
                    violations.push_back("flow lines present but no form to validate against");
                } else if (!form_closed) {
                    violations.push_back("flow not checked: the form is not closed");
                } else {
                    for (const auto& v : validate_flow(b.complex, OneForm{b.form}, Flow{b.fixed, b.succ}))
                        violations.push_back("flow: " + v);
                }
            }
            if (violations.empty()) {
                out << "ok\n";
                return 0;
            }
            for (const auto& v : violations) out << "violation: " << v << "\n";
            return 1;
        }

        if (c_periods->parsed()) {
            const Bundle b = load(file);
            const OneForm w = need_form(file, b);
            for (const auto& [edge, p] : periods(b.complex, w).entries)
                out << "period " << edge << " = " << rat_str(p) << "\n";
            return 0;
        }

        if (c_class->parsed()) {
            const Bundle b1 = load(file), b2 = load(file2);
            if (!(b1.complex == b2.complex))
                throw InputFailure{"the two files carry different complexes"};
            const OneForm w1 = need_form(file, b1), w2 = need_form(file2, b2);
            const auto cmp = same_class(b1.complex, w1, w2);
            out << "same-class: " << (cmp.same ? "true" : "false") << "\n";
            if (cmp.same) {
                out << serialize_val_lines(cmp.primitive->value);
                return 0;
            }
            out << "witness period " << cmp.witness->first << " = " << rat_str(cmp.witness->second)
                << "\n";
            return 1;
        }

        if (c_exact->parsed()) {
            const Bundle b = load(file);
            const OneForm w = need_form(file, b);
            const auto ex = is_exact(b.complex, w);
            if (ex.primitive) {
                out << serialize_val_lines(ex.primitive->value);
                return 0;
            }
            out << "not-exact: period " << ex.witness->first << " = " << rat_str(ex.witness->second)
                << "\n";
            return 1;
        }

        if (c_integrate->parsed()) {
            const Bundle b = load(file);
            const OneForm w = need_form(file, b);
            Path p{start_vertex, {}};
            for (const auto& t : path_steps) {
                if (t.size() < 2 || (t[0] != '+' && t[0] != '-'))
                    throw InputFailure{"bad path step '" + t + "' (expected +edge or -edge)"};
                p.steps.push_back(SignedEdge{t.substr(1), t[0] == '+'});
            }
            try {
                out << "integral = " << rat_str(integrate(b.complex, w, p)) << "\n";
            } catch (const Error& e) {
                throw InputFailure{e.what()};
            }
            return 0;
        }

        if (c_flow_build->parsed()) {
            const Bundle b = load(file);
            const OneForm w = need_form(file, b);
            std::set<std::string> declared = fix_csv ? parse_fix(*fix_csv)
                                            : !b.fixed.empty() ? b.fixed
                                                               : forced_fixed(b.complex, w);
            const Flow fl = build_flow(b.complex, w, declared, policy);
            out << serialize_flow_lines(fl.fixed, fl.succ);
            return 0;
        }

        if (c_orbit->parsed()) {
            const Bundle b = load(file);
            const OneForm w = need_form(file, b);
            const Flow fl = resolve_flow(b.complex, w, b, fix_csv, policy);
            if (!b.complex.has_vertex(start_vertex))
                throw InputFailure{"unknown start vertex '" + start_vertex + "'"};
            const LiftedPotential pot = potential(b.complex, w);
            print_orbit(out, b.complex, w, pot,
                        orbit(b.complex, w, pot, fl, CoverPoint{start_vertex, Rat(0)}));
            return 0;
        }

        if (c_connections->parsed()) {
            const Bundle b = load(file);
            const OneForm w = need_form(file, b);
            out << serialize(connections(b.complex, w, resolve_flow(b.complex, w, b, fix_csv, policy)));
            return 0;
        }

        if (c_homoclinic->parsed()) {
            const Bundle b = load(file);
            const OneForm w = need_form(file, b);
            const auto d = connections(b.complex, w, resolve_flow(b.complex, w, b, fix_csv, policy));
            out << serialize_cycles(homoclinic_cycles(d));
            return 0;
        }

        if (c_star->parsed()) {
            const Bundle b = load(file);
            const OneForm w = need_form(file, b);
            const Flow fl = resolve_flow(b.complex, w, b, fix_csv, policy);
            if (!fl.fixed.count(center))
                throw InputFailure{"star-check center '" + center + "' is not a fixed vertex"};
            const StarReport rep =
                validate_star(b.complex, w, fl, center, parse_threshold(*n_text), strict_star);
            print_star_report(out, rep);
            return rep.ok() ? 0 : 1;
        }

        if (c_cat->parsed()) {
            const Bundle b = load(file);
            const OneForm w = need_form(file, b);
            const Flow fl = resolve_flow(b.complex, w, b, fix_csv, policy);
            std::optional<CatCertificate> cert;
            Rat used;
            if (n_text) {
                used = parse_threshold(*n_text);
                BuildOutcome built = build_certificate(b.complex, w, fl, used);
                if (!built.ok()) {
                    out << "cat-certificate FAILED N=" << rat_str(used) << "\n";
                    print_failure(out, *built.failure);
                    return 1;
                }
                cert = std::move(built.certificate);
            } else {
                CatResult res = cat_upper(b.complex, w, fl);
                used = res.bound;
                if (!res.ok()) {
                    out << "cat-certificate FAILED N=" << rat_str(used) << "\n";
                    print_failure(out, *res.failure);
                    return 1;
                }
                BuildOutcome built = build_certificate(b.complex, w, fl, used);
                cert = std::move(built.certificate);
            }
            const bool verified = verify_certificate(b.complex, w, fl, *cert).ok;
            out << serialize(*cert, verified);
            return verified ? 0 : 1;
        }

        if (c_example->parsed()) {
            ExampleBundle bundle;
            try {
                bundle = generate(name, size);
            } catch (const Error& e) {
                throw InputFailure{e.what()};
            }
            const std::string text = serialize(bundle);
            if (out_path) {
                std::ofstream f(*out_path, std::ios::binary);
                if (!f) throw InputFailure{"cannot write '" + *out_path + "'"};
                f << text;
                for (const auto& kv : bundle.metadata)
                    out << "meta " << kv.first << " " << kv.second << "\n";
                out << "wrote " << *out_path << "\n";
            } else {
                out << text;
            }
            return 0;
        }
    } catch (const InputFailure& e) {
        err << "error: " << e.message << "\n";
        return 2;
    } catch (const DomainFailure& e) {
        err << "error: " << e.message << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace cli
}  // namespace catform
