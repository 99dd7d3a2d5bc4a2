/*
 * Exact rational scalars used throughout the library.
 *
 * Values are GMP-backed and kept canonical (gcd-reduced, positive
 * denominator), so equality and ordering are plain mpq comparisons.
 */
#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace catform {

using Rat = mpq_class;

/// Base class for all domain and input errors raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Parses "p", "-p" or "p/q" with q > 0. Throws Error on anything else.
inline Rat rat_parse(const std::string& text) {
    const auto bad = [&]() -> Rat {
        throw Error("bad rational '" + text + "' (expected <p> or <p>/<q> with q > 0)");
    };
    if (text.empty()) return bad();
    std::size_t i = 0;
    if (text[i] == '-' || text[i] == '+') ++i;
    std::size_t digits = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i, ++digits;
    if (digits == 0) return bad();
    std::string num = text.substr(0, i);
    std::string den = "1";
    if (i < text.size()) {
        if (text[i] != '/') return bad();
        den = text.substr(i + 1);
        if (den.empty()) return bad();
        for (char c : den)
            if (c < '0' || c > '9') return bad();
    }
    Rat r{mpz_class(num), mpz_class(den)};
    if (r.get_den() == 0) return bad();
    r.canonicalize();
    return r;
}

/// Always renders as "p/q" (q > 0, gcd-reduced), e.g. "1/1", "-3/2".
inline std::string rat_str(const Rat& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

/// gcd over the rationals: gcd(p1/q1, p2/q2) = gcd(p1*q2, p2*q1)/(q1*q2).
inline Rat rat_gcd(const Rat& a, const Rat& b) {
    if (a == 0) return rat_abs(b);
    if (b == 0) return rat_abs(a);
    mpz_class n;
    mpz_gcd(n.get_mpz_t(), mpz_class(a.get_num() * b.get_den()).get_mpz_t(),
            mpz_class(b.get_num() * a.get_den()).get_mpz_t());
    Rat g(n, a.get_den() * b.get_den());
    g.canonicalize();
    return rat_abs(g);
}

/// Smallest integer m with m >= x.
inline mpz_class rat_ceil(const Rat& x) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

}  // namespace catform
