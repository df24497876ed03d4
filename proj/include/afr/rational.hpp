#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace afr {

// Exact rational scalar. All core computation stays in Rat; floating point
// appears only in benchmark reporting.
using Rat = mpq_class;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rat rat_of(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

// "sign digits [. digits]" -> exact rational. "0.1" becomes 1/10.
inline Rat parse_decimal(std::string_view s, std::string_view whole) {
    bool neg = false;
    std::string_view body = s;
    if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
        neg = body.front() == '-';
        body.remove_prefix(1);
    }
    std::string digits;
    std::size_t frac_len = 0;
    auto dot = body.find('.');
    if (dot == std::string_view::npos) {
        if (!all_digits(body)) throw ParseError("not a number: '" + std::string(whole) + "'");
        digits = std::string(body);
    } else {
        std::string_view ip = body.substr(0, dot);
        std::string_view fp = body.substr(dot + 1);
        if (ip.empty() && fp.empty()) throw ParseError("not a number: '" + std::string(whole) + "'");
        if (!ip.empty() && !all_digits(ip)) throw ParseError("not a number: '" + std::string(whole) + "'");
        if (!fp.empty() && !all_digits(fp)) throw ParseError("not a number: '" + std::string(whole) + "'");
        digits = std::string(ip) + std::string(fp);
        frac_len = fp.size();
        if (digits.empty()) throw ParseError("not a number: '" + std::string(whole) + "'");
    }
    mpz_class num(digits, 10);
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    Rat r(num, den);
    r.canonicalize();
    if (neg) r = -r;
    return r;
}

}  // namespace detail

// Accepts "p/q" with integer or decimal parts disallowed on q, plain integers,
// and decimal strings; always exact.
inline Rat rat_parse(std::string_view s) {
    if (s.empty()) throw ParseError("empty number");
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return detail::parse_decimal(s, s);
    Rat num = detail::parse_decimal(s.substr(0, slash), s);
    Rat den = detail::parse_decimal(s.substr(slash + 1), s);
    if (den == 0) throw ParseError("zero denominator: '" + std::string(s) + "'");
    return Rat(num / den);
}

// Canonical serialization: "p" when the denominator is one, else "p/q".
inline std::string rat_str(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline double rat_double(const Rat& r) { return r.get_d(); }

inline const Rat& rat_min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

}  // namespace afr
