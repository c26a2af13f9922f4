#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace mvforge {

using Integer = boost::multiprecision::cpp_int;
// Always stored in lowest terms with positive denominator; equality is structural.
using Rational = boost::multiprecision::cpp_rational;

// A point with rational coordinates, ambient dimension = coords.size().
using RatPoint = std::vector<Rational>;

inline Integer num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline int sign(const Rational& r) { return r.sign(); }
inline int sign(const Integer& z) { return z.sign(); }

inline Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// Largest integer <= r.
inline Integer floor_rat(const Rational& r) {
    Integer q = num(r) / den(r);
    if (r < 0 && q * den(r) != num(r)) --q;
    return q;
}

// den(p) = lcm of coordinate denominators = min{ d >= 1 : d*p integral }.
inline Integer den(const RatPoint& p) {
    if (p.empty()) throw std::invalid_argument("den: point needs >= 1 coordinate");
    Integer l = 1;
    for (const auto& c : p) l = boost::multiprecision::lcm(l, den(c));
    return l;
}

inline bool in_unit_cube(const RatPoint& p) {
    for (const auto& c : p)
        if (c < 0 || c > 1) return false;
    return true;
}

// Mediant (p+r)/(q+s); in lowest terms automatically when the inputs are
// Farey neighbors.
inline Rational farey_mediant(const Rational& a, const Rational& b) {
    if (!(a < b)) throw std::invalid_argument("farey_mediant: requires a < b");
    return Rational(num(a) + num(b), den(a) + den(b));
}

inline std::string to_string(const Rational& r) {
    std::string s = num(r).str();
    if (den(r) != 1) s += "/" + den(r).str();
    return s;
}

inline std::string to_string(const RatPoint& p) {
    std::string s = "(";
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) s += ",";
        s += to_string(p[i]);
    }
    return s + ")";
}

// Accepts "p" or "p/q", q > 0 after normalization.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(s));
        Integer p(s.substr(0, slash));
        Integer q(s.substr(slash + 1));
        if (q == 0) throw std::invalid_argument("zero denominator");
        return Rational(p, q);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument(std::string("parse_rational: bad input '") + s + "'");
    }
}

}  // namespace mvforge
