#pragma once

/*
 * Exact scalars for the ground field Q.
 *
 * cpp_rational keeps every value reduced with positive denominator, so the
 * usual elimination hazards (drift, overflow) cannot occur.  All arithmetic
 * in the library goes through this alias; nothing ever touches a float.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace gorlab {

using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numer(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denom(const Rational& q) { return boost::multiprecision::denominator(q); }

// "p" or "p/q", q > 0 after reduction
inline std::string rational_to_string(const Rational& q) {
    std::string s = numer(q).str();
    if (denom(q) != 1) s += "/" + denom(q).str();
    return s;
}

inline Rational rational_from_string(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(text));
        Integer p(text.substr(0, slash));
        Integer q(text.substr(slash + 1));
        if (q == 0) throw std::runtime_error("zero denominator");
        return Rational(p, q);
    } catch (const std::exception&) {
        throw std::runtime_error("bad rational literal: " + text);
    }
}

}  // namespace gorlab
