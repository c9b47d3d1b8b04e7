#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace limitlog {

// All semantic arithmetic is exact and unbounded.  Int is used for program
// constants, fact values and constraint coefficients; Rat only inside the
// rational relaxation of the optimiser.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int int_gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

// Floor division/modulus (C++ '/' truncates toward zero, which is wrong for
// the integer reasoning done here).
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}
inline Int floor_mod(const Int& a, const Int& b) { return a - floor_div(a, b) * b; }

inline Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

}  // namespace limitlog
