#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace tadist {

// Exact time arithmetic. All constructions in this library stay on small
// denominators (halves after discretization, <= 60 in the dense samplers),
// so a 64-bit rational never comes close to overflow.
using Rational = boost::rational<long long>;

inline long long floor_of(const Rational& r) {
    long long q = r.numerator() / r.denominator();
    if (r.numerator() < 0 && q * r.denominator() != r.numerator()) --q;
    return q;
}

inline Rational frac_of(const Rational& r) {
    return r - Rational(floor_of(r));
}

inline Rational rat_abs(const Rational& r) {
    return r < Rational(0) ? -r : r;
}

// True iff r is a multiple of 1/2.
inline bool is_half_integral(const Rational& r) {
    return r.denominator() == 1 || r.denominator() == 2;
}

inline std::string rational_str(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace tadist
