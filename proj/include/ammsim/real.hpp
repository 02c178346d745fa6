#pragma once

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cstdint>
#include <string>

namespace ammsim {

// All curve math runs on 50-digit decimals. Worked pool numbers survive long
// chains of sqrt/divide without visible drift, and raw on-chain magnitudes
// (1e6 .. 1e30) stay exact under addition. double appears only at the
// metrics/reporting boundary.
using Real = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<50>,
                                           boost::multiprecision::et_off>;

inline double to_double(const Real& v) { return static_cast<double>(v); }

// Full-precision decimal string; deterministic and round-trips through Real.
inline std::string to_decimal_string(const Real& v) { return v.str(); }

// base^exp by squaring; exp may be negative.
inline Real pow_int(const Real& base, std::int64_t exp) {
    if (exp == 0) return Real(1);
    const bool invert = exp < 0;
    std::uint64_t n = invert ? static_cast<std::uint64_t>(-(exp + 1)) + 1
                             : static_cast<std::uint64_t>(exp);
    Real result(1);
    Real square = base;
    while (n > 0) {
        if (n & 1u) result *= square;
        n >>= 1u;
        if (n > 0) square *= square;
    }
    return invert ? Real(1) / result : result;
}

inline Real pow10_int(int exp) { return pow_int(Real(10), exp); }

}  // namespace ammsim
