#pragma once

#include <stdexcept>
#include <string>

#include "ammsim/real.hpp"

namespace ammsim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed inputs: bad config, misaligned ticks, schema violations.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Mathematically inadmissible arguments (tick out of bounds, nonpositive
// price, inverting a formula outside its domain).
class DomainError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

// File-level parse failure (row-level problems are reported as diagnostics).
class ParseError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// A swap ran out of initialized liquidity before the input was consumed.
// Carries the fill achieved so far; the pool state is left untouched.
class LiquidityExhaustedError : public Error {
public:
    LiquidityExhaustedError(std::string message, Real delta_x, Real delta_y,
                            Real fee_paid, int ticks_crossed)
        : Error(std::move(message)),
          delta_x(std::move(delta_x)),
          delta_y(std::move(delta_y)),
          fee_paid(std::move(fee_paid)),
          ticks_crossed(ticks_crossed) {}

    Real delta_x;
    Real delta_y;
    Real fee_paid;
    int ticks_crossed;
};

}  // namespace ammsim
