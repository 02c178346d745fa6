#pragma once

#include <cmath>
#include <unordered_map>

#include "ammsim/errors.hpp"
#include "ammsim/real.hpp"

namespace ammsim::tick_math {

// Beyond |i| = 887272 the price 1.0001^i leaves the range protocols admit.
inline constexpr int kMinTick = -887272;
inline constexpr int kMaxTick = 887272;

inline const Real& tick_base() {
    static const Real base("1.0001");
    return base;
}

/// Price of tick i, i.e. 1.0001^i in raw units, via exponentiation by
/// squaring on the decimal representation. Strictly increasing in i.
inline Real tick_to_price(int i) {
    if (i < kMinTick || i > kMaxTick)
        throw DomainError("tick " + std::to_string(i) + " outside [-887272, 887272]");
    // Pool walks revisit the same boundary ticks constantly; memoize.
    thread_local std::unordered_map<int, Real> cache;
    auto it = cache.find(i);
    if (it != cache.end()) return it->second;
    Real p = pow_int(tick_base(), i);
    if (cache.size() > 4096) cache.clear();
    return cache.emplace(i, std::move(p)).first->second;
}

inline Real sqrt_tick_price(int i) {
    thread_local std::unordered_map<int, Real> cache;
    auto it = cache.find(i);
    if (it != cache.end()) return it->second;
    Real s = sqrt(tick_to_price(i));
    if (cache.size() > 4096) cache.clear();
    return cache.emplace(i, std::move(s)).first->second;
}

/// Largest i with 1.0001^i <= p. Seeded from a double log and corrected with
/// exact comparisons, so the floor is right even at tick boundaries.
inline int price_to_tick(const Real& p) {
    if (p <= 0) throw DomainError("price_to_tick: price must be positive");
    static const double log_base = std::log(1.0001);
    double seed = std::log(to_double(p)) / log_base;
    if (seed < static_cast<double>(kMinTick) - 2 || seed > static_cast<double>(kMaxTick) + 2)
        throw DomainError("price_to_tick: price outside representable tick range");
    int i = static_cast<int>(std::floor(seed));
    while (i < kMaxTick && tick_to_price(i + 1) <= p) ++i;
    while (i > kMinTick && tick_to_price(i) > p) --i;
    if (tick_to_price(i) > p || (i < kMaxTick && tick_to_price(i + 1) <= p))
        throw DomainError("price_to_tick: price outside representable tick range");
    if (i == kMaxTick && p >= tick_to_price(kMaxTick) * tick_base())
        throw DomainError("price_to_tick: price beyond the top tick range");
    return i;
}

// Floor alignment to a spacing multiple; works for negative ticks.
inline int align_down(int tick, int spacing) {
    int q = tick / spacing;
    if (tick % spacing != 0 && tick < 0) --q;
    return q * spacing;
}

inline bool is_aligned(int tick, int spacing) { return tick % spacing == 0; }

}  // namespace ammsim::tick_math
