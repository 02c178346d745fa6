#pragma once

#include "ammsim/pool.hpp"

namespace ammsim {

inline double usd_value_of(const Real& x_raw, const Real& y_raw, const PoolConfig& cfg,
                           const TokenPricesUsd& prices) {
    const Real x_human = x_raw / pow10_int(cfg.decimals_x);
    const Real y_human = y_raw / pow10_int(cfg.decimals_y);
    return to_double(x_human * Real(prices.x_usd) + y_human * Real(prices.y_usd));
}

/// Total value locked: every range's reserves at feed prices.
inline double tvl_usd(const Pool& pool, const TokenPricesUsd& prices) {
    Real x_total(0), y_total(0);
    for (const auto& [lo, liquidity] : pool.ranges()) {
        RangeReserves r = pool.reserves_in_range(lo);
        x_total += r.x;
        y_total += r.y;
    }
    return usd_value_of(x_total, y_total, pool.config(), prices);
}

/// USD value of reserves sitting within [p_mkt/(1+pct), p_mkt*(1+pct)].
/// Ranges straddling a band edge are pro-rated on the curve itself: the edge
/// replaces the market price in the clamp, so a vanishing band holds zero and
/// a full-width band recovers the whole range.
inline double depth_within_usd(const Pool& pool, double pct, const TokenPricesUsd& prices) {
    if (!(pct > 0)) throw ValidationError("depth band must be positive");
    const int s = pool.config().tick_spacing;
    const Real p_mkt = pool.market_price().raw;
    const Real one_plus = Real(1) + Real(pct);
    const Real sqrt_band_lo = sqrt(p_mkt / one_plus);
    const Real sqrt_band_hi = sqrt(p_mkt * one_plus);
    const Real sqrt_mkt = sqrt(p_mkt);

    Real x_total(0), y_total(0);
    for (const auto& [lo, liquidity] : pool.ranges()) {
        if (liquidity <= 0) continue;
        const Real sqrt_lo = tick_math::sqrt_tick_price(lo);
        const Real sqrt_hi = tick_math::sqrt_tick_price(lo + s);
        const Real sqrt_z = clamp_sqrt_price(sqrt_mkt, sqrt_lo, sqrt_hi);
        // Y occupies [sqrt_lo, sqrt_z]; intersect with the band.
        {
            const Real a = clamp_sqrt_price(sqrt_band_lo, sqrt_lo, sqrt_z);
            const Real b = clamp_sqrt_price(sqrt_band_hi, sqrt_lo, sqrt_z);
            if (b > a) y_total += liquidity * (b - a);
        }
        // X occupies [sqrt_z, sqrt_hi].
        {
            const Real a = clamp_sqrt_price(sqrt_band_lo, sqrt_z, sqrt_hi);
            const Real b = clamp_sqrt_price(sqrt_band_hi, sqrt_z, sqrt_hi);
            if (b > a) x_total += liquidity * (b - a) / (a * b);
        }
    }
    return usd_value_of(x_total, y_total, pool.config(), prices);
}

}  // namespace ammsim
