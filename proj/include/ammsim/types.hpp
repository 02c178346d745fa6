#pragma once

#include <cstdint>
#include <string>

#include "ammsim/errors.hpp"
#include "ammsim/real.hpp"

namespace ammsim {

// Immutable pool parameters. fee_bp = 0 disables the fee so analytical runs
// can match fee-free curve arithmetic; live tiers are {1, 5, 30, 100}.
struct PoolConfig {
    std::string token_x;
    std::string token_y;
    int decimals_x = 0;
    int decimals_y = 0;
    int fee_bp = 0;
    int tick_spacing = 1;

    void validate() const {
        if (tick_spacing < 1)
            throw ValidationError("tick_spacing must be >= 1");
        if (fee_bp != 0 && fee_bp != 1 && fee_bp != 5 && fee_bp != 30 && fee_bp != 100)
            throw ValidationError("fee_bp must be one of {0, 1, 5, 30, 100}");
        if (decimals_x < 0 || decimals_x > 36 || decimals_y < 0 || decimals_y > 36)
            throw ValidationError("token decimals must lie in [0, 36]");
    }

    // raw price = adjusted (human) price * 10^(decimals_y - decimals_x)
    Real raw_price_factor() const { return pow10_int(decimals_y - decimals_x); }
};

// Price of token X in units of token Y, in raw on-chain units. The adjusted
// (human-readable) form divides out the decimal mismatch; conversion happens
// only at I/O boundaries, engine math stays raw.
struct RawPrice {
    Real raw;

    static RawPrice from_raw(Real v) {
        if (v <= 0) throw DomainError("price must be positive");
        return RawPrice{std::move(v)};
    }
    static RawPrice from_adjusted(const Real& adjusted, const PoolConfig& cfg) {
        return from_raw(adjusted * cfg.raw_price_factor());
    }
    Real adjusted(const PoolConfig& cfg) const { return raw / cfg.raw_price_factor(); }
};

using PositionId = std::uint64_t;

struct LiquidityPosition {
    PositionId id = 0;
    std::string owner;
    int tick_lower = 0;
    int tick_upper = 0;
    Real liquidity;
};

enum class Side { sell_x, buy_x };

inline const char* side_name(Side s) { return s == Side::sell_x ? "sell_x" : "buy_x"; }

// Executed trade, trader-side conventions: positive = paid into the pool,
// negative = received. delta_x/delta_y are gross of fee_paid.
struct SwapResult {
    Real delta_x;
    Real delta_y;
    RawPrice average_price;  // |delta_y / delta_x|
    Real slippage_bp;        // |p_avg / p_mkt_pre - 1| * 1e4
    int ticks_crossed = 0;
    Real fee_paid;           // input-token raw units
};

// USD per human unit of each token, used for valuation only.
struct TokenPricesUsd {
    double x_usd = 0.0;
    double y_usd = 0.0;
};

}  // namespace ammsim
