// Shared test fixtures: the USDC/ETH 0.3% worked pool (market tick 200618,
// three mints) that most golden tests run against.
#pragma once

#include "ammsim/pool.hpp"

namespace fixtures {

inline constexpr int kMarketTick = 200618;

inline ammsim::PoolConfig usdc_eth_config(int fee_bp = 0) {
    ammsim::PoolConfig cfg;
    cfg.token_x = "USDC";
    cfg.token_y = "ETH";
    cfg.decimals_x = 6;
    cfg.decimals_y = 18;
    cfg.fee_bp = fee_bp;
    cfg.tick_spacing = 60;
    return cfg;
}

inline ammsim::RawPrice market_price() {
    return ammsim::RawPrice::from_raw(ammsim::tick_math::tick_to_price(kMarketTick));
}

// Liquidity implied by the three deposits: 50 ETH on [200520,200640],
// 40 ETH on [200580,200640], 60 ETH on [200580,200700].
struct WorkedPool {
    ammsim::Pool pool;
    ammsim::Real liquidity_1, liquidity_2, liquidity_3;
    ammsim::PositionId id_1, id_2, id_3;
};

inline WorkedPool worked_pool(int fee_bp = 0) {
    using namespace ammsim;
    Pool pool(usdc_eth_config(fee_bp), market_price());
    const Real eth = pow10_int(18);
    const Real l1 = liquidity_from_token_y(Real(50) * eth, 200520, 200640, market_price());
    const Real l2 = liquidity_from_token_y(Real(40) * eth, 200580, 200640, market_price());
    const Real l3 = liquidity_from_token_y(Real(60) * eth, 200580, 200700, market_price());
    const PositionId i1 = pool.mint("lp_1", 200520, 200640, l1).position_id;
    const PositionId i2 = pool.mint("lp_2", 200580, 200640, l2).position_id;
    const PositionId i3 = pool.mint("lp_3", 200580, 200700, l3).position_id;
    return WorkedPool{std::move(pool), l1, l2, l3, i1, i2, i3};
}

// Feed matching the worked example: ETH at $1939.56, USDC at par.
inline ammsim::TokenPricesUsd usdc_eth_prices() { return ammsim::TokenPricesUsd{1.0, 1939.56}; }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace fixtures
