// TVL and banded market depth on the worked distribution.
#include "ammsim/depth.hpp"

#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace ammsim;
using fixtures::rel_diff;

TEST(Tvl, EmptyPoolIsZero) {
    Pool pool(fixtures::usdc_eth_config(), fixtures::market_price());
    EXPECT_EQ(tvl_usd(pool, fixtures::usdc_eth_prices()), 0.0);
}

TEST(Tvl, WorkedDistribution) {
    // 317594.54 USDC + 150 ETH at 1939.56, frozen from the oracle
    auto wp = fixtures::worked_pool();
    EXPECT_LT(rel_diff(tvl_usd(wp.pool, fixtures::usdc_eth_prices()), 608528.54222335), 1e-9);
}

TEST(Tvl, CurveInvariantHoldsAfterFreeSwap) {
    // value composition shifts with swaps, but the per-range curve constant
    // is preserved at zero fee
    auto wp = fixtures::worked_pool();
    wp.pool.swap_sell_x(Real(50000) * pow10_int(6));
    const Real liquidity = wp.pool.liquidity_at(200580);
    const auto r = wp.pool.reserves_in_range(200580);
    const Real lhs = (r.x + liquidity / tick_math::sqrt_tick_price(200640)) *
                     (r.y + liquidity * tick_math::sqrt_tick_price(200580));
    EXPECT_LE(abs(lhs / (liquidity * liquidity) - 1), Real("1e-9"));
}

TEST(DepthWithin, WideBandEqualsTvl) {
    auto wp = fixtures::worked_pool();
    const double tvl = tvl_usd(wp.pool, fixtures::usdc_eth_prices());
    const double depth = depth_within_usd(wp.pool, 10.0, fixtures::usdc_eth_prices());
    EXPECT_LT(rel_diff(depth, tvl), 1e-12);
}

TEST(DepthWithin, BandEdgeProRatesOnTheCurve) {
    // pct = 1.0001^38 - 1 puts the lower band edge exactly on tick 200580:
    // the full market range plus the [200640, 200656] sliver of the range
    // above. Expected values frozen from the independent oracle.
    auto wp = fixtures::worked_pool();
    const double pct = std::pow(1.0001, 38) - 1;
    const double depth = depth_within_usd(wp.pool, pct, fixtures::usdc_eth_prices());
    EXPECT_LT(rel_diff(depth, 414737.18347501167), 1e-9);
}

TEST(DepthWithin, PositionInsideBandCountsFully) {
    PoolConfig cfg;
    cfg.token_x = "A";
    cfg.token_y = "B";
    cfg.tick_spacing = 1;
    Pool pool(cfg, RawPrice::from_raw(Real(1)));
    // range approx [-1.5%, +1.5%], strictly inside the 2% band
    const int lo = tick_math::price_to_tick(Real(1) / Real("1.015"));
    const int hi = tick_math::price_to_tick(Real("1.015"));
    pool.mint("lp", lo, hi, Real("1e6"));
    const TokenPricesUsd prices{1.0, 1.0};
    EXPECT_LT(rel_diff(depth_within_usd(pool, 0.02, prices), tvl_usd(pool, prices)), 1e-12);
}

TEST(DepthWithin, MonotoneAndBounded) {
    auto wp = fixtures::worked_pool();
    const auto prices = fixtures::usdc_eth_prices();
    const double tvl = tvl_usd(wp.pool, prices);
    double last = 0;
    for (double pct : {0.0005, 0.001, 0.002, 0.005, 0.01, 0.02, 0.1}) {
        const double d = depth_within_usd(wp.pool, pct, prices);
        EXPECT_GE(d, last);
        EXPECT_LE(d, tvl * (1 + 1e-12));
        last = d;
    }
}

TEST(DepthWithin, RejectsNonPositiveBand) {
    auto wp = fixtures::worked_pool();
    EXPECT_THROW(depth_within_usd(wp.pool, 0.0, fixtures::usdc_eth_prices()), ValidationError);
}
