// Swap walk against the worked USDC/ETH trades and the crossing formulas.
#include <gtest/gtest.h>

#include "ammsim/pool.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace ammsim;
using fixtures::rel_diff;

namespace {

Real usdc_raw(double amount) { return Real(amount) * pow10_int(6); }
double eth(const Real& raw) { return to_double(raw / pow10_int(18)); }
double usdc(const Real& raw) { return to_double(raw / pow10_int(6)); }

}  // namespace

TEST(SwapSellX, WorkedWithinRangeTrade) {
    // 200K USDC in at fee 0 stays inside the market range
    auto wp = fixtures::worked_pool();
    const SwapResult res = wp.pool.swap_sell_x(usdc_raw(200000));
    EXPECT_NEAR(eth(-res.delta_y), 102.94, 0.01);
    EXPECT_NEAR(to_double(res.average_price.adjusted(wp.pool.config())), 0.0005147, 1e-7);
    EXPECT_NEAR(to_double(res.slippage_bp), 17.0, 1.0);
    EXPECT_EQ(res.ticks_crossed, 0);
    EXPECT_EQ(res.fee_paid, Real(0));
    // full-precision value frozen from the independent oracle
    EXPECT_LT(rel_diff(eth(-res.delta_y), 102.94664606099624), 1e-9);
    // price moved down, still above the range bound
    EXPECT_LT(wp.pool.market_price().raw, fixtures::market_price().raw);
    EXPECT_GT(wp.pool.market_price().raw, tick_math::tick_to_price(200580));
}

TEST(SwapSellX, WorkedTickCrossingTrade) {
    auto wp = fixtures::worked_pool();
    const SwapResult res = wp.pool.swap_sell_x(usdc_raw(250000));
    EXPECT_NEAR(eth(-res.delta_y), 128.63, 0.01);
    EXPECT_NEAR(to_double(res.slippage_bp), 21.0, 1.0);
    EXPECT_EQ(res.ticks_crossed, 1);
    EXPECT_LT(rel_diff(eth(-res.delta_y), 128.62373008622510), 1e-9);
    // terminal price sits inside the next range down
    EXPECT_EQ(wp.pool.market_tick() / 60 * 60, 200520);
}

TEST(SwapSellX, CrossingFormulaSplitsTheWorkedTrade) {
    // max input of the market range and the remainder spent below, evaluated
    // on the engine's own exact state (frozen from the oracle)
    auto wp = fixtures::worked_pool();
    const auto market = wp.pool.reserves_in_range(200580);
    const Real dx_max = range_max_input_x(market, wp.pool.liquidity_at(200580),
                                          tick_math::sqrt_tick_price(200580),
                                          tick_math::sqrt_tick_price(200640));
    EXPECT_LT(rel_diff(usdc(dx_max), 232058.38503342572), 1e-9);
    EXPECT_LT(rel_diff(250000.0 - usdc(dx_max), 17941.614966574281), 1e-7);
}

TEST(SwapSellX, ExactMaxInputLandsOnBoundary) {
    auto wp = fixtures::worked_pool();
    const auto market = wp.pool.reserves_in_range(200580);
    const Real dx_max = range_max_input_x(market, wp.pool.liquidity_at(200580),
                                          tick_math::sqrt_tick_price(200580),
                                          tick_math::sqrt_tick_price(200640));
    wp.pool.swap_sell_x(dx_max);
    EXPECT_EQ(wp.pool.market_price().raw, tick_math::tick_to_price(200580));
}

TEST(SwapSellX, InfinitesimalTradeHasNoSlippage) {
    auto wp = fixtures::worked_pool();
    const SwapResult res = wp.pool.swap_sell_x(Real(1));  // one raw USDC unit
    EXPECT_LT(to_double(res.slippage_bp), 1.0);
}

TEST(SwapSellX, ExhaustionReportsPartialFill) {
    auto wp = fixtures::worked_pool();
    const Real before = wp.pool.market_price().raw;
    try {
        wp.pool.swap_sell_x(usdc_raw(1e9));  // far beyond pooled Y
        FAIL() << "expected LiquidityExhaustedError";
    } catch (const LiquidityExhaustedError& e) {
        EXPECT_GT(e.delta_x, Real(0));
        EXPECT_LT(e.delta_y, Real(0));
        EXPECT_NEAR(eth(-e.delta_y), 150.0, 1e-6);  // all pooled ETH
        EXPECT_GE(e.ticks_crossed, 1);
    }
    // failed swap leaves no trace
    EXPECT_EQ(wp.pool.market_price().raw, before);
}

TEST(SwapBuyX, WithinRangeMatchesClosedForm) {
    auto wp = fixtures::worked_pool();
    const Real dy_in = Real(20) * pow10_int(18);  // 20 ETH, well inside the range
    const auto market = wp.pool.reserves_in_range(200580);
    const Real expect_dx = range_buy_output(dy_in, market, wp.pool.liquidity_at(200580),
                                            tick_math::sqrt_tick_price(200580),
                                            tick_math::sqrt_tick_price(200640));
    const SwapResult res = wp.pool.swap_buy_x(dy_in);
    EXPECT_EQ(res.ticks_crossed, 0);
    EXPECT_LE(abs(res.delta_x - expect_dx), abs(expect_dx) * Real("1e-30"));
}

TEST(SwapBuyX, RoundTripNeverGains) {
    auto wp = fixtures::worked_pool();
    const Real dy_in = Real(30) * pow10_int(18);
    const SwapResult buy = wp.pool.swap_buy_x(dy_in);
    const SwapResult sell = wp.pool.swap_sell_x(-buy.delta_x);
    EXPECT_LT(-sell.delta_y, dy_in);  // convexity: the loop loses value
}

TEST(SwapBuyX, DirectionConsistency) {
    auto wp = fixtures::worked_pool();
    const Real before = wp.pool.market_price().raw;
    wp.pool.swap_buy_x(Real(10) * pow10_int(18));
    EXPECT_GT(wp.pool.market_price().raw, before);
}

TEST(SwapBuyX, CrossesUpward) {
    auto wp = fixtures::worked_pool();
    // more Y than the market range's X can absorb
    const SwapResult res = wp.pool.swap_buy_x(Real(120) * pow10_int(18));
    EXPECT_GE(res.ticks_crossed, 1);
    EXPECT_GT(wp.pool.market_tick(), 200640);
}

TEST(Swap, FeeDeductedBeforeCurveMath) {
    auto fee_pool = fixtures::worked_pool(30);
    auto free_pool = fixtures::worked_pool(0);
    const Real in = usdc_raw(10000);
    const SwapResult with_fee = fee_pool.pool.swap_sell_x(in);
    const SwapResult no_fee = free_pool.pool.swap_sell_x(in * Real("0.997"));
    EXPECT_EQ(with_fee.fee_paid, in * Real("0.003"));
    EXPECT_EQ(with_fee.delta_y, no_fee.delta_y);
    EXPECT_EQ(fee_pool.pool.fees_x(), with_fee.fee_paid);
    EXPECT_EQ(fee_pool.pool.fees_y(), Real(0));
}

TEST(Quote, PureAndIdenticalToSwap) {
    auto wp = fixtures::worked_pool();
    const std::string snapshot_before = to_decimal_string(wp.pool.market_price().raw);
    const SwapResult quoted = wp.pool.quote(Side::sell_x, usdc_raw(200000));
    EXPECT_EQ(to_decimal_string(wp.pool.market_price().raw), snapshot_before);
    const SwapResult swapped = wp.pool.swap_sell_x(usdc_raw(200000));
    EXPECT_EQ(quoted.delta_y, swapped.delta_y);
    EXPECT_EQ(quoted.slippage_bp, swapped.slippage_bp);
}

TEST(Quote, UsdNotionalOnDeepPool) {
    // deep synthetic distribution: $100 quote stays under 1 bp
    Pool pool(fixtures::usdc_eth_config(), fixtures::market_price());
    pool.mint("whale", 200220, 201000, Real("5e20"));
    const SwapResult res = pool.quote_usd(100.0, Side::sell_x, fixtures::usdc_eth_prices());
    EXPECT_LT(to_double(res.slippage_bp), 1.0);
}

TEST(Quote, EmptyPoolExhausts) {
    Pool pool(fixtures::usdc_eth_config(), fixtures::market_price());
    EXPECT_THROW(pool.quote_usd(100.0, Side::sell_x, fixtures::usdc_eth_prices()),
                 LiquidityExhaustedError);
    EXPECT_THROW(pool.quote(Side::buy_x, Real(1)), LiquidityExhaustedError);
}

TEST(Quote, RejectsNonPositiveSize) {
    auto wp = fixtures::worked_pool();
    EXPECT_THROW(wp.pool.quote_usd(0.0, Side::sell_x, fixtures::usdc_eth_prices()),
                 ValidationError);
    EXPECT_THROW(wp.pool.swap_sell_x(Real(0)), ValidationError);
}

TEST(Swap, SlippageMonotoneInSize) {
    auto wp = fixtures::worked_pool();
    double last = 0;
    for (double size : {1e3, 5e3, 2e4, 1e5, 2.4e5}) {
        const SwapResult res = wp.pool.quote(Side::sell_x, usdc_raw(size));
        EXPECT_GE(to_double(res.slippage_bp), last);
        last = to_double(res.slippage_bp);
    }
}

TEST(Swap, AgreesWithBruteForceIntegrator) {
    auto wp = fixtures::worked_pool();
    oracle::DistPool dist;
    dist.spacing = 60;
    dist.price = to_double(wp.pool.market_price().raw);
    for (const auto& [lo, liquidity] : wp.pool.ranges()) dist.ranges[lo] = to_double(liquidity);

    const double in = 250000e6;
    const oracle::Fill fill = oracle::integrate_sell_x(dist, in, 1e-4);
    const SwapResult res = wp.pool.quote(Side::sell_x, Real(in));
    EXPECT_LT(std::abs(to_double(-res.delta_y) - fill.out) / fill.out, 1e-6);

    const double dy_in = 150 * 1e18;
    const oracle::Fill fill_up = oracle::integrate_buy_x(dist, dy_in, 1e-4);
    const SwapResult res_up = wp.pool.quote(Side::buy_x, Real(dy_in));
    EXPECT_LT(std::abs(to_double(-res_up.delta_x) - fill_up.out) / fill_up.out, 1e-6);
}

TEST(Swap, PriceOutsideInitializedRanges) {
    // price far above every range: selling walks down into the book,
    // buying exhausts immediately
    Pool pool(fixtures::usdc_eth_config(), fixtures::market_price());
    pool.mint("lp", 199980, 200040, Real("2e18"));  // ~600 ticks below market
    const SwapResult res = pool.quote(Side::sell_x, Real(1000) * pow10_int(6));
    EXPECT_LT(res.average_price.raw, tick_math::tick_to_price(200040));
    EXPECT_GT(res.ticks_crossed, 0);
    EXPECT_THROW(pool.quote(Side::buy_x, Real(1) * pow10_int(18)), LiquidityExhaustedError);
}

TEST(Swap, SkipsEmptyRangesAndCountsBoundaries) {
    // liquidity gap between two ranges: walk jumps across it
    Pool pool(fixtures::usdc_eth_config(), fixtures::market_price());
    pool.mint("lp", 200580, 200640, Real("2e18"));
    pool.mint("lp", 200340, 200400, Real("2e18"));
    const auto market = pool.reserves_in_range(200580);
    const Real dx_max = range_max_input_x(market, pool.liquidity_at(200580),
                                          tick_math::sqrt_tick_price(200580),
                                          tick_math::sqrt_tick_price(200640));
    const SwapResult res = pool.swap_sell_x(dx_max * 2);
    // boundaries passed: 200580, 200520, 200460, 200400
    EXPECT_EQ(res.ticks_crossed, 4);
    EXPECT_LT(pool.market_tick(), 200400);
    EXPECT_GE(pool.market_tick(), 200340);
}
