// Fuzzed invariants; every suite runs at least 10^4 randomized cases.
#include <gtest/gtest.h>

#include <random>

#include "ammsim/depth.hpp"
#include "ammsim/metrics.hpp"
#include "ammsim/pool.hpp"
#include "ammsim/replay.hpp"
#include "ammsim/snapshot.hpp"
#include "fixtures.hpp"

using namespace ammsim;

namespace {

constexpr int kCases = 10000;

PoolConfig plain_config(int spacing = 60) {
    PoolConfig cfg;
    cfg.token_x = "A";
    cfg.token_y = "B";
    cfg.tick_spacing = spacing;
    return cfg;
}

// Small tick universe around zero keeps the price caches hot.
int random_aligned_tick(std::mt19937& rng, int spacing, int span = 20) {
    return (static_cast<int>(rng() % (2 * span + 1)) - span) * spacing;
}

Real random_liquidity(std::mt19937& rng) {
    std::uniform_real_distribution<double> mag(3.0, 21.0);
    return Real(std::pow(10.0, mag(rng)));
}

Pool random_pool(std::mt19937& rng, int max_ranges = 8) {
    Pool pool(plain_config(), RawPrice::from_raw(tick_math::tick_to_price(
                                  static_cast<int>(rng() % 41) - 20)));
    const int n = 1 + static_cast<int>(rng() % max_ranges);
    for (int i = 0; i < n; ++i) {
        const int lo = random_aligned_tick(rng, 60);
        pool.add_range_liquidity(lo, random_liquidity(rng));
    }
    return pool;
}

}  // namespace

TEST(PropertyCurveInvariant, HoldsForFreeSwapsWithinRange) {
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> unit(0.02, 0.98);
    for (int i = 0; i < kCases; ++i) {
        const int lo = random_aligned_tick(rng, 60, 300);
        const int width = 60 * (1 + static_cast<int>(rng() % 5));
        const Real sqrt_lo = tick_math::sqrt_tick_price(lo);
        const Real sqrt_hi = tick_math::sqrt_tick_price(lo + width);
        const Real liquidity = random_liquidity(rng);
        // market strictly inside the range
        const Real sqrt_z = sqrt_lo + (sqrt_hi - sqrt_lo) * Real(unit(rng));
        const RangeReserves r = reserves_from_sqrt(liquidity, sqrt_z, sqrt_lo, sqrt_hi);
        const Real k = liquidity * liquidity;

        Real dx, dy;
        if (rng() % 2 == 0) {
            dx = range_max_input_x(r, liquidity, sqrt_lo, sqrt_hi) * Real(unit(rng));
            dy = range_sell_output(dx, r, liquidity, sqrt_lo, sqrt_hi);
        } else {
            dy = range_max_input_y(r, liquidity, sqrt_lo, sqrt_hi) * Real(unit(rng));
            dx = range_buy_output(dy, r, liquidity, sqrt_lo, sqrt_hi);
        }
        const Real lhs = (r.x + dx + liquidity / sqrt_hi) * (r.y + dy + liquidity * sqrt_lo);
        ASSERT_LE(abs(lhs / k - 1), Real("1e-9"))
            << "case " << i << " lo " << lo << " width " << width;
    }
}

TEST(PropertyMintBurn, RoundTripIsIdentity) {
    std::mt19937 rng(202);
    for (int i = 0; i < kCases; ++i) {
        Pool pool = random_pool(rng, 4);
        const int lo = random_aligned_tick(rng, 60);
        const int hi = lo + 60 * (1 + static_cast<int>(rng() % 6));
        const Real liquidity = random_liquidity(rng);

        const auto before = pool.ranges();
        const auto minted = pool.mint("fuzz", lo, hi, liquidity);
        const auto burned = pool.burn(minted.position_id);
        const auto& after = pool.ranges();

        ASSERT_EQ(after.size(), before.size()) << "case " << i;
        for (const auto& [tick, expect] : before) {
            const Real got = after.at(tick);
            ASSERT_LE(abs(got - expect), expect * Real("1e-12")) << "case " << i;
        }
        const Real tol_x = minted.x_required * Real("1e-12");
        const Real tol_y = minted.y_required * Real("1e-12");
        ASSERT_LE(abs(burned.x_returned - minted.x_required), tol_x) << "case " << i;
        ASSERT_LE(abs(burned.y_returned - minted.y_required), tol_y) << "case " << i;
    }
}

TEST(PropertyConcentration, MonotoneInBandAndBounded) {
    std::mt19937 rng(303);
    std::uniform_real_distribution<double> band(0.0005, 0.6);
    const TokenPricesUsd prices{1.0, 1.0};
    for (int i = 0; i < kCases; ++i) {
        Pool pool = random_pool(rng);
        double p1 = band(rng), p2 = band(rng);
        if (p1 > p2) std::swap(p1, p2);
        const double tvl = tvl_usd(pool, prices);
        const double d1 = depth_within_usd(pool, p1, prices);
        const double d2 = depth_within_usd(pool, p2, prices);
        ASSERT_LE(d1, d2 * (1 + 1e-12) + 1e-9) << "case " << i;
        ASSERT_LE(d2, tvl * (1 + 1e-12) + 1e-9) << "case " << i;
        const double c1 = concentration(pool, p1, prices);
        const double c2 = concentration(pool, p2, prices);
        ASSERT_LE(c1, c2 + 1e-12) << "case " << i;
        ASSERT_LE(c2, 1.0 + 1e-12) << "case " << i;
    }
}

TEST(PropertySlippage, MonotoneInTradeSize) {
    std::mt19937 rng(404);
    std::uniform_real_distribution<double> unit(0.01, 0.95);
    int checked = 0;
    for (int i = 0; i < kCases; ++i) {
        Pool pool = random_pool(rng, 5);
        const Side side = rng() % 2 ? Side::sell_x : Side::buy_x;
        // capacity: total output-side reserves the walk can consume
        Real capacity(0);
        for (const auto& [lo, liquidity] : pool.ranges()) {
            auto r = pool.reserves_in_range(lo);
            capacity += side == Side::sell_x ? r.y : r.x;
        }
        if (capacity <= 0) continue;
        // convert output capacity to a safely fillable input via a probe
        double f1 = unit(rng), f2 = unit(rng);
        if (f1 > f2) std::swap(f1, f2);
        if (f2 - f1 < 1e-6) f2 += 1e-3;
        try {
            // scale trial inputs off the capacity magnitude
            const Real base = capacity * to_double(pool.market_price().raw) + capacity;
            const Real in1 = Real(f1) * base / 100;
            const Real in2 = Real(f2) * base / 100;
            const SwapResult r1 = pool.quote(side, in1);
            const SwapResult r2 = pool.quote(side, in2);
            ASSERT_LE(to_double(r1.slippage_bp), to_double(r2.slippage_bp) * (1 + 1e-9) + 1e-9)
                << "case " << i;
            ++checked;
        } catch (const LiquidityExhaustedError&) {
            continue;  // outsized probe; size ordering still holds where defined
        }
    }
    EXPECT_GT(checked, kCases / 2);
}

TEST(PropertyPrecision, BoundedAndDecreasing) {
    std::mt19937 rng(505);
    std::uniform_real_distribution<double> mag(-5.0, 2.0);
    std::uniform_real_distribution<double> scale(1.01, 50.0);
    for (int i = 0; i < kCases; ++i) {
        const double gap = std::pow(10.0, mag(rng));
        const double length = std::pow(10.0, mag(rng));
        const double p = precision_metric(gap, length);
        ASSERT_GE(p, 0.0);
        ASSERT_LE(p, 1.0);
        const double worse = precision_metric(gap * scale(rng), length);
        ASSERT_LE(worse, p + 1e-15) << "gap " << gap << " length " << length;
    }
}

TEST(PropertyFilters, JitFilterIdempotent) {
    std::mt19937 rng(606);
    for (int i = 0; i < kCases; ++i) {
        std::vector<LpEvent> events;
        const int n = static_cast<int>(rng() % 20);
        for (int k = 0; k < n; ++k) {
            LpEvent ev;
            ev.kind = rng() % 2 ? EventKind::mint : EventKind::burn;
            ev.timestamp = k;
            ev.block = 100 + static_cast<std::int64_t>(rng() % 4);
            ev.log_index = k;
            ev.owner = rng() % 2 ? "a" : "b";
            ev.tick_lower = 60 * static_cast<int>(rng() % 3);
            ev.tick_upper = ev.tick_lower + 60;
            ev.gap = rng() % 5 == 0 ? 0.5 : 0.01;
            events.push_back(ev);
        }
        const auto once = filter_jit(events);
        const auto twice = filter_jit(once);
        ASSERT_EQ(once.size(), twice.size()) << "case " << i;
        const auto outliers_once = filter_outliers(events, 0.2);
        const auto outliers_twice = filter_outliers(outliers_once, 0.2);
        ASSERT_EQ(outliers_once.size(), outliers_twice.size()) << "case " << i;
    }
}

TEST(PropertyIntensity, BoundedAndCountValueAgreeOnEqualSizes) {
    std::mt19937 rng(707);
    for (int i = 0; i < kCases; ++i) {
        std::vector<LpEvent> events;
        const int n = static_cast<int>(rng() % 12);
        const bool equal_usd = rng() % 2 == 0;
        for (int k = 0; k < n; ++k) {
            LpEvent ev;
            ev.kind = rng() % 3 ? EventKind::mint : EventKind::burn;
            ev.timestamp = k;
            ev.owner = "lp";
            ev.usd_value = equal_usd ? 250.0 : 1.0 + static_cast<double>(rng() % 1000);
            ev.repositioning = ev.kind == EventKind::mint && rng() % 2;
            events.push_back(ev);
        }
        const double value = intensity_value(events.begin(), events.end());
        const double freq = intensity_freq(events.begin(), events.end());
        const double legacy = intensity_legacy(events.begin(), events.end());
        ASSERT_GE(value, 0.0);
        ASSERT_LE(value, 1.0);
        ASSERT_GE(freq, 0.0);
        ASSERT_LE(freq, 1.0);
        ASSERT_GE(legacy, 0.0);
        ASSERT_LE(legacy, 1.0);
        if (equal_usd) ASSERT_NEAR(value, freq, 1e-12) << "case " << i;
    }
}

TEST(PropertyGapLength, ScaleInvariant) {
    std::mt19937 rng(808);
    std::uniform_real_distribution<double> u(0.3, 3.0);
    for (int i = 0; i < kCases; ++i) {
        const double lo = u(rng);
        const double hi = lo * (1.0 + u(rng));
        const double mkt = u(rng);
        const double k = u(rng) * 1e4;
        ASSERT_NEAR(gap_fraction(lo, hi, mkt), gap_fraction(k * lo, k * hi, k * mkt), 1e-12);
        ASSERT_NEAR(length_fraction(lo, hi), length_fraction(k * lo, k * hi), 1e-12);
    }
}

TEST(PropertyReplay, DeterministicByteIdenticalSnapshots) {
    std::mt19937 rng(909);
    const PoolConfig cfg = plain_config();
    for (int i = 0; i < kCases; ++i) {
        // a short consistent event script: mints first, then partial burns
        std::vector<PoolEvent> events;
        std::int64_t block = 1;
        const int mints = 1 + static_cast<int>(rng() % 3);
        std::vector<PoolEvent> minted;
        for (int k = 0; k < mints; ++k) {
            PoolEvent ev;
            ev.kind = EventKind::mint;
            ev.timestamp = block * 10;
            ev.block = block++;
            ev.log_index = 0;
            ev.owner = rng() % 2 ? "a" : "b";
            ev.tick_lower = random_aligned_tick(rng, 60, 6);
            ev.tick_upper = ev.tick_lower + 60 * (1 + static_cast<int>(rng() % 3));
            ev.liquidity = random_liquidity(rng);
            events.push_back(ev);
            minted.push_back(ev);
        }
        if (rng() % 2) {
            const PoolEvent& src = minted[rng() % minted.size()];
            PoolEvent ev;
            ev.kind = EventKind::burn;
            ev.timestamp = block * 10;
            ev.block = block++;
            ev.log_index = 0;
            ev.owner = src.owner;
            ev.tick_lower = src.tick_lower;
            ev.tick_upper = src.tick_upper;
            ev.liquidity = src.liquidity / 3;
            events.push_back(ev);
        }
        Pool genesis(cfg, RawPrice::from_raw(Real(1)));
        const ReplayResult a = replay(events, genesis);
        const ReplayResult b = replay(events, genesis);
        ASSERT_EQ(snapshot_to_string(*a.steps.back().post_state),
                  snapshot_to_string(*b.steps.back().post_state))
            << "case " << i;
    }
}
