#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ammsim/depth.hpp"
#include "ammsim/events.hpp"
#include "ammsim/pool.hpp"
#include "ammsim/replay.hpp"

namespace ammsim {

struct MetricsOptions {
    std::vector<double> conc_pcts = {0.01, 0.02, 0.10};
    std::vector<double> grid_sizes_usd = {100, 500, 1000, 5000, 10000, 50000, 100000};
    std::int64_t reposition_window_seconds = 300;
    double outlier_cutoff = 0.20;
    bool jit_filter = true;
    bool weighted_averages = false;  // dollar-weighted gap/length/precision averages
};

// ----------------------------------------------------------------------------
// Position-shape measures
// ----------------------------------------------------------------------------

/// Distance of a range's geometric mid price from the market price.
inline double gap_fraction(double p_lower, double p_upper, double p_mkt) {
    return std::abs(std::sqrt(p_lower * p_upper) / p_mkt - 1.0);
}

/// Range width relative to its geometric mid price.
inline double length_fraction(double p_lower, double p_upper) {
    return std::abs(p_upper - p_lower) / std::sqrt(p_lower * p_upper);
}

/// 1 - 1.0001^(-1/(gap*length)), scaled into [0,1]; gap -> 0 extends
/// continuously to 1 (the pow underflows to zero).
inline double precision_metric(double gap, double length) {
    if (gap < 0 || length <= 0) throw DomainError("precision: gap >= 0 and length > 0 required");
    if (gap == 0) return 1.0;
    return 1.0 - std::pow(1.0001, -1.0 / (gap * length));
}

// ----------------------------------------------------------------------------
// Annotated LP events
// ----------------------------------------------------------------------------

struct LpEvent {
    EventKind kind = EventKind::mint;
    std::int64_t timestamp = 0;
    std::int64_t block = 0;
    int log_index = 0;
    std::string owner;
    int tick_lower = 0;
    int tick_upper = 0;
    Real liquidity;
    double usd_value = 0;
    double gap = 0;
    double length = 0;
    bool repositioning = false;
};

/// Tag each mint that the same owner preceded with a burn inside the window.
/// Matching is one-to-one: every burn justifies at most one mint, and mints
/// claim the earliest unused qualifying burn, in canonical order.
inline void classify_repositioning(std::vector<LpEvent>& events, std::int64_t window_seconds) {
    struct PendingBurn {
        std::int64_t ts;
        bool used = false;
    };
    std::map<std::string, std::deque<PendingBurn>> burns;
    for (LpEvent& ev : events) {
        if (ev.kind == EventKind::burn) {
            burns[ev.owner].push_back({ev.timestamp});
            continue;
        }
        if (ev.kind != EventKind::mint) continue;
        auto it = burns.find(ev.owner);
        if (it == burns.end()) continue;
        auto& queue = it->second;
        while (!queue.empty() && queue.front().ts < ev.timestamp - window_seconds)
            queue.pop_front();
        for (PendingBurn& b : queue) {
            if (!b.used) {
                b.used = true;
                ev.repositioning = true;
                break;
            }
        }
    }
}

/// Drop mints/burns whose range mid sits further than `cutoff` from the
/// market price; the boundary itself is kept.
inline std::vector<LpEvent> filter_outliers(std::vector<LpEvent> events, double cutoff = 0.20) {
    std::erase_if(events, [&](const LpEvent& ev) { return ev.gap > cutoff; });
    return events;
}

/// Remove just-in-time liquidity: mint/burn pairs by the same owner on the
/// same range within one block, paired one-to-one in log order.
inline std::vector<LpEvent> filter_jit(std::vector<LpEvent> events) {
    struct Key {
        std::int64_t block;
        std::string owner;
        int lo, hi;
        bool operator<(const Key& o) const {
            return std::tie(block, owner, lo, hi) < std::tie(o.block, o.owner, o.lo, o.hi);
        }
    };
    std::map<Key, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const LpEvent& ev = events[i];
        Key key{ev.block, ev.owner, ev.tick_lower, ev.tick_upper};
        if (ev.kind == EventKind::mint) groups[key].first.push_back(i);
        else if (ev.kind == EventKind::burn) groups[key].second.push_back(i);
    }
    std::vector<bool> drop(events.size(), false);
    for (auto& [key, pair] : groups) {
        const std::size_t n = std::min(pair.first.size(), pair.second.size());
        for (std::size_t i = 0; i < n; ++i) {
            drop[pair.first[i]] = true;
            drop[pair.second[i]] = true;
        }
    }
    std::vector<LpEvent> kept;
    kept.reserve(events.size());
    for (std::size_t i = 0; i < events.size(); ++i)
        if (!drop[i]) kept.push_back(std::move(events[i]));
    return kept;
}

// ----------------------------------------------------------------------------
// Interval aggregates
// ----------------------------------------------------------------------------

template <typename It>
inline double intensity_value(It first, It last) {
    double total = 0, repositioned = 0;
    for (It it = first; it != last; ++it) {
        if (it->kind != EventKind::mint) continue;
        total += it->usd_value;
        if (it->repositioning) repositioned += it->usd_value;
    }
    return total > 0 ? repositioned / total : 0.0;
}

template <typename It>
inline double intensity_freq(It first, It last) {
    int total = 0, repositioned = 0;
    for (It it = first; it != last; ++it) {
        if (it->kind != EventKind::mint) continue;
        ++total;
        if (it->repositioning) ++repositioned;
    }
    return total > 0 ? static_cast<double>(repositioned) / total : 0.0;
}

/// Earlier balance-based variant: 1 - |minted - burned| / (minted + burned).
template <typename It>
inline double intensity_legacy(It first, It last) {
    double minted = 0, burned = 0;
    for (It it = first; it != last; ++it) {
        if (it->kind == EventKind::mint) minted += it->usd_value;
        else if (it->kind == EventKind::burn) burned += it->usd_value;
    }
    const double denom = minted + burned;
    return denom > 0 ? 1.0 - std::abs(minted - burned) / denom : 0.0;
}

inline double concentration(const Pool& pool, double pct, const TokenPricesUsd& prices) {
    const double tvl = tvl_usd(pool, prices);
    if (!(tvl > 0)) return 0.0;
    return depth_within_usd(pool, pct, prices) / tvl;
}

struct GridCell {
    double size_usd = 0;
    Side side = Side::sell_x;
    std::optional<double> slippage_bp;
    std::string reason;  // set when slippage is absent
};

/// Hypothetical-trade slippage per size and direction; sizes the pool cannot
/// absorb are reported absent with a reason code.
inline std::vector<GridCell> slippage_grid(const Pool& pool, const std::vector<double>& sizes_usd,
                                           const TokenPricesUsd& prices) {
    std::vector<GridCell> grid;
    grid.reserve(sizes_usd.size() * 2);
    for (double size : sizes_usd) {
        for (Side side : {Side::sell_x, Side::buy_x}) {
            GridCell cell{size, side, std::nullopt, {}};
            try {
                cell.slippage_bp = to_double(pool.quote_usd(size, side, prices).slippage_bp);
            } catch (const LiquidityExhaustedError&) {
                cell.reason = "liquidity_exhausted";
            } catch (const Error& e) {
                cell.reason = e.what();
            }
            grid.push_back(std::move(cell));
        }
    }
    return grid;
}

inline double gas_fee_usd(double gas_price_gwei, double eth_usd, double gas_units = 120000.0) {
    if (gas_price_gwei < 0 || eth_usd < 0 || gas_units < 0)
        throw ValidationError("gas fee inputs must be nonnegative");
    return gas_units * gas_price_gwei * 1e-9 * eth_usd;
}

inline std::optional<double> turnover(double volume_24h_usd, double tvl_usd) {
    if (volume_24h_usd < 0 || tvl_usd < 0)
        throw ValidationError("turnover inputs must be nonnegative");
    if (tvl_usd == 0) return std::nullopt;
    return volume_24h_usd / tvl_usd;
}

// ----------------------------------------------------------------------------
// Pipeline: replayed events -> annotated events -> per-interval rows
// ----------------------------------------------------------------------------

struct PreparedEvents {
    std::vector<LpEvent> lp;  // filtered and classified, canonical order
    struct SwapRecord {
        std::int64_t timestamp = 0;
        double usd_value = 0;
    };
    std::vector<SwapRecord> swaps;
    int dropped_outliers = 0;
    int dropped_jit = 0;
    int dropped_missing_price = 0;
    int skipped_missing_owner = 0;
};

namespace detail {

// Token USD prices at a timestamp. The feed carries the quote token; token X
// falls back to the pool cross rate at the supplied raw price.
inline std::optional<TokenPricesUsd> feed_prices(const PriceSeries& series, std::int64_t ts,
                                                 const PoolConfig& cfg, const Real& p_mkt_raw) {
    auto point = series.at(ts);
    if (!point) return std::nullopt;
    TokenPricesUsd prices;
    prices.y_usd = point->y_usd;
    if (point->x_usd) {
        prices.x_usd = *point->x_usd;
    } else {
        const Real adj = RawPrice{p_mkt_raw}.adjusted(cfg);
        prices.x_usd = to_double(adj) * point->y_usd;
    }
    return prices;
}

}  // namespace detail

inline PreparedEvents prepare_events(const ReplayResult& replayed, const PriceSeries& series,
                                     const PoolConfig& cfg, const MetricsOptions& options) {
    PreparedEvents out;
    std::vector<LpEvent> lp;
    for (const ReplayedEvent& step : replayed.steps) {
        const PoolEvent& ev = step.event;
        auto prices = detail::feed_prices(series, ev.timestamp, cfg, step.p_mkt_before);
        if (ev.kind == EventKind::swap) {
            if (!prices) {
                ++out.dropped_missing_price;
                continue;
            }
            // Both legs valued at feed prices differ only by slippage; use the mean.
            const double leg_x = usd_value_of(abs(ev.amount_x), Real(0), cfg, *prices);
            const double leg_y = usd_value_of(Real(0), abs(ev.amount_y), cfg, *prices);
            out.swaps.push_back({ev.timestamp, (leg_x + leg_y) / 2});
            continue;
        }
        if (ev.owner.empty()) {
            ++out.skipped_missing_owner;
            continue;
        }
        if (!prices) {
            ++out.dropped_missing_price;
            continue;
        }
        LpEvent a;
        a.kind = ev.kind;
        a.timestamp = ev.timestamp;
        a.block = ev.block;
        a.log_index = ev.log_index;
        a.owner = ev.owner;
        a.tick_lower = ev.tick_lower;
        a.tick_upper = ev.tick_upper;
        a.liquidity = ev.liquidity;
        // Tick prices come from the engine's own representation; a plain
        // double pow drifts by ~1e-12 relative at these exponents, which is
        // visible next to the exact-path market price.
        const double p_lo = to_double(tick_math::tick_to_price(ev.tick_lower));
        const double p_hi = to_double(tick_math::tick_to_price(ev.tick_upper));
        const double p_mkt = to_double(step.p_mkt_before);
        a.gap = gap_fraction(p_lo, p_hi, p_mkt);
        a.length = length_fraction(p_lo, p_hi);
        // Valuation splits the position at the feed's market price, not the
        // pool's own (they coincide for a single-series feed).
        const Real p_feed_raw = Real(prices->x_usd / prices->y_usd) * cfg.raw_price_factor();
        LiquidityPosition pos{0, ev.owner, ev.tick_lower, ev.tick_upper, ev.liquidity};
        auto [x, y] = position_amounts(pos, RawPrice::from_raw(p_feed_raw));
        a.usd_value = usd_value_of(x, y, cfg, *prices);
        lp.push_back(std::move(a));
    }

    const std::size_t before_jit = lp.size();
    if (options.jit_filter) lp = filter_jit(std::move(lp));
    out.dropped_jit = static_cast<int>(before_jit - lp.size());
    const std::size_t before_outliers = lp.size();
    lp = filter_outliers(std::move(lp), options.outlier_cutoff);
    out.dropped_outliers = static_cast<int>(before_outliers - lp.size());

    classify_repositioning(lp, options.reposition_window_seconds);
    out.lp = std::move(lp);
    return out;
}

struct MetricsRow {
    std::int64_t interval_start = 0;
    std::vector<std::optional<double>> conc;  // aligned with options.conc_pcts
    double intensity_value = 0;
    double intensity_freq = 0;
    double intensity_legacy = 0;
    std::optional<double> gap_avg;        // across repositioning mints
    std::optional<double> length_avg;
    std::optional<double> precision_avg;
    std::optional<double> tvl_usd;
    double volume_24h_usd = 0;
    std::optional<double> turnover;
    std::vector<GridCell> grid;
};

inline std::vector<MetricsRow> compute_rows(const std::vector<IntervalBucket>& buckets,
                                            const PreparedEvents& prepared,
                                            const PriceSeries& series, const PoolConfig& cfg,
                                            const MetricsOptions& options) {
    std::vector<MetricsRow> rows;
    rows.reserve(buckets.size());
    std::size_t lp_idx = 0;
    std::size_t swap_lo = 0, swap_hi = 0;
    for (const IntervalBucket& bucket : buckets) {
        MetricsRow row;
        row.interval_start = bucket.start_ts;

        auto lp_begin = prepared.lp.begin() + static_cast<std::ptrdiff_t>(lp_idx);
        while (lp_idx < prepared.lp.size() && prepared.lp[lp_idx].timestamp < bucket.end_ts)
            ++lp_idx;
        auto lp_end = prepared.lp.begin() + static_cast<std::ptrdiff_t>(lp_idx);

        row.intensity_value = intensity_value(lp_begin, lp_end);
        row.intensity_freq = intensity_freq(lp_begin, lp_end);
        row.intensity_legacy = intensity_legacy(lp_begin, lp_end);

        double weight_sum = 0, gap_sum = 0, length_sum = 0, precision_sum = 0;
        for (auto it = lp_begin; it != lp_end; ++it) {
            if (it->kind != EventKind::mint || !it->repositioning) continue;
            const double w = options.weighted_averages ? it->usd_value : 1.0;
            weight_sum += w;
            gap_sum += w * it->gap;
            length_sum += w * it->length;
            precision_sum += w * precision_metric(it->gap, it->length);
        }
        if (weight_sum > 0) {
            row.gap_avg = gap_sum / weight_sum;
            row.length_avg = length_sum / weight_sum;
            row.precision_avg = precision_sum / weight_sum;
        }

        // Trailing 24h swap volume up to the interval end.
        while (swap_hi < prepared.swaps.size() &&
               prepared.swaps[swap_hi].timestamp < bucket.end_ts)
            ++swap_hi;
        while (swap_lo < swap_hi &&
               prepared.swaps[swap_lo].timestamp < bucket.end_ts - 86400)
            ++swap_lo;
        double volume = 0;
        for (std::size_t i = swap_lo; i < swap_hi; ++i) volume += prepared.swaps[i].usd_value;
        row.volume_24h_usd = volume;

        const Pool& snapshot = *bucket.end_snapshot;
        auto prices = detail::feed_prices(series, bucket.end_ts, cfg, snapshot.market_price().raw);
        if (prices) {
            row.tvl_usd = tvl_usd(snapshot, *prices);
            row.conc.reserve(options.conc_pcts.size());
            for (double pct : options.conc_pcts) row.conc.push_back(concentration(snapshot, pct, *prices));
            row.turnover = turnover(volume, *row.tvl_usd);
            row.grid = slippage_grid(snapshot, options.grid_sizes_usd, *prices);
        } else {
            row.conc.assign(options.conc_pcts.size(), std::nullopt);
            for (double size : options.grid_sizes_usd)
                for (Side side : {Side::sell_x, Side::buy_x})
                    row.grid.push_back(GridCell{size, side, std::nullopt, "no_price"});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace ammsim
