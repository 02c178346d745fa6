#pragma once

#include <memory>
#include <vector>

#include "ammsim/events.hpp"
#include "ammsim/pool.hpp"

namespace ammsim {

struct ReplayedEvent {
    PoolEvent event;
    Real p_mkt_before;                      // raw pool price just before the event
    std::shared_ptr<const Pool> post_state;  // immutable snapshot after the event
};

struct ReplayResult {
    std::shared_ptr<const Pool> genesis;
    std::vector<ReplayedEvent> steps;
    int reconciliation_warnings = 0;  // engine output vs logged output beyond tolerance
};

struct ReplayOptions {
    // Absorbs fee-tier and rounding differences between curve math and
    // protocol-exact logs.
    double reconcile_tolerance = 0.001;
};

inline std::string event_context(const PoolEvent& ev) {
    return std::string(event_kind_name(ev.kind)) + " at ts=" + std::to_string(ev.timestamp) +
           " block=" + std::to_string(ev.block) + " log=" + std::to_string(ev.log_index);
}

/// Apply a sorted event stream to a pool. Mint/burn adjust the liquidity
/// distribution; swaps run through the engine with the logged input, and the
/// engine-computed output is reconciled against the logged output.
inline ReplayResult replay(const std::vector<PoolEvent>& events, Pool pool,
                           const ReplayOptions& options = {}) {
    for (std::size_t i = 1; i < events.size(); ++i)
        if (canonical_event_less(events[i], events[i - 1]))
            throw ValidationError("replay requires canonically sorted events (violation at " +
                                  event_context(events[i]) + ")");

    ReplayResult result;
    result.genesis = std::make_shared<const Pool>(pool);
    result.steps.reserve(events.size());

    for (const PoolEvent& ev : events) {
        const Real p_before = pool.market_price().raw;
        switch (ev.kind) {
            case EventKind::mint:
                try {
                    pool.mint(ev.owner, ev.tick_lower, ev.tick_upper, ev.liquidity);
                } catch (const Error& e) {
                    throw ValidationError(std::string(e.what()) + " (" + event_context(ev) + ")");
                }
                break;
            case EventKind::burn:
                try {
                    pool.burn_liquidity(ev.owner, ev.tick_lower, ev.tick_upper, ev.liquidity);
                } catch (const Error& e) {
                    throw ValidationError(std::string(e.what()) + " (" + event_context(ev) + ")");
                }
                break;
            case EventKind::swap: {
                const bool sell_x = ev.amount_x > 0;
                const Real& in = sell_x ? ev.amount_x : ev.amount_y;
                const Real& logged_out = sell_x ? ev.amount_y : ev.amount_x;
                SwapResult res;
                try {
                    res = pool.swap(sell_x ? Side::sell_x : Side::buy_x, in);
                } catch (const LiquidityExhaustedError&) {
                    throw ValidationError(std::string("logged swap exhausts pool liquidity (") +
                                          event_context(ev) + ")");
                }
                const Real engine_out = sell_x ? res.delta_y : res.delta_x;
                Real divergence = engine_out - logged_out;
                if (divergence < 0) divergence = -divergence;
                if (logged_out != 0 && divergence / (logged_out < 0 ? -logged_out : logged_out) >
                                           Real(options.reconcile_tolerance))
                    ++result.reconciliation_warnings;
                break;
            }
        }
        result.steps.push_back(
            ReplayedEvent{ev, p_before, std::make_shared<const Pool>(pool)});
    }
    return result;
}

// One aggregation interval: [start_ts, end_ts), its events, and the state at
// the end of the interval (carried forward through empty intervals). Event
// pointers borrow from the ReplayResult, which must outlive the buckets.
struct IntervalBucket {
    std::int64_t start_ts = 0;
    std::int64_t end_ts = 0;
    std::vector<const ReplayedEvent*> events;
    std::shared_ptr<const Pool> end_snapshot;
};

/// Half-open interval bucketing on an epoch-aligned grid. The bucket list
/// covers the replayed span densely, so downstream rows exist even for quiet
/// intervals.
inline std::vector<IntervalBucket> bucketize(const ReplayResult& replayed,
                                             std::int64_t interval_seconds) {
    if (interval_seconds <= 0) throw ValidationError("interval must be positive");
    std::vector<IntervalBucket> buckets;
    if (replayed.steps.empty()) return buckets;

    auto floor_div = [](std::int64_t a, std::int64_t b) {
        std::int64_t q = a / b;
        if (a % b != 0 && a < 0) --q;
        return q;
    };
    const std::int64_t first = floor_div(replayed.steps.front().event.timestamp, interval_seconds);
    const std::int64_t last = floor_div(replayed.steps.back().event.timestamp, interval_seconds);

    buckets.reserve(static_cast<std::size_t>(last - first + 1));
    std::shared_ptr<const Pool> carry = replayed.genesis;
    std::size_t idx = 0;
    for (std::int64_t k = first; k <= last; ++k) {
        IntervalBucket bucket;
        bucket.start_ts = k * interval_seconds;
        bucket.end_ts = bucket.start_ts + interval_seconds;
        while (idx < replayed.steps.size() &&
               replayed.steps[idx].event.timestamp < bucket.end_ts) {
            bucket.events.push_back(&replayed.steps[idx]);
            carry = replayed.steps[idx].post_state;
            ++idx;
        }
        bucket.end_snapshot = carry;
        buckets.push_back(std::move(bucket));
    }
    return buckets;
}

}  // namespace ammsim
