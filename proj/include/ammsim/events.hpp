#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ammsim/errors.hpp"
#include "ammsim/real.hpp"
#include "ammsim/types.hpp"

namespace ammsim {

enum class EventKind { swap, mint, burn };

inline const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::swap: return "swap";
        case EventKind::mint: return "mint";
        case EventKind::burn: return "burn";
    }
    return "?";
}

// One on-chain log record, the unit of ingestion and replay. mint/burn carry
// owner, tick bounds and liquidity; swap carries signed raw token amounts
// (positive into the pool).
struct PoolEvent {
    EventKind kind = EventKind::swap;
    std::int64_t timestamp = 0;
    std::int64_t block = 0;
    int log_index = 0;
    std::string owner;
    int tick_lower = 0;
    int tick_upper = 0;
    Real liquidity;
    Real amount_x;
    Real amount_y;
};

inline bool canonical_event_less(const PoolEvent& a, const PoolEvent& b) {
    return std::tie(a.timestamp, a.block, a.log_index) <
           std::tie(b.timestamp, b.block, b.log_index);
}

inline void sort_events(std::vector<PoolEvent>& events) {
    std::stable_sort(events.begin(), events.end(), canonical_event_less);
}

// External USD price series for the pair, sorted by timestamp. y_usd is the
// quote token's USD price from an outside reference feed; x_usd is optional
// and, when absent, must be derived from the pool's own cross rate.
struct PricePoint {
    std::int64_t timestamp = 0;
    double y_usd = 0;
    std::optional<double> x_usd;
};

class PriceSeries {
public:
    PriceSeries() = default;
    explicit PriceSeries(std::vector<PricePoint> points) : points_(std::move(points)) {
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (!(points_[i].y_usd > 0) || (points_[i].x_usd && !(*points_[i].x_usd > 0)))
                throw ValidationError("price series values must be positive");
            if (i > 0 && points_[i].timestamp <= points_[i - 1].timestamp)
                throw ValidationError("price series timestamps must be strictly increasing");
        }
    }

    const std::vector<PricePoint>& points() const { return points_; }
    bool empty() const { return points_.empty(); }

    // Step lookup: latest point at or before ts; nothing before the first point.
    std::optional<PricePoint> at(std::int64_t ts) const {
        auto it = std::upper_bound(points_.begin(), points_.end(), ts,
                                   [](std::int64_t t, const PricePoint& p) { return t < p.timestamp; });
        if (it == points_.begin()) return std::nullopt;
        return *std::prev(it);
    }

private:
    std::vector<PricePoint> points_;
};

}  // namespace ammsim
