#pragma once

#include <map>
#include <string>
#include <utility>

#include "ammsim/errors.hpp"
#include "ammsim/real.hpp"
#include "ammsim/tick_math.hpp"
#include "ammsim/types.hpp"

namespace ammsim {

// ----------------------------------------------------------------------------
// Range-level curve math
//
// A range [p_lo, p_hi] holding liquidity L behaves as a constant-product pool
// with virtual reserves (x + L/sqrt(p_hi)) * (y + L*sqrt(p_lo)) = L^2. Real
// reserves follow from the market price clamped into the range: token X sits
// above the clamp point, token Y below it.
// ----------------------------------------------------------------------------

struct RangeReserves {
    Real x;  // raw units of token X
    Real y;  // raw units of token Y
};

inline Real clamp_sqrt_price(const Real& sqrt_p, const Real& sqrt_lo, const Real& sqrt_hi) {
    if (sqrt_p <= sqrt_lo) return sqrt_lo;
    if (sqrt_p >= sqrt_hi) return sqrt_hi;
    return sqrt_p;
}

inline RangeReserves reserves_from_sqrt(const Real& liquidity, const Real& sqrt_z,
                                        const Real& sqrt_lo, const Real& sqrt_hi) {
    return RangeReserves{liquidity * (sqrt_hi - sqrt_z) / (sqrt_z * sqrt_hi),
                         liquidity * (sqrt_z - sqrt_lo)};
}

inline RangeReserves range_reserves(const Real& liquidity, const Real& p_lo,
                                    const Real& p_hi, const Real& p_mkt) {
    const Real sqrt_lo = sqrt(p_lo);
    const Real sqrt_hi = sqrt(p_hi);
    const Real sqrt_z = clamp_sqrt_price(sqrt(p_mkt), sqrt_lo, sqrt_hi);
    return reserves_from_sqrt(liquidity, sqrt_z, sqrt_lo, sqrt_hi);
}

/// Y received (negative) for selling net `dx` of X into one range.
inline Real range_sell_output(const Real& dx, const RangeReserves& r, const Real& liquidity,
                              const Real& sqrt_lo, const Real& sqrt_hi) {
    return -(dx * (r.y + liquidity * sqrt_lo)) / (r.x + dx + liquidity / sqrt_hi);
}

/// X received (negative) for paying net `dy` of Y into one range.
inline Real range_buy_output(const Real& dy, const RangeReserves& r, const Real& liquidity,
                             const Real& sqrt_lo, const Real& sqrt_hi) {
    return -(dy * (r.x + liquidity / sqrt_hi)) / (r.y + dy + liquidity * sqrt_lo);
}

/// Largest X input one range absorbs; at that point its Y reserves are gone
/// and the price sits on the lower bound.
inline Real range_max_input_x(const RangeReserves& r, const Real& liquidity,
                              const Real& sqrt_lo, const Real& sqrt_hi) {
    return r.x * r.y / (liquidity * sqrt_lo) + r.y / (sqrt_lo * sqrt_hi);
}

/// Largest Y input one range absorbs before its X reserves are gone.
inline Real range_max_input_y(const RangeReserves& r, const Real& liquidity,
                              const Real& sqrt_lo, const Real& sqrt_hi) {
    return r.x * r.y * sqrt_hi / liquidity + r.x * sqrt_lo * sqrt_hi;
}

// ----------------------------------------------------------------------------
// Position helpers
// ----------------------------------------------------------------------------

/// Token amounts a position holds at the given market price.
inline std::pair<Real, Real> position_amounts(const LiquidityPosition& pos, const RawPrice& p_mkt) {
    const Real p_lo = tick_math::tick_to_price(pos.tick_lower);
    const Real p_hi = tick_math::tick_to_price(pos.tick_upper);
    RangeReserves r = range_reserves(pos.liquidity, p_lo, p_hi, p_mkt.raw);
    return {r.x, r.y};
}

/// Liquidity implied by a Y deposit on [tick_lower, tick_upper]. Requires the
/// market price above the lower bound, otherwise the position holds no Y.
inline Real liquidity_from_token_y(const Real& y_amount, int tick_lower, int tick_upper,
                                   const RawPrice& p_mkt) {
    if (y_amount <= 0) throw DomainError("liquidity_from_token_y: amount must be positive");
    const Real p_lo = tick_math::tick_to_price(tick_lower);
    if (p_mkt.raw <= p_lo)
        throw DomainError("liquidity_from_token_y: market price at or below range");
    const Real p_hi = tick_math::tick_to_price(tick_upper);
    const Real sqrt_z = p_mkt.raw < p_hi ? sqrt(p_mkt.raw) : sqrt(p_hi);
    return y_amount / (sqrt_z - sqrt(p_lo));
}

/// Liquidity implied by an X deposit. Requires the market price below the
/// upper bound.
inline Real liquidity_from_token_x(const Real& x_amount, int tick_lower, int tick_upper,
                                   const RawPrice& p_mkt) {
    if (x_amount <= 0) throw DomainError("liquidity_from_token_x: amount must be positive");
    const Real p_hi = tick_math::tick_to_price(tick_upper);
    if (p_mkt.raw >= p_hi)
        throw DomainError("liquidity_from_token_x: market price at or above range");
    const Real p_lo = tick_math::tick_to_price(tick_lower);
    const Real sqrt_z = p_mkt.raw > p_lo ? sqrt(p_mkt.raw) : sqrt(p_lo);
    return x_amount / (Real(1) / sqrt_z - Real(1) / sqrt(p_hi));
}

// ----------------------------------------------------------------------------
// Pool
//
// Tick-indexed concentrated-liquidity state machine. Mutations (mint, burn,
// swap) are single-writer; a Pool is a plain value, so taking a copy yields an
// immutable snapshot that is safe to share across threads. quote()/analytics
// never mutate.
// ----------------------------------------------------------------------------

class Pool {
public:
    struct MintResult {
        Real x_required;
        Real y_required;
        PositionId position_id = 0;
    };
    struct BurnResult {
        Real x_returned;
        Real y_returned;
    };

    Pool(PoolConfig config, RawPrice initial_price)
        : config_(std::move(config)), price_(initial_price.raw) {
        config_.validate();
        if (price_ <= 0) throw DomainError("initial price must be positive");
    }

    const PoolConfig& config() const { return config_; }
    RawPrice market_price() const { return RawPrice{price_}; }
    int market_tick() const { return tick_math::price_to_tick(price_); }
    const std::map<int, Real>& ranges() const { return ranges_; }
    const std::map<PositionId, LiquidityPosition>& positions() const { return positions_; }
    Real fees_x() const { return fees_x_; }
    Real fees_y() const { return fees_y_; }

    Real liquidity_at(int tick_lower) const {
        auto it = ranges_.find(tick_lower);
        return it == ranges_.end() ? Real(0) : it->second;
    }

    /// Reserves currently held by the elementary range [tick_lower, tick_lower + s).
    RangeReserves reserves_in_range(int tick_lower) const {
        const Real liquidity = liquidity_at(tick_lower);
        if (liquidity == 0) return RangeReserves{Real(0), Real(0)};
        return range_reserves(liquidity, tick_math::tick_to_price(tick_lower),
                              tick_math::tick_to_price(tick_lower + config_.tick_spacing),
                              price_);
    }

    void set_market_price(RawPrice p) {
        if (p.raw <= 0) throw DomainError("price must be positive");
        price_ = std::move(p.raw);
    }

    /// Anonymous liquidity on one elementary range; used when loading snapshots.
    void add_range_liquidity(int tick_lower, const Real& liquidity) {
        check_range(tick_lower, tick_lower + config_.tick_spacing);
        if (liquidity <= 0) throw ValidationError("liquidity must be positive");
        ranges_[tick_lower] += liquidity;
    }

    MintResult mint(const std::string& owner, int tick_lower, int tick_upper,
                    const Real& liquidity) {
        check_range(tick_lower, tick_upper);
        if (liquidity <= 0) throw ValidationError("mint liquidity must be positive");
        for (int j = tick_lower; j < tick_upper; j += config_.tick_spacing)
            ranges_[j] += liquidity;
        LiquidityPosition pos{next_position_id_++, owner, tick_lower, tick_upper, liquidity};
        auto [x, y] = position_amounts(pos, RawPrice{price_});
        positions_.emplace(pos.id, pos);
        return MintResult{x, y, pos.id};
    }

    BurnResult burn(PositionId id) {
        auto it = positions_.find(id);
        if (it == positions_.end())
            throw NotFoundError("unknown position id " + std::to_string(id));
        const LiquidityPosition pos = it->second;
        positions_.erase(it);
        remove_range_liquidity(pos.tick_lower, pos.tick_upper, pos.liquidity);
        auto [x, y] = position_amounts(pos, RawPrice{price_});
        return BurnResult{x, y};
    }

    /// Burn by owner and range, possibly partially; this is how on-chain logs
    /// express burns. Draws down the owner's matching positions first, then
    /// anonymous liquidity (snapshot-loaded ranges with no position records).
    /// Never touches other owners' positions.
    BurnResult burn_liquidity(const std::string& owner, int tick_lower, int tick_upper,
                              const Real& liquidity) {
        check_range(tick_lower, tick_upper);
        if (liquidity <= 0) throw ValidationError("burn liquidity must be positive");

        Real owned(0);
        for (const auto& [id, pos] : positions_)
            if (pos.owner == owner && pos.tick_lower == tick_lower && pos.tick_upper == tick_upper)
                owned += pos.liquidity;
        const Real anon_needed = liquidity > owned ? liquidity - owned : Real(0);
        if (anon_needed > 0) {
            for (int j = tick_lower; j < tick_upper; j += config_.tick_spacing) {
                Real covered(0);
                for (const auto& [id, pos] : positions_)
                    if (pos.tick_lower <= j && j < pos.tick_upper) covered += pos.liquidity;
                if (liquidity_at(j) - covered < anon_needed)
                    throw ValidationError("burn exceeds available position liquidity on range "
                                          "starting at tick " + std::to_string(j));
            }
        }

        remove_range_liquidity(tick_lower, tick_upper, liquidity);
        Real remaining = liquidity;
        for (auto it = positions_.begin(); it != positions_.end() && remaining > 0;) {
            LiquidityPosition& pos = it->second;
            if (pos.owner == owner && pos.tick_lower == tick_lower && pos.tick_upper == tick_upper) {
                if (pos.liquidity <= remaining) {
                    remaining -= pos.liquidity;
                    it = positions_.erase(it);
                    continue;
                }
                pos.liquidity -= remaining;
                remaining = 0;
            }
            ++it;
        }
        LiquidityPosition burned{0, owner, tick_lower, tick_upper, liquidity};
        auto [x, y] = position_amounts(burned, RawPrice{price_});
        return BurnResult{x, y};
    }

    SwapResult swap_sell_x(const Real& delta_x_in) { return swap(Side::sell_x, delta_x_in); }
    SwapResult swap_buy_x(const Real& delta_y_in) { return swap(Side::buy_x, delta_y_in); }

    SwapResult swap(Side side, const Real& amount_in) {
        Walk w = walk(side, amount_in);
        price_ = w.post_price;
        if (side == Side::sell_x)
            fees_x_ += w.fee;
        else
            fees_y_ += w.fee;
        return w.result;
    }

    /// Same math as swap(), state untouched.
    SwapResult quote(Side side, const Real& amount_in) const { return walk(side, amount_in).result; }

    /// Quote a USD notional converted to input-token raw units at feed prices.
    SwapResult quote_usd(double notional_usd, Side side, const TokenPricesUsd& prices) const {
        if (!(notional_usd > 0)) throw ValidationError("quote notional must be positive");
        Real in;
        if (side == Side::sell_x) {
            if (!(prices.x_usd > 0)) throw ValidationError("price feed: x_usd must be positive");
            in = Real(notional_usd) / Real(prices.x_usd) * pow10_int(config_.decimals_x);
        } else {
            if (!(prices.y_usd > 0)) throw ValidationError("price feed: y_usd must be positive");
            in = Real(notional_usd) / Real(prices.y_usd) * pow10_int(config_.decimals_y);
        }
        return quote(side, in);
    }

    /// Trade the pool price to `target`, consuming whatever liquidity lies in
    /// between (the stylized arbitrageur: fee-free, unconstrained). Returns
    /// the trader-side amounts. The price lands on `target` even if the pool
    /// runs out of initialized ranges on the way.
    std::pair<Real, Real> swap_to_price(const RawPrice& target) {
        if (target.raw <= 0) throw DomainError("target price must be positive");
        Real dx(0), dy(0);
        if (target.raw == price_) return {dx, dy};
        const int s = config_.tick_spacing;
        const Real sqrt_start = sqrt(price_);
        const Real sqrt_target = sqrt(target.raw);
        // Per-range contributions telescope, so iteration order is immaterial.
        for (const auto& [lo, liquidity] : ranges_) {
            if (liquidity <= 0) continue;
            const Real sqrt_lo = tick_math::sqrt_tick_price(lo);
            const Real sqrt_hi = tick_math::sqrt_tick_price(lo + s);
            const Real sqrt_from = clamp_sqrt_price(sqrt_start, sqrt_lo, sqrt_hi);
            const Real sqrt_to = clamp_sqrt_price(sqrt_target, sqrt_lo, sqrt_hi);
            if (sqrt_to == sqrt_from) continue;
            dx += liquidity * (Real(1) / sqrt_to - Real(1) / sqrt_from);
            dy += liquidity * (sqrt_to - sqrt_from);
        }
        price_ = target.raw;
        return {dx, dy};
    }

private:
    struct Walk {
        SwapResult result;
        Real post_price;
        Real fee;
    };

    void check_range(int tick_lower, int tick_upper) const {
        const int s = config_.tick_spacing;
        if (!tick_math::is_aligned(tick_lower, s) || !tick_math::is_aligned(tick_upper, s))
            throw ValidationError("tick bounds must be multiples of the tick spacing");
        if (tick_lower >= tick_upper) throw ValidationError("tick_lower must be below tick_upper");
        if (tick_lower < tick_math::kMinTick || tick_upper > tick_math::kMaxTick)
            throw ValidationError("tick bounds outside admissible range");
    }

    void remove_range_liquidity(int tick_lower, int tick_upper, const Real& liquidity) {
        for (int j = tick_lower; j < tick_upper; j += config_.tick_spacing) {
            auto it = ranges_.find(j);
            if (it == ranges_.end()) continue;
            it->second -= liquidity;
            // Exact decimals cancel cleanly; the guard only catches residue
            // from mixing magnitudes beyond 50 digits.
            if (it->second <= 0 || it->second < liquidity * Real("1e-40")) ranges_.erase(it);
        }
    }

    Walk walk(Side side, const Real& amount_in) const {
        if (amount_in <= 0) throw ValidationError("swap input must be positive");
        const Real fee = amount_in * config_.fee_bp / 10000;
        const Real net_in = amount_in - fee;
        const int s = config_.tick_spacing;

        Real remaining = net_in;
        Real out(0);
        Real used(0);
        Real p_cur = price_;
        int cur_lo = tick_math::align_down(tick_math::price_to_tick(p_cur), s);
        int crossed = 0;
        bool exhausted = false;

        while (remaining > 0) {
            auto it = ranges_.find(cur_lo);
            if (it != ranges_.end() && it->second > 0) {
                const Real& liquidity = it->second;
                const Real sqrt_lo = tick_math::sqrt_tick_price(cur_lo);
                const Real sqrt_hi = tick_math::sqrt_tick_price(cur_lo + s);
                const Real sqrt_z = clamp_sqrt_price(sqrt(p_cur), sqrt_lo, sqrt_hi);
                const RangeReserves r = reserves_from_sqrt(liquidity, sqrt_z, sqrt_lo, sqrt_hi);
                if (side == Side::sell_x && r.y > 0) {
                    const Real dx_max = range_max_input_x(r, liquidity, sqrt_lo, sqrt_hi);
                    if (remaining < dx_max) {
                        const Real dy = range_sell_output(remaining, r, liquidity, sqrt_lo, sqrt_hi);
                        out += dy;
                        p_cur = (r.y + dy + liquidity * sqrt_lo) /
                                (r.x + remaining + liquidity / sqrt_hi);
                        used += remaining;
                        remaining = 0;
                        break;
                    }
                    out -= r.y;
                    used += dx_max;
                    remaining -= dx_max;
                    p_cur = tick_math::tick_to_price(cur_lo);
                    if (remaining == 0) break;
                } else if (side == Side::buy_x && r.x > 0) {
                    const Real dy_max = range_max_input_y(r, liquidity, sqrt_lo, sqrt_hi);
                    if (remaining < dy_max) {
                        const Real dx = range_buy_output(remaining, r, liquidity, sqrt_lo, sqrt_hi);
                        out += dx;
                        p_cur = (r.y + remaining + liquidity * sqrt_lo) /
                                (r.x + dx + liquidity / sqrt_hi);
                        used += remaining;
                        remaining = 0;
                        break;
                    }
                    out -= r.x;
                    used += dy_max;
                    remaining -= dy_max;
                    p_cur = tick_math::tick_to_price(cur_lo + s);
                    if (remaining == 0) break;
                }
            }
            if (side == Side::sell_x) {
                auto below = ranges_.lower_bound(cur_lo);
                if (below == ranges_.begin()) {
                    exhausted = true;
                    break;
                }
                --below;
                crossed += (cur_lo - below->first) / s;
                cur_lo = below->first;
                const Real boundary = tick_math::tick_to_price(cur_lo + s);
                if (boundary < p_cur) p_cur = boundary;
            } else {
                auto above = ranges_.upper_bound(cur_lo);
                if (above == ranges_.end()) {
                    exhausted = true;
                    break;
                }
                crossed += (above->first - cur_lo) / s;
                cur_lo = above->first;
                const Real boundary = tick_math::tick_to_price(cur_lo);
                if (boundary > p_cur) p_cur = boundary;
            }
        }

        // Gross input including the fee share of what was actually consumed.
        const Real gross_used = used * Real(10000) / Real(10000 - config_.fee_bp);
        if (exhausted) {
            const Real dx = side == Side::sell_x ? gross_used : out;
            const Real dy = side == Side::sell_x ? out : gross_used;
            throw LiquidityExhaustedError("swap exhausted initialized liquidity", dx, dy,
                                          gross_used - used, crossed);
        }

        SwapResult res;
        res.delta_x = side == Side::sell_x ? amount_in : out;
        res.delta_y = side == Side::sell_x ? out : amount_in;
        res.fee_paid = fee;
        res.ticks_crossed = crossed;
        Real avg = res.delta_y / res.delta_x;
        if (avg < 0) avg = -avg;
        res.average_price = RawPrice{avg};
        Real slip = avg / price_ - 1;
        if (slip < 0) slip = -slip;
        res.slippage_bp = slip * 10000;
        return Walk{std::move(res), p_cur, fee};
    }

    PoolConfig config_;
    Real price_;                 // continuous raw price; post-swap values sit between ticks
    std::map<int, Real> ranges_;  // tick_lower -> aggregate liquidity on [tick_lower, +s)
    std::map<PositionId, LiquidityPosition> positions_;
    PositionId next_position_id_ = 1;
    Real fees_x_;
    Real fees_y_;
};

}  // namespace ammsim
