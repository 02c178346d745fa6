#pragma once

#include <cmath>

#include "ammsim/errors.hpp"
#include "ammsim/types.hpp"

namespace ammsim {

// Constant-product baseline, x * y = k. It exists to validate the v3 engine
// against closed forms, so it runs in plain doubles and charges no fee.
struct V2Pool {
    double reserve_x = 0;
    double reserve_y = 0;

    static V2Pool from_reserves(double x, double y) {
        if (!(x > 0) || !(y > 0)) throw ValidationError("v2 reserves must be positive");
        return V2Pool{x, y};
    }

    // Split a USD value 50-50 between the tokens at feed prices.
    static V2Pool from_tvl(double tvl_usd, const TokenPricesUsd& prices) {
        if (!(tvl_usd > 0)) throw ValidationError("v2 tvl must be positive");
        return from_reserves(tvl_usd / 2 / prices.x_usd, tvl_usd / 2 / prices.y_usd);
    }

    double k() const { return reserve_x * reserve_y; }
    double price() const { return reserve_y / reserve_x; }

    // Deposits must keep the 50-50 ratio, i.e. track the current price.
    void mint(double dx, double dy) {
        if (!(dx > 0) || !(dy > 0)) throw ValidationError("v2 mint amounts must be positive");
        if (std::abs(dy / dx - price()) > 1e-9 * price())
            throw ValidationError("v2 mint must match the pool ratio (50-50 deposit)");
        reserve_x += dx;
        reserve_y += dy;
    }
};

struct V2SwapResult {
    double delta_x = 0;
    double delta_y = 0;
    double average_price = 0;
    double slippage_bp = 0;
};

/// Exact-input swap against the constant product; solvent for any size.
inline V2SwapResult v2_swap(V2Pool& pool, double delta_in, Side side) {
    if (!(delta_in > 0)) throw ValidationError("swap input must be positive");
    const double p_pre = pool.price();
    V2SwapResult res;
    if (side == Side::buy_x) {
        res.delta_y = delta_in;
        res.delta_x = -pool.reserve_x * delta_in / (pool.reserve_y + delta_in);
    } else {
        res.delta_x = delta_in;
        res.delta_y = -pool.reserve_y * delta_in / (pool.reserve_x + delta_in);
    }
    pool.reserve_x += res.delta_x;
    pool.reserve_y += res.delta_y;
    res.average_price = std::abs(res.delta_y / res.delta_x);
    res.slippage_bp = std::abs(res.average_price / p_pre - 1) * 1e4;
    return res;
}

/// Closed-form slippage of a USD-size trade on a balanced v2 pool:
/// buys cost 2q/TVL, sells q/(q + TVL/2).
inline double v2_closed_form_slippage(double tvl_usd, double q_usd, Side side) {
    if (!(tvl_usd > 0) || !(q_usd > 0))
        throw ValidationError("tvl and trade size must be positive");
    if (side == Side::buy_x) return 2 * q_usd / tvl_usd;
    return q_usd / (q_usd + tvl_usd / 2);
}

}  // namespace ammsim
