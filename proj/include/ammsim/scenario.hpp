#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ammsim/pool.hpp"

namespace ammsim {

// Stylized adverse-selection experiment: one LP per pool, a permanent price
// shock, and an arbitrageur who trades the pool to the new price. Prices are
// human units (token Y is the USD-pegged quote side), pools are fee-free.

struct LpPolicy {
    std::string name;
    double range_width = 0;      // geometric half-width: range [p/(1+w), p*(1+w)]
    bool repositions = false;
    double update_latency = 0;   // 0 = update lands before the arbitrageur
    double gas_cost_usd = 0;     // charged per position update
};

struct ScenarioSpec {
    double initial_price = 0;
    double shock_price = 0;
    double capital_usd = 0;
    std::vector<LpPolicy> lp_policies;

    void validate() const {
        if (!(initial_price > 0) || !(shock_price > 0))
            throw ValidationError("scenario prices must be positive");
        // shock == initial is allowed as a degenerate case: every strategy
        // then nets fees minus gas against buy-and-hold.
        if (!(capital_usd > 0)) throw ValidationError("capital_usd must be positive");
        if (lp_policies.empty()) throw ValidationError("scenario needs at least one lp policy");
        for (const LpPolicy& p : lp_policies) {
            if (!(p.range_width > 0)) throw ValidationError("policy range_width must be positive");
            if (p.update_latency < 0 || p.gas_cost_usd < 0)
                throw ValidationError("latency and gas cost must be nonnegative");
        }
    }
};

struct LpOutcome {
    std::string name;
    double pnl_vs_hold_usd = 0;
    double fees_earned_usd = 0;
    double gas_spent_usd = 0;
    int updates = 0;
    double hold_value_usd = 0;
    double final_value_usd = 0;
};

namespace detail {

inline std::pair<int, int> ticks_around(double price, double width) {
    int lo = tick_math::price_to_tick(Real(price / (1.0 + width)));
    int hi = tick_math::price_to_tick(Real(price * (1.0 + width))) + 1;
    if (hi <= lo) hi = lo + 1;
    return {lo, hi};
}

// Mint a position worth `capital` USD on [lo, hi] at the current pool price,
// converting the LP's holdings at that price (frictionless numeraire swap).
inline PositionId mint_capital(Pool& pool, const std::string& owner, int lo, int hi,
                               double capital_usd) {
    LiquidityPosition unit{0, owner, lo, hi, Real(1)};
    auto [ux, uy] = position_amounts(unit, pool.market_price());
    const Real unit_cost = ux * pool.market_price().raw + uy;  // in Y units
    if (unit_cost <= 0) throw ValidationError("policy range holds no value at this price");
    const Real liquidity = Real(capital_usd) / unit_cost;
    return pool.mint(owner, lo, hi, liquidity).position_id;
}

}  // namespace detail

/// Run one LP policy against the shock and report P&L against buy-and-hold of
/// the initial deposit.
inline LpOutcome run_policy(const ScenarioSpec& spec, const LpPolicy& policy) {
    PoolConfig cfg;
    cfg.token_x = "X";
    cfg.token_y = "Y";
    cfg.tick_spacing = 1;
    cfg.fee_bp = 0;
    Pool pool(cfg, RawPrice::from_raw(Real(spec.initial_price)));

    auto [lo, hi] = detail::ticks_around(spec.initial_price, policy.range_width);
    {
        const Real p0 = pool.market_price().raw;
        if (!(tick_math::tick_to_price(lo) < p0) || !(p0 < tick_math::tick_to_price(hi)))
            throw ValidationError("policy range excludes the initial price");
    }
    PositionId pos = detail::mint_capital(pool, policy.name, lo, hi, spec.capital_usd);

    // Buy-and-hold benchmark: the initial deposit valued at the shock price.
    const auto& initial = pool.positions().at(pos);
    auto [x0, y0] = position_amounts(initial, pool.market_price());
    const Real hold_value = x0 * Real(spec.shock_price) + y0;

    LpOutcome outcome;
    outcome.name = policy.name;

    const bool updates_first = policy.repositions && policy.update_latency <= 0;
    if (updates_first) {
        pool.burn(pos);
        auto [rlo, rhi] = detail::ticks_around(spec.shock_price, policy.range_width);
        pos = detail::mint_capital(pool, policy.name, rlo, rhi, spec.capital_usd);
        outcome.updates = 1;
    }

    pool.swap_to_price(RawPrice::from_raw(Real(spec.shock_price)));

    if (policy.repositions && !updates_first) {
        // Too slow: the arbitrageur already traded. Re-centering now only
        // costs gas as far as this one-shock experiment is concerned.
        auto [x, y] = pool.burn(pos);
        const Real wealth = x * Real(spec.shock_price) + y;
        auto [rlo, rhi] = detail::ticks_around(spec.shock_price, policy.range_width);
        pos = detail::mint_capital(pool, policy.name, rlo, rhi, to_double(wealth));
        outcome.updates = 1;
    }

    auto [x1, y1] = pool.burn(pos);
    const Real final_value = x1 * Real(spec.shock_price) + y1 + pool.fees_x() * Real(spec.shock_price) +
                             pool.fees_y();
    outcome.fees_earned_usd =
        to_double(pool.fees_x() * Real(spec.shock_price) + pool.fees_y());
    outcome.gas_spent_usd = policy.gas_cost_usd * outcome.updates;
    outcome.hold_value_usd = to_double(hold_value);
    outcome.final_value_usd = to_double(final_value) - outcome.gas_spent_usd;
    outcome.pnl_vs_hold_usd = outcome.final_value_usd - outcome.hold_value_usd;
    return outcome;
}

inline std::vector<LpOutcome> run_scenario(const ScenarioSpec& spec) {
    spec.validate();
    std::vector<LpOutcome> outcomes;
    outcomes.reserve(spec.lp_policies.size());
    for (const LpPolicy& policy : spec.lp_policies) outcomes.push_back(run_policy(spec, policy));
    return outcomes;
}

// ----------------------------------------------------------------------------
// JSON I/O
// ----------------------------------------------------------------------------

inline ScenarioSpec scenario_from_json(const nlohmann::json& j) {
    try {
        ScenarioSpec spec;
        spec.initial_price = j.at("initial_price").get<double>();
        spec.shock_price = j.at("shock_price").get<double>();
        spec.capital_usd = j.at("capital_usd").get<double>();
        for (const auto& p : j.at("lp_policies")) {
            LpPolicy policy;
            policy.name = p.at("name").get<std::string>();
            policy.range_width = p.at("range_width").get<double>();
            policy.repositions = p.value("repositions", false);
            policy.update_latency = p.value("update_latency", 0.0);
            policy.gas_cost_usd = p.value("gas_cost_usd", 0.0);
            spec.lp_policies.push_back(std::move(policy));
        }
        spec.validate();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed scenario spec: ") + e.what());
    }
}

inline nlohmann::ordered_json outcomes_to_json(const std::vector<LpOutcome>& outcomes) {
    auto arr = nlohmann::ordered_json::array();
    for (const LpOutcome& o : outcomes) {
        arr.push_back({{"name", o.name},
                       {"pnl_vs_hold_usd", o.pnl_vs_hold_usd},
                       {"fees_earned_usd", o.fees_earned_usd},
                       {"gas_spent_usd", o.gas_spent_usd},
                       {"updates", o.updates},
                       {"hold_value_usd", o.hold_value_usd},
                       {"final_value_usd", o.final_value_usd}});
    }
    return arr;
}

inline std::string outcomes_to_csv(const std::vector<LpOutcome>& outcomes) {
    std::string out = "name,pnl_vs_hold_usd,fees_earned_usd,gas_spent_usd,updates,"
                      "hold_value_usd,final_value_usd\n";
    char buf[256];
    for (const LpOutcome& o : outcomes) {
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%d,%.6f,%.6f\n", o.name.c_str(),
                      o.pnl_vs_hold_usd, o.fees_earned_usd, o.gas_spent_usd, o.updates,
                      o.hold_value_usd, o.final_value_usd);
        out += buf;
    }
    return out;
}

}  // namespace ammsim
