#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "ammsim/pool.hpp"

namespace ammsim {

// Canonical snapshot form: config block, market price as a decimal string,
// and (tick_lower, liquidity) pairs sorted ascending. Fixed key order and
// full-precision decimal strings make the serialization byte-stable for
// identical state. Positions are aggregate-only by design.
inline nlohmann::ordered_json snapshot_to_json(const Pool& pool) {
    nlohmann::ordered_json j;
    const PoolConfig& cfg = pool.config();
    j["config"] = {{"token_x", cfg.token_x},       {"token_y", cfg.token_y},
                   {"decimals_x", cfg.decimals_x}, {"decimals_y", cfg.decimals_y},
                   {"fee_bp", cfg.fee_bp},         {"tick_spacing", cfg.tick_spacing}};
    j["market_price"] = to_decimal_string(pool.market_price().raw);
    auto ranges = nlohmann::ordered_json::array();
    for (const auto& [lo, liquidity] : pool.ranges()) {
        if (liquidity <= 0) continue;
        ranges.push_back({lo, to_decimal_string(liquidity)});
    }
    j["ranges"] = std::move(ranges);
    return j;
}

inline std::string snapshot_to_string(const Pool& pool) { return snapshot_to_json(pool).dump(); }

inline Pool pool_from_snapshot_json(const nlohmann::json& j) {
    try {
        PoolConfig cfg;
        const auto& c = j.at("config");
        cfg.token_x = c.at("token_x").get<std::string>();
        cfg.token_y = c.at("token_y").get<std::string>();
        cfg.decimals_x = c.at("decimals_x").get<int>();
        cfg.decimals_y = c.at("decimals_y").get<int>();
        cfg.fee_bp = c.at("fee_bp").get<int>();
        cfg.tick_spacing = c.at("tick_spacing").get<int>();
        Pool pool(cfg, RawPrice::from_raw(Real(j.at("market_price").get<std::string>())));
        for (const auto& entry : j.at("ranges")) {
            if (!entry.is_array() || entry.size() != 2)
                throw ValidationError("snapshot range entries must be [tick, liquidity] pairs");
            pool.add_range_liquidity(entry.at(0).get<int>(),
                                     Real(entry.at(1).get<std::string>()));
        }
        return pool;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed snapshot: ") + e.what());
    }
}

inline Pool load_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open snapshot file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("snapshot is not valid JSON: ") + e.what());
    }
    return pool_from_snapshot_json(j);
}

inline void write_snapshot(const Pool& pool, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write snapshot file: " + path);
    out << snapshot_to_string(pool) << '\n';
}

}  // namespace ammsim
