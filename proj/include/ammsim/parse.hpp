#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ammsim/events.hpp"
#include "ammsim/tick_math.hpp"
#include "ammsim/types.hpp"

namespace ammsim {

enum class EventFormat { csv, jsonl };

struct RowDiagnostic {
    int line = 0;
    std::string message;
};

struct ParsedEvents {
    std::vector<PoolEvent> events;  // canonically sorted
    std::vector<RowDiagnostic> diagnostics;
};

namespace detail {

inline constexpr std::string_view kEventHeader =
    "kind,timestamp,block,log_index,owner,tick_lower,tick_upper,liquidity,amount_x,amount_y";

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline bool parse_i64(std::string_view s, std::int64_t& out) {
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && p == end && !s.empty();
}

inline bool parse_int(std::string_view s, int& out) {
    std::int64_t v;
    if (!parse_i64(s, v) || v < INT32_MIN || v > INT32_MAX) return false;
    out = static_cast<int>(v);
    return true;
}

inline bool parse_real(const std::string& s, Real& out) {
    if (s.empty()) return false;
    try {
        out = Real(s);
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

// Field-level checks shared by both formats. Returns an error message or ""
// and normalizes the event in place.
inline std::string validate_event(PoolEvent& ev, const PoolConfig& cfg, bool has_ticks,
                                  bool has_liquidity, bool has_amount_x, bool has_amount_y) {
    if (ev.block < 0) return "block must be nonnegative";
    if (ev.kind == EventKind::mint || ev.kind == EventKind::burn) {
        if (ev.owner.empty()) return "mint/burn requires owner";
        if (!has_ticks) return "mint/burn requires tick_lower and tick_upper";
        if (!has_liquidity) return "mint/burn requires liquidity";
        if (has_amount_x || has_amount_y) return "mint/burn must leave amount_x/amount_y empty";
        if (!tick_math::is_aligned(ev.tick_lower, cfg.tick_spacing) ||
            !tick_math::is_aligned(ev.tick_upper, cfg.tick_spacing))
            return "tick bounds not divisible by tick_spacing";
        if (ev.tick_lower >= ev.tick_upper) return "tick_lower must be below tick_upper";
        if (ev.tick_lower < tick_math::kMinTick || ev.tick_upper > tick_math::kMaxTick)
            return "tick bounds outside admissible range";
        if (!(ev.liquidity > 0)) return "liquidity must be positive";
    } else {
        if (has_ticks || has_liquidity) return "swap must leave tick/liquidity fields empty";
        if (!has_amount_x || !has_amount_y) return "swap requires amount_x and amount_y";
        if (ev.amount_x == 0 || ev.amount_y == 0) return "swap amounts must be nonzero";
        if ((ev.amount_x > 0) == (ev.amount_y > 0))
            return "swap amounts must have opposite signs";
    }
    return {};
}

inline void finalize(ParsedEvents& result) {
    sort_events(result.events);
    for (std::size_t i = 1; i < result.events.size(); ++i) {
        const PoolEvent& a = result.events[i - 1];
        const PoolEvent& b = result.events[i];
        if (std::tie(a.block, a.log_index) >= std::tie(b.block, b.log_index))
            throw ParseError("events are not strictly ordered by (block, log_index) after sort; "
                             "offending block " + std::to_string(b.block) + " log " +
                             std::to_string(b.log_index));
    }
}

}  // namespace detail

/// Strict schema parse. Row-level problems become diagnostics and the row is
/// rejected; structural problems (bad header, inconsistent ordering) throw.
inline ParsedEvents parse_events(std::istream& in, EventFormat format, const PoolConfig& cfg) {
    ParsedEvents result;
    std::string line;
    int line_no = 0;

    if (format == EventFormat::csv) {
        if (!std::getline(in, line)) return result;  // empty file: no events, no diagnostics
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line != detail::kEventHeader)
            throw ParseError("bad CSV header; expected: " + std::string(detail::kEventHeader));
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            auto fields = detail::split_csv(line);
            if (fields.size() != 10) {
                result.diagnostics.push_back({line_no, "expected 10 fields, got " +
                                                           std::to_string(fields.size())});
                continue;
            }
            PoolEvent ev;
            std::string err;
            bool has_ticks = false, has_liq = false, has_ax = false, has_ay = false;
            if (fields[0] == "swap") ev.kind = EventKind::swap;
            else if (fields[0] == "mint") ev.kind = EventKind::mint;
            else if (fields[0] == "burn") ev.kind = EventKind::burn;
            else err = "unknown kind '" + fields[0] + "'";
            if (err.empty() && !detail::parse_i64(fields[1], ev.timestamp)) err = "bad timestamp";
            if (err.empty() && !detail::parse_i64(fields[2], ev.block)) err = "bad block";
            if (err.empty() && !detail::parse_int(fields[3], ev.log_index)) err = "bad log_index";
            ev.owner = fields[4];
            if (err.empty() && (!fields[5].empty() || !fields[6].empty())) {
                has_ticks = true;
                if (!detail::parse_int(fields[5], ev.tick_lower) ||
                    !detail::parse_int(fields[6], ev.tick_upper))
                    err = "bad tick bounds";
            }
            if (err.empty() && !fields[7].empty()) {
                has_liq = true;
                if (!detail::parse_real(fields[7], ev.liquidity)) err = "bad liquidity";
            }
            if (err.empty() && !fields[8].empty()) {
                has_ax = true;
                if (!detail::parse_real(fields[8], ev.amount_x)) err = "bad amount_x";
            }
            if (err.empty() && !fields[9].empty()) {
                has_ay = true;
                if (!detail::parse_real(fields[9], ev.amount_y)) err = "bad amount_y";
            }
            if (err.empty()) err = detail::validate_event(ev, cfg, has_ticks, has_liq, has_ax, has_ay);
            if (!err.empty()) {
                result.diagnostics.push_back({line_no, err});
                continue;
            }
            result.events.push_back(std::move(ev));
        }
    } else {
        static const std::vector<std::string> known_keys = {
            "kind",       "timestamp", "block",     "log_index", "owner",
            "tick_lower", "tick_upper", "liquidity", "amount_x",  "amount_y"};
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                result.diagnostics.push_back({line_no, std::string("invalid JSON: ") + e.what()});
                continue;
            }
            if (!j.is_object()) {
                result.diagnostics.push_back({line_no, "line is not a JSON object"});
                continue;
            }
            std::string err;
            for (const auto& [key, value] : j.items()) {
                if (std::find(known_keys.begin(), known_keys.end(), key) == known_keys.end()) {
                    err = "unknown column '" + key + "'";
                    break;
                }
            }
            PoolEvent ev;
            bool has_ticks = false, has_liq = false, has_ax = false, has_ay = false;
            auto get_real = [&](const char* key, Real& out, bool& present) {
                if (!j.contains(key) || j[key].is_null()) return;
                present = true;
                if (j[key].is_string()) {
                    if (!detail::parse_real(j[key].get<std::string>(), out))
                        err = std::string("bad ") + key;
                } else if (j[key].is_number_integer()) {
                    out = Real(j[key].get<std::int64_t>());
                } else if (j[key].is_number_unsigned()) {
                    out = Real(j[key].get<std::uint64_t>());
                } else {
                    err = std::string(key) + " must be a decimal string";
                }
            };
            try {
                if (err.empty()) {
                    if (!j.contains("kind") || !j["kind"].is_string()) err = "missing kind";
                    else {
                        const std::string k = j["kind"].get<std::string>();
                        if (k == "swap") ev.kind = EventKind::swap;
                        else if (k == "mint") ev.kind = EventKind::mint;
                        else if (k == "burn") ev.kind = EventKind::burn;
                        else err = "unknown kind '" + k + "'";
                    }
                }
                if (err.empty()) {
                    if (!j.contains("timestamp") || !j["timestamp"].is_number_integer())
                        err = "missing/bad timestamp";
                    else ev.timestamp = j["timestamp"].get<std::int64_t>();
                }
                if (err.empty()) {
                    if (!j.contains("block") || !j["block"].is_number_integer()) err = "missing/bad block";
                    else ev.block = j["block"].get<std::int64_t>();
                }
                if (err.empty()) {
                    if (!j.contains("log_index") || !j["log_index"].is_number_integer())
                        err = "missing/bad log_index";
                    else ev.log_index = j["log_index"].get<int>();
                }
                if (err.empty() && j.contains("owner") && !j["owner"].is_null()) {
                    if (!j["owner"].is_string()) err = "owner must be a string";
                    else ev.owner = j["owner"].get<std::string>();
                }
                if (err.empty() && (j.contains("tick_lower") || j.contains("tick_upper"))) {
                    has_ticks = true;
                    if (!j.contains("tick_lower") || !j.contains("tick_upper") ||
                        !j["tick_lower"].is_number_integer() || !j["tick_upper"].is_number_integer())
                        err = "bad tick bounds";
                    else {
                        ev.tick_lower = j["tick_lower"].get<int>();
                        ev.tick_upper = j["tick_upper"].get<int>();
                    }
                }
                if (err.empty()) get_real("liquidity", ev.liquidity, has_liq);
                if (err.empty()) get_real("amount_x", ev.amount_x, has_ax);
                if (err.empty()) get_real("amount_y", ev.amount_y, has_ay);
            } catch (const nlohmann::json::exception& e) {
                err = std::string("type mismatch: ") + e.what();
            }
            if (err.empty()) err = detail::validate_event(ev, cfg, has_ticks, has_liq, has_ax, has_ay);
            if (!err.empty()) {
                result.diagnostics.push_back({line_no, err});
                continue;
            }
            result.events.push_back(std::move(ev));
        }
    }
    detail::finalize(result);
    return result;
}

inline ParsedEvents parse_events_file(const std::string& path, EventFormat format,
                                      const PoolConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open events file: " + path);
    return parse_events(in, format, cfg);
}

// ----------------------------------------------------------------------------
// Event serialization (round-trips through parse_events)
// ----------------------------------------------------------------------------

inline std::string events_to_csv(const std::vector<PoolEvent>& events) {
    std::ostringstream out;
    out << detail::kEventHeader << '\n';
    for (const PoolEvent& ev : events) {
        const bool lp = ev.kind != EventKind::swap;
        out << event_kind_name(ev.kind) << ',' << ev.timestamp << ',' << ev.block << ','
            << ev.log_index << ',' << ev.owner << ',';
        if (lp) out << ev.tick_lower;
        out << ',';
        if (lp) out << ev.tick_upper;
        out << ',';
        if (lp) out << to_decimal_string(ev.liquidity);
        out << ',';
        if (!lp) out << to_decimal_string(ev.amount_x);
        out << ',';
        if (!lp) out << to_decimal_string(ev.amount_y);
        out << '\n';
    }
    return out.str();
}

inline std::string events_to_jsonl(const std::vector<PoolEvent>& events) {
    std::ostringstream out;
    for (const PoolEvent& ev : events) {
        nlohmann::ordered_json j;
        j["kind"] = event_kind_name(ev.kind);
        j["timestamp"] = ev.timestamp;
        j["block"] = ev.block;
        j["log_index"] = ev.log_index;
        if (!ev.owner.empty()) j["owner"] = ev.owner;
        if (ev.kind != EventKind::swap) {
            j["tick_lower"] = ev.tick_lower;
            j["tick_upper"] = ev.tick_upper;
            j["liquidity"] = to_decimal_string(ev.liquidity);
        } else {
            j["amount_x"] = to_decimal_string(ev.amount_x);
            j["amount_y"] = to_decimal_string(ev.amount_y);
        }
        out << j.dump() << '\n';
    }
    return out.str();
}

// ----------------------------------------------------------------------------
// Price series CSV: "timestamp,price" with an optional third column giving
// token X's own USD price.
// ----------------------------------------------------------------------------

inline PriceSeries parse_price_series(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) return PriceSeries{};
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool has_x = false;
    if (line == "timestamp,price") has_x = false;
    else if (line == "timestamp,price,price_x") has_x = true;
    else throw ParseError("bad price series header; expected 'timestamp,price[,price_x]'");
    std::vector<PricePoint> points;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = detail::split_csv(line);
        if (fields.size() != (has_x ? 3u : 2u))
            throw ParseError("price series line " + std::to_string(line_no) + ": wrong field count");
        PricePoint p;
        if (!detail::parse_i64(fields[0], p.timestamp))
            throw ParseError("price series line " + std::to_string(line_no) + ": bad timestamp");
        try {
            p.y_usd = std::stod(fields[1]);
            if (has_x) p.x_usd = std::stod(fields[2]);
        } catch (const std::exception&) {
            throw ParseError("price series line " + std::to_string(line_no) + ": bad price");
        }
        points.push_back(p);
    }
    try {
        return PriceSeries(std::move(points));
    } catch (const ValidationError& e) {
        throw ParseError(std::string("price series: ") + e.what());
    }
}

inline PriceSeries parse_price_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open price series file: " + path);
    return parse_price_series(in);
}

// ----------------------------------------------------------------------------
// Pool config as key=value lines ('#' starts a comment)
// ----------------------------------------------------------------------------

inline PoolConfig parse_pool_config(std::istream& in) {
    PoolConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("pool config line " + std::to_string(line_no) + ": expected key=value");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        int iv = 0;
        const bool is_int = detail::parse_int(value, iv);
        if (key == "token_x") cfg.token_x = value;
        else if (key == "token_y") cfg.token_y = value;
        else if (key == "decimals_x" && is_int) cfg.decimals_x = iv;
        else if (key == "decimals_y" && is_int) cfg.decimals_y = iv;
        else if (key == "fee_bp" && is_int) cfg.fee_bp = iv;
        else if (key == "tick_spacing" && is_int) cfg.tick_spacing = iv;
        else throw ParseError("pool config line " + std::to_string(line_no) + ": bad entry '" +
                              key + "'");
    }
    cfg.validate();
    return cfg;
}

inline PoolConfig parse_pool_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pool config file: " + path);
    return parse_pool_config(in);
}

}  // namespace ammsim
