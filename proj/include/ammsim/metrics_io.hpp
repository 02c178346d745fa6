#pragma once

#include <charconv>
#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "ammsim/metrics.hpp"

namespace ammsim {

// Shortest decimal form that round-trips through double.
inline std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

inline std::string format_size_label(double size) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", size);
    return buf;
}

inline std::string conc_column_name(double pct) {
    return "conc_" + format_size_label(pct * 100) + "pct";
}

inline std::string grid_column_name(const GridCell& cell) {
    return "slippage_" + format_size_label(cell.size_usd) + "_" + side_name(cell.side) + "_bp";
}

inline std::string metrics_csv_header(const MetricsOptions& options) {
    std::string h = "interval_start";
    for (double pct : options.conc_pcts) h += "," + conc_column_name(pct);
    h += ",intensity_value,intensity_freq,intensity_legacy,gap_avg,length_avg,precision_avg,"
         "tvl_usd,volume_24h_usd,turnover";
    for (double size : options.grid_sizes_usd)
        for (Side side : {Side::sell_x, Side::buy_x})
            h += "," + grid_column_name(GridCell{size, side, std::nullopt, {}});
    return h;
}

inline void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows,
                              const MetricsOptions& options) {
    out << metrics_csv_header(options) << '\n';
    auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const MetricsRow& row : rows) {
        out << row.interval_start;
        for (const auto& c : row.conc) out << ',' << cell(c);
        out << ',' << format_double(row.intensity_value)
            << ',' << format_double(row.intensity_freq)
            << ',' << format_double(row.intensity_legacy)
            << ',' << cell(row.gap_avg)
            << ',' << cell(row.length_avg)
            << ',' << cell(row.precision_avg)
            << ',' << cell(row.tvl_usd)
            << ',' << format_double(row.volume_24h_usd)
            << ',' << cell(row.turnover);
        for (const GridCell& g : row.grid) out << ',' << cell(g.slippage_bp);
        out << '\n';
    }
}

/// JSON-lines mirror of the CSV columns; absent values become null and grid
/// cells carry their reason codes.
inline void write_metrics_jsonl(std::ostream& out, const std::vector<MetricsRow>& rows,
                                const MetricsOptions& options) {
    for (const MetricsRow& row : rows) {
        nlohmann::ordered_json j;
        j["interval_start"] = row.interval_start;
        for (std::size_t i = 0; i < options.conc_pcts.size() && i < row.conc.size(); ++i) {
            const std::string key = conc_column_name(options.conc_pcts[i]);
            if (row.conc[i]) j[key] = *row.conc[i];
            else j[key] = nullptr;
        }
        j["intensity_value"] = row.intensity_value;
        j["intensity_freq"] = row.intensity_freq;
        j["intensity_legacy"] = row.intensity_legacy;
        auto opt = [&](const char* key, const std::optional<double>& v) {
            if (v) j[key] = *v;
            else j[key] = nullptr;
        };
        opt("gap_avg", row.gap_avg);
        opt("length_avg", row.length_avg);
        opt("precision_avg", row.precision_avg);
        opt("tvl_usd", row.tvl_usd);
        j["volume_24h_usd"] = row.volume_24h_usd;
        opt("turnover", row.turnover);
        for (const GridCell& g : row.grid) {
            const std::string key = grid_column_name(g);
            if (g.slippage_bp) j[key] = *g.slippage_bp;
            else j[key] = {{"absent", g.reason}};
        }
        out << j.dump() << '\n';
    }
}

}  // namespace ammsim
