// ammsim command-line front door: ingest -> engine -> metrics -> export,
// plus one-shot quote and scenario runs. Exit codes: 0 ok, 2 validation or
// parse failure, 3 domain failure (e.g. liquidity exhausted), 4 I/O failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ammsim/metrics.hpp"
#include "ammsim/metrics_io.hpp"
#include "ammsim/parse.hpp"
#include "ammsim/pool.hpp"
#include "ammsim/replay.hpp"
#include "ammsim/scenario.hpp"
#include "ammsim/snapshot.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitDomain = 3;
constexpr int kExitIo = 4;

using namespace ammsim;

nlohmann::ordered_json swap_result_to_json(const SwapResult& res, const PoolConfig& cfg) {
    nlohmann::ordered_json j;
    j["delta_x"] = to_decimal_string(res.delta_x);
    j["delta_y"] = to_decimal_string(res.delta_y);
    j["average_price"] = to_decimal_string(res.average_price.raw);
    j["average_price_adjusted"] = to_double(res.average_price.adjusted(cfg));
    j["slippage_bp"] = to_double(res.slippage_bp);
    j["ticks_crossed"] = res.ticks_crossed;
    j["fee_paid"] = to_decimal_string(res.fee_paid);
    return j;
}

int cmd_quote(const std::string& snapshot_path, double size_usd, const std::string& side_name,
              double price_y_usd, double price_x_usd) {
    Pool pool = load_snapshot(snapshot_path);
    Side side;
    if (side_name == "sell_x") side = Side::sell_x;
    else if (side_name == "buy_x") side = Side::buy_x;
    else throw ValidationError("side must be sell_x or buy_x");
    TokenPricesUsd prices;
    prices.y_usd = price_y_usd;
    prices.x_usd = price_x_usd > 0
                       ? price_x_usd
                       : to_double(pool.market_price().adjusted(pool.config())) * price_y_usd;
    SwapResult res = pool.quote_usd(size_usd, side, prices);
    std::cout << swap_result_to_json(res, pool.config()).dump() << '\n';
    return 0;
}

struct MetricsArgs {
    std::vector<std::string> event_paths;
    std::string prices_path;
    std::string pool_config_path;
    std::string initial_price;
    std::string genesis_snapshot;
    std::int64_t interval = 300;
    std::vector<double> pcts = {1, 2, 10};
    std::vector<double> sizes = {100, 500, 1000, 5000, 10000, 50000, 100000};
    std::int64_t reposition_window = 300;
    double outlier_cutoff = 0.20;
    bool no_jit_filter = false;
    bool weighted = false;
    std::string format = "csv";
    std::string out_path;
    std::string snapshots_dir;
};

EventFormat detect_format(const std::string& path) {
    return path.size() >= 6 && path.substr(path.size() - 6) == ".jsonl" ? EventFormat::jsonl
                                                                        : EventFormat::csv;
}

int cmd_metrics(const MetricsArgs& args) {
    const PoolConfig cfg = parse_pool_config_file(args.pool_config_path);

    std::vector<PoolEvent> events;
    int diagnostics = 0;
    for (const std::string& path : args.event_paths) {
        ParsedEvents parsed = parse_events_file(path, detect_format(path), cfg);
        for (const RowDiagnostic& d : parsed.diagnostics) {
            std::cerr << path << ":" << d.line << ": " << d.message << '\n';
            ++diagnostics;
        }
        events.insert(events.end(), parsed.events.begin(), parsed.events.end());
    }
    sort_events(events);
    for (std::size_t i = 1; i < events.size(); ++i) {
        const PoolEvent& a = events[i - 1];
        const PoolEvent& b = events[i];
        if (std::tie(a.block, a.log_index) >= std::tie(b.block, b.log_index))
            throw ValidationError("merged event files are not strictly ordered by "
                                  "(block, log_index); offending block " +
                                  std::to_string(b.block) + " log " +
                                  std::to_string(b.log_index));
    }

    const PriceSeries series = parse_price_series_file(args.prices_path);

    std::optional<Pool> genesis;
    if (!args.genesis_snapshot.empty()) {
        genesis.emplace(load_snapshot(args.genesis_snapshot));
    } else if (!args.initial_price.empty()) {
        genesis.emplace(cfg, RawPrice::from_adjusted(Real(args.initial_price), cfg));
    } else {
        throw ValidationError("metrics needs --initial-price or --genesis-snapshot");
    }

    ReplayResult replayed = replay(events, *genesis);

    MetricsOptions options;
    options.conc_pcts.clear();
    for (double pct : args.pcts) options.conc_pcts.push_back(pct / 100.0);
    options.grid_sizes_usd = args.sizes;
    options.reposition_window_seconds = args.reposition_window;
    options.outlier_cutoff = args.outlier_cutoff;
    options.jit_filter = !args.no_jit_filter;
    options.weighted_averages = args.weighted;

    PreparedEvents prepared = prepare_events(replayed, series, cfg, options);
    std::vector<IntervalBucket> buckets = bucketize(replayed, args.interval);
    std::vector<MetricsRow> rows = compute_rows(buckets, prepared, series, cfg, options);

    std::ofstream out(args.out_path);
    if (!out) throw IoError("cannot write output file: " + args.out_path);
    if (args.format == "csv") write_metrics_csv(out, rows, options);
    else if (args.format == "jsonl") write_metrics_jsonl(out, rows, options);
    else throw ValidationError("format must be csv or jsonl");

    if (!args.snapshots_dir.empty()) {
        std::filesystem::create_directories(args.snapshots_dir);
        nlohmann::ordered_json manifest;
        manifest["interval_seconds"] = args.interval;
        auto list = nlohmann::ordered_json::array();
        for (const IntervalBucket& bucket : buckets) {
            const std::string name = "snapshot_" + std::to_string(bucket.start_ts) + ".json";
            write_snapshot(*bucket.end_snapshot, args.snapshots_dir + "/" + name);
            list.push_back({{"interval_start", bucket.start_ts},
                            {"interval_end", bucket.end_ts},
                            {"events", bucket.events.size()},
                            {"snapshot", name}});
        }
        manifest["buckets"] = std::move(list);
        std::ofstream mout(args.snapshots_dir + "/manifest.json");
        if (!mout) throw IoError("cannot write bucket manifest");
        mout << manifest.dump(2) << '\n';
    }

    nlohmann::ordered_json summary;
    summary["rows"] = rows.size();
    summary["events"] = events.size();
    summary["row_diagnostics"] = diagnostics;
    summary["reconciliation_warnings"] = replayed.reconciliation_warnings;
    summary["dropped_jit"] = prepared.dropped_jit;
    summary["dropped_outliers"] = prepared.dropped_outliers;
    summary["dropped_missing_price"] = prepared.dropped_missing_price;
    summary["skipped_missing_owner"] = prepared.skipped_missing_owner;
    std::cout << summary.dump() << '\n';
    return 0;
}

int cmd_scenario(const std::string& spec_path, const std::string& out_path,
                 const std::string& format) {
    std::ifstream in(spec_path);
    if (!in) throw IoError("cannot open scenario spec: " + spec_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scenario spec is not valid JSON: ") + e.what());
    }
    const ScenarioSpec spec = scenario_from_json(j);
    const std::vector<LpOutcome> outcomes = run_scenario(spec);

    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write output file: " + out_path);
    if (format == "json") out << outcomes_to_json(outcomes).dump(2) << '\n';
    else if (format == "csv") out << outcomes_to_csv(outcomes);
    else throw ValidationError("format must be json or csv");
    std::cout << outcomes_to_json(outcomes).dump() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Concentrated-liquidity AMM simulator and market-quality metrics pipeline"};
    app.require_subcommand(1);
    app.set_config("--config");

    auto* quote = app.add_subcommand("quote", "Quote a hypothetical trade against a snapshot");
    std::string q_snapshot, q_side = "sell_x";
    double q_size = 0, q_price_y = 0, q_price_x = 0;
    quote->add_option("--snapshot", q_snapshot, "Pool snapshot JSON")->required();
    quote->add_option("--size", q_size, "Trade size in USD")->required();
    quote->add_option("--side", q_side, "sell_x or buy_x");
    quote->add_option("--price-y-usd", q_price_y, "USD price of token Y (human units)")->required();
    quote->add_option("--price-x-usd", q_price_x,
                      "USD price of token X; defaults to the pool cross rate");

    auto* metrics = app.add_subcommand("metrics", "Replay events and export per-interval metrics");
    MetricsArgs m;
    metrics->add_option("--events", m.event_paths, "Event file (.csv or .jsonl); repeatable")
        ->required();
    metrics->add_option("--prices", m.prices_path, "Price series CSV")->required();
    metrics->add_option("--pool-config", m.pool_config_path, "Pool config key=value file")
        ->required();
    metrics->add_option("--initial-price", m.initial_price,
                        "Initial market price, human units (price of X in Y)");
    metrics->add_option("--genesis-snapshot", m.genesis_snapshot, "Snapshot JSON to start from");
    metrics->add_option("--interval", m.interval, "Interval seconds (default 300)");
    metrics->add_option("--pct", m.pcts, "Concentration bands in percent (default 1 2 10)")
        ->delimiter(',');
    metrics->add_option("--sizes", m.sizes, "Slippage grid sizes in USD")->delimiter(',');
    metrics->add_option("--reposition-window", m.reposition_window,
                        "Repositioning window seconds (default 300)");
    metrics->add_option("--outlier-cutoff", m.outlier_cutoff,
                        "Drop mints/burns with range mid further than this (default 0.20)");
    metrics->add_flag("--no-jit-filter", m.no_jit_filter, "Keep just-in-time liquidity");
    metrics->add_flag("--weighted", m.weighted, "Dollar-weighted gap/length/precision averages");
    metrics->add_option("--format", m.format, "csv or jsonl (default csv)");
    metrics->add_option("--out", m.out_path, "Output file")->required();
    metrics->add_option("--snapshots-out", m.snapshots_dir,
                        "Directory for interval-end snapshots and bucket manifest");

    auto* scenario = app.add_subcommand("scenario", "Run an adverse-selection shock scenario");
    std::string s_spec, s_out, s_format = "json";
    scenario->add_option("--spec", s_spec, "Scenario spec JSON")->required();
    scenario->add_option("--out", s_out, "Output file")->required();
    scenario->add_option("--format", s_format, "json or csv (default json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (quote->parsed()) return cmd_quote(q_snapshot, q_size, q_side, q_price_y, q_price_x);
        if (metrics->parsed()) return cmd_metrics(m);
        if (scenario->parsed()) return cmd_scenario(s_spec, s_out, s_format);
    } catch (const LiquidityExhaustedError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NotFoundError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
