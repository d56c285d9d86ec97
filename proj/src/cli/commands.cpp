#include "wfo/cli/commands.hpp"

#include "wfo/analysis.hpp"
#include "wfo/bootstrap.hpp"
#include "wfo/errors.hpp"
#include "wfo/indicators.hpp"
#include "wfo/rng.hpp"
#include "wfo/serialize.hpp"
#include "wfo/window_optimizer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace wfo::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

RunMetadata metadata(const RunConfig& config, const std::string& command) {
    return {command, config.hash(), config.seed, StreamRng::kName};
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    body(out);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_csv(const fs::path& path, const RunMetadata& meta,
               const std::function<void(std::ostream&)>& body) {
    write_file(path, [&](std::ostream& out) {
        write_metadata_csv(out, meta);
        body(out);
    });
}

void write_json(const fs::path& path, const RunMetadata& meta, ordered_json payload) {
    ordered_json doc;
    doc["metadata"] = to_json(meta);
    for (auto& [k, v] : payload.items()) doc[k] = v;
    write_file(path, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
}

std::string file_tag(const WindowPair& w) {
    return std::to_string(w.train_days) + "-" + std::to_string(w.test_days);
}

PriceSeries load_raw(const RunConfig& config, const std::string& asset) {
    return load_prices(config.data_path(asset), asset);
}

PriceSeries at_frequency(const PriceSeries& raw, int frequency) {
    if (frequency % raw.frequency_minutes != 0)
        throw ConfigError(raw.asset_id + " data is sampled every " +
                          std::to_string(raw.frequency_minutes) + " min; cannot resample to " +
                          std::to_string(frequency) + " min");
    return resample(raw, frequency);
}

PriceSeries training_series(const RunConfig& config, const std::string& asset) {
    const auto series = at_frequency(load_raw(config, asset), config.frequency);
    return split_periods(series, config.split).first;
}

PriceSeries unseen_series(const RunConfig& config, const std::string& asset) {
    const auto series = at_frequency(load_raw(config, asset), config.frequency);
    return split_periods(series, config.split).second;
}

WalkForwardOptions wf_options(const RunConfig& config) {
    WalkForwardOptions opts;
    opts.stride = config.stride;
    opts.execution.final_liquidation = config.final_liquidation;
    opts.threads = config.threads;
    return opts;
}

double quantile(std::vector<double> sorted, double q) {
    std::sort(sorted.begin(), sorted.end());
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

void write_report(std::ostream& out, const std::vector<std::pair<std::string, PerformanceReport>>& rows) {
    write_report_table_csv(out, rows);
}

}  // namespace

void cmd_stats(const RunConfig& config, std::ostream& log, std::optional<int> only_frequency) {
    validate(config);
    const auto meta = metadata(config, "stats");
    std::ostringstream table;
    write_stats_header_csv(table);
    for (const auto& asset : config.assets) {
        const auto raw = load_raw(config, asset);
        write_csv(config.output_dir / ("gaps_" + asset + ".csv"), meta,
                  [&](std::ostream& out) { write_gaps_csv(out, raw.gaps); });
        if (!raw.gaps.empty())
            log << "warning: " << asset << " has " << raw.gaps.size() << " gaps in its price data\n";
        const auto train = slice_time(raw, config.split.train_start, config.split.train_end);
        if (train.size() < 2) throw ValidationError(asset + " has no training-period data");
        std::vector<int> frequencies;
        if (only_frequency) {
            frequencies.push_back(*only_frequency);
        } else {
            for (int f : kSupportedFrequencies)
                if (f % raw.frequency_minutes == 0) frequencies.push_back(f);
        }
        for (int f : frequencies) {
            const auto returns = log_returns(at_frequency(train, f));
            const auto stats = descriptive_stats(returns);
            if (stats.degenerate)
                log << "warning: " << asset << " " << f
                    << "-min returns have zero spread; skew, kurtosis and JB are undefined\n";
            write_stats_row_csv(table, asset, f, stats);
        }
    }
    write_csv(config.output_dir / "stats_train.csv", meta,
              [&](std::ostream& out) { out << table.str(); });
    log << "wrote " << (config.output_dir / "stats_train.csv").string() << '\n';
}

void cmd_grid(const RunConfig& config, std::ostream& log) {
    validate(config);
    const auto meta = metadata(config, "grid");
    const auto series = training_series(config, config.train_asset);
    const auto universe = make_universe(config.ema_periods);
    GridOptions options;
    options.walkforward = wf_options(config);
    options.walkforward.threads = 1;
    options.threads = config.threads;

    const auto raw = build_grid(series, config.train_axis, config.test_axis, universe,
                                CostModel{config.cost}, config.annualization(), options);
    const auto smoothed = smooth(raw);
    const std::string stem =
        "grid_" + config.train_asset + "_" + std::to_string(config.frequency) + "m";
    const auto dir = config.output_dir;

    write_csv(dir / (stem + "_raw.csv"), meta, [&](std::ostream& o) { write_grid_matrix_csv(o, raw); });
    write_csv(dir / (stem + "_smoothed.csv"), meta,
              [&](std::ostream& o) { write_grid_matrix_csv(o, smoothed.grid); });
    write_csv(dir / (stem + "_long.csv"), meta,
              [&](std::ostream& o) { write_grid_long_csv(o, raw, smoothed.grid); });
    write_file(dir / (stem + "_smoothed.svg"), [&](std::ostream& o) {
        write_grid_svg(o, smoothed.grid,
                       "Robust Sharpe ratio, " + config.train_asset + " " +
                           std::to_string(config.frequency) + "-min",
                       &meta);
    });

    std::vector<double> defined;
    for (const auto& v : raw.values)
        if (v) defined.push_back(*v);
    write_csv(dir / (stem + "_summary.csv"), meta, [&](std::ostream& o) {
        o << "freq_minutes,cells,defined,mean_sharpe,max_sharpe,min_sharpe,std_sharpe,q25_sharpe,"
             "q50_sharpe,q75_sharpe\n";
        o << config.frequency << ',' << raw.values.size() << ',' << defined.size();
        if (defined.size() >= 2) {
            const double mean = std::accumulate(defined.begin(), defined.end(), 0.0) /
                                static_cast<double>(defined.size());
            double ss = 0.0;
            for (double v : defined) ss += (v - mean) * (v - mean);
            const double sd = std::sqrt(ss / static_cast<double>(defined.size() - 1));
            for (double v : {mean, *std::max_element(defined.begin(), defined.end()),
                             *std::min_element(defined.begin(), defined.end()), sd,
                             quantile(defined, 0.25), quantile(defined, 0.5), quantile(defined, 0.75)})
                o << ',' << format_number(v);
        } else {
            o << ",,,,,,,";
        }
        o << '\n';
    });

    ordered_json selection = ordered_json::array();
    std::vector<WindowPair> top;
    try {
        top = select_top_k(smoothed.grid, config.top_k);
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("cannot select window pairs: ") + e.what());
    }
    for (std::size_t i = 0; i < top.size(); ++i) {
        const auto col = static_cast<std::size_t>(
            std::find(raw.train_axis.begin(), raw.train_axis.end(), top[i].train_days) -
            raw.train_axis.begin());
        const auto row = static_cast<std::size_t>(
            std::find(raw.test_axis.begin(), raw.test_axis.end(), top[i].test_days) -
            raw.test_axis.begin());
        auto j = to_json(top[i]);
        j["rank"] = i + 1;
        j["sharpe"] = metric_json(raw.at(row, col));
        j["robust_sharpe"] = metric_json(smoothed.grid.at(row, col));
        j["neighbors"] = smoothed.neighbor_counts[row * raw.cols() + col];
        selection.push_back(std::move(j));
        log << "selected " << to_string(top[i]) << " robust sharpe "
            << format_number(smoothed.grid.at(row, col)) << '\n';
    }
    write_json(dir / ("selection_" + config.train_asset + "_" + std::to_string(config.frequency) +
                      "m.json"),
               meta,
               {{"asset", config.train_asset},
                {"frequency_minutes", config.frequency},
                {"k", config.top_k},
                {"selected", std::move(selection)}});
    log << "grid " << raw.rows() << "x" << raw.cols() << " written to " << dir.string() << '\n';
}

void cmd_unseen(const RunConfig& config, std::span<const WindowPair> pairs, bool override_lock,
                std::ostream& log) {
    validate(config);
    if (pairs.empty()) throw ConfigError("unseen evaluation needs explicit --pairs");
    const auto lock_path = config.output_dir / kUnseenLockFile;
    if (fs::exists(lock_path) && !override_lock)
        throw UnseenLockError("the unseen period was already evaluated (" + lock_path.string() +
                              "); rerun with --override-unseen-lock to evaluate it again");

    const auto meta = metadata(config, "unseen");
    const auto universe = make_universe(config.ema_periods);
    const CostModel cost{config.cost};
    const double n_year = config.annualization();
    const auto options = wf_options(config);

    std::vector<std::pair<std::string, PerformanceReport>> rows;
    ordered_json curves = ordered_json::array();
    ordered_json runs = ordered_json::array();
    for (const auto& asset : config.assets) {
        const auto series = unseen_series(config, asset);
        const auto bh = buy_and_hold_returns(log_returns(series), cost, options.execution);
        const std::string bh_file = "equity_" + asset + "_bh.csv";
        write_csv(config.output_dir / bh_file, meta,
                  [&](std::ostream& o) { write_equity_csv(o, equity_curve(bh)); });
        rows.emplace_back(asset + " Buy-and-Hold", full_report(bh.values, n_year));
        curves.push_back({{"group", "Buy-and-Hold"}, {"asset", asset}, {"file", bh_file}});

        for (const auto& pair : pairs) {
            const auto result = run_walkforward(series, pair, universe, cost, n_year, options);
            const std::string tag = asset + "_wf_" + file_tag(pair);
            write_csv(config.output_dir / ("equity_" + tag + ".csv"), meta,
                      [&](std::ostream& o) { write_equity_csv(o, equity_curve(result.wf_returns)); });
            write_csv(config.output_dir / ("returns_" + tag + ".csv"), meta,
                      [&](std::ostream& o) { write_returns_csv(o, result.wf_returns); });
            write_csv(config.output_dir / ("positions_" + tag + ".csv"), meta,
                      [&](std::ostream& o) { write_positions_csv(o, result.positions); });
            auto j = to_json(result);
            j["asset"] = asset;
            runs.push_back(j);
            rows.emplace_back(asset + " Train " + std::to_string(pair.train_days) + " Test " +
                                  std::to_string(pair.test_days),
                              full_report(result.wf_returns.values, n_year));
            curves.push_back({{"group", "WF " + to_string(pair)},
                              {"asset", asset},
                              {"file", "equity_" + tag + ".csv"}});
        }
    }
    write_csv(config.output_dir / "unseen_report.csv", meta,
              [&](std::ostream& o) { write_report(o, rows); });
    ordered_json report = ordered_json::array();
    for (const auto& [label, r] : rows) {
        auto j = to_json(r);
        j["Description"] = label;
        report.push_back(std::move(j));
    }
    write_json(config.output_dir / "unseen_report.json", meta,
               {{"report", std::move(report)}, {"walkforward", std::move(runs)}});

    ordered_json pair_list = ordered_json::array();
    for (const auto& p : pairs) pair_list.push_back(to_string(p));
    write_json(lock_path, meta, {{"pairs", pair_list}, {"curves", curves}});
    log << "unseen period evaluated for " << config.assets.size() << " assets; lock written to "
        << lock_path.string() << '\n';
}

void cmd_bootstrap(const RunConfig& config, const WindowPair& pair, std::ostream& log) {
    validate(config);
    const auto meta = metadata(config, "bootstrap");
    const auto series = training_series(config, config.train_asset);
    const auto universe = make_universe(config.ema_periods);
    const CostModel cost{config.cost};
    const double n_year = config.annualization();
    auto options = wf_options(config);
    options.threads = 1;

    BootstrapConfig bc;
    bc.iterations = config.bootstrap_iterations;
    bc.seed = config.seed;
    bc.threads = config.threads;

    bc.method = BootstrapMethod::RandomEma;
    const auto random_ema = bootstrap_random_ema(series, pair, universe, cost, n_year, bc, options);

    const auto wf = run_walkforward(series, pair, universe, cost, n_year, options);
    bc.method = BootstrapMethod::ShuffledBlocks;
    const auto shuffled =
        bootstrap_shuffled_blocks(wf.asset_returns, wf.positions, cost, n_year, bc,
                                  options.execution, wf.window_starts);

    for (const auto* result : {&random_ema, &shuffled}) {
        const std::string stem = "bootstrap_" + config.train_asset + "_" + file_tag(pair) + "_" +
                                 to_string(result->method);
        auto j = to_json(*result);
        j["window"] = to_json(pair);
        j["alpha"] = config.alpha;
        j["significant"] = significance(*result, config.alpha);
        write_json(config.output_dir / (stem + ".json"), meta, std::move(j));
        write_csv(config.output_dir / (stem + "_iterations.csv"), meta,
                  [&](std::ostream& o) { write_iterations_csv(o, *result); });
        for (const auto& w : result->warnings) log << "warning: " << w << '\n';
        log << to_string(result->method) << ": original sharpe " << format_number(result->original_sharpe)
            << ", " << result->n_higher << "/" << result->iterations() << " higher ("
            << format_number(result->significance_pct) << "%), "
            << (significance(*result, config.alpha) ? "significant" : "not significant") << " at "
            << format_number(config.alpha) << '\n';
    }
}

void cmd_costsweep(const RunConfig& config, const WindowPair& pair, std::ostream& log) {
    validate(config);
    const auto meta = metadata(config, "costsweep");
    const auto series = training_series(config, config.train_asset);
    const auto universe = make_universe(config.ema_periods);
    const auto options = wf_options(config);
    const auto wf = run_walkforward(series, pair, universe, CostModel{config.cost},
                                    config.annualization(), options);
    const auto sweep = cost_sweep(wf.asset_returns.values, wf.positions.directions,
                                  config.cost_levels, config.annualization(), options.execution,
                                  wf.window_starts);
    const std::string stem = "costsweep_" + config.train_asset + "_" + file_tag(pair);
    write_csv(config.output_dir / (stem + ".csv"), meta,
              [&](std::ostream& o) { write_cost_sweep_csv(o, sweep); });
    auto j = to_json(sweep);
    j["window"] = to_json(pair);
    write_json(config.output_dir / (stem + ".json"), meta, std::move(j));
    log << "cost sweep over " << sweep.levels.size() << " levels, " << sweep.transactions
        << " transactions, breakeven " << format_number(sweep.breakeven_estimate) << '\n';
}

void cmd_portfolio(const RunConfig& config, std::ostream& log) {
    validate(config);
    const auto lock_path = config.output_dir / kUnseenLockFile;
    if (!fs::exists(lock_path))
        throw ConfigError("no unseen-period results in " + config.output_dir.string() +
                          "; run 'unseen' first");
    ordered_json lock;
    {
        std::ifstream in(lock_path);
        try {
            lock = ordered_json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw DataError("corrupt lock file " + lock_path.string() + ": " + e.what());
        }
    }
    std::vector<std::string> group_order;
    std::map<std::string, std::pair<std::vector<std::string>, std::vector<EquityCurve>>> groups;
    for (const auto& entry : lock.at("curves")) {
        const auto group = entry.at("group").get<std::string>();
        const auto file = config.output_dir / entry.at("file").get<std::string>();
        std::ifstream in(file);
        if (!in) throw DataError("missing equity curve " + file.string());
        if (!groups.count(group)) group_order.push_back(group);
        groups[group].first.push_back(entry.at("asset").get<std::string>());
        groups[group].second.push_back(read_equity_csv(in));
    }

    std::vector<std::string> labels;
    std::vector<EquityCurve> portfolios;
    for (const auto& name : group_order) {
        auto& [assets, curves] = groups[name];
        portfolios.push_back(combine_portfolio(equal_weight(assets, align_curves(curves))));
        labels.push_back(name);
    }
    portfolios.push_back(combine_portfolio(equal_weight(labels, align_curves(portfolios))));
    labels.push_back("All Portfolios Combined");
    const auto aligned = align_curves(portfolios);

    const auto meta = metadata(config, "portfolio");
    write_csv(config.output_dir / "portfolio_curves.csv", meta, [&](std::ostream& o) {
        o << "timestamp";
        for (const auto& l : labels) o << ',' << l;
        o << '\n';
        for (std::size_t t = 0; t < aligned.front().size(); ++t) {
            o << aligned.front().timestamps[t];
            for (const auto& c : aligned) o << ',' << format_number(c.values[t]);
            o << '\n';
        }
    });
    std::vector<std::pair<std::string, PerformanceReport>> rows;
    for (std::size_t i = 0; i < portfolios.size(); ++i) {
        const auto returns = curve_returns(portfolios[i], config.frequency);
        rows.emplace_back(labels[i], full_report(returns.values, config.annualization()));
    }
    write_csv(config.output_dir / "portfolio_report.csv", meta,
              [&](std::ostream& o) { write_report(o, rows); });
    log << "combined " << group_order.size() << " portfolios into "
        << (config.output_dir / "portfolio_report.csv").string() << '\n';
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Walk-forward EMA crossover optimizer"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<int> freq;
    std::optional<double> cost;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::string> out_dir;
    std::optional<std::size_t> iterations;
    bool override_lock = false;
    std::vector<std::string> pairs_text;
    std::string pair_text;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "INI run configuration")->required();
        sub->add_option("--freq", freq, "bar frequency in minutes");
        sub->add_option("--cost", cost, "cost per transaction as a fraction (0.001 = 0.1%)");
        sub->add_option("--seed", seed, "bootstrap seed");
        sub->add_option("--threads", threads, "worker thread cap");
        sub->add_option("--out", out_dir, "output directory");
    };
    auto* stats = app.add_subcommand("stats", "descriptive statistics of training-period returns");
    auto* grid = app.add_subcommand("grid", "walk-forward window grid, smoothing and selection");
    auto* unseen = app.add_subcommand("unseen", "one-shot evaluation on the unseen period");
    auto* boot = app.add_subcommand("bootstrap", "random-EMA and shuffled-block bootstraps");
    auto* sweep = app.add_subcommand("costsweep", "transaction cost sensitivity");
    auto* portfolio = app.add_subcommand("portfolio", "equal-weight portfolios of unseen curves");
    for (auto* sub : {stats, grid, unseen, boot, sweep, portfolio}) add_common(sub);
    unseen->add_option("--pairs", pairs_text, "window pairs TRAIN/TEST, e.g. 7/28 14/10")
        ->required()
        ->delimiter(',');
    unseen->add_flag("--override-unseen-lock", override_lock,
                     "evaluate again even though the unseen period was already used");
    boot->add_option("--pair", pair_text, "window pair TRAIN/TEST")->required();
    boot->add_option("--iterations", iterations, "bootstrap iterations");
    sweep->add_option("--pair", pair_text, "window pair TRAIN/TEST")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    }

    try {
        auto config = load_config(config_path);
        if (freq) config.frequency = *freq;
        if (cost) config.cost = *cost;
        if (seed) config.seed = *seed;
        if (threads) config.threads = *threads;
        if (out_dir) config.output_dir = *out_dir;
        if (iterations) config.bootstrap_iterations = *iterations;

        auto parse_pair = [](const std::string& text) {
            try {
                return parse_window(text);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        };

        if (stats->parsed()) {
            cmd_stats(config, out, freq);
        } else if (grid->parsed()) {
            cmd_grid(config, out);
        } else if (unseen->parsed()) {
            std::vector<WindowPair> pairs;
            for (const auto& p : pairs_text) pairs.push_back(parse_pair(p));
            cmd_unseen(config, pairs, override_lock, out);
        } else if (boot->parsed()) {
            cmd_bootstrap(config, parse_pair(pair_text), out);
        } else if (sweep->parsed()) {
            cmd_costsweep(config, parse_pair(pair_text), out);
        } else if (portfolio->parsed()) {
            cmd_portfolio(config, out);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const UnseenLockError& e) {
        err << "refused: " << e.what() << '\n';
        return kExitUnseenLocked;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const SegmentError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDataError;
    }
    return kExitOk;
}

}  // namespace wfo::cli
