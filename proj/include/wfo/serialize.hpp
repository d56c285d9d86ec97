#pragma once

#include "wfo/analysis.hpp"
#include "wfo/bootstrap.hpp"
#include "wfo/execution.hpp"
#include "wfo/market_data.hpp"
#include "wfo/metrics.hpp"
#include "wfo/walkforward.hpp"
#include "wfo/window_optimizer.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace wfo {

inline constexpr const char* kEngineVersion = "1.0.0";

/// Provenance block stamped on every output file.
struct RunMetadata {
    std::string command;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string prng;
};

/// Shortest round-trip decimal; empty for NaN or an undefined metric.
[[nodiscard]] std::string format_number(double value);
[[nodiscard]] std::string format_number(const Metric& value);

[[nodiscard]] nlohmann::ordered_json to_json(const RunMetadata& meta);
[[nodiscard]] nlohmann::ordered_json metric_json(const Metric& value);

/// `# key: value` lines for the head of a CSV file.
void write_metadata_csv(std::ostream& out, const RunMetadata& meta);

void write_equity_csv(std::ostream& out, const EquityCurve& curve);
/// Reads `timestamp,cum_log_return`; `#` lines are skipped.
[[nodiscard]] EquityCurve read_equity_csv(std::istream& in);

void write_returns_csv(std::ostream& out, const ReturnSeries& returns);
void write_positions_csv(std::ostream& out, const PositionSeries& positions);

/// Performance table columns, in display order.
[[nodiscard]] const std::vector<std::string>& report_columns();
void write_report_table_csv(std::ostream& out,
                            const std::vector<std::pair<std::string, PerformanceReport>>& rows);
[[nodiscard]] nlohmann::ordered_json to_json(const PerformanceReport& report);

void write_stats_header_csv(std::ostream& out);
void write_stats_row_csv(std::ostream& out, const std::string& asset, int frequency_minutes,
                         const DescriptiveStats& stats);
[[nodiscard]] nlohmann::ordered_json to_json(const DescriptiveStats& stats);

/// Matrix layout: first row is the train axis, first column the test axis.
void write_grid_matrix_csv(std::ostream& out, const SharpeGrid& grid);
/// `train_days,test_days,sharpe,smoothed_sharpe`, one row per cell.
void write_grid_long_csv(std::ostream& out, const SharpeGrid& raw, const SharpeGrid& smoothed);
void write_grid_svg(std::ostream& out, const SharpeGrid& grid, const std::string& title,
                    const RunMetadata* meta = nullptr);

[[nodiscard]] nlohmann::ordered_json to_json(const WindowPair& window);
[[nodiscard]] nlohmann::ordered_json to_json(const WfRunResult& result);

[[nodiscard]] nlohmann::ordered_json to_json(const BootstrapResult& result);
void write_iterations_csv(std::ostream& out, const BootstrapResult& result);

void write_cost_sweep_csv(std::ostream& out, const CostSweep& sweep);
[[nodiscard]] nlohmann::ordered_json to_json(const CostSweep& sweep);

}  // namespace wfo
