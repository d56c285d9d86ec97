#pragma once

#include "wfo/market_data.hpp"
#include "wfo/walkforward.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wfo::cli {

/// Everything a command needs. Loaded from an INI file; any value can be
/// replaced by a command-line flag afterwards.
struct RunConfig {
    std::filesystem::path base_dir;  // relative data paths resolve against this

    std::vector<std::string> assets;
    std::string train_asset;
    std::map<std::string, std::filesystem::path> data_paths;

    PeriodSplit split;
    int frequency = 60;
    std::vector<int> train_axis{std::begin(kDefaultWindowDays), std::end(kDefaultWindowDays)};
    std::vector<int> test_axis{std::begin(kDefaultWindowDays), std::end(kDefaultWindowDays)};
    std::vector<int> ema_periods{5, 7, 10, 15, 20, 30, 40, 50, 100, 150, 200};
    double cost = 0.001;
    Stride stride = Stride::Segment;
    bool final_liquidation = false;
    std::optional<double> n_year;

    std::size_t top_k = 2;

    std::size_t bootstrap_iterations = 1000;
    std::uint64_t seed = 42;
    double alpha = 0.05;

    std::vector<double> cost_levels{0.0005, 0.0007, 0.0010, 0.0020, 0.0030, 0.0040, 0.0050};

    std::filesystem::path output_dir = "out";
    unsigned threads = 1;

    [[nodiscard]] double annualization() const;
    [[nodiscard]] std::filesystem::path data_path(const std::string& asset) const;
    /// Stable text form of every result-affecting setting (threads and output dir excluded).
    [[nodiscard]] std::string canonical() const;
    /// FNV-1a 64 of canonical(), hex.
    [[nodiscard]] std::string hash() const;
};

/// Parses "2019-09-01", "2019-09-01T12:30" (UTC) or integer epoch milliseconds.
[[nodiscard]] Timestamp parse_time(const std::string& text);

[[nodiscard]] RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Checks sets are non-empty, values in range, and every data file exists.
void validate(const RunConfig& config);

}  // namespace wfo::cli
