#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wfo {

using Timestamp = std::int64_t;  // epoch milliseconds, UTC

inline constexpr Timestamp kMillisPerMinute = 60'000;
inline constexpr double kMinutesPerYear = 525'600.0;

/// Frequencies (in minutes) the engine works with.
inline constexpr int kSupportedFrequencies[] = {1, 5, 10, 15, 30, 60};

[[nodiscard]] bool is_supported_frequency(int minutes) noexcept;

/// Number of returns per year for a 24/7 market sampled every `frequency_minutes`.
[[nodiscard]] double annualization_factor(int frequency_minutes);

/// Bars per calendar day of continuous trading.
[[nodiscard]] std::size_t bars_per_day(int frequency_minutes);

struct PriceBar {
    Timestamp timestamp = 0;
    double price = 0.0;
};

/// Missing bars between two consecutive observed bars.
struct Gap {
    Timestamp gap_start = 0;  // timestamp of the last bar before the hole
    Timestamp gap_end = 0;    // timestamp of the first bar after the hole
    std::int64_t missing_bars = 0;
};

struct PriceSeries {
    std::string asset_id;
    int frequency_minutes = 1;
    std::vector<PriceBar> bars;
    std::vector<Gap> gaps;

    [[nodiscard]] std::size_t size() const noexcept { return bars.size(); }
    [[nodiscard]] bool empty() const noexcept { return bars.empty(); }
    [[nodiscard]] Timestamp step_millis() const noexcept {
        return frequency_minutes * kMillisPerMinute;
    }
    [[nodiscard]] std::vector<double> prices() const;
    [[nodiscard]] std::vector<Timestamp> timestamps() const;
};

/// Log returns. `timestamps[i]` is the end of the i-th return interval.
struct ReturnSeries {
    int frequency_minutes = 1;
    std::vector<Timestamp> timestamps;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] bool empty() const noexcept { return values.empty(); }
};

struct PeriodSplit {
    Timestamp train_start = 0;
    Timestamp train_end = 0;
    Timestamp unseen_start = 0;
    Timestamp unseen_end = 0;
};

/// Raw (non-annualized) moments of a return sample. `skew`, `kurtosis` and
/// `jb_p_value` are NaN and `degenerate` is set when the sample has zero spread.
struct DescriptiveStats {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
    double range = 0.0;
    double skew = 0.0;
    double kurtosis = 0.0;  // excess
    double jb_statistic = 0.0;
    double jb_p_value = 1.0;
    bool degenerate = false;
};

/// Reads `timestamp,price` or `timestamp,open,high,low,close,volume` CSV.
/// The bar spacing is inferred from the data and must be a supported frequency;
/// larger spacings are recorded as gaps.
[[nodiscard]] PriceSeries load_prices(const std::filesystem::path& path, std::string asset_id);
[[nodiscard]] PriceSeries parse_prices(std::istream& in, std::string asset_id);

/// Builds a series from bars already in memory, validating the same invariants.
[[nodiscard]] PriceSeries make_series(std::string asset_id, int frequency_minutes,
                                      std::vector<PriceBar> bars);

/// Last-close resampling onto epoch-aligned windows of `target_minutes`.
/// Output bars are stamped with their window start.
[[nodiscard]] PriceSeries resample(const PriceSeries& series, int target_minutes);

[[nodiscard]] ReturnSeries log_returns(const PriceSeries& series);

[[nodiscard]] DescriptiveStats descriptive_stats(std::span<const double> sample);
[[nodiscard]] DescriptiveStats descriptive_stats(const ReturnSeries& returns);

/// Upper tail of the chi-square distribution with two degrees of freedom.
[[nodiscard]] double chi_square2_survival(double x) noexcept;

void validate(const PeriodSplit& split);

/// Returns the bars in [train_start, train_end) and [unseen_start, unseen_end).
[[nodiscard]] std::pair<PriceSeries, PriceSeries> split_periods(const PriceSeries& series,
                                                                const PeriodSplit& split);

/// Bars with timestamp in [from, to).
[[nodiscard]] PriceSeries slice_time(const PriceSeries& series, Timestamp from, Timestamp to);

void write_gaps_csv(std::ostream& out, std::span<const Gap> gaps);

}  // namespace wfo
