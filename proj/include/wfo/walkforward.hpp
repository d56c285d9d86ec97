#pragma once

#include "wfo/execution.hpp"
#include "wfo/indicators.hpp"
#include "wfo/market_data.hpp"
#include "wfo/metrics.hpp"

#include <compare>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wfo {

/// Walk-forward geometry: training and testing lengths in calendar days.
struct WindowPair {
    int train_days = 0;
    int test_days = 0;

    friend auto operator<=>(const WindowPair&, const WindowPair&) = default;
};

inline constexpr int kDefaultWindowDays[] = {1, 2, 3, 5, 7, 10, 14, 21, 28};

[[nodiscard]] std::string to_string(const WindowPair& window);
/// Parses "7/28" (train/test).
[[nodiscard]] WindowPair parse_window(std::string_view text);
void validate(const WindowPair& window);

/// Half-open bar index range.
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    [[nodiscard]] std::size_t size() const noexcept { return end - begin; }
    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct WfSegment {
    IndexRange train;
    IndexRange test;  // test.begin == train.end

    friend bool operator==(const WfSegment&, const WfSegment&) = default;
};

enum class Stride {
    Segment,  // next segment starts after the previous test slice (default)
    Test,     // rolling: segments advance by the test length and overlap
};

struct WalkForwardOptions {
    Stride stride = Stride::Segment;
    ExecutionOptions execution;
    /// Worker cap for the EMA grid within one training slice.
    unsigned threads = 1;
};

/// Cuts `n_bars` into whole train+test segments from index 0; a trailing partial
/// segment is dropped.
[[nodiscard]] std::vector<WfSegment> segment(std::size_t n_bars, int frequency_minutes,
                                             const WindowPair& window,
                                             Stride stride = Stride::Segment);
[[nodiscard]] std::vector<WfSegment> segment(const PriceSeries& series, const WindowPair& window,
                                             Stride stride = Stride::Segment);

/// Net returns, asset returns and positions of one evaluated slice. Positions
/// are those of bars [begin, end-1); each applies to the following return.
struct SliceResult {
    std::vector<double> net_returns;
    std::vector<double> asset_returns;
    std::vector<Direction> directions;
    std::vector<Timestamp> timestamps;  // end of each return interval
};

/// Runs `pair` with EMAs seeded at bar `ema_start` and evaluates bars in `eval`.
/// Entry cost is charged at the first return of `eval`.
[[nodiscard]] SliceResult evaluate_slice(std::span<const double> prices,
                                         std::span<const Timestamp> timestamps,
                                         std::size_t ema_start, IndexRange eval,
                                         const EmaPair& pair, const CostModel& cost,
                                         ExecutionOptions options = {});

struct SegmentOptimum {
    EmaPair pair;
    double train_sharpe = 0.0;
};

/// Best EMA pair on the segment's training slice. Ties go to the smaller fast
/// period, then the smaller slow period. Throws SegmentError when every pair
/// has an undefined Sharpe.
[[nodiscard]] SegmentOptimum optimize_segment(const PriceSeries& series, const WfSegment& segment,
                                              std::span<const EmaPair> universe,
                                              const CostModel& cost, double n_year,
                                              const WalkForwardOptions& options = {});

struct SegmentRecord {
    std::size_t index = 0;
    WfSegment segment;
    std::optional<EmaPair> pair;  // empty when the segment was skipped
    Metric train_sharpe;
    Metric test_sharpe;
    std::string error;
};

struct WfRunResult {
    WindowPair window;
    std::vector<SegmentRecord> per_segment;
    ReturnSeries wf_returns;     // concatenated net test returns
    ReturnSeries asset_returns;  // asset returns matched to wf_returns
    PositionSeries positions;    // position held over each wf return
    std::vector<std::size_t> window_starts;  // index of each test slice's first return
    Metric total_sharpe;
    double n_year = 0.0;

    [[nodiscard]] std::size_t valid_segments() const;
};

/// Picks the EMA pair for segment `index`.
using PairChooser = std::function<EmaPair(std::size_t index, const WfSegment& segment)>;

/// Walk-forward with per-segment argmax selection on the training slice.
[[nodiscard]] WfRunResult run_walkforward(const PriceSeries& series, const WindowPair& window,
                                          std::span<const EmaPair> universe, const CostModel& cost,
                                          double n_year, const WalkForwardOptions& options = {});

/// Walk-forward where the pair for each segment comes from `choose` instead of
/// training. Training Sharpes are not computed.
[[nodiscard]] WfRunResult run_walkforward_with(const PriceSeries& series, const WindowPair& window,
                                               const PairChooser& choose, const CostModel& cost,
                                               double n_year,
                                               const WalkForwardOptions& options = {});

}  // namespace wfo
