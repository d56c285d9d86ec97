#pragma once

#include "wfo/execution.hpp"
#include "wfo/indicators.hpp"
#include "wfo/metrics.hpp"
#include "wfo/walkforward.hpp"

#include <span>
#include <vector>

namespace wfo {

/// Sharpe ratios of walk-forward runs over a train x test grid.
/// Rows follow `test_axis`, columns follow `train_axis`.
struct SharpeGrid {
    std::vector<int> train_axis;
    std::vector<int> test_axis;
    std::vector<Metric> values;  // row-major, |test_axis| x |train_axis|

    [[nodiscard]] std::size_t rows() const noexcept { return test_axis.size(); }
    [[nodiscard]] std::size_t cols() const noexcept { return train_axis.size(); }
    [[nodiscard]] Metric& at(std::size_t row, std::size_t col) { return values[row * cols() + col]; }
    [[nodiscard]] const Metric& at(std::size_t row, std::size_t col) const {
        return values[row * cols() + col];
    }
    [[nodiscard]] WindowPair window(std::size_t row, std::size_t col) const {
        return {train_axis[col], test_axis[row]};
    }
    [[nodiscard]] std::vector<WindowPair> windows() const;
};

/// Robust Sharpe ratios: half the cell, half the mean of its defined Moore neighbours.
struct SmoothedGrid {
    SharpeGrid grid;
    std::vector<int> neighbor_counts;  // defined neighbours used per cell
};

struct GridOptions {
    WalkForwardOptions walkforward;
    /// Worker cap across grid cells.
    unsigned threads = 1;
};

[[nodiscard]] SharpeGrid make_grid(std::vector<int> train_axis, std::vector<int> test_axis);
[[nodiscard]] SharpeGrid default_grid();

/// Fills every cell with the total Sharpe of the matching walk-forward run.
/// Cells whose run fails (too short, no valid segments) stay undefined.
[[nodiscard]] SharpeGrid build_grid(const PriceSeries& series, std::vector<int> train_axis,
                                    std::vector<int> test_axis, std::span<const EmaPair> universe,
                                    const CostModel& cost, double n_year,
                                    const GridOptions& options = {});

[[nodiscard]] SmoothedGrid smooth(const SharpeGrid& grid);

/// The k cells with the largest smoothed value; ties prefer longer training,
/// then longer testing windows.
[[nodiscard]] std::vector<WindowPair> select_top_k(const SharpeGrid& smoothed, std::size_t k = 2);

}  // namespace wfo
