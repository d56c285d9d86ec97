#include "wfo/window_optimizer.hpp"

#include "wfo/errors.hpp"
#include "wfo/parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace wfo {

std::vector<WindowPair> SharpeGrid::windows() const {
    std::vector<WindowPair> out;
    for (std::size_t r = 0; r < rows(); ++r)
        for (std::size_t c = 0; c < cols(); ++c) out.push_back(window(r, c));
    return out;
}

SharpeGrid make_grid(std::vector<int> train_axis, std::vector<int> test_axis) {
    if (train_axis.empty() || test_axis.empty()) throw std::invalid_argument("empty window axis");
    for (int d : train_axis)
        if (d <= 0) throw std::invalid_argument("window lengths must be positive");
    for (int d : test_axis)
        if (d <= 0) throw std::invalid_argument("window lengths must be positive");
    SharpeGrid grid;
    grid.values.assign(train_axis.size() * test_axis.size(), std::nullopt);
    grid.train_axis = std::move(train_axis);
    grid.test_axis = std::move(test_axis);
    return grid;
}

SharpeGrid default_grid() {
    std::vector<int> axis(std::begin(kDefaultWindowDays), std::end(kDefaultWindowDays));
    return make_grid(axis, axis);
}

SharpeGrid build_grid(const PriceSeries& series, std::vector<int> train_axis,
                      std::vector<int> test_axis, std::span<const EmaPair> universe,
                      const CostModel& cost, double n_year, const GridOptions& options) {
    auto grid = make_grid(std::move(train_axis), std::move(test_axis));
    parallel_for(grid.values.size(), options.threads, [&](std::size_t i) {
        const auto window = grid.window(i / grid.cols(), i % grid.cols());
        try {
            grid.values[i] =
                run_walkforward(series, window, universe, cost, n_year, options.walkforward)
                    .total_sharpe;
        } catch (const DataError&) {
            grid.values[i] = std::nullopt;
        } catch (const SegmentError&) {
            grid.values[i] = std::nullopt;
        }
    });
    return grid;
}

SmoothedGrid smooth(const SharpeGrid& grid) {
    SmoothedGrid out;
    out.grid = grid;
    out.neighbor_counts.assign(grid.values.size(), 0);
    const auto rows = static_cast<std::ptrdiff_t>(grid.rows());
    const auto cols = static_cast<std::ptrdiff_t>(grid.cols());
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        for (std::ptrdiff_t c = 0; c < cols; ++c) {
            const auto idx = static_cast<std::size_t>(r * cols + c);
            const Metric& self = grid.values[idx];
            if (!self) continue;
            double sum = 0.0;
            int count = 0;
            for (std::ptrdiff_t dr = -1; dr <= 1; ++dr) {
                for (std::ptrdiff_t dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const auto nr = r + dr;
                    const auto nc = c + dc;
                    if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
                    const Metric& v = grid.values[static_cast<std::size_t>(nr * cols + nc)];
                    if (!v) continue;
                    sum += *v;
                    ++count;
                }
            }
            out.neighbor_counts[idx] = count;
            out.grid.values[idx] = count == 0 ? *self : 0.5 * *self + 0.5 * (sum / count);
        }
    }
    return out;
}

std::vector<WindowPair> select_top_k(const SharpeGrid& smoothed, std::size_t k) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    struct Cell {
        double value;
        WindowPair window;
    };
    std::vector<Cell> cells;
    for (std::size_t r = 0; r < smoothed.rows(); ++r)
        for (std::size_t c = 0; c < smoothed.cols(); ++c)
            if (const auto& v = smoothed.at(r, c)) cells.push_back({*v, smoothed.window(r, c)});
    if (cells.size() < k)
        throw std::invalid_argument("grid has " + std::to_string(cells.size()) +
                                    " defined cells, fewer than k = " + std::to_string(k));
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        if (a.value != b.value) return a.value > b.value;
        if (a.window.train_days != b.window.train_days)
            return a.window.train_days > b.window.train_days;
        return a.window.test_days > b.window.test_days;
    });
    std::vector<WindowPair> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(cells[i].window);
    return out;
}

}  // namespace wfo
