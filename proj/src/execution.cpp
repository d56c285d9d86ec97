#include "wfo/execution.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace wfo {

void validate(const CostModel& cost) {
    if (!(cost.cost_per_transaction >= 0.0 && cost.cost_per_transaction < 1.0))
        throw std::invalid_argument("cost per transaction must lie in [0, 1), got " +
                                    std::to_string(cost.cost_per_transaction));
}

namespace {

void check_windows(std::span<const std::size_t> starts, std::size_t n) {
    if (starts.empty()) return;
    if (starts.front() != 0) throw std::invalid_argument("first evaluation window must start at 0");
    for (std::size_t i = 1; i < starts.size(); ++i)
        if (starts[i] <= starts[i - 1])
            throw std::invalid_argument("evaluation window starts must be strictly increasing");
    if (starts.back() >= n && n > 0)
        throw std::invalid_argument("evaluation window start beyond the position series");
}

}  // namespace

std::vector<int> transaction_legs(std::span<const Direction> directions, ExecutionOptions options,
                                  std::span<const std::size_t> window_starts) {
    std::vector<int> legs(directions.size(), 0);
    if (directions.empty()) return legs;
    check_windows(window_starts, directions.size());
    const std::size_t single[] = {0};
    if (window_starts.empty()) window_starts = single;
    for (std::size_t w = 0; w < window_starts.size(); ++w) {
        const std::size_t begin = window_starts[w];
        const std::size_t end = w + 1 < window_starts.size() ? window_starts[w + 1] : directions.size();
        legs[begin] = 1;
        for (std::size_t t = begin + 1; t < end; ++t)
            if (directions[t] != directions[t - 1]) legs[t] = 2;
        if (options.final_liquidation) legs[end - 1] += 1;
    }
    return legs;
}

std::vector<double> net_returns(std::span<const double> asset_returns,
                                std::span<const Direction> directions, const CostModel& cost,
                                ExecutionOptions options,
                                std::span<const std::size_t> window_starts) {
    validate(cost);
    if (asset_returns.size() != directions.size())
        throw std::invalid_argument("positions (" + std::to_string(directions.size()) +
                                    ") and returns (" + std::to_string(asset_returns.size()) +
                                    ") are misaligned");
    const double leg = cost.log_cost();
    const auto legs = transaction_legs(directions, options, window_starts);
    std::vector<double> out(asset_returns.size());
    for (std::size_t t = 0; t < out.size(); ++t) {
        out[t] = sign(directions[t]) * asset_returns[t];
        if (legs[t] != 0) out[t] += legs[t] * leg;
    }
    return out;
}

ReturnSeries strategy_returns(const ReturnSeries& asset_returns, const PositionSeries& positions,
                              const CostModel& cost, ExecutionOptions options) {
    ReturnSeries out;
    out.frequency_minutes = asset_returns.frequency_minutes;
    out.timestamps = asset_returns.timestamps;
    out.values = net_returns(asset_returns.values, positions.directions, cost, options);
    return out;
}

EquityCurve equity_curve(const ReturnSeries& returns) {
    EquityCurve curve;
    curve.timestamps.reserve(returns.size() + 1);
    curve.values.reserve(returns.size() + 1);
    const Timestamp origin =
        returns.empty() ? 0
                        : returns.timestamps.front() - returns.frequency_minutes * kMillisPerMinute;
    curve.timestamps.push_back(origin);
    curve.values.push_back(0.0);
    double cum = 0.0;
    for (std::size_t i = 0; i < returns.size(); ++i) {
        cum += returns.values[i];
        curve.timestamps.push_back(returns.timestamps[i]);
        curve.values.push_back(cum);
    }
    return curve;
}

long count_transactions(std::span<const Direction> directions, ExecutionOptions options,
                        std::span<const std::size_t> window_starts) {
    const auto legs = transaction_legs(directions, options, window_starts);
    return std::accumulate(legs.begin(), legs.end(), 0L);
}

long count_transactions(const PositionSeries& positions, ExecutionOptions options) {
    return count_transactions(positions.directions, options);
}

ReturnSeries buy_and_hold_returns(const ReturnSeries& asset_returns, const CostModel& cost,
                                  ExecutionOptions options) {
    PositionSeries longs;
    longs.timestamps = asset_returns.timestamps;
    longs.directions.assign(asset_returns.size(), Direction::Long);
    return strategy_returns(asset_returns, longs, cost, options);
}

}  // namespace wfo
