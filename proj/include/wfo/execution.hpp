#pragma once

#include "wfo/indicators.hpp"
#include "wfo/market_data.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace wfo {

/// Proportional cost per transaction leg, as a fraction of wealth (0.001 = 0.1%).
struct CostModel {
    double cost_per_transaction = 0.001;

    /// Log-wealth change of one leg, ln(1 - c).
    [[nodiscard]] double log_cost() const { return std::log1p(-cost_per_transaction); }
};

void validate(const CostModel& cost);

struct ExecutionOptions {
    /// Close the open position after the last bar (one extra leg).
    bool final_liquidation = false;
};

struct EquityCurve {
    std::vector<Timestamp> timestamps;
    std::vector<double> values;  // cumulative log return, values[0] == 0

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] double final_value() const { return values.back(); }
};

/// Transaction legs charged at each return interval: 1 for the entry at the start
/// of every evaluation window, 2 for a reversal inside a window, plus 1 on a
/// window's last interval under final liquidation. `window_starts` lists the
/// first index of each independently evaluated window; empty means one window.
[[nodiscard]] std::vector<int> transaction_legs(std::span<const Direction> directions,
                                                ExecutionOptions options = {},
                                                std::span<const std::size_t> window_starts = {});

/// net[t] = dir[t] * r[t] + legs[t] * ln(1 - c). `directions[t]` applies to the
/// return over (t, t+1], so both spans have the same length.
[[nodiscard]] std::vector<double> net_returns(std::span<const double> asset_returns,
                                              std::span<const Direction> directions,
                                              const CostModel& cost, ExecutionOptions options = {},
                                              std::span<const std::size_t> window_starts = {});

[[nodiscard]] ReturnSeries strategy_returns(const ReturnSeries& asset_returns,
                                            const PositionSeries& positions,
                                            const CostModel& cost, ExecutionOptions options = {});

[[nodiscard]] EquityCurve equity_curve(const ReturnSeries& returns);

[[nodiscard]] long count_transactions(std::span<const Direction> directions,
                                      ExecutionOptions options = {},
                                      std::span<const std::size_t> window_starts = {});
[[nodiscard]] long count_transactions(const PositionSeries& positions,
                                      ExecutionOptions options = {});

/// Buy-and-hold: all-Long over the asset returns with a single entry leg.
[[nodiscard]] ReturnSeries buy_and_hold_returns(const ReturnSeries& asset_returns,
                                                const CostModel& cost,
                                                ExecutionOptions options = {});

}  // namespace wfo
