#pragma once

#include "wfo/execution.hpp"
#include "wfo/indicators.hpp"
#include "wfo/metrics.hpp"

#include <span>
#include <string>
#include <vector>

namespace wfo {

/// Transaction cost levels used for sensitivity reporting.
inline constexpr double kDefaultCostLevels[] = {0.0005, 0.0007, 0.0010, 0.0020,
                                              0.0030, 0.0040, 0.0050};

struct CostSweep {
    std::vector<double> levels;
    std::vector<PerformanceReport> reports;
    long transactions = 0;
    /// Cost level where the annualized mean return crosses zero, linearly
    /// interpolated between adjacent levels.
    Metric breakeven_estimate;
};

/// Re-prices fixed positions at each cost level; positions are not re-optimized.
[[nodiscard]] CostSweep cost_sweep(std::span<const double> asset_returns,
                                   std::span<const Direction> positions,
                                   std::span<const double> levels, double n_year,
                                   ExecutionOptions execution = {},
                                   std::span<const std::size_t> window_starts = {});

/// Linear interpolation of the first zero crossing of `values` over `levels`.
[[nodiscard]] Metric interpolate_breakeven(std::span<const double> levels,
                                           std::span<const double> values);

struct PortfolioSpec {
    std::vector<std::string> labels;
    std::vector<EquityCurve> curves;
    std::vector<double> weights;
};

[[nodiscard]] PortfolioSpec equal_weight(std::vector<std::string> labels,
                                         std::vector<EquityCurve> curves);

void validate(const PortfolioSpec& spec);

/// Buy-once, never rebalance: W(t) = sum_i w_i exp(curve_i(t)); returns ln W(t).
/// All curves must share timestamps.
[[nodiscard]] EquityCurve combine_portfolio(const PortfolioSpec& spec);

/// Places every curve on the union of their timestamps. A curve is 0 before its
/// first point and holds its last value between points (capital sits idle).
[[nodiscard]] std::vector<EquityCurve> align_curves(std::span<const EquityCurve> curves);

/// Per-step log returns of an equity curve (inverse of equity_curve).
[[nodiscard]] ReturnSeries curve_returns(const EquityCurve& curve, int frequency_minutes);

}  // namespace wfo
