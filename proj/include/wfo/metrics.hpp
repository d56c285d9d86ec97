#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace wfo {

/// A metric value, or nullopt when it is undefined for the input
/// (zero volatility, zero drawdown, no downside returns, too few observations).
using Metric = std::optional<double>;

/// The six-metric bundle for one return stream. Risk-free rate and Sortino
/// benchmark are both zero; drawdown is in log-wealth units.
struct PerformanceReport {
    Metric ann_mean_return;
    Metric ann_volatility;
    Metric sharpe;
    Metric information_ratio_xx;
    Metric max_drawdown;
    Metric sortino;
    double cumulative_log_return = 0.0;
    double n_year = 0.0;
    std::size_t n_obs = 0;
};

[[nodiscard]] double annualized_mean_return(std::span<const double> returns, double n_year);

/// Sample standard deviation (N-1) scaled by sqrt(n_year). Exactly 0 for constant input.
[[nodiscard]] double annualized_volatility(std::span<const double> returns, double n_year);

/// Annualized mean over annualized volatility; nullopt at zero volatility.
[[nodiscard]] Metric sharpe(std::span<const double> returns, double n_year);

/// Largest peak-to-trough fall of the cumulative log-return curve (leading 0 included).
[[nodiscard]] double max_drawdown(std::span<const double> returns);

/// sign(m) * m^2 / (v * d); nullopt when v or d is zero.
[[nodiscard]] Metric information_ratio_xx(double ann_mean, double ann_vol, double mdd);

/// mean / sqrt(sum_{r<0} r^2 / (N-1)) * sqrt(n_year); nullopt without negative returns.
[[nodiscard]] Metric sortino(std::span<const double> returns, double n_year);

/// Drawdown expressed as a simple-return loss, 1 - exp(-dd).
[[nodiscard]] double simple_drawdown(double log_drawdown);

[[nodiscard]] PerformanceReport full_report(std::span<const double> returns, double n_year);

}  // namespace wfo
