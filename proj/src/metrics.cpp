#include "wfo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wfo {

namespace {

double mean_of(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

bool all_equal(std::span<const double> xs) {
    return std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>()) == xs.end();
}

}  // namespace

double annualized_mean_return(std::span<const double> returns, double n_year) {
    if (returns.empty()) throw std::invalid_argument("mean return of an empty series");
    return mean_of(returns) * n_year;
}

double annualized_volatility(std::span<const double> returns, double n_year) {
    if (returns.size() < 2) throw std::invalid_argument("volatility needs at least 2 returns");
    if (all_equal(returns)) return 0.0;
    const double mean = mean_of(returns);
    double ss = 0.0;
    for (double r : returns) ss += (r - mean) * (r - mean);
    return std::sqrt(ss / static_cast<double>(returns.size() - 1)) * std::sqrt(n_year);
}

Metric sharpe(std::span<const double> returns, double n_year) {
    const double vol = annualized_volatility(returns, n_year);
    if (vol == 0.0) return std::nullopt;
    return annualized_mean_return(returns, n_year) / vol;
}

double max_drawdown(std::span<const double> returns) {
    double cum = 0.0;
    double peak = 0.0;
    double worst = 0.0;
    for (double r : returns) {
        cum += r;
        peak = std::max(peak, cum);
        worst = std::max(worst, peak - cum);
    }
    return worst;
}

Metric information_ratio_xx(double ann_mean, double ann_vol, double mdd) {
    if (ann_vol == 0.0 || mdd == 0.0) return std::nullopt;
    const double s = ann_mean > 0.0 ? 1.0 : (ann_mean < 0.0 ? -1.0 : 0.0);
    return s * ann_mean * ann_mean / (ann_vol * mdd);
}

Metric sortino(std::span<const double> returns, double n_year) {
    if (returns.size() < 2) return std::nullopt;
    double downside = 0.0;
    bool any_negative = false;
    for (double r : returns) {
        if (r < 0.0) {
            downside += r * r;
            any_negative = true;
        }
    }
    if (!any_negative) return std::nullopt;
    const double dd = std::sqrt(downside / static_cast<double>(returns.size() - 1));
    return mean_of(returns) / dd * std::sqrt(n_year);
}

double simple_drawdown(double log_drawdown) { return -std::expm1(-log_drawdown); }

PerformanceReport full_report(std::span<const double> returns, double n_year) {
    PerformanceReport report;
    report.n_year = n_year;
    report.n_obs = returns.size();
    report.cumulative_log_return = std::accumulate(returns.begin(), returns.end(), 0.0);
    if (returns.empty()) return report;

    report.ann_mean_return = annualized_mean_return(returns, n_year);
    report.max_drawdown = max_drawdown(returns);
    if (returns.size() >= 2) {
        report.ann_volatility = annualized_volatility(returns, n_year);
        report.sharpe = sharpe(returns, n_year);
        report.information_ratio_xx =
            information_ratio_xx(*report.ann_mean_return, *report.ann_volatility,
                                 *report.max_drawdown);
        report.sortino = sortino(returns, n_year);
    }
    return report;
}

}  // namespace wfo
