#include "wfo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wfo {

CostSweep cost_sweep(std::span<const double> asset_returns, std::span<const Direction> positions,
                     std::span<const double> levels, double n_year, ExecutionOptions execution,
                     std::span<const std::size_t> window_starts) {
    if (levels.empty()) throw std::invalid_argument("cost sweep needs at least one level");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        validate(CostModel{levels[i]});
        if (i > 0 && !(levels[i] > levels[i - 1]))
            throw std::invalid_argument("cost levels must be strictly increasing");
    }
    CostSweep sweep;
    sweep.levels.assign(levels.begin(), levels.end());
    sweep.transactions = count_transactions(positions, execution, window_starts);
    std::vector<double> means;
    for (double level : levels) {
        const auto net = net_returns(asset_returns, positions, CostModel{level}, execution, window_starts);
        sweep.reports.push_back(full_report(net, n_year));
        means.push_back(sweep.reports.back().ann_mean_return.value_or(0.0));
    }
    sweep.breakeven_estimate = interpolate_breakeven(levels, means);
    return sweep;
}

Metric interpolate_breakeven(std::span<const double> levels, std::span<const double> values) {
    if (levels.size() != values.size()) throw std::invalid_argument("level/value size mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == 0.0) return levels[i];
        if (i + 1 < values.size() && (values[i] > 0.0) != (values[i + 1] > 0.0) &&
            values[i + 1] != 0.0) {
            const double t = values[i] / (values[i] - values[i + 1]);
            return levels[i] + t * (levels[i + 1] - levels[i]);
        }
    }
    return std::nullopt;
}

PortfolioSpec equal_weight(std::vector<std::string> labels, std::vector<EquityCurve> curves) {
    if (curves.empty()) throw std::invalid_argument("portfolio needs at least one component");
    PortfolioSpec spec;
    spec.weights.assign(curves.size(), 1.0 / static_cast<double>(curves.size()));
    spec.labels = std::move(labels);
    spec.curves = std::move(curves);
    return spec;
}

void validate(const PortfolioSpec& spec) {
    if (spec.curves.empty()) throw std::invalid_argument("portfolio needs at least one component");
    if (spec.curves.size() != spec.weights.size() || spec.labels.size() != spec.curves.size())
        throw std::invalid_argument("portfolio labels, curves and weights differ in length");
    for (double w : spec.weights)
        if (!(w >= 0.0)) throw std::invalid_argument("portfolio weights must be non-negative");
    const double total = std::accumulate(spec.weights.begin(), spec.weights.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("portfolio weights must sum to 1");
}

EquityCurve combine_portfolio(const PortfolioSpec& spec) {
    validate(spec);
    const auto& reference = spec.curves.front();
    for (std::size_t i = 1; i < spec.curves.size(); ++i) {
        const auto& c = spec.curves[i];
        const auto n = std::min(c.timestamps.size(), reference.timestamps.size());
        const auto diverge =
            std::mismatch(reference.timestamps.begin(), reference.timestamps.begin() + n,
                          c.timestamps.begin());
        if (diverge.first != reference.timestamps.begin() + n)
            throw std::invalid_argument(
                "component '" + spec.labels[i] + "' diverges from '" + spec.labels[0] +
                "' at index " + std::to_string(diverge.first - reference.timestamps.begin()) +
                " (" + std::to_string(*diverge.first) + " vs " + std::to_string(*diverge.second) +
                ")");
        if (c.timestamps.size() != reference.timestamps.size())
            throw std::invalid_argument("component '" + spec.labels[i] + "' has " +
                                        std::to_string(c.timestamps.size()) + " points, '" +
                                        spec.labels[0] + "' has " +
                                        std::to_string(reference.timestamps.size()));
    }
    EquityCurve out;
    out.timestamps = reference.timestamps;
    out.values.resize(reference.size());
    for (std::size_t t = 0; t < out.values.size(); ++t) {
        double wealth = 0.0;
        for (std::size_t i = 0; i < spec.curves.size(); ++i)
            wealth += spec.weights[i] * std::exp(spec.curves[i].values[t]);
        out.values[t] = std::log(wealth);
    }
    return out;
}

std::vector<EquityCurve> align_curves(std::span<const EquityCurve> curves) {
    std::vector<Timestamp> timeline;
    for (const auto& c : curves) timeline.insert(timeline.end(), c.timestamps.begin(), c.timestamps.end());
    std::sort(timeline.begin(), timeline.end());
    timeline.erase(std::unique(timeline.begin(), timeline.end()), timeline.end());

    std::vector<EquityCurve> out;
    for (const auto& c : curves) {
        EquityCurve aligned;
        aligned.timestamps = timeline;
        aligned.values.resize(timeline.size());
        std::size_t j = 0;
        double last = 0.0;
        for (std::size_t t = 0; t < timeline.size(); ++t) {
            while (j < c.timestamps.size() && c.timestamps[j] <= timeline[t]) last = c.values[j++];
            aligned.values[t] = last;
        }
        out.push_back(std::move(aligned));
    }
    return out;
}

ReturnSeries curve_returns(const EquityCurve& curve, int frequency_minutes) {
    ReturnSeries out;
    out.frequency_minutes = frequency_minutes;
    for (std::size_t t = 1; t < curve.size(); ++t) {
        out.timestamps.push_back(curve.timestamps[t]);
        out.values.push_back(curve.values[t] - curve.values[t - 1]);
    }
    return out;
}

}  // namespace wfo
