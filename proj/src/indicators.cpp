#include "wfo/indicators.hpp"

#include <algorithm>
#include <stdexcept>

namespace wfo {

void validate(const EmaParams& params) {
    if (params.n < 1) throw std::invalid_argument("EMA period must be >= 1");
}

void validate(const EmaPair& pair) {
    validate(pair.fast);
    validate(pair.slow);
    if (pair.fast.n >= pair.slow.n)
        throw std::invalid_argument("fast EMA period must be shorter than slow: " + to_string(pair));
}

std::string to_string(const EmaPair& pair) {
    return std::to_string(pair.fast.n) + "/" + std::to_string(pair.slow.n);
}

std::vector<EmaPair> make_universe(std::span<const int> fast_periods,
                                   std::span<const int> slow_periods) {
    std::vector<int> fast(fast_periods.begin(), fast_periods.end());
    std::vector<int> slow(slow_periods.begin(), slow_periods.end());
    std::sort(fast.begin(), fast.end());
    std::sort(slow.begin(), slow.end());
    fast.erase(std::unique(fast.begin(), fast.end()), fast.end());
    slow.erase(std::unique(slow.begin(), slow.end()), slow.end());
    std::vector<EmaPair> out;
    for (int f : fast) {
        for (int s : slow) {
            if (f >= s) continue;
            EmaPair pair{{f}, {s}};
            validate(pair);
            out.push_back(pair);
        }
    }
    if (out.empty()) throw std::invalid_argument("EMA universe is empty");
    return out;
}

std::vector<EmaPair> make_universe(std::span<const int> periods) {
    std::vector<int> fast;
    std::vector<int> slow;
    for (int p : periods) (p > kSlowPeriodThreshold ? slow : fast).push_back(p);
    return make_universe(fast, slow);
}

std::vector<EmaPair> default_universe() {
    static constexpr int periods[] = {5, 7, 10, 15, 20, 30, 40, 50, 100, 150, 200};
    return make_universe(periods);
}

std::vector<double> ema(std::span<const double> prices, EmaParams params) {
    validate(params);
    if (prices.empty()) throw std::invalid_argument("EMA of an empty series");
    const double alpha = params.alpha();
    std::vector<double> out(prices.size());
    out[0] = prices[0];
    for (std::size_t t = 1; t < prices.size(); ++t)
        out[t] = alpha * prices[t] + (1.0 - alpha) * out[t - 1];
    return out;
}

std::vector<double> ema(const PriceSeries& series, EmaParams params) {
    const auto prices = series.prices();
    return ema(prices, params);
}

std::vector<Direction> crossover_directions(std::span<const double> fast_ema,
                                            std::span<const double> slow_ema) {
    if (fast_ema.size() != slow_ema.size())
        throw std::invalid_argument("fast and slow EMA lengths differ");
    std::vector<Direction> out(fast_ema.size());
    for (std::size_t t = 0; t < out.size(); ++t)
        out[t] = fast_ema[t] >= slow_ema[t] ? Direction::Long : Direction::Short;
    return out;
}

std::vector<Direction> crossover_directions(std::span<const double> prices, const EmaPair& pair) {
    validate(pair);
    const auto fast = ema(prices, pair.fast);
    const auto slow = ema(prices, pair.slow);
    return crossover_directions(fast, slow);
}

PositionSeries crossover_positions(const PriceSeries& series, const EmaPair& pair) {
    const auto prices = series.prices();
    PositionSeries out;
    out.directions = crossover_directions(prices, pair);
    out.timestamps = series.timestamps();
    return out;
}

}  // namespace wfo
