#include "wfo/walkforward.hpp"

#include "wfo/errors.hpp"
#include "wfo/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>

namespace wfo {

std::string to_string(const WindowPair& window) {
    return std::to_string(window.train_days) + "/" + std::to_string(window.test_days);
}

WindowPair parse_window(std::string_view text) {
    const auto slash = text.find('/');
    WindowPair w;
    auto parse = [&](std::string_view part, int& value) {
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        return ec == std::errc() && ptr == part.data() + part.size();
    };
    if (slash == std::string_view::npos || !parse(text.substr(0, slash), w.train_days) ||
        !parse(text.substr(slash + 1), w.test_days))
        throw std::invalid_argument("window must look like TRAIN/TEST, got '" + std::string(text) +
                                    "'");
    validate(w);
    return w;
}

void validate(const WindowPair& window) {
    if (window.train_days <= 0 || window.test_days <= 0)
        throw std::invalid_argument("window lengths must be positive: " + to_string(window));
}

std::size_t WfRunResult::valid_segments() const {
    return static_cast<std::size_t>(std::count_if(per_segment.begin(), per_segment.end(),
                                                  [](const auto& s) { return s.pair.has_value(); }));
}

std::vector<WfSegment> segment(std::size_t n_bars, int frequency_minutes, const WindowPair& window,
                               Stride stride) {
    validate(window);
    const std::size_t per_day = bars_per_day(frequency_minutes);
    const std::size_t train_len = static_cast<std::size_t>(window.train_days) * per_day;
    const std::size_t test_len = static_cast<std::size_t>(window.test_days) * per_day;
    const std::size_t seg_len = train_len + test_len;
    if (n_bars < seg_len)
        throw ValidationError("series of " + std::to_string(n_bars) + " bars is shorter than one " +
                              to_string(window) + " segment (" + std::to_string(seg_len) +
                              " bars required)");
    const std::size_t step = stride == Stride::Segment ? seg_len : test_len;
    std::vector<WfSegment> out;
    for (std::size_t start = 0; start + seg_len <= n_bars; start += step) {
        out.push_back({{start, start + train_len}, {start + train_len, start + seg_len}});
    }
    return out;
}

std::vector<WfSegment> segment(const PriceSeries& series, const WindowPair& window, Stride stride) {
    return segment(series.size(), series.frequency_minutes, window, stride);
}

namespace {

std::vector<double> slice_log_returns(std::span<const double> prices, IndexRange eval) {
    std::vector<double> out(eval.size() - 1);
    for (std::size_t t = eval.begin; t + 1 < eval.end; ++t)
        out[t - eval.begin] = std::log(prices[t + 1]) - std::log(prices[t]);
    return out;
}

void check_eval_range(std::size_t n, std::size_t ema_start, IndexRange eval) {
    if (eval.end > n || ema_start > eval.begin || eval.size() < 2)
        throw std::invalid_argument("evaluation slice must hold at least 2 bars inside the series");
}

/// Training-slice Sharpe of every pair, sharing EMA computations between pairs.
std::vector<Metric> train_sharpes(std::span<const double> prices, IndexRange train,
                                  std::span<const EmaPair> universe, const CostModel& cost,
                                  double n_year, const WalkForwardOptions& options) {
    const auto window = prices.subspan(train.begin, train.size());
    std::map<int, std::vector<double>> emas;
    for (const auto& pair : universe) {
        emas.try_emplace(pair.fast.n);
        emas.try_emplace(pair.slow.n);
    }
    for (auto& [n, values] : emas) values = ema(window, EmaParams{n});

    const auto asset = slice_log_returns(prices, train);
    std::vector<Metric> out(universe.size());
    parallel_for(universe.size(), options.threads, [&](std::size_t i) {
        const auto& fast = emas.at(universe[i].fast.n);
        const auto& slow = emas.at(universe[i].slow.n);
        auto directions = crossover_directions(std::span(fast).first(asset.size()),
                                               std::span(slow).first(asset.size()));
        const auto net = net_returns(asset, directions, cost, options.execution);
        out[i] = sharpe(net, n_year);
    });
    return out;
}

SegmentOptimum optimize_on_prices(std::span<const double> prices, const WfSegment& segment,
                                  std::span<const EmaPair> universe, const CostModel& cost,
                                  double n_year, const WalkForwardOptions& options) {
    if (universe.empty()) throw std::invalid_argument("EMA universe is empty");
    for (const auto& pair : universe) validate(pair);
    check_eval_range(prices.size(), segment.train.begin, segment.train);
    const auto sharpes = train_sharpes(prices, segment.train, universe, cost, n_year, options);

    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < universe.size(); ++i) {
        if (!sharpes[i]) continue;
        if (!best || *sharpes[i] > *sharpes[*best] ||
            (*sharpes[i] == *sharpes[*best] && universe[i] < universe[*best]))
            best = i;
    }
    if (!best)
        throw SegmentError("every EMA pair has an undefined Sharpe on training bars [" +
                           std::to_string(segment.train.begin) + ", " +
                           std::to_string(segment.train.end) + ")");
    return {universe[*best], *sharpes[*best]};
}

struct Choice {
    EmaPair pair;
    Metric train_sharpe;
};

using InternalChooser = std::function<Choice(std::size_t, const WfSegment&)>;

WfRunResult run_impl(const PriceSeries& series, const WindowPair& window,
                     const InternalChooser& choose, const CostModel& cost, double n_year,
                     const WalkForwardOptions& options) {
    validate(cost);
    const auto segments = segment(series, window, options.stride);
    const auto prices = series.prices();
    const auto stamps = series.timestamps();

    WfRunResult result;
    result.window = window;
    result.n_year = n_year;
    result.wf_returns.frequency_minutes = series.frequency_minutes;
    result.asset_returns.frequency_minutes = series.frequency_minutes;

    for (std::size_t k = 0; k < segments.size(); ++k) {
        SegmentRecord record;
        record.index = k;
        record.segment = segments[k];
        try {
            auto choice = choose(k, segments[k]);
            record.pair = choice.pair;
            record.train_sharpe = choice.train_sharpe;
        } catch (const SegmentError& e) {
            record.error = e.what();
            result.per_segment.push_back(std::move(record));
            continue;
        }
        auto slice = evaluate_slice(prices, stamps, segments[k].train.begin, segments[k].test,
                                    *record.pair, cost, options.execution);
        record.test_sharpe = slice.net_returns.size() >= 2 ? sharpe(slice.net_returns, n_year)
                                                           : Metric{};
        result.window_starts.push_back(result.wf_returns.size());
        auto append = [](auto& dst, const auto& src) { dst.insert(dst.end(), src.begin(), src.end()); };
        append(result.wf_returns.values, slice.net_returns);
        append(result.wf_returns.timestamps, slice.timestamps);
        append(result.asset_returns.values, slice.asset_returns);
        append(result.asset_returns.timestamps, slice.timestamps);
        append(result.positions.directions, slice.directions);
        append(result.positions.timestamps,
               std::span(stamps).subspan(segments[k].test.begin, slice.directions.size()));
        result.per_segment.push_back(std::move(record));
    }
    if (result.valid_segments() == 0)
        throw SegmentError("walk-forward " + to_string(window) + " on " + series.asset_id +
                           " has no valid segments");
    if (result.wf_returns.size() >= 2) result.total_sharpe = sharpe(result.wf_returns.values, n_year);
    return result;
}

}  // namespace

SliceResult evaluate_slice(std::span<const double> prices, std::span<const Timestamp> timestamps,
                           std::size_t ema_start, IndexRange eval, const EmaPair& pair,
                           const CostModel& cost, ExecutionOptions options) {
    check_eval_range(prices.size(), ema_start, eval);
    validate(pair);
    const auto context = prices.subspan(ema_start, eval.end - ema_start);
    const auto fast = ema(context, pair.fast);
    const auto slow = ema(context, pair.slow);
    const std::size_t offset = eval.begin - ema_start;
    const std::size_t n_returns = eval.size() - 1;

    SliceResult out;
    out.directions = crossover_directions(std::span(fast).subspan(offset, n_returns),
                                          std::span(slow).subspan(offset, n_returns));
    out.asset_returns = slice_log_returns(prices, eval);
    out.net_returns = net_returns(out.asset_returns, out.directions, cost, options);
    out.timestamps.assign(timestamps.begin() + static_cast<std::ptrdiff_t>(eval.begin + 1),
                          timestamps.begin() + static_cast<std::ptrdiff_t>(eval.end));
    return out;
}

SegmentOptimum optimize_segment(const PriceSeries& series, const WfSegment& segment,
                                std::span<const EmaPair> universe, const CostModel& cost,
                                double n_year, const WalkForwardOptions& options) {
    const auto prices = series.prices();
    return optimize_on_prices(prices, segment, universe, cost, n_year, options);
}

WfRunResult run_walkforward(const PriceSeries& series, const WindowPair& window,
                            std::span<const EmaPair> universe, const CostModel& cost, double n_year,
                            const WalkForwardOptions& options) {
    if (universe.empty()) throw std::invalid_argument("EMA universe is empty");
    const auto prices = series.prices();
    return run_impl(
        series, window,
        [&](std::size_t, const WfSegment& seg) {
            auto best = optimize_on_prices(prices, seg, universe, cost, n_year, options);
            return Choice{best.pair, best.train_sharpe};
        },
        cost, n_year, options);
}

WfRunResult run_walkforward_with(const PriceSeries& series, const WindowPair& window,
                                 const PairChooser& choose, const CostModel& cost, double n_year,
                                 const WalkForwardOptions& options) {
    return run_impl(
        series, window,
        [&](std::size_t k, const WfSegment& seg) { return Choice{choose(k, seg), std::nullopt}; },
        cost, n_year, options);
}

}  // namespace wfo
