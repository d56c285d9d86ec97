#include "wfo/bootstrap.hpp"

#include "wfo/metrics.hpp"
#include "wfo/parallel.hpp"
#include "wfo/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace wfo {

namespace {

constexpr std::uint64_t kShuffleSubstream = std::numeric_limits<std::uint64_t>::max();

double or_nan(const Metric& m) { return m.value_or(std::numeric_limits<double>::quiet_NaN()); }

void check(const BootstrapConfig& config, BootstrapMethod expected) {
    if (config.method != expected)
        throw std::invalid_argument("bootstrap config method is " + to_string(config.method) +
                                    ", expected " + to_string(expected));
    if (config.iterations < 1) throw std::invalid_argument("bootstrap needs at least 1 iteration");
}

BootstrapResult start_result(const BootstrapConfig& config, const Metric& original) {
    if (!original)
        throw std::invalid_argument("original strategy Sharpe is undefined; nothing to compare");
    BootstrapResult r;
    r.method = config.method;
    r.seed = config.seed;
    r.prng = StreamRng::kName;
    r.original_sharpe = *original;
    r.iteration_sharpes.assign(config.iterations, std::numeric_limits<double>::quiet_NaN());
    return r;
}

}  // namespace

std::string to_string(BootstrapMethod method) {
    return method == BootstrapMethod::RandomEma ? "random_ema" : "shuffled_blocks";
}

std::vector<PositionBlock> extract_blocks(std::span<const Direction> directions) {
    std::vector<PositionBlock> blocks;
    for (Direction d : directions) {
        if (blocks.empty() || blocks.back().direction != d)
            blocks.push_back({d, 1});
        else
            ++blocks.back().length;
    }
    return blocks;
}

std::vector<Direction> expand_blocks(std::span<const PositionBlock> blocks) {
    std::vector<Direction> out;
    for (const auto& b : blocks) out.insert(out.end(), b.length, b.direction);
    return out;
}

std::vector<PositionBlock> shuffle_blocks(std::span<const PositionBlock> blocks,
                                          std::uint64_t seed, std::size_t iteration) {
    std::vector<PositionBlock> order(blocks.begin(), blocks.end());
    StreamRng rng(seed, iteration, kShuffleSubstream);
    for (std::size_t i = order.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

std::vector<Direction> shuffled_positions(std::span<const PositionBlock> blocks,
                                          std::uint64_t seed, std::size_t iteration) {
    return expand_blocks(shuffle_blocks(blocks, seed, iteration));
}

void summarize(BootstrapResult& result) {
    result.n_higher = static_cast<std::size_t>(
        std::count_if(result.iteration_sharpes.begin(), result.iteration_sharpes.end(),
                      [&](double s) { return s > result.original_sharpe; }));
    result.significance_pct =
        100.0 * static_cast<double>(result.n_higher) / static_cast<double>(result.iterations());
    std::vector<double> defined;
    std::copy_if(result.iteration_sharpes.begin(), result.iteration_sharpes.end(),
                 std::back_inserter(defined), [](double s) { return !std::isnan(s); });
    if (defined.size() < result.iteration_sharpes.size())
        result.warnings.push_back(std::to_string(result.iteration_sharpes.size() - defined.size()) +
                                  " iterations have an undefined Sharpe");
    result.stats.reset();
    if (defined.size() >= 8) result.stats = descriptive_stats(defined);
}

BootstrapResult bootstrap_random_ema(const PriceSeries& series, const WindowPair& window,
                                     std::span<const EmaPair> universe, const CostModel& cost,
                                     double n_year, const BootstrapConfig& config,
                                     const WalkForwardOptions& options) {
    check(config, BootstrapMethod::RandomEma);
    if (universe.empty()) throw std::invalid_argument("EMA universe is empty");
    validate(window);
    const auto original = run_walkforward(series, window, universe, cost, n_year, options);
    auto result = start_result(config, original.total_sharpe);

    WalkForwardOptions inner = options;
    inner.threads = 1;
    parallel_for(config.iterations, config.threads, [&](std::size_t it) {
        auto choose = [&](std::size_t segment, const WfSegment&) {
            StreamRng rng(config.seed, it, segment);
            return universe[static_cast<std::size_t>(rng.below(universe.size()))];
        };
        const auto run = run_walkforward_with(series, window, choose, cost, n_year, inner);
        result.iteration_sharpes[it] = or_nan(run.total_sharpe);
    });
    summarize(result);
    return result;
}

BootstrapResult bootstrap_shuffled_blocks(const ReturnSeries& asset_returns,
                                          const PositionSeries& original_positions,
                                          const CostModel& cost, double n_year,
                                          const BootstrapConfig& config,
                                          ExecutionOptions execution,
                                          std::span<const std::size_t> window_starts) {
    check(config, BootstrapMethod::ShuffledBlocks);
    if (original_positions.empty()) throw std::invalid_argument("no positions to shuffle");
    const auto original_net =
        net_returns(asset_returns.values, original_positions.directions, cost, execution,
                    window_starts);
    auto result = start_result(config, sharpe(original_net, n_year));

    const auto blocks = extract_blocks(original_positions.directions);
    if (blocks.size() == 1)
        result.warnings.push_back("positions form a single block; every permutation is identical");

    parallel_for(config.iterations, config.threads, [&](std::size_t it) {
        const auto positions = shuffled_positions(blocks, config.seed, it);
        if (config.on_positions) config.on_positions(it, positions);
        const auto net = net_returns(asset_returns.values, positions, cost, execution, window_starts);
        result.iteration_sharpes[it] = or_nan(sharpe(net, n_year));
    });
    summarize(result);
    return result;
}

bool significance(const BootstrapResult& result, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    return result.significance_pct / 100.0 < alpha;
}

}  // namespace wfo
