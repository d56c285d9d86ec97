#pragma once

#include "wfo/execution.hpp"
#include "wfo/indicators.hpp"
#include "wfo/market_data.hpp"
#include "wfo/walkforward.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wfo {

enum class BootstrapMethod { RandomEma, ShuffledBlocks };

[[nodiscard]] std::string to_string(BootstrapMethod method);

struct BootstrapConfig {
    std::size_t iterations = 1000;
    std::uint64_t seed = 42;
    BootstrapMethod method = BootstrapMethod::RandomEma;
    unsigned threads = 1;
    /// Optional hook receiving each shuffled-blocks iteration's positions.
    /// May be called concurrently when threads > 1.
    std::function<void(std::size_t iteration, std::span<const Direction>)> on_positions;
};

struct BootstrapResult {
    BootstrapMethod method = BootstrapMethod::RandomEma;
    std::uint64_t seed = 0;
    std::string prng;
    double original_sharpe = 0.0;
    std::vector<double> iteration_sharpes;  // NaN where undefined
    std::size_t n_higher = 0;
    double significance_pct = 0.0;
    std::optional<DescriptiveStats> stats;
    std::vector<std::string> warnings;

    [[nodiscard]] std::size_t iterations() const noexcept { return iteration_sharpes.size(); }
};

/// Maximal run of bars held in one direction.
struct PositionBlock {
    Direction direction = Direction::Long;
    std::size_t length = 0;

    friend bool operator==(const PositionBlock&, const PositionBlock&) = default;
};

[[nodiscard]] std::vector<PositionBlock> extract_blocks(std::span<const Direction> directions);
[[nodiscard]] std::vector<Direction> expand_blocks(std::span<const PositionBlock> blocks);

/// Fisher-Yates shuffle of the block order for one iteration.
[[nodiscard]] std::vector<PositionBlock> shuffle_blocks(std::span<const PositionBlock> blocks,
                                                        std::uint64_t seed, std::size_t iteration);

/// shuffle_blocks expanded to positions.
[[nodiscard]] std::vector<Direction> shuffled_positions(std::span<const PositionBlock> blocks,
                                                        std::uint64_t seed, std::size_t iteration);

/// Fills n_higher (strict >), significance_pct and stats from the iteration Sharpes.
void summarize(BootstrapResult& result);

/// Walk-forward with a uniformly random EMA pair per segment instead of the
/// training argmax.
[[nodiscard]] BootstrapResult bootstrap_random_ema(const PriceSeries& series,
                                                   const WindowPair& window,
                                                   std::span<const EmaPair> universe,
                                                   const CostModel& cost, double n_year,
                                                   const BootstrapConfig& config,
                                                   const WalkForwardOptions& options = {});

/// Shuffles the order of position blocks and re-prices them against the
/// original asset returns, recomputing transaction costs. `window_starts`
/// marks where each evaluation window opens a fresh position.
[[nodiscard]] BootstrapResult bootstrap_shuffled_blocks(
    const ReturnSeries& asset_returns, const PositionSeries& original_positions,
    const CostModel& cost, double n_year, const BootstrapConfig& config,
    ExecutionOptions execution = {}, std::span<const std::size_t> window_starts = {});

/// True when fewer than `alpha` of the random strategies beat the original.
[[nodiscard]] bool significance(const BootstrapResult& result, double alpha);

}  // namespace wfo
