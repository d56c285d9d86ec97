#pragma once

#include "wfo/market_data.hpp"

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wfo {

/// Periods above this are slow EMAs, the rest fast.
inline constexpr int kSlowPeriodThreshold = 35;

struct EmaParams {
    int n = 1;

    [[nodiscard]] double alpha() const noexcept { return 2.0 / (n + 1.0); }
    friend auto operator<=>(const EmaParams&, const EmaParams&) = default;
};

struct EmaPair {
    EmaParams fast;
    EmaParams slow;

    friend auto operator<=>(const EmaPair&, const EmaPair&) = default;
};

void validate(const EmaParams& params);
void validate(const EmaPair& pair);

[[nodiscard]] std::string to_string(const EmaPair& pair);

/// All (fast, slow) combinations of the given periods with fast < slow, ordered by
/// (fast, slow). Periods are classified by `kSlowPeriodThreshold`.
[[nodiscard]] std::vector<EmaPair> make_universe(std::span<const int> periods);
[[nodiscard]] std::vector<EmaPair> make_universe(std::span<const int> fast_periods,
                                                 std::span<const int> slow_periods);
[[nodiscard]] std::vector<EmaPair> default_universe();

enum class Direction : std::int8_t { Short = -1, Long = 1 };

[[nodiscard]] constexpr int sign(Direction d) noexcept { return static_cast<int>(d); }

struct PositionSeries {
    std::vector<Timestamp> timestamps;
    std::vector<Direction> directions;

    [[nodiscard]] std::size_t size() const noexcept { return directions.size(); }
    [[nodiscard]] bool empty() const noexcept { return directions.empty(); }
};

/// Recursive EMA seeded with the first price.
[[nodiscard]] std::vector<double> ema(std::span<const double> prices, EmaParams params);
[[nodiscard]] std::vector<double> ema(const PriceSeries& series, EmaParams params);

/// Long where fast EMA >= slow EMA, Short otherwise.
[[nodiscard]] std::vector<Direction> crossover_directions(std::span<const double> fast_ema,
                                                          std::span<const double> slow_ema);
[[nodiscard]] std::vector<Direction> crossover_directions(std::span<const double> prices,
                                                          const EmaPair& pair);
[[nodiscard]] PositionSeries crossover_positions(const PriceSeries& series, const EmaPair& pair);

}  // namespace wfo
