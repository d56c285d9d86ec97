#pragma once

#include "wfo/cli/config.hpp"
#include "wfo/walkforward.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace wfo::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 2,
    kExitDataError = 3,
    kExitUnseenLocked = 4,
};

inline constexpr const char* kUnseenLockFile = "unseen.lock";

/// The unseen period was already evaluated and no override was given.
class UnseenLockError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Descriptive statistics of the training-period returns, per asset and frequency.
/// With `only_frequency` unset, every supported frequency reachable from the data is used.
void cmd_stats(const RunConfig& config, std::ostream& log,
               std::optional<int> only_frequency = std::nullopt);

/// Sharpe grid, smoothed grid, top-k selection and grid summary for the training asset.
void cmd_grid(const RunConfig& config, std::ostream& log);

/// One-shot evaluation of explicit window pairs on the unseen period of every asset.
void cmd_unseen(const RunConfig& config, std::span<const WindowPair> pairs, bool override_lock,
                std::ostream& log);

/// Both bootstrap procedures for one window pair on the training period.
void cmd_bootstrap(const RunConfig& config, const WindowPair& pair, std::ostream& log);

/// Cost sensitivity of the training-period walk-forward positions for one pair.
void cmd_costsweep(const RunConfig& config, const WindowPair& pair, std::ostream& log);

/// Equal-weight, no-rebalancing portfolios from the unseen-period equity curves.
void cmd_portfolio(const RunConfig& config, std::ostream& log);

/// Parses argv and dispatches. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wfo::cli
