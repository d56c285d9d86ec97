#include "wfo/cli/config.hpp"
#include "wfo/errors.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace wfo::cli {
namespace {

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "/base");
}

TEST(Config, DefaultsWhenSectionsMissing) {
    const auto c = parse("[data]\nassets = BTC\n");
    EXPECT_EQ(c.train_asset, "BTC");
    EXPECT_EQ(c.frequency, 60);
    EXPECT_EQ(c.train_axis.size(), 9u);
    EXPECT_EQ(c.cost, 0.001);
    EXPECT_EQ(c.top_k, 2u);
    EXPECT_EQ(c.bootstrap_iterations, 1000u);
    EXPECT_DOUBLE_EQ(c.annualization(), 8760.0);
}

TEST(Config, ParsesAllSections) {
    const auto c = parse(R"([data]
assets = BTC, ETH
train_asset = ETH
[files]
BTC = btc.csv
ETH = /abs/eth.csv
[period]
train_start = 2018-02-08
train_end = 2019-09-01T00:00
unseen_start = 1567296000000
unseen_end = 2020-01-01
[strategy]
frequency = 15
train_days = 7,14
test_days = 28
ema_periods = 5,40
cost = 0.002
stride = test
final_liquidation = true
n_year = 1000
[selection]
top_k = 3
[bootstrap]
iterations = 10
seed = 9
alpha = 0.1
[costsweep]
levels = 0.001,0.002
[output]
dir = results
[run]
threads = 4
)");
    EXPECT_EQ(c.assets, (std::vector<std::string>{"BTC", "ETH"}));
    EXPECT_EQ(c.train_asset, "ETH");
    EXPECT_EQ(c.data_path("BTC"), std::filesystem::path("/base/btc.csv"));
    EXPECT_EQ(c.data_path("ETH"), std::filesystem::path("/abs/eth.csv"));
    EXPECT_EQ(c.split.train_start, 1518048000000);
    EXPECT_EQ(c.split.train_end, 1567296000000);
    EXPECT_EQ(c.split.unseen_start, 1567296000000);
    EXPECT_EQ(c.frequency, 15);
    EXPECT_EQ(c.train_axis, (std::vector<int>{7, 14}));
    EXPECT_EQ(c.test_axis, (std::vector<int>{28}));
    EXPECT_EQ(c.stride, Stride::Test);
    EXPECT_TRUE(c.final_liquidation);
    EXPECT_DOUBLE_EQ(c.annualization(), 1000.0);
    EXPECT_EQ(c.top_k, 3u);
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.cost_levels, (std::vector<double>{0.001, 0.002}));
    EXPECT_EQ(c.output_dir, std::filesystem::path("/base/results"));
    EXPECT_EQ(c.threads, 4u);
}

TEST(Config, BadValuesAreConfigErrors) {
    EXPECT_THROW((void)parse("[strategy]\ncost = abc\n"), ConfigError);
    EXPECT_THROW((void)parse("[strategy]\nstride = sideways\n"), ConfigError);
    EXPECT_THROW((void)parse("[period]\ntrain_start = 2019-02-30\n"), ConfigError);
    EXPECT_THROW((void)parse("[strategy\n"), ConfigError);
}

TEST(Config, MissingFileIsConfigError) {
    EXPECT_THROW((void)load_config("/nonexistent/run.ini"), ConfigError);
}

TEST(Config, ValidationRejectsUnknownTrainAsset) {
    auto c = parse("[data]\nassets = BTC\ntrain_asset = ETH\n");
    EXPECT_THROW(validate(c), ConfigError);
}

TEST(Config, HashIgnoresThreadsAndOutput) {
    const auto a = parse("[data]\nassets = BTC\n[run]\nthreads = 1\n[output]\ndir = a\n");
    const auto b = parse("[data]\nassets = BTC\n[run]\nthreads = 8\n[output]\ndir = b\n");
    const auto c = parse("[data]\nassets = BTC\n[strategy]\ncost = 0.002\n");
    EXPECT_EQ(a.hash(), b.hash());
    EXPECT_NE(a.hash(), c.hash());
    EXPECT_EQ(a.hash().size(), 16u);
}

TEST(ParseTime, Formats) {
    EXPECT_EQ(parse_time("0"), 0);
    EXPECT_EQ(parse_time("1970-01-02"), 86'400'000);
    EXPECT_EQ(parse_time("1970-01-01T01:00"), 3'600'000);
    EXPECT_EQ(parse_time("1970-01-01T00:00:30"), 30'000);
    EXPECT_THROW((void)parse_time("yesterday"), ConfigError);
}

}  // namespace
}  // namespace wfo::cli
