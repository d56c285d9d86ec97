// Acceptance suite: one PASS/FAIL line per criterion.

#include "wfo/analysis.hpp"
#include "wfo/bootstrap.hpp"
#include "wfo/cli/commands.hpp"
#include "wfo/cli/config.hpp"
#include "wfo/execution.hpp"
#include "wfo/indicators.hpp"
#include "wfo/metrics.hpp"
#include "wfo/walkforward.hpp"
#include "wfo/window_optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace wfo;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    bool skipped = false;
};

class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok && out_.pass) out_.detail = what;
        out_.pass = out_.pass && ok;
    }
    void note(std::string d) {
        if (out_.pass) out_.detail = std::move(d);
    }
    void skip(std::string why) {
        out_.skipped = true;
        out_.detail = std::move(why);
    }
    [[nodiscard]] Outcome result() const { return out_; }

private:
    Outcome out_;
};

std::vector<double> random_prices(std::mt19937_64& rng, std::size_t n, double sd = 0.01) {
    std::normal_distribution<double> step(0.0, sd);
    std::vector<double> p(n);
    double lp = std::log(100.0);
    for (auto& v : p) {
        v = std::exp(lp);
        lp += step(rng);
    }
    return p;
}

std::vector<double> random_returns(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> d(0.0002, 0.01);
    std::vector<double> r(n);
    for (auto& v : r) v = d(rng);
    return r;
}

PriceSeries series_of(const std::vector<double>& prices, int freq = 60) {
    std::vector<PriceBar> bars(prices.size());
    for (std::size_t i = 0; i < prices.size(); ++i)
        bars[i] = {static_cast<Timestamp>(i) * freq * kMillisPerMinute, prices[i]};
    return make_series("SYN", freq, std::move(bars));
}

std::vector<Direction> random_directions(std::mt19937_64& rng, std::size_t n, double flip) {
    std::bernoulli_distribution f(flip);
    std::vector<Direction> d(n);
    Direction cur = Direction::Long;
    for (auto& x : d) {
        if (f(rng)) cur = cur == Direction::Long ? Direction::Short : Direction::Long;
        x = cur;
    }
    return d;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 1
Outcome ema_oracle() {
    Check c;
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<std::size_t> len(1, 200);
    std::uniform_int_distribution<int> period(1, 250);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto p = random_prices(rng, len(rng), 0.02);
        const EmaParams params{period(rng)};
        const double a = params.alpha();
        const auto e = ema(p, params);
        for (std::size_t t = 0; t < p.size(); ++t) {
            double w = std::pow(1.0 - a, static_cast<double>(t)) * p[0];
            for (std::size_t k = 1; k <= t; ++k) w += a * std::pow(1.0 - a, static_cast<double>(t - k)) * p[k];
            worst = std::max(worst, std::abs(e[t] - w) / std::abs(w));
        }
    }
    c.expect(worst <= 1e-9, "max relative error " + std::to_string(worst));
    c.note("1000 series, max relative error " + std::to_string(worst));
    return c.result();
}

// 2
Outcome metric_oracles() {
    Check c;
    std::mt19937_64 rng(2002);
    std::uniform_int_distribution<std::size_t> len(2, 400);
    double e_mdd = 0.0, e_var = 0.0, e_sortino = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto r = random_returns(rng, len(rng));
        std::vector<double> cum{0.0};
        for (double x : r) cum.push_back(cum.back() + x);
        double mdd = 0.0;
        for (std::size_t t = 0; t < cum.size(); ++t)
            for (std::size_t s = 0; s <= t; ++s) mdd = std::max(mdd, cum[s] - cum[t]);
        e_mdd = std::max(e_mdd, std::abs(max_drawdown(r) - mdd));
    }
    for (int i = 0; i < 1000; ++i) {
        const auto r = random_returns(rng, len(rng));
        double m = 0.0;
        for (double x : r) m += x;
        m /= static_cast<double>(r.size());
        double ss = 0.0;
        for (double x : r) ss += (x - m) * (x - m);
        const double var = ss / static_cast<double>(r.size() - 1);
        const double vol = annualized_volatility(r, 1.0);
        e_var = std::max(e_var, std::abs(vol * vol - var));
    }
    for (int i = 0; i < 1000; ++i) {
        auto r = random_returns(rng, len(rng));
        r[0] = -std::abs(r[0]) - 1e-6;
        double sum = 0.0, down = 0.0;
        for (double x : r) {
            sum += x;
            if (x < 0.0) down += x * x;
        }
        const double n = static_cast<double>(r.size());
        const double expected = (sum / n) / std::sqrt(down / (n - 1.0)) * std::sqrt(8760.0);
        const auto got = sortino(r, 8760.0);
        e_sortino = std::max(e_sortino, got ? std::abs(*got - expected) : 1e300);
    }
    c.expect(e_mdd <= 1e-12, "max drawdown error " + std::to_string(e_mdd));
    c.expect(e_var <= 1e-12, "variance error " + std::to_string(e_var));
    c.expect(e_sortino <= 1e-12, "sortino error " + std::to_string(e_sortino));
    std::ostringstream d;
    d << "3x1000 vectors, max abs errors mdd " << e_mdd << ", var " << e_var << ", sortino " << e_sortino;
    c.note(d.str());
    return c.result();
}

// 3
Outcome grid_shape() {
    Check c;
    auto g = default_grid();
    c.expect(g.values.size() == 81, "default grid has " + std::to_string(g.values.size()) + " cells");
    for (auto& v : g.values) v = 0.8125;
    const auto s = smooth(g);
    int corners = 0, edges = 0;
    double dev = 0.0;
    for (std::size_t r = 0; r < g.rows(); ++r) {
        for (std::size_t col = 0; col < g.cols(); ++col) {
            const bool er = r == 0 || r + 1 == g.rows();
            const bool ec = col == 0 || col + 1 == g.cols();
            const int n = s.neighbor_counts[r * g.cols() + col];
            if (er && ec) {
                ++corners;
                c.expect(n == 3, "corner cell with " + std::to_string(n) + " neighbours");
            } else if (er || ec) {
                ++edges;
                c.expect(n == 5, "edge cell with " + std::to_string(n) + " neighbours");
            } else {
                c.expect(n == 8, "interior cell with " + std::to_string(n) + " neighbours");
            }
            dev = std::max(dev, std::abs(*s.grid.at(r, col) - 0.8125));
        }
    }
    c.expect(dev <= 1e-12, "uniform grid moved by " + std::to_string(dev));
    c.note("81 cells, " + std::to_string(corners) + " corners x3, " + std::to_string(edges) +
           " edges x5, fixed-point deviation " + std::to_string(dev));
    return c.result();
}

// 4
Outcome no_look_ahead() {
    Check c;
    std::mt19937_64 rng(4004);
    const WindowPair w{2, 3};
    const std::size_t seg_len = 5 * 24;
    const auto base = series_of(random_prices(rng, seg_len * 6 + 17));
    const auto universe = default_universe();
    const CostModel cost{0.001};
    const auto ref = run_walkforward(base, w, universe, cost, 8760.0);
    const auto segs = segment(base, w);
    c.expect(segs.size() == 6, "expected 6 segments, got " + std::to_string(segs.size()));
    int mutations = 0;
    std::uniform_int_distribution<std::size_t> which(0, segs.size() - 2);
    for (int m = 0; m < 20; ++m) {
        const std::size_t k = which(rng);
        std::uniform_int_distribution<std::size_t> at(segs[k].test.end, base.size() - 1);
        std::lognormal_distribution<double> factor(0.0, 0.2);
        auto mutated = base;
        mutated.bars[at(rng)].price *= factor(rng);
        const auto run = run_walkforward(mutated, w, universe, cost, 8760.0);
        const std::size_t prefix = ref.window_starts[k] + segs[k].test.size() - 1;
        bool same = true;
        for (std::size_t j = 0; j <= k; ++j) {
            const auto& a = run.per_segment[j];
            const auto& b = ref.per_segment[j];
            same = same && a.pair == b.pair && a.train_sharpe == b.train_sharpe &&
                   a.test_sharpe == b.test_sharpe;
        }
        for (std::size_t i = 0; i < prefix; ++i)
            same = same && run.wf_returns.values[i] == ref.wf_returns.values[i] &&
                   run.positions.directions[i] == ref.positions.directions[i] &&
                   run.asset_returns.values[i] == ref.asset_returns.values[i];
        c.expect(same, "mutation " + std::to_string(m) + " changed segment <= " + std::to_string(k));
        ++mutations;
    }
    c.note("6 segments, " + std::to_string(mutations) + " mutations, prefixes bitwise equal");
    return c.result();
}

// 5
Outcome cost_monotonicity() {
    Check c;
    std::mt19937_64 rng(5005);
    const auto r = random_returns(rng, 8000);
    const auto d = random_directions(rng, r.size(), 0.02);
    const long reversals = (count_transactions(d) - 1) / 2;
    c.expect(reversals >= 50, "only " + std::to_string(reversals) + " reversals");
    const auto sweep = cost_sweep(r, d, kDefaultCostLevels, 8760.0);
    for (std::size_t i = 1; i < sweep.reports.size(); ++i)
        c.expect(*sweep.reports[i].ann_mean_return < *sweep.reports[i - 1].ann_mean_return,
                 "mean not strictly decreasing at level " + std::to_string(sweep.levels[i]));

    // constant gross g per bar with a reversal every 40 bars: N g + T ln(1 - c*) = 0
    const std::size_t n = 10'000, block = 40;
    std::vector<Direction> pos(n);
    for (std::size_t i = 0; i < n; ++i)
        pos[i] = (i / block) % 2 == 0 ? Direction::Long : Direction::Short;
    const double t = static_cast<double>(count_transactions(pos));
    const double g = -t * std::log1p(-0.0035) / static_cast<double>(n);
    std::vector<double> asset(n);
    for (std::size_t i = 0; i < n; ++i) asset[i] = sign(pos[i]) * g;
    const double closed_form = 1.0 - std::exp(-static_cast<double>(n) * g / t);
    const auto planted = cost_sweep(asset, pos, kDefaultCostLevels, 8760.0);
    const double err = planted.breakeven_estimate ? std::abs(*planted.breakeven_estimate - closed_form) : 1e300;
    c.expect(err <= 1e-6, "breakeven error " + std::to_string(err));
    std::ostringstream det;
    det << reversals << " reversals, mean strictly decreasing over 7 levels; breakeven "
        << (planted.breakeven_estimate ? *planted.breakeven_estimate : NAN) << " vs closed form "
        << closed_form << " (error " << err << ")";
    c.note(det.str());
    return c.result();
}

// 6
Outcome bootstrap_conservation(const fs::path& fixture_dir) {
    Check c;
    const auto cfg = cli::load_config(fixture_dir / "fixture.ini");
    const auto full = load_prices(cfg.data_path(cfg.train_asset), cfg.train_asset);
    const auto [train, unseen] = split_periods(full, cfg.split);
    const auto wf = run_walkforward(train, {7, 28}, default_universe(), CostModel{cfg.cost},
                                    cfg.annualization());
    const auto blocks = extract_blocks(wf.positions.directions);
    std::multiset<std::pair<int, std::size_t>> reference;
    for (const auto& b : blocks) reference.insert({sign(b.direction), b.length});
    const auto longs = std::count(wf.positions.directions.begin(), wf.positions.directions.end(),
                                  Direction::Long);
    const auto total = wf.positions.size();

    std::vector<char> ok(1000, 0);
    BootstrapConfig bc;
    bc.method = BootstrapMethod::ShuffledBlocks;
    bc.iterations = 1000;
    bc.seed = cfg.seed;
    bc.threads = 8;
    bc.on_positions = [&](std::size_t it, std::span<const Direction> d) {
        const auto order = shuffle_blocks(blocks, bc.seed, it);
        std::multiset<std::pair<int, std::size_t>> got;
        for (const auto& b : order) got.insert({sign(b.direction), b.length});
        const auto expanded = expand_blocks(order);
        ok[it] = got == reference && d.size() == total &&
                 std::count(d.begin(), d.end(), Direction::Long) == longs &&
                 std::equal(d.begin(), d.end(), expanded.begin(), expanded.end());
    };
    const CostModel cost{cfg.cost};
    const auto a = bootstrap_shuffled_blocks(wf.asset_returns, wf.positions, cost, cfg.annualization(),
                                             bc, {}, wf.window_starts);
    const auto conserved = std::count(ok.begin(), ok.end(), 1);
    c.expect(conserved == 1000, std::to_string(conserved) + "/1000 iterations conserved blocks");

    bc.on_positions = nullptr;
    const auto b = bootstrap_shuffled_blocks(wf.asset_returns, wf.positions, cost, cfg.annualization(),
                                             bc, {}, wf.window_starts);
    bc.threads = 1;
    const auto s1 = bootstrap_shuffled_blocks(wf.asset_returns, wf.positions, cost, cfg.annualization(),
                                              bc, {}, wf.window_starts);
    auto bitwise = [](const std::vector<double>& x, const std::vector<double>& y) {
        return x.size() == y.size() &&
               std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0;
    };
    c.expect(bitwise(a.iteration_sharpes, b.iteration_sharpes), "shuffled blocks differ between runs");
    c.expect(bitwise(a.iteration_sharpes, s1.iteration_sharpes), "shuffled blocks differ across threads");

    BootstrapConfig rc;
    rc.method = BootstrapMethod::RandomEma;
    rc.iterations = 1000;
    rc.seed = cfg.seed;
    rc.threads = 1;
    const auto r1 = bootstrap_random_ema(train, {7, 28}, default_universe(), cost, cfg.annualization(), rc);
    const auto r1b = bootstrap_random_ema(train, {7, 28}, default_universe(), cost, cfg.annualization(), rc);
    rc.threads = 8;
    const auto r8 = bootstrap_random_ema(train, {7, 28}, default_universe(), cost, cfg.annualization(), rc);
    c.expect(bitwise(r1.iteration_sharpes, r1b.iteration_sharpes), "random EMA differs between runs");
    c.expect(bitwise(r1.iteration_sharpes, r8.iteration_sharpes), "random EMA differs across threads");
    c.note(std::to_string(blocks.size()) + " blocks, 1000/1000 iterations conserved; both methods bitwise "
           "reproducible across runs and threads 1/8");
    return c.result();
}

// 7
Outcome significance_arithmetic() {
    Check c;
    auto forced = [](std::size_t higher) {
        BootstrapResult r;
        r.original_sharpe = 1.252;
        r.iteration_sharpes.assign(1000, 0.9);
        std::fill_n(r.iteration_sharpes.begin(), higher, 1.5);
        r.iteration_sharpes[999] = 1.252;  // a tie never counts as higher
        summarize(r);
        return r;
    };
    const auto a = forced(35);
    const auto b = forced(80);
    c.expect(a.n_higher == 35 && a.significance_pct == 3.5, "35/1000 gave " + std::to_string(a.significance_pct));
    c.expect(b.n_higher == 80 && b.significance_pct == 8.0, "80/1000 gave " + std::to_string(b.significance_pct));
    c.expect(significance(a, 0.05), "3.5% not significant at 5%");
    c.expect(!significance(b, 0.05), "8.0% significant at 5%");
    c.note("35/1000 -> 3.5% significant, 80/1000 -> 8.0% not significant");
    return c.result();
}

// 8
Outcome portfolio_wealth() {
    Check c;
    const EquityCurve flat{{0, 1}, {0.0, 0.0}};
    const EquityCurve doubled{{0, 1}, {0.0, std::log(2.0)}};
    const auto hand = combine_portfolio(equal_weight({"a", "b"}, {flat, doubled}));
    const double err = std::abs(hand.final_value() - std::log(1.5));
    c.expect(err <= 1e-12, "hand example error " + std::to_string(err));

    std::mt19937_64 rng(8008);
    std::uniform_int_distribution<std::size_t> k_dist(2, 6);
    std::uniform_real_distribution<double> w_dist(0.05, 1.0);
    std::size_t violations = 0;
    for (int f = 0; f < 100; ++f) {
        const std::size_t k = k_dist(rng);
        std::vector<EquityCurve> curves;
        std::vector<std::string> labels;
        std::vector<double> weights;
        for (std::size_t i = 0; i < k; ++i) {
            const auto r = random_returns(rng, 300);
            EquityCurve curve;
            curve.values = {0.0};
            curve.timestamps = {0};
            for (std::size_t t = 0; t < r.size(); ++t) {
                curve.values.push_back(curve.values.back() + 3.0 * r[t]);
                curve.timestamps.push_back(static_cast<Timestamp>(t + 1));
            }
            curves.push_back(std::move(curve));
            labels.push_back("c" + std::to_string(i));
            weights.push_back(w_dist(rng));
        }
        double sum = 0.0;
        for (double w : weights) sum += w;
        for (double& w : weights) w /= sum;
        weights.back() = 1.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) weights.back() -= weights[i];
        const auto out = combine_portfolio(PortfolioSpec{labels, curves, weights});
        for (std::size_t t = 0; t < out.size(); ++t) {
            double lo = 1e300, hi = 0.0;
            for (const auto& cv : curves) {
                lo = std::min(lo, std::exp(cv.values[t]));
                hi = std::max(hi, std::exp(cv.values[t]));
            }
            const double w = std::exp(out.values[t]);
            if (w < lo * (1.0 - 1e-12) || w > hi * (1.0 + 1e-12)) ++violations;
        }
    }
    c.expect(violations == 0, std::to_string(violations) + " envelope violations");
    std::ostringstream d;
    d << "hand example error " << err << "; 100 random fixtures within wealth envelope";
    c.note(d.str());
    return c.result();
}

// 9
Outcome end_to_end(const fs::path& fixture_dir) {
    Check c;
    const auto work = fs::temp_directory_path() / "wfo_acceptance_grid";
    fs::remove_all(work);
    auto cfg = cli::load_config(fixture_dir / "fixture.ini");
    std::ostringstream log;
    double slowest = 0.0;
    std::vector<fs::path> dirs;
    for (unsigned threads : {1u, 8u, 1u}) {
        cfg.threads = threads;
        cfg.output_dir = work / ("run" + std::to_string(dirs.size()) + "_t" + std::to_string(threads));
        const auto t0 = std::chrono::steady_clock::now();
        cli::cmd_grid(cfg, log);
        slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        dirs.push_back(cfg.output_dir);
    }
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dirs[0])) {
        const auto name = e.path().filename();
        const auto ref = read_file(e.path());
        for (std::size_t i = 1; i < dirs.size(); ++i)
            c.expect(ref == read_file(dirs[i] / name), name.string() + " differs in " + dirs[i].filename().string());
        ++files;
    }
    const auto train = split_periods(load_prices(cfg.data_path(cfg.train_asset), cfg.train_asset), cfg.split).first;
    c.expect(files == 6, "expected 6 grid files, found " + std::to_string(files));
    c.expect(train.size() >= 10'000, "fixture training period has " + std::to_string(train.size()) + " bars");
    c.expect(slowest < 60.0, "grid took " + std::to_string(slowest) + " s");
    std::ostringstream d;
    d << files << " files byte-identical over 3 runs (threads 1/8/1), " << train.size()
      << "-bar 9x9 grid, slowest " << slowest << " s";
    c.note(d.str());
    fs::remove_all(work);
    return c.result();
}

// 10
Outcome dataset_tier() {
    Check c;
    const char* path = std::getenv("WFO_DATASET_CONFIG");
    if (!path || !*path) {
        c.skip("set WFO_DATASET_CONFIG to an INI pointing at the original minute-bar files");
        return c.result();
    }
    auto cfg = cli::load_config(path);
    const auto full = load_prices(cfg.data_path(cfg.train_asset), cfg.train_asset);
    const auto train = resample(split_periods(full, cfg.split).first, 60);
    GridOptions opt;
    opt.threads = cfg.threads;
    const auto universe = make_universe(cfg.ema_periods);
    const auto grid = build_grid(train, cfg.train_axis, cfg.test_axis, universe, CostModel{cfg.cost},
                                 annualization_factor(60), opt);
    double min_sharpe = 1e300;
    for (const auto& v : grid.values)
        if (v) min_sharpe = std::min(min_sharpe, *v);
    const auto top = select_top_k(smooth(grid).grid, 2);
    const std::set<WindowPair> got(top.begin(), top.end());
    const std::set<WindowPair> expected = {{7, 28}, {14, 10}};
    c.expect(min_sharpe > 0.0, "60-min minimum Sharpe " + std::to_string(min_sharpe) + " is not positive");
    c.expect(got == expected, "top-2 selection is " + to_string(top[0]) + ", " + to_string(top[1]));
    c.note("60-min min Sharpe " + std::to_string(min_sharpe) + ", top-2 {" + to_string(top[0]) + ", " +
           to_string(top[1]) + "}");
    return c.result();
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path fixture_dir = argc > 1 ? fs::path(argv[1]) : fs::path(WFO_FIXTURE_DIR);
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> fn;
    };
    const std::vector<Criterion> criteria = {
        {1, "EMA oracle equivalence", 5.0, ema_oracle},
        {2, "metric oracles", 10.0, metric_oracles},
        {3, "grid shape and smoothing", 0.0, grid_shape},
        {4, "no look-ahead", 0.0, no_look_ahead},
        {5, "cost monotonicity and breakeven", 0.0, cost_monotonicity},
        {6, "bootstrap conservation and determinism", 0.0, [&] { return bootstrap_conservation(fixture_dir); }},
        {7, "significance arithmetic", 0.0, significance_arithmetic},
        {8, "portfolio wealth-space correctness", 0.0, portfolio_wealth},
        {9, "end-to-end determinism", 0.0, [&] { return end_to_end(fixture_dir); }},
        {10, "dataset tier: 60-min grid sign and selection", 0.0, dataset_tier},
    };
    int failures = 0;
    for (const auto& cr : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = cr.fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (cr.budget_s > 0.0 && secs >= cr.budget_s && !o.skipped) {
            o.pass = false;
            o.detail += "; runtime " + std::to_string(secs) + " s exceeds " + std::to_string(cr.budget_s) + " s";
        }
        const char* tag = o.skipped ? "SKIP" : (o.pass ? "PASS" : "FAIL");
        if (!o.skipped && !o.pass) ++failures;
        std::printf("[%s] %2d %s: %s (%.2f s)\n", tag, cr.id, cr.name, o.detail.c_str(), secs);
    }
    std::fflush(stdout);
    return failures == 0 ? 0 : 1;
}
