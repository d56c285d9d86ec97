// Writes the bundled synthetic price fixture: hourly bars for three assets whose
// log prices follow a random walk with persistent drift regimes.

#include "wfo/market_data.hpp"
#include "wfo/rng.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>

namespace {

struct AssetSpec {
    const char* name;
    double start_price;
    double hourly_vol;
    double drift;
};

// Uniform in (0, 1) from the top 53 bits.
double uniform(wfo::StreamRng& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

double normal(wfo::StreamRng& rng) {
    const double u1 = uniform(rng);
    const double u2 = uniform(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic fixture generator"};
    std::filesystem::path out = "data/fixtures";
    std::size_t bars = 16000;
    std::size_t train_bars = 10000;
    std::uint64_t seed = 20180208;
    app.add_option("--out", out, "output directory");
    app.add_option("--bars", bars, "bars per asset");
    app.add_option("--train-bars", train_bars, "bars in the global training period");
    app.add_option("--seed", seed, "generator seed");
    CLI11_PARSE(app, argc, argv);

    const wfo::Timestamp start = 1518048000000;  // 2018-02-08T00:00:00Z
    const wfo::Timestamp hour = 60 * wfo::kMillisPerMinute;
    const AssetSpec assets[] = {{"BTC", 8000.0, 0.009, 0.0012},
                                {"ETH", 800.0, 0.011, 0.0014},
                                {"BNB", 10.0, 0.012, 0.0015}};

    std::filesystem::create_directories(out);
    for (std::size_t a = 0; a < std::size(assets); ++a) {
        const auto& spec = assets[a];
        wfo::StreamRng rng(seed, a);
        std::ofstream file(out / (std::string(spec.name) + ".csv"));
        file << "timestamp,price\n" << std::setprecision(10);
        double log_price = std::log(spec.start_price);
        double regime = 1.0;
        for (std::size_t i = 0; i < bars; ++i) {
            // regimes last ~300 bars on average
            if (uniform(rng) < 1.0 / 300.0) regime = uniform(rng) < 0.55 ? 1.0 : -1.0;
            log_price += regime * spec.drift * 0.5 + spec.hourly_vol * normal(rng);
            file << start + static_cast<wfo::Timestamp>(i) * hour << ',' << std::exp(log_price) << '\n';
        }
    }

    std::ofstream ini(out / "fixture.ini");
    ini << "# Synthetic hourly fixture.\n"
        << "[data]\nassets = BTC,ETH,BNB\ntrain_asset = BTC\n\n"
        << "[files]\nBTC = BTC.csv\nETH = ETH.csv\nBNB = BNB.csv\n\n"
        << "[period]\ntrain_start = " << start << "\ntrain_end = "
        << start + static_cast<wfo::Timestamp>(train_bars) * hour << "\nunseen_start = "
        << start + static_cast<wfo::Timestamp>(train_bars) * hour << "\nunseen_end = "
        << start + static_cast<wfo::Timestamp>(bars) * hour << "\n\n"
        << "[strategy]\nfrequency = 60\ntrain_days = 1,2,3,5,7,10,14,21,28\n"
        << "test_days = 1,2,3,5,7,10,14,21,28\nema_periods = 5,7,10,15,20,30,40,50,100,150,200\n"
        << "cost = 0.001\nstride = segment\nfinal_liquidation = false\n\n"
        << "[selection]\ntop_k = 2\n\n"
        << "[bootstrap]\niterations = 1000\nseed = 42\nalpha = 0.05\n\n"
        << "[costsweep]\nlevels = 0.0005,0.0007,0.001,0.002,0.003,0.004,0.005\n\n"
        << "[output]\ndir = out\n\n[run]\nthreads = 1\n";
    std::cout << "wrote " << bars << " bars x " << std::size(assets) << " assets to " << out << '\n';
    return 0;
}
