#include "wfo/cli/config.hpp"

#include "wfo/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wfo::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
    T value{};
    const std::string t = trim(text);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("invalid value for " + key + ": '" + text + "'");
    return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
    std::vector<T> out;
    for (const auto& item : split_list(text)) out.push_back(parse_value<T>(key, item));
    return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
    if (t == "false" || t == "no" || t == "0" || t == "off") return false;
    throw ConfigError("invalid boolean for " + key + ": '" + text + "'");
}

template <typename Fn>
void with(const pt::ptree& tree, const std::string& path, Fn&& fn) {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.')))
        fn(path, trim(*v));
}

std::string join(const auto& items) {
    std::ostringstream ss;
    bool first = true;
    for (const auto& i : items) {
        ss << (first ? "" : ",") << i;
        first = false;
    }
    return ss.str();
}

}  // namespace

Timestamp parse_time(const std::string& raw) {
    const std::string text = trim(raw);
    std::string_view digits = text;
    if (digits.starts_with('-')) digits.remove_prefix(1);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
        }))
        return parse_value<Timestamp>("timestamp", text);
    int y = 0;
    unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char tail = 0;
    const int n = std::sscanf(text.c_str(), "%d-%u-%u%*[T ]%u:%u:%u%c", &y, &mo, &d, &h, &mi, &s, &tail);
    const bool date_only = n == 3 && text.size() == 10;
    if (!(date_only || n == 5 || n == 6) || h > 23 || mi > 59 || s > 59)
        throw ConfigError("cannot parse time '" + raw + "' (use YYYY-MM-DD[THH:MM[:SS]] or epoch ms)");
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{mo},
                                          std::chrono::day{d}};
    if (!ymd.ok()) throw ConfigError("invalid calendar date '" + raw + "'");
    const auto tp = std::chrono::sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} +
                    std::chrono::seconds{s};
    return std::chrono::duration_cast<std::chrono::milliseconds>(tp.time_since_epoch()).count();
}

double RunConfig::annualization() const {
    return n_year ? *n_year : annualization_factor(frequency);
}

std::filesystem::path RunConfig::data_path(const std::string& asset) const {
    auto it = data_paths.find(asset);
    if (it == data_paths.end()) throw ConfigError("no data file configured for asset " + asset);
    return it->second.is_absolute() ? it->second : base_dir / it->second;
}

std::string RunConfig::canonical() const {
    std::ostringstream ss;
    ss << "assets=" << join(assets) << "\ntrain_asset=" << train_asset << '\n';
    for (const auto& [asset, path] : data_paths) ss << "data." << asset << '=' << path.string() << '\n';
    ss << "split=" << split.train_start << ',' << split.train_end << ',' << split.unseen_start << ','
       << split.unseen_end << "\nfrequency=" << frequency << "\ntrain_days=" << join(train_axis)
       << "\ntest_days=" << join(test_axis) << "\nema_periods=" << join(ema_periods);
    char buf[64];
    auto num = [&](double v) {
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, p);
    };
    ss << "\ncost=" << num(cost) << "\nstride=" << (stride == Stride::Segment ? "segment" : "test")
       << "\nfinal_liquidation=" << final_liquidation
       << "\nn_year=" << (n_year ? num(*n_year) : std::string("auto")) << "\ntop_k=" << top_k
       << "\niterations=" << bootstrap_iterations << "\nseed=" << seed << "\nalpha=" << num(alpha)
       << "\ncost_levels=";
    for (std::size_t i = 0; i < cost_levels.size(); ++i) ss << (i ? "," : "") << num(cost_levels[i]);
    ss << '\n';
    return ss.str();
}

std::string RunConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    RunConfig c;
    c.base_dir = base_dir;

    with(tree, "data.assets", [&](auto&, const auto& v) { c.assets = split_list(v); });
    with(tree, "data.train_asset", [&](auto&, const auto& v) { c.train_asset = v; });
    if (auto files = tree.get_child_optional("files")) {
        for (const auto& [asset, node] : *files) c.data_paths[asset] = trim(node.data());
    }

    with(tree, "period.train_start", [&](auto&, const auto& v) { c.split.train_start = parse_time(v); });
    with(tree, "period.train_end", [&](auto&, const auto& v) { c.split.train_end = parse_time(v); });
    with(tree, "period.unseen_start", [&](auto&, const auto& v) { c.split.unseen_start = parse_time(v); });
    with(tree, "period.unseen_end", [&](auto&, const auto& v) { c.split.unseen_end = parse_time(v); });

    with(tree, "strategy.frequency", [&](auto& k, const auto& v) { c.frequency = parse_value<int>(k, v); });
    with(tree, "strategy.train_days", [&](auto& k, const auto& v) { c.train_axis = parse_list<int>(k, v); });
    with(tree, "strategy.test_days", [&](auto& k, const auto& v) { c.test_axis = parse_list<int>(k, v); });
    with(tree, "strategy.ema_periods", [&](auto& k, const auto& v) { c.ema_periods = parse_list<int>(k, v); });
    with(tree, "strategy.cost", [&](auto& k, const auto& v) { c.cost = parse_value<double>(k, v); });
    with(tree, "strategy.stride", [&](auto& k, const auto& v) {
        if (v == "segment")
            c.stride = Stride::Segment;
        else if (v == "test")
            c.stride = Stride::Test;
        else
            throw ConfigError("invalid value for " + k + ": '" + v + "' (segment|test)");
    });
    with(tree, "strategy.final_liquidation",
         [&](auto& k, const auto& v) { c.final_liquidation = parse_bool(k, v); });
    with(tree, "strategy.n_year", [&](auto& k, const auto& v) {
        if (!v.empty() && v != "auto") c.n_year = parse_value<double>(k, v);
    });

    with(tree, "selection.top_k", [&](auto& k, const auto& v) { c.top_k = parse_value<std::size_t>(k, v); });
    with(tree, "bootstrap.iterations",
         [&](auto& k, const auto& v) { c.bootstrap_iterations = parse_value<std::size_t>(k, v); });
    with(tree, "bootstrap.seed", [&](auto& k, const auto& v) { c.seed = parse_value<std::uint64_t>(k, v); });
    with(tree, "bootstrap.alpha", [&](auto& k, const auto& v) { c.alpha = parse_value<double>(k, v); });
    with(tree, "costsweep.levels",
         [&](auto& k, const auto& v) { c.cost_levels = parse_list<double>(k, v); });
    with(tree, "output.dir", [&](auto&, const auto& v) {
        const std::filesystem::path p(v);
        c.output_dir = p.is_absolute() ? p : base_dir / p;
    });
    with(tree, "run.threads", [&](auto& k, const auto& v) { c.threads = parse_value<unsigned>(k, v); });

    if (c.train_asset.empty() && !c.assets.empty()) c.train_asset = c.assets.front();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    auto base = path.parent_path();
    if (base.empty()) base = ".";
    auto config = parse_config(in, base);
    if (config.output_dir == "out") config.output_dir = base / "out";
    return config;
}

void validate(const RunConfig& c) {
    if (c.assets.empty()) throw ConfigError("data.assets is empty");
    if (std::find(c.assets.begin(), c.assets.end(), c.train_asset) == c.assets.end())
        throw ConfigError("train_asset '" + c.train_asset + "' is not listed in data.assets");
    for (const auto& asset : c.assets) {
        const auto path = c.data_path(asset);
        if (!std::filesystem::exists(path))
            throw ConfigError("data file for " + asset + " does not exist: " + path.string());
    }
    try {
        wfo::validate(c.split);
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
    if (!is_supported_frequency(c.frequency))
        throw ConfigError("strategy.frequency must be one of 1,5,10,15,30,60");
    if (c.train_axis.empty() || c.test_axis.empty()) throw ConfigError("window set is empty");
    for (int d : c.train_axis)
        if (d <= 0) throw ConfigError("train_days must be positive");
    for (int d : c.test_axis)
        if (d <= 0) throw ConfigError("test_days must be positive");
    if (c.ema_periods.empty()) throw ConfigError("EMA universe is empty");
    const bool has_fast = std::any_of(c.ema_periods.begin(), c.ema_periods.end(),
                                      [](int p) { return p >= 1 && p <= kSlowPeriodThreshold; });
    const bool has_slow = std::any_of(c.ema_periods.begin(), c.ema_periods.end(),
                                      [](int p) { return p > kSlowPeriodThreshold; });
    if (!has_fast || !has_slow) throw ConfigError("EMA universe needs at least one fast and one slow period");
    if (!(c.cost >= 0.0 && c.cost < 1.0)) throw ConfigError("cost must lie in [0, 1)");
    if (c.n_year && !(*c.n_year > 0.0)) throw ConfigError("n_year must be positive");
    if (c.top_k < 1) throw ConfigError("top_k must be at least 1");
    if (c.bootstrap_iterations < 1) throw ConfigError("bootstrap.iterations must be at least 1");
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("bootstrap.alpha must lie in (0, 1)");
    if (c.cost_levels.empty()) throw ConfigError("costsweep.levels is empty");
    for (std::size_t i = 0; i < c.cost_levels.size(); ++i) {
        if (!(c.cost_levels[i] >= 0.0 && c.cost_levels[i] < 1.0))
            throw ConfigError("cost levels must lie in [0, 1)");
        if (i > 0 && !(c.cost_levels[i] > c.cost_levels[i - 1]))
            throw ConfigError("cost levels must be strictly increasing");
    }
    if (c.threads < 1) throw ConfigError("threads must be at least 1");
}

}  // namespace wfo::cli
