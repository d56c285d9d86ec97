#include "wfo/serialize.hpp"

#include "wfo/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

namespace wfo {

using nlohmann::ordered_json;

std::string format_number(double value) {
    if (std::isnan(value)) return {};
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return ec == std::errc() ? std::string(buf, ptr) : std::string{};
}

std::string format_number(const Metric& value) { return value ? format_number(*value) : std::string{}; }

namespace {

std::string format_fixed(double value) {
    char buf[400];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    return ec == std::errc() ? std::string(buf, ptr) : format_number(value);
}

}  // namespace

ordered_json metric_json(const Metric& value) {
    if (!value || std::isnan(*value)) return nullptr;
    return *value;
}

ordered_json to_json(const RunMetadata& meta) {
    return {{"engine_version", kEngineVersion},
            {"command", meta.command},
            {"config_hash", meta.config_hash},
            {"seed", meta.seed},
            {"prng", meta.prng}};
}

void write_metadata_csv(std::ostream& out, const RunMetadata& meta) {
    out << "# engine_version: " << kEngineVersion << '\n'
        << "# command: " << meta.command << '\n'
        << "# config_hash: " << meta.config_hash << '\n'
        << "# seed: " << meta.seed << '\n'
        << "# prng: " << meta.prng << '\n';
}

void write_equity_csv(std::ostream& out, const EquityCurve& curve) {
    out << "timestamp,cum_log_return\n";
    for (std::size_t i = 0; i < curve.size(); ++i)
        out << curve.timestamps[i] << ',' << format_number(curve.values[i]) << '\n';
}

EquityCurve read_equity_csv(std::istream& in) {
    EquityCurve curve;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header) {
            if (line != "timestamp,cum_log_return")
                throw ParseError(line_no, "expected header 'timestamp,cum_log_return'");
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        Timestamp ts = 0;
        double value = 0.0;
        const char* end = line.data() + line.size();
        auto r1 = std::from_chars(line.data(), line.data() + std::min(comma, line.size()), ts);
        if (comma == std::string::npos || r1.ec != std::errc() || r1.ptr != line.data() + comma)
            throw ParseError(line_no, "bad timestamp");
        auto r2 = std::from_chars(line.data() + comma + 1, end, value);
        if (r2.ec != std::errc() || r2.ptr != end) throw ParseError(line_no, "bad value");
        curve.timestamps.push_back(ts);
        curve.values.push_back(value);
    }
    if (!header) throw ParseError(line_no, "missing header");
    if (curve.values.empty()) throw ValidationError("equity curve has no points");
    return curve;
}

void write_returns_csv(std::ostream& out, const ReturnSeries& returns) {
    out << "timestamp,log_return\n";
    for (std::size_t i = 0; i < returns.size(); ++i)
        out << returns.timestamps[i] << ',' << format_number(returns.values[i]) << '\n';
}

void write_positions_csv(std::ostream& out, const PositionSeries& positions) {
    out << "timestamp,direction\n";
    for (std::size_t i = 0; i < positions.size(); ++i)
        out << positions.timestamps[i] << ',' << sign(positions.directions[i]) << '\n';
}

const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> columns = {
        "Annualized Mean Return", "Annualized Volatility", "Sharpe Ratio",
        "Information Ratio**",    "Max Drawdown",          "Sortino Ratio"};
    return columns;
}

namespace {

std::vector<Metric> report_values(const PerformanceReport& r) {
    return {r.ann_mean_return, r.ann_volatility, r.sharpe,
            r.information_ratio_xx, r.max_drawdown, r.sortino};
}

}  // namespace

void write_report_table_csv(std::ostream& out,
                            const std::vector<std::pair<std::string, PerformanceReport>>& rows) {
    out << "Description";
    for (const auto& c : report_columns()) out << ',' << c;
    out << ",Cumulative Log Return,Observations\n";
    for (const auto& [label, report] : rows) {
        out << label;
        for (const auto& v : report_values(report)) out << ',' << format_number(v);
        out << ',' << format_number(report.cumulative_log_return) << ',' << report.n_obs << '\n';
    }
}

ordered_json to_json(const PerformanceReport& report) {
    ordered_json j;
    const auto values = report_values(report);
    for (std::size_t i = 0; i < values.size(); ++i) j[report_columns()[i]] = metric_json(values[i]);
    j["Cumulative Log Return"] = report.cumulative_log_return;
    j["Observations"] = report.n_obs;
    j["n_year"] = report.n_year;
    return j;
}

void write_stats_header_csv(std::ostream& out) {
    out << "asset,freq_minutes,n,mean,sd,median,min,max,range,skew,kurtosis,jb_statistic,"
           "jb_p_value\n";
}

void write_stats_row_csv(std::ostream& out, const std::string& asset, int frequency_minutes,
                         const DescriptiveStats& s) {
    out << asset << ',' << frequency_minutes << ',' << s.n;
    for (double v : {s.mean, s.sd, s.median, s.min, s.max, s.range, s.skew, s.kurtosis,
                     s.jb_statistic, s.jb_p_value})
        out << ',' << format_number(v);
    out << '\n';
}

ordered_json to_json(const DescriptiveStats& s) {
    auto num = [](double v) { return metric_json(Metric{v}); };
    return {{"n", s.n},           {"mean", num(s.mean)},         {"sd", num(s.sd)},
            {"median", num(s.median)}, {"min", num(s.min)},      {"max", num(s.max)},
            {"range", num(s.range)},   {"skew", num(s.skew)},    {"kurtosis", num(s.kurtosis)},
            {"jb_statistic", num(s.jb_statistic)}, {"jb_p_value", num(s.jb_p_value)},
            {"degenerate", s.degenerate}};
}

void write_grid_matrix_csv(std::ostream& out, const SharpeGrid& grid) {
    out << "test_days\\train_days";
    for (int d : grid.train_axis) out << ',' << d;
    out << '\n';
    for (std::size_t r = 0; r < grid.rows(); ++r) {
        out << grid.test_axis[r];
        for (std::size_t c = 0; c < grid.cols(); ++c) out << ',' << format_number(grid.at(r, c));
        out << '\n';
    }
}

void write_grid_long_csv(std::ostream& out, const SharpeGrid& raw, const SharpeGrid& smoothed) {
    out << "train_days,test_days,sharpe,smoothed_sharpe\n";
    for (std::size_t r = 0; r < raw.rows(); ++r)
        for (std::size_t c = 0; c < raw.cols(); ++c)
            out << raw.train_axis[c] << ',' << raw.test_axis[r] << ','
                << format_number(raw.at(r, c)) << ',' << format_number(smoothed.at(r, c)) << '\n';
}

void write_grid_svg(std::ostream& out, const SharpeGrid& grid, const std::string& title,
                    const RunMetadata* meta) {
    constexpr int cell = 56;
    constexpr int margin = 70;
    const int width = margin + cell * static_cast<int>(grid.cols()) + 20;
    const int height = margin + cell * static_cast<int>(grid.rows()) + 50;
    double lo = 0.0;
    double hi = 0.0;
    for (const auto& v : grid.values) {
        if (!v) continue;
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
    }
    auto colour = [&](double v) {
        // white at zero, red for positive, blue for negative
        const double t = v >= 0 ? (hi > 0 ? v / hi : 0.0) : (lo < 0 ? v / lo : 0.0);
        const int fade = static_cast<int>(std::lround(255.0 * (1.0 - std::clamp(t, 0.0, 1.0))));
        char buf[16];
        if (v >= 0)
            std::snprintf(buf, sizeof buf, "#ff%02x%02x", fade, fade);
        else
            std::snprintf(buf, sizeof buf, "#%02x%02xff", fade, fade);
        return std::string(buf);
    };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    if (meta) {
        out << "<!--\n";
        write_metadata_csv(out, *meta);
        out << "-->\n";
    }
    out << "<text x=\"" << margin << "\" y=\"20\" font-size=\"13\">" << title << "</text>\n";
    for (std::size_t r = 0; r < grid.rows(); ++r) {
        const int y = 40 + cell * static_cast<int>(r);
        out << "<text x=\"" << margin - 8 << "\" y=\"" << y + cell / 2 + 4
            << "\" text-anchor=\"end\">" << grid.test_axis[r] << "</text>\n";
        for (std::size_t c = 0; c < grid.cols(); ++c) {
            const int x = margin + cell * static_cast<int>(c);
            const auto& v = grid.at(r, c);
            out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\""
                << cell << "\" fill=\"" << (v ? colour(*v) : std::string("#dddddd"))
                << "\" stroke=\"#ffffff\"/>\n";
            char label[32];
            if (v)
                std::snprintf(label, sizeof label, "%.3f", *v);
            else
                std::snprintf(label, sizeof label, "n/a");
            out << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
                << "\" text-anchor=\"middle\">" << label << "</text>\n";
        }
    }
    const int axis_y = 40 + cell * static_cast<int>(grid.rows()) + 16;
    for (std::size_t c = 0; c < grid.cols(); ++c)
        out << "<text x=\"" << margin + cell * static_cast<int>(c) + cell / 2 << "\" y=\"" << axis_y
            << "\" text-anchor=\"middle\">" << grid.train_axis[c] << "</text>\n";
    out << "<text x=\"" << margin << "\" y=\"" << axis_y + 20
        << "\">training days (columns) / testing days (rows)</text>\n";
    out << "</svg>\n";
}

ordered_json to_json(const WindowPair& window) {
    return {{"train_days", window.train_days}, {"test_days", window.test_days}};
}

ordered_json to_json(const WfRunResult& result) {
    ordered_json segments = ordered_json::array();
    for (const auto& s : result.per_segment) {
        ordered_json j = {{"index", s.index},
                          {"train_bars", {s.segment.train.begin, s.segment.train.end}},
                          {"test_bars", {s.segment.test.begin, s.segment.test.end}}};
        if (s.pair) {
            j["fast"] = s.pair->fast.n;
            j["slow"] = s.pair->slow.n;
        } else {
            j["fast"] = nullptr;
            j["slow"] = nullptr;
        }
        j["train_sharpe"] = metric_json(s.train_sharpe);
        j["test_sharpe"] = metric_json(s.test_sharpe);
        if (!s.error.empty()) j["error"] = s.error;
        segments.push_back(std::move(j));
    }
    return {{"window", to_json(result.window)},
            {"n_year", result.n_year},
            {"n_returns", result.wf_returns.size()},
            {"transactions", count_transactions(result.positions.directions, {}, result.window_starts)},
            {"total_sharpe", metric_json(result.total_sharpe)},
            {"segments", std::move(segments)}};
}

ordered_json to_json(const BootstrapResult& result) {
    ordered_json j = {{"method", to_string(result.method)},
                      {"iterations", result.iterations()},
                      {"seed", result.seed},
                      {"prng", result.prng},
                      {"original_sharpe", result.original_sharpe},
                      {"n_higher", result.n_higher},
                      {"significance_pct", result.significance_pct}};
    j["stats"] = result.stats ? to_json(*result.stats) : ordered_json(nullptr);
    j["warnings"] = result.warnings;
    return j;
}

void write_iterations_csv(std::ostream& out, const BootstrapResult& result) {
    out << "iteration,sharpe\n";
    for (std::size_t i = 0; i < result.iteration_sharpes.size(); ++i)
        out << i << ',' << format_number(result.iteration_sharpes[i]) << '\n';
}

void write_cost_sweep_csv(std::ostream& out, const CostSweep& sweep) {
    out << "Cost";
    for (const auto& c : report_columns()) out << ',' << c;
    out << ",Transactions\n";
    for (std::size_t i = 0; i < sweep.levels.size(); ++i) {
        out << format_fixed(sweep.levels[i]);
        for (const auto& v : report_values(sweep.reports[i])) out << ',' << format_number(v);
        out << ',' << sweep.transactions << '\n';
    }
}

ordered_json to_json(const CostSweep& sweep) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < sweep.levels.size(); ++i) {
        auto j = to_json(sweep.reports[i]);
        j["Cost"] = sweep.levels[i];
        rows.push_back(std::move(j));
    }
    return {{"transactions", sweep.transactions},
            {"breakeven_estimate", metric_json(sweep.breakeven_estimate)},
            {"levels", std::move(rows)}};
}

}  // namespace wfo
