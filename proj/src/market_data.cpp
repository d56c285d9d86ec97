#include "wfo/market_data.hpp"

#include "wfo/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace wfo {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        auto comma = line.find(',', pos);
        out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

template <typename T>
bool parse_number(std::string_view field, T& value) {
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    return ec == std::errc() && ptr == field.data() + field.size();
}

std::vector<Gap> find_gaps(std::span<const PriceBar> bars, Timestamp step) {
    std::vector<Gap> gaps;
    for (std::size_t i = 1; i < bars.size(); ++i) {
        const Timestamp diff = bars[i].timestamp - bars[i - 1].timestamp;
        if (diff > step) {
            gaps.push_back({bars[i - 1].timestamp, bars[i].timestamp, diff / step - 1});
        }
    }
    return gaps;
}

}  // namespace

bool is_supported_frequency(int minutes) noexcept {
    return std::find(std::begin(kSupportedFrequencies), std::end(kSupportedFrequencies), minutes) !=
           std::end(kSupportedFrequencies);
}

double annualization_factor(int frequency_minutes) {
    if (frequency_minutes <= 0) throw std::invalid_argument("frequency must be positive");
    return kMinutesPerYear / frequency_minutes;
}

std::size_t bars_per_day(int frequency_minutes) {
    if (frequency_minutes <= 0 || 1440 % frequency_minutes != 0)
        throw std::invalid_argument("frequency must divide 1440 minutes");
    return static_cast<std::size_t>(1440 / frequency_minutes);
}

std::vector<double> PriceSeries::prices() const {
    std::vector<double> out(bars.size());
    std::transform(bars.begin(), bars.end(), out.begin(), [](const PriceBar& b) { return b.price; });
    return out;
}

std::vector<Timestamp> PriceSeries::timestamps() const {
    std::vector<Timestamp> out(bars.size());
    std::transform(bars.begin(), bars.end(), out.begin(),
                   [](const PriceBar& b) { return b.timestamp; });
    return out;
}

PriceSeries make_series(std::string asset_id, int frequency_minutes, std::vector<PriceBar> bars) {
    if (!is_supported_frequency(frequency_minutes))
        throw ValidationError("unsupported frequency: " + std::to_string(frequency_minutes) + " min");
    if (bars.size() < 2) throw ValidationError("a price series needs at least 2 bars");
    const Timestamp step = frequency_minutes * kMillisPerMinute;
    for (std::size_t i = 0; i < bars.size(); ++i) {
        if (!(bars[i].price > 0.0) || !std::isfinite(bars[i].price))
            throw ValidationError("non-positive price at timestamp " +
                                  std::to_string(bars[i].timestamp));
        if (i == 0) continue;
        const Timestamp diff = bars[i].timestamp - bars[i - 1].timestamp;
        if (diff <= 0)
            throw ValidationError("timestamps not strictly increasing at " +
                                  std::to_string(bars[i].timestamp));
        if (diff % step != 0)
            throw ValidationError("timestamp " + std::to_string(bars[i].timestamp) +
                                  " is off the " + std::to_string(frequency_minutes) +
                                  "-minute grid");
    }
    PriceSeries series;
    series.asset_id = std::move(asset_id);
    series.frequency_minutes = frequency_minutes;
    series.gaps = find_gaps(bars, step);
    series.bars = std::move(bars);
    return series;
}

PriceSeries parse_prices(std::istream& in, std::string asset_id) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t ts_col = 0;
    std::size_t price_col = 0;
    std::size_t n_cols = 0;
    bool have_header = false;
    std::vector<PriceBar> bars;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        if (view.empty() || view.front() == '#') continue;
        auto fields = split_commas(view);
        if (!have_header) {
            std::vector<std::string> names;
            for (auto f : fields) names.push_back(lower(f));
            auto find = [&](std::string_view name) {
                return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) -
                                                names.begin());
            };
            ts_col = find("timestamp");
            price_col = find("close");
            if (price_col == names.size()) price_col = find("price");
            if (ts_col == names.size() || price_col == names.size())
                throw ParseError(line_no,
                                 "header must be 'timestamp,price' or "
                                 "'timestamp,open,high,low,close,volume'");
            n_cols = names.size();
            have_header = true;
            continue;
        }
        if (fields.size() != n_cols)
            throw ParseError(line_no, "expected " + std::to_string(n_cols) + " fields, got " +
                                          std::to_string(fields.size()));
        PriceBar bar;
        if (!parse_number(fields[ts_col], bar.timestamp))
            throw ParseError(line_no, "bad timestamp '" + std::string(fields[ts_col]) + "'");
        if (!parse_number(fields[price_col], bar.price) || !std::isfinite(bar.price))
            throw ParseError(line_no, "bad price '" + std::string(fields[price_col]) + "'");
        if (!(bar.price > 0.0))
            throw ValidationError("line " + std::to_string(line_no) + ": non-positive price " +
                                  std::string(fields[price_col]));
        bars.push_back(bar);
    }
    if (!have_header) throw ParseError(line_no, "missing header");
    if (bars.size() < 2) throw ValidationError("a price series needs at least 2 bars");

    {
        std::vector<Timestamp> sorted(bars.size());
        std::transform(bars.begin(), bars.end(), sorted.begin(),
                       [](const PriceBar& b) { return b.timestamp; });
        std::sort(sorted.begin(), sorted.end());
        auto dup = std::adjacent_find(sorted.begin(), sorted.end());
        if (dup != sorted.end())
            throw ValidationError("duplicate timestamp " + std::to_string(*dup));
    }
    for (std::size_t i = 1; i < bars.size(); ++i) {
        if (bars[i].timestamp < bars[i - 1].timestamp)
            throw ValidationError("rows not sorted by timestamp at " +
                                  std::to_string(bars[i].timestamp));
    }

    Timestamp spacing = 0;
    for (std::size_t i = 1; i < bars.size(); ++i)
        spacing = std::gcd(spacing, bars[i].timestamp - bars[i - 1].timestamp);
    if (spacing % kMillisPerMinute != 0 ||
        !is_supported_frequency(static_cast<int>(spacing / kMillisPerMinute)))
        throw ValidationError("bar spacing of " + std::to_string(spacing) +
                              " ms is not a supported frequency");
    return make_series(std::move(asset_id), static_cast<int>(spacing / kMillisPerMinute),
                       std::move(bars));
}

PriceSeries load_prices(const std::filesystem::path& path, std::string asset_id) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open price file " + path.string());
    return parse_prices(in, std::move(asset_id));
}

PriceSeries resample(const PriceSeries& series, int target_minutes) {
    if (!is_supported_frequency(target_minutes))
        throw std::invalid_argument("unsupported target frequency: " +
                                    std::to_string(target_minutes));
    if (target_minutes % series.frequency_minutes != 0)
        throw std::invalid_argument("target frequency " + std::to_string(target_minutes) +
                                    " is not a multiple of " +
                                    std::to_string(series.frequency_minutes));
    if (target_minutes == series.frequency_minutes) return series;

    const Timestamp width = target_minutes * kMillisPerMinute;
    auto window_of = [width](Timestamp t) {
        Timestamp q = t / width;
        if (t % width < 0) --q;
        return q * width;
    };
    std::vector<PriceBar> out;
    for (const auto& bar : series.bars) {
        const Timestamp start = window_of(bar.timestamp);
        if (!out.empty() && out.back().timestamp == start) {
            out.back().price = bar.price;
        } else {
            out.push_back({start, bar.price});
        }
    }
    if (out.size() < 2)
        throw ValidationError("resampling " + series.asset_id + " to " +
                              std::to_string(target_minutes) + " min leaves fewer than 2 bars");
    return make_series(series.asset_id, target_minutes, std::move(out));
}

ReturnSeries log_returns(const PriceSeries& series) {
    if (series.size() < 2) throw std::invalid_argument("log returns need at least 2 prices");
    ReturnSeries out;
    out.frequency_minutes = series.frequency_minutes;
    out.timestamps.reserve(series.size() - 1);
    out.values.reserve(series.size() - 1);
    for (std::size_t i = 1; i < series.size(); ++i) {
        out.timestamps.push_back(series.bars[i].timestamp);
        out.values.push_back(std::log(series.bars[i].price) - std::log(series.bars[i - 1].price));
    }
    return out;
}

double chi_square2_survival(double x) noexcept {
    if (std::isnan(x)) return x;
    if (x <= 0.0) return 1.0;
    return std::exp(-0.5 * x);
}

DescriptiveStats descriptive_stats(std::span<const double> sample) {
    if (sample.size() < 8)
        throw std::invalid_argument("descriptive statistics need at least 8 observations");
    DescriptiveStats s;
    s.n = sample.size();
    const double n = static_cast<double>(s.n);
    s.mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;

    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double x : sample) {
        const double d = x - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    s.sd = std::sqrt(m2 / (n - 1.0));
    m2 /= n;
    m3 /= n;
    m4 /= n;

    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    s.range = s.max - s.min;
    const std::size_t mid = sorted.size() / 2;
    s.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

    if (m2 <= 0.0) {
        s.degenerate = true;
        s.skew = s.kurtosis = s.jb_statistic = s.jb_p_value =
            std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    s.skew = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2) - 3.0;
    s.jb_statistic = n / 6.0 * (s.skew * s.skew + 0.25 * s.kurtosis * s.kurtosis);
    s.jb_p_value = chi_square2_survival(s.jb_statistic);
    return s;
}

DescriptiveStats descriptive_stats(const ReturnSeries& returns) {
    return descriptive_stats(std::span<const double>(returns.values));
}

void validate(const PeriodSplit& split) {
    if (!(split.train_start < split.train_end && split.train_end <= split.unseen_start &&
          split.unseen_start < split.unseen_end))
        throw ValidationError(
            "period split must satisfy train_start < train_end <= unseen_start < unseen_end");
}

PriceSeries slice_time(const PriceSeries& series, Timestamp from, Timestamp to) {
    auto cmp = [](const PriceBar& b, Timestamp t) { return b.timestamp < t; };
    auto first = std::lower_bound(series.bars.begin(), series.bars.end(), from, cmp);
    auto last = std::lower_bound(first, series.bars.end(), to, cmp);
    PriceSeries out;
    out.asset_id = series.asset_id;
    out.frequency_minutes = series.frequency_minutes;
    out.bars.assign(first, last);
    out.gaps = find_gaps(out.bars, series.step_millis());
    return out;
}

std::pair<PriceSeries, PriceSeries> split_periods(const PriceSeries& series,
                                                  const PeriodSplit& split) {
    validate(split);
    if (series.empty()) throw ValidationError("cannot split an empty series");
    const Timestamp first = series.bars.front().timestamp;
    const Timestamp end = series.bars.back().timestamp + series.step_millis();
    if (split.train_start < first || split.unseen_end > end)
        throw ValidationError("period split [" + std::to_string(split.train_start) + ", " +
                              std::to_string(split.unseen_end) + ") exceeds series range [" +
                              std::to_string(first) + ", " + std::to_string(end) + ")");
    auto train = slice_time(series, split.train_start, split.train_end);
    auto unseen = slice_time(series, split.unseen_start, split.unseen_end);
    if (train.empty()) throw ValidationError("global training period contains no bars");
    if (unseen.empty()) throw ValidationError("unseen period contains no bars");
    return {std::move(train), std::move(unseen)};
}

void write_gaps_csv(std::ostream& out, std::span<const Gap> gaps) {
    out << "gap_start,gap_end,missing_bars\n";
    for (const auto& g : gaps) out << g.gap_start << ',' << g.gap_end << ',' << g.missing_bars << '\n';
}

}  // namespace wfo
