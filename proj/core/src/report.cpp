#include "mixamp/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

#include "mixamp/error.hpp"

namespace mixamp::bench {

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

template <class Row, class Writer>
void write_rows(std::ostream& os, const char* header, std::span<const Row> rows, Writer&& write_row) {
    os << header << '\n';
    for (const Row& r : rows) {
        write_row(r);
        os << '\n';
    }
}

template <class Rows>
void emit_to(const Rows& rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_csv(out, rows);
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_real(std::string_view s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError("malformed number '" + std::string(s) + "' in CSV");
    return v;
}

template <class T>
T parse_uint(std::string_view s) {
    T v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError("malformed integer '" + std::string(s) + "' in CSV");
    return v;
}

template <class Row, class Build>
std::vector<Row> parse_rows(std::istream& is, const char* header, Build&& build) {
    std::string line;
    if (!std::getline(is, line) || line != header) throw ConfigError("CSV header mismatch");
    const std::size_t columns = split(header).size();
    std::vector<Row> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != columns) throw ConfigError("CSV row has the wrong number of fields: " + line);
        rows.push_back(build(f));
    }
    return rows;
}

}  // namespace

void write_csv(std::ostream& os, std::span<const ScalarRow> rows) {
    write_rows(os, kScalarCsvHeader, rows, [&](const ScalarRow& r) {
        os << r.model << ',' << r.n << ',' << r.trials << ',' << r.seed << ',' << r.method << ','
           << format_real(r.mse) << ',' << format_real(r.mmse) << ',' << format_real(r.excess_mse) << ','
           << format_real(r.stderr_mse);
    });
}

void write_csv(std::ostream& os, std::span<const AmpRow> rows) {
    write_rows(os, kAmpCsvHeader, rows, [&](const AmpRow& r) {
        os << r.model << ',' << r.n << ',' << r.m << ',' << format_real(r.snr_db) << ',' << format_real(r.theta) << ','
           << format_real(r.mu) << ',' << format_real(r.sigma_x2) << ',' << r.denoiser << ',' << r.trials << ','
           << r.seed << ',' << format_real(r.mse) << ',' << format_real(r.sdr_db) << ',' << format_real(r.se_mmse)
           << ',' << format_real(r.se_sdr_db) << ',' << format_real(r.mean_iters) << ',' << r.diverged_count;
    });
}

void write_csv(std::ostream& os, std::span<const SeRow> rows) {
    write_rows(os, kSeCsvHeader, rows, [&](const SeRow& r) {
        os << r.model << ',' << r.n << ',' << r.m << ',' << format_real(r.delta) << ',' << format_real(r.snr_db) << ','
           << format_real(r.sigma_z2) << ',' << format_real(r.sigma_inf2) << ',' << format_real(r.mmse) << ','
           << format_real(r.sdr_db) << ',' << r.iterations;
    });
}

void emit_csv(std::span<const ScalarRow> rows, const std::filesystem::path& path) { emit_to(rows, path); }
void emit_csv(std::span<const AmpRow> rows, const std::filesystem::path& path) { emit_to(rows, path); }
void emit_csv(std::span<const SeRow> rows, const std::filesystem::path& path) { emit_to(rows, path); }

std::vector<ScalarRow> parse_scalar_csv(std::istream& is) {
    return parse_rows<ScalarRow>(is, kScalarCsvHeader, [](const auto& f) {
        return ScalarRow{std::string(f[0]), parse_uint<std::size_t>(f[1]), parse_uint<std::size_t>(f[2]),
                         parse_uint<std::uint64_t>(f[3]), std::string(f[4]), parse_real(f[5]),
                         parse_real(f[6]), parse_real(f[7]), parse_real(f[8])};
    });
}

std::vector<AmpRow> parse_amp_csv(std::istream& is) {
    return parse_rows<AmpRow>(is, kAmpCsvHeader, [](const auto& f) {
        return AmpRow{std::string(f[0]), parse_uint<std::size_t>(f[1]), parse_uint<std::size_t>(f[2]),
                      parse_real(f[3]), parse_real(f[4]), parse_real(f[5]), parse_real(f[6]), std::string(f[7]),
                      parse_uint<std::size_t>(f[8]), parse_uint<std::uint64_t>(f[9]), parse_real(f[10]),
                      parse_real(f[11]), parse_real(f[12]), parse_real(f[13]), parse_real(f[14]),
                      parse_uint<std::size_t>(f[15])};
    });
}

std::vector<SeRow> parse_se_csv(std::istream& is) {
    return parse_rows<SeRow>(is, kSeCsvHeader, [](const auto& f) {
        return SeRow{std::string(f[0]), parse_uint<std::size_t>(f[1]), parse_uint<std::size_t>(f[2]),
                     parse_real(f[3]), parse_real(f[4]), parse_real(f[5]), parse_real(f[6]), parse_real(f[7]),
                     parse_real(f[8]), parse_uint<std::size_t>(f[9])};
    });
}

// ---------------------------------------------------------------------------
// SVG

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fixed(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

std::string tick_label(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
    return std::string(buf, res.ptr);
}

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_svg(std::ostream& os, const ChartSpec& chart, std::span<const Series> series) {
    auto tx = [&](double x) { return chart.log_x ? std::log10(x) : x; };
    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
    for (const Series& s : series)
        for (auto [x, y] : s.points) {
            if (!std::isfinite(y) || (chart.log_x && !(x > 0))) continue;
            x_lo = std::min(x_lo, tx(x));
            x_hi = std::max(x_hi, tx(x));
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    if (!(x_lo <= x_hi)) x_lo = 0, x_hi = 1;
    if (!(y_lo <= y_hi)) y_lo = 0, y_hi = 1;
    if (x_hi == x_lo) x_lo -= 0.5, x_hi += 0.5;
    if (y_hi == y_lo) y_lo -= 0.5, y_hi += 0.5;
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (tx(x) - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << fixed(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(chart.title) << "</text>\n";
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    constexpr int kTicks = 5;
    for (int k = 0; k <= kTicks; ++k) {
        const double fx = x_lo + (x_hi - x_lo) * k / kTicks;
        const double xv = chart.log_x ? std::pow(10.0, fx) : fx;
        const double sx = kLeft + plot_w * k / kTicks;
        os << "<text x=\"" << fixed(sx) << "\" y=\"" << fixed(kTop + plot_h + 16)
           << "\" text-anchor=\"middle\" font-size=\"10\">" << tick_label(xv) << "</text>\n";
        const double yv = y_lo + (y_hi - y_lo) * k / kTicks;
        os << "<text x=\"" << fixed(kLeft - 6) << "\" y=\"" << fixed(py(yv) + 3)
           << "\" text-anchor=\"end\" font-size=\"10\">" << tick_label(yv) << "</text>\n";
    }
    os << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"" << fixed(kHeight - 12)
       << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(chart.x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << fixed(kTop + plot_h / 2) << "\" text-anchor=\"middle\" font-size=\"12\" "
       << "transform=\"rotate(-90 16 " << fixed(kTop + plot_h / 2) << ")\">" << escape(chart.y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        const char* colour = kPalette[k % std::size(kPalette)];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (auto [x, y] : s.points) {
            if (!std::isfinite(y) || (chart.log_x && !(x > 0))) continue;
            os << (first ? "" : " ") << fixed(px(x)) << ',' << fixed(py(y));
            first = false;
        }
        os << "\"/>\n";
        for (auto [x, y] : s.points) {
            if (!std::isfinite(y) || (chart.log_x && !(x > 0))) continue;
            os << "<circle cx=\"" << fixed(px(x)) << "\" cy=\"" << fixed(py(y)) << "\" r=\"3\" fill=\"" << colour
               << "\"/>\n";
        }
        const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
        os << "<line x1=\"" << fixed(kWidth - kRight + 12) << "\" y1=\"" << fixed(ly) << "\" x2=\""
           << fixed(kWidth - kRight + 32) << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << colour
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << fixed(kWidth - kRight + 38) << "\" y=\"" << fixed(ly + 4) << "\" font-size=\"11\">"
           << escape(s.name) << "</text>\n";
    }
    os << "</svg>\n";
}

namespace {

Series& series_named(std::vector<Series>& all, const std::string& name) {
    for (Series& s : all)
        if (s.name == name) return s;
    all.push_back({name, {}});
    return all.back();
}

template <class Rows>
void emit_svg_to(const Rows& rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_svg(out, rows);
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

void write_svg(std::ostream& os, std::span<const ScalarRow> rows) {
    std::vector<Series> series;
    for (const ScalarRow& r : rows) series_named(series, r.method).points.emplace_back(double(r.n), r.excess_mse);
    const std::string model = rows.empty() ? std::string() : rows.front().model;
    write_svg(os, {"Excess MSE over MMSE (" + model + ")", "N", "MSE - MMSE", true}, series);
}

void write_svg(std::ostream& os, std::span<const AmpRow> rows) {
    std::vector<Series> series;
    std::map<std::size_t, double> reference;
    for (const AmpRow& r : rows) {
        series_named(series, "AMP-" + r.denoiser).points.emplace_back(double(r.m), r.sdr_db);
        reference.emplace(r.m, r.se_sdr_db);
    }
    Series se{"SE (MMSE)", {}};
    for (auto [m, v] : reference) se.points.emplace_back(double(m), v);
    series.push_back(std::move(se));
    const std::string model = rows.empty() ? std::string() : rows.front().model;
    write_svg(os, {"SDR vs measurements (" + model + ")", "M", "SDR (dB)", false}, series);
}

void emit_svg(std::span<const ScalarRow> rows, const std::filesystem::path& path) { emit_svg_to(rows, path); }
void emit_svg(std::span<const AmpRow> rows, const std::filesystem::path& path) { emit_svg_to(rows, path); }

}  // namespace mixamp::bench
