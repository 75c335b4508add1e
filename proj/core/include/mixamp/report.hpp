#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixamp/bench.hpp"

namespace mixamp::bench {

/// File could not be opened or written; message includes the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kScalarCsvHeader = "model,n,trials,seed,method,mse,mmse,excess_mse,stderr";
inline constexpr const char* kAmpCsvHeader =
    "model,n,m,snr_db,theta,mu,sigma_x2,denoiser,trials,seed,mse,sdr_db,se_mmse,se_sdr_db,mean_iters,diverged_count";
inline constexpr const char* kSeCsvHeader = "model,n,m,delta,snr_db,sigma_z2,sigma_inf2,mmse,sdr_db,iterations";

/// Reals are printed with 17 significant digits, which round-trips doubles,
/// independent of the global locale.
std::string format_real(double v);

void write_csv(std::ostream& os, std::span<const ScalarRow> rows);
void write_csv(std::ostream& os, std::span<const AmpRow> rows);
void write_csv(std::ostream& os, std::span<const SeRow> rows);

void emit_csv(std::span<const ScalarRow> rows, const std::filesystem::path& path);
void emit_csv(std::span<const AmpRow> rows, const std::filesystem::path& path);
void emit_csv(std::span<const SeRow> rows, const std::filesystem::path& path);

/// Parsers for the formats above; throw ConfigError on malformed input.
std::vector<ScalarRow> parse_scalar_csv(std::istream& is);
std::vector<AmpRow> parse_amp_csv(std::istream& is);
std::vector<SeRow> parse_se_csv(std::istream& is);

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
};

/// Self-contained SVG line chart: one polyline plus point markers per series, and a legend.
void write_svg(std::ostream& os, const ChartSpec& chart, std::span<const Series> series);

/// Excess MSE against N (log axis), one series per method.
void write_svg(std::ostream& os, std::span<const ScalarRow> rows);
/// SDR against M (linear axes), one series per denoiser plus the state-evolution reference.
void write_svg(std::ostream& os, std::span<const AmpRow> rows);

void emit_svg(std::span<const ScalarRow> rows, const std::filesystem::path& path);
void emit_svg(std::span<const AmpRow> rows, const std::filesystem::path& path);

}  // namespace mixamp::bench
