#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "timeo1/io.hpp"
#include "timeo1/matrix.hpp"

namespace timeo1 {

/// Multivariate series in file order. Timestamps are optional; when present
/// they must be strictly increasing (row order stays authoritative either
/// way, gaps are not imputed).
struct SeriesFrame {
    std::vector<std::string> timestamps;  // empty when the CSV has no date column
    Matrix values;                        // N x D
    std::vector<std::string> names;       // length D

    std::size_t length() const { return values.rows(); }
    std::size_t variates() const { return values.cols(); }
};

namespace detail {

inline double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    if (cell.empty())
        throw IngestionError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                             ": empty cell");
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value))
        throw IngestionError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                             ": cannot parse '" + cell + "' as a finite number");
    return value;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline bool iequals(const std::string& a, const char* b) {
    std::size_t i = 0;
    for (; i < a.size() && b[i] != '\0'; ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return i == a.size() && b[i] == '\0';
}

}  // namespace detail

/// Load an ETT-style CSV: header row, optional leading "date" column, numeric
/// values elsewhere. Errors carry 1-based file row numbers.
inline SeriesFrame load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw IngestionError(path.string() + ": missing header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header = detail::split_csv_line(line);
    if (header.empty()) throw IngestionError(path.string() + ": empty header row");
    const bool has_date = detail::iequals(header.front(), "date");
    const std::size_t first_value_col = has_date ? 1 : 0;
    const std::size_t d = header.size() - first_value_col;
    if (d == 0) throw IngestionError(path.string() + ": no value columns");

    SeriesFrame frame;
    frame.names.assign(header.begin() + static_cast<std::ptrdiff_t>(first_value_col),
                       header.end());
    std::vector<double> data;
    std::size_t row = 1;  // header was row 1
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells = detail::split_csv_line(line);
        if (cells.size() != header.size())
            throw IngestionError("row " + std::to_string(row) + ": expected " +
                                 std::to_string(header.size()) + " cells, got " +
                                 std::to_string(cells.size()));
        if (has_date) {
            if (!frame.timestamps.empty() && cells[0] <= frame.timestamps.back())
                throw IngestionError("row " + std::to_string(row) +
                                     ": timestamps must be strictly increasing");
            frame.timestamps.push_back(cells[0]);
        }
        for (std::size_t c = first_value_col; c < cells.size(); ++c)
            data.push_back(detail::parse_cell(cells[c], row, c + 1));
    }
    const std::size_t n = data.size() / d;
    frame.values = Matrix(n, d, std::move(data));
    return frame;
}

/// Mirror of load_csv. Values are written with shortest round-trip precision,
/// so save/load is lossless.
inline void save_csv(const SeriesFrame& frame, const std::filesystem::path& path) {
    std::ostringstream out;
    const bool has_date = !frame.timestamps.empty();
    if (has_date) out << "date";
    for (std::size_t c = 0; c < frame.names.size(); ++c) {
        if (has_date || c > 0) out << ',';
        out << frame.names[c];
    }
    out << '\n';
    for (std::size_t r = 0; r < frame.length(); ++r) {
        if (has_date) out << frame.timestamps[r];
        for (std::size_t c = 0; c < frame.variates(); ++c) {
            if (has_date || c > 0) out << ',';
            out << detail::format_double(frame.values(r, c));
        }
        out << '\n';
    }
    atomic_write_text(path, out.str());
}

/// Autoregressive generator spec. The AR polynomial must be stationary
/// (checked by the Schur-Cohn recursion at construction time).
struct SynthSpec {
    std::vector<double> phi;  // AR coefficients phi_1..phi_p
    double noise_std = 1.0;
    std::size_t length = 10000;
    std::size_t variates = 1;
    std::uint64_t seed = 0;
};

namespace detail {

// All roots of z^p - phi_1 z^{p-1} - ... - phi_p inside the unit circle iff
// every reflection coefficient of the monic polynomial has magnitude < 1.
inline bool ar_is_stationary(const std::vector<double>& phi) {
    std::vector<double> a(phi.size() + 1);
    a[0] = 1.0;
    for (std::size_t i = 0; i < phi.size(); ++i) a[i + 1] = -phi[i];
    for (std::size_t p = phi.size(); p >= 1; --p) {
        const double k = a[p];
        if (!(std::abs(k) < 1.0)) return false;
        const double den = 1.0 - k * k;
        std::vector<double> next(p);
        for (std::size_t i = 0; i < p; ++i) next[i] = (a[i] - k * a[p - i]) / den;
        a = std::move(next);
    }
    return true;
}

// Box-Muller without caching; deterministic across standard libraries.
inline double gaussian(std::mt19937_64& rng) {
    const double u1 =
        (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);  // (0,1)
    const double u2 = static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline std::string hourly_timestamp(std::size_t index) {
    // hourly grid from 2020-01-01 00:00:00 UTC
    std::time_t t = 1577836800 + static_cast<std::time_t>(index) * 3600;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[24];
    std::strftime(buf, sizeof(buf), "%Y-%m-%d %H:%M:%S", &tm);
    return std::string(buf);
}

}  // namespace detail

/// x_t = sum_i phi_i x_{t-i} + eps_t with Gaussian noise; variates are
/// independent streams. A 500-step burn-in is discarded. Deterministic per
/// seed, with hourly ISO timestamps.
inline SeriesFrame synth_ar(const SynthSpec& spec) {
    if (spec.length == 0 || spec.variates == 0)
        throw ConfigError("synth_ar: length and variates must be positive");
    if (!(spec.noise_std > 0.0)) throw ConfigError("synth_ar: noise std must be positive");
    if (!detail::ar_is_stationary(spec.phi))
        throw ConfigError("synth_ar: AR coefficients are not stationary");

    constexpr std::size_t burn_in = 500;
    const std::size_t p = spec.phi.size();
    std::mt19937_64 rng(spec.seed);

    SeriesFrame frame;
    frame.values = Matrix(spec.length, spec.variates);
    std::vector<std::vector<double>> history(spec.variates, std::vector<double>(p, 0.0));
    for (std::size_t t = 0; t < burn_in + spec.length; ++t) {
        for (std::size_t d = 0; d < spec.variates; ++d) {
            double x = spec.noise_std * detail::gaussian(rng);
            for (std::size_t i = 0; i < p; ++i) x += spec.phi[i] * history[d][i];
            if (p > 0) {
                for (std::size_t i = p; i-- > 1;) history[d][i] = history[d][i - 1];
                history[d][0] = x;
            }
            if (t >= burn_in) frame.values(t - burn_in, d) = x;
        }
    }
    frame.timestamps.reserve(spec.length);
    for (std::size_t t = 0; t < spec.length; ++t)
        frame.timestamps.push_back(detail::hourly_timestamp(t));
    frame.names.reserve(spec.variates);
    for (std::size_t d = 0; d < spec.variates; ++d)
        frame.names.push_back("var_" + std::to_string(d + 1));
    return frame;
}

/// Contiguous chronological index ranges: train [0, train_end), validation
/// [train_end, val_end), test [val_end, test_end).
struct SplitBounds {
    std::size_t train_end = 0;
    std::size_t val_end = 0;
    std::size_t test_end = 0;
};

/// Prefix/middle/suffix split by ratios (default 0.7/0.1/0.2).
inline SplitBounds split_chronological(const SeriesFrame& frame, double train_ratio = 0.7,
                                       double val_ratio = 0.1, double test_ratio = 0.2) {
    if (!(train_ratio > 0.0) || !(val_ratio > 0.0) || !(test_ratio > 0.0))
        throw ConfigError("split_chronological: ratios must be positive");
    if (train_ratio + val_ratio + test_ratio > 1.0 + 1e-9)
        throw ConfigError("split_chronological: ratios sum to more than 1");
    const auto n = static_cast<double>(frame.length());
    SplitBounds b;
    b.train_end = static_cast<std::size_t>(n * train_ratio);
    b.val_end = static_cast<std::size_t>(n * (train_ratio + val_ratio));
    b.test_end = static_cast<std::size_t>(n * (train_ratio + val_ratio + test_ratio));
    return b;
}

/// ETT benchmark preset: 12 months train / 4 val / 4 test with 30-day months.
/// rows_per_day is 24 for the hourly subsets and 96 for the 15-minute ones.
inline SplitBounds split_ett(const SeriesFrame& frame, std::size_t rows_per_day) {
    const std::size_t month = 30 * rows_per_day;
    SplitBounds b{12 * month, 16 * month, 20 * month};
    if (frame.length() < b.test_end)
        throw DimensionError("split_ett: frame has " + std::to_string(frame.length()) +
                             " rows, preset needs " + std::to_string(b.test_end));
    return b;
}

enum class Split { Train, Val, Test };

inline const char* to_string(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::Test: return "test";
    }
    return "?";
}

inline Split split_from_string(const std::string& s) {
    if (s == "train") return Split::Train;
    if (s == "val") return Split::Val;
    if (s == "test") return Split::Test;
    throw ConfigError("unknown split: " + s);
}

/// Sliding windows over chronological splits. A window anchored at index n
/// has history rows [n-H+1, n] and label rows [n+1, n+T]; windows never cross
/// a split boundary. Standardization stats come from the train rows only and
/// are applied lazily when windows are read.
class WindowedDataset {
public:
    WindowedDataset(SeriesFrame frame, SplitBounds bounds, std::size_t lookback,
                    std::size_t horizon, std::size_t stride = 1)
        : frame_(std::move(frame)),
          bounds_(bounds),
          lookback_(lookback),
          horizon_(horizon),
          stride_(stride) {
        if (lookback_ == 0 || horizon_ == 0 || stride_ == 0)
            throw ConfigError("WindowedDataset: lookback, horizon, stride must be positive");
        if (bounds_.test_end > frame_.length() || bounds_.train_end > bounds_.val_end ||
            bounds_.val_end > bounds_.test_end)
            throw DimensionError("WindowedDataset: split bounds out of order or out of range");
        for (Split s : {Split::Train, Split::Val, Split::Test}) {
            auto [begin, end] = range(s);
            if (end - begin < lookback_ + horizon_)
                throw DimensionError(std::string("WindowedDataset: ") + to_string(s) +
                                     " split has " + std::to_string(end - begin) +
                                     " rows, needs at least " +
                                     std::to_string(lookback_ + horizon_));
        }
        Matrix train_rows(bounds_.train_end, frame_.variates());
        for (std::size_t r = 0; r < bounds_.train_end; ++r)
            for (std::size_t c = 0; c < frame_.variates(); ++c)
                train_rows(r, c) = frame_.values(r, c);
        stats_ = fit_stats(train_rows);
    }

    std::size_t lookback() const { return lookback_; }
    std::size_t horizon() const { return horizon_; }
    std::size_t stride() const { return stride_; }
    std::size_t variates() const { return frame_.variates(); }
    const ColumnStats& stats() const { return stats_; }
    const SplitBounds& bounds() const { return bounds_; }
    const SeriesFrame& frame() const { return frame_; }

    std::size_t window_count(Split s) const {
        auto [begin, end] = range(s);
        const std::size_t usable = end - begin - lookback_ - horizon_ + 1;
        return (usable + stride_ - 1) / stride_;
    }

    /// Standardized H x D history of window i.
    Matrix input_window(Split s, std::size_t i) const {
        const std::size_t n = anchor(s, i);
        Matrix w(lookback_, frame_.variates());
        for (std::size_t r = 0; r < lookback_; ++r)
            for (std::size_t c = 0; c < frame_.variates(); ++c)
                w(r, c) = std_value(n - lookback_ + 1 + r, c);
        return w;
    }

    /// Standardized T x D label of window i.
    Matrix label_window(Split s, std::size_t i) const {
        const std::size_t n = anchor(s, i);
        Matrix w(horizon_, frame_.variates());
        for (std::size_t r = 0; r < horizon_; ++r)
            for (std::size_t c = 0; c < frame_.variates(); ++c)
                w(r, c) = std_value(n + 1 + r, c);
        return w;
    }

    /// Largest label row index used by any window of the split.
    std::size_t max_label_index(Split s) const {
        return anchor(s, window_count(s) - 1) + horizon_;
    }

    /// Pooled label matrix: one row per (window, variate) pair in window-major,
    /// variate-minor order, standardized with train stats.
    Matrix label_matrix(Split s) const {
        const std::size_t count = window_count(s);
        if (count == 0) throw DimensionError("label_matrix: empty split");
        const std::size_t d = frame_.variates();
        Matrix out(count * d, horizon_);
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t n = anchor(s, i);
            for (std::size_t c = 0; c < d; ++c) {
                double* row = out.row_ptr(i * d + c);
                for (std::size_t t = 0; t < horizon_; ++t) row[t] = std_value(n + 1 + t, c);
            }
        }
        return out;
    }

    /// Per-variate label matrices, one count x T matrix per variate.
    std::vector<Matrix> label_matrices_per_variate(Split s) const {
        const std::size_t count = window_count(s);
        if (count == 0) throw DimensionError("label_matrices_per_variate: empty split");
        std::vector<Matrix> out;
        out.reserve(frame_.variates());
        for (std::size_t c = 0; c < frame_.variates(); ++c) {
            Matrix m(count, horizon_);
            for (std::size_t i = 0; i < count; ++i) {
                const std::size_t n = anchor(s, i);
                for (std::size_t t = 0; t < horizon_; ++t) m(i, t) = std_value(n + 1 + t, c);
            }
            out.push_back(std::move(m));
        }
        return out;
    }

    /// Flattened standardized histories: one row per (window, variate) pair,
    /// each repeating the window's full H x D history in row-major order.
    Matrix history_matrix(Split s) const {
        const std::size_t count = window_count(s);
        if (count == 0) throw DimensionError("history_matrix: empty split");
        const std::size_t d = frame_.variates();
        Matrix out(count * d, lookback_ * d);
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t n = anchor(s, i);
            for (std::size_t c = 0; c < d; ++c) {
                double* row = out.row_ptr(i * d + c);
                for (std::size_t r = 0; r < lookback_; ++r)
                    for (std::size_t cc = 0; cc < d; ++cc)
                        row[r * d + cc] = std_value(n - lookback_ + 1 + r, cc);
            }
        }
        return out;
    }

private:
    std::pair<std::size_t, std::size_t> range(Split s) const {
        switch (s) {
            case Split::Train: return {0, bounds_.train_end};
            case Split::Val: return {bounds_.train_end, bounds_.val_end};
            case Split::Test: return {bounds_.val_end, bounds_.test_end};
        }
        return {0, 0};
    }

    std::size_t anchor(Split s, std::size_t i) const {
        if (i >= window_count(s)) throw DimensionError("window index out of range");
        return range(s).first + lookback_ - 1 + i * stride_;
    }

    double std_value(std::size_t row, std::size_t col) const {
        return (frame_.values(row, col) - stats_.means[col]) / stats_.stds[col];
    }

    SeriesFrame frame_;
    SplitBounds bounds_;
    std::size_t lookback_;
    std::size_t horizon_;
    std::size_t stride_;
    ColumnStats stats_;
};

/// Convenience constructor matching the windowing contract.
inline WindowedDataset make_windows(SeriesFrame frame, SplitBounds bounds, std::size_t lookback,
                                    std::size_t horizon, std::size_t stride = 1) {
    return WindowedDataset(std::move(frame), bounds, lookback, horizon, stride);
}

}  // namespace timeo1
