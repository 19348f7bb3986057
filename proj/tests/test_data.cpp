#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "timeo1/data.hpp"

using namespace timeo1;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::trunc);
    out << content;
}

double lag1_autocorrelation(const SeriesFrame& frame, std::size_t variate) {
    const std::size_t n = frame.length();
    double mean = 0.0;
    for (std::size_t t = 0; t < n; ++t) mean += frame.values(t, variate);
    mean /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double d = frame.values(t, variate) - mean;
        den += d * d;
        if (t + 1 < n) num += d * (frame.values(t + 1, variate) - mean);
    }
    return num / den;
}

SeriesFrame toy_frame(std::size_t n, std::size_t d, std::uint64_t seed) {
    SeriesFrame frame;
    frame.values = oracles::random_matrix(n, d, seed);
    for (std::size_t c = 0; c < d; ++c) frame.names.push_back("v" + std::to_string(c));
    return frame;
}

}  // namespace

TEST_CASE("load_csv parses a toy ETT-style file", "[data]") {
    const auto p = temp_file("timeo1_toy.csv");
    write_file(p, "date,a,b\n2020-01-01,1.5,2\n2020-01-02,3,4\n2020-01-03,5,6.25\n");
    SeriesFrame f = load_csv(p);
    CHECK(f.length() == 3);
    CHECK(f.variates() == 2);
    CHECK(f.names == std::vector<std::string>{"a", "b"});
    CHECK(f.values(0, 0) == 1.5);
    CHECK(f.values(2, 1) == 6.25);
    CHECK(f.timestamps.size() == 3);
    std::filesystem::remove(p);
}

TEST_CASE("load_csv rejects malformed rows with the row number", "[data]") {
    const auto p = temp_file("timeo1_bad.csv");
    write_file(p, "date,a,b\n2020-01-01,1,2\n2020-01-02,,3\n");
    CHECK_THROWS_WITH(load_csv(p), Catch::Matchers::ContainsSubstring("row 3"));

    write_file(p, "date,a,b\n2020-01-01,1,2\n2020-01-02,4\n");
    CHECK_THROWS_WITH(load_csv(p), Catch::Matchers::ContainsSubstring("row 3"));

    write_file(p, "date,a\n2020-01-01,1\n2020-01-01,2\n");
    CHECK_THROWS_WITH(load_csv(p), Catch::Matchers::ContainsSubstring("strictly increasing"));

    write_file(p, "date,a\n2020-01-01,xyz\n");
    CHECK_THROWS_AS(load_csv(p), IngestionError);

    CHECK_THROWS_AS(load_csv(temp_file("timeo1_missing_file.csv")), IngestionError);
    std::filesystem::remove(p);
}

TEST_CASE("save_csv round-trips values exactly", "[data]") {
    SynthSpec spec;
    spec.phi = {0.5};
    spec.length = 64;
    spec.variates = 3;
    spec.seed = 17;
    SeriesFrame f = synth_ar(spec);
    const auto p = temp_file("timeo1_roundtrip.csv");
    save_csv(f, p);
    SeriesFrame g = load_csv(p);
    REQUIRE(g.length() == f.length());
    REQUIRE(g.variates() == f.variates());
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(g.values.data()[i] == f.values.data()[i]);
    CHECK(g.timestamps == f.timestamps);
    std::filesystem::remove(p);
}

TEST_CASE("synth_ar white noise has negligible lag-1 autocorrelation", "[data]") {
    SynthSpec spec;
    spec.phi = {0.0};
    spec.length = 10000;
    spec.seed = 5;
    SeriesFrame f = synth_ar(spec);
    CHECK(std::abs(lag1_autocorrelation(f, 0)) < 0.05);
}

TEST_CASE("synth_ar AR(1) matches the theoretical autocorrelation", "[data]") {
    SynthSpec spec;
    spec.phi = {0.9};
    spec.length = 10000;
    spec.seed = 6;
    SeriesFrame f = synth_ar(spec);
    CHECK(lag1_autocorrelation(f, 0) == Catch::Approx(0.9).margin(0.03));
}

TEST_CASE("synth_ar is deterministic per seed and validates the spec", "[data]") {
    SynthSpec spec;
    spec.phi = {0.6, -0.3};
    spec.length = 128;
    spec.variates = 2;
    spec.seed = 99;
    SeriesFrame a = synth_ar(spec);
    SeriesFrame b = synth_ar(spec);
    CHECK(a.values.data() == b.values.data());
    CHECK(a.timestamps == b.timestamps);

    SynthSpec bad = spec;
    bad.phi = {1.01};
    CHECK_THROWS_AS(synth_ar(bad), ConfigError);
    bad.phi = {0.5, 0.5};  // unit root
    CHECK_THROWS_AS(synth_ar(bad), ConfigError);
    bad.phi = {0.9};
    bad.noise_std = 0.0;
    CHECK_THROWS_AS(synth_ar(bad), ConfigError);
}

TEST_CASE("split_chronological boundary arithmetic", "[data]") {
    SeriesFrame f = toy_frame(100, 1, 1);
    SplitBounds b = split_chronological(f, 0.7, 0.1, 0.2);
    CHECK(b.train_end == 70);
    CHECK(b.val_end == 80);
    CHECK(b.test_end == 100);

    CHECK_THROWS_AS(split_chronological(f, 0.8, 0.2, 0.2), ConfigError);
    CHECK_THROWS_AS(split_chronological(f, 0.0, 0.5, 0.5), ConfigError);
}

TEST_CASE("ETT preset boundaries by calendar arithmetic", "[data]") {
    // hourly: 30-day months, 24 rows per day -> 8640 / 2880 / 2880
    SeriesFrame f = toy_frame(17420, 2, 2);
    SplitBounds b = split_ett(f, 24);
    CHECK(b.train_end == 12 * 30 * 24);
    CHECK(b.val_end == 16 * 30 * 24);
    CHECK(b.test_end == 20 * 30 * 24);

    SeriesFrame tiny = toy_frame(500, 1, 3);
    CHECK_THROWS_AS(split_ett(tiny, 24), DimensionError);
}

TEST_CASE("window counts follow the split-length formula", "[data]") {
    const std::size_t h = 4, t = 3;
    {
        // splits of exactly H+T rows give one window each
        SeriesFrame f = toy_frame(3 * (h + t), 1, 4);
        SplitBounds b{h + t, 2 * (h + t), 3 * (h + t)};
        WindowedDataset ds = make_windows(f, b, h, t);
        CHECK(ds.window_count(Split::Train) == 1);
        CHECK(ds.window_count(Split::Val) == 1);
        CHECK(ds.window_count(Split::Test) == 1);
    }
    {
        SeriesFrame f = toy_frame(h + t + 5 + 2 * (h + t), 1, 5);
        SplitBounds b{h + t + 5, h + t + 5 + (h + t), h + t + 5 + 2 * (h + t)};
        WindowedDataset ds = make_windows(f, b, h, t);
        CHECK(ds.window_count(Split::Train) == 6);
    }
    {
        SeriesFrame f = toy_frame(40, 1, 6);
        SplitBounds b{10, 16, 40};  // val split of 6 rows < H+T
        CHECK_THROWS_AS(make_windows(f, b, h, t), DimensionError);
    }
}

TEST_CASE("windows never leak across split boundaries", "[data]") {
    SeriesFrame f = toy_frame(200, 2, 7);
    SplitBounds b = split_chronological(f);
    WindowedDataset ds = make_windows(f, b, 8, 5);
    CHECK(ds.max_label_index(Split::Train) < b.train_end);
    CHECK(ds.max_label_index(Split::Val) < b.val_end);
    CHECK(ds.max_label_index(Split::Test) < b.test_end);
}

TEST_CASE("stats depend only on train rows", "[data]") {
    SeriesFrame f = toy_frame(120, 2, 8);
    SplitBounds b = split_chronological(f);
    WindowedDataset ds = make_windows(f, b, 6, 4);

    SeriesFrame altered = f;
    for (std::size_t r = b.val_end; r < b.test_end; ++r)
        for (std::size_t c = 0; c < 2; ++c) altered.values(r, c) += 100.0;
    WindowedDataset ds2 = make_windows(altered, b, 6, 4);

    CHECK(ds.stats().means == ds2.stats().means);
    CHECK(ds.stats().stds == ds2.stats().stds);
}

TEST_CASE("label_matrix assembly matches a loop oracle", "[data]") {
    SeriesFrame f = toy_frame(60, 3, 9);
    SplitBounds b = split_chronological(f, 0.6, 0.2, 0.2);
    const std::size_t h = 5, t = 4;
    WindowedDataset ds = make_windows(f, b, h, t);
    const ColumnStats& st = ds.stats();

    Matrix labels = ds.label_matrix(Split::Train);
    const std::size_t count = ds.window_count(Split::Train);
    REQUIRE(labels.rows() == count * 3);
    REQUIRE(labels.cols() == t);

    // loop oracle straight off the frame: window-major, variate-minor rows
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t n = h - 1 + i;  // train split starts at row 0
        for (std::size_t d = 0; d < 3; ++d)
            for (std::size_t step = 0; step < t; ++step) {
                const double raw = f.values(n + 1 + step, d);
                const double expect = (raw - st.means[d]) / st.stds[d];
                CHECK(labels(i * 3 + d, step) == Catch::Approx(expect).margin(1e-15));
            }
    }
}

TEST_CASE("single-window label matrix is the standardized label", "[data]") {
    SeriesFrame f = toy_frame(3 * 9, 1, 10);
    SplitBounds b{9, 18, 27};
    WindowedDataset ds = make_windows(f, b, 5, 4);
    Matrix labels = ds.label_matrix(Split::Train);
    REQUIRE(labels.rows() == 1);
    Matrix window = ds.label_window(Split::Train, 0);
    for (std::size_t step = 0; step < 4; ++step) CHECK(labels(0, step) == window(step, 0));
}

TEST_CASE("pooled train label columns are near zero mean", "[data]") {
    SynthSpec spec;
    spec.phi = {0.7};
    spec.length = 2000;
    spec.seed = 11;
    SeriesFrame f = synth_ar(spec);
    SplitBounds b = split_chronological(f);
    WindowedDataset ds = make_windows(f, b, 16, 8);
    Matrix labels = ds.label_matrix(Split::Train);
    for (std::size_t c = 0; c < 8; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < labels.rows(); ++r) mean += labels(r, c);
        mean /= static_cast<double>(labels.rows());
        CHECK(std::abs(mean) < 0.1);
    }
}

TEST_CASE("per-variate label matrices group rows by variate", "[data]") {
    SeriesFrame f = toy_frame(80, 2, 12);
    SplitBounds b = split_chronological(f);
    WindowedDataset ds = make_windows(f, b, 6, 3);
    auto per_variate = ds.label_matrices_per_variate(Split::Train);
    Matrix pooled = ds.label_matrix(Split::Train);
    REQUIRE(per_variate.size() == 2);
    for (std::size_t i = 0; i < per_variate[0].rows(); ++i)
        for (std::size_t step = 0; step < 3; ++step) {
            CHECK(per_variate[0](i, step) == pooled(i * 2 + 0, step));
            CHECK(per_variate[1](i, step) == pooled(i * 2 + 1, step));
        }
}

TEST_CASE("history matrix flattens the standardized window", "[data]") {
    SeriesFrame f = toy_frame(70, 2, 13);
    SplitBounds b = split_chronological(f);
    WindowedDataset ds = make_windows(f, b, 4, 3);
    Matrix hist = ds.history_matrix(Split::Train);
    Matrix w0 = ds.input_window(Split::Train, 0);
    REQUIRE(hist.cols() == 4 * 2);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 2; ++c) {
            CHECK(hist(0, r * 2 + c) == w0(r, c));
            CHECK(hist(1, r * 2 + c) == w0(r, c));  // repeated per variate
        }
}
