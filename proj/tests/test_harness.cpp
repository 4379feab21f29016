#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "jpr/harness.hpp"
#include "jpr/io.hpp"
#include "jpr/stats.hpp"
#include "test_util.hpp"

using jpr::Errc;
using jpr::ExperimentConfig;
using jpr::JointRegion;
using jpr::RegionMethod;
using jpr::TimeSeries;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig config;
    config.window_len = 120;
    config.step = 5;
    config.n_windows = 8;
    config.h_list = {4, 6};
    config.k_list = {1, 2};
    config.alpha_list = {0.1};
    config.replicates = 60;
    config.methods = {RegionMethod::kfwe, RegionMethod::bonferroni};
    config.forecaster.kind = jpr::ModelKind::ar;
    config.forecaster.p = 1;
    config.bootstrap.scheme = jpr::BootstrapScheme::model_based;
    config.seed = 42;
    config.threads = 2;
    return config;
}

JointRegion infinite_region(std::size_t horizon) {
    JointRegion region;
    region.horizon = horizon;
    region.lower.assign(horizon, -std::numeric_limits<double>::infinity());
    region.upper.assign(horizon, std::numeric_limits<double>::infinity());
    return region;
}

}  // namespace

TEST_CASE("synthetic generator shape") {
    jpr::SyntheticSpec spec;
    TimeSeries series = jpr::generate_synthetic(spec);
    CHECK(series.length() == 3651);
    CHECK(series.period() == 30);

    jpr::SyntheticSpec flat;
    flat.length = 200;
    flat.period = 10;
    flat.slope = 0.0;
    flat.amplitude = 0.0;
    flat.noise_sd = 0.0;
    TimeSeries constant = jpr::generate_synthetic(flat);
    for (std::size_t t = 0; t < constant.length(); ++t)
        CHECK(constant[t] == flat.baseline);

    // Noise-free: seasonal differencing leaves the constant slope * period.
    jpr::SyntheticSpec clean;
    clean.length = 300;
    clean.period = 12;
    clean.noise_sd = 0.0;
    TimeSeries noiseless = jpr::generate_synthetic(clean);
    auto diffed = jpr::difference(noiseless, 12, 1);
    for (std::size_t t = 0; t < diffed.length(); ++t)
        CHECK(diffed[t] == doctest::Approx(clean.slope * 12.0).epsilon(1e-9));

    // Determinism in the seed.
    TimeSeries a = jpr::generate_synthetic(spec);
    CHECK(a.values() == series.values());
}

TEST_CASE("synthetic generator validates its spec") {
    jpr::SyntheticSpec bad;
    bad.length = 30;
    bad.period = 10;
    CHECK_ERRC(jpr::generate_synthetic(bad), Errc::series_too_short);
    bad.length = 400;
    bad.noise_sd = -1.0;
    CHECK_ERRC(jpr::generate_synthetic(bad), Errc::invalid_argument);
}

TEST_CASE("cell enumeration covers the grid, k only for kfwe") {
    ExperimentConfig config = small_config();
    auto cells = jpr::enumerate_cells(config);
    // kfwe: 2 alphas? one alpha * 2 H * 2 k = 4; bonferroni: 1 alpha * 2 H = 2.
    CHECK(cells.size() == 6);
    std::size_t kfwe_cells = 0;
    for (const auto& cell : cells) {
        if (cell.method == RegionMethod::kfwe) ++kfwe_cells;
        else CHECK(cell.k == 1);
    }
    CHECK(kfwe_cells == 4);

    // k larger than H is skipped.
    config.methods = {RegionMethod::kfwe};
    config.k_list = {5};
    config.h_list = {4};
    CHECK(jpr::enumerate_cells(config).empty());
}

TEST_CASE("rolling_eval with an all-space stub covers every window") {
    TimeSeries series = jpr::generate_synthetic(
        {.length = 400, .period = 10, .noise_sd = 2.0, .seed = 3});
    ExperimentConfig config = small_config();

    std::size_t builder_calls = 0;
    std::vector<std::size_t> train_lengths;
    auto stub = [&](std::size_t, const TimeSeries& train,
                    const std::vector<jpr::CellKey>& cells) {
        ++builder_calls;
        train_lengths.push_back(train.length());
        std::vector<JointRegion> regions;
        for (const auto& cell : cells) regions.push_back(infinite_region(cell.horizon));
        return regions;
    };

    // geometric_width rejects infinite regions, so judge containment only
    // through a config whose widths stay finite: use a huge finite box.
    auto finite_stub = [&](std::size_t w, const TimeSeries& train,
                           const std::vector<jpr::CellKey>& cells) {
        auto regions = stub(w, train, cells);
        for (auto& region : regions) {
            for (double& v : region.lower) v = -1e12;
            for (double& v : region.upper) v = 1e12;
        }
        return regions;
    };

    auto report = jpr::rolling_eval(series, config, finite_stub);
    CHECK(builder_calls == config.n_windows);
    for (std::size_t len : train_lengths) CHECK(len == config.window_len);
    CHECK(report.n_windows == config.n_windows);
    for (const auto& cell : report.cells) CHECK(cell.successes == config.n_windows);
}

TEST_CASE("rolling_eval with a zero-width-at-truth stub scores full coverage") {
    TimeSeries series = jpr::generate_synthetic(
        {.length = 400, .period = 10, .noise_sd = 2.0, .seed = 4});
    ExperimentConfig config = small_config();

    auto stub = [&](std::size_t window_index, const TimeSeries&,
                    const std::vector<jpr::CellKey>& cells) {
        std::vector<JointRegion> regions;
        for (const auto& cell : cells) {
            JointRegion region;
            region.horizon = cell.horizon;
            std::size_t start = window_index * config.step + config.window_len;
            for (std::size_t h = 0; h < cell.horizon; ++h) {
                region.lower.push_back(series[start + h]);
                region.upper.push_back(series[start + h]);
            }
            regions.push_back(std::move(region));
        }
        return regions;
    };

    auto report = jpr::rolling_eval(series, config, stub);
    for (const auto& cell : report.cells) {
        CHECK(cell.successes == config.n_windows);
        CHECK(cell.mean_geom_width == 0.0);
    }
}

TEST_CASE("coverage is monotone in k when the same regions are judged") {
    TimeSeries series = jpr::generate_synthetic(
        {.length = 400, .period = 10, .noise_sd = 6.0, .seed = 5});
    ExperimentConfig config = small_config();
    config.methods = {RegionMethod::kfwe};
    config.k_list = {1, 2, 3};
    config.h_list = {6};

    // Same narrow region for every cell: only the judging k differs.
    auto stub = [&](std::size_t window_index, const TimeSeries&,
                    const std::vector<jpr::CellKey>& cells) {
        std::vector<JointRegion> regions;
        for (const auto& cell : cells) {
            JointRegion region;
            region.horizon = cell.horizon;
            std::size_t start = window_index * config.step + config.window_len;
            for (std::size_t h = 0; h < cell.horizon; ++h) {
                region.lower.push_back(series[start + h] - (h % 2 == 0 ? 5.0 : 0.5));
                region.upper.push_back(series[start + h] + (h % 2 == 0 ? 5.0 : 0.5));
            }
            regions.push_back(std::move(region));
        }
        return regions;
    };

    auto report = jpr::rolling_eval(series, config, stub);
    REQUIRE(report.cells.size() == 3);
    CHECK(report.cells[0].key.k == 1);
    CHECK(report.cells[1].key.k == 2);
    CHECK(report.cells[2].key.k == 3);
    CHECK(report.cells[0].successes <= report.cells[1].successes);
    CHECK(report.cells[1].successes <= report.cells[2].successes);
}

TEST_CASE("rolling_eval window arithmetic is validated") {
    TimeSeries series = jpr::generate_synthetic(
        {.length = 200, .period = 10, .noise_sd = 1.0, .seed = 6});
    ExperimentConfig config = small_config();
    config.window_len = 190;
    config.n_windows = 10;
    CHECK_ERRC(jpr::rolling_eval(series, config), Errc::config_too_large);

    config = small_config();
    config.replicates = 0;
    CHECK_ERRC(jpr::rolling_eval(series, config), Errc::bootstrap_count_invalid);
}

TEST_CASE("rolling_eval end-to-end is deterministic across runs and thread counts") {
    TimeSeries series = jpr::generate_synthetic(
        {.length = 350, .period = 10, .noise_sd = 3.0, .seed = 11});
    ExperimentConfig config = small_config();
    config.n_windows = 4;
    config.replicates = 40;

    auto a = jpr::rolling_eval(series, config);
    auto b = jpr::rolling_eval(series, config);
    config.threads = 8;
    auto c = jpr::rolling_eval(series, config);

    REQUIRE(a.cells.size() == b.cells.size());
    REQUIRE(a.cells.size() == c.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].successes == b.cells[i].successes);
        CHECK(a.cells[i].mean_geom_width == b.cells[i].mean_geom_width);
        CHECK(a.cells[i].successes == c.cells[i].successes);
        CHECK(a.cells[i].mean_geom_width == c.cells[i].mean_geom_width);
    }
}

TEST_CASE("emit_report writes sorted deterministic CSV") {
    jpr::EvalReport report;
    report.n_windows = 10;
    report.cells.push_back({{RegionMethod::kfwe, 0.2, 1, 6}, 9, 4.0});
    report.cells.push_back({{RegionMethod::bonferroni, 0.1, 1, 6}, 10, 6.5});
    report.cells.push_back({{RegionMethod::kfwe, 0.1, 2, 6}, 10, 3.0});
    report.cells.push_back({{RegionMethod::kfwe, 0.1, 1, 6}, 10, 5.0});

    testutil::TempDir dir;
    const std::string path = dir.file("report.csv");
    jpr::emit_report(report, path);
    std::string expected =
        "method,alpha,k,H,coverage,mean_geom_width\n"
        "bonferroni,0.1,1,6,10,6.5\n"
        "kfwe,0.1,1,6,10,5\n"
        "kfwe,0.1,2,6,10,3\n"
        "kfwe,0.2,1,6,9,4\n";
    CHECK(testutil::read_file(path) == expected);

    const std::string again = dir.file("report2.csv");
    jpr::emit_report(report, again);
    CHECK(testutil::read_file(again) == expected);

    jpr::EvalReport empty;
    CHECK_ERRC(jpr::emit_report(empty, dir.file("empty.csv")), Errc::invalid_argument);
}

TEST_CASE("one-cell report produces a two-line CSV") {
    jpr::EvalReport report;
    report.n_windows = 5;
    report.cells.push_back({{RegionMethod::np, 0.1, 1, 4}, 5, 1.25});
    testutil::TempDir dir;
    const std::string path = dir.file("one.csv");
    jpr::emit_report(report, path);
    CHECK(testutil::read_file(path) ==
          "method,alpha,k,H,coverage,mean_geom_width\nnp,0.1,1,4,5,1.25\n");
}

TEST_CASE("experiment config parsing") {
    std::vector<std::pair<std::string, std::string>> entries{
        {"window_len", "150"}, {"step", "10"},        {"n_windows", "5"},
        {"H_list", "6, 12"},   {"k_list", "1,2,3"},   {"alpha_list", "0.1,0.2"},
        {"B", "200"},          {"methods", "kfwe,np"}, {"seed", "99"},
        {"forecaster", "ari"}, {"p", "2"},            {"D", "1"},
        {"period", "12"},      {"bootstrap", "decomposed_block"},
        {"sigma", "shared"},
    };
    auto config = jpr::parse_experiment_config(entries);
    CHECK(config.window_len == 150);
    CHECK(config.h_list == std::vector<std::size_t>{6, 12});
    CHECK(config.alpha_list == std::vector<double>{0.1, 0.2});
    CHECK(config.replicates == 200);
    CHECK(config.methods.size() == 2);
    CHECK(config.seed == 99);
    CHECK(config.forecaster.kind == jpr::ModelKind::ari);
    CHECK(config.forecaster.D == 1);
    CHECK(config.bootstrap.period == 12);
    CHECK(config.bootstrap.scheme == jpr::BootstrapScheme::decomposed_block);

    // seed and B are mandatory; unknown keys are rejected.
    CHECK_ERRC(jpr::parse_experiment_config({{"B", "100"}}), Errc::parse_error);
    CHECK_ERRC(jpr::parse_experiment_config({{"seed", "1"}}), Errc::parse_error);
    CHECK_ERRC(jpr::parse_experiment_config(
                   {{"seed", "1"}, {"B", "100"}, {"bogus", "x"}}),
               Errc::parse_error);
}

TEST_CASE("config file reader handles comments and whitespace") {
    testutil::TempDir dir;
    const std::string path = dir.file("exp.conf");
    testutil::write_file(path,
                         "# experiment\n"
                         "seed = 7   # inline comment\n"
                         "\n"
                         "B=500\n");
    auto entries = jpr::read_config_file(path);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0] == std::pair<std::string, std::string>{"seed", "7"});
    CHECK(entries[1] == std::pair<std::string, std::string>{"B", "500"});
    CHECK_ERRC(jpr::read_config_file(dir.file("missing.conf")), Errc::io_error);
}

TEST_CASE("series CSV round-trip and imputation") {
    testutil::TempDir dir;
    const std::string path = dir.file("series.csv");
    jpr::write_series_csv(path, testutil::series({1.5, -2.25, 3.0}));
    auto values = jpr::read_series_csv(path);
    CHECK(values == std::vector<double>{1.5, -2.25, 3.0});

    const std::string two_col = dir.file("tv.csv");
    testutil::write_file(two_col, "t,value\n0,5.0\n1,6.0\n");
    CHECK(jpr::read_series_csv(two_col) == std::vector<double>{5.0, 6.0});

    const std::string gaps = dir.file("gaps.csv");
    testutil::write_file(gaps, "value\n1.0\nNA\n3.0\n");
    CHECK_ERRC(jpr::read_series_csv(gaps, false), Errc::parse_error);
    CHECK(jpr::read_series_csv(gaps, true) == std::vector<double>{1.0, 2.0, 3.0});

    const std::string bad = dir.file("bad.csv");
    testutil::write_file(bad, "value\nx\n");
    CHECK_ERRC(jpr::read_series_csv(bad), Errc::parse_error);
}

TEST_CASE("region CSV uses inf literals for one-sided regions") {
    JointRegion region;
    region.horizon = 2;
    region.lower = {1.5, 2.5};
    region.upper.assign(2, std::numeric_limits<double>::infinity());
    jpr::PathForecast path;
    path.horizon = 2;
    path.point = {2.0, 3.0};

    testutil::TempDir dir;
    const std::string file = dir.file("region.csv");
    jpr::write_region_csv(file, region, path);
    CHECK(testutil::read_file(file) ==
          "h,lower,upper,point\n1,1.5,inf,2\n2,2.5,inf,3\n");
}
