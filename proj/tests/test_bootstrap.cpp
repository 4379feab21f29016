#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "jpr/bootstrap.hpp"
#include "jpr/parallel.hpp"
#include "jpr/stats.hpp"
#include "test_util.hpp"

using jpr::BootstrapScheme;
using jpr::BootstrapSpec;
using jpr::Errc;
using jpr::RandomSource;
using jpr::Replicate;
using jpr::TimeSeries;

namespace {

bool all_values_from_source(const TimeSeries& replicate, const TimeSeries& source) {
    std::multiset<double> pool(source.values().begin(), source.values().end());
    for (double v : replicate.values())
        if (pool.find(v) == pool.end()) return false;
    return true;
}

}  // namespace

TEST_CASE("default block length is round(n^(1/3))") {
    CHECK(jpr::default_block_length(1000) == 10);
    CHECK(jpr::default_block_length(27) == 3);
    CHECK(jpr::default_block_length(1) == 1);
    CHECK(jpr::default_block_length(2245) == 13);
}

TEST_CASE("moving block with k=T reproduces the series") {
    TimeSeries xs = testutil::gaussian_noise(20, 1);
    Replicate rep = jpr::moving_block(xs, 20, 20, RandomSource(7, 0));
    CHECK(rep.series.values() == xs.values());
}

TEST_CASE("moving block with k=1 is an IID resample of source values") {
    TimeSeries xs = testutil::gaussian_noise(15, 2);
    Replicate rep = jpr::moving_block(xs, 1, 40, RandomSource(8, 0));
    CHECK(rep.series.length() == 40);
    CHECK(all_values_from_source(rep.series, xs));
}

TEST_CASE("moving block draws only the n-k+1 overlapping blocks") {
    // T=6, k=2: valid (first,second) pairs are exactly the 5 adjacent pairs.
    std::vector<double> y{10, 20, 30, 40, 50, 60};
    TimeSeries xs = testutil::series(y);
    std::set<std::pair<double, double>> seen;
    for (std::uint64_t s = 0; s < 500; ++s) {
        Replicate rep = jpr::moving_block(xs, 2, 2, RandomSource(5, s));
        std::pair<double, double> block{rep.series[0], rep.series[1]};
        bool adjacent = false;
        for (std::size_t i = 0; i + 1 < y.size(); ++i)
            if (block.first == y[i] && block.second == y[i + 1]) adjacent = true;
        CHECK(adjacent);
        seen.insert(block);
    }
    CHECK(seen.size() == 5);
    CHECK_ERRC(jpr::moving_block(xs, 7, 6, RandomSource(1, 0)), Errc::block_len_invalid);
    CHECK_ERRC(jpr::moving_block(xs, 0, 6, RandomSource(1, 0)), Errc::block_len_invalid);
}

TEST_CASE("circular block wraps: k=T replicates are rotations") {
    std::vector<double> y{1, 2, 3, 4, 5};
    TimeSeries xs = testutil::series(y);
    std::set<double> first_elements;
    for (std::uint64_t s = 0; s < 200; ++s) {
        Replicate rep = jpr::circular_block(xs, 5, 5, RandomSource(11, s));
        for (std::size_t i = 0; i + 1 < 5; ++i) {
            double expected = rep.series[i] == 5.0 ? 1.0 : rep.series[i] + 1.0;
            CHECK(rep.series[i + 1] == expected);
        }
        first_elements.insert(rep.series[0]);
    }
    CHECK(first_elements.size() == 5);  // every start appears
}

TEST_CASE("circular block starts are uniform") {
    // k=1, out_len=1 exposes the start index directly as the drawn value.
    std::vector<double> y{0, 1, 2, 3, 4};
    TimeSeries xs = testutil::series(y);
    std::vector<std::size_t> counts(5, 0);
    const std::size_t draws = 100000;
    for (std::uint64_t s = 0; s < draws; ++s) {
        Replicate rep = jpr::circular_block(xs, 1, 1, RandomSource(13, s));
        ++counts[static_cast<std::size_t>(rep.series[0])];
    }
    double expected = static_cast<double>(draws) / 5.0;
    double chi2 = 0.0;
    for (std::size_t c : counts) {
        double diff = static_cast<double>(c) - expected;
        chi2 += diff * diff / expected;
    }
    CHECK(chi2 < jpr::chi_square_quantile(4, 0.99));
}

TEST_CASE("block of blocks validates K2 < K1 and resamples within outer blocks") {
    TimeSeries xs = testutil::gaussian_noise(30, 3);
    CHECK_ERRC(jpr::block_of_blocks(xs, 5, 5, 30, RandomSource(1, 0)),
               Errc::block_len_invalid);
    CHECK_ERRC(jpr::block_of_blocks(xs, 5, 0, 30, RandomSource(1, 0)),
               Errc::block_len_invalid);

    Replicate rep = jpr::block_of_blocks(xs, 10, 3, 45, RandomSource(21, 4));
    CHECK(rep.series.length() == 45);
    CHECK(all_values_from_source(rep.series, xs));

    // K2=1 keeps every drawn value a source value (IID within outer blocks).
    Replicate iid = jpr::block_of_blocks(xs, 10, 1, 30, RandomSource(22, 0));
    CHECK(all_values_from_source(iid.series, xs));
}

TEST_CASE("block of blocks with K1=T matches moving block supports") {
    // With a single outer block the inner draw is a moving-block draw with
    // k=K2: every K2-run of the replicate is a contiguous source block.
    std::vector<double> y{1, 2, 3, 4, 5, 6, 7, 8};
    TimeSeries xs = testutil::series(y);
    for (std::uint64_t s = 0; s < 100; ++s) {
        Replicate rep = jpr::block_of_blocks(xs, 8, 2, 8, RandomSource(31, s));
        for (std::size_t i = 0; i + 1 < 8; i += 2) {
            double first = rep.series[i];
            CHECK(first >= 1.0);
            CHECK(first <= 7.0);
            CHECK(rep.series[i + 1] == first + 1.0);
        }
    }
}

TEST_CASE("stationary bootstrap block lengths follow the configured mean") {
    RandomSource rng(41, 0);
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) sum += static_cast<double>(rng.geometric(5.0));
    double mean_len = sum / draws;
    CHECK(mean_len > 4.75);
    CHECK(mean_len < 5.25);
}

TEST_CASE("stationary bootstrap degenerates to IID at mean 1 and is deterministic") {
    TimeSeries xs = testutil::gaussian_noise(25, 5);
    Replicate a = jpr::stationary_bootstrap(xs, 1.0, 50, RandomSource(3, 9));
    Replicate b = jpr::stationary_bootstrap(xs, 1.0, 50, RandomSource(3, 9));
    CHECK(a.series.values() == b.series.values());
    CHECK(all_values_from_source(a.series, xs));
    CHECK_ERRC(jpr::stationary_bootstrap(xs, 0.5, 10, RandomSource(1, 0)),
               Errc::mean_block_invalid);
}

TEST_CASE("sieve bootstrap keeps the length contract and picks small AUTO orders") {
    int small_orders = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        TimeSeries xs = testutil::ar1(0.6, 400, 2000 + seed);
        jpr::PreparedBootstrap prepared(
            xs, BootstrapSpec{.scheme = BootstrapScheme::sieve, .sieve_order = 0});
        Replicate rep = prepared.generate(410, RandomSource(seed, 1));
        CHECK(rep.series.length() == 410);
        // Recover the selected order through a direct re-selection.
        std::vector<std::size_t> candidates;
        for (std::size_t p = 1; p <= 26; ++p) candidates.push_back(p);
        auto [model, report] =
            jpr::select_order(xs, candidates, 0, 0, 0, jpr::SelectionCriterion::aic);
        if (model.p <= 3) ++small_orders;
    }
    CHECK(small_orders >= 80);
}

TEST_CASE("model-based bootstrap delegates to simulate") {
    TimeSeries xs = testutil::ar1(0.5, 300, 77);
    jpr::ForecasterSpec spec;
    spec.kind = jpr::ModelKind::ar;
    spec.p = 1;
    jpr::FittedForecaster fitted = jpr::fit_forecaster(spec, xs);

    Replicate rep = jpr::model_based(fitted, 306, RandomSource(9, 2));
    RandomSource rng(9, 2);
    TimeSeries direct = fitted.simulate(306, jpr::InnovationMode::resample_residuals, rng);
    CHECK(rep.series.values() == direct.values());

    // Distinct streams give distinct replicates.
    Replicate other = jpr::model_based(fitted, 306, RandomSource(9, 3));
    CHECK(rep.series.values() != other.series.values());
}

TEST_CASE("smoothed bootstrap jitters the resampled values") {
    TimeSeries xs = testutil::gaussian_noise(40, 6);
    BootstrapSpec plain{.scheme = BootstrapScheme::moving_block, .block_len = 4};
    BootstrapSpec smoothed = plain;
    smoothed.smoothing_noise_sd = 0.5;

    jpr::PreparedBootstrap a(xs, plain);
    jpr::PreparedBootstrap b(xs, smoothed);
    Replicate ra = a.generate(40, RandomSource(15, 0));
    Replicate rb = b.generate(40, RandomSource(15, 0));
    CHECK(all_values_from_source(ra.series, xs));
    CHECK_FALSE(all_values_from_source(rb.series, xs));
}

TEST_CASE("decomposed block bootstrap extends a deterministic series exactly") {
    // Zero remainder: trend + seasonal only.
    const std::size_t m = 6;
    const std::size_t n = 12 * m;
    std::vector<double> pattern{2, -1, 0.5, -0.5, 1, -2};
    std::vector<double> y(n);
    for (std::size_t t = 0; t < n; ++t)
        y[t] = 1.0 + 0.25 * static_cast<double>(t) + pattern[t % m];
    TimeSeries xs = testutil::series(y);

    Replicate rep =
        jpr::decomposed_block(xs, m, BootstrapScheme::moving_block, 0, m, RandomSource(2, 0));
    REQUIRE(rep.series.length() == n + m);

    auto dec = jpr::classical_decompose(xs, m);
    auto baseline = jpr::recompose(dec, std::vector<double>(n + m, 0.0), m);
    for (std::size_t t = 0; t < n + m; ++t)
        CHECK(rep.series[t] == doctest::Approx(baseline[t]).epsilon(1e-7));
}

TEST_CASE("decomposed block replicates differ from the baseline by resampled remainder") {
    jpr::RandomSource noise_rng(4, 4);
    const std::size_t m = 5;
    const std::size_t n = 20 * m;
    std::vector<double> y(n);
    for (std::size_t t = 0; t < n; ++t)
        y[t] = 0.5 * static_cast<double>(t) + 3.0 * ((t % m) == 2) + noise_rng.normal();
    TimeSeries xs = testutil::series(y);

    auto dec = jpr::classical_decompose(xs, m);
    auto baseline = jpr::recompose(dec, std::vector<double>(n + 10, 0.0), 10);
    Replicate rep = jpr::decomposed_block(xs, m, BootstrapScheme::moving_block, 0, 10,
                                          RandomSource(10, 3));

    std::multiset<double> remainder_pool;
    for (double r : dec.remainder) remainder_pool.insert(r);
    for (std::size_t t = 0; t < n + 10; ++t) {
        double diff = rep.series[t] - baseline[t];
        // Each offset must be one of the remainder values (block resample).
        bool found = false;
        for (double r : remainder_pool)
            if (std::abs(diff - r) < 1e-7) found = true;
        CHECK(found);
    }
}

TEST_CASE("replicates are bit-identical across runs and thread schedules") {
    TimeSeries xs = testutil::ar1(0.4, 200, 55);
    BootstrapSpec spec{.scheme = BootstrapScheme::stationary, .mean_block = 6.0};
    jpr::PreparedBootstrap prepared(xs, spec);

    const std::size_t b_count = 32;
    std::vector<std::vector<double>> serial(b_count), parallel(b_count);
    for (std::size_t b = 0; b < b_count; ++b)
        serial[b] = prepared.generate(210, RandomSource(123, b)).series.values();
    jpr::parallel_for(b_count, 4, [&](std::size_t b) {
        parallel[b] = prepared.generate(210, RandomSource(123, b)).series.values();
    });
    CHECK(serial == parallel);
}

TEST_CASE("moving block with k=1 reproduces the empirical marginal distribution") {
    std::vector<double> y{0, 1, 2, 3, 4, 5, 6, 7};
    TimeSeries xs = testutil::series(y);
    jpr::PreparedBootstrap prepared(
        xs, BootstrapSpec{.scheme = BootstrapScheme::moving_block, .block_len = 1});
    std::vector<std::size_t> counts(8, 0);
    const std::size_t draws = 100000;
    for (std::uint64_t s = 0; s < draws; ++s) {
        Replicate rep = prepared.generate(1, RandomSource(17, s));
        ++counts[static_cast<std::size_t>(rep.series[0])];
    }
    const double expected = static_cast<double>(draws) / 8.0;
    const double sd = std::sqrt(expected * (1.0 - 1.0 / 8.0));
    for (std::size_t c : counts)
        CHECK(std::abs(static_cast<double>(c) - expected) <= 3.0 * sd);
}

TEST_CASE("block resampling preserves lag-1 autocorrelation, IID resampling destroys it") {
    TimeSeries xs = testutil::ar1(0.8, 1000, 99);
    double source_r1 = jpr::acf(xs, 1).at_lag(1);

    auto mean_replicate_acf = [&](std::size_t block_len) {
        jpr::PreparedBootstrap prepared(
            xs,
            BootstrapSpec{.scheme = BootstrapScheme::moving_block, .block_len = block_len});
        double sum = 0.0;
        const int reps = 200;
        for (int b = 0; b < reps; ++b) {
            Replicate rep = prepared.generate(1000, RandomSource(7, b));
            sum += jpr::acf(rep.series, 1).at_lag(1);
        }
        return sum / reps;
    };

    double with_blocks = mean_replicate_acf(jpr::default_block_length(1000));
    double iid = mean_replicate_acf(1);
    CHECK(std::abs(with_blocks - source_r1) < 0.1);
    CHECK(std::abs(iid) < 0.05);
}
