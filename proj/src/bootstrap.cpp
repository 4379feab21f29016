#include "jpr/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "jpr/stats.hpp"

namespace jpr {

namespace {

void check_block_len(std::size_t block_len, std::size_t n, std::string_view op) {
    if (block_len == 0 || block_len > n)
        fail(Errc::block_len_invalid, op, "block length must lie in [1, T]");
}

void add_smoothing_noise(std::vector<double>& values, double sd, RandomSource& rng) {
    if (sd <= 0.0) return;
    for (double& v : values) v += sd * rng.normal();
}

Replicate finish(std::vector<double> values, double smoothing_sd, RandomSource& rng) {
    add_smoothing_noise(values, smoothing_sd, rng);
    return {TimeSeries(std::move(values)), rng.stream()};
}

std::vector<double> draw_moving_blocks(std::span<const double> xs, std::size_t block_len,
                                       std::size_t out_len, RandomSource& rng) {
    const std::size_t n = xs.size();
    const std::size_t starts = n - block_len + 1;  // overlapping blocks
    std::vector<double> out;
    out.reserve(out_len + block_len);
    while (out.size() < out_len) {
        std::size_t start = rng.uniform_below(starts);
        for (std::size_t j = 0; j < block_len && out.size() < out_len; ++j)
            out.push_back(xs[start + j]);
    }
    return out;
}

std::vector<double> draw_circular(std::span<const double> xs, std::size_t block_len,
                                  std::size_t out_len, RandomSource& rng) {
    const std::size_t n = xs.size();
    std::vector<double> out;
    out.reserve(out_len + block_len);
    while (out.size() < out_len) {
        std::size_t start = rng.uniform_below(n);  // any start, indices wrap
        for (std::size_t j = 0; j < block_len && out.size() < out_len; ++j)
            out.push_back(xs[(start + j) % n]);
    }
    return out;
}

std::vector<double> draw_stationary(std::span<const double> xs, double mean_block,
                                    std::size_t out_len, RandomSource& rng) {
    const std::size_t n = xs.size();
    std::vector<double> out;
    out.reserve(out_len + 8);
    while (out.size() < out_len) {
        std::size_t start = rng.uniform_below(n);
        std::uint64_t len = rng.geometric(mean_block);
        for (std::uint64_t j = 0; j < len && out.size() < out_len; ++j)
            out.push_back(xs[(start + j) % n]);  // circular wrap at the boundary
    }
    return out;
}

}  // namespace

std::size_t default_block_length(std::size_t n) {
    if (n == 0) fail(Errc::invalid_argument, "default_block_length", "n must be >= 1");
    auto k = static_cast<std::size_t>(
        std::llround(std::cbrt(static_cast<double>(n))));
    return std::max<std::size_t>(k, 1);
}

Replicate moving_block(const TimeSeries& series, std::size_t block_len,
                       std::size_t out_len, RandomSource rng) {
    check_block_len(block_len, series.length(), "moving_block");
    return finish(draw_moving_blocks(series.view(), block_len, out_len, rng), 0.0, rng);
}

Replicate circular_block(const TimeSeries& series, std::size_t block_len,
                         std::size_t out_len, RandomSource rng) {
    check_block_len(block_len, series.length(), "circular_block");
    return finish(draw_circular(series.view(), block_len, out_len, rng), 0.0, rng);
}

Replicate block_of_blocks(const TimeSeries& series, std::size_t outer_block,
                          std::size_t inner_block, std::size_t out_len, RandomSource rng) {
    const std::size_t n = series.length();
    check_block_len(outer_block, n, "block_of_blocks");
    if (inner_block == 0 || inner_block >= outer_block)
        fail(Errc::block_len_invalid, "block_of_blocks", "K2 must satisfy 1 <= K2 < K1");

    std::span<const double> xs = series.view();
    const std::size_t outer_starts = n - outer_block + 1;
    const std::size_t inner_starts = outer_block - inner_block + 1;
    std::vector<double> out;
    out.reserve(out_len + outer_block);
    while (out.size() < out_len) {
        std::size_t outer = rng.uniform_below(outer_starts);
        // Refill the sampled outer block from its own subblocks.
        std::size_t filled = 0;
        while (filled < outer_block && out.size() < out_len) {
            std::size_t inner = outer + rng.uniform_below(inner_starts);
            for (std::size_t j = 0;
                 j < inner_block && filled < outer_block && out.size() < out_len;
                 ++j, ++filled)
                out.push_back(xs[inner + j]);
        }
    }
    return finish(std::move(out), 0.0, rng);
}

Replicate stationary_bootstrap(const TimeSeries& series, double mean_block,
                               std::size_t out_len, RandomSource rng) {
    if (!(mean_block >= 1.0))
        fail(Errc::mean_block_invalid, "stationary_bootstrap", "mean block must be >= 1");
    return finish(draw_stationary(series.view(), mean_block, out_len, rng), 0.0, rng);
}

Replicate sieve_bootstrap(const TimeSeries& series, std::size_t order,
                          std::size_t out_len, RandomSource rng) {
    PreparedBootstrap prepared(
        series, BootstrapSpec{.scheme = BootstrapScheme::sieve, .sieve_order = order});
    return prepared.generate(out_len, rng);
}

Replicate model_based(const FittedForecaster& model, std::size_t out_len, RandomSource rng,
                      double smoothing_noise_sd) {
    TimeSeries sim = model.simulate(out_len, InnovationMode::resample_residuals, rng);
    std::vector<double> values = sim.values();
    return finish(std::move(values), smoothing_noise_sd, rng);
}

Replicate decomposed_block(const TimeSeries& series, std::size_t period,
                           BootstrapScheme inner_scheme, std::size_t block_len,
                           std::size_t extension, RandomSource rng) {
    PreparedBootstrap prepared(series,
                               BootstrapSpec{.scheme = BootstrapScheme::decomposed_block,
                                             .block_len = block_len,
                                             .period = period,
                                             .inner_scheme = inner_scheme});
    return prepared.generate(series.length() + extension, rng);
}

PreparedBootstrap::PreparedBootstrap(const TimeSeries& series, BootstrapSpec spec,
                                     const FittedForecaster* model)
    : series_(series), spec_(spec), external_model_(model) {
    const std::size_t n = series_.length();
    switch (spec_.scheme) {
        case BootstrapScheme::model_based:
            if (external_model_ == nullptr)
                fail(Errc::not_fitted, "PreparedBootstrap",
                     "model_based scheme requires a fitted model");
            break;
        case BootstrapScheme::sieve: {
            if (spec_.sieve_order > 0) {
                auto [m, r] = fit_ar(series_, spec_.sieve_order);
                sieve_model_.emplace(std::move(m), r);
            } else {
                // AUTO: AIC over p in {1 .. ceil(10*log10(T))}.
                auto cap = static_cast<std::size_t>(
                    std::ceil(10.0 * std::log10(static_cast<double>(n))));
                cap = std::max<std::size_t>(cap, 1);
                std::vector<std::size_t> candidates;
                for (std::size_t p = 1; p <= cap; ++p) candidates.push_back(p);
                auto [m, r] =
                    select_order(series_, candidates, 0, 0, 0, SelectionCriterion::aic);
                sieve_model_.emplace(std::move(m), r);
            }
            break;
        }
        case BootstrapScheme::decomposed_block: {
            std::size_t period = spec_.period ? spec_.period : series_.period().value_or(0);
            if (period < 2)
                fail(Errc::period_invalid, "decomposed_block",
                     "scheme requires a period >= 2");
            spec_.period = period;
            decomposition_ = classical_decompose(series_, period);
            if (spec_.inner_scheme != BootstrapScheme::moving_block &&
                spec_.inner_scheme != BootstrapScheme::stationary)
                fail(Errc::invalid_argument, "decomposed_block",
                     "inner scheme must be moving_block or stationary");
            break;
        }
        default:
            break;
    }
}

Replicate PreparedBootstrap::generate(std::size_t out_len, RandomSource rng) const {
    const std::size_t n = series_.length();
    const double noise = spec_.smoothing_noise_sd;
    switch (spec_.scheme) {
        case BootstrapScheme::model_based:
            return model_based(*external_model_, out_len, rng, noise);
        case BootstrapScheme::moving_block: {
            std::size_t k = spec_.block_len ? spec_.block_len : default_block_length(n);
            check_block_len(k, n, "moving_block");
            return finish(draw_moving_blocks(series_.view(), k, out_len, rng), noise, rng);
        }
        case BootstrapScheme::circular_block: {
            std::size_t k = spec_.block_len ? spec_.block_len : default_block_length(n);
            check_block_len(k, n, "circular_block");
            return finish(draw_circular(series_.view(), k, out_len, rng), noise, rng);
        }
        case BootstrapScheme::block_of_blocks:
            return block_of_blocks(series_, spec_.outer_block, spec_.inner_block, out_len,
                                   rng);
        case BootstrapScheme::stationary: {
            double mean_block = spec_.mean_block > 0.0
                                    ? spec_.mean_block
                                    : static_cast<double>(default_block_length(n));
            if (!(mean_block >= 1.0))
                fail(Errc::mean_block_invalid, "stationary_bootstrap",
                     "mean block must be >= 1");
            return finish(draw_stationary(series_.view(), mean_block, out_len, rng), noise,
                          rng);
        }
        case BootstrapScheme::sieve: {
            TimeSeries sim =
                sieve_model_->simulate(out_len, InnovationMode::resample_residuals, rng);
            std::vector<double> values = sim.values();
            return finish(std::move(values), noise, rng);
        }
        case BootstrapScheme::decomposed_block: {
            if (out_len < n)
                fail(Errc::invalid_argument, "decomposed_block",
                     "out_len must be >= series length");
            const Decomposition& dec = *decomposition_;
            TimeSeries remainder{std::vector<double>(dec.remainder)};
            std::size_t k = spec_.block_len ? spec_.block_len : default_block_length(n);
            std::vector<double> boot_remainder;
            if (spec_.inner_scheme == BootstrapScheme::stationary) {
                double mean_block =
                    spec_.mean_block > 0.0 ? spec_.mean_block : static_cast<double>(k);
                boot_remainder =
                    draw_stationary(remainder.view(), mean_block, out_len, rng);
            } else {
                check_block_len(k, n, "decomposed_block");
                boot_remainder = draw_moving_blocks(remainder.view(), k, out_len, rng);
            }
            TimeSeries recomposed = recompose(dec, boot_remainder, out_len - n);
            std::vector<double> values = recomposed.values();
            add_smoothing_noise(values, noise, rng);
            return {TimeSeries(std::move(values)), rng.stream()};
        }
    }
    fail(Errc::invalid_argument, "PreparedBootstrap::generate", "unknown scheme");
}

}  // namespace jpr
