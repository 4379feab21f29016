#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "jpr/decompose.hpp"
#include "jpr/forecast.hpp"
#include "jpr/random.hpp"
#include "jpr/series.hpp"

namespace jpr {

enum class BootstrapScheme {
    model_based,
    moving_block,
    circular_block,
    block_of_blocks,
    stationary,
    sieve,
    decomposed_block,
};

/// Scheme selection plus the scheme-dependent knobs. block_len == 0 (or
/// mean_block == 0) selects default_block_length(T). sieve_order == 0 selects
/// the order by AIC over p in {1 .. ceil(10*log10(T))}.
struct BootstrapSpec {
    BootstrapScheme scheme = BootstrapScheme::moving_block;
    std::size_t block_len = 0;
    std::size_t outer_block = 0;  // K1, block_of_blocks
    std::size_t inner_block = 0;  // K2, block_of_blocks
    double mean_block = 0.0;      // stationary
    std::size_t sieve_order = 0;  // 0 = AUTO
    double smoothing_noise_sd = 0.0;
    std::size_t period = 0;  // decomposed_block
    BootstrapScheme inner_scheme = BootstrapScheme::moving_block;  // decomposed_block
};

/// A surrogate series of length out_len (= T+H for region construction) plus
/// the stream that produced it.
struct Replicate {
    TimeSeries series;
    std::uint64_t stream_id = 0;
};

/// round(n^(1/3)), minimum 1.
std::size_t default_block_length(std::size_t n);

Replicate moving_block(const TimeSeries& series, std::size_t block_len,
                       std::size_t out_len, RandomSource rng);
Replicate circular_block(const TimeSeries& series, std::size_t block_len,
                         std::size_t out_len, RandomSource rng);
Replicate block_of_blocks(const TimeSeries& series, std::size_t outer_block,
                          std::size_t inner_block, std::size_t out_len, RandomSource rng);
Replicate stationary_bootstrap(const TimeSeries& series, double mean_block,
                               std::size_t out_len, RandomSource rng);
Replicate sieve_bootstrap(const TimeSeries& series, std::size_t order,
                          std::size_t out_len, RandomSource rng);
Replicate model_based(const FittedForecaster& model, std::size_t out_len,
                      RandomSource rng, double smoothing_noise_sd = 0.0);
Replicate decomposed_block(const TimeSeries& series, std::size_t period,
                           BootstrapScheme inner_scheme, std::size_t block_len,
                           std::size_t extension, RandomSource rng);

/// Pre-fits whatever the scheme needs (decomposition, sieve AR, the supplied
/// model for model_based) so replicate generation is a pure draw per stream.
class PreparedBootstrap {
public:
    PreparedBootstrap(const TimeSeries& series, BootstrapSpec spec,
                      const FittedForecaster* model = nullptr);

    /// Deterministic in (seed, stream): one stream per replicate.
    Replicate generate(std::size_t out_len, RandomSource rng) const;

    const BootstrapSpec& spec() const noexcept { return spec_; }

private:
    TimeSeries series_;
    BootstrapSpec spec_;
    const FittedForecaster* external_model_ = nullptr;
    std::optional<FittedForecaster> sieve_model_;
    std::optional<Decomposition> decomposition_;
};

}  // namespace jpr
