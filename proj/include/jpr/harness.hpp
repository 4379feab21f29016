#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "jpr/bootstrap.hpp"
#include "jpr/forecast.hpp"
#include "jpr/regions.hpp"
#include "jpr/series.hpp"

namespace jpr {

/// trend + seasonal waveform + Gaussian noise; the seasonal shape g(u) is
/// cos(2*pi*u) for u < 0.4 and exp(-3u) past it, scaled by amplitude.
struct SyntheticSpec {
    std::size_t length = 3651;
    std::size_t period = 30;
    double baseline = 10.0;
    double slope = 0.05;
    double amplitude = 40.0;
    double noise_sd = 5.0;
    std::uint64_t seed = 0;
};

TimeSeries generate_synthetic(const SyntheticSpec& spec);

struct ExperimentConfig {
    std::size_t window_len = 2245;
    std::size_t step = 10;
    std::size_t n_windows = 100;
    std::vector<std::size_t> h_list;
    std::vector<std::size_t> k_list;
    std::vector<double> alpha_list;
    std::size_t replicates = 0;  // B; experiments must set it explicitly
    std::vector<RegionMethod> methods;
    ForecasterSpec forecaster;
    BootstrapSpec bootstrap;
    SigmaMode sigma_mode = SigmaMode::shared;
    std::size_t inner_replicates = 100;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0 = machine parallelism
};

struct CellKey {
    RegionMethod method;
    double alpha;
    std::size_t k;
    std::size_t horizon;
};

struct EvalCell {
    CellKey key;
    std::size_t successes = 0;
    double mean_geom_width = 0.0;  // arithmetic mean of per-window w_geom
};

struct EvalReport {
    std::size_t n_windows = 0;
    std::vector<EvalCell> cells;
};

/// The configured (method, alpha, k, H) grid in a fixed deterministic order.
/// k varies only for the k-FWE method; every other method is judged at k = 1.
std::vector<CellKey> enumerate_cells(const ExperimentConfig& config);

/// Builds the region for every cell of one training window, in cell order.
/// The default builder runs one bootstrap ensemble per window at max(H) and
/// derives every cell from it; tests may substitute a stub.
using WindowRegionBuilder = std::function<std::vector<JointRegion>(
    std::size_t window_index, const TimeSeries& train, const std::vector<CellKey>& cells)>;

/// The rolling-window protocol: window i trains on observations
/// [i*step, i*step + window_len) and is judged against the next max(H)
/// observations; successes count windows whose realized path missed at most
/// k-1 horizons.
EvalReport rolling_eval(const TimeSeries& series, const ExperimentConfig& config);
EvalReport rolling_eval(const TimeSeries& series, const ExperimentConfig& config,
                        const WindowRegionBuilder& builder);

/// Report CSV: `method,alpha,k,H,coverage,mean_geom_width`, rows sorted by
/// (method, alpha, k, H); byte-identical for identical reports.
void emit_report(const EvalReport& report, const std::string& path);

/// Parses the flat `key = value` experiment file (see README for keys).
/// The series itself is loaded separately.
ExperimentConfig parse_experiment_config(
    const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace jpr
