#include "jpr/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "jpr/io.hpp"
#include "jpr/random.hpp"

namespace jpr {

namespace {

double seasonal_shape(double u) {
    return u < 0.4 ? std::cos(2.0 * std::numbers::pi * u) : std::exp(-3.0 * u);
}

PathForecast truncate_path(const PathForecast& path, std::size_t horizon) {
    PathForecast out;
    out.horizon = horizon;
    out.point.assign(path.point.begin(),
                     path.point.begin() + static_cast<std::ptrdiff_t>(horizon));
    if (path.sigma.size() >= horizon)
        out.sigma.assign(path.sigma.begin(),
                         path.sigma.begin() + static_cast<std::ptrdiff_t>(horizon));
    return out;
}

// Everything the per-cell region constructions need for one window, derived
// once per distinct horizon.
struct HorizonSlice {
    PathForecast center;
    std::vector<double> sigma;
    ErrorMatrix standardized{2, 1};
    ErrorMatrix errors{2, 1};
    std::vector<PathForecast> paths;
};

JointRegion build_cell_region(const CellKey& cell, const HorizonSlice& slice,
                              std::size_t window_len) {
    switch (cell.method) {
        case RegionMethod::kfwe: {
            MultiplierSet m = kfwe_multipliers(slice.standardized, cell.k, cell.alpha);
            return assemble_kfwe_region(slice.center, slice.sigma, m, cell.k, cell.alpha,
                                        Sidedness::two);
        }
        case RegionMethod::bonferroni:
            return marginal_region(slice.center, {slice.sigma, SigmaMethod::shared},
                                   slice.standardized,
                                   bonferroni_levels(cell.alpha, cell.horizon),
                                   RegionMethod::bonferroni, cell.alpha);
        case RegionMethod::bh: {
            std::vector<double> levels = bh_levels(cell.alpha, cell.horizon);
            for (double& level : levels) level = 1.0 - level;
            return marginal_region(slice.center, {slice.sigma, SigmaMethod::shared},
                                   slice.standardized, levels, RegionMethod::bh,
                                   cell.alpha);
        }
        case RegionMethod::sidak: {
            std::vector<double> levels = sidak_levels(cell.alpha, cell.horizon);
            for (double& level : levels) level = 1.0 - level;
            return marginal_region(slice.center, {slice.sigma, SigmaMethod::shared},
                                   slice.standardized, levels, RegionMethod::sidak,
                                   cell.alpha);
        }
        case RegionMethod::scheffe: {
            SquareMatrix cov = estimate_cov(slice.errors);
            return modified_scheffe_region(slice.center, cov, cell.alpha, window_len);
        }
        case RegionMethod::np:
            return np_heuristic_region(slice.center, slice.paths, cell.alpha);
    }
    fail(Errc::invalid_argument, "rolling_eval", "unknown region method");
}

}  // namespace

TimeSeries generate_synthetic(const SyntheticSpec& spec) {
    if (spec.period < 2)
        fail(Errc::period_invalid, "generate_synthetic", "period must be >= 2");
    if (spec.length < 4 * spec.period)
        fail(Errc::series_too_short, "generate_synthetic", "need length >= 4*period");
    if (spec.noise_sd < 0.0)
        fail(Errc::invalid_argument, "generate_synthetic", "noise_sd must be >= 0");

    RandomSource rng(spec.seed, 0);
    std::vector<double> values(spec.length);
    for (std::size_t t = 0; t < spec.length; ++t) {
        double u = static_cast<double>(t % spec.period) / static_cast<double>(spec.period);
        double noise = spec.noise_sd > 0.0 ? spec.noise_sd * rng.normal() : 0.0;
        values[t] = spec.baseline + spec.slope * static_cast<double>(t) +
                    spec.amplitude * seasonal_shape(u) + noise;
    }
    return TimeSeries(std::move(values), spec.period);
}

std::vector<CellKey> enumerate_cells(const ExperimentConfig& config) {
    std::vector<std::size_t> h_list = config.h_list;
    std::vector<std::size_t> k_list = config.k_list;
    std::vector<double> alpha_list = config.alpha_list;
    std::sort(h_list.begin(), h_list.end());
    h_list.erase(std::unique(h_list.begin(), h_list.end()), h_list.end());
    std::sort(k_list.begin(), k_list.end());
    k_list.erase(std::unique(k_list.begin(), k_list.end()), k_list.end());
    std::sort(alpha_list.begin(), alpha_list.end());
    alpha_list.erase(std::unique(alpha_list.begin(), alpha_list.end()), alpha_list.end());

    std::vector<RegionMethod> methods;
    for (RegionMethod method : config.methods)
        if (std::find(methods.begin(), methods.end(), method) == methods.end())
            methods.push_back(method);

    std::vector<CellKey> cells;
    for (RegionMethod method : methods) {
        for (double alpha : alpha_list) {
            for (std::size_t horizon : h_list) {
                if (method == RegionMethod::kfwe) {
                    for (std::size_t k : k_list)
                        if (k >= 1 && k <= horizon)
                            cells.push_back({method, alpha, k, horizon});
                } else {
                    cells.push_back({method, alpha, 1, horizon});
                }
            }
        }
    }
    return cells;
}

EvalReport rolling_eval(const TimeSeries& series, const ExperimentConfig& config) {
    WindowRegionBuilder builder = [&config](std::size_t window_index,
                                            const TimeSeries& train,
                                            const std::vector<CellKey>& cells) {
        std::size_t h_max = 0;
        for (const CellKey& cell : cells) h_max = std::max(h_max, cell.horizon);

        EnsembleOptions options;
        options.horizon = h_max;
        options.replicates = config.replicates;
        options.sigma_mode = config.sigma_mode;
        options.inner_replicates = config.inner_replicates;
        options.seed = config.seed;
        options.stream_base = static_cast<std::uint64_t>(window_index) << 32;
        options.threads = config.threads;
        BootstrapEnsemble ensemble =
            run_bootstrap_ensemble(train, config.forecaster, config.bootstrap, options);

        std::map<std::size_t, HorizonSlice> slices;
        auto slice_for = [&](std::size_t horizon) -> const HorizonSlice& {
            auto it = slices.find(horizon);
            if (it != slices.end()) return it->second;
            HorizonSlice slice;
            slice.center = truncate_path(ensemble.center, horizon);
            slice.sigma.assign(ensemble.sigma.sigma.begin(),
                               ensemble.sigma.sigma.begin() +
                                   static_cast<std::ptrdiff_t>(horizon));
            slice.standardized = ensemble.standardized.truncated(horizon);
            slice.errors = ensemble.errors.truncated(horizon);
            slice.paths.reserve(ensemble.replicate_paths.size());
            for (const PathForecast& p : ensemble.replicate_paths)
                slice.paths.push_back(truncate_path(p, horizon));
            return slices.emplace(horizon, std::move(slice)).first->second;
        };

        std::vector<JointRegion> regions;
        regions.reserve(cells.size());
        for (const CellKey& cell : cells)
            regions.push_back(
                build_cell_region(cell, slice_for(cell.horizon), train.length()));
        return regions;
    };
    return rolling_eval(series, config, builder);
}

EvalReport rolling_eval(const TimeSeries& series, const ExperimentConfig& config,
                        const WindowRegionBuilder& builder) {
    if (config.n_windows == 0)
        fail(Errc::invalid_argument, "rolling_eval", "n_windows must be >= 1");
    if (config.replicates < 2)
        fail(Errc::bootstrap_count_invalid, "rolling_eval",
             "B must be set explicitly (>= 2)");
    if (config.h_list.empty() || config.k_list.empty() || config.alpha_list.empty() ||
        config.methods.empty())
        fail(Errc::invalid_argument, "rolling_eval",
             "H_list, k_list, alpha_list, and methods must be nonempty");
    for (double alpha : config.alpha_list)
        if (!(alpha > 0.0 && alpha < 1.0))
            fail(Errc::p_out_of_range, "rolling_eval", "alpha must lie in (0, 1)");

    const std::vector<CellKey> cells = enumerate_cells(config);
    if (cells.empty())
        fail(Errc::invalid_argument, "rolling_eval", "no evaluable (method,alpha,k,H) cells");
    std::size_t h_max = 0;
    for (const CellKey& cell : cells) h_max = std::max(h_max, cell.horizon);

    const std::size_t needed =
        config.window_len + (config.n_windows - 1) * config.step + h_max;
    if (needed > series.length())
        fail(Errc::config_too_large, "rolling_eval",
             "need " + std::to_string(needed) + " observations, have " +
                 std::to_string(series.length()));

    std::vector<std::size_t> successes(cells.size(), 0);
    std::vector<double> width_sums(cells.size(), 0.0);

    for (std::size_t w = 0; w < config.n_windows; ++w) {
        const std::size_t start = w * config.step;
        TimeSeries train = series.slice(start, config.window_len);
        std::span<const double> truth(series.values().data() + start + config.window_len,
                                      h_max);

        std::vector<JointRegion> regions = builder(w, train, cells);
        if (regions.size() != cells.size())
            fail(Errc::length_mismatch, "rolling_eval",
                 "builder returned a region count different from the cell count");

        for (std::size_t c = 0; c < cells.size(); ++c) {
            const CellKey& cell = cells[c];
            ContainsResult result =
                contains(regions[c], truth.subspan(0, cell.horizon), cell.k);
            if (result.success) ++successes[c];
            width_sums[c] += geometric_width(regions[c]);
        }
    }

    EvalReport report;
    report.n_windows = config.n_windows;
    report.cells.resize(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        report.cells[c].key = cells[c];
        report.cells[c].successes = successes[c];
        report.cells[c].mean_geom_width =
            width_sums[c] / static_cast<double>(config.n_windows);
    }
    return report;
}

void emit_report(const EvalReport& report, const std::string& path) {
    if (report.cells.empty())
        fail(Errc::invalid_argument, "emit_report", "report has no cells");

    std::vector<EvalCell> cells = report.cells;
    std::sort(cells.begin(), cells.end(), [](const EvalCell& a, const EvalCell& b) {
        auto key = [](const EvalCell& c) {
            return std::make_tuple(region_method_name(c.key.method), c.key.alpha, c.key.k,
                                   c.key.horizon);
        };
        return key(a) < key(b);
    });

    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io_error, "emit_report", "cannot open " + path);
    out << "method,alpha,k,H,coverage,mean_geom_width\n";
    for (const EvalCell& cell : cells)
        out << region_method_name(cell.key.method) << ',' << format_double(cell.key.alpha)
            << ',' << cell.key.k << ',' << cell.key.horizon << ',' << cell.successes << ','
            << format_double(cell.mean_geom_width) << "\n";
    if (!out) fail(Errc::io_error, "emit_report", "write failed for " + path);
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

double to_double(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        fail(Errc::parse_error, "parse_experiment_config",
             "key '" + key + "': expected a number, got '" + value + "'");
    }
}

std::size_t to_count(const std::string& value, const std::string& key) {
    double v = to_double(value, key);
    if (v < 0 || v != std::floor(v))
        fail(Errc::parse_error, "parse_experiment_config",
             "key '" + key + "': expected a nonnegative integer");
    return static_cast<std::size_t>(v);
}

RegionMethod to_method(const std::string& name) {
    if (name == "kfwe") return RegionMethod::kfwe;
    if (name == "bonferroni") return RegionMethod::bonferroni;
    if (name == "bh") return RegionMethod::bh;
    if (name == "sidak") return RegionMethod::sidak;
    if (name == "scheffe") return RegionMethod::scheffe;
    if (name == "np") return RegionMethod::np;
    fail(Errc::parse_error, "parse_experiment_config", "unknown method '" + name + "'");
}

BootstrapScheme to_scheme(const std::string& name) {
    if (name == "model_based") return BootstrapScheme::model_based;
    if (name == "moving_block") return BootstrapScheme::moving_block;
    if (name == "circular_block") return BootstrapScheme::circular_block;
    if (name == "block_of_blocks") return BootstrapScheme::block_of_blocks;
    if (name == "stationary") return BootstrapScheme::stationary;
    if (name == "sieve") return BootstrapScheme::sieve;
    if (name == "decomposed_block") return BootstrapScheme::decomposed_block;
    fail(Errc::parse_error, "parse_experiment_config", "unknown bootstrap '" + name + "'");
}

ModelKind to_model(const std::string& name) {
    if (name == "ses") return ModelKind::ses;
    if (name == "holt") return ModelKind::holt;
    if (name == "holt_winters") return ModelKind::holt_winters;
    if (name == "ar") return ModelKind::ar;
    if (name == "ari") return ModelKind::ari;
    fail(Errc::parse_error, "parse_experiment_config", "unknown forecaster '" + name + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config(
    const std::vector<std::pair<std::string, std::string>>& entries) {
    ExperimentConfig config;
    bool have_seed = false, have_b = false;

    for (const auto& [key, value] : entries) {
        if (key == "window_len") {
            config.window_len = to_count(value, key);
        } else if (key == "step") {
            config.step = to_count(value, key);
        } else if (key == "n_windows") {
            config.n_windows = to_count(value, key);
        } else if (key == "H_list") {
            for (const std::string& s : split_list(value))
                config.h_list.push_back(to_count(s, key));
        } else if (key == "k_list") {
            for (const std::string& s : split_list(value))
                config.k_list.push_back(to_count(s, key));
        } else if (key == "alpha_list") {
            for (const std::string& s : split_list(value))
                config.alpha_list.push_back(to_double(s, key));
        } else if (key == "B") {
            config.replicates = to_count(value, key);
            have_b = true;
        } else if (key == "methods") {
            for (const std::string& s : split_list(value))
                config.methods.push_back(to_method(s));
        } else if (key == "seed") {
            config.seed = static_cast<std::uint64_t>(to_count(value, key));
            have_seed = true;
        } else if (key == "threads") {
            config.threads = static_cast<unsigned>(to_count(value, key));
        } else if (key == "sigma") {
            if (value == "shared") {
                config.sigma_mode = SigmaMode::shared;
            } else if (value == "double") {
                config.sigma_mode = SigmaMode::double_bootstrap;
            } else {
                fail(Errc::parse_error, "parse_experiment_config",
                     "sigma must be 'shared' or 'double'");
            }
        } else if (key == "B_inner") {
            config.inner_replicates = to_count(value, key);
        } else if (key == "forecaster") {
            config.forecaster.kind = to_model(value);
        } else if (key == "alpha_smooth") {
            config.forecaster.alpha = to_double(value, key);
        } else if (key == "beta_smooth") {
            config.forecaster.beta = to_double(value, key);
        } else if (key == "gamma_smooth") {
            config.forecaster.gamma = to_double(value, key);
        } else if (key == "p") {
            config.forecaster.p = to_count(value, key);
        } else if (key == "d") {
            config.forecaster.d = to_count(value, key);
        } else if (key == "D") {
            config.forecaster.D = to_count(value, key);
        } else if (key == "period") {
            config.forecaster.period = to_count(value, key);
            config.bootstrap.period = config.forecaster.period;
        } else if (key == "select_p") {
            config.forecaster.auto_order = true;
            for (const std::string& s : split_list(value))
                config.forecaster.p_candidates.push_back(to_count(s, key));
        } else if (key == "criterion") {
            if (value == "aic") {
                config.forecaster.criterion = SelectionCriterion::aic;
            } else if (value == "bic") {
                config.forecaster.criterion = SelectionCriterion::bic;
            } else {
                fail(Errc::parse_error, "parse_experiment_config",
                     "criterion must be 'aic' or 'bic'");
            }
        } else if (key == "fit_method") {
            if (value == "yule_walker") {
                config.forecaster.method = ArFitMethod::yule_walker;
            } else if (value == "ols") {
                config.forecaster.method = ArFitMethod::ols;
            } else {
                fail(Errc::parse_error, "parse_experiment_config",
                     "fit_method must be 'yule_walker' or 'ols'");
            }
        } else if (key == "bootstrap") {
            config.bootstrap.scheme = to_scheme(value);
        } else if (key == "inner_scheme") {
            config.bootstrap.inner_scheme = to_scheme(value);
        } else if (key == "block_len") {
            config.bootstrap.block_len = to_count(value, key);
        } else if (key == "outer_block") {
            config.bootstrap.outer_block = to_count(value, key);
        } else if (key == "inner_block") {
            config.bootstrap.inner_block = to_count(value, key);
        } else if (key == "mean_block") {
            config.bootstrap.mean_block = to_double(value, key);
        } else if (key == "sieve_order") {
            config.bootstrap.sieve_order = value == "auto" ? 0 : to_count(value, key);
        } else if (key == "smoothing_noise_sd") {
            config.bootstrap.smoothing_noise_sd = to_double(value, key);
        } else {
            fail(Errc::parse_error, "parse_experiment_config", "unknown key '" + key + "'");
        }
    }

    if (!have_seed)
        fail(Errc::parse_error, "parse_experiment_config",
             "experiments require an explicit seed");
    if (!have_b)
        fail(Errc::parse_error, "parse_experiment_config",
             "experiments require an explicit B");
    return config;
}

}  // namespace jpr
