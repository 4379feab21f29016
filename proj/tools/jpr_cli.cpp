// Command-line front door: fit models, forecast, build joint prediction
// regions, run rolling-window experiments, generate synthetic series.
//
// Exit codes: 0 success, 1 computation error, 2 usage error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jpr/harness.hpp"
#include "jpr/io.hpp"
#include "jpr/parallel.hpp"

namespace {

struct ModelFlags {
    std::string model = "ar";
    std::string alpha = "auto";
    std::string beta = "auto";
    std::string gamma = "auto";
    std::size_t p = 1;
    std::size_t d = 0;
    std::size_t D = 0;
    std::size_t period = 0;
    std::vector<std::size_t> select_p;
    std::string criterion = "aic";
    std::string fit_method = "yule_walker";
};

void add_model_flags(CLI::App* cmd, ModelFlags& flags) {
    cmd->add_option("--model", flags.model, "Forecasting model")
        ->check(CLI::IsMember({"ses", "holt", "holt_winters", "ar", "ari"}))
        ->capture_default_str();
    cmd->add_option("--alpha-smooth", flags.alpha,
                    "Level smoothing parameter in (0,1), or 'auto'")
        ->capture_default_str();
    cmd->add_option("--beta-smooth", flags.beta,
                    "Trend smoothing parameter in (0,1), or 'auto'")
        ->capture_default_str();
    cmd->add_option("--gamma-smooth", flags.gamma,
                    "Seasonal smoothing parameter in (0,1), or 'auto'")
        ->capture_default_str();
    cmd->add_option("--p", flags.p, "Autoregressive order")->capture_default_str();
    cmd->add_option("--d", flags.d, "Simple differencing order (ari)")
        ->capture_default_str();
    cmd->add_option("--D", flags.D, "Seasonal differencing order (ari)")
        ->capture_default_str();
    cmd->add_option("--period", flags.period,
                    "Season length (holt_winters, seasonal differencing)")
        ->capture_default_str();
    cmd->add_option("--select-p", flags.select_p,
                    "Candidate AR orders; picks the criterion minimizer")
        ->delimiter(',');
    cmd->add_option("--criterion", flags.criterion, "Order-selection criterion")
        ->check(CLI::IsMember({"aic", "bic"}))
        ->capture_default_str();
    cmd->add_option("--fit-method", flags.fit_method, "AR estimation method")
        ->check(CLI::IsMember({"yule_walker", "ols"}))
        ->capture_default_str();
}

std::optional<double> parse_smoothing(const std::string& text, const std::string& name) {
    if (text == "auto") return std::nullopt;
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        jpr::fail(jpr::Errc::invalid_argument, "cli",
                  name + " must be a number or 'auto'");
    }
}

jpr::ForecasterSpec to_spec(const ModelFlags& flags) {
    jpr::ForecasterSpec spec;
    if (flags.model == "ses") spec.kind = jpr::ModelKind::ses;
    else if (flags.model == "holt") spec.kind = jpr::ModelKind::holt;
    else if (flags.model == "holt_winters") spec.kind = jpr::ModelKind::holt_winters;
    else if (flags.model == "ar") spec.kind = jpr::ModelKind::ar;
    else spec.kind = jpr::ModelKind::ari;
    spec.alpha = parse_smoothing(flags.alpha, "--alpha-smooth");
    spec.beta = parse_smoothing(flags.beta, "--beta-smooth");
    spec.gamma = parse_smoothing(flags.gamma, "--gamma-smooth");
    spec.p = flags.p;
    spec.d = flags.d;
    spec.D = flags.D;
    spec.period = flags.period;
    if (!flags.select_p.empty()) {
        spec.auto_order = true;
        spec.p_candidates = flags.select_p;
    }
    spec.criterion = flags.criterion == "bic" ? jpr::SelectionCriterion::bic
                                              : jpr::SelectionCriterion::aic;
    spec.method = flags.fit_method == "ols" ? jpr::ArFitMethod::ols
                                            : jpr::ArFitMethod::yule_walker;
    return spec;
}

struct BootstrapFlags {
    std::string scheme = "model_based";
    std::size_t block_len = 0;
    std::size_t outer_block = 0;
    std::size_t inner_block = 0;
    double mean_block = 0.0;
    std::string sieve_order = "auto";
    double smoothing_noise_sd = 0.0;
    std::string inner_scheme = "moving_block";
};

void add_bootstrap_flags(CLI::App* cmd, BootstrapFlags& flags) {
    cmd->add_option("--bootstrap", flags.scheme, "Resampling scheme")
        ->check(CLI::IsMember({"model_based", "moving_block", "circular_block",
                               "block_of_blocks", "stationary", "sieve",
                               "decomposed_block"}))
        ->capture_default_str();
    cmd->add_option("--block-len", flags.block_len,
                    "Block length k (0 = round(T^(1/3)))")
        ->capture_default_str();
    cmd->add_option("--outer-block", flags.outer_block, "K1 for block_of_blocks")
        ->capture_default_str();
    cmd->add_option("--inner-block", flags.inner_block, "K2 for block_of_blocks")
        ->capture_default_str();
    cmd->add_option("--mean-block", flags.mean_block,
                    "Mean geometric block length (stationary; 0 = default)")
        ->capture_default_str();
    cmd->add_option("--sieve-order", flags.sieve_order, "Sieve AR order, or 'auto'")
        ->capture_default_str();
    cmd->add_option("--smoothing-noise-sd", flags.smoothing_noise_sd,
                    "Gaussian jitter sd added after resampling (smoothed bootstrap)")
        ->capture_default_str();
    cmd->add_option("--inner-scheme", flags.inner_scheme,
                    "Remainder resampler for decomposed_block")
        ->check(CLI::IsMember({"moving_block", "stationary"}))
        ->capture_default_str();
}

jpr::BootstrapSpec to_spec(const BootstrapFlags& flags, std::size_t period) {
    jpr::BootstrapSpec spec;
    auto scheme = [](const std::string& name) {
        if (name == "model_based") return jpr::BootstrapScheme::model_based;
        if (name == "moving_block") return jpr::BootstrapScheme::moving_block;
        if (name == "circular_block") return jpr::BootstrapScheme::circular_block;
        if (name == "block_of_blocks") return jpr::BootstrapScheme::block_of_blocks;
        if (name == "stationary") return jpr::BootstrapScheme::stationary;
        if (name == "sieve") return jpr::BootstrapScheme::sieve;
        return jpr::BootstrapScheme::decomposed_block;
    };
    spec.scheme = scheme(flags.scheme);
    spec.inner_scheme = scheme(flags.inner_scheme);
    spec.block_len = flags.block_len;
    spec.outer_block = flags.outer_block;
    spec.inner_block = flags.inner_block;
    spec.mean_block = flags.mean_block;
    if (flags.sieve_order != "auto")
        spec.sieve_order = static_cast<std::size_t>(std::stoul(flags.sieve_order));
    spec.smoothing_noise_sd = flags.smoothing_noise_sd;
    spec.period = period;
    return spec;
}

unsigned resolve_threads(unsigned flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("JPR_THREADS")) {
        long v = std::atol(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return jpr::default_thread_count();
}

jpr::TimeSeries load_series(const std::string& path, bool impute, std::size_t period) {
    std::vector<double> values = jpr::read_series_csv(path, impute);
    std::optional<std::size_t> p;
    if (period >= 2) p = period;
    return jpr::TimeSeries(std::move(values), p);
}

void print_fit_report(const jpr::FittedForecaster& fitted) {
    const jpr::FitReport& report = fitted.report();
    std::cout << "loglik " << jpr::format_double(report.log_likelihood) << "\n"
              << "n_params " << report.n_params << "\n"
              << "n_obs " << report.n_obs << "\n"
              << "aic " << jpr::format_double(report.aic) << "\n"
              << "bic " << jpr::format_double(report.bic) << "\n";
    if (const jpr::SmoothingState* s = fitted.smoothing()) {
        std::cout << "level " << jpr::format_double(s->level) << "\n";
        std::cout << "trend " << jpr::format_double(s->trend) << "\n";
        std::cout << "alpha " << jpr::format_double(s->alpha) << "\n";
        if (s->kind != jpr::SmoothingKind::ses)
            std::cout << "beta " << jpr::format_double(s->beta) << "\n";
        if (s->kind == jpr::SmoothingKind::holt_winters)
            std::cout << "gamma " << jpr::format_double(s->gamma) << "\n";
    } else if (const jpr::ARModel* ar = fitted.ar()) {
        std::cout << "p " << ar->p << "\n";
        std::cout << "intercept " << jpr::format_double(ar->intercept) << "\n";
        for (std::size_t i = 0; i < ar->coefficients.size(); ++i)
            std::cout << "phi" << (i + 1) << ' '
                      << jpr::format_double(ar->coefficients[i]) << "\n";
        std::cout << "innovation_sd " << jpr::format_double(ar->innovation_sd) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint prediction regions for multi-step time-series forecasts"};
    app.require_subcommand(1);

    // simulate
    jpr::SyntheticSpec synthetic;
    std::string simulate_out;
    CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic series CSV");
    simulate->add_option("--length", synthetic.length, "Observations")
        ->capture_default_str();
    simulate->add_option("--period", synthetic.period, "Season length")
        ->capture_default_str();
    simulate->add_option("--baseline", synthetic.baseline, "Level offset")
        ->capture_default_str();
    simulate->add_option("--slope", synthetic.slope, "Linear trend per step")
        ->capture_default_str();
    simulate->add_option("--amplitude", synthetic.amplitude, "Seasonal amplitude")
        ->capture_default_str();
    simulate->add_option("--noise-sd", synthetic.noise_sd, "Gaussian noise sd")
        ->capture_default_str();
    simulate->add_option("--seed", synthetic.seed, "RNG seed")->required();
    simulate->add_option("--out", simulate_out, "Output CSV path")->required();

    // fit
    ModelFlags fit_model;
    std::string fit_input;
    bool fit_impute = false;
    CLI::App* fit = app.add_subcommand("fit", "Fit a model and print its report");
    fit->add_option("--input", fit_input, "Series CSV (header 'value' or 't,value')")
        ->required();
    fit->add_flag("--impute", fit_impute, "Neighbor-mean imputation for missing values");
    add_model_flags(fit, fit_model);

    // forecast
    ModelFlags forecast_model;
    std::string forecast_input, forecast_out;
    bool forecast_impute = false;
    std::size_t forecast_h = 0;
    CLI::App* forecast = app.add_subcommand("forecast", "Write an H-step path forecast");
    forecast->add_option("--input", forecast_input, "Series CSV")->required();
    forecast->add_flag("--impute", forecast_impute,
                       "Neighbor-mean imputation for missing values");
    forecast->add_option("--H", forecast_h, "Forecast horizon")->required();
    forecast->add_option("--out", forecast_out, "Output CSV path")->required();
    add_model_flags(forecast, forecast_model);

    // region
    ModelFlags region_model;
    BootstrapFlags region_bootstrap;
    std::string region_input, region_out, region_method = "kfwe", region_sided = "two";
    std::string region_sigma = "shared";
    bool region_impute = false;
    double region_alpha = 0.1;
    std::size_t region_k = 1, region_h = 0, region_b = 1000, region_b_inner = 100;
    std::uint64_t region_seed = 0;
    unsigned region_threads = 0;
    CLI::App* region = app.add_subcommand("region", "Construct a joint prediction region");
    region->add_option("--input", region_input, "Series CSV")->required();
    region->add_flag("--impute", region_impute,
                     "Neighbor-mean imputation for missing values");
    region->add_option("--method", region_method, "Region construction")
        ->check(CLI::IsMember({"kfwe", "bonferroni", "bh", "sidak", "scheffe", "np"}))
        ->capture_default_str();
    region->add_option("--alpha", region_alpha, "Joint significance level")->required();
    region->add_option("--k", region_k, "k-FWE tolerance (errors allowed + 1)")
        ->capture_default_str();
    region->add_option("--H", region_h, "Forecast horizon")->required();
    region->add_option("--B", region_b, "Bootstrap replicates")->capture_default_str();
    region->add_option("--sided", region_sided, "Region sidedness (kfwe only)")
        ->check(CLI::IsMember({"two", "lower", "upper"}))
        ->capture_default_str();
    region->add_option("--sigma", region_sigma, "Prediction-sd estimation mode")
        ->check(CLI::IsMember({"shared", "double"}))
        ->capture_default_str();
    region->add_option("--B-inner", region_b_inner,
                       "Inner replicates for --sigma double")
        ->capture_default_str();
    region->add_option("--seed", region_seed, "RNG seed")->required();
    region->add_option("--threads", region_threads,
                       "Worker threads (0 = machine parallelism)")
        ->capture_default_str();
    region->add_option("--out", region_out, "Output CSV path")->required();
    add_model_flags(region, region_model);
    add_bootstrap_flags(region, region_bootstrap);

    // evaluate
    std::string evaluate_config, evaluate_out;
    unsigned evaluate_threads = 0;
    CLI::App* evaluate =
        app.add_subcommand("evaluate", "Run the rolling-window coverage experiment");
    evaluate->add_option("--config", evaluate_config, "Experiment key=value file")
        ->required();
    evaluate->add_option("--out", evaluate_out, "Report CSV path")->required();
    evaluate->add_option("--threads", evaluate_threads,
                         "Worker threads (overrides config; 0 = machine parallelism)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    // Conflicting flags are rejected before any computation.
    if (*region && region_method != "kfwe" && region_sided != "two") {
        std::cerr << "jpr: --sided applies only to --method kfwe\n";
        return 2;
    }

    try {
        if (*simulate) {
            jpr::write_series_csv(simulate_out, jpr::generate_synthetic(synthetic));
        } else if (*fit) {
            jpr::ForecasterSpec spec = to_spec(fit_model);
            jpr::TimeSeries series = load_series(fit_input, fit_impute, fit_model.period);
            print_fit_report(jpr::fit_forecaster(spec, series));
        } else if (*forecast) {
            jpr::ForecasterSpec spec = to_spec(forecast_model);
            jpr::TimeSeries series =
                load_series(forecast_input, forecast_impute, forecast_model.period);
            jpr::FittedForecaster fitted = jpr::fit_forecaster(spec, series);
            jpr::write_forecast_csv(forecast_out, fitted.forecast(forecast_h));
        } else if (*region) {
            jpr::ForecasterSpec fspec = to_spec(region_model);
            jpr::BootstrapSpec bspec = to_spec(region_bootstrap, region_model.period);
            jpr::TimeSeries series =
                load_series(region_input, region_impute, region_model.period);

            if (region_b < 1000)
                std::cerr << "warning: B = " << region_b
                          << " bootstrap replicates; at least 1000 recommended\n";

            jpr::EnsembleOptions options;
            options.horizon = region_h;
            options.replicates = region_b;
            options.sigma_mode = region_sigma == "double"
                                     ? jpr::SigmaMode::double_bootstrap
                                     : jpr::SigmaMode::shared;
            options.inner_replicates = region_b_inner;
            options.seed = region_seed;
            options.threads = resolve_threads(region_threads);

            jpr::JointRegion out_region;
            jpr::PathForecast center;
            if (region_method == "kfwe") {
                jpr::Sidedness sided = region_sided == "lower" ? jpr::Sidedness::lower
                                       : region_sided == "upper" ? jpr::Sidedness::upper
                                                                 : jpr::Sidedness::two;
                if (region_b < 100)
                    jpr::fail(jpr::Errc::bootstrap_count_invalid, "kfwe_region",
                              "need B >= 100");
                jpr::BootstrapEnsemble ensemble =
                    jpr::run_bootstrap_ensemble(series, fspec, bspec, options);
                jpr::MultiplierSet m =
                    jpr::kfwe_multipliers(ensemble.standardized, region_k, region_alpha);
                out_region = jpr::assemble_kfwe_region(
                    ensemble.center, ensemble.sigma.sigma, m, region_k, region_alpha,
                    sided);
                center = ensemble.center;
            } else {
                jpr::BootstrapEnsemble ensemble =
                    jpr::run_bootstrap_ensemble(series, fspec, bspec, options);
                center = ensemble.center;
                if (region_method == "bonferroni") {
                    out_region = jpr::marginal_region(
                        ensemble.center, ensemble.sigma, ensemble.standardized,
                        jpr::bonferroni_levels(region_alpha, region_h),
                        jpr::RegionMethod::bonferroni, region_alpha);
                } else if (region_method == "bh" || region_method == "sidak") {
                    std::vector<double> levels =
                        region_method == "bh" ? jpr::bh_levels(region_alpha, region_h)
                                              : jpr::sidak_levels(region_alpha, region_h);
                    for (double& level : levels) level = 1.0 - level;
                    out_region = jpr::marginal_region(
                        ensemble.center, ensemble.sigma, ensemble.standardized, levels,
                        region_method == "bh" ? jpr::RegionMethod::bh
                                              : jpr::RegionMethod::sidak,
                        region_alpha);
                } else if (region_method == "scheffe") {
                    out_region = jpr::modified_scheffe_region(
                        ensemble.center, jpr::estimate_cov(ensemble.errors), region_alpha,
                        series.length());
                } else {
                    out_region = jpr::np_heuristic_region(
                        ensemble.center, ensemble.replicate_paths, region_alpha);
                }
            }
            jpr::write_region_csv(region_out, out_region, center);
        } else if (*evaluate) {
            auto entries = jpr::read_config_file(evaluate_config);
            std::string series_path;
            bool impute = false;
            std::vector<std::pair<std::string, std::string>> rest;
            for (const auto& [key, value] : entries) {
                if (key == "series") {
                    series_path = value;
                } else if (key == "impute") {
                    impute = value == "true" || value == "1";
                } else {
                    rest.emplace_back(key, value);
                }
            }
            if (series_path.empty())
                jpr::fail(jpr::Errc::parse_error, "evaluate",
                          "config must name a 'series' CSV");
            jpr::ExperimentConfig config = jpr::parse_experiment_config(rest);
            config.threads = resolve_threads(evaluate_threads > 0 ? evaluate_threads
                                                                  : config.threads);
            jpr::TimeSeries series = load_series(series_path, impute,
                                                 config.forecaster.period);
            jpr::EvalReport report = jpr::rolling_eval(series, config);
            jpr::emit_report(report, evaluate_out);
        }
    } catch (const jpr::Error& e) {
        std::cerr << "jpr: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "jpr: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
