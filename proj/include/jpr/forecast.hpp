#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jpr/random.hpp"
#include "jpr/series.hpp"

namespace jpr {

/// Model-selection bookkeeping: aic = 2k - 2*loglik, bic = k*ln(n) - 2*loglik.
struct FitReport {
    double log_likelihood = 0.0;  // Gaussian proxy from one-step residuals
    std::size_t n_params = 0;
    std::size_t n_obs = 0;
    double aic = 0.0;
    double bic = 0.0;
};

double aic(std::size_t k, double loglik);
double bic(std::size_t k, std::size_t n, double loglik);

/// Point forecasts over horizons 1..H; sigma stays empty until a bootstrap
/// estimates the per-horizon prediction standard errors.
struct PathForecast {
    std::size_t horizon = 0;
    std::vector<double> point;
    std::vector<double> sigma;
};

enum class SmoothingKind { ses, holt, holt_winters };

/// Exponential-smoothing terminal state. `seasonal[i]` holds the smoothed
/// index for forecast step h with (h-1) % m == i; empty unless Holt-Winters.
struct SmoothingState {
    SmoothingKind kind = SmoothingKind::ses;
    double level = 0.0;
    double trend = 0.0;
    std::vector<double> seasonal;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    std::size_t period = 0;
    std::vector<double> residuals;  // one-step in-sample errors
};

/// One lag-differencing application and the tail of the series it was applied
/// to, kept for forecast reconstruction and simulation re-integration.
struct DifferencingStage {
    std::size_t lag = 0;
    std::vector<double> tail;  // last `lag` values of the pre-image series
};

/// AR(p) on the (optionally differenced) scale, y_t = c + sum phi_i y_{t-i} + e.
struct ARModel {
    std::size_t p = 0;
    std::vector<double> coefficients;
    double intercept = 0.0;
    double innovation_sd = 0.0;
    std::size_t d = 0;
    std::size_t D = 0;
    std::size_t period = 0;
    std::vector<double> residuals;          // on the differenced scale
    std::vector<double> tail;               // last p differenced values
    std::vector<DifferencingStage> stages;  // in application order
};

enum class ArFitMethod { yule_walker, ols };
enum class SelectionCriterion { aic, bic };
enum class InnovationMode { resample_residuals, gaussian };

// alpha/beta/gamma passed as nullopt select the value by grid search over
// {0.01, ..., 0.99} minimizing in-sample one-step squared error.
std::pair<SmoothingState, FitReport> fit_ses(const TimeSeries& series,
                                             std::optional<double> alpha);
std::pair<SmoothingState, FitReport> fit_holt(const TimeSeries& series,
                                              std::optional<double> alpha,
                                              std::optional<double> beta);
std::pair<SmoothingState, FitReport> fit_holt_winters(const TimeSeries& series,
                                                      std::optional<double> alpha,
                                                      std::optional<double> beta,
                                                      std::optional<double> gamma,
                                                      std::size_t period);

std::pair<ARModel, FitReport> fit_ar(const TimeSeries& series, std::size_t p,
                                     ArFitMethod method = ArFitMethod::yule_walker);

/// AR(p) after d simple and D seasonal differencing passes.
std::pair<ARModel, FitReport> fit_ari(const TimeSeries& series, std::size_t p,
                                      std::size_t d, std::size_t D, std::size_t period,
                                      ArFitMethod method = ArFitMethod::yule_walker);

/// Fits every candidate order and keeps the criterion minimizer; ties go to
/// the smaller p. Candidates are compared via the Gaussian proxy of their
/// residuals on the common sample t >= max(p), so AIC/BIC penalties are not
/// distorted by per-order sample sizes.
std::pair<ARModel, FitReport> select_order(const TimeSeries& series,
                                           const std::vector<std::size_t>& p_candidates,
                                           std::size_t d, std::size_t D,
                                           std::size_t period, SelectionCriterion criterion,
                                           ArFitMethod method = ArFitMethod::yule_walker);

PathForecast forecast_path(const SmoothingState& model, std::size_t horizon);
PathForecast forecast_path(const ARModel& model, std::size_t horizon);

/// Runs the fitted recursion forward from the terminal state for `length`
/// steps, drawing innovations from the centered residuals (with replacement)
/// or N(0, sd^2); differencing is re-integrated for ARI models.
TimeSeries simulate(const SmoothingState& model, std::size_t length, InnovationMode mode,
                    RandomSource& rng);
TimeSeries simulate(const ARModel& model, std::size_t length, InnovationMode mode,
                    RandomSource& rng);

/// Reads the external-forecast CSV (header `window,h,point`; windows
/// contiguous from 0, horizons contiguous from 1).
std::vector<PathForecast> load_external_forecasts(const std::string& path);

// ---------------------------------------------------------------------------
// Uniform front end over the concrete models, used by regions/harness/cli.

enum class ModelKind { ses, holt, holt_winters, ar, ari };

struct ForecasterSpec {
    ModelKind kind = ModelKind::ar;
    std::optional<double> alpha;  // nullopt = AUTO
    std::optional<double> beta;
    std::optional<double> gamma;
    std::size_t period = 0;  // Holt-Winters / seasonal differencing
    std::size_t p = 1;
    std::size_t d = 0;
    std::size_t D = 0;
    bool auto_order = false;  // select p over p_candidates
    std::vector<std::size_t> p_candidates;
    SelectionCriterion criterion = SelectionCriterion::aic;
    ArFitMethod method = ArFitMethod::yule_walker;
};

class FittedForecaster {
public:
    FittedForecaster(SmoothingState state, FitReport report)
        : model_(std::move(state)), report_(report) {}
    FittedForecaster(ARModel model, FitReport report)
        : model_(std::move(model)), report_(report) {}

    const FitReport& report() const noexcept { return report_; }
    PathForecast forecast(std::size_t horizon) const;
    TimeSeries simulate(std::size_t length, InnovationMode mode, RandomSource& rng) const;

    const SmoothingState* smoothing() const noexcept {
        return std::get_if<SmoothingState>(&model_);
    }
    const ARModel* ar() const noexcept { return std::get_if<ARModel>(&model_); }

private:
    std::variant<SmoothingState, ARModel> model_;
    FitReport report_;
};

FittedForecaster fit_forecaster(const ForecasterSpec& spec, const TimeSeries& series);

}  // namespace jpr
