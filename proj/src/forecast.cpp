#include "jpr/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include "jpr/stats.hpp"

namespace jpr {

namespace {

constexpr double kAutoGridStart = 0.01;
constexpr double kAutoGridStep = 0.01;
constexpr int kAutoGridPoints = 99;

double gaussian_loglik_proxy(std::span<const double> residuals) {
    double ss = 0.0;
    for (double e : residuals) ss += e * e;
    double n = static_cast<double>(residuals.size());
    double var = std::max(ss / n, 1e-300);
    return -(n / 2.0) * (std::log(2.0 * std::numbers::pi * var) + 1.0);
}

void check_smoothing_param(const std::optional<double>& value, std::string_view op,
                           std::string_view name) {
    if (value && !(*value >= 0.0 && *value <= 1.0))
        fail(Errc::invalid_argument, op, std::string(name) + " must lie in [0, 1]");
}

FitReport make_report(std::span<const double> residuals, std::size_t n_params) {
    FitReport report;
    report.log_likelihood = gaussian_loglik_proxy(residuals);
    report.n_params = n_params;
    report.n_obs = residuals.size();
    report.aic = aic(n_params, report.log_likelihood);
    report.bic = bic(n_params, residuals.size(), report.log_likelihood);
    return report;
}

struct SmoothingRun {
    SmoothingState state;
    double sse = 0.0;
};

SmoothingRun run_ses(const TimeSeries& series, double alpha) {
    const std::vector<double>& y = series.values();
    SmoothingState st;
    st.kind = SmoothingKind::ses;
    st.alpha = alpha;
    st.level = y[0];
    double sse = 0.0;
    st.residuals.reserve(y.size() - 1);
    for (std::size_t t = 1; t < y.size(); ++t) {
        double err = y[t] - st.level;
        st.residuals.push_back(err);
        sse += err * err;
        st.level = alpha * y[t] + (1.0 - alpha) * st.level;
    }
    return {std::move(st), sse};
}

SmoothingRun run_holt(const TimeSeries& series, double alpha, double beta) {
    const std::vector<double>& y = series.values();
    SmoothingState st;
    st.kind = SmoothingKind::holt;
    st.alpha = alpha;
    st.beta = beta;
    st.level = y[0];
    st.trend = y[1] - y[0];
    double sse = 0.0;
    st.residuals.reserve(y.size() - 1);
    for (std::size_t t = 1; t < y.size(); ++t) {
        double prior = st.level + st.trend;
        double err = y[t] - prior;
        st.residuals.push_back(err);
        sse += err * err;
        double level = alpha * y[t] + (1.0 - alpha) * prior;
        st.trend = beta * (level - st.level) + (1.0 - beta) * st.trend;
        st.level = level;
    }
    return {std::move(st), sse};
}

SmoothingRun run_holt_winters(const TimeSeries& series, double alpha, double beta,
                              double gamma, std::size_t m) {
    const std::vector<double>& y = series.values();
    SmoothingState st;
    st.kind = SmoothingKind::holt_winters;
    st.alpha = alpha;
    st.beta = beta;
    st.gamma = gamma;
    st.period = m;

    // First two seasons set the starting level, trend, and seasonal indices.
    double season1 = 0.0, season2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        season1 += y[i];
        season2 += y[m + i];
    }
    season1 /= static_cast<double>(m);
    season2 /= static_cast<double>(m);
    st.level = season1;
    st.trend = (season2 - season1) / static_cast<double>(m);
    st.seasonal.resize(m);
    for (std::size_t i = 0; i < m; ++i) st.seasonal[i] = y[i] - season1;

    // st.seasonal acts as a ring ordered oldest-first: seasonal[0] is the
    // index used by the next one-step forecast.
    double sse = 0.0;
    st.residuals.reserve(y.size() - m);
    for (std::size_t t = m; t < y.size(); ++t) {
        double s_old = st.seasonal[0];
        double prior = st.level + st.trend + s_old;
        double err = y[t] - prior;
        st.residuals.push_back(err);
        sse += err * err;
        double level = alpha * (y[t] - s_old) + (1.0 - alpha) * (st.level + st.trend);
        double trend = beta * (level - st.level) + (1.0 - beta) * st.trend;
        double s_new = gamma * (y[t] - st.level - st.trend) + (1.0 - gamma) * s_old;
        st.seasonal.erase(st.seasonal.begin());
        st.seasonal.push_back(s_new);
        st.level = level;
        st.trend = trend;
    }
    return {std::move(st), sse};
}

// Grid search over {0.01, ..., 0.99} for one parameter at a time; multi
// parameter models cycle until the sweep stops improving.
template <typename RunFn>
std::vector<double> auto_select(std::vector<std::optional<double>> fixed, RunFn&& run) {
    std::vector<double> params(fixed.size());
    std::vector<bool> free(fixed.size());
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        free[i] = !fixed[i].has_value();
        params[i] = fixed[i].value_or(0.2);
    }
    double best = run(params);
    for (int sweep = 0; sweep < 4; ++sweep) {
        bool improved = false;
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (!free[i]) continue;
            double best_value = params[i];
            for (int g = 0; g < kAutoGridPoints; ++g) {
                double candidate = kAutoGridStart + kAutoGridStep * g;
                std::vector<double> trial = params;
                trial[i] = candidate;
                double sse = run(trial);
                if (sse < best) {
                    best = sse;
                    best_value = candidate;
                    improved = true;
                }
            }
            params[i] = best_value;
        }
        if (!improved) break;
    }
    return params;
}

std::vector<double> durbin_levinson(const std::vector<double>& r, std::size_t p,
                                    std::string_view op) {
    std::vector<double> phi(p, 0.0), prev(p, 0.0);
    phi[0] = r[0];
    for (std::size_t k = 2; k <= p; ++k) {
        prev = phi;
        double num = r[k - 1];
        double den = 1.0;
        for (std::size_t j = 1; j < k; ++j) {
            num -= prev[j - 1] * r[k - 1 - j];
            den -= prev[j - 1] * r[j - 1];
        }
        if (std::abs(den) < 1e-12)
            fail(Errc::singular_system, op, "Yule-Walker system is singular");
        double phi_kk = num / den;
        for (std::size_t j = 1; j < k; ++j)
            phi[j - 1] = prev[j - 1] - phi_kk * prev[k - 1 - j];
        phi[k - 1] = phi_kk;
    }
    return phi;
}

// Solve A x = b for symmetric positive definite A via Cholesky.
std::vector<double> solve_spd(const SquareMatrix& a, std::vector<double> b,
                              std::string_view op) {
    SquareMatrix lower(1);
    try {
        lower = cholesky(a);
    } catch (const Error& e) {
        fail(Errc::singular_system, op, "normal equations are singular");
    }
    const std::size_t n = a.order();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) b[i] -= lower(i, j) * b[j];
        b[i] /= lower(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) b[i] -= lower(j, i) * b[j];
        b[i] /= lower(i, i);
    }
    return b;
}

void fill_ar_residuals(ARModel& model, const std::vector<double>& z) {
    const std::size_t p = model.p;
    model.residuals.clear();
    model.residuals.reserve(z.size() - p);
    for (std::size_t t = p; t < z.size(); ++t) {
        double pred = model.intercept;
        for (std::size_t i = 0; i < p; ++i) pred += model.coefficients[i] * z[t - 1 - i];
        model.residuals.push_back(z[t] - pred);
    }
    double ss = 0.0;
    for (double e : model.residuals) ss += e * e;
    model.innovation_sd = std::sqrt(ss / static_cast<double>(model.residuals.size()));
}

std::pair<ARModel, FitReport> fit_ar_on(const std::vector<double>& z, std::size_t p,
                                        ArFitMethod method) {
    const std::size_t n = z.size();
    if (n <= 2 * p + 1)
        fail(Errc::series_too_short, "fit_ar",
             "need length > 2p + 1 = " + std::to_string(2 * p + 1));

    ARModel model;
    model.p = p;
    if (p == 0) {
        model.intercept = mean(z);
    } else if (method == ArFitMethod::yule_walker) {
        TimeSeries zs{std::vector<double>(z)};
        CorrelationSequence r = acf(zs, p);
        model.coefficients = durbin_levinson(r.coefficients, p, "fit_ar");
        double coef_sum = 0.0;
        for (double c : model.coefficients) coef_sum += c;
        model.intercept = mean(z) * (1.0 - coef_sum);
    } else {
        // OLS of z_t on (1, z_{t-1}, ..., z_{t-p}) via the normal equations.
        const std::size_t dim = p + 1;
        SquareMatrix xtx(dim);
        std::vector<double> xty(dim, 0.0);
        for (std::size_t t = p; t < n; ++t) {
            std::vector<double> row(dim);
            row[0] = 1.0;
            for (std::size_t i = 0; i < p; ++i) row[i + 1] = z[t - 1 - i];
            for (std::size_t a = 0; a < dim; ++a) {
                xty[a] += row[a] * z[t];
                for (std::size_t b = 0; b < dim; ++b) xtx(a, b) += row[a] * row[b];
            }
        }
        std::vector<double> beta = solve_spd(xtx, std::move(xty), "fit_ar");
        model.intercept = beta[0];
        model.coefficients.assign(beta.begin() + 1, beta.end());
    }
    fill_ar_residuals(model, z);
    FitReport report = make_report(model.residuals, p + 1);
    return {std::move(model), report};
}

double resample_innovation(std::span<const double> centered, double sd, InnovationMode mode,
                           RandomSource& rng) {
    if (mode == InnovationMode::gaussian) return sd * rng.normal();
    return centered[rng.uniform_below(centered.size())];
}

std::vector<double> centered_residuals(const std::vector<double>& residuals,
                                       std::string_view op) {
    if (residuals.empty()) fail(Errc::no_residuals, op, "model has no stored residuals");
    double m = mean(residuals);
    std::vector<double> centered(residuals.size());
    for (std::size_t i = 0; i < residuals.size(); ++i) centered[i] = residuals[i] - m;
    return centered;
}

std::vector<double> invert_stage_forecasts(const std::vector<DifferencingStage>& stages,
                                           std::vector<double> values) {
    for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
        const DifferencingStage& stage = *it;
        std::vector<double> pre(values.size());
        for (std::size_t f = 1; f <= values.size(); ++f) {
            double prior = f <= stage.lag ? stage.tail[f - 1] : pre[f - stage.lag - 1];
            pre[f - 1] = values[f - 1] + prior;
        }
        values = std::move(pre);
    }
    return values;
}

}  // namespace

double aic(std::size_t k, double loglik) {
    return 2.0 * static_cast<double>(k) - 2.0 * loglik;
}

double bic(std::size_t k, std::size_t n, double loglik) {
    if (n == 0) fail(Errc::invalid_argument, "bic", "n must be >= 1");
    return static_cast<double>(k) * std::log(static_cast<double>(n)) - 2.0 * loglik;
}

std::pair<SmoothingState, FitReport> fit_ses(const TimeSeries& series,
                                             std::optional<double> alpha) {
    if (series.length() < 2)
        fail(Errc::empty_series, "fit_ses", "need at least 2 observations");
    check_smoothing_param(alpha, "fit_ses", "alpha");
    double a;
    if (alpha) {
        a = *alpha;
    } else {
        auto params = auto_select({std::nullopt}, [&](const std::vector<double>& v) {
            return run_ses(series, v[0]).sse;
        });
        a = params[0];
    }
    SmoothingRun run = run_ses(series, a);
    FitReport report = make_report(run.state.residuals, 1);
    return {std::move(run.state), report};
}

std::pair<SmoothingState, FitReport> fit_holt(const TimeSeries& series,
                                              std::optional<double> alpha,
                                              std::optional<double> beta) {
    if (series.length() < 3)
        fail(Errc::series_too_short, "fit_holt", "need at least 3 observations");
    check_smoothing_param(alpha, "fit_holt", "alpha");
    check_smoothing_param(beta, "fit_holt", "beta");
    auto params = auto_select({alpha, beta}, [&](const std::vector<double>& v) {
        return run_holt(series, v[0], v[1]).sse;
    });
    SmoothingRun run = run_holt(series, params[0], params[1]);
    FitReport report = make_report(run.state.residuals, 2);
    return {std::move(run.state), report};
}

std::pair<SmoothingState, FitReport> fit_holt_winters(const TimeSeries& series,
                                                      std::optional<double> alpha,
                                                      std::optional<double> beta,
                                                      std::optional<double> gamma,
                                                      std::size_t period) {
    if (period < 2) fail(Errc::period_invalid, "fit_holt_winters", "period must be >= 2");
    if (series.length() < 2 * period + 2)
        fail(Errc::series_too_short, "fit_holt_winters",
             "need length >= 2*period + 2 = " + std::to_string(2 * period + 2));
    check_smoothing_param(alpha, "fit_holt_winters", "alpha");
    check_smoothing_param(beta, "fit_holt_winters", "beta");
    check_smoothing_param(gamma, "fit_holt_winters", "gamma");
    auto params = auto_select({alpha, beta, gamma}, [&](const std::vector<double>& v) {
        return run_holt_winters(series, v[0], v[1], v[2], period).sse;
    });
    SmoothingRun run = run_holt_winters(series, params[0], params[1], params[2], period);
    FitReport report = make_report(run.state.residuals, 3);
    return {std::move(run.state), report};
}

std::pair<ARModel, FitReport> fit_ar(const TimeSeries& series, std::size_t p,
                                     ArFitMethod method) {
    auto [model, report] = fit_ar_on(series.values(), p, method);
    model.tail.assign(series.values().end() - static_cast<std::ptrdiff_t>(p),
                      series.values().end());
    return {std::move(model), report};
}

std::pair<ARModel, FitReport> fit_ari(const TimeSeries& series, std::size_t p,
                                      std::size_t d, std::size_t D, std::size_t period,
                                      ArFitMethod method) {
    if (D > 0 && period < 2)
        fail(Errc::period_invalid, "fit_ari", "seasonal differencing needs period >= 2");
    const std::size_t drop = d + D * period;
    if (series.length() <= drop + 2 * p + 1)
        fail(Errc::series_too_short, "fit_ari",
             "need length > d + D*period + 2p + 1 = " + std::to_string(drop + 2 * p + 1));

    std::vector<DifferencingStage> stages;
    std::vector<double> z = series.values();
    auto apply_stage = [&](std::size_t lag) {
        DifferencingStage stage;
        stage.lag = lag;
        stage.tail.assign(z.end() - static_cast<std::ptrdiff_t>(lag), z.end());
        std::vector<double> next(z.size() - lag);
        for (std::size_t t = 0; t < next.size(); ++t) next[t] = z[t + lag] - z[t];
        stages.push_back(std::move(stage));
        z = std::move(next);
    };
    for (std::size_t i = 0; i < d; ++i) apply_stage(1);
    for (std::size_t i = 0; i < D; ++i) apply_stage(period);

    auto [model, report] = fit_ar_on(z, p, method);
    model.d = d;
    model.D = D;
    model.period = period;
    model.stages = std::move(stages);
    model.tail.assign(z.end() - static_cast<std::ptrdiff_t>(p), z.end());
    return {std::move(model), report};
}

std::pair<ARModel, FitReport> select_order(const TimeSeries& series,
                                           const std::vector<std::size_t>& p_candidates,
                                           std::size_t d, std::size_t D,
                                           std::size_t period, SelectionCriterion criterion,
                                           ArFitMethod method) {
    if (p_candidates.empty())
        fail(Errc::invalid_argument, "select_order", "candidate set must be nonempty");

    std::vector<std::size_t> order(p_candidates);
    std::sort(order.begin(), order.end());

    // Fit every feasible candidate first; scores are then computed on the
    // common sample t >= p_max so the likelihood proxy is comparable across
    // orders (per-order residual counts bias selection toward large p).
    std::vector<std::pair<ARModel, FitReport>> fits;
    for (std::size_t p : order) {
        try {
            fits.push_back(fit_ari(series, p, d, D, period, method));
        } catch (const Error&) {
            // Infeasible candidate; skip.
        }
    }
    if (fits.empty())
        fail(Errc::all_fits_failed, "select_order", "every candidate order failed");

    std::size_t p_max = 0;
    for (const auto& fit : fits) p_max = std::max(p_max, fit.first.p);
    const std::size_t n_common = fits.back().first.residuals.size() +
                                 fits.back().first.p - p_max;

    std::size_t best_index = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fits.size(); ++i) {
        const std::vector<double>& residuals = fits[i].first.residuals;
        double sse = 0.0;
        for (std::size_t t = residuals.size() - n_common; t < residuals.size(); ++t)
            sse += residuals[t] * residuals[t];
        double var = std::max(sse / static_cast<double>(n_common), 1e-300);
        double loglik = -(static_cast<double>(n_common) / 2.0) *
                        (std::log(2.0 * std::numbers::pi * var) + 1.0);
        std::size_t k = fits[i].first.p + 1;
        double score = criterion == SelectionCriterion::aic ? aic(k, loglik)
                                                            : bic(k, n_common, loglik);
        // Fits are ordered by increasing p, so strict comparison breaks ties
        // toward fewer parameters.
        if (score < best_score) {
            best_score = score;
            best_index = i;
        }
    }
    return std::move(fits[best_index]);
}

PathForecast forecast_path(const SmoothingState& model, std::size_t horizon) {
    if (horizon == 0)
        fail(Errc::invalid_argument, "forecast_path", "horizon must be >= 1");
    PathForecast path;
    path.horizon = horizon;
    path.point.resize(horizon);
    for (std::size_t h = 1; h <= horizon; ++h) {
        switch (model.kind) {
            case SmoothingKind::ses:
                path.point[h - 1] = model.level;
                break;
            case SmoothingKind::holt:
                path.point[h - 1] = model.level + static_cast<double>(h) * model.trend;
                break;
            case SmoothingKind::holt_winters:
                path.point[h - 1] = model.level + static_cast<double>(h) * model.trend +
                                    model.seasonal[(h - 1) % model.period];
                break;
        }
    }
    return path;
}

PathForecast forecast_path(const ARModel& model, std::size_t horizon) {
    if (horizon == 0)
        fail(Errc::invalid_argument, "forecast_path", "horizon must be >= 1");
    if (model.p > 0 && model.tail.size() != model.p)
        fail(Errc::not_fitted, "forecast_path", "AR model has no stored tail state");

    std::vector<double> window = model.tail;  // oldest first
    std::vector<double> z(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        double value = model.intercept;
        for (std::size_t i = 0; i < model.p; ++i)
            value += model.coefficients[i] * window[window.size() - 1 - i];
        z[h] = value;
        if (model.p > 0) {
            window.erase(window.begin());
            window.push_back(value);
        }
    }

    PathForecast path;
    path.horizon = horizon;
    path.point = invert_stage_forecasts(model.stages, std::move(z));
    return path;
}

TimeSeries simulate(const SmoothingState& model, std::size_t length, InnovationMode mode,
                    RandomSource& rng) {
    if (length == 0) fail(Errc::invalid_argument, "simulate", "length must be >= 1");
    std::vector<double> centered;
    if (mode == InnovationMode::resample_residuals)
        centered = centered_residuals(model.residuals, "simulate");
    double sd = model.residuals.empty() ? 0.0 : sample_stddev(model.residuals);

    double level = model.level;
    double trend = model.trend;
    std::vector<double> seasonal = model.seasonal;

    std::vector<double> out(length);
    for (std::size_t t = 0; t < length; ++t) {
        double eps = resample_innovation(centered, sd, mode, rng);
        switch (model.kind) {
            case SmoothingKind::ses: {
                double y = level + eps;
                level = model.alpha * y + (1.0 - model.alpha) * level;
                out[t] = y;
                break;
            }
            case SmoothingKind::holt: {
                double prior = level + trend;
                double y = prior + eps;
                double next_level = model.alpha * y + (1.0 - model.alpha) * prior;
                trend = model.beta * (next_level - level) + (1.0 - model.beta) * trend;
                level = next_level;
                out[t] = y;
                break;
            }
            case SmoothingKind::holt_winters: {
                double s_old = seasonal[0];
                double prior = level + trend + s_old;
                double y = prior + eps;
                double next_level =
                    model.alpha * (y - s_old) + (1.0 - model.alpha) * (level + trend);
                double next_trend =
                    model.beta * (next_level - level) + (1.0 - model.beta) * trend;
                double s_new =
                    model.gamma * (y - level - trend) + (1.0 - model.gamma) * s_old;
                seasonal.erase(seasonal.begin());
                seasonal.push_back(s_new);
                level = next_level;
                trend = next_trend;
                out[t] = y;
                break;
            }
        }
    }
    return TimeSeries(std::move(out));
}

TimeSeries simulate(const ARModel& model, std::size_t length, InnovationMode mode,
                    RandomSource& rng) {
    if (length == 0) fail(Errc::invalid_argument, "simulate", "length must be >= 1");
    std::vector<double> centered;
    if (mode == InnovationMode::resample_residuals)
        centered = centered_residuals(model.residuals, "simulate");

    std::vector<double> window = model.tail;
    std::vector<double> z(length);
    for (std::size_t t = 0; t < length; ++t) {
        double value = model.intercept;
        for (std::size_t i = 0; i < model.p; ++i)
            value += model.coefficients[i] * window[window.size() - 1 - i];
        value += resample_innovation(centered, model.innovation_sd, mode, rng);
        z[t] = value;
        if (model.p > 0) {
            window.erase(window.begin());
            window.push_back(value);
        }
    }
    return TimeSeries(invert_stage_forecasts(model.stages, std::move(z)));
}

std::vector<PathForecast> load_external_forecasts(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_error, "load_external_forecasts", "cannot open " + path);

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) return {};  // empty file: empty sequence
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "window,h,point")
        fail(Errc::parse_error, "load_external_forecasts",
             "line 1: expected header 'window,h,point'");

    std::vector<PathForecast> result;
    auto parse_field = [&](const std::string& text, double& out) {
        const char* begin = text.data();
        const char* end = begin + text.size();
        auto [ptr, ec] = std::from_chars(begin, end, out);
        return ec == std::errc() && ptr == end;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f0, f1, f2;
        if (!std::getline(ss, f0, ',') || !std::getline(ss, f1, ',') ||
            !std::getline(ss, f2))
            fail(Errc::parse_error, "load_external_forecasts",
                 "line " + std::to_string(line_no) + ": expected 3 fields");
        double window_d, h_d, point;
        if (!parse_field(f0, window_d) || !parse_field(f1, h_d) ||
            !parse_field(f2, point) || window_d < 0 || h_d < 1 ||
            window_d != std::floor(window_d) || h_d != std::floor(h_d))
            fail(Errc::parse_error, "load_external_forecasts",
                 "line " + std::to_string(line_no) + ": malformed row");
        auto window = static_cast<std::size_t>(window_d);
        auto h = static_cast<std::size_t>(h_d);

        if (window == result.size()) {
            result.emplace_back();
        } else if (window != result.size() - 1) {
            fail(Errc::parse_error, "load_external_forecasts",
                 "line " + std::to_string(line_no) + ": windows must be contiguous from 0");
        }
        PathForecast& current = result.back();
        if (h != current.point.size() + 1)
            fail(Errc::parse_error, "load_external_forecasts",
                 "line " + std::to_string(line_no) + ": horizons must be contiguous from 1");
        current.point.push_back(point);
        current.horizon = current.point.size();
    }

    for (const PathForecast& p : result) {
        if (p.horizon != result.front().horizon)
            fail(Errc::inconsistent_horizon, "load_external_forecasts",
                 "all windows must share one horizon");
    }
    return result;
}

PathForecast FittedForecaster::forecast(std::size_t horizon) const {
    return std::visit([&](const auto& model) { return forecast_path(model, horizon); },
                      model_);
}

TimeSeries FittedForecaster::simulate(std::size_t length, InnovationMode mode,
                                      RandomSource& rng) const {
    return std::visit(
        [&](const auto& model) { return jpr::simulate(model, length, mode, rng); }, model_);
}

FittedForecaster fit_forecaster(const ForecasterSpec& spec, const TimeSeries& series) {
    switch (spec.kind) {
        case ModelKind::ses: {
            auto [state, report] = fit_ses(series, spec.alpha);
            return {std::move(state), report};
        }
        case ModelKind::holt: {
            auto [state, report] = fit_holt(series, spec.alpha, spec.beta);
            return {std::move(state), report};
        }
        case ModelKind::holt_winters: {
            std::size_t period = spec.period ? spec.period : series.period().value_or(0);
            auto [state, report] =
                fit_holt_winters(series, spec.alpha, spec.beta, spec.gamma, period);
            return {std::move(state), report};
        }
        case ModelKind::ar:
        case ModelKind::ari: {
            std::size_t d = spec.kind == ModelKind::ar ? 0 : spec.d;
            std::size_t D = spec.kind == ModelKind::ar ? 0 : spec.D;
            std::size_t period = spec.period ? spec.period : series.period().value_or(0);
            if (spec.auto_order) {
                std::vector<std::size_t> candidates = spec.p_candidates;
                if (candidates.empty()) candidates = {0, 1, 2, 3, 4, 5};
                auto [model, report] =
                    select_order(series, candidates, d, D, period, spec.criterion,
                                 spec.method);
                return {std::move(model), report};
            }
            auto [model, report] = fit_ari(series, spec.p, d, D, period, spec.method);
            return {std::move(model), report};
        }
    }
    fail(Errc::invalid_argument, "fit_forecaster", "unknown model kind");
}

}  // namespace jpr
