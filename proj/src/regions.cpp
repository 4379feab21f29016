#include "jpr/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "jpr/parallel.hpp"
#include "jpr/stats.hpp"

namespace jpr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha, std::string_view op) {
    if (!(alpha > 0.0 && alpha < 1.0))
        fail(Errc::p_out_of_range, op, "alpha must lie in (0, 1)");
}

std::size_t checked_count(double x) {
    return quantile_index(x);  // ceil with epsilon guard
}

}  // namespace

std::string_view region_method_name(RegionMethod method) noexcept {
    switch (method) {
        case RegionMethod::kfwe: return "kfwe";
        case RegionMethod::bonferroni: return "bonferroni";
        case RegionMethod::bh: return "bh";
        case RegionMethod::sidak: return "sidak";
        case RegionMethod::scheffe: return "scheffe";
        case RegionMethod::np: return "np";
    }
    return "unknown";
}

std::vector<double> ErrorMatrix::column(std::size_t h) const {
    std::vector<double> out(rows_);
    for (std::size_t b = 0; b < rows_; ++b) out[b] = at(b, h);
    return out;
}

ErrorMatrix ErrorMatrix::truncated(std::size_t cols) const {
    if (cols > cols_)
        fail(Errc::length_mismatch, "ErrorMatrix::truncated",
             "cannot widen a matrix by truncation");
    ErrorMatrix out(rows_, cols);
    for (std::size_t b = 0; b < rows_; ++b)
        for (std::size_t h = 0; h < cols; ++h) out.at(b, h) = at(b, h);
    return out;
}

SigmaEstimate estimate_sigma(const ErrorMatrix& replicate_errors) {
    const std::size_t b = replicate_errors.rows();
    const std::size_t h_count = replicate_errors.cols();
    if (b < 2) fail(Errc::invalid_argument, "estimate_sigma", "need at least 2 replicates");

    SigmaEstimate estimate;
    estimate.method = SigmaMethod::bootstrap_sd;
    estimate.sigma.resize(h_count);
    for (std::size_t h = 0; h < h_count; ++h) {
        double sd = sample_stddev(replicate_errors.column(h));
        if (!(sd > 0.0))
            fail(Errc::degenerate_column, "estimate_sigma",
                 "zero variance at horizon " + std::to_string(h + 1) +
                     "; forecaster and bootstrap produce identical errors");
        estimate.sigma[h] = sd;
    }
    return estimate;
}

MultiplierSet kfwe_multipliers(const ErrorMatrix& standardized, std::size_t k,
                               double alpha) {
    const std::size_t b = standardized.rows();
    const std::size_t h_count = standardized.cols();
    check_alpha(alpha, "kfwe_multipliers");
    if (k == 0 || k > h_count)
        fail(Errc::k_out_of_range, "kfwe_multipliers", "k must lie in [1, H]");

    std::vector<double> abs_kmax(b), kmax(b), kmin(b);
    std::vector<double> abs_row(h_count);
    for (std::size_t i = 0; i < b; ++i) {
        std::span<const double> row = standardized.row(i);
        for (std::size_t h = 0; h < h_count; ++h) abs_row[h] = std::abs(row[h]);
        abs_kmax[i] = k_max(abs_row, k);
        kmax[i] = k_max(row, k);
        kmin[i] = k_min(row, k);
    }

    MultiplierSet m;
    m.d_abs_kmax = empirical_quantile(abs_kmax, 1.0 - alpha);
    m.d_kmax = empirical_quantile(kmax, 1.0 - alpha);
    m.d_kmin = empirical_quantile(kmin, alpha);
    return m;
}

JointRegion assemble_kfwe_region(const PathForecast& path, std::span<const double> sigma,
                                 const MultiplierSet& multipliers, std::size_t k,
                                 double alpha, Sidedness sided) {
    const std::size_t h_count = path.horizon;
    if (sigma.size() != h_count)
        fail(Errc::length_mismatch, "assemble_kfwe_region",
             "sigma length must equal the horizon");

    JointRegion region;
    region.horizon = h_count;
    region.method = RegionMethod::kfwe;
    region.alpha = alpha;
    region.k = k;
    region.sided = sided;
    region.lower.resize(h_count);
    region.upper.resize(h_count);
    for (std::size_t h = 0; h < h_count; ++h) {
        double point = path.point[h];
        switch (sided) {
            case Sidedness::two:
                region.lower[h] = point - multipliers.d_abs_kmax * sigma[h];
                region.upper[h] = point + multipliers.d_abs_kmax * sigma[h];
                break;
            case Sidedness::lower:
                region.lower[h] = point - multipliers.d_kmax * sigma[h];
                region.upper[h] = kInf;
                break;
            case Sidedness::upper:
                region.lower[h] = -kInf;
                region.upper[h] = point - multipliers.d_kmin * sigma[h];
                break;
        }
    }
    return region;
}

BootstrapEnsemble run_bootstrap_ensemble(const TimeSeries& series,
                                         const ForecasterSpec& forecaster,
                                         const BootstrapSpec& bootstrap,
                                         const EnsembleOptions& options) {
    const std::size_t t_len = series.length();
    const std::size_t h_count = options.horizon;
    const std::size_t b_count = options.replicates;
    if (h_count == 0)
        fail(Errc::invalid_argument, "run_bootstrap_ensemble", "horizon must be >= 1");
    if (b_count < 2)
        fail(Errc::bootstrap_count_invalid, "run_bootstrap_ensemble", "need B >= 2");

    FittedForecaster fitted = fit_forecaster(forecaster, series);
    PreparedBootstrap prepared(series, bootstrap, &fitted);

    BootstrapEnsemble ensemble{
        .center = fitted.forecast(h_count),
        .errors = ErrorMatrix(b_count, h_count),
        .standardized = ErrorMatrix(b_count, h_count),
        .sigma = {},
        .replicate_paths = std::vector<PathForecast>(b_count),
    };

    // Steps 1-4 per replicate, one stream per replicate so any schedule
    // reproduces the same matrix.
    std::vector<std::vector<double>> inner_sigma(
        options.sigma_mode == SigmaMode::double_bootstrap ? b_count : 0);
    parallel_for(b_count, options.threads, [&](std::size_t b) {
        RandomSource rng(options.seed, options.stream_base + b);
        Replicate rep = prepared.generate(t_len + h_count, rng);
        TimeSeries train = rep.series.slice(0, t_len);
        FittedForecaster refit = fit_forecaster(forecaster, train);
        PathForecast path = refit.forecast(h_count);
        for (std::size_t h = 0; h < h_count; ++h)
            ensemble.errors.at(b, h) = path.point[h] - rep.series[t_len + h];
        ensemble.replicate_paths[b] = std::move(path);

        if (options.sigma_mode == SigmaMode::double_bootstrap) {
            // sigma*_b from an inner bootstrap of replicate b.
            PreparedBootstrap inner(train, bootstrap, &refit);
            ErrorMatrix inner_errors(options.inner_replicates, h_count);
            for (std::size_t j = 0; j < options.inner_replicates; ++j) {
                RandomSource inner_rng = rng.substream(j);
                Replicate inner_rep = inner.generate(t_len + h_count, inner_rng);
                TimeSeries inner_train = inner_rep.series.slice(0, t_len);
                FittedForecaster inner_fit = fit_forecaster(forecaster, inner_train);
                PathForecast inner_path = inner_fit.forecast(h_count);
                for (std::size_t h = 0; h < h_count; ++h)
                    inner_errors.at(j, h) =
                        inner_path.point[h] - inner_rep.series[t_len + h];
            }
            inner_sigma[b] = estimate_sigma(inner_errors).sigma;
        }
    });

    ensemble.sigma = estimate_sigma(ensemble.errors);
    ensemble.sigma.method = options.sigma_mode == SigmaMode::double_bootstrap
                                ? SigmaMethod::double_bootstrap
                                : SigmaMethod::shared;
    ensemble.center.sigma = ensemble.sigma.sigma;

    for (std::size_t b = 0; b < b_count; ++b) {
        const std::vector<double>* scale = options.sigma_mode == SigmaMode::double_bootstrap
                                               ? &inner_sigma[b]
                                               : &ensemble.sigma.sigma;
        for (std::size_t h = 0; h < h_count; ++h)
            ensemble.standardized.at(b, h) = ensemble.errors.at(b, h) / (*scale)[h];
    }
    return ensemble;
}

JointRegion kfwe_region(const TimeSeries& series, const ForecasterSpec& forecaster,
                        const BootstrapSpec& bootstrap, std::size_t horizon,
                        std::size_t k, double alpha, std::size_t replicates,
                        Sidedness sided, const EnsembleOptions& options) {
    check_alpha(alpha, "kfwe_region");
    if (replicates < 100)
        fail(Errc::bootstrap_count_invalid, "kfwe_region", "need B >= 100");
    if (k == 0 || k > horizon)
        fail(Errc::k_out_of_range, "kfwe_region", "k must lie in [1, H]");

    EnsembleOptions opts = options;
    opts.horizon = horizon;
    opts.replicates = replicates;
    BootstrapEnsemble ensemble =
        run_bootstrap_ensemble(series, forecaster, bootstrap, opts);
    MultiplierSet multipliers = kfwe_multipliers(ensemble.standardized, k, alpha);
    return assemble_kfwe_region(ensemble.center, ensemble.sigma.sigma, multipliers, k,
                                alpha, sided);
}

std::vector<double> bonferroni_levels(double alpha, std::size_t horizon) {
    check_alpha(alpha, "bonferroni_levels");
    if (horizon == 0) fail(Errc::invalid_argument, "bonferroni_levels", "H must be >= 1");
    return std::vector<double>(horizon, 1.0 - alpha / static_cast<double>(horizon));
}

std::vector<double> bh_levels(double alpha, std::size_t horizon) {
    check_alpha(alpha, "bh_levels");
    if (horizon == 0) fail(Errc::invalid_argument, "bh_levels", "H must be >= 1");
    std::vector<double> levels(horizon);
    for (std::size_t h = 1; h <= horizon; ++h)
        levels[h - 1] = alpha * static_cast<double>(h) / static_cast<double>(horizon);
    return levels;
}

std::vector<double> sidak_levels(double alpha, std::size_t horizon) {
    check_alpha(alpha, "sidak_levels");
    if (horizon == 0) fail(Errc::invalid_argument, "sidak_levels", "H must be >= 1");
    double level = 1.0 - std::pow(1.0 - alpha, 1.0 / static_cast<double>(horizon));
    return std::vector<double>(horizon, level);
}

JointRegion marginal_region(const PathForecast& path, const SigmaEstimate& sigma,
                            const ErrorMatrix& standardized,
                            std::span<const double> coverage_levels, RegionMethod method,
                            double alpha) {
    const std::size_t h_count = path.horizon;
    if (coverage_levels.size() != h_count || sigma.sigma.size() != h_count ||
        standardized.cols() < h_count)
        fail(Errc::length_mismatch, "marginal_region",
             "levels, sigma, and error columns must match the horizon");

    JointRegion region;
    region.horizon = h_count;
    region.method = method;
    region.alpha = alpha;
    region.k = 1;
    region.sided = Sidedness::two;
    region.lower.resize(h_count);
    region.upper.resize(h_count);
    std::vector<double> abs_column(standardized.rows());
    for (std::size_t h = 0; h < h_count; ++h) {
        for (std::size_t b = 0; b < standardized.rows(); ++b)
            abs_column[b] = std::abs(standardized.at(b, h));
        double q = empirical_quantile(abs_column, coverage_levels[h]);
        region.lower[h] = path.point[h] - q * sigma.sigma[h];
        region.upper[h] = path.point[h] + q * sigma.sigma[h];
    }
    return region;
}

JointRegion modified_scheffe_region(const PathForecast& path, const SquareMatrix& cov,
                                    double alpha, std::size_t n_obs) {
    check_alpha(alpha, "modified_scheffe_region");
    const std::size_t h_count = path.horizon;
    if (cov.order() != h_count)
        fail(Errc::length_mismatch, "modified_scheffe_region",
             "covariance order must equal the horizon");
    if (n_obs == 0)
        fail(Errc::invalid_argument, "modified_scheffe_region", "T must be >= 1");

    SquareMatrix scaled(h_count);
    for (std::size_t i = 0; i < h_count; ++i)
        for (std::size_t j = 0; j < h_count; ++j)
            scaled(i, j) = cov(i, j) / static_cast<double>(n_obs);
    SquareMatrix p = cholesky(scaled);

    // v_h = sqrt(chi2_{h,1-alpha} / h); half-widths are |P| v.
    std::vector<double> v(h_count);
    for (std::size_t h = 1; h <= h_count; ++h)
        v[h - 1] =
            std::sqrt(chi_square_quantile(h, 1.0 - alpha) / static_cast<double>(h));

    JointRegion region;
    region.horizon = h_count;
    region.method = RegionMethod::scheffe;
    region.alpha = alpha;
    region.k = 1;
    region.sided = Sidedness::two;
    region.lower.resize(h_count);
    region.upper.resize(h_count);
    for (std::size_t i = 0; i < h_count; ++i) {
        double half = 0.0;
        for (std::size_t j = 0; j < h_count; ++j) half += std::abs(p(i, j)) * v[j];
        region.lower[i] = path.point[i] - half;
        region.upper[i] = path.point[i] + half;
    }
    return region;
}

double scheffe_quadratic_form(const SquareMatrix& cov, std::span<const double> residual) {
    const std::size_t n = cov.order();
    if (residual.size() != n)
        fail(Errc::length_mismatch, "scheffe_quadratic_form",
             "residual length must equal the covariance order");
    SquareMatrix lower = cholesky(cov);
    // Solve L z = r; then r' cov^{-1} r = z'z.
    std::vector<double> z(residual.begin(), residual.end());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) z[i] -= lower(i, j) * z[j];
        z[i] /= lower(i, i);
    }
    double sum = 0.0;
    for (double value : z) sum += value * value;
    return sum;
}

bool scheffe_ellipsoid_contains(const PathForecast& path, const SquareMatrix& cov,
                                std::span<const double> actual, double alpha) {
    check_alpha(alpha, "scheffe_ellipsoid_contains");
    if (actual.size() != path.horizon)
        fail(Errc::length_mismatch, "scheffe_ellipsoid_contains",
             "actual length must equal the horizon");
    std::vector<double> residual(path.horizon);
    for (std::size_t h = 0; h < path.horizon; ++h)
        residual[h] = path.point[h] - actual[h];
    double q = scheffe_quadratic_form(cov, residual);
    return q <= chi_square_quantile(path.horizon, 1.0 - alpha);
}

SquareMatrix estimate_cov(const ErrorMatrix& replicate_errors) {
    const std::size_t b = replicate_errors.rows();
    const std::size_t h_count = replicate_errors.cols();
    if (b <= h_count)
        fail(Errc::rank_deficient, "estimate_cov", "need B >= H + 1 replicates");

    std::vector<double> means(h_count, 0.0);
    for (std::size_t h = 0; h < h_count; ++h) means[h] = mean(replicate_errors.column(h));

    SquareMatrix cov(h_count);
    for (std::size_t i = 0; i < h_count; ++i) {
        for (std::size_t j = i; j < h_count; ++j) {
            double sum = 0.0;
            for (std::size_t r = 0; r < b; ++r)
                sum += (replicate_errors.at(r, i) - means[i]) *
                       (replicate_errors.at(r, j) - means[j]);
            double value = sum / static_cast<double>(b - 1);
            cov(i, j) = value;
            cov(j, i) = value;
        }
    }
    return cov;
}

JointRegion np_heuristic_region(const PathForecast& center,
                                const std::vector<PathForecast>& bootstrap_paths,
                                double alpha) {
    check_alpha(alpha, "np_heuristic_region");
    const std::size_t b = bootstrap_paths.size();
    if (b < 2)
        fail(Errc::bootstrap_count_invalid, "np_heuristic_region", "need B >= 2 paths");
    const std::size_t h_count = center.horizon;
    for (const PathForecast& p : bootstrap_paths)
        if (p.horizon != h_count)
            fail(Errc::horizon_mismatch, "np_heuristic_region",
                 "all bootstrap paths must share the central horizon");

    // Discard the ceil(alpha*B) paths farthest from the central path; ties at
    // the cutoff keep the lower replicate index.
    std::vector<std::pair<double, std::size_t>> order(b);
    for (std::size_t i = 0; i < b; ++i) {
        double dist2 = 0.0;
        for (std::size_t h = 0; h < h_count; ++h) {
            double diff = bootstrap_paths[i].point[h] - center.point[h];
            dist2 += diff * diff;
        }
        order[i] = {dist2, i};
    }
    std::sort(order.begin(), order.end());
    std::size_t discard = checked_count(alpha * static_cast<double>(b));
    if (discard >= b)
        fail(Errc::invalid_argument, "np_heuristic_region",
             "alpha*B discards every bootstrap path");
    const std::size_t retained = b - discard;

    JointRegion region;
    region.horizon = h_count;
    region.method = RegionMethod::np;
    region.alpha = alpha;
    region.k = 1;
    region.sided = Sidedness::two;
    region.lower.assign(h_count, kInf);
    region.upper.assign(h_count, -kInf);
    for (std::size_t r = 0; r < retained; ++r) {
        const PathForecast& p = bootstrap_paths[order[r].second];
        for (std::size_t h = 0; h < h_count; ++h) {
            region.lower[h] = std::min(region.lower[h], p.point[h]);
            region.upper[h] = std::max(region.upper[h], p.point[h]);
        }
    }
    return region;
}

ContainsResult contains(const JointRegion& region, std::span<const double> actual,
                        std::size_t k) {
    if (actual.size() != region.horizon)
        fail(Errc::length_mismatch, "contains", "actual length must equal the horizon");
    if (k == 0 || k > region.horizon)
        fail(Errc::k_out_of_range, "contains", "k must lie in [1, H]");

    std::size_t misses = 0;
    for (std::size_t h = 0; h < region.horizon; ++h)
        if (actual[h] < region.lower[h] || actual[h] > region.upper[h]) ++misses;
    return {misses <= k - 1, misses};
}

double geometric_width(const JointRegion& region) {
    double log_sum = 0.0;
    for (std::size_t h = 0; h < region.horizon; ++h) {
        if (std::isinf(region.lower[h]) || std::isinf(region.upper[h]))
            fail(Errc::infinite_bound, "geometric_width",
                 "width is undefined for one-sided regions");
        double width = region.upper[h] - region.lower[h];
        if (width == 0.0) return 0.0;
        log_sum += std::log(width);
    }
    return std::exp(log_sum / static_cast<double>(region.horizon));
}

}  // namespace jpr
