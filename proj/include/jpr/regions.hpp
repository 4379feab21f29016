#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "jpr/bootstrap.hpp"
#include "jpr/forecast.hpp"
#include "jpr/series.hpp"

namespace jpr {

enum class RegionMethod { kfwe, bonferroni, bh, sidak, scheffe, np };
enum class Sidedness { two, lower, upper };

std::string_view region_method_name(RegionMethod method) noexcept;

/// Per-horizon interval product [lower_h, upper_h]; one-sided regions carry
/// +/-infinity on the open side.
struct JointRegion {
    std::size_t horizon = 0;
    std::vector<double> lower;
    std::vector<double> upper;
    RegionMethod method = RegionMethod::kfwe;
    double alpha = 0.0;
    std::size_t k = 1;
    Sidedness sided = Sidedness::two;
};

/// B x H matrix of per-replicate, per-horizon values (prediction errors or
/// their standardized form), row-major.
class ErrorMatrix {
public:
    ErrorMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& at(std::size_t b, std::size_t h) noexcept { return data_[b * cols_ + h]; }
    double at(std::size_t b, std::size_t h) const noexcept { return data_[b * cols_ + h]; }
    std::span<const double> row(std::size_t b) const noexcept {
        return {data_.data() + b * cols_, cols_};
    }
    std::vector<double> column(std::size_t h) const;

    /// View over the leading `cols` columns, so one bootstrap pass at the
    /// largest horizon serves every smaller-horizon cell.
    ErrorMatrix truncated(std::size_t cols) const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

enum class SigmaMethod { bootstrap_sd, double_bootstrap, shared };

struct SigmaEstimate {
    std::vector<double> sigma;
    SigmaMethod method = SigmaMethod::bootstrap_sd;
};

/// Bootstrap quantiles of the k-max / k-min statistics of standardized
/// prediction errors.
struct MultiplierSet {
    double d_abs_kmax = 0.0;  // 1-alpha quantile of k-max(|S*|)
    double d_kmax = 0.0;      // 1-alpha quantile of k-max(S*)
    double d_kmin = 0.0;      // alpha quantile of k-min(S*)
};

/// Column-wise sample standard deviation (divisor B-1) of replicate errors.
/// A zero-variance column signals a deterministic forecaster/bootstrap
/// mismatch and is rejected.
SigmaEstimate estimate_sigma(const ErrorMatrix& replicate_errors);

MultiplierSet kfwe_multipliers(const ErrorMatrix& standardized, std::size_t k,
                               double alpha);

/// Region assembly once the multipliers and sigma are known:
///   two:   [y(h) - d_abs*sigma(h), y(h) + d_abs*sigma(h)]
///   lower: [y(h) - d_kmax*sigma(h), +inf)
///   upper: (-inf, y(h) - d_kmin*sigma(h)]
JointRegion assemble_kfwe_region(const PathForecast& path, std::span<const double> sigma,
                                 const MultiplierSet& multipliers, std::size_t k,
                                 double alpha, Sidedness sided);

enum class SigmaMode { shared, double_bootstrap };

struct EnsembleOptions {
    std::size_t horizon = 1;
    std::size_t replicates = 1000;  // B
    SigmaMode sigma_mode = SigmaMode::shared;
    std::size_t inner_replicates = 100;  // B_inner for double bootstrap
    std::uint64_t seed = 0;
    std::uint64_t stream_base = 0;  // replicate b uses stream stream_base + b
    unsigned threads = 1;
};

/// Everything one pass of Algorithm steps 1-5 produces: per-replicate
/// prediction errors, their standardized form, the real-series path forecast,
/// and the bootstrap prediction standard errors.
struct BootstrapEnsemble {
    PathForecast center;
    ErrorMatrix errors;        // u*_b(h) = yhat*_b(h) - y*_b(T+h)
    ErrorMatrix standardized;  // s*_b(h)
    SigmaEstimate sigma;       // sigma-hat_T(h), column sd of errors
    std::vector<PathForecast> replicate_paths;
};

BootstrapEnsemble run_bootstrap_ensemble(const TimeSeries& series,
                                         const ForecasterSpec& forecaster,
                                         const BootstrapSpec& bootstrap,
                                         const EnsembleOptions& options);

/// The full univariate k-FWE construction: bootstrap ensemble, multipliers,
/// region. Requires B >= 100.
JointRegion kfwe_region(const TimeSeries& series, const ForecasterSpec& forecaster,
                        const BootstrapSpec& bootstrap, std::size_t horizon,
                        std::size_t k, double alpha, std::size_t replicates,
                        Sidedness sided, const EnsembleOptions& options);

/// Per-horizon coverage levels 1 - alpha/H.
std::vector<double> bonferroni_levels(double alpha, std::size_t horizon);

/// Per-horizon significance levels alpha * h / H.
std::vector<double> bh_levels(double alpha, std::size_t horizon);

/// Per-horizon significance levels 1 - (1-alpha)^(1/H).
std::vector<double> sidak_levels(double alpha, std::size_t horizon);

/// Strings together per-horizon intervals y(h) +/- q_h * sigma(h), where q_h
/// is the empirical quantile of |s*(h)| at the given coverage level.
JointRegion marginal_region(const PathForecast& path, const SigmaEstimate& sigma,
                            const ErrorMatrix& standardized,
                            std::span<const double> coverage_levels,
                            RegionMethod method = RegionMethod::bonferroni,
                            double alpha = 0.0);

/// y(h) +/- |P| v with P = chol(cov/T) and v_h = sqrt(chi2_{h,1-alpha} / h).
JointRegion modified_scheffe_region(const PathForecast& path, const SquareMatrix& cov,
                                    double alpha, std::size_t n_obs);

/// Quadratic form (y - x)' (cov)^{-1} (y - x) via triangular solves; the raw
/// ellipsoid membership check behind the Scheffe region.
double scheffe_quadratic_form(const SquareMatrix& cov, std::span<const double> residual);
bool scheffe_ellipsoid_contains(const PathForecast& path, const SquareMatrix& cov,
                                std::span<const double> actual, double alpha);

/// Sample covariance of the replicate error rows (divisor B-1).
SquareMatrix estimate_cov(const ErrorMatrix& replicate_errors);

/// Envelope of the bootstrap path forecasts that survive discarding the
/// ceil(alpha*B) farthest (Euclidean) from the central path.
JointRegion np_heuristic_region(const PathForecast& center,
                                const std::vector<PathForecast>& bootstrap_paths,
                                double alpha);

struct ContainsResult {
    bool success = false;
    std::size_t miss_count = 0;
};

/// Closed-interval membership per horizon; success when at most k-1 horizons
/// miss.
ContainsResult contains(const JointRegion& region, std::span<const double> actual,
                        std::size_t k);

/// Geometric mean of per-horizon widths, computed in log space. Zero width
/// yields 0; infinite bounds are rejected.
double geometric_width(const JointRegion& region);

}  // namespace jpr
