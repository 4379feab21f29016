#include "jpr/errors.hpp"

namespace jpr {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::constant_series: return "ConstantSeries";
        case Errc::lag_too_large: return "LagTooLarge";
        case Errc::degrees_of_freedom_non_positive: return "DegreesOfFreedomNonPositive";
        case Errc::p_out_of_range: return "POutOfRange";
        case Errc::empty_samples: return "EmptySamples";
        case Errc::k_out_of_range: return "KOutOfRange";
        case Errc::not_symmetric: return "NotSymmetric";
        case Errc::not_positive_definite: return "NotPositiveDefinite";
        case Errc::series_too_short: return "SeriesTooShort";
        case Errc::initial_values_mismatch: return "InitialValuesLengthMismatch";
        case Errc::period_invalid: return "PeriodInvalid";
        case Errc::length_mismatch: return "LengthMismatch";
        case Errc::empty_series: return "EmptySeries";
        case Errc::singular_system: return "SingularSystem";
        case Errc::not_fitted: return "NotFitted";
        case Errc::all_fits_failed: return "AllFitsFailed";
        case Errc::no_residuals: return "NoResiduals";
        case Errc::parse_error: return "ParseError";
        case Errc::inconsistent_horizon: return "InconsistentHorizon";
        case Errc::block_len_invalid: return "BlockLenInvalid";
        case Errc::mean_block_invalid: return "MeanBlockInvalid";
        case Errc::bootstrap_count_invalid: return "BootstrapCountInvalid";
        case Errc::degenerate_column: return "DegenerateColumn";
        case Errc::rank_deficient: return "RankDeficient";
        case Errc::horizon_mismatch: return "HorizonMismatch";
        case Errc::infinite_bound: return "InfiniteBound";
        case Errc::config_too_large: return "ConfigTooLargeForSeries";
        case Errc::io_error: return "IoError";
        case Errc::non_finite_value: return "NonFiniteValue";
        case Errc::invalid_argument: return "InvalidArgument";
    }
    return "UnknownError";
}

}  // namespace jpr
