#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jpr {

// Every failure the library reports, one code per condition.
enum class Errc {
    constant_series,
    lag_too_large,
    degrees_of_freedom_non_positive,
    p_out_of_range,
    empty_samples,
    k_out_of_range,
    not_symmetric,
    not_positive_definite,
    series_too_short,
    initial_values_mismatch,
    period_invalid,
    length_mismatch,
    empty_series,
    singular_system,
    not_fitted,
    all_fits_failed,
    no_residuals,
    parse_error,
    inconsistent_horizon,
    block_len_invalid,
    mean_block_invalid,
    bootstrap_count_invalid,
    degenerate_column,
    rank_deficient,
    horizon_mismatch,
    infinite_bound,
    config_too_large,
    io_error,
    non_finite_value,
    invalid_argument,
};

std::string_view errc_name(Errc code) noexcept;

// Carries the failing operation's name so callers (and the CLI) can report
// which module operation rejected the input.
class Error : public std::runtime_error {
public:
    Error(Errc code, std::string_view operation, const std::string& message)
        : std::runtime_error(std::string(operation) + ": " + message + " [" +
                             std::string(errc_name(code)) + "]"),
          code_(code),
          operation_(operation) {}

    Errc code() const noexcept { return code_; }
    const std::string& operation() const noexcept { return operation_; }

private:
    Errc code_;
    std::string operation_;
};

[[noreturn]] inline void fail(Errc code, std::string_view operation, const std::string& message) {
    throw Error(code, operation, message);
}

}  // namespace jpr
