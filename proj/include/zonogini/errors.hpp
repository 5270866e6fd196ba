#pragma once

#include <stdexcept>
#include <string>

namespace zonogini {

enum class errc {
    empty_input,
    dimension_mismatch,
    negative_component,
    non_finite,
    out_of_range,
    not_univariate,
    not_two_dimensional,
    combination_overflow,
    degenerate_parallelotope,
    degenerate_mean,
    zero_mean,
    invalid_schedule,
    invalid_argument,
    csv_parse,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::empty_input:              return "EmptyInput";
        case errc::dimension_mismatch:       return "DimensionMismatch";
        case errc::negative_component:       return "NegativeComponent";
        case errc::non_finite:               return "NonFinite";
        case errc::out_of_range:             return "OutOfRange";
        case errc::not_univariate:           return "NotUnivariate";
        case errc::not_two_dimensional:      return "NotTwoDimensional";
        case errc::combination_overflow:     return "CombinationOverflow";
        case errc::degenerate_parallelotope: return "DegenerateParallelotope";
        case errc::degenerate_mean:          return "DegenerateMean";
        case errc::zero_mean:                return "ZeroMean";
        case errc::invalid_schedule:         return "InvalidSchedule";
        case errc::invalid_argument:         return "InvalidArgument";
        case errc::csv_parse:                return "CsvParse";
    }
    return "Unknown";
}

/// Library-wide exception. `code()` identifies the failure class so callers
/// (notably the CLI) can map errors to exit statuses without string matching.
class Error : public std::runtime_error {
public:
    Error(errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

/// CSV errors carry the 1-based row/column of the offending cell.
class CsvError : public Error {
public:
    CsvError(std::size_t row, std::size_t col, std::string message)
        : Error(errc::csv_parse, std::move(message)), row_(row), col_(col) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

[[noreturn]] inline void fail(errc code, std::string message) {
    throw Error(code, std::move(message));
}

}  // namespace zonogini
