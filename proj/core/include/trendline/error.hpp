#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trendline {

enum class ErrorKind {
    ParseError,
    DuplicateTimestamp,
    EmptySeries,
    DomainError,
    LeadingMissing,
    MissingValues,
    CutoffOutOfRange,
    InvalidConfig,
    MissingRegressorValue,
    NonFiniteObjective,
    NonFiniteGradient,
    ConvergenceFailure,
    UnderdeterminedModel,
    TooFewResiduals,
    LengthMismatch,
    EmptyInput,
    InvertedBounds,
    SpanTooShort,
    TooShort,
    SeriesShorterThanPeriod,
    InsufficientHistory,
    SingularSystem,
    UnsupportedVersion,
    SchemaError,
    IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every domain failure in the library is reported through this type. The
// kind is stable and machine-readable; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view kind_name() const noexcept { return to_string(kind_); }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

} // namespace trendline
