#include "trendline/error.hpp"

namespace trendline {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DuplicateTimestamp: return "DuplicateTimestamp";
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::LeadingMissing: return "LeadingMissing";
    case ErrorKind::MissingValues: return "MissingValues";
    case ErrorKind::CutoffOutOfRange: return "CutoffOutOfRange";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::MissingRegressorValue: return "MissingRegressorValue";
    case ErrorKind::NonFiniteObjective: return "NonFiniteObjective";
    case ErrorKind::NonFiniteGradient: return "NonFiniteGradient";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::UnderdeterminedModel: return "UnderdeterminedModel";
    case ErrorKind::TooFewResiduals: return "TooFewResiduals";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::InvertedBounds: return "InvertedBounds";
    case ErrorKind::SpanTooShort: return "SpanTooShort";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::SeriesShorterThanPeriod: return "SeriesShorterThanPeriod";
    case ErrorKind::InsufficientHistory: return "InsufficientHistory";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace trendline
