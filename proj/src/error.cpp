#include "gridmark/error.hpp"

namespace gridmark {

std::string_view error_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::EmptyAggregate: return "EmptyAggregate";
    case ErrorCode::DegenerateModel: return "DegenerateModel";
    case ErrorCode::InsufficientCapacity: return "InsufficientCapacity";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    }
    return "Error";
}

} // namespace gridmark
