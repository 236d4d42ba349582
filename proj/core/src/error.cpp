#include "covkit/error.hpp"

namespace covkit {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::ZeroInverse: return "ZeroInverse";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::BadParams: return "BadParams";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::EmptyFamily: return "EmptyFamily";
        case ErrorKind::NotBalanced: return "NotBalanced";
        case ErrorKind::FamilyInvalid: return "FamilyInvalid";
        case ErrorKind::Infeasible: return "Infeasible";
        case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    }
    return "Unknown";
}

}  // namespace covkit
