#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace covkit {

enum class ErrorKind {
    ZeroInverse,
    DimensionMismatch,
    BadParams,
    SchemaError,
    IoError,
    TooLarge,
    BudgetExceeded,
    EmptyFamily,
    NotBalanced,
    FamilyInvalid,
    Infeasible,
    PreconditionViolation,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` selects the failure class.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when an enumeration would visit more items than the caller allowed.
class BudgetError : public Error {
public:
    BudgetError(ErrorKind kind, std::uint64_t required, std::uint64_t budget, const std::string& what)
        : Error(kind, what + " (required " + std::to_string(required) + ", budget " + std::to_string(budget) + ")"),
          required_(required),
          budget_(budget) {}

    [[nodiscard]] std::uint64_t required() const noexcept { return required_; }
    [[nodiscard]] std::uint64_t budget() const noexcept { return budget_; }

private:
    std::uint64_t required_;
    std::uint64_t budget_;
};

/// Problem in an on-disk document; `path()` is a JSON-pointer-like location.
class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& what)
        : Error(ErrorKind::SchemaError, path + ": " + what), path_(std::move(path)) {}

    [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

}  // namespace covkit
