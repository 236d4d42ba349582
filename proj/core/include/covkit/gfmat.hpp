#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace covkit {

/// Canonical representative in [0, q).
using Residue = std::uint32_t;

/// A prime field F_q, 2 <= q <= 65521. Products of two residues fit in 32 bits.
class PrimeField {
public:
    static constexpr std::uint32_t kMaxModulus = 65521;

    /// Throws Error(BadParams) if q is not a prime in [2, kMaxModulus].
    explicit PrimeField(std::uint32_t q);

    [[nodiscard]] std::uint32_t q() const noexcept { return q_; }

    [[nodiscard]] Residue add(Residue a, Residue b) const noexcept {
        const Residue s = a + b;
        return s >= q_ ? s - q_ : s;
    }
    [[nodiscard]] Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + q_ - b; }
    [[nodiscard]] Residue neg(Residue a) const noexcept { return a == 0 ? 0 : q_ - a; }
    [[nodiscard]] Residue mul(Residue a, Residue b) const noexcept { return (a * b) % q_; }
    /// Throws Error(ZeroInverse) for a == 0.
    [[nodiscard]] Residue inv(Residue a) const;
    [[nodiscard]] Residue reduce(std::int64_t v) const noexcept {
        const std::int64_t r = v % static_cast<std::int64_t>(q_);
        return static_cast<Residue>(r < 0 ? r + q_ : r);
    }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint32_t q_;
};

[[nodiscard]] bool is_prime(std::uint32_t n) noexcept;

struct FieldElement {
    Residue value;
    std::uint32_t modulus;

    friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

/// Multiplicative inverse; throws Error(ZeroInverse) on zero, Error(BadParams) on a bad modulus.
[[nodiscard]] FieldElement field_inv(FieldElement a);

/// One nonzero coordinate of a sparse vector.
struct SparseEntry {
    std::size_t index;
    Residue coef;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
    friend auto operator<=>(const SparseEntry&, const SparseEntry&) = default;
};

class FieldVector {
public:
    FieldVector(PrimeField field, std::size_t n) : field_(field), entries_(n, 0) {}
    /// Throws Error(BadParams) if some entry is >= q.
    FieldVector(PrimeField field, std::vector<Residue> entries);
    /// Braced entries, so that {1} is a one-entry vector rather than a length.
    FieldVector(PrimeField field, std::initializer_list<Residue> entries)
        : FieldVector(field, std::vector<Residue>(entries)) {}

    [[nodiscard]] const PrimeField& field() const noexcept { return field_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] Residue operator[](std::size_t i) const { return entries_[i]; }
    void set(std::size_t i, Residue v) { entries_.at(i) = field_.reduce(v); }
    [[nodiscard]] std::span<const Residue> entries() const noexcept { return entries_; }

    /// this += coef * other
    void add_scaled(const FieldVector& other, Residue coef);
    [[nodiscard]] FieldVector negated() const;
    [[nodiscard]] std::vector<SparseEntry> support() const;

    friend bool operator==(const FieldVector&, const FieldVector&) = default;

private:
    PrimeField field_;
    std::vector<Residue> entries_;
};

/// Dense row-major matrix over a prime field.
class FieldMatrix {
public:
    FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, 0) {}
    /// Throws Error(DimensionMismatch) if entries.size() != rows*cols, Error(BadParams) on entries >= q.
    FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols, std::vector<Residue> entries);

    static FieldMatrix identity(PrimeField field, std::size_t n);
    /// Rows given as integer lists; values are reduced mod q.
    static FieldMatrix from_rows(PrimeField field, std::initializer_list<std::initializer_list<std::int64_t>> rows);
    /// Columns as matrix columns; all must share field and length `rows`.
    static FieldMatrix from_columns(PrimeField field, std::size_t rows, std::span<const FieldVector> columns);

    [[nodiscard]] const PrimeField& field() const noexcept { return field_; }
    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] Residue at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, Residue v) { entries_[r * cols_ + c] = field_.reduce(v); }
    [[nodiscard]] std::span<const Residue> row(std::size_t r) const {
        return std::span<const Residue>(entries_).subspan(r * cols_, cols_);
    }
    [[nodiscard]] std::span<const Residue> entries() const noexcept { return entries_; }
    [[nodiscard]] FieldVector column(std::size_t c) const;
    [[nodiscard]] FieldMatrix transpose() const;
    [[nodiscard]] bool is_zero() const noexcept;

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

private:
    PrimeField field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Residue> entries_;
};

struct RrefResult {
    FieldMatrix matrix;
    std::size_t rank;
    std::vector<std::size_t> pivot_cols;
};

/// Reduced row echelon form via Gauss-Jordan elimination.
[[nodiscard]] RrefResult rref(const FieldMatrix& m);
[[nodiscard]] std::size_t rank(const FieldMatrix& m);

/// cols x (cols - rank) matrix; column t is the kernel vector with a 1 on the t-th free column.
[[nodiscard]] FieldMatrix nullspace_basis(const FieldMatrix& m);

/// Canonical parity-check matrix H of the column space of A: (rows(A) - rank(A)) x rows(A),
/// H * A = 0, full row rank, in reduced row echelon form.
[[nodiscard]] FieldMatrix parity_check(const FieldMatrix& a);

/// Throws Error(DimensionMismatch) on shape or modulus mismatch.
[[nodiscard]] FieldVector mat_vec_mul(const FieldMatrix& m, const FieldVector& x);
/// Product with a sparse vector of length cols(m).
[[nodiscard]] FieldVector mat_sparse_mul(const FieldMatrix& m, std::span<const SparseEntry> x);
[[nodiscard]] FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b);

[[nodiscard]] std::size_t hamming_weight(const FieldVector& x) noexcept;

/// Some x with M x = u, or nullopt if u is outside the column space. Free variables are set to zero.
[[nodiscard]] std::optional<FieldVector> solve_particular(const FieldMatrix& m, const FieldVector& u);

/// Some X with A X = B (one elimination for all right-hand sides), or nullopt if any column of B
/// is outside the column space of A.
[[nodiscard]] std::optional<FieldMatrix> solve_right(const FieldMatrix& a, const FieldMatrix& b);

}  // namespace covkit
