#include "covkit/gfmat.hpp"

#include "covkit/error.hpp"

#include <string>
#include <utility>

namespace covkit {

bool is_prime(std::uint32_t n) noexcept {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
    if (q > kMaxModulus || !is_prime(q)) {
        throw Error(ErrorKind::BadParams, "modulus " + std::to_string(q) + " is not a prime in [2, 65521]");
    }
}

Residue PrimeField::inv(Residue a) const {
    if (a % q_ == 0) throw Error(ErrorKind::ZeroInverse, "zero has no inverse");
    // extended Euclid on (a, q)
    std::int64_t r0 = q_, r1 = a % q_;
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        const std::int64_t t = r0 / r1;
        r0 = std::exchange(r1, r0 - t * r1);
        s0 = std::exchange(s1, s0 - t * s1);
    }
    return reduce(s0);
}

FieldElement field_inv(FieldElement a) {
    const PrimeField field(a.modulus);
    if (a.value >= a.modulus) throw Error(ErrorKind::BadParams, "field element out of range");
    return {field.inv(a.value), a.modulus};
}

namespace {

void check_entries(const PrimeField& field, std::span<const Residue> entries) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i] >= field.q()) {
            throw Error(ErrorKind::BadParams, "entry " + std::to_string(i) + " = " + std::to_string(entries[i]) +
                                                  " is not reduced mod " + std::to_string(field.q()));
        }
    }
}

}  // namespace

FieldVector::FieldVector(PrimeField field, std::vector<Residue> entries) : field_(field), entries_(std::move(entries)) {
    check_entries(field_, entries_);
}

void FieldVector::add_scaled(const FieldVector& other, Residue coef) {
    if (other.size() != size() || other.field() != field_) {
        throw Error(ErrorKind::DimensionMismatch, "add_scaled: vector shape or modulus mismatch");
    }
    if (coef == 0) return;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] = field_.add(entries_[i], field_.mul(coef, other.entries_[i]));
    }
}

FieldVector FieldVector::negated() const {
    FieldVector out(field_, size());
    for (std::size_t i = 0; i < size(); ++i) out.entries_[i] = field_.neg(entries_[i]);
    return out;
}

std::vector<SparseEntry> FieldVector::support() const {
    std::vector<SparseEntry> out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i] != 0) out.push_back({i, entries_[i]});
    }
    return out;
}

FieldMatrix::FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols, std::vector<Residue> entries)
    : field_(field), rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows * cols) {
        throw Error(ErrorKind::DimensionMismatch, "matrix has " + std::to_string(entries_.size()) +
                                                      " entries, expected " + std::to_string(rows * cols));
    }
    check_entries(field_, entries_);
}

FieldMatrix FieldMatrix::identity(PrimeField field, std::size_t n) {
    FieldMatrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.entries_[i * n + i] = 1;
    return m;
}

FieldMatrix FieldMatrix::from_rows(PrimeField field, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<Residue> entries;
    entries.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw Error(ErrorKind::DimensionMismatch, "ragged row list");
        for (const std::int64_t v : row) entries.push_back(field.reduce(v));
    }
    return FieldMatrix(field, r, c, std::move(entries));
}

FieldMatrix FieldMatrix::from_columns(PrimeField field, std::size_t rows, std::span<const FieldVector> columns) {
    FieldMatrix m(field, rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != rows || columns[j].field() != field) {
            throw Error(ErrorKind::DimensionMismatch, "column " + std::to_string(j) + " has the wrong shape");
        }
        for (std::size_t i = 0; i < rows; ++i) m.entries_[i * m.cols_ + j] = columns[j][i];
    }
    return m;
}

FieldVector FieldMatrix::column(std::size_t c) const {
    std::vector<Residue> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = entries_[i * cols_ + c];
    return FieldVector(field_, std::move(out));
}

FieldMatrix FieldMatrix::transpose() const {
    FieldMatrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) t.entries_[j * rows_ + i] = entries_[i * cols_ + j];
    }
    return t;
}

bool FieldMatrix::is_zero() const noexcept {
    for (const Residue v : entries_) {
        if (v != 0) return false;
    }
    return true;
}

RrefResult rref(const FieldMatrix& m) {
    const PrimeField& f = m.field();
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    std::vector<Residue> a(m.entries().begin(), m.entries().end());
    auto at = [&](std::size_t r, std::size_t c) -> Residue& { return a[r * cols + c]; };

    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && at(p, c) == 0) ++p;
        if (p == rows) continue;
        if (p != r) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(at(p, j), at(r, j));
        }
        const Residue inv = f.inv(at(r, c));
        for (std::size_t j = c; j < cols; ++j) at(r, j) = f.mul(at(r, j), inv);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || at(i, c) == 0) continue;
            const Residue factor = at(i, c);
            for (std::size_t j = c; j < cols; ++j) at(i, j) = f.sub(at(i, j), f.mul(factor, at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return {FieldMatrix(f, rows, cols, std::move(a)), r, std::move(pivots)};
}

std::size_t rank(const FieldMatrix& m) { return rref(m).rank; }

FieldMatrix nullspace_basis(const FieldMatrix& m) {
    const RrefResult red = rref(m);
    const PrimeField& f = m.field();
    const std::size_t cols = m.cols();

    std::vector<bool> is_pivot(cols, false);
    for (const std::size_t p : red.pivot_cols) is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < cols; ++c) {
        if (!is_pivot[c]) free_cols.push_back(c);
    }

    FieldMatrix basis(f, cols, free_cols.size());
    for (std::size_t t = 0; t < free_cols.size(); ++t) {
        const std::size_t fc = free_cols[t];
        basis.set(fc, t, 1);
        for (std::size_t i = 0; i < red.rank; ++i) {
            basis.set(red.pivot_cols[i], t, f.neg(red.matrix.at(i, fc)));
        }
    }
    return basis;
}

FieldMatrix parity_check(const FieldMatrix& a) {
    // rows of H span {h : h^T A = 0} = ker(A^T)
    const FieldMatrix kernel = nullspace_basis(a.transpose());
    return rref(kernel.transpose()).matrix;
}

FieldVector mat_vec_mul(const FieldMatrix& m, const FieldVector& x) {
    if (m.cols() != x.size() || m.field() != x.field()) {
        throw Error(ErrorKind::DimensionMismatch, "mat_vec_mul: " + std::to_string(m.rows()) + "x" +
                                                      std::to_string(m.cols()) + " matrix times length-" +
                                                      std::to_string(x.size()) + " vector");
    }
    const PrimeField& f = m.field();
    std::vector<Residue> out(m.rows(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto row = m.row(i);
        Residue acc = 0;
        for (std::size_t j = 0; j < row.size(); ++j) acc = f.add(acc, f.mul(row[j], x[j]));
        out[i] = acc;
    }
    return FieldVector(f, std::move(out));
}

FieldVector mat_sparse_mul(const FieldMatrix& m, std::span<const SparseEntry> x) {
    const PrimeField& f = m.field();
    std::vector<Residue> out(m.rows(), 0);
    for (const SparseEntry& e : x) {
        if (e.index >= m.cols()) throw Error(ErrorKind::DimensionMismatch, "sparse index out of range");
        for (std::size_t i = 0; i < m.rows(); ++i) out[i] = f.add(out[i], f.mul(m.at(i, e.index), e.coef));
    }
    return FieldVector(f, std::move(out));
}

FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.cols() != b.rows() || a.field() != b.field()) {
        throw Error(ErrorKind::DimensionMismatch, "mat_mul: inner dimensions or moduli differ");
    }
    const PrimeField& f = a.field();
    FieldMatrix out(f, a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            Residue acc = 0;
            for (std::size_t t = 0; t < a.cols(); ++t) acc = f.add(acc, f.mul(a.at(i, t), b.at(t, j)));
            out.set(i, j, acc);
        }
    }
    return out;
}

std::size_t hamming_weight(const FieldVector& x) noexcept {
    std::size_t w = 0;
    for (const Residue v : x.entries()) w += v != 0 ? 1 : 0;
    return w;
}

std::optional<FieldVector> solve_particular(const FieldMatrix& m, const FieldVector& u) {
    if (u.size() != m.rows() || u.field() != m.field()) {
        throw Error(ErrorKind::DimensionMismatch, "solve_particular: target length must equal rows");
    }
    const std::size_t cols = m.cols();
    FieldMatrix aug(m.field(), m.rows(), cols + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) aug.set(i, j, m.at(i, j));
        aug.set(i, cols, u[i]);
    }
    const RrefResult red = rref(aug);
    if (!red.pivot_cols.empty() && red.pivot_cols.back() == cols) return std::nullopt;
    FieldVector x(m.field(), cols);
    for (std::size_t i = 0; i < red.rank; ++i) x.set(red.pivot_cols[i], red.matrix.at(i, cols));
    return x;
}

std::optional<FieldMatrix> solve_right(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.rows() != b.rows() || a.field() != b.field()) {
        throw Error(ErrorKind::DimensionMismatch, "solve_right: row counts or moduli differ");
    }
    const std::size_t n = a.cols();
    const std::size_t extra = b.cols();
    FieldMatrix aug(a.field(), a.rows(), n + extra);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.set(i, j, a.at(i, j));
        for (std::size_t j = 0; j < extra; ++j) aug.set(i, n + j, b.at(i, j));
    }
    const RrefResult red = rref(aug);
    // pivots in [0, n) come first; any pivot at or beyond n is an inconsistent row
    std::size_t coeff_rank = 0;
    while (coeff_rank < red.rank && red.pivot_cols[coeff_rank] < n) ++coeff_rank;
    if (coeff_rank != red.rank) return std::nullopt;
    FieldMatrix x(a.field(), n, extra);
    for (std::size_t i = 0; i < coeff_rank; ++i) {
        for (std::size_t j = 0; j < extra; ++j) x.set(red.pivot_cols[i], j, red.matrix.at(i, n + j));
    }
    return x;
}

}  // namespace covkit
