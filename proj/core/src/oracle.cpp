#include "covkit/oracle.hpp"

#include "covkit/combinatorics.hpp"

#include <type_traits>
#include <variant>

namespace covkit {

namespace {

Rational as_rat(std::size_t v) { return Rational(static_cast<std::int64_t>(v)); }

std::uint64_t checked_space(std::uint32_t q, std::size_t n, std::uint64_t budget, const char* what) {
    const std::uint64_t size = sat_pow(q, n);
    if (size > budget) throw BudgetError(ErrorKind::BudgetExceeded, size, budget, what);
    return size;
}

/// Advances x to the next vector in lexicographic order; false after the last one.
bool next_lex(std::vector<Residue>& x, std::uint32_t q) {
    for (std::size_t i = x.size(); i > 0; --i) {
        if (++x[i - 1] < q) return true;
        x[i - 1] = 0;
    }
    return false;
}

std::size_t distance(const FieldMatrix& a, std::span<const Residue> z, const FieldVector& t) {
    const PrimeField& f = a.field();
    std::size_t dist = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::uint64_t acc = 0;
        const auto row = a.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) acc += static_cast<std::uint64_t>(row[j]) * z[j];
        if (static_cast<Residue>(acc % f.q()) != t[i]) ++dist;
    }
    return dist;
}

}  // namespace

std::size_t unsatisfied(const FieldMatrix& a, const FieldVector& b, const FieldVector& x) {
    if (a.cols() != x.size() || a.rows() != b.size()) throw Error(ErrorKind::DimensionMismatch, "unsatisfied: shapes");
    return distance(a, x.entries(), b);
}

MaxLinSolution solve_maxlin_exact(const MaxLinInstance& inst, std::uint64_t budget) {
    const std::size_t n = inst.a.cols();
    const std::uint32_t q = inst.a.field().q();
    checked_space(q, n, budget, "solve_maxlin_exact");
    std::vector<Residue> x(n, 0);
    std::vector<Residue> best = x;
    std::size_t best_unsat = distance(inst.a, x, inst.b);
    while (best_unsat > 0 && next_lex(x, q)) {
        const std::size_t d = distance(inst.a, x, inst.b);
        if (d < best_unsat) {
            best_unsat = d;
            best = x;
        }
    }
    return MaxLinSolution{FieldVector(inst.a.field(), std::move(best)), best_unsat};
}

std::optional<MldSolution> solve_mld_min_weight(const FieldMatrix& h, const FieldVector& u, std::size_t w_max,
                                                std::uint64_t budget) {
    if (h.rows() != u.size() || !(h.field() == u.field())) {
        throw Error(ErrorKind::DimensionMismatch, "solve_mld_min_weight: H and u disagree");
    }
    const std::size_t n = h.cols();
    const std::uint32_t q = h.field().q();
    const std::size_t w = std::min(w_max, n);
    const std::uint64_t candidates = count_sparse_vectors(n, q, 0, w);
    if (candidates > budget) throw BudgetError(ErrorKind::BudgetExceeded, candidates, budget, "solve_mld_min_weight");

    const PrimeField& f = h.field();
    // Columns are scanned often; keep them contiguous.
    const FieldMatrix ht = h.transpose();
    std::vector<Residue> acc(h.rows());
    std::optional<MldSolution> found;
    for_each_sparse_vector(n, q, 0, w, [&](std::span<const SparseEntry> entries) {
        std::fill(acc.begin(), acc.end(), 0);
        for (const SparseEntry& e : entries) {
            const auto col = ht.row(e.index);
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = f.add(acc[i], f.mul(col[i], e.coef));
        }
        for (std::size_t i = 0; i < acc.size(); ++i) {
            if (acc[i] != u[i]) return true;
        }
        FieldVector x(f, n);
        for (const SparseEntry& e : entries) x.set(e.index, e.coef);
        found = MldSolution{std::move(x), entries.size()};
        return false;
    });
    return found;
}

NcpSolution solve_ncp_exact(const FieldMatrix& a, const FieldVector& t, std::uint64_t budget) {
    if (a.rows() != t.size() || !(a.field() == t.field())) {
        throw Error(ErrorKind::DimensionMismatch, "solve_ncp_exact: A and t disagree");
    }
    const std::uint32_t q = a.field().q();
    checked_space(q, a.cols(), budget, "solve_ncp_exact");
    std::vector<Residue> z(a.cols(), 0);
    std::vector<Residue> best = z;
    std::size_t best_dist = distance(a, z, t);
    while (best_dist > 0 && next_lex(z, q)) {
        const std::size_t d = distance(a, z, t);
        if (d < best_dist) {
            best_dist = d;
            best = z;
        }
    }
    return NcpSolution{FieldVector(a.field(), std::move(best)), best_dist};
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Yes: return "YES";
        case Verdict::No: return "NO";
        case Verdict::Neither: return "NEITHER";
    }
    return "unknown";
}

GapThresholds gap_thresholds(const Instance& inst) {
    return std::visit(
        [](const auto& v) -> GapThresholds {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, MaxLinInstance>) {
                const Rational m = as_rat(v.a.rows());
                return {Rational(floor((Rational(1) - v.c) * m)), (Rational(1) - v.s) * m};
            } else if constexpr (std::is_same_v<T, MldInstance>) {
                return {Rational(v.ell), v.gamma * Rational(v.ell)};
            } else {
                return {Rational(v.k), v.gamma * Rational(v.k)};
            }
        },
        inst);
}

GapVerdict classify_gap(const Instance& inst, std::optional<std::size_t> optimum) {
    const GapThresholds th = gap_thresholds(inst);
    Verdict verdict = Verdict::No;
    if (optimum) {
        const Rational opt = as_rat(*optimum);
        if (opt <= th.yes) {
            verdict = Verdict::Yes;
        } else if (opt <= th.no) {
            verdict = Verdict::Neither;
        }
    }
    return GapVerdict{verdict, optimum, th};
}

GapVerdict solve_and_classify(const Instance& inst, std::uint64_t budget) {
    const GapThresholds th = gap_thresholds(inst);
    const auto limit = [](const Rational& r) { return static_cast<std::size_t>(std::max<std::int64_t>(0, floor(r))); };
    // The YES search is much cheaper than the NO search, so try it first.
    const auto min_weight = [&](const FieldMatrix& h, const FieldVector& u) -> std::optional<std::size_t> {
        auto s = solve_mld_min_weight(h, u, limit(th.yes), budget);
        if (!s) s = solve_mld_min_weight(h, u, limit(th.no), budget);
        return s ? std::optional<std::size_t>(s->weight) : std::nullopt;
    };
    const std::optional<std::size_t> optimum = std::visit(
        [&](const auto& v) -> std::optional<std::size_t> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, MaxLinInstance>) {
                return solve_maxlin_exact(v, budget).min_unsat;
            } else if constexpr (std::is_same_v<T, MldInstance>) {
                return min_weight(v.h, v.u);
            } else if constexpr (std::is_same_v<T, KMldInstance>) {
                return min_weight(v.mk, v.u);
            } else {
                return solve_ncp_exact(v.a, v.t, budget).min_dist;
            }
        },
        inst);
    return classify_gap(inst, optimum);
}

}  // namespace covkit
