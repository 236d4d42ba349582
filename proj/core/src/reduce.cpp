#include "covkit/reduce.hpp"

#include "covkit/combinatorics.hpp"
#include "json_detail.hpp"

#include <algorithm>
#include <chrono>

namespace covkit {

namespace {

using detail::json;
using detail::rational_json;

void require(bool cond, const std::string& what) {
    if (!cond) throw Error(ErrorKind::BadParams, what);
}

Rational as_rat(std::size_t v) { return Rational(static_cast<std::int64_t>(v)); }

class StageClock {
public:
    explicit StageClock(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}

    void lap(json& timings, const char* stage) {
        if (!enabled_) return;
        const auto now = std::chrono::steady_clock::now();
        timings[stage] = std::chrono::duration<double, std::milli>(now - start_).count();
        start_ = now;
    }

private:
    bool enabled_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace

MldInstance maxlin_to_mld(const MaxLinInstance& inst) {
    inst.validate();
    require(inst.c != Rational(1), "maxlin_to_mld: c = 1 leaves gamma = (1-s)/(1-c) undefined");
    const std::size_t m = inst.a.rows();
    FieldMatrix h = parity_check(inst.a);
    FieldVector u = mat_vec_mul(h, inst.b);
    MldInstance out{std::move(h), std::move(u), floor((Rational(1) - inst.c) * as_rat(m)),
                    (Rational(1) - inst.s) / (Rational(1) - inst.c)};
    out.validate();
    return out;
}

std::uint64_t naive_label_count(std::size_t m, std::uint32_t q, std::size_t r) {
    return r == 0 ? 0 : count_sparse_vectors(m, q, 1, r);
}

std::uint64_t cover_label_count(const CoverFamily& cover, std::uint32_t q) {
    std::uint64_t total = 0;
    for (const IndexSet& s : cover.sets) total = sat_add(total, sat_pow(q - 1, s.size()));
    return total;
}

KMldInstance group_by_labels(const FieldMatrix& m, const FieldVector& u, std::int64_t k, const Rational& gamma,
                             std::vector<ColumnLabel> labels) {
    FieldMatrix mk(m.field(), m.rows(), labels.size());
    for (std::size_t j = 0; j < labels.size(); ++j) {
        const FieldVector col = mat_sparse_mul(m, labels[j].entries);
        for (std::size_t i = 0; i < m.rows(); ++i) mk.set(i, j, col[i]);
    }
    return KMldInstance{std::move(mk), u, k, gamma, std::move(labels), m.cols()};
}

NaiveGrouping mld_group_naive(const MldInstance& inst, std::size_t k, const NaiveGroupingOptions& options) {
    inst.validate();
    require(k >= 1, "mld_group_naive: k must be positive");
    require(inst.ell >= 1, "mld_group_naive: ell must be positive");
    const std::size_t m = inst.h.cols();
    const std::uint32_t q = inst.h.field().q();
    const auto ell = static_cast<std::size_t>(inst.ell);
    const std::size_t r = (ell + k - 1) / k;

    std::optional<Rational> slack;
    if (options.epsilon) {
        const Rational& eps = *options.epsilon;
        require(eps > Rational(0), "mld_group_naive: epsilon must be positive");
        require(as_rat(k) / eps < as_rat(ell), "mld_group_naive: need k/epsilon < ell");
        require(as_rat(ell) < as_rat(m) / inst.gamma, "mld_group_naive: need ell < m/gamma");
        slack = inst.gamma - eps;
    }

    const std::uint64_t count = naive_label_count(m, q, r);
    if (count > options.budget) throw BudgetError(ErrorKind::TooLarge, count, options.budget, "mld_group_naive labels");

    std::vector<ColumnLabel> labels;
    labels.reserve(static_cast<std::size_t>(count));
    for_each_sparse_vector(m, q, 1, r, [&](std::span<const SparseEntry> entries) {
        labels.push_back(ColumnLabel{{entries.begin(), entries.end()}});
        return true;
    });

    const Rational gamma_prime = inst.gamma * as_rat(ell) / (as_rat(r) * as_rat(k));
    return NaiveGrouping{group_by_labels(inst.h, inst.u, static_cast<std::int64_t>(k), gamma_prime, std::move(labels)),
                         r, count, gamma_prime, slack};
}

CoverGrouping mld_group_cover(const MldInstance& inst, const CoverFamily& cover, std::size_t k, std::uint64_t budget) {
    inst.validate();
    require(k >= 1, "mld_group_cover: k must be positive");
    require(cover.m == inst.h.cols(), "mld_group_cover: cover universe must equal cols(H)");
    require(cover.k == k, "mld_group_cover: cover was built for a different k");
    require(inst.ell >= 1, "mld_group_cover: ell must be positive");
    require(Rational(inst.ell) <= cover.alpha * as_rat(cover.m), "mld_group_cover: need ell <= alpha*m");
    require(cover.size_bound > Rational(0), "mld_group_cover: size bound must be positive");

    const std::uint32_t q = inst.h.field().q();
    const std::uint64_t count = cover_label_count(cover, q);
    if (count > budget) throw BudgetError(ErrorKind::TooLarge, count, budget, "mld_group_cover labels");

    std::vector<ColumnLabel> labels;
    labels.reserve(static_cast<std::size_t>(count));
    for (const IndexSet& s : cover.sets) {
        for_each_coefficient_assignment(s, q, [&](std::span<const SparseEntry> entries) {
            labels.push_back(ColumnLabel{{entries.begin(), entries.end()}});
            return true;
        });
    }

    const Rational gamma_prime = inst.gamma * Rational(inst.ell) / (as_rat(k) * cover.size_bound);
    return CoverGrouping{group_by_labels(inst.h, inst.u, static_cast<std::int64_t>(k), gamma_prime, std::move(labels)),
                         count, gamma_prime};
}

LabelIndex::LabelIndex(std::span<const ColumnLabel> labels) {
    sorted_.reserve(labels.size());
    for (std::size_t j = 0; j < labels.size(); ++j) sorted_.emplace_back(labels[j], j);
    std::sort(sorted_.begin(), sorted_.end());
}

std::optional<std::size_t> LabelIndex::find(const ColumnLabel& label) const {
    const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), label,
                                     [](const auto& entry, const ColumnLabel& l) { return entry.first < l; });
    if (it == sorted_.end() || it->first != label) return std::nullopt;
    return it->second;
}

FieldVector split_solution(const FieldVector& x, const CoverFamily& cover, const BalancedPartitionFamily& family,
                           const KMldInstance& inst) {
    return split_solution(x, cover, family, inst, LabelIndex(inst.labels));
}

FieldVector split_solution(const FieldVector& x, const CoverFamily& cover, const BalancedPartitionFamily& family,
                           const KMldInstance& inst, const LabelIndex& index) {
    if (x.size() != cover.m || inst.m_source != cover.m) {
        throw Error(ErrorKind::DimensionMismatch, "split_solution: x, cover and instance disagree on m");
    }
    IndexSet support;
    for (const SparseEntry& e : x.support()) support.push_back(e.index);
    const std::vector<IndexSet> parts = find_exact_cover(cover, family, support);

    FieldVector y(x.field(), inst.labels.size());
    for (const IndexSet& part : parts) {
        ColumnLabel label;
        for (const std::size_t i : part) label.entries.push_back({i, x[i]});
        const auto pos = index.find(label);
        if (!pos) {
            if (part.empty()) continue;
            throw Error(ErrorKind::PreconditionViolation, "split_solution: projected part is not a label");
        }
        y.set(*pos, y[*pos] + 1);
    }
    return y;
}

FieldVector split_solution_naive(const FieldVector& x, const NaiveGrouping& grouping) {
    const KMldInstance& inst = grouping.instance;
    if (x.size() != inst.m_source) throw Error(ErrorKind::DimensionMismatch, "split_solution_naive: wrong length");
    const std::vector<SparseEntry> support = x.support();
    const std::size_t runs = (support.size() + grouping.r - 1) / grouping.r;
    if (runs > static_cast<std::size_t>(inst.k)) {
        throw Error(ErrorKind::PreconditionViolation, "split_solution_naive: weight exceeds k * r");
    }
    const LabelIndex index(inst.labels);
    FieldVector y(x.field(), inst.labels.size());
    for (std::size_t start = 0; start < support.size(); start += grouping.r) {
        const auto end = support.begin() + static_cast<std::ptrdiff_t>(std::min(support.size(), start + grouping.r));
        const ColumnLabel label{{support.begin() + static_cast<std::ptrdiff_t>(start), end}};
        const auto pos = index.find(label);
        if (!pos) throw Error(ErrorKind::PreconditionViolation, "split_solution_naive: run is not a label");
        y.set(*pos, y[*pos] + 1);
    }
    return y;
}

FieldVector expand_solution(const FieldVector& y, const KMldInstance& inst) {
    if (y.size() != inst.labels.size()) throw Error(ErrorKind::DimensionMismatch, "expand_solution: wrong length");
    const PrimeField& f = y.field();
    FieldVector x(f, inst.m_source);
    for (const SparseEntry& e : y.support()) {
        for (const SparseEntry& l : inst.labels[e.index].entries) x.set(l.index, f.add(x[l.index], f.mul(e.coef, l.coef)));
    }
    return x;
}

NcpInstance kmld_to_ncp(const FieldMatrix& h, const FieldVector& u, std::int64_t k, const Rational& gamma) {
    const auto x0 = solve_particular(h, u);
    if (!x0) throw Error(ErrorKind::Infeasible, "kmld_to_ncp: u is outside the column space of H");
    NcpInstance out{nullspace_basis(h), x0->negated(), k, gamma};
    out.validate();
    return out;
}

NcpInstance kmld_to_ncp(const KMldInstance& inst) { return kmld_to_ncp(inst.mk, inst.u, inst.k, inst.gamma); }

std::string_view to_string(FamilySource source) noexcept {
    switch (source) {
        case FamilySource::Random: return "random";
        case FamilySource::Deterministic: return "deterministic";
        case FamilySource::Explicit: return "explicit";
    }
    return "unknown";
}

PipelineResult pipeline_maxlin_to_kmld(const MaxLinInstance& inst, const PipelineOptions& options) {
    require(options.k >= 1, "pipeline: k must be positive");
    require(options.epsilon > Rational(0), "pipeline: epsilon must be positive");
    StageClock clock(options.timings);
    json timings = json::object();

    MldInstance mld = maxlin_to_mld(inst);
    const std::size_t m = mld.h.cols();
    require(mld.ell >= 1, "pipeline: ell = floor((1-c)m) must be positive");
    const Rational alpha = Rational(mld.ell) / as_rat(m);
    clock.lap(timings, "maxlin_to_mld");

    json family_report = json::object();
    BalancedPartitionFamily family;
    switch (options.source) {
        case FamilySource::Random: {
            require(options.seed.has_value(), "pipeline: the random family source needs a seed");
            RandomFamilyResult drawn = random_family(m, options.k, alpha, options.epsilon, *options.seed);
            family_report["seed"] = *options.seed;
            family_report["samples_drawn"] = drawn.samples_drawn;
            family = std::move(drawn.family);
            break;
        }
        case FamilySource::Deterministic:
            family = deterministic_family(m, options.k, alpha, options.epsilon);
            break;
        case FamilySource::Explicit:
            require(options.family.has_value(), "pipeline: the explicit family source needs a family");
            family = *options.family;
            family.validate();
            require(family.m == m && family.k == options.k, "pipeline: explicit family has the wrong m or k");
            break;
    }
    const P1Result p1 = check_p1(family);
    if (!p1.ok) throw Error(ErrorKind::FamilyInvalid, "pipeline: partition family violates its bucket bound");
    family_report["source"] = std::string(to_string(options.source));
    family_report["functions"] = family.functions.size();
    family_report["bucket_slack"] = rational_json(family.bucket_slack);
    family_report["guarantee_regime"] = family.guarantee_regime;
    clock.lap(timings, "family");

    json verification = json::object();
    verification["p1"] = {{"ok", true}};
    const std::size_t subset_size = static_cast<std::size_t>(mld.ell);
    if (binomial(m, subset_size) <= options.budget) {
        const P2Result p2 = check_p2_exhaustive(family, alpha, options.epsilon, options.budget);
        verification["p2"] = {{"mode", "exhaustive"}, {"ok", p2.ok}, {"checked", p2.subsets_checked}};
    } else {
        const std::uint64_t failures =
            check_p2_sampled(family, alpha, options.epsilon, options.p2_trials, options.seed.value_or(0));
        verification["p2"] = {
            {"mode", "sampled"}, {"ok", failures == 0}, {"checked", options.p2_trials}, {"failures", failures}};
    }
    clock.lap(timings, "verify_family");

    CoverFamily cover = cover_from_partition_family(family, alpha, options.epsilon, options.budget);
    cover.provenance = std::string(to_string(options.source)) + " partition family";
    verification["c1"] = {{"ok", check_c1(cover).ok}};
    std::uint64_t c2_work = 0;
    for (std::size_t i = 0; i <= subset_size; ++i) c2_work = sat_add(c2_work, binomial(m, i));
    if (c2_work <= options.budget) {
        const C2Result c2 = check_c2_exhaustive(cover, family, alpha, options.epsilon, options.budget);
        verification["c2"] = {{"mode", "exhaustive"}, {"ok", c2.ok}, {"checked", c2.subsets_checked}};
    } else {
        verification["c2"] = {{"mode", "skipped"}, {"required", c2_work}};
    }
    clock.lap(timings, "cover");

    CoverGrouping grouped = mld_group_cover(mld, cover, options.k, options.budget);
    clock.lap(timings, "group_cover");

    json report = json::object();
    report["source"] = {{"rows", inst.a.rows()},
                        {"cols", inst.a.cols()},
                        {"q", inst.a.field().q()},
                        {"c", rational_json(inst.c)},
                        {"s", rational_json(inst.s)}};
    report["parameters"] = {
        {"k", options.k}, {"epsilon", rational_json(options.epsilon)}, {"alpha", rational_json(alpha)}};
    report["stages"] = {
        {"mld", {{"rows", mld.h.rows()}, {"cols", m}, {"ell", mld.ell}, {"gamma", rational_json(mld.gamma)}}},
        {"family", family_report},
        {"cover",
         {{"sets", cover.sets.size()},
          {"size_bound", rational_json(cover.size_bound)},
          {"size_limit", cover_family_size_limit(family)}}},
        {"kmld",
         {{"rows", grouped.instance.mk.rows()},
          {"cols", grouped.instance.mk.cols()},
          {"k", grouped.instance.k},
          {"gamma", rational_json(grouped.gamma_prime)}}},
    };
    report["thresholds"] = {{"gamma_mld", rational_json(mld.gamma)}, {"gamma_prime", rational_json(grouped.gamma_prime)}};
    report["verification"] = verification;
    if (options.timings) report["timings_ms"] = timings;

    return PipelineResult{std::move(mld), std::move(family), std::move(cover), std::move(grouped.instance),
                          std::move(report)};
}

}  // namespace covkit
