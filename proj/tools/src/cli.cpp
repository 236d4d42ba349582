#include "cli.hpp"

#include "covkit/covers.hpp"
#include "covkit/error.hpp"
#include "covkit/instances.hpp"
#include "covkit/oracle.hpp"
#include "covkit/partitions.hpp"
#include "covkit/rational.hpp"
#include "covkit/reduce.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <variant>

namespace covkit::cli {

namespace {

using nlohmann::json;

json rat(const Rational& r) { return json::array({r.numerator(), r.denominator()}); }

json vec(const FieldVector& v) { return json(std::vector<Residue>(v.entries().begin(), v.entries().end())); }

std::uint64_t env_budget() {
    const char* env = std::getenv("COVKIT_BUDGET");
    if (env == nullptr || *env == '\0') return kDefaultBudget;
    const std::string_view text(env);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
        throw Error(ErrorKind::BadParams, "COVKIT_BUDGET must be a positive integer");
    }
    return value;
}

json summary(const Instance& inst) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            json s = json::object();
            if constexpr (std::is_same_v<T, MaxLinInstance>) {
                s = {{"rows", v.a.rows()}, {"cols", v.a.cols()}, {"q", v.a.field().q()}};
            } else if constexpr (std::is_same_v<T, MldInstance>) {
                s = {{"rows", v.h.rows()}, {"cols", v.h.cols()}, {"q", v.h.field().q()}};
            } else if constexpr (std::is_same_v<T, KMldInstance>) {
                s = {{"rows", v.mk.rows()}, {"cols", v.mk.cols()}, {"q", v.mk.field().q()}};
            } else {
                s = {{"rows", v.a.rows()}, {"cols", v.a.cols()}, {"q", v.a.field().q()}};
            }
            return s;
        },
        inst);
}

template <typename T>
T load_as(const std::string& path, std::string_view expected) {
    Instance inst = load_instance(path);
    if (!std::holds_alternative<T>(inst)) {
        throw Error(ErrorKind::BadParams, path + ": expected a " + std::string(expected) + " instance, found " +
                                              std::string(kind_name(inst)));
    }
    return std::get<T>(std::move(inst));
}

/// Writes the artifact to `path`, or embeds it in the report when no path was given.
void emit(json& report, const json& artifact, const std::string& path) {
    if (path.empty()) {
        report["artifact"] = artifact;
    } else {
        write_json_file(path, artifact);
        report["output"] = path;
    }
}

json thresholds_json(const GapThresholds& th) { return {{"yes", rat(th.yes)}, {"no", rat(th.no)}}; }

struct Outcome {
    json report;
    int code = kExitOk;
};

struct Options {
    std::size_t n = 0;
    std::size_t m = 0;
    std::uint32_t q = 0;
    std::size_t k = 0;
    std::optional<std::size_t> k_opt;
    std::string c;
    std::string s;
    std::string alpha;
    std::string epsilon;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> budget;
    std::optional<std::size_t> w_max;
    std::optional<std::uint64_t> sampled;
    std::uint64_t p2_trials = 1000;
    bool timings = false;
    std::string in;
    std::string out;
    std::string family;
    std::string cover;
    std::string family_mode;
};

class Cli {
public:
    Cli() : app_("Reductions between MaxLin, MLD, k-MLD and NCP over prime fields", "covkit") { build(); }

    int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app_.parse(std::move(reversed));
        } catch (const CLI::CallForHelp&) {
            out << deepest().help();
            return kExitOk;
        } catch (const CLI::CallForAllHelp&) {
            out << app_.help("", CLI::AppFormatMode::All);
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            err << "usage error: " << e.what() << "\n\n" << deepest().help();
            return kExitInvalid;
        }
        if (!action_) {
            err << "usage error: missing subcommand\n\n" << deepest().help();
            return kExitInvalid;
        }
        try {
            Outcome outcome = action_();
            out << dump_canonical(outcome.report);
            return outcome.code;
        } catch (const Error& e) {
            err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
            return e.kind() == ErrorKind::BudgetExceeded || e.kind() == ErrorKind::TooLarge ? kExitBudget
                                                                                           : kExitInvalid;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return kExitInvalid;
        }
    }

private:
    CLI::App app_;
    Options o_;
    std::function<Outcome()> action_;

    CLI::App& deepest() {
        CLI::App* cur = &app_;
        for (auto subs = cur->get_subcommands(); !subs.empty(); subs = cur->get_subcommands()) cur = subs.front();
        return *cur;
    }

    std::uint64_t budget() const { return o_.budget ? *o_.budget : env_budget(); }

    void on_run(CLI::App* sub, std::function<Outcome()> fn) {
        sub->callback([this, fn = std::move(fn)] { action_ = fn; });
    }

    void add_budget(CLI::App* sub) {
        sub->add_option("--budget", o_.budget, "Enumeration budget (default COVKIT_BUDGET or 1000000)")
            ->check(CLI::PositiveNumber);
    }
    void add_out(CLI::App* sub) { sub->add_option("-o,--out", o_.out, "Write the artifact to this file"); }
    void add_in(CLI::App* sub) { sub->add_option("--in", o_.in, "Input instance file")->required(); }

    void build() {
        app_.require_subcommand(1);
        app_.set_help_all_flag("--help-all", "Show help for every subcommand");
        build_gen();
        build_family();
        build_cover();
        build_reduce();
        build_verify();
        build_solve();
        build_classify();
    }

    void build_gen() {
        auto* sub = app_.add_subcommand("gen-maxlin", "Planted Gap-MaxLin instance");
        sub->add_option("--n", o_.n, "Variables")->required();
        sub->add_option("--m", o_.m, "Equations")->required();
        sub->add_option("--q", o_.q, "Prime modulus")->required();
        sub->add_option("--c", o_.c, "Completeness threshold num/den")->required();
        sub->add_option("--s", o_.s, "Soundness threshold num/den (default c/2)");
        sub->add_option("--seed", o_.seed, "Random seed")->required();
        add_out(sub);
        on_run(sub, [this] {
            const Rational c = parse_rational(o_.c);
            std::optional<Rational> s;
            if (!o_.s.empty()) s = parse_rational(o_.s);
            PlantedMaxLin p = gen_planted_maxlin(o_.n, o_.m, o_.q, c, *o_.seed, s);
            json report = {{"command", "gen-maxlin"},
                           {"parameters",
                            {{"n", o_.n},
                             {"m", o_.m},
                             {"q", o_.q},
                             {"c", rat(p.instance.c)},
                             {"s", rat(p.instance.s)},
                             {"seed", *o_.seed}}},
                           {"planted_x", vec(p.planted_x)},
                           {"satisfied", p.satisfied_rows.size()},
                           {"instance", summary(p.instance)}};
            emit(report, to_json(Instance{p.instance}), o_.out);
            return Outcome{report};
        });
    }

    void build_family() {
        auto* top = app_.add_subcommand("build-family", "Balanced partition family");
        top->require_subcommand(1);

        auto* random = top->add_subcommand("random", "Filtered uniform random functions");
        random->add_option("--m", o_.m, "Universe size")->required();
        random->add_option("--k", o_.k, "Buckets")->required();
        random->add_option("--alpha", o_.alpha, "Subset fraction num/den")->required();
        random->add_option("--epsilon", o_.epsilon, "Balance slack num/den")->required();
        random->add_option("--seed", o_.seed, "Random seed")->required();
        add_out(random);
        on_run(random, [this] {
            const Rational alpha = parse_rational(o_.alpha);
            const Rational eps = parse_rational(o_.epsilon);
            RandomFamilyResult r = random_family(o_.m, o_.k, alpha, eps, *o_.seed);
            json report = {{"command", "build-family random"},
                           {"parameters",
                            {{"m", o_.m}, {"k", o_.k}, {"alpha", rat(alpha)}, {"epsilon", rat(eps)}, {"seed", *o_.seed}}},
                           {"samples_drawn", r.samples_drawn},
                           {"functions", r.family.functions.size()},
                           {"bucket_slack", rat(r.family.bucket_slack)},
                           {"guarantee_regime", r.family.guarantee_regime},
                           {"p1", check_p1(r.family).ok}};
            emit(report, to_json(r.family), o_.out);
            return Outcome{report};
        });

        auto* det = top->add_subcommand("deterministic", "Diagonal hypercube projections");
        det->add_option("--m", o_.m, "Universe size")->required();
        det->add_option("--k", o_.k, "Buckets")->required();
        det->add_option("--eta,--alpha", o_.alpha, "Subset fraction num/den")->required();
        det->add_option("--epsilon", o_.epsilon, "Balance slack num/den")->required();
        add_out(det);
        on_run(det, [this] {
            const Rational eta = parse_rational(o_.alpha);
            const Rational eps = parse_rational(o_.epsilon);
            BalancedPartitionFamily f = deterministic_family(o_.m, o_.k, eta, eps);
            json report = {{"command", "build-family deterministic"},
                           {"parameters", {{"m", o_.m}, {"k", o_.k}, {"eta", rat(eta)}, {"epsilon", rat(eps)}}},
                           {"functions", f.functions.size()},
                           {"bucket_slack", rat(f.bucket_slack)},
                           {"guarantee_regime", f.guarantee_regime},
                           {"p1", check_p1(f).ok}};
            emit(report, to_json(f), o_.out);
            return Outcome{report};
        });
    }

    void build_cover() {
        auto* sub = app_.add_subcommand("build-cover", "Cover family from a partition family");
        sub->add_option("--family", o_.family, "Partition family file")->required();
        sub->add_option("--alpha", o_.alpha, "Subset fraction num/den")->required();
        sub->add_option("--epsilon", o_.epsilon, "Balance slack num/den")->required();
        add_budget(sub);
        add_out(sub);
        on_run(sub, [this] {
            const BalancedPartitionFamily f = partition_family_from_json(read_json_file(o_.family));
            const Rational alpha = parse_rational(o_.alpha);
            const Rational eps = parse_rational(o_.epsilon);
            CoverFamily cover = cover_from_partition_family(f, alpha, eps, budget());
            cover.provenance = o_.family;
            json report = {{"command", "build-cover"},
                           {"parameters", {{"alpha", rat(alpha)}, {"epsilon", rat(eps)}}},
                           {"m", cover.m},
                           {"k", cover.k},
                           {"sets", cover.sets.size()},
                           {"size_bound", rat(cover.size_bound)},
                           {"size_limit", cover_family_size_limit(f)},
                           {"c1", check_c1(cover).ok}};
            emit(report, to_json(cover), o_.out);
            return Outcome{report};
        });
    }

    void build_reduce() {
        auto* top = app_.add_subcommand("reduce", "Reductions");
        top->require_subcommand(1);

        auto* dual = top->add_subcommand("maxlin-to-mld", "Gap-MaxLin to Gap-MLD by duality");
        add_in(dual);
        add_out(dual);
        on_run(dual, [this] {
            const MldInstance mld = maxlin_to_mld(load_as<MaxLinInstance>(o_.in, "maxlin"));
            json report = {{"command", "reduce maxlin-to-mld"},
                           {"instance", summary(mld)},
                           {"ell", mld.ell},
                           {"gamma", rat(mld.gamma)}};
            emit(report, to_json(Instance{mld}), o_.out);
            return Outcome{report};
        });

        auto* naive = top->add_subcommand("group-naive", "Gap-MLD to Gap-k-MLD with all small labels");
        add_in(naive);
        naive->add_option("--k", o_.k, "Target weight")->required();
        naive->add_option("--epsilon", o_.epsilon, "Enforce k/eps < ell < m/gamma and report gamma - eps");
        add_budget(naive);
        add_out(naive);
        on_run(naive, [this] {
            const MldInstance mld = load_as<MldInstance>(o_.in, "mld");
            NaiveGroupingOptions opts;
            if (!o_.epsilon.empty()) opts.epsilon = parse_rational(o_.epsilon);
            opts.budget = budget();
            const NaiveGrouping g = mld_group_naive(mld, o_.k, opts);
            json report = {{"command", "reduce group-naive"},
                           {"instance", summary(g.instance)},
                           {"k", o_.k},
                           {"r", g.r},
                           {"label_count", g.label_count},
                           {"gamma_prime", rat(g.gamma_prime)}};
            if (g.gamma_minus_epsilon) report["gamma_minus_epsilon"] = rat(*g.gamma_minus_epsilon);
            emit(report, to_json(Instance{g.instance}), o_.out);
            return Outcome{report};
        });

        auto* grouped = top->add_subcommand("group-cover", "Gap-MLD to Gap-k-MLD along a cover family");
        add_in(grouped);
        grouped->add_option("--cover", o_.cover, "Cover family file")->required();
        grouped->add_option("--k", o_.k_opt, "Target weight (default: the cover's k)");
        add_budget(grouped);
        add_out(grouped);
        on_run(grouped, [this] {
            const MldInstance mld = load_as<MldInstance>(o_.in, "mld");
            const CoverFamily cover = cover_family_from_json(read_json_file(o_.cover));
            const CoverGrouping g = mld_group_cover(mld, cover, o_.k_opt.value_or(cover.k), budget());
            json report = {{"command", "reduce group-cover"},
                           {"instance", summary(g.instance)},
                           {"k", g.instance.k},
                           {"cover_sets", cover.sets.size()},
                           {"label_count", g.label_count},
                           {"gamma_prime", rat(g.gamma_prime)}};
            emit(report, to_json(Instance{g.instance}), o_.out);
            return Outcome{report};
        });

        auto* ncp = top->add_subcommand("kmld-to-ncp", "Gap-k-MLD to Gap-k-NCP");
        add_in(ncp);
        add_out(ncp);
        on_run(ncp, [this] {
            const NcpInstance inst = kmld_to_ncp(load_as<KMldInstance>(o_.in, "kmld"));
            json report = {{"command", "reduce kmld-to-ncp"},
                           {"instance", summary(inst)},
                           {"k", inst.k},
                           {"gamma", rat(inst.gamma)}};
            emit(report, to_json(Instance{inst}), o_.out);
            return Outcome{report};
        });

        auto* pipe = top->add_subcommand("pipeline", "Gap-MaxLin to Gap-k-MLD through a cover family");
        add_in(pipe);
        pipe->add_option("--k", o_.k, "Target weight")->required();
        pipe->add_option("--epsilon", o_.epsilon, "Balance slack num/den")->required();
        pipe->add_option("--family", o_.family_mode, "Partition family source")
            ->required()
            ->check(CLI::IsMember({"random", "deterministic", "explicit"}));
        pipe->add_option("--family-file", o_.family, "Partition family file for --family explicit");
        pipe->add_option("--seed", o_.seed, "Random seed (required for --family random)");
        pipe->add_option("--p2-trials", o_.p2_trials, "Sampled subsets when P2 is too large to enumerate");
        pipe->add_flag("--timings", o_.timings, "Add wall-clock stage timings to the report");
        add_budget(pipe);
        add_out(pipe);
        on_run(pipe, [this] {
            const MaxLinInstance inst = load_as<MaxLinInstance>(o_.in, "maxlin");
            PipelineOptions opts;
            opts.k = o_.k;
            opts.epsilon = parse_rational(o_.epsilon);
            opts.seed = o_.seed;
            opts.budget = budget();
            opts.p2_trials = o_.p2_trials;
            opts.timings = o_.timings;
            if (o_.family_mode == "random") {
                if (!o_.seed) throw Error(ErrorKind::BadParams, "--seed is required with --family random");
                opts.source = FamilySource::Random;
            } else if (o_.family_mode == "deterministic") {
                opts.source = FamilySource::Deterministic;
            } else {
                if (o_.family.empty()) throw Error(ErrorKind::BadParams, "--family-file is required with --family explicit");
                opts.source = FamilySource::Explicit;
                opts.family = partition_family_from_json(read_json_file(o_.family));
            }
            PipelineResult r = pipeline_maxlin_to_kmld(inst, opts);
            json report = r.report;
            report["command"] = "reduce pipeline";
            emit(report, to_json(Instance{r.instance}), o_.out);
            return Outcome{report};
        });
    }

    void build_verify() {
        auto* top = app_.add_subcommand("verify", "Check family properties");
        top->require_subcommand(1);

        auto* p1 = top->add_subcommand("p1", "Every bucket within its bound");
        p1->add_option("--family", o_.family, "Partition family file")->required();
        on_run(p1, [this] {
            const BalancedPartitionFamily f = partition_family_from_json(read_json_file(o_.family));
            const P1Result r = check_p1(f);
            json report = {{"command", "verify p1"}, {"ok", r.ok}, {"functions", f.functions.size()}};
            if (r.violation) {
                report["violation"] = {
                    {"function", r.violation->function}, {"bucket", r.violation->bucket}, {"size", r.violation->size}};
            }
            return Outcome{report, r.ok ? kExitOk : kExitCheckFailed};
        });

        auto* p2 = top->add_subcommand("p2", "Every alpha*m subset balanced by some function");
        p2->add_option("--family", o_.family, "Partition family file")->required();
        p2->add_option("--alpha", o_.alpha, "Subset fraction num/den")->required();
        p2->add_option("--epsilon", o_.epsilon, "Balance slack num/den")->required();
        p2->add_option("--sampled", o_.sampled, "Check this many random subsets instead of all");
        p2->add_option("--seed", o_.seed, "Random seed (required with --sampled)");
        add_budget(p2);
        on_run(p2, [this] {
            const BalancedPartitionFamily f = partition_family_from_json(read_json_file(o_.family));
            const Rational alpha = parse_rational(o_.alpha);
            const Rational eps = parse_rational(o_.epsilon);
            json report = {{"command", "verify p2"}};
            bool ok = false;
            if (o_.sampled) {
                if (!o_.seed) throw Error(ErrorKind::BadParams, "--seed is required with --sampled");
                const std::uint64_t failures = check_p2_sampled(f, alpha, eps, *o_.sampled, *o_.seed);
                ok = failures == 0;
                report.update({{"mode", "sampled"}, {"checked", *o_.sampled}, {"failures", failures}, {"seed", *o_.seed}});
            } else {
                const P2Result r = check_p2_exhaustive(f, alpha, eps, budget());
                ok = r.ok;
                report.update({{"mode", "exhaustive"}, {"checked", r.subsets_checked}});
                if (r.counterexample) report["counterexample"] = *r.counterexample;
            }
            report["ok"] = ok;
            return Outcome{report, ok ? kExitOk : kExitCheckFailed};
        });

        auto* c1 = top->add_subcommand("c1", "Every member within the size bound");
        c1->add_option("--cover", o_.cover, "Cover family file")->required();
        on_run(c1, [this] {
            const CoverFamily cover = cover_family_from_json(read_json_file(o_.cover));
            const C1Result r = check_c1(cover);
            json report = {{"command", "verify c1"}, {"ok", r.ok}, {"sets", cover.sets.size()}};
            if (r.violation) report["violation"] = *r.violation;
            return Outcome{report, r.ok ? kExitOk : kExitCheckFailed};
        });

        auto* c2 = top->add_subcommand("c2", "Every small subset is an exact union of k members");
        c2->add_option("--family", o_.family, "Partition family file")->required();
        c2->add_option("--cover", o_.cover, "Cover family file")->required();
        c2->add_option("--alpha", o_.alpha, "Subset fraction num/den")->required();
        c2->add_option("--epsilon", o_.epsilon, "Balance slack num/den")->required();
        add_budget(c2);
        on_run(c2, [this] {
            const BalancedPartitionFamily f = partition_family_from_json(read_json_file(o_.family));
            const CoverFamily cover = cover_family_from_json(read_json_file(o_.cover));
            const C2Result r =
                check_c2_exhaustive(cover, f, parse_rational(o_.alpha), parse_rational(o_.epsilon), budget());
            json report = {{"command", "verify c2"}, {"ok", r.ok}, {"checked", r.subsets_checked}};
            if (r.counterexample) report["counterexample"] = *r.counterexample;
            return Outcome{report, r.ok ? kExitOk : kExitCheckFailed};
        });
    }

    void build_solve() {
        auto* top = app_.add_subcommand("solve", "Exact brute-force optimum");
        top->require_subcommand(1);

        auto* maxlin = top->add_subcommand("maxlin", "Fewest violated equations");
        add_in(maxlin);
        add_budget(maxlin);
        on_run(maxlin, [this] {
            const MaxLinSolution s = solve_maxlin_exact(load_as<MaxLinInstance>(o_.in, "maxlin"), budget());
            return Outcome{{{"command", "solve maxlin"}, {"optimum", s.min_unsat}, {"witness", vec(s.x)}}};
        });

        auto* mld = top->add_subcommand("mld", "Minimum-weight solution of H x = u");
        add_in(mld);
        mld->add_option("--w-max", o_.w_max, "Largest weight searched (default: all)");
        add_budget(mld);
        on_run(mld, [this] {
            const MldInstance inst = load_as<MldInstance>(o_.in, "mld");
            const auto s = solve_mld_min_weight(inst.h, inst.u, o_.w_max.value_or(inst.h.cols()), budget());
            json report = {{"command", "solve mld"}, {"found", s.has_value()}};
            if (s) report.update({{"optimum", s->weight}, {"witness", vec(s->x)}});
            return Outcome{report};
        });

        auto* kmld = top->add_subcommand("kmld", "Minimum-weight solution of M_k y = u");
        add_in(kmld);
        kmld->add_option("--w-max", o_.w_max, "Largest weight searched (default: all)");
        add_budget(kmld);
        on_run(kmld, [this] {
            const KMldInstance inst = load_as<KMldInstance>(o_.in, "kmld");
            const auto s = solve_mld_min_weight(inst.mk, inst.u, o_.w_max.value_or(inst.mk.cols()), budget());
            json report = {{"command", "solve kmld"}, {"found", s.has_value()}};
            if (s) {
                report.update(
                    {{"optimum", s->weight}, {"witness", vec(s->x)}, {"expanded", vec(expand_solution(s->x, inst))}});
            }
            return Outcome{report};
        });

        auto* ncp = top->add_subcommand("ncp", "Nearest codeword distance");
        add_in(ncp);
        add_budget(ncp);
        on_run(ncp, [this] {
            const NcpInstance inst = load_as<NcpInstance>(o_.in, "ncp");
            const NcpSolution s = solve_ncp_exact(inst.a, inst.t, budget());
            return Outcome{{{"command", "solve ncp"}, {"optimum", s.min_dist}, {"witness", vec(s.z)}}};
        });
    }

    void build_classify() {
        auto* sub = app_.add_subcommand("classify", "YES / NO / NEITHER against the instance thresholds");
        add_in(sub);
        add_budget(sub);
        on_run(sub, [this] {
            const Instance inst = load_instance(o_.in);
            const GapVerdict v = solve_and_classify(inst, budget());
            json report = {{"command", "classify"},
                           {"kind", std::string(kind_name(inst))},
                           {"verdict", std::string(to_string(v.verdict))},
                           {"thresholds", thresholds_json(v.thresholds)},
                           {"optimum", v.optimum ? json(*v.optimum) : json(nullptr)}};
            return Outcome{report};
        });
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        Cli cli;
        return cli.run(args, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}

}  // namespace covkit::cli
