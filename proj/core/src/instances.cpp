#include "covkit/instances.hpp"

#include "covkit/combinatorics.hpp"
#include "covkit/error.hpp"
#include "json_detail.hpp"

#include <fstream>
#include <algorithm>
#include <sstream>

namespace covkit {

namespace {

using detail::json;

void require(bool cond, const std::string& what) {
    if (!cond) throw Error(ErrorKind::BadParams, what);
}

void check_label(const ColumnLabel& label, std::size_t m_source, std::uint32_t q, std::size_t j) {
    const std::string where = "label " + std::to_string(j);
    for (std::size_t i = 0; i < label.entries.size(); ++i) {
        const SparseEntry& e = label.entries[i];
        require(e.index < m_source, where + ": index " + std::to_string(e.index) + " out of range");
        require(e.coef != 0 && e.coef < q, where + ": coefficient must be a nonzero residue");
        require(i == 0 || label.entries[i - 1].index < e.index, where + ": indices must be strictly increasing");
    }
}

}  // namespace

void MaxLinInstance::validate() const {
    require(a.rows() == b.size(), "MaxLin: b length must equal the number of equations");
    require(a.field() == b.field(), "MaxLin: A and b use different moduli");
    require(Rational(0) < s && s < c && c <= Rational(1), "MaxLin: thresholds must satisfy 0 < s < c <= 1");
}

void MldInstance::validate() const {
    require(h.rows() == u.size(), "MLD: u length must equal rows(H)");
    require(h.field() == u.field(), "MLD: H and u use different moduli");
    require(ell >= 0 && static_cast<std::size_t>(ell) <= h.cols(), "MLD: ell must lie in [0, cols(H)]");
    require(gamma > Rational(1), "MLD: gamma must exceed 1");
}

void KMldInstance::validate() const {
    require(mk.rows() == u.size(), "k-MLD: u length must equal rows(M_k)");
    require(mk.field() == u.field(), "k-MLD: M_k and u use different moduli");
    require(mk.cols() == labels.size(), "k-MLD: one label per column required");
    require(k >= 1, "k-MLD: k must be positive");
    require(gamma > Rational(0), "k-MLD: gamma must be positive");
    for (std::size_t j = 0; j < labels.size(); ++j) check_label(labels[j], m_source, mk.field().q(), j);
    std::vector<ColumnLabel> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "k-MLD: labels must be distinct");
    // M * L = M_k is solvable iff each row of M_k is in the row space of L
    if (!solve_right(label_matrix().transpose(), mk.transpose())) {
        throw Error(ErrorKind::BadParams, "k-MLD: columns are not reproduced by any source matrix via the labels");
    }
}

void KMldInstance::validate_against(const FieldMatrix& source) const {
    require(source.cols() == m_source && source.rows() == mk.rows(), "k-MLD: source matrix has the wrong shape");
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (mat_sparse_mul(source, labels[j].entries) != mk.column(j)) {
            throw Error(ErrorKind::BadParams, "k-MLD: column " + std::to_string(j) + " differs from M * label");
        }
    }
}

FieldMatrix KMldInstance::label_matrix() const {
    FieldMatrix l(mk.field(), m_source, labels.size());
    for (std::size_t j = 0; j < labels.size(); ++j) {
        for (const SparseEntry& e : labels[j].entries) l.set(e.index, j, e.coef);
    }
    return l;
}

FieldMatrix KMldInstance::recover_source() const {
    auto mt = solve_right(label_matrix().transpose(), mk.transpose());
    if (!mt) throw Error(ErrorKind::BadParams, "k-MLD: no source matrix reproduces the columns");
    return mt->transpose();
}

void NcpInstance::validate() const {
    require(a.rows() == t.size(), "NCP: t length must equal rows(A)");
    require(a.field() == t.field(), "NCP: A and t use different moduli");
    require(k >= 1, "NCP: k must be positive");
    require(gamma > Rational(0), "NCP: gamma must be positive");
}

std::string_view kind_name(const Instance& inst) noexcept {
    switch (inst.index()) {
        case 0: return "maxlin";
        case 1: return "mld";
        case 2: return "kmld";
        default: return "ncp";
    }
}

namespace {

json matrix_fields(json doc, const FieldMatrix& m, const FieldVector& target) {
    doc["q"] = m.field().q();
    doc["rows"] = m.rows();
    doc["cols"] = m.cols();
    doc["entries"] = std::vector<Residue>(m.entries().begin(), m.entries().end());
    doc["target"] = std::vector<Residue>(target.entries().begin(), target.entries().end());
    return doc;
}

struct ParsedMatrix {
    FieldMatrix m;
    FieldVector target;
};

ParsedMatrix parse_matrix(const json& doc) {
    const std::uint64_t q_raw = detail::as_uint(doc.at("q"), "/q");
    if (q_raw > PrimeField::kMaxModulus || !is_prime(static_cast<std::uint32_t>(q_raw))) {
        throw SchemaError("/q", "modulus " + std::to_string(q_raw) + " is not a prime in [2, 65521]");
    }
    const PrimeField field(static_cast<std::uint32_t>(q_raw));
    const std::uint64_t rows = detail::as_uint(doc.at("rows"), "/rows");
    const std::uint64_t cols = detail::as_uint(doc.at("cols"), "/cols");
    auto read_residues = [&](const json& arr, const std::string& path) {
        const auto raw = detail::as_int_array(arr, path);
        std::vector<Residue> out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] < 0 || raw[i] >= static_cast<std::int64_t>(field.q())) {
                throw SchemaError(path + "/" + std::to_string(i), "entry not in [0, q)");
            }
            out.push_back(static_cast<Residue>(raw[i]));
        }
        return out;
    };
    auto entries = read_residues(doc.at("entries"), "/entries");
    if (entries.size() != rows * cols) {
        throw SchemaError("/entries", "expected rows*cols = " + std::to_string(rows * cols) + " entries, got " +
                                          std::to_string(entries.size()));
    }
    auto target = read_residues(doc.at("target"), "/target");
    return {FieldMatrix(field, rows, cols, std::move(entries)), FieldVector(field, std::move(target))};
}

std::vector<ColumnLabel> parse_labels(const json& arr, std::uint32_t q) {
    detail::as_array(arr, "/labels");
    std::vector<ColumnLabel> labels;
    labels.reserve(arr.size());
    for (std::size_t j = 0; j < arr.size(); ++j) {
        const std::string path = "/labels/" + std::to_string(j);
        detail::as_array(arr[j], path);
        ColumnLabel label;
        for (std::size_t i = 0; i < arr[j].size(); ++i) {
            const std::string ep = path + "/" + std::to_string(i);
            const json& pair = arr[j][i];
            if (!pair.is_array() || pair.size() != 2) throw SchemaError(ep, "expected [index, coefficient]");
            const std::uint64_t idx = detail::as_uint(pair[0], ep + "/0");
            const std::uint64_t coef = detail::as_uint(pair[1], ep + "/1");
            if (coef == 0 || coef >= q) throw SchemaError(ep + "/1", "coefficient must be a nonzero residue");
            label.entries.push_back({idx, static_cast<Residue>(coef)});
        }
        labels.push_back(std::move(label));
    }
    return labels;
}

template <typename T>
T validated(T inst) {
    try {
        inst.validate();
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        throw SchemaError("/", e.what());
    }
    return inst;
}

}  // namespace

nlohmann::json to_json(const Instance& inst) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            json doc = json::object();
            if constexpr (std::is_same_v<T, MaxLinInstance>) {
                doc["kind"] = "maxlin";
                doc = matrix_fields(std::move(doc), v.a, v.b);
                doc["thresholds"] = {{"c", detail::rational_json(v.c)}, {"s", detail::rational_json(v.s)}};
            } else if constexpr (std::is_same_v<T, MldInstance>) {
                doc["kind"] = "mld";
                doc = matrix_fields(std::move(doc), v.h, v.u);
                doc["thresholds"] = {{"gamma", detail::rational_json(v.gamma)}};
                doc["ell"] = v.ell;
            } else if constexpr (std::is_same_v<T, KMldInstance>) {
                doc["kind"] = "kmld";
                doc = matrix_fields(std::move(doc), v.mk, v.u);
                doc["thresholds"] = {{"gamma", detail::rational_json(v.gamma)}};
                doc["k"] = v.k;
                json labels = json::array();
                for (const ColumnLabel& l : v.labels) {
                    json entries = json::array();
                    for (const SparseEntry& e : l.entries) entries.push_back(json::array({e.index, e.coef}));
                    labels.push_back(std::move(entries));
                }
                doc["labels"] = std::move(labels);
                doc["m_source"] = v.m_source;
            } else {
                doc["kind"] = "ncp";
                doc = matrix_fields(std::move(doc), v.a, v.t);
                doc["thresholds"] = {{"gamma", detail::rational_json(v.gamma)}};
                doc["k"] = v.k;
            }
            return doc;
        },
        inst);
}

Instance instance_from_json(const nlohmann::json& doc) {
    detail::expect_object(doc, "");
    if (!doc.contains("kind")) throw SchemaError("/kind", "missing required field");
    if (!doc["kind"].is_string()) throw SchemaError("/kind", "expected a string");
    const std::string kind = doc["kind"].get<std::string>();

    if (kind == "maxlin") {
        detail::check_keys(doc, "", {"kind", "q", "rows", "cols", "entries", "target", "thresholds"},
                           {"q", "rows", "cols", "entries", "target", "thresholds"});
        detail::check_keys(doc["thresholds"], "/thresholds", {"c", "s"}, {"c", "s"});
        auto pm = parse_matrix(doc);
        return validated(MaxLinInstance{std::move(pm.m), std::move(pm.target),
                                        detail::as_rational(doc["thresholds"]["c"], "/thresholds/c"),
                                        detail::as_rational(doc["thresholds"]["s"], "/thresholds/s")});
    }
    if (kind == "mld") {
        detail::check_keys(doc, "", {"kind", "q", "rows", "cols", "entries", "target", "thresholds", "ell"},
                           {"q", "rows", "cols", "entries", "target", "thresholds", "ell"});
        detail::check_keys(doc["thresholds"], "/thresholds", {"gamma"}, {"gamma"});
        auto pm = parse_matrix(doc);
        return validated(MldInstance{std::move(pm.m), std::move(pm.target), detail::as_int(doc["ell"], "/ell"),
                                     detail::as_rational(doc["thresholds"]["gamma"], "/thresholds/gamma")});
    }
    if (kind == "kmld") {
        detail::check_keys(doc, "",
                           {"kind", "q", "rows", "cols", "entries", "target", "thresholds", "k", "labels", "m_source"},
                           {"q", "rows", "cols", "entries", "target", "thresholds", "k", "labels", "m_source"});
        detail::check_keys(doc["thresholds"], "/thresholds", {"gamma"}, {"gamma"});
        auto pm = parse_matrix(doc);
        auto labels = parse_labels(doc["labels"], pm.m.field().q());
        if (labels.size() != pm.m.cols()) throw SchemaError("/labels", "expected one label per column");
        KMldInstance inst{std::move(pm.m),
                          std::move(pm.target),
                          detail::as_int(doc["k"], "/k"),
                          detail::as_rational(doc["thresholds"]["gamma"], "/thresholds/gamma"),
                          std::move(labels),
                          detail::as_uint(doc["m_source"], "/m_source")};
        return validated(std::move(inst));
    }
    if (kind == "ncp") {
        detail::check_keys(doc, "", {"kind", "q", "rows", "cols", "entries", "target", "thresholds", "k"},
                           {"q", "rows", "cols", "entries", "target", "thresholds", "k"});
        detail::check_keys(doc["thresholds"], "/thresholds", {"gamma"}, {"gamma"});
        auto pm = parse_matrix(doc);
        return validated(NcpInstance{std::move(pm.m), std::move(pm.target), detail::as_int(doc["k"], "/k"),
                                     detail::as_rational(doc["thresholds"]["gamma"], "/thresholds/gamma")});
    }
    throw SchemaError("/kind", "unknown instance kind '" + kind + "'");
}

std::string dump_canonical(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw SchemaError("/", std::string("malformed JSON: ") + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
    out << dump_canonical(doc);
    if (!out) throw Error(ErrorKind::IoError, "write to '" + path.string() + "' failed");
}

void save_instance(const Instance& inst, const std::filesystem::path& path) { write_json_file(path, to_json(inst)); }

Instance load_instance(const std::filesystem::path& path) { return instance_from_json(read_json_file(path)); }

PlantedMaxLin gen_planted_maxlin(std::size_t n, std::size_t m, std::uint32_t q, const Rational& c, std::uint64_t seed,
                                 std::optional<Rational> s) {
    require(m >= 1, "gen_planted_maxlin: need at least one equation");
    require(Rational(0) < c && c <= Rational(1), "gen_planted_maxlin: c must lie in (0, 1]");
    const PrimeField field(q);
    const Rational s_value = s.value_or(c / 2);
    require(Rational(0) < s_value && s_value < c, "gen_planted_maxlin: s must lie in (0, c)");

    Rng rng(seed);
    std::vector<Residue> a(m * n);
    for (auto& v : a) v = static_cast<Residue>(rng.below(q));
    std::vector<Residue> x(n);
    for (auto& v : x) v = static_cast<Residue>(rng.below(q));
    const FieldMatrix am(field, m, n, std::move(a));
    const FieldVector xv(field, std::move(x));

    const auto n_sat = static_cast<std::size_t>(ceil(c * Rational(static_cast<std::int64_t>(m))));
    const std::vector<std::size_t> satisfied = rng.subset(m, n_sat);
    std::vector<bool> is_sat(m, false);
    for (const std::size_t i : satisfied) is_sat[i] = true;

    const FieldVector ax = mat_vec_mul(am, xv);
    std::vector<Residue> b(m);
    for (std::size_t i = 0; i < m; ++i) {
        b[i] = is_sat[i] ? ax[i] : field.add(ax[i], static_cast<Residue>(1 + rng.below(q - 1)));
    }
    MaxLinInstance inst{am, FieldVector(field, std::move(b)), c, s_value};
    inst.validate();
    return {std::move(inst), xv, satisfied};
}

RandomMld gen_random_mld(std::size_t n, std::size_t d, std::uint32_t q, std::uint64_t seed) {
    require(d <= n, "gen_random_mld: need d <= n");
    const PrimeField field(q);
    Rng rng(seed);
    std::vector<Residue> h(d * n);
    for (auto& v : h) v = static_cast<Residue>(rng.below(q));
    std::vector<Residue> x(n);
    for (auto& v : x) v = static_cast<Residue>(rng.below(q));
    FieldMatrix hm(field, d, n, std::move(h));
    FieldVector xv(field, std::move(x));
    FieldVector u = mat_vec_mul(hm, xv);
    return {std::move(hm), std::move(u), std::move(xv)};
}

}  // namespace covkit
