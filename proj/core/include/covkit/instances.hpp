#pragma once

#include "covkit/gfmat.hpp"
#include "covkit/rational.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace covkit {

/// Gap-MaxLin: A (m x n), b (length m). YES if some x violates at most (1-c)m equations,
/// NO if every x violates more than (1-s)m. Requires 0 < s < c <= 1.
struct MaxLinInstance {
    FieldMatrix a;
    FieldVector b;
    Rational c;
    Rational s;

    void validate() const;
    friend bool operator==(const MaxLinInstance&, const MaxLinInstance&) = default;
};

/// Gap-MLD: YES if some x with weight <= ell solves H x = u, NO if none of weight <= gamma*ell does.
struct MldInstance {
    FieldMatrix h;
    FieldVector u;
    std::int64_t ell;
    Rational gamma;

    void validate() const;
    friend bool operator==(const MldInstance&, const MldInstance&) = default;
};

/// Column label of a grouped instance: a sparse vector of F_q^m with strictly increasing indices
/// and nonzero coefficients. The empty label is the zero vector.
struct ColumnLabel {
    std::vector<SparseEntry> entries;

    [[nodiscard]] std::size_t weight() const noexcept { return entries.size(); }
    friend bool operator==(const ColumnLabel&, const ColumnLabel&) = default;
    friend auto operator<=>(const ColumnLabel&, const ColumnLabel&) = default;
};

/// Gap-k-MLD produced by grouping: column j of `mk` is M * labels[j] for the source matrix M
/// (m_source columns).
struct KMldInstance {
    FieldMatrix mk;
    FieldVector u;
    std::int64_t k;
    Rational gamma;
    std::vector<ColumnLabel> labels;
    std::size_t m_source;

    /// Labels well formed and pairwise distinct, and the rows of `mk` lie in the row space of the
    /// label matrix, i.e. some source matrix reproduces every column.
    void validate() const;
    /// Stronger check against a known source matrix.
    void validate_against(const FieldMatrix& source) const;
    /// The m_source x m' matrix whose columns are the labels.
    [[nodiscard]] FieldMatrix label_matrix() const;
    /// A source matrix M with M * label_matrix() == mk (unique when the labels span F_q^m).
    [[nodiscard]] FieldMatrix recover_source() const;

    friend bool operator==(const KMldInstance&, const KMldInstance&) = default;
};

/// Gap-k-NCP: YES if some z has ||A z - t||_0 <= k, NO if every z has distance > gamma*k.
struct NcpInstance {
    FieldMatrix a;
    FieldVector t;
    std::int64_t k;
    Rational gamma;

    void validate() const;
    friend bool operator==(const NcpInstance&, const NcpInstance&) = default;
};

using Instance = std::variant<MaxLinInstance, MldInstance, KMldInstance, NcpInstance>;

[[nodiscard]] std::string_view kind_name(const Instance& inst) noexcept;

/// JSON encoding shared by files and CLI reports. Unknown or inapplicable fields are rejected.
[[nodiscard]] nlohmann::json to_json(const Instance& inst);
[[nodiscard]] Instance instance_from_json(const nlohmann::json& doc);

/// Canonical text form (two-space indent, sorted keys, trailing newline).
[[nodiscard]] std::string dump_canonical(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

void save_instance(const Instance& inst, const std::filesystem::path& path);
[[nodiscard]] Instance load_instance(const std::filesystem::path& path);

struct PlantedMaxLin {
    MaxLinInstance instance;
    FieldVector planted_x;
    std::vector<std::size_t> satisfied_rows;
};

/// Uniform rows and planted x*; exactly ceil(c*m) rows are satisfied by x*, every other row gets a
/// uniform wrong right-hand side. `s` defaults to c/2.
[[nodiscard]] PlantedMaxLin gen_planted_maxlin(std::size_t n, std::size_t m, std::uint32_t q, const Rational& c,
                                               std::uint64_t seed, std::optional<Rational> s = std::nullopt);

struct RandomMld {
    FieldMatrix h;
    FieldVector u;
    FieldVector x;
};

/// Uniform H (d x n) and u = H x for uniform x.
[[nodiscard]] RandomMld gen_random_mld(std::size_t n, std::size_t d, std::uint32_t q, std::uint64_t seed);

}  // namespace covkit
