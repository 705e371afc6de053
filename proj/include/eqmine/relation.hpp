#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eqmine/pairset.hpp"

namespace eqmine {

// Missing cells are stored as quiet NaN; every other stored value is finite.
inline bool is_missing(double v) { return !(v == v); }

struct Column {
    std::string name;
    std::vector<double> values;
};

struct Relation {
    std::string name;
    std::vector<Column> columns;
    std::size_t row_count = 0;

    std::size_t column_count() const { return columns.size(); }
    std::optional<std::size_t> column_index(std::string_view column_name) const;
    std::vector<std::string> column_names() const;
};

enum class HeaderMode { Auto, Present, Absent };

struct LoadOptions {
    char delimiter = ',';
    HeaderMode header = HeaderMode::Auto;
};

// Parse delimited text (RFC-4180-style quoting, '.' decimal point, scientific
// notation). Cells that are empty, non-numeric, or non-finite become missing.
// With HeaderMode::Auto the first row is a header iff at least one of its
// non-empty fields does not parse as a number.
Relation parse_relation(std::string_view text, std::string name, const LoadOptions& options = {});

Relation load_relation(const std::filesystem::path& path, const LoadOptions& options = {});

std::string format_relation(const Relation& rel, char delimiter = ',');
void write_relation(const Relation& rel, const std::filesystem::path& path, char delimiter = ',');

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    bool operator==(const Matrix&) const = default;
};

// Complete-case numeric blocks for one candidate; column j of each side is
// the column referenced by pair j of the canonical pair set.
struct CandidateView {
    Matrix left;
    Matrix right;
};

// Per-side complete-case filtering: a row is dropped only if one of the
// pair-referenced columns of that side is missing there. If more than
// max_rows rows survive, a seeded uniform subsample of exactly max_rows rows
// is taken (max_rows = 0 means no cap). Deterministic for fixed inputs.
CandidateView candidate_view(const Relation& left, const Relation& right, const PairSet& p,
                             std::size_t max_rows, std::uint64_t seed);

}  // namespace eqmine
