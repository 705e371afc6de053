#include "eqmine/relation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "eqmine/errors.hpp"
#include "eqmine/rng.hpp"

namespace eqmine {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// Full-token numeric parse after trimming ASCII whitespace; a leading '+' is
// tolerated. Returns nullopt for anything that is not a number.
std::optional<double> parse_number(std::string_view token) {
    std::size_t b = 0, e = token.size();
    while (b < e && (token[b] == ' ' || token[b] == '\t')) ++b;
    while (e > b && (token[e - 1] == ' ' || token[e - 1] == '\t')) --e;
    if (b == e) return std::nullopt;
    if (token[b] == '+') ++b;
    if (b == e) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data() + b, token.data() + e, value);
    if (ec != std::errc() || ptr != token.data() + e) return std::nullopt;
    return value;
}

// Split one record honoring RFC-4180 double quotes ("" escapes a quote).
std::vector<std::string> split_record(std::string_view line, char delim) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty() && cur.back() == '\r') cur.pop_back();
    if (!cur.empty()) lines.push_back(std::move(cur));
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::string shortest_repr(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

std::optional<std::size_t> Relation::column_index(std::string_view column_name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].name == column_name) return i;
    }
    return std::nullopt;
}

std::vector<std::string> Relation::column_names() const {
    std::vector<std::string> names;
    names.reserve(columns.size());
    for (const auto& c : columns) names.push_back(c.name);
    return names;
}

Relation parse_relation(std::string_view text, std::string name, const LoadOptions& options) {
    auto lines = split_lines(text);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;  // blank line, skip
        auto fields = split_record(lines[i], options.delimiter);
        if (!rows.empty() && fields.size() != rows.front().size())
            throw RaggedRows("row " + std::to_string(i + 1) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(rows.front().size()));
        rows.push_back(std::move(fields));
    }
    if (rows.empty()) throw NoNumericColumns("no data in " + name);

    bool has_header = false;
    if (options.header == HeaderMode::Present) {
        has_header = true;
    } else if (options.header == HeaderMode::Auto) {
        for (const auto& f : rows.front()) {
            bool empty = f.find_first_not_of(" \t") == std::string::npos;
            if (!empty && !parse_number(f)) {
                has_header = true;
                break;
            }
        }
    }

    Relation rel;
    rel.name = std::move(name);
    const std::size_t ncols = rows.front().size();
    rel.columns.resize(ncols);
    std::set<std::string> used;
    for (std::size_t j = 0; j < ncols; ++j) {
        std::string cname = has_header ? rows.front()[j] : "col" + std::to_string(j);
        if (cname.empty()) cname = "col" + std::to_string(j);
        std::string unique = cname;
        for (int k = 2; !used.insert(unique).second; ++k)
            unique = cname + "_" + std::to_string(k);
        rel.columns[j].name = std::move(unique);
    }

    const std::size_t first_data = has_header ? 1 : 0;
    rel.row_count = rows.size() - first_data;
    for (std::size_t j = 0; j < ncols; ++j) rel.columns[j].values.reserve(rel.row_count);
    for (std::size_t i = first_data; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < ncols; ++j) {
            auto v = parse_number(rows[i][j]);
            rel.columns[j].values.push_back(v && std::isfinite(*v) ? *v : kMissing);
        }
    }

    bool any_numeric = false;
    for (const auto& c : rel.columns) {
        for (double v : c.values) {
            if (!is_missing(v)) {
                any_numeric = true;
                break;
            }
        }
        if (any_numeric) break;
    }
    if (!any_numeric) throw NoNumericColumns("no numeric values in " + rel.name);
    return rel;
}

Relation load_relation(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path.string());
    return parse_relation(buf.str(), path.stem().string(), options);
}

std::string format_relation(const Relation& rel, char delimiter) {
    std::ostringstream out;
    for (std::size_t j = 0; j < rel.columns.size(); ++j) {
        if (j) out << delimiter;
        out << rel.columns[j].name;
    }
    out << '\n';
    for (std::size_t i = 0; i < rel.row_count; ++i) {
        for (std::size_t j = 0; j < rel.columns.size(); ++j) {
            if (j) out << delimiter;
            double v = rel.columns[j].values[i];
            if (!is_missing(v)) out << shortest_repr(v);
        }
        out << '\n';
    }
    return out.str();
}

void write_relation(const Relation& rel, const std::filesystem::path& path, char delimiter) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << format_relation(rel, delimiter);
    if (!out) throw IoError("write failure on " + path.string());
}

CandidateView candidate_view(const Relation& left, const Relation& right, const PairSet& p,
                             std::size_t max_rows, std::uint64_t seed) {
    const std::size_t arity = p.arity();
    for (const auto& pr : p.pairs()) {
        if (pr.left >= left.column_count() || pr.right >= right.column_count())
            throw ArityOutOfRange("pair references column outside relation");
    }

    auto survivors = [arity](const Relation& rel, const PairSet& ps, bool left_side) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < rel.row_count; ++i) {
            bool ok = true;
            for (std::size_t j = 0; j < arity; ++j) {
                std::uint32_t col = left_side ? ps.pairs()[j].left : ps.pairs()[j].right;
                double v = rel.columns[col].values[i];
                if (!std::isfinite(v)) {
                    ok = false;
                    break;
                }
            }
            if (ok) rows.push_back(i);
        }
        return rows;
    };

    auto lrows = survivors(left, p, true);
    auto rrows = survivors(right, p, false);
    if (lrows.empty() || rrows.empty())
        throw EmptyAfterFiltering("no complete rows for candidate " + to_string(p));

    // independent subsample streams per side
    if (max_rows > 0 && lrows.size() > max_rows) {
        Rng rng(hash_combine(seed, 0x4c454654));  // "LEFT"
        auto keep = rng.sample_indices(lrows.size(), max_rows);
        std::vector<std::size_t> sel(keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) sel[i] = lrows[keep[i]];
        lrows = std::move(sel);
    }
    if (max_rows > 0 && rrows.size() > max_rows) {
        Rng rng(hash_combine(seed, 0x52494748));  // "RIGH"
        auto keep = rng.sample_indices(rrows.size(), max_rows);
        std::vector<std::size_t> sel(keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) sel[i] = rrows[keep[i]];
        rrows = std::move(sel);
    }

    CandidateView view;
    view.left = Matrix(lrows.size(), arity);
    view.right = Matrix(rrows.size(), arity);
    for (std::size_t i = 0; i < lrows.size(); ++i)
        for (std::size_t j = 0; j < arity; ++j)
            view.left.at(i, j) = left.columns[p.pairs()[j].left].values[lrows[i]];
    for (std::size_t i = 0; i < rrows.size(); ++i)
        for (std::size_t j = 0; j < arity; ++j)
            view.right.at(i, j) = right.columns[p.pairs()[j].right].values[rrows[i]];
    return view;
}

}  // namespace eqmine
