#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace eqmine {

enum class RelationSide { Left, Right };

struct ColumnRef {
    RelationSide relation_id = RelationSide::Left;
    std::uint32_t column_index = 0;
    std::string column_name;
};

// One attribute correspondence: column `left` of the left relation paired
// with column `right` of the right relation.
struct ColumnPair {
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    auto operator<=>(const ColumnPair&) const = default;
};

// A candidate equal-distribution hypothesis: a set of column pairs, stored
// canonically (sorted by left index). Two presentations of the same pair set
// always compare equal, so permuted forms collapse to one stored hypothesis.
class PairSet {
public:
    PairSet() = default;  // empty placeholder; canonical() builds real values

    // Canonical constructor. Throws EmptyPairSet / DuplicateLeft /
    // DuplicateRight when the invariants cannot be established.
    static PairSet canonical(std::vector<ColumnPair> pairs);

    const std::vector<ColumnPair>& pairs() const { return pairs_; }
    std::size_t arity() const { return pairs_.size(); }
    bool contains(const ColumnPair& p) const;

    auto operator<=>(const PairSet&) const = default;

private:
    explicit PairSet(std::vector<ColumnPair> sorted) : pairs_(std::move(sorted)) {}
    std::vector<ColumnPair> pairs_;
};

struct SpecializationEdge {
    PairSet child;
    PairSet parent;
};

PairSet canonicalize(std::vector<ColumnPair> raw_pairs);

// Strict partial order: true iff the pair set of p1 is a strict subset of
// the pair set of p2.
bool specializes(const PairSet& p1, const PairSet& p2);

// All C(arity, k) sub-pair-sets of p with the given arity, lexicographic.
// Requires 1 <= k < arity(p).
std::vector<PairSet> subsets_of_arity(const PairSet& p, std::size_t k);

// Union of two pair sets if it forms a valid PairSet (distinct lefts and
// rights); nullopt otherwise. The levelwise join builds on this.
std::optional<PairSet> merge_pairsets(const PairSet& a, const PairSet& b);

std::string to_string(const PairSet& p);

}  // namespace eqmine
