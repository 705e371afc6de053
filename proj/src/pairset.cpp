#include "eqmine/pairset.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "eqmine/errors.hpp"

namespace eqmine {

PairSet PairSet::canonical(std::vector<ColumnPair> pairs) {
    if (pairs.empty()) throw EmptyPairSet("pair set must be non-empty");
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 1; i < pairs.size(); ++i) {
        if (pairs[i].left == pairs[i - 1].left)
            throw DuplicateLeft("duplicate left column index " + std::to_string(pairs[i].left));
    }
    std::set<std::uint32_t> rights;
    for (const auto& p : pairs) {
        if (!rights.insert(p.right).second)
            throw DuplicateRight("duplicate right column index " + std::to_string(p.right));
    }
    return PairSet(std::move(pairs));
}

bool PairSet::contains(const ColumnPair& p) const {
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), p);
    return it != pairs_.end() && *it == p;
}

PairSet canonicalize(std::vector<ColumnPair> raw_pairs) {
    return PairSet::canonical(std::move(raw_pairs));
}

bool specializes(const PairSet& p1, const PairSet& p2) {
    if (p1.arity() >= p2.arity()) return false;
    // both sorted by left index: two-pointer subset check
    const auto& a = p1.pairs();
    const auto& b = p2.pairs();
    std::size_t j = 0;
    for (const auto& pa : a) {
        while (j < b.size() && b[j] < pa) ++j;
        if (j == b.size() || !(b[j] == pa)) return false;
        ++j;
    }
    return true;
}

std::vector<PairSet> subsets_of_arity(const PairSet& p, std::size_t k) {
    const std::size_t n = p.arity();
    if (k < 1 || k >= n)
        throw ArityOutOfRange("subset arity " + std::to_string(k) +
                              " out of range for arity " + std::to_string(n));
    std::vector<PairSet> out;
    std::vector<std::size_t> comb(k);
    for (std::size_t i = 0; i < k; ++i) comb[i] = i;
    while (true) {
        std::vector<ColumnPair> sel(k);
        for (std::size_t i = 0; i < k; ++i) sel[i] = p.pairs()[comb[i]];
        out.push_back(PairSet::canonical(std::move(sel)));
        // next combination in lexicographic order
        std::size_t i = k;
        while (i > 0 && comb[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++comb[i - 1];
        for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
    return out;
}

std::optional<PairSet> merge_pairsets(const PairSet& a, const PairSet& b) {
    std::vector<ColumnPair> merged = a.pairs();
    for (const auto& p : b.pairs()) {
        if (!a.contains(p)) merged.push_back(p);
    }
    std::sort(merged.begin(), merged.end());
    for (std::size_t i = 1; i < merged.size(); ++i) {
        if (merged[i].left == merged[i - 1].left) return std::nullopt;
    }
    std::set<std::uint32_t> rights;
    for (const auto& p : merged) {
        if (!rights.insert(p.right).second) return std::nullopt;
    }
    return PairSet::canonical(std::move(merged));
}

std::string to_string(const PairSet& p) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < p.arity(); ++i) {
        if (i) os << ',';
        os << '(' << p.pairs()[i].left << ':' << p.pairs()[i].right << ')';
    }
    os << '}';
    return os.str();
}

}  // namespace eqmine
