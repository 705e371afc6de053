#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eqmine/pairset.hpp"
#include "eqmine/relation.hpp"
#include "eqmine/stats.hpp"

namespace eqmine {

enum class VerdictState {
    Untested,
    AcceptedDirect,
    RejectedDirect,
    AcceptedInferred,
    PrunedBudget,
    Skipped,
};

std::string to_string(VerdictState s);

struct Verdict {
    VerdictState state = VerdictState::Untested;
    std::optional<TestOutcome> outcome;     // present iff directly tested
    std::optional<PairSet> inferred_from;   // present iff AcceptedInferred
    std::string skip_reason;                // present iff Skipped
};

struct SearchConfig {
    std::size_t max_arity = 4;
    double budget_beta = 0.01;  // 0 disables budget pruning entirely
    bool hard_apriori = false;
    double alpha = 0.05;  // mirrors TestConfig::alpha; used by the budget
    bool include_identity_pairs = false;
    std::size_t max_rows = 2000;

    void validate() const;
};

using VerdictStore = std::map<PairSet, Verdict>;

// All unary candidates over the two relations in deterministic (left, right)
// order. When left and right are the same relation object, identity pairs are
// excluded unless include_identity_pairs is set.
std::vector<PairSet> level_one_candidates(const Relation& left, const Relation& right,
                                          const SearchConfig& cfg);

struct GenerationResult {
    std::vector<PairSet> kept;
    std::vector<PairSet> pruned;  // failed the rejection budget
};

// Levelwise join of the arity-k candidates in the store. A joined candidate
// of arity k+1 survives iff its rejection budget passes: with r = number of
// its arity-k subsets that are RejectedDirect or PrunedBudget, keep iff
// binomial_tail(k+1, alpha, r) >= budget_beta. hard_apriori keeps only r = 0.
GenerationResult generate_next_level(const VerdictStore& store, std::size_t k,
                                     const SearchConfig& cfg);

// Test every candidate, recording AcceptedDirect or RejectedDirect; a
// candidate whose view is empty after filtering is recorded as Skipped.
// Candidates may be adjudicated concurrently (EQMINE_THREADS caps workers);
// results are independent of scheduling because seeds are per-candidate.
void adjudicate_level(const std::vector<PairSet>& candidates, const Relation& left,
                      const Relation& right, const TestConfig& tcfg, const SearchConfig& scfg,
                      VerdictStore& store);

struct AnomalyRecord {
    PairSet candidate;
    TestOutcome outcome;
    PairSet accepted_generalization;
};

// Downward acceptance inference: every Untested or PrunedBudget candidate
// that strictly specializes an AcceptedDirect one becomes AcceptedInferred
// (inferred_from = minimal-arity such generalization, lexicographic
// tie-break). RejectedDirect verdicts are never overwritten; each (rejected
// specialization, accepted generalization) pair is returned as an anomaly.
std::vector<AnomalyRecord> infer_acceptances(VerdictStore& store);

// AcceptedDirect candidates with no AcceptedDirect strict generalization,
// sorted by descending arity then lexicographic.
std::vector<PairSet> extract_maximal(const VerdictStore& store);

struct AuditRow {
    PairSet candidate;
    std::size_t arity_k = 0;
    std::size_t n_projections = 0;
    std::size_t observed = 0;
    double expected = 0.0;
    double tail = 0.0;
    bool consistent = true;
};

// For each AcceptedDirect candidate of arity >= 3 and each lower arity k
// whose C(arity, k) projections were all directly tested: observed rejection
// count vs the N*alpha expectation, with the exact binomial tail.
std::vector<AuditRow> audit_expected_rejections(const VerdictStore& store, double alpha,
                                                double flag_beta);

struct LevelTally {
    std::size_t arity = 0;
    std::size_t generated = 0;
    std::size_t tested = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t pruned = 0;
    std::size_t skipped = 0;
    bool operator==(const LevelTally&) const = default;
};

struct MaximalEntry {
    PairSet pairs;
    TestOutcome outcome;
};

struct DiscoveryReport {
    TestConfig test_config;
    SearchConfig search_config;
    std::string left_name;
    std::string right_name;
    std::vector<std::string> left_columns;
    std::vector<std::string> right_columns;
    std::vector<LevelTally> levels;
    std::vector<MaximalEntry> maximal;
    std::vector<AnomalyRecord> anomalies;
    std::vector<AuditRow> audit;
    std::int64_t runtime_ms = 0;
    VerdictStore verdicts;  // full audit trail; not part of the JSON layout
};

// Full levelwise discovery: unary screening, budgeted generation, per-level
// adjudication, then acceptance inference, maximality extraction and the
// expected-rejection audit.
DiscoveryReport discover(const Relation& left, const Relation& right, const TestConfig& tcfg,
                         const SearchConfig& scfg);

// Worker cap: EQMINE_THREADS when set, otherwise hardware concurrency.
unsigned worker_count();

}  // namespace eqmine
