#include "eqmine/search.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <set>
#include <thread>

#include "eqmine/errors.hpp"
#include "eqmine/rng.hpp"

namespace eqmine {

std::string to_string(VerdictState s) {
    switch (s) {
        case VerdictState::Untested: return "untested";
        case VerdictState::AcceptedDirect: return "accepted_direct";
        case VerdictState::RejectedDirect: return "rejected_direct";
        case VerdictState::AcceptedInferred: return "accepted_inferred";
        case VerdictState::PrunedBudget: return "pruned_budget";
        case VerdictState::Skipped: return "skipped";
    }
    return "unknown";
}

void SearchConfig::validate() const {
    if (max_arity < 1) throw ConfigError("max_arity must be >= 1");
    if (!(budget_beta >= 0.0 && budget_beta < 1.0))
        throw ConfigError("budget_beta must be in [0,1)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");
}

unsigned worker_count() {
    if (const char* env = std::getenv("EQMINE_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

std::vector<PairSet> level_one_candidates(const Relation& left, const Relation& right,
                                          const SearchConfig& cfg) {
    cfg.validate();
    const bool same_relation = &left == &right;
    std::vector<PairSet> out;
    for (std::uint32_t i = 0; i < left.column_count(); ++i) {
        for (std::uint32_t j = 0; j < right.column_count(); ++j) {
            if (same_relation && !cfg.include_identity_pairs && i == j) continue;
            out.push_back(PairSet::canonical({{i, j}}));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

GenerationResult generate_next_level(const VerdictStore& store, std::size_t k,
                                     const SearchConfig& cfg) {
    cfg.validate();
    std::vector<const PairSet*> level;
    for (const auto& [ps, v] : store)
        if (ps.arity() == k) level.push_back(&ps);

    std::set<PairSet> joined;
    for (std::size_t i = 0; i < level.size(); ++i) {
        for (std::size_t j = i + 1; j < level.size(); ++j) {
            auto merged = merge_pairsets(*level[i], *level[j]);
            if (merged && merged->arity() == k + 1) joined.insert(std::move(*merged));
        }
    }

    GenerationResult result;
    for (const auto& cand : joined) {
        std::size_t r = 0;
        for (const auto& sub : subsets_of_arity(cand, k)) {
            auto it = store.find(sub);
            if (it != store.end() && (it->second.state == VerdictState::RejectedDirect ||
                                      it->second.state == VerdictState::PrunedBudget))
                ++r;
        }
        bool keep;
        if (cfg.hard_apriori) {
            keep = r == 0;
        } else if (cfg.budget_beta == 0.0) {
            keep = true;  // pruning disabled
        } else {
            keep = binomial_tail(k + 1, cfg.alpha, r) >= cfg.budget_beta;
        }
        (keep ? result.kept : result.pruned).push_back(cand);
    }
    return result;
}

void adjudicate_level(const std::vector<PairSet>& candidates, const Relation& left,
                      const Relation& right, const TestConfig& tcfg, const SearchConfig& scfg,
                      VerdictStore& store) {
    tcfg.validate();
    std::vector<Verdict> verdicts(candidates.size());
    std::vector<std::exception_ptr> errors(candidates.size());

    auto run_one = [&](std::size_t i) {
        const PairSet& cand = candidates[i];
        Verdict v;
        try {
            auto view = candidate_view(left, right, cand, scfg.max_rows,
                                       candidate_seed(tcfg.master_seed, cand, kSeedSaltView));
            TestOutcome outcome = test_candidate(view, cand, tcfg);
            v.state = outcome.rejected ? VerdictState::RejectedDirect
                                       : VerdictState::AcceptedDirect;
            v.outcome = std::move(outcome);
        } catch (const EmptyAfterFiltering& e) {
            v.state = VerdictState::Skipped;
            v.skip_reason = e.what();
        } catch (...) {
            errors[i] = std::current_exception();
        }
        verdicts[i] = std::move(v);
    };

    const unsigned workers = std::min<std::size_t>(worker_count(), candidates.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < candidates.size(); ++i) run_one(i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < candidates.size(); i += workers) run_one(i);
            });
        }
        for (auto& t : pool) t.join();
    }
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);

    for (std::size_t i = 0; i < candidates.size(); ++i)
        store[candidates[i]] = std::move(verdicts[i]);
}

std::vector<AnomalyRecord> infer_acceptances(VerdictStore& store) {
    // accepted-direct candidates ordered by (arity, lexicographic) so the
    // first generalization found is the minimal one
    std::vector<const PairSet*> accepted;
    for (const auto& [ps, v] : store)
        if (v.state == VerdictState::AcceptedDirect) accepted.push_back(&ps);
    std::sort(accepted.begin(), accepted.end(), [](const PairSet* a, const PairSet* b) {
        if (a->arity() != b->arity()) return a->arity() < b->arity();
        return *a < *b;
    });

    std::vector<AnomalyRecord> anomalies;
    for (auto& [ps, v] : store) {
        if (v.state == VerdictState::RejectedDirect) {
            for (const PairSet* g : accepted)
                if (specializes(ps, *g)) anomalies.push_back({ps, *v.outcome, *g});
            continue;
        }
        if (v.state != VerdictState::Untested && v.state != VerdictState::PrunedBudget) continue;
        for (const PairSet* g : accepted) {
            if (specializes(ps, *g)) {
                v.state = VerdictState::AcceptedInferred;
                v.inferred_from = *g;
                break;
            }
        }
    }
    return anomalies;
}

std::vector<PairSet> extract_maximal(const VerdictStore& store) {
    std::vector<const PairSet*> accepted;
    for (const auto& [ps, v] : store)
        if (v.state == VerdictState::AcceptedDirect) accepted.push_back(&ps);

    std::vector<PairSet> maximal;
    for (const PairSet* c : accepted) {
        bool covered = false;
        for (const PairSet* g : accepted) {
            if (specializes(*c, *g)) {
                covered = true;
                break;
            }
        }
        if (!covered) maximal.push_back(*c);
    }
    std::sort(maximal.begin(), maximal.end(), [](const PairSet& a, const PairSet& b) {
        if (a.arity() != b.arity()) return a.arity() > b.arity();
        return a < b;
    });
    return maximal;
}

namespace {

// C(n, k) saturating at a large sentinel; used only to skip hopeless audits
std::size_t choose_capped(std::size_t n, std::size_t k, std::size_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        if (r > cap) return cap + 1;
        r = r * (n - k + i) / i;
    }
    return r;
}

}  // namespace

std::vector<AuditRow> audit_expected_rejections(const VerdictStore& store, double alpha,
                                                double flag_beta) {
    std::vector<AuditRow> rows;
    for (const auto& [ps, v] : store) {
        if (v.state != VerdictState::AcceptedDirect || ps.arity() < 3) continue;
        for (std::size_t k = 1; k < ps.arity(); ++k) {
            std::size_t n_proj = choose_capped(ps.arity(), k, store.size());
            if (n_proj > store.size()) continue;  // cannot all be tested
            std::size_t observed = 0;
            bool all_tested = true;
            for (const auto& sub : subsets_of_arity(ps, k)) {
                auto it = store.find(sub);
                if (it == store.end() || !it->second.outcome.has_value() ||
                    (it->second.state != VerdictState::AcceptedDirect &&
                     it->second.state != VerdictState::RejectedDirect)) {
                    all_tested = false;
                    break;
                }
                if (it->second.state == VerdictState::RejectedDirect) ++observed;
            }
            if (!all_tested) continue;
            AuditRow row;
            row.candidate = ps;
            row.arity_k = k;
            row.n_projections = n_proj;
            row.observed = observed;
            row.expected = static_cast<double>(n_proj) * alpha;
            row.tail = binomial_tail(n_proj, alpha, observed);
            row.consistent = row.tail >= flag_beta;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

DiscoveryReport discover(const Relation& left, const Relation& right, const TestConfig& tcfg,
                         const SearchConfig& scfg) {
    tcfg.validate();
    scfg.validate();
    const auto start = std::chrono::steady_clock::now();

    DiscoveryReport report;
    report.test_config = tcfg;
    report.search_config = scfg;
    report.left_name = left.name;
    report.right_name = right.name;
    report.left_columns = left.column_names();
    report.right_columns = right.column_names();

    VerdictStore store;
    std::vector<PairSet> current = level_one_candidates(left, right, scfg);
    std::size_t pruned_here = 0;
    for (std::size_t arity = 1; arity <= scfg.max_arity && !current.empty(); ++arity) {
        adjudicate_level(current, left, right, tcfg, scfg, store);

        LevelTally tally;
        tally.arity = arity;
        tally.generated = current.size() + pruned_here;
        tally.pruned = pruned_here;
        for (const auto& cand : current) {
            const Verdict& v = store.at(cand);
            switch (v.state) {
                case VerdictState::AcceptedDirect:
                    ++tally.tested;
                    ++tally.accepted;
                    break;
                case VerdictState::RejectedDirect:
                    ++tally.tested;
                    ++tally.rejected;
                    break;
                case VerdictState::Skipped:
                    ++tally.skipped;
                    break;
                default:
                    break;
            }
        }
        report.levels.push_back(tally);

        if (arity == scfg.max_arity) break;
        auto gen = generate_next_level(store, arity, scfg);
        for (const auto& cand : gen.pruned) {
            Verdict v;
            v.state = VerdictState::PrunedBudget;
            store[cand] = std::move(v);
        }
        pruned_here = gen.pruned.size();
        current = std::move(gen.kept);
        if (current.empty() && pruned_here > 0) {
            // an all-pruned level still appears in the tallies
            LevelTally t;
            t.arity = arity + 1;
            t.generated = pruned_here;
            t.pruned = pruned_here;
            report.levels.push_back(t);
            break;
        }
    }

    report.anomalies = infer_acceptances(store);
    for (const auto& ps : extract_maximal(store))
        report.maximal.push_back({ps, *store.at(ps).outcome});
    report.audit = audit_expected_rejections(store, scfg.alpha, scfg.budget_beta);
    report.verdicts = std::move(store);
    report.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    return report;
}

}  // namespace eqmine
