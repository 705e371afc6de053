#include "eqmine/validate.hpp"

#include <chrono>

#include "eqmine/errors.hpp"
#include "eqmine/rng.hpp"
#include "eqmine/synth.hpp"

namespace eqmine {

void ValidateConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (rows < 2) throw ConfigError("rows must be >= 2");
    if (dims < 4) throw ConfigError("dims must be >= 4 to project to arity 3");
    if (permutations < 19) throw ConfigError("permutations must be >= 19");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");
}

ValidateSummary run_validation(const ValidateConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    ValidateSummary summary;
    summary.config = cfg;

    std::vector<ColumnPair> identity_pairs;
    for (std::uint32_t d = 0; d < cfg.dims; ++d) identity_pairs.push_back({d, d});
    const PairSet full = PairSet::canonical(identity_pairs);
    const auto projections = subsets_of_arity(full, 3);
    summary.n_projections = projections.size();

    TestConfig tcfg;
    tcfg.alpha = cfg.alpha;
    tcfg.permutations = cfg.permutations;

    SearchConfig scfg;
    scfg.alpha = cfg.alpha;
    scfg.max_rows = 0;  // fixtures are already at the requested size

    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const std::uint64_t trial_seed = hash_combine(cfg.seed, 0x5641u + t);
        ScenarioSpec spec{cfg.rows, trial_seed, Family::GaussIid, 0.0, cfg.dims};
        auto [left, right] = gen_null_pair(spec);
        tcfg.master_seed = trial_seed;

        VerdictStore store;
        std::vector<PairSet> candidates;
        candidates.push_back(full);
        candidates.insert(candidates.end(), projections.begin(), projections.end());
        adjudicate_level(candidates, left, right, tcfg, scfg, store);

        ValidateTrial trial;
        trial.seed = trial_seed;
        for (const auto& proj : projections)
            if (store.at(proj).state == VerdictState::RejectedDirect) ++trial.observed_rejections;
        trial.full_pairing_accepted = store.at(full).state == VerdictState::AcceptedDirect;

        auto anomalies = infer_acceptances(store);
        trial.anomalies = anomalies.size();
        for (const auto& proj : projections) {
            const auto& v = store.at(proj);
            if (v.outcome && v.outcome->rejected && v.state != VerdictState::RejectedDirect)
                ++trial.overwrite_violations;
        }
        auto audit = audit_expected_rejections(store, cfg.alpha, 0.01);
        trial.audit_tail = audit.empty() ? binomial_tail(summary.n_projections, cfg.alpha,
                                                         trial.observed_rejections)
                                         : audit.front().tail;
        summary.trials.push_back(trial);
    }

    double total = 0.0;
    for (const auto& t : summary.trials) total += static_cast<double>(t.observed_rejections);
    summary.mean_observed = total / static_cast<double>(summary.trials.size());
    summary.expected = static_cast<double>(summary.n_projections) * cfg.alpha;
    summary.band_lo = summary.expected * 0.5;
    summary.band_hi = summary.expected * 1.5;
    summary.consistent =
        summary.mean_observed >= summary.band_lo && summary.mean_observed <= summary.band_hi;
    summary.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    return summary;
}

}  // namespace eqmine
