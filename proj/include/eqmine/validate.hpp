#pragma once

#include <cstdint>
#include <vector>

#include "eqmine/search.hpp"

namespace eqmine {

struct ValidateConfig {
    std::size_t trials = 5;
    std::size_t rows = 200;
    std::size_t dims = 10;
    int permutations = 99;
    double alpha = 0.1;
    std::uint64_t seed = 1;

    void validate() const;
};

struct ValidateTrial {
    std::uint64_t seed = 0;
    std::size_t observed_rejections = 0;
    bool full_pairing_accepted = false;  // the arity-dims identity candidate
    std::size_t anomalies = 0;           // rejected projections under an accepted full pairing
    std::size_t overwrite_violations = 0;  // rejected verdicts mutated by inference (must be 0)
    double audit_tail = 1.0;             // binomial tail for the observed count
};

struct ValidateSummary {
    ValidateConfig config;
    std::size_t n_projections = 0;  // C(dims, 3)
    std::vector<ValidateTrial> trials;
    double mean_observed = 0.0;
    double expected = 0.0;  // n_projections * alpha
    double band_lo = 0.0;   // declared acceptance band for the mean
    double band_hi = 0.0;
    bool consistent = false;
    std::int64_t runtime_ms = 0;
};

// Reproduces the expected-rejection count check: per trial, draw an
// independent null pair, directly test the full identity pairing and all
// C(dims, 3) of its arity-3 identity projections, then run acceptance
// inference over that store and collect the anomaly audit. The declared
// acceptance band for the mean rejection count is [expected/2, 1.5*expected].
ValidateSummary run_validation(const ValidateConfig& cfg);

}  // namespace eqmine
