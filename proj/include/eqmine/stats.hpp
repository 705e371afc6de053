#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "eqmine/pairset.hpp"
#include "eqmine/relation.hpp"

namespace eqmine {

enum class UnivariateTest { KS, Wilcoxon };
enum class PValueMode { Asymptotic, Permutation };

struct TestConfig {
    double alpha = 0.05;
    UnivariateTest univariate_test = UnivariateTest::KS;
    int permutations = 199;  // B
    PValueMode pvalue_mode_univariate = PValueMode::Asymptotic;
    std::uint64_t master_seed = 1;
    // exploratory: per-column pooled standardization before testing; this
    // changes the null hypothesis (scale differences stop counting) and is
    // marked in the method field
    bool pooled_zscore = false;

    void validate() const;  // throws ConfigError
};

struct TestOutcome {
    double statistic = 0.0;
    double p_value = 1.0;
    bool rejected = false;
    std::string method;
    std::size_t left_rows = 0;
    std::size_t right_rows = 0;

    bool operator==(const TestOutcome&) const = default;
};

// sup_t |ECDF_x(t) - ECDF_y(t)| over the pooled sample points; right-continuous
// step ECDFs, so the supremum over pooled points is exact.
double ks_statistic(std::span<const double> x, std::span<const double> y);

// Asymptotic two-sample p-value: Kolmogorov tail series
// 2 * sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2) with
// lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * d, ne = n*m/(n+m).
// Series truncated once a term drops below 1e-12; clamped to [0,1].
double ks_pvalue(double d, std::size_t n, std::size_t m);

// Rank-sum test with midrank ties and tie-corrected normal approximation
// (continuity-corrected, two-sided). Sensitive to location shifts only,
// which the method string records. All pooled values identical degenerates
// to p = 1 by convention.
TestOutcome wilcoxon_ranksum(std::span<const double> x, std::span<const double> y,
                             double alpha = 0.05);

// E = 2/(nm) sum||xi-yj|| - 1/n^2 sum||xi-xi'|| - 1/m^2 sum||yj-yj'||,
// Euclidean norm. Exactly zero for identical inputs.
double energy_statistic(const Matrix& xs, const Matrix& ys);

struct PermutationResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Energy permutation test on a pooled matrix whose first n rows are the left
// sample. The pairwise distance matrix is computed once and reused across the
// b seeded relabelings; p = (1 + #{permuted >= observed}) / (b + 1).
PermutationResult permutation_pvalue(const Matrix& pooled, std::size_t n, int b,
                                     std::uint64_t seed);

// P(Binomial(n_trials, p0) >= observed), exact tail sum in log space.
double binomial_tail(std::size_t n_trials, double p0, std::size_t observed);

// Stable per-candidate seed: outcomes depend only on (master seed, candidate),
// never on scheduling or level order.
std::uint64_t candidate_seed(std::uint64_t master_seed, const PairSet& p, std::uint64_t salt);

inline constexpr std::uint64_t kSeedSaltView = 0x76696577;     // subsampling stream
inline constexpr std::uint64_t kSeedSaltPermute = 0x7065726d;  // relabeling stream

// Arity 1 runs the configured univariate test; arity >= 2 runs the energy
// permutation test. Deterministic per (master seed, candidate).
TestOutcome test_candidate(const CandidateView& view, const PairSet& p, const TestConfig& cfg);

}  // namespace eqmine
