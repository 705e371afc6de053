#include "eqmine/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "eqmine/errors.hpp"
#include "eqmine/rng.hpp"

namespace eqmine {

void TestConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");
    if (permutations < 19) throw ConfigError("permutations must be >= 19");
}

double ks_statistic(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw EmptySample("ks_statistic: empty sample");
    std::vector<double> xs(x.begin(), x.end());
    std::vector<double> ys(y.begin(), y.end());
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double n = static_cast<double>(xs.size());
    const double m = static_cast<double>(ys.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < xs.size() || j < ys.size()) {
        double t;
        if (i == xs.size()) t = ys[j];
        else if (j == ys.size()) t = xs[i];
        else t = std::min(xs[i], ys[j]);
        while (i < xs.size() && xs[i] == t) ++i;
        while (j < ys.size() && ys[j] == t) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    return d;
}

double ks_pvalue(double d, std::size_t n, std::size_t m) {
    const double ne = static_cast<double>(n) * static_cast<double>(m) /
                      (static_cast<double>(n) + static_cast<double>(m));
    const double sq = std::sqrt(ne);
    const double lambda = (sq + 0.12 + 0.11 / sq) * d;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 1000; ++j) {
        double term = 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-12) return std::clamp(sum, 0.0, 1.0);
        sign = -sign;
    }
    return 1.0;  // series failed to shrink (lambda ~ 0): no evidence against H0
}

TestOutcome wilcoxon_ranksum(std::span<const double> x, std::span<const double> y, double alpha) {
    if (x.empty() || y.empty()) throw EmptySample("wilcoxon_ranksum: empty sample");
    const std::size_t n = x.size(), m = y.size(), N = n + m;

    std::vector<std::pair<double, bool>> pooled;  // (value, is_x)
    pooled.reserve(N);
    for (double v : x) pooled.emplace_back(v, true);
    for (double v : y) pooled.emplace_back(v, false);
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double rank_sum_x = 0.0;
    double tie_term = 0.0;  // sum of t^3 - t over tie groups
    std::size_t i = 0;
    while (i < N) {
        std::size_t j = i;
        while (j < N && pooled[j].first == pooled[i].first) ++j;
        const double t = static_cast<double>(j - i);
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (pooled[k].second) rank_sum_x += midrank;
        tie_term += t * t * t - t;
        i = j;
    }

    TestOutcome out;
    out.statistic = rank_sum_x;
    out.left_rows = n;
    out.right_rows = m;
    out.method = "wilcoxon-location-only";

    const double dn = static_cast<double>(n), dm = static_cast<double>(m), dN = static_cast<double>(N);
    const double mean = dn * (dN + 1.0) / 2.0;
    const double var = dn * dm / 12.0 * ((dN + 1.0) - tie_term / (dN * (dN - 1.0)));
    if (var <= 0.0) {
        out.p_value = 1.0;  // all pooled values identical
        out.method += " (degenerate)";
        out.rejected = false;
        return out;
    }
    double diff = rank_sum_x - mean;
    // continuity correction toward the mean, never across it
    double adj = std::max(0.0, std::abs(diff) - 0.5);
    double z = adj / std::sqrt(var);
    out.p_value = std::clamp(std::erfc(z / std::sqrt(2.0)), 0.0, 1.0);
    out.rejected = out.p_value < alpha;
    return out;
}

double energy_statistic(const Matrix& xs, const Matrix& ys) {
    if (xs.cols != ys.cols)
        throw DimensionMismatch("energy_statistic: " + std::to_string(xs.cols) + " vs " +
                                std::to_string(ys.cols) + " columns");
    if (xs.rows == 0 || ys.rows == 0) throw EmptySample("energy_statistic: empty sample");
    const std::size_t n = xs.rows, m = ys.rows, k = xs.cols;

    auto dist = [k](const double* a, const double* b) {
        double s = 0.0;
        for (std::size_t d = 0; d < k; ++d) {
            double t = a[d] - b[d];
            s += t * t;
        }
        return std::sqrt(s);
    };

    // all three sums run over ordered pairs in identical loop order, which
    // makes E exactly 0.0 when xs and ys hold the same rows
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = xs.data.data() + i * k;
        for (std::size_t j = 0; j < m; ++j) sxy += dist(xi, ys.data.data() + j * k);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = xs.data.data() + i * k;
        for (std::size_t j = 0; j < n; ++j) sxx += dist(xi, xs.data.data() + j * k);
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double* yi = ys.data.data() + i * k;
        for (std::size_t j = 0; j < m; ++j) syy += dist(yi, ys.data.data() + j * k);
    }
    const double dn = static_cast<double>(n), dm = static_cast<double>(m);
    return 2.0 * sxy / (dn * dm) - sxx / (dn * dn) - syy / (dm * dm);
}

PermutationResult permutation_pvalue(const Matrix& pooled, std::size_t n, int b,
                                     std::uint64_t seed) {
    const std::size_t P = pooled.rows;
    if (n == 0 || n >= P) throw EmptySample("permutation_pvalue: empty group");
    if (b < 19) throw ConfigError("permutation_pvalue: b must be >= 19");
    const std::size_t m = P - n;
    const std::size_t k = pooled.cols;

    // pairwise distances, computed once
    std::vector<double> D(P * P, 0.0);
    for (std::size_t i = 0; i < P; ++i) {
        const double* ri = pooled.data.data() + i * k;
        for (std::size_t j = i + 1; j < P; ++j) {
            const double* rj = pooled.data.data() + j * k;
            double s = 0.0;
            for (std::size_t d = 0; d < k; ++d) {
                double t = ri[d] - rj[d];
                s += t * t;
            }
            double dij = std::sqrt(s);
            D[i * P + j] = dij;
            D[j * P + i] = dij;
        }
    }
    double total_half = 0.0;
    for (std::size_t i = 0; i < P; ++i)
        for (std::size_t j = i + 1; j < P; ++j) total_half += D[i * P + j];

    const double dn = static_cast<double>(n), dm = static_cast<double>(m);
    auto stat_from_groups = [&](const std::vector<std::size_t>& gx,
                                const std::vector<std::size_t>& gy) {
        double a = 0.0, bb = 0.0;
        for (std::size_t i = 0; i < gx.size(); ++i) {
            const double* row = D.data() + gx[i] * P;
            for (std::size_t j = i + 1; j < gx.size(); ++j) a += row[gx[j]];
        }
        for (std::size_t i = 0; i < gy.size(); ++i) {
            const double* row = D.data() + gy[i] * P;
            for (std::size_t j = i + 1; j < gy.size(); ++j) bb += row[gy[j]];
        }
        double cross = total_half - a - bb;
        return 2.0 * cross / (dn * dm) - 2.0 * a / (dn * dn) - 2.0 * bb / (dm * dm);
    };

    // observed statistic via the reference formula so that identical halves
    // give exactly zero
    Matrix xs(n, k), ys(m, k);
    std::copy(pooled.data.begin(), pooled.data.begin() + n * k, xs.data.begin());
    std::copy(pooled.data.begin() + n * k, pooled.data.end(), ys.data.begin());
    const double observed = energy_statistic(xs, ys);

    Rng rng(seed);
    std::vector<std::size_t> idx(P);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::size_t> gx(n), gy(m);
    int count = 0;
    for (int rep = 0; rep < b; ++rep) {
        for (std::size_t t = 0; t < n && t + 1 < P; ++t) {
            std::size_t j = t + static_cast<std::size_t>(rng.bounded(P - t));
            std::swap(idx[t], idx[j]);
        }
        std::copy(idx.begin(), idx.begin() + n, gx.begin());
        std::copy(idx.begin() + n, idx.end(), gy.begin());
        std::sort(gx.begin(), gx.end());
        std::sort(gy.begin(), gy.end());
        if (stat_from_groups(gx, gy) >= observed) ++count;
    }
    return {observed, (1.0 + count) / (static_cast<double>(b) + 1.0)};
}

double binomial_tail(std::size_t n_trials, double p0, std::size_t observed) {
    if (!(p0 > 0.0 && p0 < 1.0)) throw ConfigError("binomial_tail: p0 must be in (0,1)");
    if (observed > n_trials) throw ConfigError("binomial_tail: observed > n_trials");
    if (observed == 0) return 1.0;
    const double lp = std::log(p0);
    const double lq = std::log1p(-p0);
    const double lgn = std::lgamma(static_cast<double>(n_trials) + 1.0);
    double sum = 0.0;
    for (std::size_t k = observed; k <= n_trials; ++k) {
        const double dk = static_cast<double>(k);
        const double dnk = static_cast<double>(n_trials - k);
        double lt = lgn - std::lgamma(dk + 1.0) - std::lgamma(dnk + 1.0) + dk * lp + dnk * lq;
        sum += std::exp(lt);
    }
    return std::min(1.0, sum);
}

std::uint64_t candidate_seed(std::uint64_t master_seed, const PairSet& p, std::uint64_t salt) {
    std::uint64_t h = hash_combine(master_seed, salt);
    for (const auto& pr : p.pairs()) {
        h = hash_combine(h, pr.left);
        h = hash_combine(h, pr.right);
    }
    return h;
}

namespace {

// KS statistic recomputed over seeded relabelings of the pooled scalars
double ks_permutation_pvalue(std::span<const double> x, std::span<const double> y,
                             double observed, int b, std::uint64_t seed) {
    const std::size_t n = x.size(), m = y.size(), P = n + m;
    std::vector<std::pair<double, std::size_t>> sorted;  // (value, pooled index)
    sorted.reserve(P);
    for (std::size_t i = 0; i < n; ++i) sorted.emplace_back(x[i], i);
    for (std::size_t j = 0; j < m; ++j) sorted.emplace_back(y[j], n + j);
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    Rng rng(seed);
    std::vector<std::size_t> idx(P);
    std::vector<char> in_x(P);
    const double dn = static_cast<double>(n), dm = static_cast<double>(m);
    int count = 0;
    for (int rep = 0; rep < b; ++rep) {
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t t = 0; t < n && t + 1 < P; ++t) {
            std::size_t j = t + static_cast<std::size_t>(rng.bounded(P - t));
            std::swap(idx[t], idx[j]);
        }
        std::fill(in_x.begin(), in_x.end(), 0);
        for (std::size_t t = 0; t < n; ++t) in_x[idx[t]] = 1;
        std::size_t cx = 0, cy = 0;
        double d = 0.0;
        std::size_t i = 0;
        while (i < P) {
            std::size_t j = i;
            while (j < P && sorted[j].first == sorted[i].first) {
                if (in_x[sorted[j].second]) ++cx;
                else ++cy;
                ++j;
            }
            d = std::max(d, std::abs(static_cast<double>(cx) / dn -
                                     static_cast<double>(cy) / dm));
            i = j;
        }
        if (d >= observed) ++count;
    }
    return (1.0 + count) / (static_cast<double>(b) + 1.0);
}

}  // namespace

namespace {

// same affine transform on both sides, per column, from pooled moments
void pooled_standardize(CandidateView& view) {
    for (std::size_t j = 0; j < view.left.cols; ++j) {
        double sum = 0.0, sq = 0.0;
        const double count = static_cast<double>(view.left.rows + view.right.rows);
        for (std::size_t i = 0; i < view.left.rows; ++i) sum += view.left.at(i, j);
        for (std::size_t i = 0; i < view.right.rows; ++i) sum += view.right.at(i, j);
        const double m = sum / count;
        for (std::size_t i = 0; i < view.left.rows; ++i) {
            double d = view.left.at(i, j) - m;
            sq += d * d;
        }
        for (std::size_t i = 0; i < view.right.rows; ++i) {
            double d = view.right.at(i, j) - m;
            sq += d * d;
        }
        const double sd = std::sqrt(sq / count);
        if (sd <= 0.0) continue;
        for (std::size_t i = 0; i < view.left.rows; ++i)
            view.left.at(i, j) = (view.left.at(i, j) - m) / sd;
        for (std::size_t i = 0; i < view.right.rows; ++i)
            view.right.at(i, j) = (view.right.at(i, j) - m) / sd;
    }
}

}  // namespace

TestOutcome test_candidate(const CandidateView& raw_view, const PairSet& p,
                           const TestConfig& cfg) {
    cfg.validate();
    const std::size_t arity = p.arity();
    if (raw_view.left.cols != arity || raw_view.right.cols != arity)
        throw DimensionMismatch("candidate view does not match pair set arity");
    if (raw_view.left.rows == 0 || raw_view.right.rows == 0)
        throw EmptySample("test_candidate: empty sample");

    CandidateView standardized;
    const CandidateView* view_ptr = &raw_view;
    if (cfg.pooled_zscore) {
        standardized = raw_view;
        pooled_standardize(standardized);
        view_ptr = &standardized;
    }
    const CandidateView& view = *view_ptr;

    const std::uint64_t seed = candidate_seed(cfg.master_seed, p, kSeedSaltPermute);
    TestOutcome out;
    out.left_rows = view.left.rows;
    out.right_rows = view.right.rows;

    if (arity == 1) {
        std::span<const double> x(view.left.data.data(), view.left.rows);
        std::span<const double> y(view.right.data.data(), view.right.rows);
        if (cfg.univariate_test == UnivariateTest::Wilcoxon) {
            out = wilcoxon_ranksum(x, y, cfg.alpha);
            if (cfg.pooled_zscore) out.method += "+zscore";
            return out;
        }
        out.statistic = ks_statistic(x, y);
        if (cfg.pvalue_mode_univariate == PValueMode::Asymptotic) {
            out.p_value = ks_pvalue(out.statistic, x.size(), y.size());
            out.method = "ks-asymptotic";
        } else {
            out.p_value = ks_permutation_pvalue(x, y, out.statistic, cfg.permutations, seed);
            out.method = "ks-permutation";
        }
    } else {
        Matrix pooled(view.left.rows + view.right.rows, arity);
        std::copy(view.left.data.begin(), view.left.data.end(), pooled.data.begin());
        std::copy(view.right.data.begin(), view.right.data.end(),
                  pooled.data.begin() + view.left.data.size());
        auto res = permutation_pvalue(pooled, view.left.rows, cfg.permutations, seed);
        out.statistic = res.statistic;
        out.p_value = res.p_value;
        out.method = "energy-permutation";
    }
    if (cfg.pooled_zscore) out.method += "+zscore";
    out.rejected = out.p_value < cfg.alpha;
    return out;
}

}  // namespace eqmine
