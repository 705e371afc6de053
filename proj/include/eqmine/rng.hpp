#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace eqmine {

// SplitMix64 finalizer. Used to derive independent seeds from (master seed,
// candidate) so that test outcomes do not depend on scheduling order.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    return mix64(h ^ mix64(v));
}

// Deterministic random source. The engine (mt19937_64) has a fully specified
// output sequence, and every derived draw below is defined in terms of raw
// engine words only, so streams are reproducible across platforms for a
// given build of this library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::uint64_t bounded(std::uint64_t n) { return engine_() % n; }

    // standard normal via Box-Muller; pairs are drawn eagerly and the second
    // value cached, which fixes the draw order once and for all
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

    // Fisher-Yates; permutes the whole span
    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    // k distinct indices from [0, n), ascending
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

inline std::vector<std::size_t> Rng::sample_indices(std::size_t n, std::size_t k) {
    k = std::min(k, n);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    // partial Fisher-Yates: fix the first k slots
    for (std::size_t t = 0; t < k && t + 1 < n; ++t) {
        std::size_t j = t + static_cast<std::size_t>(bounded(n - t));
        std::swap(idx[t], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace eqmine
