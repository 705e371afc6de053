#pragma once

#include <cstdint>
#include <utility>

#include "eqmine/relation.hpp"

namespace eqmine {

enum class Family { GaussIid, GaussCorr, Mixture, Ring };

struct ScenarioSpec {
    std::size_t rows = 2;
    std::uint64_t seed = 0;
    Family family = Family::GaussIid;
    double rho = 0.0;  // GaussCorr only
    std::size_t dims = 1;

    void validate() const;  // throws ConfigError
};

// Two independent samples from the same joint law; the identity pairing is
// equally distributed by construction at every arity. Left columns are named
// a0..a{d-1}, right columns b0..b{d-1}.
std::pair<Relation, Relation> gen_null_pair(const ScenarioSpec& spec);

// Controlled analogue of the two-survey example: R(A,B) and S(C,D,E,F) with
// A,C,E ~ N(0,1) and B,D,F ~ N(3,1); corr(A,B) = corr(C,D) = +0.9 with (C,D)
// an independent draw from the same joint, and corr(E,F) = -0.9. Hence the
// unary matches are exactly A~C, A~E, B~D, B~F; jointly (A,B) matches (C,D)
// but not (E,F).
std::pair<Relation, Relation> gen_fig1_scenario(std::size_t rows, std::uint64_t seed);

// First relation standard normal, second shifted by delta in every column;
// delta = 0 reduces to a GaussIid null pair.
std::pair<Relation, Relation> gen_shifted_pair(std::size_t rows, std::size_t dims, double delta,
                                               std::uint64_t seed);

}  // namespace eqmine
