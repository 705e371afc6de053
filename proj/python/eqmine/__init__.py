"""Discovery of equally distributed attribute sets between two numeric relations.

The heavy lifting lives in the native module; this package re-exports its
surface: relation loading, the two-sample tests (KS, Wilcoxon, energy
distance with permutation p-values), the levelwise lattice search, and the
synthetic scenario generators.
"""

from ._eqmine import (
    EqmineError,
    Relation,
    binomial_tail,
    canonicalize,
    discover,
    energy_statistic,
    gen_fig1_scenario,
    gen_null_pair,
    gen_shifted_pair,
    ks_pvalue,
    ks_statistic,
    load_relation,
    permutation_pvalue,
    run_cli,
    run_validation,
    specializes,
    subsets_of_arity,
    test_pairs,
    wilcoxon_ranksum,
    write_relation,
)

__all__ = [
    "EqmineError",
    "Relation",
    "binomial_tail",
    "canonicalize",
    "discover",
    "energy_statistic",
    "gen_fig1_scenario",
    "gen_null_pair",
    "gen_shifted_pair",
    "ks_pvalue",
    "ks_statistic",
    "load_relation",
    "permutation_pvalue",
    "run_cli",
    "run_validation",
    "specializes",
    "subsets_of_arity",
    "test_pairs",
    "wilcoxon_ranksum",
    "write_relation",
]
