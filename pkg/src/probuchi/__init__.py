"""Probabilistic Buechi automata: ambiguity patterns, regularity-preserving
translations, and an exact acceptance-probability oracle."""

from .core import (
    ACC_BUCHI,
    ACC_COBUCHI,
    ACC_GNBA,
    ACC_PARITY,
    Fork,
    NondetAutomaton,
    PK_BUCHI,
    PK_COBUCHI,
    PK_FINITE,
    PK_WEAK,
    ProbAutomaton,
    SccDecomposition,
    UltimatelyPeriodicWord,
    degeneralize,
    forks,
    is_deterministic,
    is_weak,
    parse_rational,
    scc_decomposition,
    trim,
    underlying_nba,
    word,
)
from .fileformat import (
    load_automaton,
    parse_automaton,
    save_automaton,
    serialize_automaton,
)
from .analysis import (
    MODE_ALL_RUNS,
    MODE_FLAT,
    MonteCarloResult,
    SupportClassSet,
    acceptance_probability,
    count_two_accepting_runs,
    is_empty_nba,
    member_nondet,
    monte_carlo,
    myhill_nerode_supports,
    non_universal_witness_almost_sure,
    pfa_acceptance,
)
from .patterns import (
    AmbiguityClass,
    PatternWitness,
    classify,
    find_eda,
    find_ida,
    is_flat,
    is_hpba,
    is_spba,
    is_unambiguous,
    verify_witness,
)
from .translate import (
    almost_sure_to_dba,
    complement_pwa,
    complete_dba,
    dba_to_pba,
    ldba_to_pba,
    parity_to_unambiguous_ldba,
    pca_to_pwa,
    pfa_to_pwa_value1,
    positive_to_nba,
    positive_to_threshold,
)
from .threshold import (
    EpsilonLadder,
    ValueSet,
    compute_epsilon,
    compute_value_set,
    threshold_to_gnba,
)
from .gadgets import gadget_fig_a, gadget_p_lambda, gadget_p_tilde_lambda
from . import errors

__all__ = [name for name in dir() if not name.startswith("_")]
