"""The three example automata used throughout the test corpus.

All builders complete missing probability mass into an explicit rejecting
sink so the results are trim as constructed.
"""

from __future__ import annotations

from fractions import Fraction

from .core import ONE, PK_BUCHI, PK_WEAK, ProbAutomaton
from .errors import InvalidThreshold


def _check_lambda(lam: Fraction) -> None:
    if not (0 < lam < 1):
        raise InvalidThreshold(f"lambda must be in (0,1), got {lam}")


def gadget_fig_a() -> ProbAutomaton:
    """Weak automaton over {a, b, $} whose acceptance probability on
    ``u $^omega`` is (1 - 2^-#a(u) + 2^-#b(u)) / 2.

    Threshold 1/2 separates the prefixes with more a's than b's, which no
    classical automaton can do.
    """
    half = Fraction(1, 2)
    delta = {
        ("q_a", "b", "q_a"): ONE,
        ("q_a", "a", "q_a"): half,
        ("q_a", "a", "q_+"): half,
        ("q_a", "$", "q_rej"): ONE,
        ("q_b", "a", "q_b"): ONE,
        ("q_b", "b", "q_b"): half,
        ("q_b", "b", "q_rej"): half,
        ("q_b", "$", "q_$"): ONE,
        ("q_+", "a", "q_+"): ONE,
        ("q_+", "b", "q_+"): ONE,
        ("q_+", "$", "q_$"): ONE,
        ("q_$", "$", "q_$"): ONE,
        ("q_$", "a", "q_rej"): ONE,
        ("q_$", "b", "q_rej"): ONE,
        ("q_rej", "a", "q_rej"): ONE,
        ("q_rej", "b", "q_rej"): ONE,
        ("q_rej", "$", "q_rej"): ONE,
    }
    return ProbAutomaton(
        name="fig_a",
        states=("q_a", "q_b", "q_+", "q_$", "q_rej"),
        alphabet=("a", "b", "$"),
        delta=delta,
        mu0={"q_a": half, "q_b": half},
        accepting=frozenset({"q_$"}),
        kind=PK_WEAK,
        rej_sink="q_rej",
    ).validate()


def gadget_p_lambda(lam: Fraction) -> ProbAutomaton:
    """Two-state family whose positive-semantics language is non-regular.

    q_0 is initial and accepting; on `a` it loops with probability
    1 - lambda and moves to q_1 with probability lambda, and its missing
    `b` mass falls into the sink.
    """
    _check_lambda(lam)
    delta = {
        ("q_0", "a", "q_0"): 1 - lam,
        ("q_0", "a", "q_1"): lam,
        ("q_0", "b", "q_rej"): ONE,
        ("q_1", "a", "q_1"): ONE,
        ("q_1", "b", "q_0"): ONE,
        ("q_rej", "a", "q_rej"): ONE,
        ("q_rej", "b", "q_rej"): ONE,
    }
    return ProbAutomaton(
        name="p_lambda",
        states=("q_0", "q_1", "q_rej"),
        alphabet=("a", "b"),
        delta=delta,
        mu0={"q_0": ONE},
        accepting=frozenset({"q_0"}),
        kind=PK_BUCHI,
        rej_sink="q_rej",
    ).validate()


def gadget_p_tilde_lambda(lam: Fraction) -> ProbAutomaton:
    """Weak four-state family whose almost-sure language is non-regular.

    The accepting state q_f is a sink, so no EDA_F pattern exists, but the
    a-loops of q_0/q_2 carry both an IDA_F and an EDA pattern.
    """
    _check_lambda(lam)
    delta = {
        ("q_0", "a", "q_1"): lam,
        ("q_0", "a", "q_2"): 1 - lam,
        ("q_0", "b", "q_rej"): ONE,
        ("q_1", "a", "q_1"): ONE,
        ("q_1", "b", "q_0"): ONE,
        ("q_2", "a", "q_2"): 1 - lam,
        ("q_2", "a", "q_1"): lam,
        ("q_2", "b", "q_f"): ONE,
        ("q_f", "a", "q_f"): ONE,
        ("q_f", "b", "q_f"): ONE,
        ("q_rej", "a", "q_rej"): ONE,
        ("q_rej", "b", "q_rej"): ONE,
    }
    return ProbAutomaton(
        name="p_tilde_lambda",
        states=("q_0", "q_1", "q_2", "q_f", "q_rej"),
        alphabet=("a", "b"),
        delta=delta,
        mu0={"q_0": ONE},
        accepting=frozenset({"q_f"}),
        kind=PK_WEAK,
        rej_sink="q_rej",
    ).validate()
