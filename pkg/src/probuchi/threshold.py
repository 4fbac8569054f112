"""Threshold semantics: value sets, epsilon cutoffs, and the tuple GNBA.

A run prefix of a probabilistic automaton has as probability a product of
edge probabilities (initial edges included), so only finitely many values
>= x exist for any x > 0.  The epsilon ladder turns that into cutoffs:
any set of at most j same-length run prefixes with total probability
< lambda in fact stays below lambda - eps_j.  The GNBA construction then
tracks at most k runs with their exact prefix values, replacing at most
one sub-epsilon value by the symbolic stars.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import (
    ACC_GNBA,
    NondetAutomaton,
    ONE,
    ProbAutomaton,
    ZERO,
    format_rational,
    trim,
    underlying_nba,
)
from .errors import InvalidThreshold, NotFinitelyAmbiguous, PreconditionError
from .patterns import find_ida

# Symbolic values for the single imprecisely tracked run: "nondeterministic
# phase" and "deterministic phase".  Both stand for an unknown value in
# (0, epsilon).
STAR_N = "*n"
STAR_D = "*d"


@dataclass(frozen=True)
class ValueSet:
    """All products of the base probabilities that stay >= threshold."""

    threshold: Fraction
    values: tuple[Fraction, ...]  # ascending, contains 1 (the empty product)

    def __contains__(self, v) -> bool:
        return v in set(self.values)


def compute_value_set(base_probs: Iterable[Fraction], x: Fraction) -> ValueSet:
    """Breadth-first product generation pruned below x.

    Terminates because a product can contain at most log_x(max base)
    factors < 1 before dropping below x.
    """
    if x <= 0:
        raise InvalidThreshold("value-set threshold must be positive")
    base = sorted({Fraction(b) for b in base_probs})
    if not base or base[0] <= 0 or base[-1] > 1:
        raise PreconditionError("base probabilities must lie in (0, 1]")
    values = {ONE}
    frontier = [ONE]
    while frontier:
        nxt = []
        for v in frontier:
            for b in base:
                prod = v * b
                if prod >= x and prod not in values:
                    values.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return ValueSet(threshold=x, values=tuple(sorted(values)))


@dataclass(frozen=True)
class EpsilonLadder:
    lam: Fraction
    k: int
    eps: tuple[Fraction, ...]  # eps[j-1] is the cutoff for j tracked runs


def _v_max_below(values: ValueSet, base: list[Fraction], bound: Fraction):
    """Largest product a*b < bound with a in the value set, b a base prob."""
    best = None
    for a in values.values:
        for b in base:
            prod = a * b
            if prod < bound and (best is None or prod > best):
                best = prod
    return best


def _largest_sum_below(values: ValueSet, max_terms: int, bound: Fraction):
    """Largest sum of at most max_terms values (repetition allowed) < bound."""
    best = None
    for n in range(1, max_terms + 1):
        for combo in itertools.combinations_with_replacement(values.values, n):
            s = sum(combo, ZERO)
            if s < bound and (best is None or s > best):
                best = s
    return best


def compute_epsilon(pba: ProbAutomaton, lam: Fraction, k: int) -> EpsilonLadder:
    """Cutoff ladder eps_1 >= ... >= eps_k for threshold lam.

    eps_1 halves the gap between lam and the largest run-prefix value
    below it; eps_{j+1} additionally stays below the gap between lam and
    the largest possible sum of at most j+1 values >= eps_j (at most j+1,
    not j: a set of j+1 prefixes may consist entirely of values above the
    previous cutoff).  Degenerate terms (no value below the bound, no sum
    below lam) are dropped; if all terms drop, the previous cutoff
    carries over.
    """
    if not (0 < lam <= 1):
        raise InvalidThreshold(f"lambda must be in (0,1], got {lam}")
    if k < 1:
        raise PreconditionError("k must be >= 1")
    base = sorted(pba.edge_probabilities())
    v_lam = compute_value_set(base, lam)
    gap = _v_max_below(v_lam, base, lam)
    eps = [lam if gap is None else (lam - gap) / 2]
    for j in range(1, k):
        prev = eps[-1]
        v_eps = compute_value_set(base, prev)
        candidates = []
        below = _v_max_below(v_eps, base, prev)
        if below is not None:
            candidates.append(prev - below)
        s = _largest_sum_below(v_eps, j + 1, lam)
        if s is not None:
            candidates.append(lam - s)
        nxt = min(candidates) / 2 if candidates else prev
        eps.append(min(nxt, prev))
    return EpsilonLadder(lam=lam, k=k, eps=tuple(eps))


# ---------------------------------------------------------------------------
# The tuple GNBA
# ---------------------------------------------------------------------------

Value = Fraction | str  # a rational >= eps, or one of the stars
Entry = tuple[str, Value]
TupleState = tuple[Entry, ...]


def _is_star(v: Value) -> bool:
    return v == STAR_N or v == STAR_D


def _sum_exceeds(entries: TupleState, lam: Fraction) -> bool:
    """Total probability > lam, reading a star as an arbitrarily small
    positive value: with a star present the real part may sum to exactly
    lam, without one it must exceed it strictly."""
    real = sum((v for _q, v in entries if not _is_star(v)), ZERO)
    if any(_is_star(v) for _q, v in entries):
        return real >= lam
    return real > lam


def _tuple_ok(entries: TupleState, lam: Fraction) -> bool:
    stars = sum(1 for _q, v in entries if _is_star(v))
    return stars <= 1 and _sum_exceeds(entries, lam)


def _value_str(v: Value) -> str:
    return v if isinstance(v, str) else format_rational(v)


def _tuple_name(entries: TupleState) -> str:
    return "(" + "".join(f"({q},{_value_str(v)})" for q, v in entries) + ")"


def _value_sort_key(v: Value):
    if isinstance(v, str):
        return (1, 0, v)
    return (0, v, "")


def threshold_to_gnba(
    pba: ProbAutomaton,
    lam: Fraction,
    k: int,
    allow_ida: bool = False,
) -> NondetAutomaton:
    """Generalized Buechi automaton for the threshold-lam language.

    States are tuples of at most k (state, value) entries: guessed run
    prefixes with their probabilities.  On each symbol every entry picks a
    nonempty set of distinct successors (its group); values multiply along
    edges, dropping to the star once they fall below eps = eps_k, where
    only the deterministic star phase may continue on probability-1 edges.
    Tuples that lose the sum > lam property, carry two sub-eps values or
    touch the rejecting sink are never created, and acceptance set i asks
    the i-th entry to be accepting with a non-*n value (shorter tuples
    pass vacuously).  The state space is built lazily from the initial
    tuples; within a parent group entries are kept sorted, which merges
    the permutations the construction leaves unordered.

    With `allow_ida` the finite-ambiguity precondition is skipped; the
    result is then only guaranteed to capture words whose acceptance is
    witnessed by at most k runs.
    """
    if not (0 < lam < 1):
        raise InvalidThreshold(f"lambda must be in (0,1), got {lam}")
    if k < 1:
        raise PreconditionError("k must be >= 1")
    pba = trim(pba)
    und = underlying_nba(pba)
    if not allow_ida and und.states:
        wit = find_ida(und, require_accepting_q=False)
        if wit is not None:
            raise NotFinitelyAmbiguous(
                "IDA pattern present: not finitely ambiguous", wit
            )
    ladder = compute_epsilon(pba, lam, k)
    eps = ladder.eps[-1]
    idx = pba.state_index
    sink = pba.rej_sink

    def entry_key(e: Entry):
        return (idx[e[0]], _value_sort_key(e[1]))

    # Initial tuples: nonempty subsets of the initial support, values are
    # the initial probabilities (stars when below eps).
    support = [q for q in sorted(pba.support(), key=idx.__getitem__) if q != sink]
    initial_tuples: list[TupleState] = []
    for n in range(1, min(k, len(support)) + 1):
        for combo in itertools.combinations(support, n):
            entries = tuple(
                (q, pba.mu0[q] if pba.mu0[q] >= eps else STAR_N) for q in combo
            )
            entries = tuple(sorted(entries, key=entry_key))
            if _tuple_ok(entries, lam):
                initial_tuples.append(entries)

    def successor_options(entry: Entry, a: str) -> list[list[Entry]]:
        """Per successor state, the list of possible new entries."""
        p, u = entry
        options: list[list[Entry]] = []
        if u == STAR_D:
            for q, pr in pba.dist(p, a).items():
                if q != sink and pr == ONE:
                    options.append([(q, STAR_D)])
        elif u == STAR_N:
            for q, pr in pba.dist(p, a).items():
                if q != sink and pr > 0:
                    options.append([(q, STAR_N), (q, STAR_D)])
        else:
            for q, pr in pba.dist(p, a).items():
                if q == sink or pr == 0:
                    continue
                prod = u * pr
                options.append([(q, prod if prod >= eps else STAR_N)])
        return options

    def group_choices(options: list[list[Entry]], budget: int) -> list[TupleState]:
        """Nonempty subsets of distinct successor states with one value each,
        canonically sorted, of size <= budget."""
        out: list[TupleState] = []
        m = len(options)

        def rec(i: int, chosen: list[Entry]):
            if len(chosen) > budget:
                return
            if i == m:
                if chosen:
                    out.append(tuple(sorted(chosen, key=entry_key)))
                return
            rec(i + 1, chosen)  # skip this successor state
            for e in options[i]:
                chosen.append(e)
                rec(i + 1, chosen)
                chosen.pop()

        rec(0, [])
        return out

    def successors(entries: TupleState, a: str) -> list[TupleState]:
        all_opts = [successor_options(e, a) for e in entries]
        if any(not opts for opts in all_opts):
            return []  # some tracked run has no continuation
        result: list[TupleState] = []
        m = len(entries)

        def rec(i: int, acc_entries: list[Entry]):
            remaining_groups = m - i
            if len(acc_entries) + remaining_groups > k:
                return
            if i == m:
                t = tuple(acc_entries)
                if _tuple_ok(t, lam):
                    result.append(t)
                return
            budget = k - len(acc_entries) - (remaining_groups - 1)
            for group in group_choices(all_opts[i], budget):
                acc_entries.extend(group)
                if sum(1 for _q, v in acc_entries if _is_star(v)) <= 1:
                    rec(i + 1, acc_entries)
                del acc_entries[len(acc_entries) - len(group):]

        rec(0, [])
        return result

    order: list[TupleState] = []
    seen: set[TupleState] = set()
    for t in initial_tuples:
        if t not in seen:
            seen.add(t)
            order.append(t)
    transitions: set[tuple[str, str, str]] = set()
    head = 0
    while head < len(order):
        src = order[head]
        head += 1
        for a in pba.alphabet:
            for dst in successors(src, a):
                transitions.add((_tuple_name(src), a, _tuple_name(dst)))
                if dst not in seen:
                    seen.add(dst)
                    order.append(dst)

    names = tuple(_tuple_name(t) for t in order)
    acc_sets = []
    for i in range(1, k + 1):
        fi = set()
        for t, name in zip(order, names):
            if len(t) < i:
                fi.add(name)
            else:
                q, v = t[i - 1]
                if q in pba.accepting and v != STAR_N:
                    fi.add(name)
        acc_sets.append(frozenset(fi))
    return NondetAutomaton(
        name=f"th2gnba({pba.name})",
        states=names,
        alphabet=pba.alphabet,
        transitions=frozenset(transitions),
        initials=frozenset(_tuple_name(t) for t in initial_tuples),
        acc=ACC_GNBA,
        acc_sets=tuple(acc_sets),
    ).validate(allow_empty=True)
