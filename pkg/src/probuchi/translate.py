"""Regularity-preserving translations between probabilistic and classical
automata.

Except for the threshold construction (see :mod:`probuchi.threshold`), none
of these track exact probabilities: they only distinguish zero,
positive and probability-1 edges.
"""

from __future__ import annotations

from fractions import Fraction

from .analysis import MODE_ALL_RUNS, MODE_FLAT
from .core import (
    ACC_BUCHI,
    ACC_PARITY,
    NondetAutomaton,
    ONE,
    PK_BUCHI,
    PK_COBUCHI,
    PK_FINITE,
    PK_WEAK,
    ProbAutomaton,
    ZERO,
    fresh_name,
    is_weak,
    trim,
    underlying_nba,
)
from .errors import (
    InvalidThreshold,
    KindMismatch,
    NotCountablyAmbiguous,
    NotExpAmbiguous,
    NotFlat,
    NotLimitDeterministic,
    PreconditionError,
)
from .patterns import find_eda, find_ida


# ---------------------------------------------------------------------------
# Classical -> probabilistic
# ---------------------------------------------------------------------------


def complete_dba(dba: NondetAutomaton) -> NondetAutomaton:
    """Route missing rows of a deterministic automaton into a fresh sink."""
    if dba.acc != ACC_BUCHI or not dba.is_deterministic():
        raise PreconditionError("expected a deterministic Buechi automaton")
    missing = [
        (p, a)
        for p in dba.states
        for a in dba.alphabet
        if not dba.successors(p, a)
    ]
    if not missing:
        return dba
    sink = fresh_name("q_rej", dba.states)
    transitions = set(dba.transitions)
    transitions.update((p, a, sink) for (p, a) in missing)
    transitions.update((sink, a, sink) for a in dba.alphabet)
    return NondetAutomaton(
        name=dba.name,
        states=dba.states + (sink,),
        alphabet=dba.alphabet,
        transitions=frozenset(transitions),
        initials=dba.initials,
        acc=ACC_BUCHI,
        accepting=dba.accepting,
    ).validate()


def dba_to_pba(dba: NondetAutomaton) -> ProbAutomaton:
    """Embed a DBA as a 0/1 automaton: every transition gets probability 1."""
    dba = complete_dba(dba)
    (q0,) = dba.initials
    delta = {(p, a, q): ONE for (p, a, q) in dba.transitions}
    sinks = [
        q
        for q in dba.states
        if q not in dba.accepting
        and all((q, a, q) in dba.transitions for a in dba.alphabet)
    ]
    return ProbAutomaton(
        name=f"pba({dba.name})",
        states=dba.states,
        alphabet=dba.alphabet,
        delta=delta,
        mu0={q0: ONE},
        accepting=frozenset(dba.accepting),
        kind=PK_BUCHI,
        rej_sink=sinks[0] if len(sinks) == 1 else None,
    ).validate()


def parity_to_unambiguous_ldba(dpa: NondetAutomaton) -> NondetAutomaton:
    """Unambiguous limit-deterministic Buechi automaton for a parity language.

    One nondeterministic copy guesses the smallest priority occurring
    infinitely often and switches into the matching deterministic copy at
    the first position after which nothing more important appears; copy i
    keeps only states with priority >= i and accepts at priority exactly i
    (even).  Exactly one guess can succeed per word, which makes the
    result unambiguous.
    """
    if dpa.acc != ACC_PARITY:
        raise KindMismatch("expected a parity automaton")
    if not dpa.is_deterministic():
        raise PreconditionError("parity automaton must be deterministic")
    for p in dpa.states:
        for a in dpa.alphabet:
            if not dpa.successors(p, a):
                raise PreconditionError(
                    f"parity automaton must be complete; ({p},{a}) has no successor"
                )
    m = dpa.max_priority()
    pri = dpa.priorities

    def tilde(q: str) -> str:
        return f"{q}~"

    def copy(q: str, i: int) -> str:
        return f"{q}^{i}"

    states = tuple(tilde(q) for q in dpa.states) + tuple(
        copy(q, i) for i in range(1, m + 1) for q in dpa.states
    )
    (q0,) = dpa.initials
    initials = frozenset({tilde(q0)} | {copy(q0, i) for i in range(1, m + 1)})
    accepting = frozenset(
        copy(q, i)
        for i in range(2, m + 1, 2)
        for q in dpa.states
        if pri[q] == i
    )
    transitions = set()
    for (p, a, q) in dpa.transitions:
        transitions.add((tilde(p), a, tilde(q)))
        for j in range(pri[p] + 1, pri[q] + 1):
            transitions.add((tilde(p), a, copy(q, j)))
        for i in range(1, m + 1):
            if pri[p] >= i and pri[q] >= i:
                transitions.add((copy(p, i), a, copy(q, i)))
    return NondetAutomaton(
        name=f"ldba({dpa.name})",
        states=states,
        alphabet=dpa.alphabet,
        transitions=frozenset(transitions),
        initials=initials,
        acc=ACC_BUCHI,
        accepting=accepting,
    ).validate()


def ldba_to_pba(ldba: NondetAutomaton) -> ProbAutomaton:
    """Equip a limit-deterministic NBA with uniform probabilities.

    Requires that no fork is reachable from any accepting state, so every
    accepting run is limit-deterministic and keeps positive probability.
    Missing rows absorb into a fresh rejecting sink.
    """
    if ldba.acc != ACC_BUCHI:
        raise KindMismatch("expected a Buechi automaton")
    reach_from_acc = set(ldba.accepting)
    stack = list(reach_from_acc)
    while stack:
        p = stack.pop()
        for q in ldba.adjacency[p]:
            if q not in reach_from_acc:
                reach_from_acc.add(q)
                stack.append(q)
    for p in sorted(reach_from_acc, key=ldba.state_index.__getitem__):
        for a in ldba.alphabet:
            succs = ldba.successors(p, a)
            if len(succs) >= 2:
                raise NotLimitDeterministic(
                    f"fork ({p},{a}) -> {{{','.join(succs)}}} reachable from an "
                    "accepting state"
                )
    sink = fresh_name("q_rej", ldba.states)
    needs_sink = any(
        not ldba.successors(p, a) for p in ldba.states for a in ldba.alphabet
    )
    states = ldba.states + ((sink,) if needs_sink else ())
    delta: dict[tuple[str, str, str], Fraction] = {}
    for p in ldba.states:
        for a in ldba.alphabet:
            succs = ldba.successors(p, a)
            if succs:
                share = Fraction(1, len(succs))
                for q in succs:
                    delta[(p, a, q)] = share
            else:
                delta[(p, a, sink)] = ONE
    if needs_sink:
        for a in ldba.alphabet:
            delta[(sink, a, sink)] = ONE
    n0 = len(ldba.initials)
    mu0 = {q: Fraction(1, n0) for q in ldba.initials}
    return ProbAutomaton(
        name=f"pba({ldba.name})",
        states=states,
        alphabet=ldba.alphabet,
        delta=delta,
        mu0=mu0,
        accepting=frozenset(ldba.accepting),
        kind=PK_BUCHI,
        rej_sink=sink if needs_sink else None,
    ).validate()


# ---------------------------------------------------------------------------
# Probabilistic -> classical, extremal semantics
# ---------------------------------------------------------------------------


def positive_to_nba(pba: ProbAutomaton) -> NondetAutomaton:
    """Two-copy NBA recognizing the positive-semantics language.

    The first copy has no accepting states and follows every positive
    edge; the second copy accepts but moves only along probability-1
    edges, so together they guess a limit-deterministic accepting run.
    Requires at most countable ambiguity (no EDA_F pattern).
    """
    pba = trim(pba)
    und = underlying_nba(pba)
    if und.states:
        wit = find_eda(und, require_accepting_p=True)
        if wit is not None:
            raise NotCountablyAmbiguous(
                "EDA_F pattern present: not countably ambiguous", wit
            )
    live = set(und.states)

    def n(q: str) -> str:
        return f"({q},n)"

    def d(q: str) -> str:
        return f"({q},d)"

    states = tuple(n(q) for q in und.states) + tuple(d(q) for q in und.states)
    transitions = set()
    for p in und.states:
        for a in pba.alphabet:
            for q, pr in pba.dist(p, a).items():
                if q not in live:
                    continue
                transitions.add((n(p), a, n(q)))
                transitions.add((n(p), a, d(q)))
                if pr == ONE:
                    transitions.add((d(p), a, d(q)))
    return NondetAutomaton(
        name=f"pos2nba({pba.name})",
        states=states,
        alphabet=pba.alphabet,
        transitions=frozenset(transitions),
        initials=frozenset(n(q) for q in und.initials),
        acc=ACC_BUCHI,
        accepting=frozenset(d(q) for q in und.accepting),
    ).validate(allow_empty=True)


def _macro_name(s: frozenset[str], t: frozenset[str], idx) -> str:
    left = ",".join(sorted(s, key=idx.__getitem__))
    right = ",".join(sorted(t, key=idx.__getitem__))
    return "({%s}|{%s})" % (left, right)


def almost_sure_to_dba(pba: ProbAutomaton, mode: str = MODE_ALL_RUNS) -> NondetAutomaton:
    """Breakpoint DBA for the almost-sure language.

    Macrostates are pairs (S, T) of state sets starting from
    (empty, supp(mu0)); T holds the runs that still owe an accepting
    visit, and hitting T = {} is the accepting breakpoint.  In all-runs
    mode T follows every positive edge (checking that every run accepts);
    in flat mode T follows only probability-1 edges (checking that no
    limit-deterministic run rejects).  The sink is tracked like any other
    state: a run falling into it keeps T nonempty forever.

    All-runs mode requires at most exponential ambiguity (no IDA_F), flat
    mode requires flatness (no EDA).
    """
    pba = trim(pba)
    und = underlying_nba(pba)
    if und.states:
        if mode == MODE_ALL_RUNS:
            wit = find_ida(und, require_accepting_q=True)
            if wit is not None:
                raise NotExpAmbiguous(
                    "IDA_F pattern present: not at most exponentially ambiguous", wit
                )
        elif mode == MODE_FLAT:
            wit = find_eda(und, require_accepting_p=False)
            if wit is not None:
                raise NotFlat("EDA pattern present: automaton is not flat", wit)
        else:
            raise PreconditionError(f"unknown mode {mode!r} (use 'all-runs' or 'flat')")
    idx = pba.state_index
    acc = pba.accepting

    def post(ts: frozenset[str], a: str) -> frozenset[str]:
        return frozenset(q for p in ts for q in pba.positive_successors(p, a))

    def post_det(ts: frozenset[str], a: str) -> frozenset[str]:
        return frozenset(
            q
            for p in ts
            for q, pr in pba.dist(p, a).items()
            if pr == ONE
        )

    def step(s: frozenset[str], t: frozenset[str], a: str):
        if not t:
            return frozenset(), post(s, a)
        if mode == MODE_ALL_RUNS:
            t2 = post(t, a) - acc
        else:
            t2 = post_det(t, a) - acc
        s2 = post(s | t, a) - t2
        return s2, t2

    start = (frozenset(), frozenset(pba.support()))
    order = [start]
    seen = {start}
    transitions = set()
    head = 0
    while head < len(order):
        s, t = order[head]
        head += 1
        for a in pba.alphabet:
            s2, t2 = step(s, t, a)
            nxt = (s2, t2)
            transitions.add((_macro_name(s, t, idx), a, _macro_name(s2, t2, idx)))
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
    states = tuple(_macro_name(s, t, idx) for (s, t) in order)
    accepting = frozenset(_macro_name(s, t, idx) for (s, t) in order if not t)
    return NondetAutomaton(
        name=f"as2dba({pba.name})",
        states=states,
        alphabet=pba.alphabet,
        transitions=frozenset(transitions),
        initials=frozenset({_macro_name(*start, idx)}),
        acc=ACC_BUCHI,
        accepting=accepting,
    ).validate()


# ---------------------------------------------------------------------------
# Threshold shift and the weak-automata constructions
# ---------------------------------------------------------------------------


def positive_to_threshold(pba: ProbAutomaton, lam: Fraction) -> ProbAutomaton:
    """Affine shift: a fresh accepting sink takes initial mass ``lam``.

    The new acceptance probability is lam + (1 - lam) * old, so the
    threshold-lam language equals the old positive-semantics language.
    """
    if not (0 < lam < 1):
        raise InvalidThreshold(f"lambda must be in (0,1), got {lam}")
    q_acc = fresh_name("q_acc", pba.states)
    delta = dict(pba.delta)
    for a in pba.alphabet:
        delta[(q_acc, a, q_acc)] = ONE
    mu0 = {q: (1 - lam) * pr for q, pr in pba.mu0.items() if pr > 0}
    mu0[q_acc] = lam
    return ProbAutomaton(
        name=f"pos2th({pba.name})",
        states=pba.states + (q_acc,),
        alphabet=pba.alphabet,
        delta=delta,
        mu0=mu0,
        accepting=frozenset(pba.accepting | {q_acc}),
        kind=pba.kind,
        rej_sink=pba.rej_sink,
    ).validate()


def pca_to_pwa(pca: ProbAutomaton) -> ProbAutomaton:
    """Weak automaton for the positive language of a co-Buechi automaton.

    A guess copy halves every edge to also enter a verify copy in which
    all states accept but edges into bad (co-Buechi) states drain to a
    rejecting sink; staying in the verify copy forever is exactly
    realizing a run that stops visiting bad states.
    """
    if pca.kind != PK_COBUCHI:
        raise KindMismatch("pca_to_pwa expects a co-Buechi automaton")
    half = Fraction(1, 2)

    def g(q: str) -> str:
        return f"{q}^g"

    def v(q: str) -> str:
        return f"{q}^v"

    sink = fresh_name("q_rej", [g(q) for q in pca.states] + [v(q) for q in pca.states])
    states = tuple(g(q) for q in pca.states) + tuple(v(q) for q in pca.states) + (sink,)
    delta: dict[tuple[str, str, str], Fraction] = {}
    for p in pca.states:
        for a in pca.alphabet:
            dist = pca.dist(p, a)
            for q, pr in dist.items():
                delta[(g(p), a, g(q))] = half * pr
                delta[(g(p), a, v(q))] = half * pr
            good = ZERO
            for q, pr in dist.items():
                if q not in pca.accepting:
                    delta[(v(p), a, v(q))] = pr
                    good += pr
            if good < ONE:
                delta[(v(p), a, sink)] = ONE - good
    for a in pca.alphabet:
        delta[(sink, a, sink)] = ONE
    mu0 = {g(q): pr for q, pr in pca.mu0.items() if pr > 0}
    return ProbAutomaton(
        name=f"pwa({pca.name})",
        states=states,
        alphabet=pca.alphabet,
        delta=delta,
        mu0=mu0,
        accepting=frozenset(v(q) for q in pca.states),
        kind=PK_WEAK,
        rej_sink=sink,
    ).validate()


def complement_pwa(pwa: ProbAutomaton) -> ProbAutomaton:
    """Invert accepting states of a weak automaton.

    Every run of a weak automaton settles into a single SCC and is
    accepting for exactly one of F, Q \\ F, so acceptance probabilities of
    the complement sum with the original to exactly 1 (the dual semantics
    swap >0 and =1).  The old rejecting sink becomes accepting.
    """
    if not is_weak(pwa):
        raise KindMismatch("complement_pwa expects a weak automaton")
    return ProbAutomaton(
        name=f"complement({pwa.name})",
        states=pwa.states,
        alphabet=pwa.alphabet,
        delta=dict(pwa.delta),
        mu0=dict(pwa.mu0),
        accepting=frozenset(set(pwa.states) - pwa.accepting),
        kind=PK_WEAK,
        rej_sink=None,
    ).validate()


def pfa_to_pwa_value1(pfa: ProbAutomaton) -> ProbAutomaton:
    """Weak automaton whose almost-sure language encodes the value-1 behaviour
    of a finite-word automaton.

    A fresh restart symbol is added: from accepting states it restarts the
    automaton on the initial distribution, from non-accepting states it
    leads to a waiting state which flips a fair coin towards the unique
    accepting sink on each further restart symbol.  (The construction's
    extra letter is rendered as ``hash`` because ``#`` starts comments in
    the file format.)
    """
    if pfa.kind != PK_FINITE:
        raise KindMismatch("pfa_to_pwa_value1 expects a finite-word automaton")
    hash_sym = fresh_name("hash", pfa.alphabet)
    q_hash = fresh_name("q_hash", pfa.states)
    q_acc = fresh_name("q_acc", pfa.states + (q_hash,))
    half = Fraction(1, 2)
    delta = dict(pfa.delta)
    for p in pfa.states:
        if p in pfa.accepting:
            for q, pr in pfa.mu0.items():
                if pr > 0:
                    delta[(p, hash_sym, q)] = pr
        else:
            delta[(p, hash_sym, q_hash)] = ONE
    for x in pfa.alphabet:
        delta[(q_hash, x, q_hash)] = ONE
        delta[(q_acc, x, q_acc)] = ONE
    delta[(q_hash, hash_sym, q_hash)] = half
    delta[(q_hash, hash_sym, q_acc)] = half
    delta[(q_acc, hash_sym, q_acc)] = ONE
    return ProbAutomaton(
        name=f"value1({pfa.name})",
        states=pfa.states + (q_hash, q_acc),
        alphabet=pfa.alphabet + (hash_sym,),
        delta=delta,
        mu0=dict(pfa.mu0),
        accepting=frozenset({q_acc}),
        kind=PK_WEAK,
        rej_sink=None,
    ).validate()
