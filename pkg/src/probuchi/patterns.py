"""Structural ambiguity patterns and the derived classification.

The four patterns on a trimmed automaton:

* IDA: states p != q and a word v with p -v-> p, p -v-> q and q -v-> q.
* IDA_F: an IDA pattern whose q is accepting.
* EDA: a state p with two different paths p -v-> p on the same v.
* EDA_F: an EDA pattern whose p is accepting.

Their absence stratifies the ambiguity of the automaton: no IDA means
finitely ambiguous; no EDA and no IDA_F polynomially; no IDA_F at most
exponentially; no EDA_F at most countably; otherwise uncountably.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    ACC_BUCHI,
    NondetAutomaton,
    ProbAutomaton,
    UltimatelyPeriodicWord,
    is_weak as _is_weak,
    tarjan_scc,
    trim,
    underlying_nba,
    word,
)
from .errors import EmptyAutomaton, KindMismatch

PATTERN_IDA = "IDA"
PATTERN_IDA_F = "IDA_F"
PATTERN_EDA = "EDA"
PATTERN_EDA_F = "EDA_F"

DEGREE_FINITE = "finite"
DEGREE_POLYNOMIAL = "polynomial"
DEGREE_EXPONENTIAL = "exponential"
DEGREE_COUNTABLE = "countable"
DEGREE_UNCOUNTABLE = "uncountable"


@dataclass(frozen=True)
class PatternWitness:
    pattern: str
    p: str
    q: str | None
    v: tuple[str, ...]

    def __str__(self) -> str:
        states = f"p={self.p}" + (f", q={self.q}" if self.q is not None else "")
        return f"{self.pattern}({states}, v={','.join(self.v)})"


def _trimmed_nba(aut: NondetAutomaton) -> NondetAutomaton | None:
    """Trim, mapping the empty-language case to None."""
    try:
        return trim(aut)
    except EmptyAutomaton:
        return None


def find_ida(
    nba: NondetAutomaton, require_accepting_q: bool = False
) -> PatternWitness | None:
    """Search the synchronized triple product for (p,p,q) ->+ (p,q,q).

    A path of the product on identical letters realizes the three loops
    p -v-> p, p -v-> q and q -v-> q simultaneously; the witness word is
    read off the breadth-first search parents, so it is the shortest one
    for the first (p, q) pair in declaration order.
    """
    idx = nba.state_index
    candidates_q = [
        q for q in nba.states if not require_accepting_q or q in nba.accepting
    ]
    for p in nba.states:
        for q in candidates_q:
            if p == q:
                continue
            start = (p, p, q)
            target = (p, q, q)
            parent: dict = {start: None}
            queue = [start]
            head = 0
            found = False
            while head < len(queue) and not found:
                node = queue[head]
                head += 1
                x, y, z = node
                for a in nba.alphabet:
                    if found:
                        break
                    xs = nba.successors(x, a)
                    ys = nba.successors(y, a)
                    zs = nba.successors(z, a)
                    for x2 in xs:
                        for y2 in ys:
                            for z2 in zs:
                                nxt = (x2, y2, z2)
                                if nxt in parent:
                                    continue
                                parent[nxt] = (node, a)
                                if nxt == target:
                                    found = True
                                queue.append(nxt)
            if found:
                symbols = []
                cur = target
                while parent[cur] is not None:
                    prev, a = parent[cur]
                    symbols.append(a)
                    cur = prev
                symbols.reverse()
                pat = PATTERN_IDA_F if require_accepting_q else PATTERN_IDA
                return PatternWitness(pat, p, q, tuple(symbols))
    return None


def find_eda(
    nba: NondetAutomaton, require_accepting_p: bool = False
) -> PatternWitness | None:
    """Search the flagged pair product for (p,p,0) ->+ (p,p,1).

    The bit is raised once the two tracks occupy different states, which
    is exactly when two paths over the same word have diverged.
    """
    candidates = [
        p for p in nba.states if not require_accepting_p or p in nba.accepting
    ]
    for p in candidates:
        start = (p, p, False)
        target = (p, p, True)
        parent: dict = {start: None}
        queue = [start]
        head = 0
        found = False
        while head < len(queue) and not found:
            node = queue[head]
            head += 1
            x, y, bit = node
            for a in nba.alphabet:
                if found:
                    break
                for x2 in nba.successors(x, a):
                    for y2 in nba.successors(y, a):
                        nxt = (x2, y2, bit or (x2 != y2))
                        if nxt in parent:
                            continue
                        parent[nxt] = (node, a)
                        if nxt == target:
                            found = True
                        queue.append(nxt)
        if found:
            symbols = []
            cur = target
            while parent[cur] is not None:
                prev, a = parent[cur]
                symbols.append(a)
                cur = prev
            symbols.reverse()
            pat = PATTERN_EDA_F if require_accepting_p else PATTERN_EDA
            return PatternWitness(pat, p, None, tuple(symbols))
    return None


def _count_paths_capped(nba: NondetAutomaton, source: str, v: tuple[str, ...]):
    """Path counts from `source` along word v, capped at 2."""
    counts = {source: 1}
    for a in v:
        nxt: dict[str, int] = {}
        for s, c in counts.items():
            for t in nba.successors(s, a):
                nxt[t] = min(2, nxt.get(t, 0) + c)
        counts = nxt
    return counts


def verify_witness(nba: NondetAutomaton, wit: PatternWitness) -> bool:
    """Replay a witness word and re-check the claimed loops."""
    if not wit.v:
        return False
    if wit.pattern in (PATTERN_IDA, PATTERN_IDA_F):
        if wit.q is None or wit.p == wit.q:
            return False
        if wit.pattern == PATTERN_IDA_F and wit.q not in nba.accepting:
            return False
        from_p = _count_paths_capped(nba, wit.p, wit.v)
        from_q = _count_paths_capped(nba, wit.q, wit.v)
        return (
            from_p.get(wit.p, 0) >= 1
            and from_p.get(wit.q, 0) >= 1
            and from_q.get(wit.q, 0) >= 1
        )
    if wit.pattern in (PATTERN_EDA, PATTERN_EDA_F):
        if wit.pattern == PATTERN_EDA_F and wit.p not in nba.accepting:
            return False
        return _count_paths_capped(nba, wit.p, wit.v).get(wit.p, 0) >= 2
    return False


# ---------------------------------------------------------------------------
# Unambiguity
# ---------------------------------------------------------------------------


def is_unambiguous(
    nba: NondetAutomaton,
) -> tuple[bool, UltimatelyPeriodicWord | None]:
    """At most one accepting run on every word?

    Two distinct accepting runs exist iff the flagged pair product has a
    reachable cycle with the divergence bit set on which both tracks hit
    their Buechi set; the witness lasso is reconstructed from that cycle.
    """
    if nba.acc != ACC_BUCHI:
        raise KindMismatch("unambiguity check expects Buechi acceptance")
    if not nba.initials:
        return True, None
    idx = nba.state_index
    initial = sorted(
        ((p, q, p != q) for p in nba.initials for q in nba.initials),
        key=lambda v: (idx[v[0]], idx[v[1]]),
    )
    adjacency: dict = {}
    seen = set(initial)
    order = list(initial)
    stack = list(initial)
    while stack:
        node = stack.pop()
        x, y, bit = node
        succs = []
        for a in nba.alphabet:
            for x2 in nba.successors(x, a):
                for y2 in nba.successors(y, a):
                    succs.append((a, (x2, y2, bit or (x2 != y2))))
        adjacency[node] = tuple(succs)
        for _a, s in succs:
            if s not in seen:
                seen.add(s)
                order.append(s)
                stack.append(s)

    plain = {v: tuple(s for _a, s in adjacency[v]) for v in order}
    for comp in tarjan_scc(order, plain):
        members = set(comp)
        nontrivial = len(comp) > 1 or any(v in plain[v] for v in comp)
        if not nontrivial:
            continue
        sample = comp[0]
        if not sample[2]:
            continue
        first = [v for v in comp if v[0] in nba.accepting]
        second = [v for v in comp if v[1] in nba.accepting]
        if not first or not second:
            continue
        n1 = min(first, key=lambda v: (idx[v[0]], idx[v[1]]))
        n2 = min(second, key=lambda v: (idx[v[0]], idx[v[1]]))

        def labeled(v):
            return iter(adjacency[v])

        from .analysis import _bfs_path, _cycle_through

        start = _bfs_path(initial, [n1], labeled)
        assert start is not None
        prefix = start[1]
        if n1 == n2:
            cycle = _cycle_through(n1, labeled, members)
            assert cycle is not None
            period = cycle
        else:
            leg1 = _bfs_path([n1], [n2], labeled, restrict=members)
            leg2 = _bfs_path([n2], [n1], labeled, restrict=members)
            assert leg1 is not None and leg2 is not None
            period = leg1[1] + leg2[1]
        return False, word(prefix, period)
    return True, None


# ---------------------------------------------------------------------------
# HPBA / SPBA / flat
# ---------------------------------------------------------------------------


def is_hpba(pba: ProbAutomaton) -> tuple[bool, tuple[str, str, tuple[str, ...]] | None]:
    """Hierarchical check: unique initial state, no intra-SCC fork.

    Successors outside the source's SCC can always be ranked strictly
    higher by a topological numbering, while two same-letter successors
    inside it would be forced onto the source's own rank.  Returns the
    offending (state, symbol, successors) when the check fails.
    """
    pba = trim(pba)
    if len(pba.support()) != 1:
        return False, None
    comps = tarjan_scc(pba.states, pba.adjacency)
    comp_of = {q: i for i, c in enumerate(comps) for q in c}
    for (p, a) in sorted(
        pba.dist_map, key=lambda pa: (pba.state_index[pa[0]], pba.alphabet.index(pa[1]))
    ):
        inside = tuple(
            q for q in pba.positive_successors(p, a) if comp_of[q] == comp_of[p]
        )
        if len(inside) >= 2:
            return False, (p, a, tuple(pba.positive_successors(p, a)))
    return True, None


def is_spba(pba: ProbAutomaton) -> bool:
    """Two-level hierarchical automaton with all accepting states on level 0.

    Enumerates monotone 2-colourings of the SCC condensation with the
    accepting components pinned to level 0 and checks that every state has
    at most one same-level successor per symbol.
    """
    pba = trim(pba)
    if len(pba.support()) != 1:
        return False
    comps = [frozenset(c) for c in tarjan_scc(pba.states, pba.adjacency)]
    comp_of = {q: i for i, c in enumerate(comps) for q in c}
    m = len(comps)
    dag_edges = set()
    for p in pba.states:
        for q in pba.adjacency[p]:
            if comp_of[p] != comp_of[q]:
                dag_edges.add((comp_of[p], comp_of[q]))
    forced_zero = {comp_of[q] for q in pba.accepting}

    for mask in range(1 << m):
        level = [(mask >> i) & 1 for i in range(m)]
        if any(level[i] == 1 for i in forced_zero):
            continue
        if any(level[i] > level[j] for (i, j) in dag_edges):
            continue
        ok = True
        for (p, a) in pba.dist_map:
            same = [
                q
                for q in pba.positive_successors(p, a)
                if level[comp_of[q]] == level[comp_of[p]]
            ]
            if len(same) >= 2:
                ok = False
                break
        if ok:
            return True
    return False


def is_flat(pba: ProbAutomaton) -> bool:
    """No EDA pattern in the trimmed underlying automaton."""
    und = underlying_nba(trim(pba))
    return find_eda(und, require_accepting_p=False) is None


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


@dataclass
class AmbiguityClass:
    degree: str
    ida: PatternWitness | None
    ida_f: PatternWitness | None
    eda: PatternWitness | None
    eda_f: PatternWitness | None
    unambiguous: bool
    flat: bool
    weak: bool
    hpba: bool | None
    spba: bool | None

    @property
    def has_ida(self) -> bool:
        return self.ida is not None

    @property
    def has_ida_f(self) -> bool:
        return self.ida_f is not None

    @property
    def has_eda(self) -> bool:
        return self.eda is not None

    @property
    def has_eda_f(self) -> bool:
        return self.eda_f is not None


def _degree(ida, ida_f, eda, eda_f) -> str:
    if eda_f is not None:
        return DEGREE_UNCOUNTABLE
    if ida_f is not None:
        return DEGREE_COUNTABLE
    if eda is not None:
        return DEGREE_EXPONENTIAL
    if ida is not None:
        return DEGREE_POLYNOMIAL
    return DEGREE_FINITE


def classify(aut: NondetAutomaton | ProbAutomaton) -> AmbiguityClass:
    """Pattern-based ambiguity class plus the structural flags.

    Probabilistic inputs are trimmed and mapped through their underlying
    automaton first; classical inputs are trimmed.  An automaton with no
    useful state counts as unambiguous, flat and finitely ambiguous.
    """
    hpba = spba = None
    if isinstance(aut, ProbAutomaton):
        trimmed = trim(aut)
        weak = _is_weak(trimmed)
        und = underlying_nba(trimmed)
        if not und.states:
            und = None
        hpba = is_hpba(trimmed)[0]
        spba = is_spba(trimmed)
    else:
        und = _trimmed_nba(aut)
        weak = _is_weak(aut)
    if und is None or not und.initials:
        return AmbiguityClass(
            degree=DEGREE_FINITE,
            ida=None,
            ida_f=None,
            eda=None,
            eda_f=None,
            unambiguous=True,
            flat=True,
            weak=weak,
            hpba=hpba,
            spba=spba,
        )
    ida = find_ida(und, require_accepting_q=False)
    ida_f = find_ida(und, require_accepting_q=True)
    eda = find_eda(und, require_accepting_p=False)
    eda_f = find_eda(und, require_accepting_p=True)
    if und.acc == ACC_BUCHI:
        unamb = is_unambiguous(und)[0]
    else:
        unamb = eda_f is None and ida_f is None  # conservative for co-Buechi
    return AmbiguityClass(
        degree=_degree(ida, ida_f, eda, eda_f),
        ida=ida,
        ida_f=ida_f,
        eda=eda,
        eda_f=eda_f,
        unambiguous=unamb,
        flat=eda is None,
        weak=weak,
        hpba=hpba,
        spba=spba,
    )
