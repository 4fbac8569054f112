"""Ground-truth semantics on ultimately periodic words.

The central object is the lasso chain: unfolding a probabilistic automaton
over the positions of ``u v^omega`` yields a finite Markov chain, and
acceptance probability reduces to exact reachability of its bottom SCCs.
All probability computations are over ``fractions.Fraction``; nothing here
uses floating point except the explicitly approximate Monte-Carlo sampler.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    ACC_BUCHI,
    ACC_COBUCHI,
    ACC_GNBA,
    ACC_PARITY,
    NondetAutomaton,
    ONE,
    PK_COBUCHI,
    PK_FINITE,
    ProbAutomaton,
    UltimatelyPeriodicWord,
    ZERO,
    tarjan_scc,
    word,
)
from .errors import KindMismatch, PreconditionError, ValidationError


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------


def solve_linear_system(
    matrix: list[list[Fraction]], rhs: list[Fraction]
) -> list[Fraction]:
    """Gauss-Jordan over rationals.

    Pivoting picks the column entry maximizing |numerator * denominator|,
    which keeps intermediate fractions from exploding on chain systems.
    """
    n = len(matrix)
    rows = [list(matrix[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        best, pivot = -1, None
        for r in range(col, n):
            v = rows[r][col]
            if v != 0:
                mag = abs(v.numerator * v.denominator)
                if mag > best:
                    best, pivot = mag, r
        if pivot is None:
            raise ValidationError("singular linear system")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        pv = rows[col][col]
        rows[col] = [x / pv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [rows[i][n] for i in range(n)]


def _reach_probability(
    nodes: list,
    edges: dict,
    targets: set,
) -> dict:
    """Probability of eventually hitting `targets`, solved SCC by SCC.

    `edges[v]` maps successor nodes to rational probabilities.  Nodes in a
    bottom SCC have value 1 (target) or 0 (non-target); transient values
    are obtained by elimination in reverse topological order, so only the
    small systems of the transient SCCs are ever solved densely.
    """
    values: dict = {}
    adjacency = {v: tuple(edges[v]) for v in nodes}
    comps = tarjan_scc(nodes, adjacency)  # reverse topological order
    comp_of = {}
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    bottom = [True] * len(comps)
    for v in nodes:
        for w in edges[v]:
            if comp_of[w] != comp_of[v]:
                bottom[comp_of[v]] = False
    for i, comp in enumerate(comps):
        if bottom[i]:
            val = ONE if comp[0] in targets else ZERO
            for v in comp:
                values[v] = val
            continue
        # x_v = sum_{w in comp} P(v,w) x_w + known_v
        index = {v: j for j, v in enumerate(comp)}
        size = len(comp)
        mat = [[ZERO] * size for _ in range(size)]
        known = [ZERO] * size
        for v in comp:
            j = index[v]
            mat[j][j] += ONE
            for w, pr in edges[v].items():
                if w in index:
                    mat[j][index[w]] -= pr
                else:
                    known[j] += pr * values[w]
        sol = solve_linear_system(mat, known)
        for v in comp:
            values[v] = sol[index[v]]
    return values


# ---------------------------------------------------------------------------
# Lasso chain
# ---------------------------------------------------------------------------


@dataclass
class LassoChain:
    """Finite unfolding of a probabilistic automaton over ``u v^omega``.

    Nodes are (state, position) pairs; positions past the prefix advance
    cyclically through the period, so every node has a total outgoing
    distribution and the chain is a genuine Markov chain.
    """

    word: UltimatelyPeriodicWord
    nodes: list[tuple[str, int]]
    edges: dict[tuple[str, int], dict[tuple[str, int], Fraction]]
    initial: dict[tuple[str, int], Fraction]
    accepting_nodes: frozenset[tuple[str, int]]
    fork_nodes: frozenset[tuple[str, int]]

    def bottom_sccs(self) -> list[list[tuple[str, int]]]:
        adjacency = {v: tuple(self.edges[v]) for v in self.nodes}
        comps = tarjan_scc(self.nodes, adjacency)
        comp_of = {}
        for i, comp in enumerate(comps):
            for v in comp:
                comp_of[v] = i
        bottom = [True] * len(comps)
        for v in self.nodes:
            for w in self.edges[v]:
                if comp_of[w] != comp_of[v]:
                    bottom[comp_of[v]] = False
        return [comp for i, comp in enumerate(comps) if bottom[i]]


def build_lasso_chain(pba: ProbAutomaton, w: UltimatelyPeriodicWord) -> LassoChain:
    w.check_alphabet(pba.alphabet)
    syms = w.symbols()
    n = len(syms)
    plen = len(w.prefix)

    def nxt(i: int) -> int:
        return i + 1 if i + 1 < n else plen

    initial = {(q, 0): pr for q, pr in pba.mu0.items() if pr > 0}
    nodes: list[tuple[str, int]] = []
    edges: dict = {}
    seen = set(initial)
    stack = sorted(initial, key=lambda v: pba.state_index[v[0]])
    order = list(stack)
    while stack:
        v = stack.pop()
        q, i = v
        dist = pba.dist(q, syms[i])
        edges[v] = {(q2, nxt(i)): pr for q2, pr in dist.items()}
        for w2 in edges[v]:
            if w2 not in seen:
                seen.add(w2)
                order.append(w2)
                stack.append(w2)
    nodes = order
    accepting = frozenset(v for v in nodes if v[0] in pba.accepting)
    fork = frozenset(
        v for v in nodes if len(pba.dist(v[0], syms[v[1]])) >= 2
    )
    return LassoChain(
        word=w,
        nodes=nodes,
        edges=edges,
        initial=initial,
        accepting_nodes=accepting,
        fork_nodes=fork,
    )


def _target_bscc_nodes(pba: ProbAutomaton, chain: LassoChain) -> set:
    """Nodes of bottom SCCs in which trajectories are accepting.

    Inside a bottom SCC every node recurs almost surely, so a Buechi (or
    weak) run accepts iff its bottom SCC contains an accepting node, and a
    co-Buechi run accepts iff it contains none.
    """
    want_accepting = pba.kind != PK_COBUCHI
    targets: set = set()
    for comp in chain.bottom_sccs():
        has_acc = any(v in chain.accepting_nodes for v in comp)
        if has_acc == want_accepting:
            targets.update(comp)
    return targets


def acceptance_probability(pba: ProbAutomaton, w: UltimatelyPeriodicWord) -> Fraction:
    """Exact probability that the automaton accepts ``u v^omega``."""
    if pba.kind == PK_FINITE:
        raise KindMismatch("finite-word automaton: use pfa_acceptance")
    chain = build_lasso_chain(pba, w)
    targets = _target_bscc_nodes(pba, chain)
    values = _reach_probability(chain.nodes, chain.edges, targets)
    return sum((pr * values[v] for v, pr in chain.initial.items()), ZERO)


def pfa_acceptance(pfa: ProbAutomaton, u: tuple[str, ...] | list[str]) -> Fraction:
    """Probability that a finite-word automaton accepts the finite word."""
    if pfa.kind != PK_FINITE:
        raise KindMismatch("pfa_acceptance expects a finite-word automaton")
    mu = {q: pr for q, pr in pfa.mu0.items() if pr > 0}
    for a in u:
        if a not in pfa.alphabet:
            raise ValidationError(f"word symbol {a!r} not in the automaton alphabet")
        nxt: dict[str, Fraction] = {}
        for p, pr in mu.items():
            for q, tp in pfa.dist(p, a).items():
                nxt[q] = nxt.get(q, ZERO) + pr * tp
        mu = nxt
    return sum((pr for q, pr in mu.items() if q in pfa.accepting), ZERO)


# ---------------------------------------------------------------------------
# Lasso membership for classical automata
# ---------------------------------------------------------------------------


def _lasso_product(aut: NondetAutomaton, w: UltimatelyPeriodicWord):
    """Reachable product of the automaton with the position graph."""
    w.check_alphabet(aut.alphabet)
    syms = w.symbols()
    n = len(syms)
    plen = len(w.prefix)

    def nxt(i: int) -> int:
        return i + 1 if i + 1 < n else plen

    initial = sorted(
        ((q, 0) for q in aut.initials), key=lambda v: aut.state_index[v[0]]
    )
    adjacency: dict = {}
    seen = set(initial)
    stack = list(initial)
    order = list(initial)
    while stack:
        v = stack.pop()
        q, i = v
        succs = [(q2, nxt(i)) for q2 in aut.successors(q, syms[i])]
        adjacency[v] = tuple(succs)
        for w2 in succs:
            if w2 not in seen:
                seen.add(w2)
                order.append(w2)
                stack.append(w2)
    return order, adjacency


def _nontrivial_sccs(nodes, adjacency):
    result = []
    for comp in tarjan_scc(nodes, adjacency):
        members = set(comp)
        if len(comp) > 1 or any(v in adjacency[v] for v in comp):
            result.append(members)
    return result


def member_nondet(aut: NondetAutomaton, w: UltimatelyPeriodicWord) -> bool:
    """Does some run on ``u v^omega`` satisfy the acceptance condition?

    Implemented as accepting-cycle search in the product with the position
    graph; supports Buechi, co-Buechi, generalized Buechi and parity.
    """
    if not aut.initials:
        return False
    nodes, adjacency = _lasso_product(aut, w)
    if aut.acc == ACC_BUCHI:
        for scc in _nontrivial_sccs(nodes, adjacency):
            if any(v[0] in aut.accepting for v in scc):
                return True
        return False
    if aut.acc == ACC_GNBA:
        for scc in _nontrivial_sccs(nodes, adjacency):
            if all(any(v[0] in fs for v in scc) for fs in aut.acc_sets):
                return True
        return False
    if aut.acc == ACC_COBUCHI:
        # a run accepting co-Buechi eventually cycles among non-F states
        allowed = [v for v in nodes if v[0] not in aut.accepting]
        sub = {
            v: tuple(s for s in adjacency[v] if s[0] not in aut.accepting)
            for v in allowed
        }
        return bool(_nontrivial_sccs(allowed, sub))
    if aut.acc == ACC_PARITY:
        pri = aut.priorities
        for d in sorted({pri[q] for q in aut.states}):
            if d % 2 != 0:
                continue
            allowed = [v for v in nodes if pri[v[0]] >= d]
            sub = {
                v: tuple(s for s in adjacency[v] if pri[s[0]] >= d) for v in allowed
            }
            for scc in _nontrivial_sccs(allowed, sub):
                if any(pri[v[0]] == d for v in scc):
                    return True
        return False
    raise KindMismatch(f"membership not defined for acceptance {aut.acc!r}")


def count_two_accepting_runs(nba: NondetAutomaton, w: UltimatelyPeriodicWord) -> bool:
    """True iff the word has two distinct accepting runs.

    Pair product over the lasso graph with a divergence bit; two accepting
    runs exist iff a cycle with the bit set is reachable on which both
    tracks meet their Buechi sets.
    """
    if nba.acc != ACC_BUCHI:
        raise KindMismatch("count_two_accepting_runs expects Buechi acceptance")
    if not nba.initials:
        return False
    w.check_alphabet(nba.alphabet)
    syms = w.symbols()
    n = len(syms)
    plen = len(w.prefix)

    def nxt(i: int) -> int:
        return i + 1 if i + 1 < n else plen

    idx = nba.state_index
    initial = sorted(
        ((p, q, p != q, 0) for p in nba.initials for q in nba.initials),
        key=lambda v: (idx[v[0]], idx[v[1]]),
    )
    seen = set(initial)
    stack = list(initial)
    order = list(initial)
    adjacency: dict = {}
    while stack:
        v = stack.pop()
        p, q, bit, i = v
        succs = []
        for p2 in nba.successors(p, syms[i]):
            for q2 in nba.successors(q, syms[i]):
                succs.append((p2, q2, bit or (p2 != q2), nxt(i)))
        adjacency[v] = tuple(succs)
        for s in succs:
            if s not in seen:
                seen.add(s)
                order.append(s)
                stack.append(s)
    for scc in _nontrivial_sccs(order, adjacency):
        sample = next(iter(scc))
        if not sample[2]:
            continue  # the divergence bit is constant within an SCC
        if any(v[0] in nba.accepting for v in scc) and any(
            v[1] in nba.accepting for v in scc
        ):
            return True
    return False


# ---------------------------------------------------------------------------
# Emptiness and non-universality witnesses
# ---------------------------------------------------------------------------


def _bfs_path(sources, targets, adjacency_labeled, restrict=None):
    """Shortest labeled path; returns (end_node, symbols) or None.

    `adjacency_labeled(v)` yields (symbol, successor) in deterministic
    order; `restrict` optionally limits the explored nodes.
    """
    targets = set(targets)
    parent: dict = {}
    queue = list(sources)
    seen = set(queue)
    for s in queue:
        if s in targets:
            return s, []
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        for sym, w2 in adjacency_labeled(v):
            if restrict is not None and w2 not in restrict:
                continue
            if w2 in seen:
                continue
            seen.add(w2)
            parent[w2] = (v, sym)
            if w2 in targets:
                path = []
                cur = w2
                while cur in parent:
                    prev, sym2 = parent[cur]
                    path.append(sym2)
                    cur = prev
                path.reverse()
                return w2, path
            queue.append(w2)
    return None


def _cycle_through(node, adjacency_labeled, restrict):
    """Shortest nonempty labeled cycle from `node` back to itself."""
    starts = []
    for sym, w2 in adjacency_labeled(node):
        if w2 in restrict:
            if w2 == node:
                return [sym]
            starts.append((sym, w2))
    for sym, w2 in starts:
        found = _bfs_path([w2], [node], adjacency_labeled, restrict)
        if found is not None:
            return [sym] + found[1]
    return None


def is_empty_nba(nba: NondetAutomaton) -> UltimatelyPeriodicWord | None:
    """Witness lasso if the language is nonempty, else None.

    Searches for a reachable nontrivial SCC hitting the acceptance sets and
    stitches the witness from BFS paths; the caller can replay it through
    :func:`member_nondet`.
    """
    if nba.acc not in (ACC_BUCHI, ACC_GNBA):
        raise KindMismatch("emptiness check expects (generalized) Buechi")
    if not nba.initials or not nba.states:
        return None
    acc_sets = nba.acc_sets if nba.acc == ACC_GNBA else (nba.accepting,)
    idx = nba.state_index

    def labeled(v):
        for a in nba.alphabet:
            for w2 in nba.successors(v, a):
                yield a, w2

    reachable = set()
    stack = sorted(nba.initials, key=idx.__getitem__)
    reachable.update(stack)
    while stack:
        p = stack.pop()
        for q in nba.adjacency[p]:
            if q not in reachable:
                reachable.add(q)
                stack.append(q)
    sub_nodes = sorted(reachable, key=idx.__getitem__)
    sub_adj = {p: tuple(q for q in nba.adjacency[p] if q in reachable) for p in sub_nodes}
    for scc in _nontrivial_sccs(sub_nodes, sub_adj):
        if not all(scc & fs for fs in acc_sets):
            continue
        reps = [
            min(scc & fs, key=idx.__getitem__) for fs in acc_sets
        ]
        start = reps[0]
        found = _bfs_path(
            sorted(nba.initials, key=idx.__getitem__), [start], labeled
        )
        assert found is not None
        prefix = found[1]
        period: list[str] = []
        cur = start
        for target in reps[1:]:
            leg = _bfs_path([cur], [target], labeled, restrict=scc)
            assert leg is not None
            period.extend(leg[1])
            cur = target
        back = _bfs_path([cur], [start], labeled, restrict=scc)
        assert back is not None
        period.extend(back[1])
        if not period:
            cycle = _cycle_through(start, labeled, scc)
            assert cycle is not None
            period = cycle
        return word(prefix, period)
    return None


MODE_ALL_RUNS = "all-runs"
MODE_FLAT = "flat"


def _check_almost_sure_mode(pba: ProbAutomaton, mode: str) -> None:
    from .errors import NotExpAmbiguous, NotFlat
    from .patterns import find_eda, find_ida
    from .core import trim, underlying_nba

    und = underlying_nba(trim(pba))
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


def non_universal_witness_almost_sure(
    pba: ProbAutomaton, mode: str
) -> UltimatelyPeriodicWord | None:
    """A word rejected under almost-sure semantics, or None if universal.

    A rejecting run is guessed structurally: either the rejecting sink is
    reachable, or a reachable cycle avoids the accepting set -- in flat
    mode the cycle must consist of probability-1 edges so that the guessed
    run is limit-deterministic.  The returned witness is re-checked against
    the exact oracle.
    """
    from .core import trim

    _check_almost_sure_mode(pba, mode)
    pba = trim(pba)
    idx = pba.state_index
    live = [q for q in pba.states if q != pba.rej_sink]

    def labeled(p):
        for a in pba.alphabet:
            for q in pba.positive_successors(p, a):
                yield a, q

    witness = None
    cycle_nodes = [q for q in live if q not in pba.accepting]
    if mode == MODE_FLAT:
        sub = {
            p: tuple(
                q
                for a in pba.alphabet
                for q, pr in sorted(
                    pba.dist(p, a).items(), key=lambda kv: idx[kv[0]]
                )
                if pr == ONE and q in cycle_nodes
            )
            for p in cycle_nodes
        }

        def cycle_labeled(p):
            for a in pba.alphabet:
                for q, pr in sorted(pba.dist(p, a).items(), key=lambda kv: idx[kv[0]]):
                    if pr == ONE and q in cycle_nodes:
                        yield a, q

    else:
        sub = {
            p: tuple(q for q in pba.adjacency[p] if q in cycle_nodes)
            for p in cycle_nodes
        }

        def cycle_labeled(p):
            for a in pba.alphabet:
                for q in pba.positive_successors(p, a):
                    if q in cycle_nodes:
                        yield a, q

    sccs = _nontrivial_sccs(cycle_nodes, sub)
    if sccs:
        members = sorted(set().union(*sccs), key=idx.__getitem__)
        start = sorted(pba.support(), key=idx.__getitem__)
        found = _bfs_path(start, members, labeled)
        if found is not None:
            node, prefix = found
            scc = next(s for s in sccs if node in s)
            cycle = _cycle_through(node, cycle_labeled, scc)
            assert cycle is not None
            witness = word(prefix, cycle)
    if witness is None and pba.rej_sink is not None:
        found = _bfs_path(
            sorted(pba.support(), key=idx.__getitem__), [pba.rej_sink], labeled
        )
        if found is not None:
            witness = word(found[1], (pba.alphabet[0],))
    if witness is not None:
        value = acceptance_probability(pba, witness)
        if value >= ONE:
            raise ValidationError(
                f"internal error: witness {witness} has acceptance probability 1"
            )
    return witness


# ---------------------------------------------------------------------------
# Myhill-Nerode supports
# ---------------------------------------------------------------------------


@dataclass
class SupportClassSet:
    """All state supports reachable from the initial support."""

    supports: tuple[frozenset[str], ...]

    def __len__(self) -> int:
        return len(self.supports)

    def __contains__(self, s) -> bool:
        return frozenset(s) in set(self.supports)


def myhill_nerode_supports(pba: ProbAutomaton) -> SupportClassSet:
    """Fixed-point closure of supports under one-symbol successors.

    The rejecting sink is kept inside supports so that total loss of
    useful mass stays distinguishable.
    """
    idx = pba.state_index

    def key(s: frozenset[str]):
        return tuple(sorted(idx[q] for q in s))

    first = frozenset(pba.support())
    seen = {first}
    order = [first]
    queue = [first]
    while queue:
        s = queue.pop(0)
        for a in pba.alphabet:
            nxt = frozenset(
                q for p in s for q in pba.positive_successors(p, a)
            )
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    order.sort(key=key)
    order.remove(first)
    return SupportClassSet(supports=(first,) + tuple(order))


# ---------------------------------------------------------------------------
# Monte-Carlo sampler (explicitly approximate)
# ---------------------------------------------------------------------------


@dataclass
class MonteCarloResult:
    estimate: float
    stderr: float
    fork_tail_stat: float


def monte_carlo(
    pba: ProbAutomaton,
    w: UltimatelyPeriodicWord,
    runs: int,
    horizon: int,
    seed: int,
) -> MonteCarloResult:
    """Sample trajectories of the lasso chain with a seeded PRNG.

    A trajectory counts as accepting when it sits, after `horizon` steps,
    inside a bottom SCC classified accepting for the automaton kind.  The
    fork statistic is the fraction of trajectories that pass through a
    fork within the last ``10 * |period|`` steps; on flat automata it
    probes how rarely runs keep branching forever.
    """
    import numpy as np

    if runs < 1:
        raise PreconditionError("runs must be >= 1")
    if horizon < len(w.prefix) + len(w.period):
        raise PreconditionError("horizon must be at least |u| + |v|")
    chain = build_lasso_chain(pba, w)
    targets = _target_bscc_nodes(pba, chain)
    node_index = {v: i for i, v in enumerate(chain.nodes)}
    n_nodes = len(chain.nodes)
    max_deg = max(len(chain.edges[v]) for v in chain.nodes)
    cum = np.ones((n_nodes, max_deg), dtype=np.float64)
    succ = np.zeros((n_nodes, max_deg), dtype=np.int64)
    for v in chain.nodes:
        i = node_index[v]
        total = 0.0
        for j, (w2, pr) in enumerate(
            sorted(chain.edges[v].items(), key=lambda kv: node_index[kv[0]])
        ):
            total += float(pr)
            cum[i, j] = total
            succ[i, j] = node_index[w2]
        for j in range(len(chain.edges[v]), max_deg):
            succ[i, j] = succ[i, len(chain.edges[v]) - 1]
    cum[:, max_deg - 1] = np.inf  # guard against rounding at the top end
    accepting = np.zeros(n_nodes, dtype=bool)
    for v in targets:
        accepting[node_index[v]] = True
    fork = np.zeros(n_nodes, dtype=bool)
    for v in chain.fork_nodes:
        fork[node_index[v]] = True

    rng = np.random.Generator(np.random.PCG64(seed))
    init_nodes = sorted(chain.initial, key=node_index.__getitem__)
    init_probs = np.array(
        [float(chain.initial[v]) for v in init_nodes], dtype=np.float64
    )
    init_probs /= init_probs.sum()
    state = rng.choice(
        np.array([node_index[v] for v in init_nodes], dtype=np.int64),
        size=runs,
        p=init_probs,
    )
    window = min(horizon, 10 * len(w.period))
    took_fork = np.zeros(runs, dtype=bool)
    for step in range(horizon):
        if step >= horizon - window:
            took_fork |= fork[state]
        r = rng.random(runs)
        choice = (r[:, None] >= cum[state]).sum(axis=1)
        state = succ[state, choice]
    estimate = float(accepting[state].mean())
    stderr = float(np.sqrt(estimate * (1.0 - estimate) / runs))
    fork_stat = float(took_fork.mean())
    return MonteCarloResult(estimate=estimate, stderr=stderr, fork_tail_stat=fork_stat)
