"""Core data model: automata, validation, SCCs, trimming, degeneralization.

Two automaton flavors are used throughout:

* :class:`NondetAutomaton` -- classical automata with Buechi, co-Buechi,
  generalized-Buechi or parity acceptance.
* :class:`ProbAutomaton` -- probabilistic automata whose transitions carry
  exact rationals (``fractions.Fraction``); the kind tag selects Buechi,
  co-Buechi, weak or finite-word acceptance.

Both are treated as immutable after validation; every operation in this
package is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .errors import EmptyAutomaton, KindMismatch, ValidationError

# Acceptance kinds of classical automata.
ACC_BUCHI = "buchi"
ACC_COBUCHI = "cobuchi"
ACC_GNBA = "gnba"
ACC_PARITY = "parity"

# Kinds of probabilistic automata.
PK_BUCHI = "buchi"
PK_COBUCHI = "cobuchi"
PK_WEAK = "weak"
PK_FINITE = "finite"

_SYMBOL_FORBIDDEN = {"#", ":", ","}

ONE = Fraction(1)
ZERO = Fraction(0)


def validate_symbol(token: str) -> None:
    if not token:
        raise ValidationError("empty symbol token")
    if any(ch.isspace() or ch in _SYMBOL_FORBIDDEN for ch in token):
        raise ValidationError(
            f"symbol {token!r} contains whitespace or one of '#', ':', ','"
        )


def validate_state_name(name: str) -> None:
    # '=' would break 'init:'/'priorities:' lines, ';' the 'accsets:' line.
    if not name:
        raise ValidationError("empty state name")
    if any(ch.isspace() or ch in "#=" for ch in name) or name == ";":
        raise ValidationError(f"state name {name!r} is not representable in the file format")


def parse_rational(text: str) -> Fraction:
    """Parse 'n' or 'n/d' with decimal integers; floats are rejected."""
    parts = text.split("/")
    if len(parts) > 2 or not all(p.isdigit() and p != "" for p in parts):
        raise ValidationError(f"not a rational: {text!r} (expected 'n' or 'n/d')")
    if len(parts) == 1:
        return Fraction(int(parts[0]))
    num, den = int(parts[0]), int(parts[1])
    if den == 0:
        raise ValidationError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    return str(value)  # Fraction prints 'n/d' in lowest terms, 'n' for integers


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    name = base
    while name in taken:
        name += "'"
    return name


@dataclass(frozen=True)
class UltimatelyPeriodicWord:
    """The infinite word ``prefix . period^omega``."""

    prefix: tuple[str, ...]
    period: tuple[str, ...]

    def __post_init__(self):
        if not self.period:
            raise ValidationError("period must be nonempty")

    def symbols(self) -> tuple[str, ...]:
        return self.prefix + self.period

    def check_alphabet(self, alphabet: Iterable[str]) -> None:
        alpha = set(alphabet)
        for s in self.symbols():
            if s not in alpha:
                raise ValidationError(f"word symbol {s!r} not in the automaton alphabet")

    def __str__(self) -> str:
        u = ",".join(self.prefix) if self.prefix else "(empty)"
        return f"prefix={u} period={','.join(self.period)}"


def word(prefix: Iterable[str], period: Iterable[str]) -> UltimatelyPeriodicWord:
    return UltimatelyPeriodicWord(tuple(prefix), tuple(period))


@dataclass
class NondetAutomaton:
    """Classical automaton (Q, Sigma, Delta, Q0, acceptance)."""

    name: str
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    transitions: frozenset[tuple[str, str, str]]
    initials: frozenset[str]
    acc: str = ACC_BUCHI
    accepting: frozenset[str] = frozenset()  # buchi / cobuchi
    acc_sets: tuple[frozenset[str], ...] = ()  # gnba
    priorities: dict[str, int] = field(default_factory=dict)  # parity

    def validate(self, allow_empty: bool = False) -> "NondetAutomaton":
        seen = set()
        for q in self.states:
            validate_state_name(q)
            if q in seen:
                raise ValidationError(f"duplicate state {q!r}")
            seen.add(q)
        alpha = set()
        for a in self.alphabet:
            validate_symbol(a)
            if a in alpha:
                raise ValidationError(f"duplicate symbol {a!r}")
            alpha.add(a)
        if not self.states and not allow_empty:
            raise ValidationError("automaton has no states")
        if not self.initials and not allow_empty:
            raise ValidationError("initial state set is empty")
        for q in self.initials:
            if q not in seen:
                raise ValidationError(f"undeclared initial state {q!r}")
        for (p, a, q) in self.transitions:
            if p not in seen or q not in seen:
                raise ValidationError(f"transition ({p},{a},{q}) uses an undeclared state")
            if a not in alpha:
                raise ValidationError(f"transition ({p},{a},{q}) uses an undeclared symbol")
        if self.acc in (ACC_BUCHI, ACC_COBUCHI):
            for q in self.accepting:
                if q not in seen:
                    raise ValidationError(f"undeclared accepting state {q!r}")
        elif self.acc == ACC_GNBA:
            if not self.acc_sets:
                raise ValidationError("generalized Buechi automaton needs >= 1 acceptance set")
            for fs in self.acc_sets:
                for q in fs:
                    if q not in seen:
                        raise ValidationError(f"undeclared accepting state {q!r}")
        elif self.acc == ACC_PARITY:
            for q in self.states:
                if q not in self.priorities:
                    raise ValidationError(f"state {q!r} has no priority")
            for q, c in self.priorities.items():
                if q not in seen:
                    raise ValidationError(f"priority given for undeclared state {q!r}")
                if c < 1:
                    raise ValidationError(f"priority of {q!r} must be a positive integer")
        else:
            raise ValidationError(f"unknown acceptance kind {self.acc!r}")
        return self

    # -- cached views -----------------------------------------------------

    @cached_property
    def state_index(self) -> dict[str, int]:
        return {q: i for i, q in enumerate(self.states)}

    @cached_property
    def succ_map(self) -> dict[tuple[str, str], tuple[str, ...]]:
        """(state, symbol) -> successors, sorted by declaration order."""
        raw: dict[tuple[str, str], list[str]] = {}
        for (p, a, q) in self.transitions:
            raw.setdefault((p, a), []).append(q)
        idx = self.state_index
        return {k: tuple(sorted(v, key=idx.__getitem__)) for k, v in raw.items()}

    @cached_property
    def adjacency(self) -> dict[str, tuple[str, ...]]:
        raw: dict[str, set[str]] = {q: set() for q in self.states}
        for (p, _a, q) in self.transitions:
            raw[p].add(q)
        idx = self.state_index
        return {p: tuple(sorted(qs, key=idx.__getitem__)) for p, qs in raw.items()}

    def successors(self, p: str, a: str) -> tuple[str, ...]:
        return self.succ_map.get((p, a), ())

    def is_deterministic(self) -> bool:
        return len(self.initials) == 1 and all(
            len(v) <= 1 for v in self.succ_map.values()
        )

    def max_priority(self) -> int:
        return max(self.priorities.values(), default=1)


@dataclass
class ProbAutomaton:
    """Probabilistic automaton (Q, Sigma, delta, mu0, F) with exact rationals.

    ``delta`` is sparse: absent triples mean probability 0.  A designated
    ``rej_sink``, when present, must loop to itself with probability 1 on
    every symbol.
    """

    name: str
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    delta: dict[tuple[str, str, str], Fraction]
    mu0: dict[str, Fraction]
    accepting: frozenset[str]
    kind: str = PK_BUCHI
    rej_sink: str | None = None

    def validate(self) -> "ProbAutomaton":
        seen = set()
        for q in self.states:
            validate_state_name(q)
            if q in seen:
                raise ValidationError(f"duplicate state {q!r}")
            seen.add(q)
        alpha = set()
        for a in self.alphabet:
            validate_symbol(a)
            if a in alpha:
                raise ValidationError(f"duplicate symbol {a!r}")
            alpha.add(a)
        if self.kind not in (PK_BUCHI, PK_COBUCHI, PK_WEAK, PK_FINITE):
            raise ValidationError(f"unknown probabilistic kind {self.kind!r}")
        if not self.states:
            raise ValidationError("automaton has no states")
        for (p, a, q), pr in self.delta.items():
            if p not in seen or q not in seen:
                raise ValidationError(f"transition ({p},{a},{q}) uses an undeclared state")
            if a not in alpha:
                raise ValidationError(f"transition ({p},{a},{q}) uses an undeclared symbol")
            if pr < 0 or pr > 1:
                raise ValidationError(f"probability of ({p},{a},{q}) outside [0,1]")
        for p in self.states:
            for a in self.alphabet:
                total = sum(
                    (self.delta.get((p, a, q), ZERO) for q in self.states), ZERO
                )
                if total != ONE:
                    raise ValidationError(
                        f"distribution of state {p!r} on symbol {a!r} sums to "
                        f"{format_rational(total)}, expected 1"
                    )
        total0 = ZERO
        for q, pr in self.mu0.items():
            if q not in seen:
                raise ValidationError(f"undeclared initial state {q!r}")
            if pr < 0 or pr > 1:
                raise ValidationError(f"initial probability of {q!r} outside [0,1]")
            total0 += pr
        if total0 != ONE:
            raise ValidationError(
                f"initial distribution sums to {format_rational(total0)}, expected 1"
            )
        for q in self.accepting:
            if q not in seen:
                raise ValidationError(f"undeclared accepting state {q!r}")
        if self.rej_sink is not None:
            s = self.rej_sink
            if s not in seen:
                raise ValidationError(f"undeclared rejecting sink {s!r}")
            for a in self.alphabet:
                if self.delta.get((s, a, s), ZERO) != ONE:
                    raise ValidationError(
                        f"rejecting sink {s!r} must loop with probability 1 on {a!r}"
                    )
            sink_rejecting = (s in self.accepting) if self.kind == PK_COBUCHI else (
                s not in self.accepting
            )
            if not sink_rejecting:
                raise ValidationError(f"designated sink {s!r} is not rejecting")
        if self.kind == PK_WEAK and not is_weak(self):
            raise ValidationError(
                "weak automaton whose accepting set is not a union of SCCs"
            )
        return self

    # -- cached views -----------------------------------------------------

    @cached_property
    def state_index(self) -> dict[str, int]:
        return {q: i for i, q in enumerate(self.states)}

    @cached_property
    def dist_map(self) -> dict[tuple[str, str], dict[str, Fraction]]:
        raw: dict[tuple[str, str], dict[str, Fraction]] = {}
        for (p, a, q), pr in self.delta.items():
            if pr > 0:
                raw.setdefault((p, a), {})[q] = pr
        return raw

    @cached_property
    def adjacency(self) -> dict[str, tuple[str, ...]]:
        """Positive-probability edges, for SCC and reachability work."""
        raw: dict[str, set[str]] = {q: set() for q in self.states}
        for (p, _a, q), pr in self.delta.items():
            if pr > 0:
                raw[p].add(q)
        idx = self.state_index
        return {p: tuple(sorted(qs, key=idx.__getitem__)) for p, qs in raw.items()}

    def dist(self, p: str, a: str) -> dict[str, Fraction]:
        return self.dist_map.get((p, a), {})

    def positive_successors(self, p: str, a: str) -> tuple[str, ...]:
        d = self.dist(p, a)
        idx = self.state_index
        return tuple(sorted(d, key=idx.__getitem__))

    def support(self) -> frozenset[str]:
        return frozenset(q for q, pr in self.mu0.items() if pr > 0)

    def edge_probabilities(self) -> frozenset[Fraction]:
        """Distinct positive probabilities on edges, initial edges included."""
        probs = {pr for pr in self.delta.values() if pr > 0}
        probs |= {pr for pr in self.mu0.values() if pr > 0}
        return frozenset(probs)


Automaton = NondetAutomaton | ProbAutomaton


# ---------------------------------------------------------------------------
# SCC machinery
# ---------------------------------------------------------------------------


def tarjan_scc(
    nodes: Iterable, succ: Mapping | None = None, succ_fn=None
) -> list[list]:
    """Iterative Tarjan; components come out in reverse topological order."""
    if succ_fn is None:
        succ_fn = lambda v: succ.get(v, ())  # noqa: E731
    index: dict = {}
    lowlink: dict = {}
    on_stack: set = set()
    stack: list = []
    components: list[list] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ_fn(root)))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ_fn(w))))
                    advanced = True
                    break
                elif w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                components.append(comp)
    return components


@dataclass
class SccDecomposition:
    """SCC partition with an acyclic condensation and per-component flags."""

    component_of: dict[str, int]
    components: list[frozenset[str]]
    dag_edges: frozenset[tuple[int, int]]
    accepting: list[bool]  # every run staying forever is accepting
    rejecting: list[bool]  # no run staying forever is accepting
    useless: list[bool]  # no accepting run can continue from here
    nontrivial: list[bool]  # component contains at least one internal edge

    def component(self, q: str) -> frozenset[str]:
        return self.components[self.component_of[q]]


def _graph_view(aut: Automaton):
    """(states, adjacency) on which SCC analysis runs."""
    return aut.states, aut.adjacency


def _has_internal_cycle(nodes: frozenset[str], adjacency) -> bool:
    """Does the induced subgraph on `nodes` contain a cycle?"""
    sub = {q: tuple(w for w in adjacency[q] if w in nodes) for q in nodes}
    comps = tarjan_scc(sorted(nodes), sub)
    for comp in comps:
        if len(comp) > 1:
            return True
        q = comp[0]
        if q in sub[q]:
            return True
    return False


def _component_sat(aut: Automaton, comp: frozenset[str], adjacency, nontrivial: bool) -> bool:
    """Can a run that stays in `comp` forever be accepting?"""
    if isinstance(aut, ProbAutomaton):
        acc, kind = aut.accepting, aut.kind
        if kind == PK_FINITE:
            return False  # finite-word runs do not stay anywhere forever
        if kind == PK_COBUCHI:
            return _has_internal_cycle(frozenset(comp - acc), adjacency)
        return nontrivial and bool(comp & acc)
    if aut.acc == ACC_BUCHI:
        return nontrivial and bool(comp & aut.accepting)
    if aut.acc == ACC_COBUCHI:
        return _has_internal_cycle(frozenset(comp - aut.accepting), adjacency)
    if aut.acc == ACC_GNBA:
        return nontrivial and all(comp & fs for fs in aut.acc_sets)
    # parity: a cycle whose minimal priority is even
    pri = aut.priorities
    for d in sorted({pri[q] for q in comp}):
        if d % 2 != 0:
            continue
        high = frozenset(q for q in comp if pri[q] >= d)
        sub = {q: tuple(w for w in adjacency[q] if w in high) for q in high}
        for sub_comp in tarjan_scc(sorted(high), sub):
            members = set(sub_comp)
            has_cycle = len(members) > 1 or any(q in sub[q] for q in members)
            if has_cycle and any(pri[q] == d for q in members):
                return True
    return False


def _component_all_accepting(
    aut: Automaton, comp: frozenset[str], adjacency, nontrivial: bool
) -> bool:
    """Is every run that stays in `comp` forever accepting?"""
    if not nontrivial:
        return False
    if isinstance(aut, ProbAutomaton):
        acc, kind = aut.accepting, aut.kind
        if kind == PK_FINITE:
            return False
        if kind == PK_COBUCHI:
            return not (comp & acc)
        return not _has_internal_cycle(frozenset(comp - acc), adjacency)
    if aut.acc == ACC_BUCHI:
        return not _has_internal_cycle(frozenset(comp - aut.accepting), adjacency)
    if aut.acc == ACC_COBUCHI:
        return not (comp & aut.accepting)
    if aut.acc == ACC_GNBA:
        return all(
            not _has_internal_cycle(frozenset(comp - fs), adjacency)
            for fs in aut.acc_sets
        )
    pri = aut.priorities
    for d in sorted({pri[q] for q in comp}):
        if d % 2 == 0:
            continue
        high = frozenset(q for q in comp if pri[q] >= d)
        sub = {q: tuple(w for w in adjacency[q] if w in high) for q in high}
        for sub_comp in tarjan_scc(sorted(high), sub):
            members = set(sub_comp)
            has_cycle = len(members) > 1 or any(q in sub[q] for q in members)
            if has_cycle and any(pri[q] == d for q in members):
                return False
    return True


def scc_decomposition(aut: Automaton) -> SccDecomposition:
    """SCC partition plus accepting / rejecting / useless flags per component.

    Probabilistic automata are analyzed over their positive-probability
    edges; for a finite-word kind, "useless" means the accepting set is
    unreachable.
    """
    states, adjacency = _graph_view(aut)
    comps = tarjan_scc(states, adjacency)  # reverse topological order
    components = [frozenset(c) for c in comps]
    component_of = {q: i for i, c in enumerate(components) for q in c}
    dag_edges = set()
    for p in states:
        for q in adjacency[p]:
            ci, cj = component_of[p], component_of[q]
            if ci != cj:
                dag_edges.add((ci, cj))
    nontrivial = []
    for c in components:
        nt = len(c) > 1 or any(q in adjacency[q] for q in c)
        nontrivial.append(nt)
    sat = [
        _component_sat(aut, c, adjacency, nontrivial[i])
        for i, c in enumerate(components)
    ]
    accepting = [
        _component_all_accepting(aut, c, adjacency, nontrivial[i])
        for i, c in enumerate(components)
    ]
    rejecting = [not s for s in sat]

    finite_kind = isinstance(aut, ProbAutomaton) and aut.kind == PK_FINITE
    succ_of: dict[int, list[int]] = {}
    for (i, j) in dag_edges:
        succ_of.setdefault(i, []).append(j)
    can_accept = [False] * len(components)
    # Reverse topological emission order: successors are already computed.
    for i, comp in enumerate(components):
        if finite_kind:
            here = bool(comp & aut.accepting)
        else:
            here = sat[i]
        can_accept[i] = here or any(can_accept[j] for j in succ_of.get(i, ()))
    useless = [not c for c in can_accept]
    return SccDecomposition(
        component_of=component_of,
        components=components,
        dag_edges=frozenset(dag_edges),
        accepting=accepting,
        rejecting=rejecting,
        useless=useless,
        nontrivial=nontrivial,
    )


# ---------------------------------------------------------------------------
# Reachability, trimming, underlying automaton
# ---------------------------------------------------------------------------


def reachable_states(aut: Automaton, sources: Iterable[str] | None = None) -> set[str]:
    if sources is None:
        sources = aut.initials if isinstance(aut, NondetAutomaton) else aut.support()
    adjacency = aut.adjacency
    seen = set()
    stack = [q for q in aut.states if q in set(sources)]
    seen.update(stack)
    while stack:
        p = stack.pop()
        for q in adjacency[p]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return seen


def _restrict_nondet(aut: NondetAutomaton, keep: set[str]) -> NondetAutomaton:
    states = tuple(q for q in aut.states if q in keep)
    transitions = frozenset(
        (p, a, q) for (p, a, q) in aut.transitions if p in keep and q in keep
    )
    return NondetAutomaton(
        name=aut.name,
        states=states,
        alphabet=aut.alphabet,
        transitions=transitions,
        initials=frozenset(aut.initials & keep),
        acc=aut.acc,
        accepting=frozenset(aut.accepting & keep),
        acc_sets=tuple(frozenset(fs & keep) for fs in aut.acc_sets),
        priorities={q: c for q, c in aut.priorities.items() if q in keep},
    )


def trim(aut: Automaton) -> Automaton:
    """Remove useless parts.

    Classical automata lose all unreachable states and useless SCCs
    (:class:`EmptyAutomaton` if nothing remains).  Probabilistic automata
    keep their probability mass: every useless SCC is collapsed into a
    single absorbing rejecting sink, so each distribution still sums to 1.
    """
    if isinstance(aut, NondetAutomaton):
        reach = reachable_states(aut)
        restricted = _restrict_nondet(aut, reach)
        if not restricted.states:
            raise EmptyAutomaton(f"automaton {aut.name!r} has no reachable state")
        dec = scc_decomposition(restricted)
        useful = {
            q
            for q in restricted.states
            if not dec.useless[dec.component_of[q]]
        }
        if not useful:
            raise EmptyAutomaton(f"automaton {aut.name!r} has no useful state")
        return _restrict_nondet(restricted, useful).validate()

    reach = reachable_states(aut)
    dec = scc_decomposition(aut)
    useless = {
        q for q in reach if dec.useless[dec.component_of[q]]
    }
    useful = [q for q in aut.states if q in reach and q not in useless]

    expected_sink = {aut.rej_sink} if aut.rej_sink is not None else set()
    if reach == set(aut.states) and useless == expected_sink:
        return aut  # already trim, reuse as-is

    sink_needed = bool(useless)
    sink = fresh_name("q_rej", useful) if sink_needed else None
    states = tuple(useful) + ((sink,) if sink_needed else ())
    keep = set(useful)
    delta: dict[tuple[str, str, str], Fraction] = {}
    for p in useful:
        for a in aut.alphabet:
            lost = ZERO
            for q, pr in aut.dist(p, a).items():
                if q in keep:
                    delta[(p, a, q)] = pr
                else:
                    lost += pr
            if lost > 0:
                delta[(p, a, sink)] = delta.get((p, a, sink), ZERO) + lost
    if sink_needed:
        for a in aut.alphabet:
            delta[(sink, a, sink)] = ONE
    mu0: dict[str, Fraction] = {}
    lost0 = ZERO
    for q, pr in aut.mu0.items():
        if pr == 0:
            continue
        if q in keep:
            mu0[q] = pr
        else:
            lost0 += pr
    if lost0 > 0:
        if not sink_needed:
            raise ValidationError("initial mass on an unreachable state")
        mu0[sink] = mu0.get(sink, ZERO) + lost0
    accepting = frozenset(aut.accepting & keep)
    if sink_needed and aut.kind == PK_COBUCHI:
        # a co-Buechi run trapped in a non-accepting sink would be accepting,
        # so the rejecting sink carries the accepting mark
        accepting |= {sink}
    return ProbAutomaton(
        name=aut.name,
        states=states,
        alphabet=aut.alphabet,
        delta=delta,
        mu0=mu0,
        accepting=accepting,
        kind=aut.kind,
        rej_sink=sink,
    ).validate()


def underlying_nba(pba: ProbAutomaton) -> NondetAutomaton:
    """Positive-probability transition structure, with the sink dropped.

    The acceptance kind carries over (weak automata are treated as Buechi).
    If every state is the sink, the result has no states; callers that
    cannot handle that should check first.
    """
    if pba.kind == PK_FINITE:
        raise KindMismatch("finite-word automata have no underlying omega-automaton")
    drop = {pba.rej_sink} if pba.rej_sink is not None else set()
    states = tuple(q for q in pba.states if q not in drop)
    keep = set(states)
    transitions = frozenset(
        (p, a, q)
        for (p, a, q), pr in pba.delta.items()
        if pr > 0 and p in keep and q in keep
    )
    acc = ACC_COBUCHI if pba.kind == PK_COBUCHI else ACC_BUCHI
    return NondetAutomaton(
        name=f"underlying({pba.name})",
        states=states,
        alphabet=pba.alphabet,
        transitions=transitions,
        initials=frozenset(pba.support() - drop),
        acc=acc,
        accepting=frozenset(pba.accepting & keep),
    ).validate(allow_empty=True)


# ---------------------------------------------------------------------------
# Structural predicates and small constructions
# ---------------------------------------------------------------------------


def is_deterministic(aut: Automaton) -> bool:
    if isinstance(aut, NondetAutomaton):
        return aut.is_deterministic()
    if len(aut.support()) != 1:
        return False
    return all(len(d) <= 1 for d in aut.dist_map.values())


def is_weak(aut: Automaton) -> bool:
    """Is the accepting set a union of SCCs?

    Probabilistic automata are checked over positive edges; classical
    generalized-Buechi and parity automata are never reported weak.
    """
    if isinstance(aut, NondetAutomaton):
        if aut.acc not in (ACC_BUCHI, ACC_COBUCHI):
            return False
        acc = aut.accepting
    else:
        acc = aut.accepting
    comps = tarjan_scc(aut.states, aut.adjacency)
    return all(not (set(c) & acc) or set(c) <= acc for c in comps)


@dataclass(frozen=True)
class Fork:
    """A (state, symbol) pair with at least two distinct successors."""

    state: str
    symbol: str
    successors: tuple[str, ...]
    intra_scc: bool

    def __str__(self) -> str:
        tag = "intra-SCC" if self.intra_scc else "inter-SCC"
        return f"({self.state}, {self.symbol}, {{{','.join(self.successors)}}}) [{tag}]"


def forks(aut: Automaton) -> list[Fork]:
    """All forks; intra-SCC when two successors share the source's SCC."""
    comps = tarjan_scc(aut.states, aut.adjacency)
    comp_of = {q: i for i, c in enumerate(comps) for q in c}
    result = []
    if isinstance(aut, NondetAutomaton):
        items = aut.succ_map.items()
    else:
        items = (
            ((p, a), tuple(aut.positive_successors(p, a)))
            for (p, a) in aut.dist_map
        )
    for (p, a), succs in sorted(
        items, key=lambda kv: (aut.state_index[kv[0][0]], aut.alphabet.index(kv[0][1]))
    ):
        if len(succs) < 2:
            continue
        inside = [q for q in succs if comp_of[q] == comp_of[p]]
        result.append(Fork(p, a, tuple(succs), intra_scc=len(inside) >= 2))
    return result


def degeneralize(g: NondetAutomaton) -> NondetAutomaton:
    """Counter construction turning a GNBA with sets F_1..F_k into an NBA.

    State space Q x {1..k}; the counter advances past index i upon visiting
    F_i, and the Buechi set is F_1 x {1}.
    """
    if g.acc != ACC_GNBA:
        raise KindMismatch("degeneralize expects a generalized Buechi automaton")
    k = len(g.acc_sets)
    name = lambda q, i: f"({q},{i})"  # noqa: E731
    states = tuple(name(q, i) for q in g.states for i in range(1, k + 1))
    transitions = set()
    for (p, a, q) in g.transitions:
        for i in range(1, k + 1):
            j = (i % k) + 1 if p in g.acc_sets[i - 1] else i
            transitions.add((name(p, i), a, name(q, j)))
    return NondetAutomaton(
        name=f"degen({g.name})",
        states=states,
        alphabet=g.alphabet,
        transitions=frozenset(transitions),
        initials=frozenset(name(q, 1) for q in g.initials),
        acc=ACC_BUCHI,
        accepting=frozenset(name(q, 1) for q in g.acc_sets[0]),
    ).validate(allow_empty=True)
