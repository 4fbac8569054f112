"""Line-based automaton files.

Layout (UTF-8, '#' starts a comment, blank lines ignored)::

    automaton <name>
    type: nba|dba|dpa|gnba|pba|pwa|pca|pfa
    alphabet: <sym> <sym> ...
    states: <name> <name> ...
    init: q0 q1              # nondeterministic
    init: q0=1/2 q1=1/2      # probabilistic
    accepting: q2 q3         # nba/dba/pba/pwa/pca/pfa
    priorities: q0=2 q1=1    # dpa
    accsets: q1 q2 ; q3      # gnba
    trans: p a q             # nondeterministic
    trans: p a q 1/3         # probabilistic

Rationals are ``n`` or ``n/d`` with decimal integers; floats are rejected.
"""

from __future__ import annotations

from fractions import Fraction

from . import core
from .core import (
    ACC_BUCHI,
    ACC_GNBA,
    ACC_PARITY,
    NondetAutomaton,
    ONE,
    PK_BUCHI,
    PK_COBUCHI,
    PK_FINITE,
    PK_WEAK,
    ProbAutomaton,
    ZERO,
    format_rational,
)
from .errors import ParseError, ValidationError

NONDET_TYPES = {"nba": ACC_BUCHI, "dba": ACC_BUCHI, "dpa": ACC_PARITY, "gnba": ACC_GNBA}
PROB_TYPES = {"pba": PK_BUCHI, "pwa": PK_WEAK, "pca": PK_COBUCHI, "pfa": PK_FINITE}


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _expect(line: str, keyword: str, lineno: int) -> str:
    head, sep, rest = line.partition(":")
    if head.strip() != keyword or not sep:
        raise ParseError(f"expected '{keyword}: ...'", lineno)
    return rest.strip()


def _rational(tok: str, lineno: int) -> Fraction:
    try:
        return core.parse_rational(tok)
    except ValidationError as e:
        raise ParseError(str(e), lineno) from None


def parse_automaton(text: str) -> NondetAutomaton | ProbAutomaton:
    """Parse and validate one automaton; raises :class:`ParseError` or
    :class:`ValidationError` with the offending detail."""
    lines = list(_content_lines(text))
    if len(lines) < 6:
        raise ParseError("file too short: header needs 6 lines")
    it = iter(lines)

    lineno, line = next(it)
    if not line.startswith("automaton"):
        raise ParseError("expected 'automaton <name>'", lineno)
    name = line[len("automaton"):].strip()
    if not name:
        raise ParseError("automaton name missing", lineno)

    lineno, line = next(it)
    type_tag = _expect(line, "type", lineno)
    if type_tag not in NONDET_TYPES and type_tag not in PROB_TYPES:
        raise ParseError(f"unknown automaton type {type_tag!r}", lineno)

    lineno, line = next(it)
    alphabet = tuple(_expect(line, "alphabet", lineno).split())
    if not alphabet:
        raise ParseError("alphabet must be nonempty", lineno)

    lineno, line = next(it)
    states = tuple(_expect(line, "states", lineno).split())
    if not states:
        raise ParseError("state list must be nonempty", lineno)
    state_set = set(states)

    lineno, line = next(it)
    init_tokens = _expect(line, "init", lineno).split()
    if not init_tokens:
        raise ParseError("initial state set must be nonempty", lineno)

    lineno, line = next(it)
    head = line.split(":", 1)[0].strip()

    if type_tag in PROB_TYPES:
        return _parse_prob(
            name, type_tag, alphabet, states, state_set, init_tokens, (lineno, line), it
        )
    return _parse_nondet(
        name, type_tag, alphabet, states, state_set, init_tokens, head, (lineno, line), it
    )


def _parse_nondet(name, type_tag, alphabet, states, state_set, init_tokens, head, acc_line, it):
    for tok in init_tokens:
        if "=" in tok:
            raise ParseError(
                f"probabilistic initial entry {tok!r} in a classical automaton"
            )
    initials = frozenset(init_tokens)
    lineno, line = acc_line
    accepting: frozenset[str] = frozenset()
    acc_sets: tuple[frozenset[str], ...] = ()
    priorities: dict[str, int] = {}
    acc = NONDET_TYPES[type_tag]
    if type_tag == "dpa":
        rest = _expect(line, "priorities", lineno)
        for tok in rest.split():
            state, sep, value = tok.partition("=")
            if not sep or not value.isdigit():
                raise ParseError(f"bad priority entry {tok!r}", lineno)
            if state in priorities:
                raise ParseError(f"duplicate priority for {state!r}", lineno)
            priorities[state] = int(value)
    elif type_tag == "gnba":
        rest = _expect(line, "accsets", lineno)
        groups = [g.split() for g in rest.split(";")]
        acc_sets = tuple(frozenset(g) for g in groups)
    else:
        accepting = frozenset(_expect(line, "accepting", lineno).split())

    transitions = set()
    for lineno, line in it:
        fields = _expect(line, "trans", lineno).split()
        if len(fields) != 3:
            raise ParseError("expected 'trans: p a q'", lineno)
        p, a, q = fields
        transitions.add((p, a, q))

    aut = NondetAutomaton(
        name=name,
        states=states,
        alphabet=alphabet,
        transitions=frozenset(transitions),
        initials=initials,
        acc=acc,
        accepting=accepting,
        acc_sets=acc_sets,
        priorities=priorities,
    ).validate()
    if type_tag in ("dba", "dpa") and not aut.is_deterministic():
        raise ValidationError(f"type {type_tag!r} requires a deterministic automaton")
    return aut


def _parse_prob(name, type_tag, alphabet, states, state_set, init_tokens, acc_line, it):
    mu0: dict[str, Fraction] = {}
    for tok in init_tokens:
        state, sep, value = tok.partition("=")
        if not sep:
            raise ParseError(f"initial entry {tok!r} needs the form state=prob")
        if state in mu0:
            raise ParseError(f"duplicate initial entry for {state!r}")
        mu0[state] = core.parse_rational(value)

    lineno, line = acc_line
    accepting = frozenset(_expect(line, "accepting", lineno).split())

    delta: dict[tuple[str, str, str], Fraction] = {}
    row_sums: dict[tuple[str, str], Fraction] = {}
    for lineno, line in it:
        fields = _expect(line, "trans", lineno).split()
        if len(fields) != 4:
            raise ParseError("expected 'trans: p a q n/d'", lineno)
        p, a, q, prob = fields
        pr = _rational(prob, lineno)
        if (p, a, q) in delta:
            raise ParseError(f"duplicate transition ({p},{a},{q})", lineno)
        if pr > 0:
            delta[(p, a, q)] = pr
            row_sums[(p, a)] = row_sums.get((p, a), ZERO) + pr

    for p in states:
        for a in alphabet:
            total = row_sums.get((p, a), ZERO)
            if total != ONE:
                raise ValidationError(
                    f"distribution of state {p!r} on symbol {a!r} sums to "
                    f"{format_rational(total)}, expected 1"
                )

    aut = ProbAutomaton(
        name=name,
        states=states,
        alphabet=alphabet,
        delta=delta,
        mu0=mu0,
        accepting=accepting,
        kind=PROB_TYPES[type_tag],
        rej_sink=None,
    )
    aut.rej_sink = _detect_sink(aut)
    return aut.validate()


def _detect_sink(aut: ProbAutomaton) -> str | None:
    """Designate the unique absorbing rejecting state, when there is one."""
    candidates = []
    for q in aut.states:
        if not all(aut.delta.get((q, a, q), ZERO) == ONE for a in aut.alphabet):
            continue
        rejecting = (q in aut.accepting) if aut.kind == PK_COBUCHI else (
            q not in aut.accepting
        )
        if rejecting:
            candidates.append(q)
    return candidates[0] if len(candidates) == 1 else None


def _nondet_type_tag(aut: NondetAutomaton) -> str:
    if aut.acc == ACC_GNBA:
        return "gnba"
    if aut.acc == ACC_PARITY:
        if not aut.is_deterministic():
            raise ValidationError("nondeterministic parity automata have no file type")
        return "dpa"
    if aut.acc == ACC_BUCHI:
        return "dba" if aut.is_deterministic() else "nba"
    raise ValidationError("classical co-Buechi automata have no file type")


def _prob_type_tag(aut: ProbAutomaton) -> str:
    return {v: k for k, v in PROB_TYPES.items()}[aut.kind]


def serialize_automaton(aut: NondetAutomaton | ProbAutomaton) -> str:
    """Render an automaton; ``parse(serialize(x))`` is isomorphic to ``x``."""
    if not aut.states:
        raise ValidationError("cannot serialize an automaton without states")
    idx = aut.state_index
    sym_idx = {a: i for i, a in enumerate(aut.alphabet)}
    out = [f"automaton {aut.name}"]
    if isinstance(aut, NondetAutomaton):
        out.append(f"type: {_nondet_type_tag(aut)}")
    else:
        out.append(f"type: {_prob_type_tag(aut)}")
    out.append("alphabet: " + " ".join(aut.alphabet))
    out.append("states: " + " ".join(aut.states))
    if isinstance(aut, NondetAutomaton):
        out.append("init: " + " ".join(sorted(aut.initials, key=idx.__getitem__)))
        if aut.acc == ACC_PARITY:
            out.append(
                "priorities: " + " ".join(f"{q}={aut.priorities[q]}" for q in aut.states)
            )
        elif aut.acc == ACC_GNBA:
            rendered = [
                " ".join(sorted(fs, key=idx.__getitem__)) for fs in aut.acc_sets
            ]
            out.append("accsets: " + " ; ".join(rendered))
        else:
            out.append(
                "accepting: " + " ".join(sorted(aut.accepting, key=idx.__getitem__))
            )
        for (p, a, q) in sorted(
            aut.transitions, key=lambda t: (idx[t[0]], sym_idx[t[1]], idx[t[2]])
        ):
            out.append(f"trans: {p} {a} {q}")
    else:
        entries = [
            f"{q}={format_rational(pr)}"
            for q, pr in sorted(aut.mu0.items(), key=lambda kv: idx[kv[0]])
            if pr > 0
        ]
        out.append("init: " + " ".join(entries))
        out.append(
            "accepting: " + " ".join(sorted(aut.accepting, key=idx.__getitem__))
        )
        for (p, a, q), pr in sorted(
            aut.delta.items(), key=lambda kv: (idx[kv[0][0]], sym_idx[kv[0][1]], idx[kv[0][2]])
        ):
            if pr > 0:
                out.append(f"trans: {p} {a} {q} {format_rational(pr)}")
    return "\n".join(out) + "\n"


def load_automaton(path: str) -> NondetAutomaton | ProbAutomaton:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_automaton(fh.read())


def save_automaton(aut: NondetAutomaton | ProbAutomaton, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_automaton(aut))
