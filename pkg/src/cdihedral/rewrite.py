"""The presentation as an executable rewrite system.

Rules are oriented pairs of gate lists over abstract wire slots ``0..arity-1``.
A rule matches a window of consecutive gates under an injective slot-to-qubit
assignment, in either direction.  ``U``, ``V`` and ``SWAP`` match up to a
permutation of their wires.

Besides the pattern rules there are three rule families that are checked by
enumerating every instance rather than by a fixed pattern:

``STRUCT-COMM``
    adjacent gates on disjoint wires commute (scalars have no wires).
``DIAG-COMM``
    adjacent diagonal gates commute.
``STRUCT-SCALAR``
    ``omega**a omega**b = omega**((a + b) % 8)`` and ``omega**0`` is empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterator, Sequence

from .circuit import (
    Circuit,
    Gate,
    Mode,
    check,
    cnot,
    omega,
    swap,
    t,
    u,
    v,
    x,
)
from .normal_form import synth_affine
from .semantics import evaluate

LTR = "ltr"
RTL = "rtl"
FAMILIES = ("STRUCT-COMM", "DIAG-COMM", "STRUCT-SCALAR")


class StaleMatch(ValueError):
    pass


class FuelExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    id: str
    lhs: tuple[Gate, ...]
    rhs: tuple[Gate, ...]
    arity: int

    @property
    def is_family(self) -> bool:
        return self.id in FAMILIES

    def side(self, direction: str) -> tuple[Gate, ...]:
        return self.lhs if direction == LTR else self.rhs

    def other(self, direction: str) -> tuple[Gate, ...]:
        return self.rhs if direction == LTR else self.lhs

    def mentions(self, names: set[str]) -> bool:
        return any(g.name in names for g in self.lhs + self.rhs)


@dataclass(frozen=True)
class Match:
    rule_id: str
    position: int
    assignment: tuple[int, ...]
    direction: str = LTR


def _rule(rid: str, lhs, rhs) -> RewriteRule:
    slots = {q for g in list(lhs) + list(rhs) for q in g.qubits}
    arity = max(slots) + 1 if slots else 0
    return RewriteRule(rid, tuple(lhs), tuple(rhs), arity)


def _rep(g: Gate, k: int) -> list[Gate]:
    return [g] * k


def _r13_rhs() -> list[Gate]:
    out = []
    for q in range(4):
        out += _rep(t(q), 5)
    for pair in [(2, 3), (1, 3), (0, 3), (1, 2), (0, 2), (0, 1)]:
        out += _rep(u(*pair), 3)
    out += [v(1, 2, 3), v(0, 2, 3), v(0, 1, 3), v(0, 1, 2)]
    return out


def _relations() -> list[RewriteRule]:
    return [
        _rule("R1", [x(0), x(0)], []),
        _rule("R2", [cnot(1, 0), x(0), cnot(1, 0)], [x(0)]),
        _rule("R3", [cnot(1, 0), x(1), cnot(1, 0)], [x(1), x(0)]),
        _rule("R4", [cnot(1, 0), cnot(1, 0)], []),
        _rule("R5", [swap(1, 0)], [cnot(1, 0), swap(1, 0), cnot(1, 0), swap(1, 0), cnot(1, 0)]),
        _rule("R6", [cnot(2, 0)], [cnot(1, 0), cnot(2, 1), cnot(1, 0), cnot(2, 1)]),
        _rule("R7", _rep(t(0), 8), []),
        _rule("R8", _rep(u(0, 1), 4), _rep(t(0), 4) + _rep(t(1), 4)),
        _rule("R9", _rep(v(0, 1, 2), 2),
              _rep(t(0), 6) + _rep(t(1), 6) + _rep(t(2), 6)
              + _rep(u(1, 2), 2) + _rep(u(0, 2), 2) + _rep(u(0, 1), 2)),
        _rule("R10", _rep(omega(1), 8), []),
        _rule("R11", [x(0), t(0), x(0)], [omega(1)] + _rep(t(0), 7)),
        _rule("R12", [cnot(1, 0), t(1), cnot(1, 0)], [t(1)]),
        _rule("R13", [cnot(3, 2), v(0, 1, 2), cnot(3, 2)], _r13_rhs()),
        _rule("DefU", [u(0, 1)], [cnot(1, 0), t(0), cnot(1, 0)]),
        _rule("DefV", [v(0, 1, 2)], [cnot(2, 1), cnot(1, 0), t(0), cnot(1, 0), cnot(2, 1)]),
    ]


def _commutations() -> list[RewriteRule]:
    # (affine gate, diagonal gate) -> (diagonal gates, affine gate)
    w = [omega(1)]
    pairs = [
        (x(0), t(0), w + _rep(t(0), 7)),
        (x(1), u(0, 1), w + _rep(u(0, 1), 7)),
        (x(0), u(0, 1), w + _rep(u(0, 1), 7)),
        (x(2), v(0, 1, 2), w + _rep(v(0, 1, 2), 7)),
        (x(1), v(0, 1, 2), w + _rep(v(0, 1, 2), 7)),
        (x(0), v(0, 1, 2), w + _rep(v(0, 1, 2), 7)),
        (cnot(1, 0), t(1), [t(1)]),
        (cnot(1, 0), t(0), [u(0, 1)]),
        (cnot(1, 0), u(0, 1), [t(0)]),
        (cnot(2, 1), u(0, 1), [v(0, 1, 2)]),
        (cnot(1, 0), u(1, 2), [u(1, 2)]),
        (cnot(2, 1), v(0, 1, 2), [u(0, 1)]),
        (cnot(1, 0), v(0, 1, 2), [u(0, 2)]),
        (cnot(1, 0), v(1, 2, 3), [v(1, 2, 3)]),
        (cnot(3, 2), v(0, 1, 2), _r13_rhs()),
        (swap(1, 0), t(1), [t(0)]),
        (swap(1, 0), t(0), [t(1)]),
        (swap(1, 0), u(0, 1), [u(0, 1)]),
        (swap(2, 1), u(0, 1), [u(0, 2)]),
        (swap(1, 0), u(1, 2), [u(0, 2)]),
        (swap(2, 1), v(0, 1, 2), [v(0, 1, 2)]),
        (swap(1, 0), v(0, 1, 2), [v(0, 1, 2)]),
        (swap(2, 3), v(0, 1, 2), [v(0, 1, 3)]),
        (swap(1, 0), v(1, 2, 3), [v(0, 2, 3)]),
        (cnot(0, 1), u(0, 1), [t(1)]),
    ]
    return [_rule(f"FIG2-{i}", [a, d], diag + [a]) for i, (a, d, diag) in enumerate(pairs, start=1)]


def _structural() -> list[RewriteRule]:
    return [
        RewriteRule("STRUCT-COMM", (t(0), t(1)), (t(1), t(0)), 2),
        RewriteRule("DIAG-COMM", (t(0), u(0, 1)), (u(0, 1), t(0)), 2),
        RewriteRule("STRUCT-SCALAR", (omega(1), omega(7)), (), 0),
        _rule("STRUCT-COHERENCE", [swap(0, 1), swap(0, 1)], []),
        _rule("STRUCT-COHERENCE-BRAID", [swap(0, 1), swap(1, 2), swap(0, 1)],
              [swap(1, 2), swap(0, 1), swap(1, 2)]),
    ]


_CNOTT_DROPPED = {"R1", "R2", "R3", "R10", "R11", "STRUCT-SCALAR"}


@lru_cache(maxsize=None)
def _table(mode: Mode) -> tuple[RewriteRule, ...]:
    rules = _relations() + _commutations() + _structural()
    if mode is Mode.CNOTT:
        rules = [r for r in rules if r.id not in _CNOTT_DROPPED and not r.mentions({"x", "omega"})]
    return tuple(rules)


def rule_table(mode: Mode | str = Mode.DIHEDRAL) -> list[RewriteRule]:
    return list(_table(Mode.parse(mode)))


def get_rule(rule_id: str, mode: Mode | str = Mode.DIHEDRAL) -> RewriteRule:
    for r in _table(Mode.parse(mode)):
        if r.id == rule_id:
            return r
    raise KeyError(rule_id)


# matching

def _instantiate(gates: Sequence[Gate], assignment: Sequence[int]) -> list[Gate]:
    return [Gate(g.name, tuple(assignment[s] for s in g.qubits), g.k) for g in gates]


def _unify(pattern: Sequence[Gate], window: Sequence[Gate], binding: dict[int, int]) -> Iterator[dict[int, int]]:
    if not pattern:
        yield binding
        return
    pg, wg = pattern[0], window[0]
    if pg.name != wg.name or pg.k != wg.k:
        return
    orders = permutations(wg.qubits) if pg.name in ("swap", "u", "v") else [wg.qubits]
    for qs in orders:
        b = dict(binding)
        used = set(b.values())
        ok = True
        for s, q in zip(pg.qubits, qs):
            if s in b:
                if b[s] != q:
                    ok = False
                    break
            elif q in used:
                ok = False
                break
            else:
                b[s] = q
                used.add(q)
        if ok:
            yield from _unify(pattern[1:], window[1:], b)


def _extensions(binding: dict[int, int], arity: int, n: int) -> Iterator[tuple[int, ...]]:
    free = [s for s in range(arity) if s not in binding]
    rest = [q for q in range(n) if q not in binding.values()]
    for qs in permutations(rest, len(free)):
        full = dict(binding)
        full.update(zip(free, qs))
        yield tuple(full[s] for s in range(arity))


def _family_matches(c: Circuit, rule: RewriteRule) -> list[Match]:
    out = []
    gates = c.gates
    for i in range(len(gates)):
        g = gates[i]
        if rule.id == "STRUCT-SCALAR" and g.name == "omega" and g.k % 8 == 0:
            out.append(Match(rule.id, i, (), LTR))
        if i + 1 >= len(gates):
            continue
        h = gates[i + 1]
        if rule.id == "STRUCT-COMM" and not set(g.qubits) & set(h.qubits):
            out.append(Match(rule.id, i, (), LTR))
        elif rule.id == "DIAG-COMM" and g.is_diagonal and h.is_diagonal:
            out.append(Match(rule.id, i, (), LTR))
        elif rule.id == "STRUCT-SCALAR" and g.name == "omega" and h.name == "omega":
            out.append(Match(rule.id, i, (), LTR))
    return out


def find_matches(c: Circuit, rule: RewriteRule, directions: Sequence[str] = (LTR, RTL),
                 positions: Sequence[int] | None = None) -> list[Match]:
    """Every place ``rule`` applies, ordered by position, direction, then assignment."""
    if rule.is_family:
        found = _family_matches(c, rule) if LTR in directions else []
        return [m for m in found if positions is None or m.position in positions]
    out = []
    for direction in (LTR, RTL):
        if direction not in directions:
            continue
        side = rule.side(direction)
        span = range(len(c.gates) - len(side) + 1) if positions is None else positions
        for pos in span:
            window = c.gates[pos:pos + len(side)]
            if len(window) != len(side):
                continue
            seen = set()
            for binding in _unify(side, window, {}):
                for a in _extensions(binding, rule.arity, c.n):
                    if a not in seen:
                        seen.add(a)
            out += [Match(rule.id, pos, a, direction) for a in sorted(seen)]
    order = {LTR: 0, RTL: 1}
    out.sort(key=lambda m: (m.position, order[m.direction], m.assignment))
    return out


def _family_apply(gates: list[Gate], m: Match) -> list[Gate]:
    i = m.position
    if m.rule_id in ("STRUCT-COMM", "DIAG-COMM"):
        return gates[:i] + [gates[i + 1], gates[i]] + gates[i + 2:]
    g = gates[i]
    if g.k % 8 == 0:
        return gates[:i] + gates[i + 1:]
    k = (g.k + gates[i + 1].k) % 8
    return gates[:i] + ([omega(k)] if k else []) + gates[i + 2:]


def apply(c: Circuit, m: Match, mode: Mode | str = Mode.DIHEDRAL) -> Circuit:
    """Replace the matched window by the other side of the rule."""
    rule = get_rule(m.rule_id, mode)
    if rule.is_family:
        if m not in _family_matches(c, rule):
            raise StaleMatch(f"{m} does not apply")
        return Circuit(c.n, _family_apply(list(c.gates), m))
    side = _instantiate(rule.side(m.direction), m.assignment)
    if list(c.gates[m.position:m.position + len(side)]) != side:
        raise StaleMatch(f"{m} does not apply")
    repl = _instantiate(rule.other(m.direction), m.assignment)
    return Circuit(c.n, c.gates[:m.position] + tuple(repl) + c.gates[m.position + len(side):])


def apply_step(c: Circuit, rule_id: str, position: int, direction: str = LTR,
               mode: Mode | str = Mode.DIHEDRAL) -> Circuit:
    """Apply the first match of ``rule_id`` at ``position`` (used to replay traces)."""
    rule = get_rule(rule_id, mode)
    found = find_matches(c, rule, (direction,), positions=[position])
    if not found:
        raise StaleMatch(f"{rule_id} does not apply at {position}")
    if rule_id == "STRUCT-SCALAR":
        # a lone omega**0 and a merge can both sit at one position; prefer the merge
        found.sort(key=lambda m: c.gates[m.position].k % 8 == 0 and m.position + 1 < len(c.gates)
                   and c.gates[m.position + 1].name == "omega")
    return apply(c, found[0], mode)


# soundness

def _all_gates(n: int) -> list[Gate]:
    from itertools import combinations
    gates = [omega(k) for k in range(8)]
    gates += [x(q) for q in range(n)] + [t(q) for q in range(n)]
    gates += [cnot(a, b) for a in range(n) for b in range(n) if a != b]
    gates += [swap(*p) for p in combinations(range(n), 2)]
    gates += [u(*p) for p in combinations(range(n), 2)]
    gates += [v(*p) for p in combinations(range(n), 3)]
    return gates


def _family_instances(rule: RewriteRule, n: int) -> Iterator[tuple[list[Gate], list[Gate]]]:
    gates = _all_gates(n)
    if rule.id == "STRUCT-SCALAR":
        for a in range(8):
            yield [omega(a)], ([] if a == 0 else [omega(a)])
            for b in range(8):
                k = (a + b) % 8
                yield [omega(a), omega(b)], ([omega(k)] if k else [])
        return
    for g in gates:
        for h in gates:
            if rule.id == "STRUCT-COMM" and set(g.qubits) & set(h.qubits):
                continue
            if rule.id == "DIAG-COMM" and not (g.is_diagonal and h.is_diagonal):
                continue
            yield [g, h], [h, g]


def verify_rule(rule: RewriteRule, n: int) -> bool:
    """Both sides evaluate equal under every injective placement on ``n`` wires."""
    if n < rule.arity:
        raise ValueError(f"{rule.id} needs at least {rule.arity} wires, got {n}")
    if rule.is_family:
        instances = _family_instances(rule, n)
    else:
        instances = ((_instantiate(rule.lhs, a), _instantiate(rule.rhs, a))
                     for a in permutations(range(n), rule.arity))
    return all(evaluate(Circuit(n, lhs)) == evaluate(Circuit(n, rhs)) for lhs, rhs in instances)


# directed normalization

def _record(trace: list | None, rule_id: str, position: int, direction: str = LTR) -> None:
    if trace is not None:
        trace.append((rule_id, position, direction))


@lru_cache(maxsize=None)
def _commuters(mode: Mode) -> tuple[RewriteRule, ...]:
    return tuple(r for r in _table(mode) if r.id.startswith("FIG2-"))


@lru_cache(maxsize=100_000)
def _commute(a: Gate, d: Gate, mode: Mode) -> tuple[str, tuple[Gate, ...]]:
    """Rule moving diagonal ``d`` left past affine ``a``: ``a d = D' a``; returns ``(id, D')``."""
    if not set(a.qubits) & set(d.qubits):
        return "STRUCT-COMM", (d,)
    n = max(a.qubits + d.qubits) + 1
    window = Circuit(n, (a, d))
    for rule in _commuters(mode):
        found = find_matches(window, rule, (LTR,), positions=[0])
        if found:
            out = _instantiate(rule.rhs, found[0].assignment)
            assert out[-1] == a
            return rule.id, tuple(out[:-1])
    raise LookupError(f"no commutation rule for {a} then {d}")


def push_diagonal_left(c: Circuit, mode: Mode | str = Mode.DIHEDRAL, trace: list | None = None,
                       fuel: int = 1_000_000) -> Circuit:
    """Rewrite ``c`` into diagonal gates followed by affine gates.

    Always rewrites the leftmost affine-then-diagonal adjacency.  Each step
    trades one diagonal gate for diagonal gates with one fewer affine gate
    to their left, so the process terminates; ``fuel`` bounds the steps.
    """
    mode = Mode.parse(mode)
    check(c, mode)
    gates = list(c.gates)
    i = 0
    steps = 0
    while i + 1 < len(gates):
        a, d = gates[i], gates[i + 1]
        if not (a.is_affine and d.is_diagonal):
            i += 1
            continue
        steps += 1
        if steps > fuel:
            raise FuelExhausted(f"more than {fuel} rewrite steps")
        rid, diag = _commute(a, d, mode)
        _record(trace, rid, i)
        gates[i:i + 2] = list(diag) + [a]
        i = max(i - 1, 0)
    return Circuit(c.n, gates)


_ORDER = {"omega": 0, "t": 1, "u": 2, "v": 3}


def _key(g: Gate):
    return _ORDER[g.name], g.qubits


def _sort(gates: list[Gate], trace: list | None, offset: int) -> list[Gate]:
    if trace is None:
        return sorted(gates, key=_key)
    gates = list(gates)
    for i in range(1, len(gates)):
        j = i
        while j > 0 and _key(gates[j - 1]) > _key(gates[j]):
            g, h = gates[j - 1], gates[j]
            _record(trace, "DIAG-COMM" if set(g.qubits) & set(h.qubits) else "STRUCT-COMM", offset + j - 1)
            gates[j - 1], gates[j] = h, g
            j -= 1
    return gates


def _reduce_blocks(gates: list[Gate], name: str, size: int, rule_id: str,
                   trace: list | None, offset: int) -> list[Gate]:
    rule = get_rule(rule_id)
    i = 0
    while i + size <= len(gates):
        g = gates[i]
        if g.name == name and all(h == g for h in gates[i:i + size]):
            _record(trace, rule_id, offset + i)
            a = tuple(range(rule.arity))  # slot s -> s-th wire of g
            a = tuple(g.qubits[s] for s in a)
            repl = _instantiate(rule.rhs, a)
            gates = gates[:i] + repl + gates[i + size:]
            i += len(repl)
        else:
            i += 1
    return gates


def reduce_degrees(d: Circuit | Sequence[Gate], trace: list | None = None, offset: int = 0) -> list[Gate]:
    """Sort a diagonal gate list and bound its block degrees (V < 2, U < 4, T < 8, one scalar).

    ``offset`` is the position of the list inside a larger circuit, used for
    trace entries.
    """
    gates = list(d.gates if isinstance(d, Circuit) else d)
    bad = [g for g in gates if not g.is_diagonal]
    if bad:
        raise ValueError(f"non-diagonal gate {bad[0]} in diagonal circuit")
    gates = _sort(gates, trace, offset)
    # scalars sit in front after sorting
    while gates and gates[0].name == "omega":
        if gates[0].k % 8 == 0:
            _record(trace, "STRUCT-SCALAR", offset)
            gates = gates[1:]
        elif len(gates) > 1 and gates[1].name == "omega":
            _record(trace, "STRUCT-SCALAR", offset)
            k = (gates[0].k + gates[1].k) % 8
            gates = ([omega(k)] if k else []) + gates[2:]
        else:
            break
    gates = _reduce_blocks(gates, "v", 2, "R9", trace, offset)
    gates = _sort(gates, trace, offset)
    gates = _reduce_blocks(gates, "u", 4, "R8", trace, offset)
    gates = _sort(gates, trace, offset)
    gates = _reduce_blocks(gates, "t", 8, "R7", trace, offset)
    return gates


def rewrite_to_da(c: Circuit, mode: Mode | str = Mode.DIHEDRAL, trace: list | None = None
                  ) -> tuple[list[Gate], list[Gate]]:
    """Split ``c`` into a reduced diagonal part and an affine part using only rewrite rules.

    Gates are consumed right to left.  The diagonal material collected so far
    is carried left across each affine gate one gate at a time and then
    re-reduced, which keeps it at most one block per term.
    """
    mode = Mode.parse(mode)
    check(c, mode)
    prefix = list(c.gates)
    block: list[Gate] = []
    affine: list[Gate] = []
    while prefix:
        g = prefix.pop()
        p = len(prefix)
        if g.is_diagonal:
            block = reduce_degrees([g] + block, trace, p)
            continue
        moved: list[Gate] = []
        for d in block:
            rid, diag = _commute(g, d, mode)
            _record(trace, rid, p + len(moved))
            moved += diag
        block = reduce_degrees(moved, trace, p)
        affine.insert(0, g)
    return block, affine


def normalize_by_rewriting(c: Circuit, mode: Mode | str = Mode.DIHEDRAL, trace: list | None = None) -> Circuit:
    """Normal form reached by rewriting; the affine tail is replaced by its synthesized normal form."""
    mode = Mode.parse(mode)
    diag, aff = rewrite_to_da(c, mode, trace)
    diag = reduce_degrees(diag, trace, 0)
    _record(trace, "AFFINE-NF", len(diag), "semantic")
    tail = synth_affine(evaluate(Circuit(c.n, aff), mode).affine, mode)
    return Circuit(c.n, diag + tail)
