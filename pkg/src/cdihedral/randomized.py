"""Seeded random circuits and equivalence-preserving scrambles, for property tests."""

from __future__ import annotations

import random

from .circuit import GATE_ARITY, Circuit, Gate, Mode, omega
from .rewrite import _instantiate, apply, find_matches, get_rule, rule_table


def gate_names(mode: Mode | str = Mode.DIHEDRAL) -> list[str]:
    names = ["t", "cnot", "swap", "u", "v"]
    if Mode.parse(mode) is Mode.DIHEDRAL:
        names += ["x", "omega"]
    return names


def random_gate(rng: random.Random, n: int, mode: Mode | str = Mode.DIHEDRAL) -> Gate:
    names = [g for g in gate_names(mode) if GATE_ARITY[g] <= n]
    name = rng.choice(names)
    if name == "omega":
        return omega(rng.randrange(8))
    return Gate(name, tuple(rng.sample(range(n), GATE_ARITY[name])))


def random_circuit(rng: random.Random, n: int, length: int, mode: Mode | str = Mode.DIHEDRAL) -> Circuit:
    return Circuit(n, [random_gate(rng, n, mode) for _ in range(length)])


def splice_relation(rng: random.Random, c: Circuit, mode: Mode | str = Mode.DIHEDRAL) -> Circuit:
    """Use one random relation instance on ``c``.

    Half of the time an existing match is rewritten; otherwise ``lhs`` followed
    by the inverse of ``rhs`` (an identity) is inserted at a random position.
    """
    rules = [r for r in rule_table(mode) if not r.is_family and r.arity <= c.n]
    rule = rng.choice(rules)
    if rng.random() < 0.5:
        found = find_matches(c, rule)
        if found:
            return apply(c, rng.choice(found), mode)
    a = tuple(rng.sample(range(c.n), rule.arity))
    lhs, rhs = _instantiate(rule.lhs, a), _instantiate(rule.rhs, a)
    if rng.random() < 0.5:
        lhs, rhs = rhs, lhs
    insert = Circuit(c.n, lhs) + Circuit(c.n, rhs).inverse()
    pos = rng.randint(0, len(c))
    return Circuit(c.n, c.gates[:pos] + insert.gates + c.gates[pos:])


def shuffle_commuting(rng: random.Random, c: Circuit, moves: int, mode: Mode | str = Mode.DIHEDRAL) -> Circuit:
    """Apply up to ``moves`` random disjoint-support swaps."""
    rule = get_rule("STRUCT-COMM", mode)
    for _ in range(moves):
        found = find_matches(c, rule)
        if not found:
            break
        c = apply(c, rng.choice(found), mode)
    return c


def scramble(rng: random.Random, c: Circuit, mode: Mode | str = Mode.DIHEDRAL) -> Circuit:
    """An equivalent circuit: 1-5 relation instances, then a few commutations."""
    for _ in range(rng.randint(1, 5)):
        c = splice_relation(rng, c, mode)
    return shuffle_commuting(rng, c, rng.randint(0, 10), mode)

