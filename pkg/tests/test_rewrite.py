import random

import pytest

from cdihedral.circuit import Circuit, InvalidCircuit, Mode, cnot, omega, swap, t, u, v, x
from cdihedral.normal_form import normalize
from cdihedral.randomized import random_circuit
from cdihedral.rewrite import (
    LTR,
    RTL,
    FuelExhausted,
    Match,
    RewriteRule,
    StaleMatch,
    apply,
    apply_step,
    find_matches,
    get_rule,
    normalize_by_rewriting,
    push_diagonal_left,
    reduce_degrees,
    rewrite_to_da,
    rule_table,
    verify_rule,
)
from cdihedral.semantics import evaluate

R13_RHS = ([t(q) for q in range(4) for _ in range(5)]
           + [u(a, b) for a, b in [(2, 3), (1, 3), (0, 3), (1, 2), (0, 2), (0, 1)] for _ in range(3)]
           + [v(1, 2, 3), v(0, 2, 3), v(0, 1, 3), v(0, 1, 2)])


def ids(mode):
    return [r.id for r in rule_table(mode)]


def test_rule_table_contents():
    names = ids("dihedral")
    for rid in [f"R{i}" for i in range(1, 14)] + ["DefU", "DefV", "STRUCT-COMM", "STRUCT-COHERENCE"]:
        assert rid in names
    assert sum(r.startswith("FIG2-") for r in names) == 25
    r13 = get_rule("R13")
    assert r13.lhs == (cnot(3, 2), v(0, 1, 2), cnot(3, 2))
    assert list(r13.rhs) == R13_RHS


def test_rule_table_cnott():
    names = ids("cnott")
    for rid in ["R1", "R2", "R3", "R10", "R11", "STRUCT-SCALAR"]:
        assert rid not in names
    for r in rule_table("cnott"):
        assert not any(g.name in ("x", "omega") for g in r.lhs + r.rhs)
    assert sum(r.startswith("FIG2-") for r in names) == 19


@pytest.mark.parametrize("mode", list(Mode))
def test_every_rule_is_sound(mode):
    for r in rule_table(mode):
        assert verify_rule(r, r.arity), r.id
        assert verify_rule(r, r.arity + 1), r.id


def test_verify_rule_catches_a_wrong_rule():
    bad = RewriteRule("R7-bad", (t(0),) * 7, (), 1)
    assert not verify_rule(bad, 1)
    with pytest.raises(ValueError):
        verify_rule(get_rule("R13"), 3)


def test_find_matches_examples():
    r7 = get_rule("R7")
    assert find_matches(Circuit(1, [t(0)] * 8), r7, (LTR,)) == [Match("R7", 0, (0,), LTR)]
    c = Circuit(1, [x(0), t(0)])
    assert find_matches(c, get_rule("FIG2-1")) == [Match("FIG2-1", 0, (0,), LTR)]


def test_find_matches_on_empty_circuit():
    empty = Circuit(1, [])
    hits = {r.id: find_matches(empty, r) for r in rule_table()}
    hits = {k: m for k, m in hits.items() if m}
    assert set(hits) == {"R1", "R7", "R10"}
    assert all(m.direction == RTL and m.position == 0 for ms in hits.values() for m in ms)
    # two wires also allow R4 and the swap coherence
    hits2 = {r.id for r in rule_table() if find_matches(Circuit(2, []), r)}
    assert hits2 == {"R1", "R4", "R7", "R10", "STRUCT-COHERENCE"}


def test_find_matches_symmetric_and_unbound_slots():
    # U matches in either wire order; the unbound slot of R12 reversed ranges over free wires
    found = find_matches(Circuit(3, [t(1)]), get_rule("R12"), (RTL,))
    assert [m.assignment for m in found] == [(0, 1), (2, 1)]
    found = find_matches(Circuit(2, [u(0, 1)] * 4), get_rule("R8"), (LTR,))
    assert [m.assignment for m in found] == [(0, 1), (1, 0)]


def test_find_matches_is_sorted():
    rng = random.Random(9)
    for _ in range(30):
        c = random_circuit(rng, 3, 10)
        for r in rule_table():
            ms = find_matches(c, r)
            assert ms == sorted(ms, key=lambda m: (m.position, m.direction != LTR, m.assignment))


def test_apply_examples():
    r7, r8, r9 = get_rule("R7"), get_rule("R8"), get_rule("R9")
    c = Circuit(1, [t(0)] * 8)
    assert apply(c, find_matches(c, r7)[0]).gates == ()
    c = Circuit(2, [u(0, 1)] * 4)
    assert list(apply(c, find_matches(c, r8)[0]).gates) == [t(0)] * 4 + [t(1)] * 4
    c = Circuit(3, [v(0, 1, 2)] * 2)
    out = apply(c, find_matches(c, r9)[0])
    assert sorted(out.gates) == sorted([t(q) for q in range(3) for _ in range(6)]
                                       + [u(a, b) for a, b in [(0, 1), (0, 2), (1, 2)] for _ in range(2)])


def test_apply_rejects_stale_match():
    c = Circuit(1, [t(0)] * 8)
    m = find_matches(c, get_rule("R7"))[0]
    with pytest.raises(StaleMatch):
        apply(Circuit(1, [t(0)] * 7), m)
    with pytest.raises(StaleMatch):
        apply(Circuit(2, [t(0), t(0)]), Match("STRUCT-COMM", 0, ()))


def test_every_match_preserves_semantics():
    rng = random.Random(12)
    for _ in range(40):
        c = random_circuit(rng, rng.randint(2, 4), rng.randint(0, 8))
        op = evaluate(c)
        for r in rule_table():
            for m in find_matches(c, r)[:5]:
                assert evaluate(apply(c, m)) == op, m


def test_structural_moves():
    c = Circuit(3, [cnot(0, 1), t(2), omega(3), omega(6)])
    comm = find_matches(c, get_rule("STRUCT-COMM"))
    assert [m.position for m in comm] == [0, 1, 2]
    merged = apply_step(c, "STRUCT-SCALAR", 2)
    assert merged.gates[2:] == (omega(1),)
    diag = Circuit(2, [t(0), u(0, 1)])
    assert apply_step(diag, "DIAG-COMM", 0).gates == (u(0, 1), t(0))


def test_push_diagonal_left_examples():
    assert push_diagonal_left(Circuit(1, [x(0), t(0)])).gates == (omega(1),) + (t(0),) * 7 + (x(0),)
    affine = Circuit(3, [cnot(0, 1), x(2), swap(1, 2)])
    assert push_diagonal_left(affine) == affine
    # T on the control passes through the CNOT
    assert push_diagonal_left(Circuit(2, [cnot(0, 1), t(0)])).gates == (t(0), cnot(0, 1))
    # T on the target picks up the control
    assert push_diagonal_left(Circuit(2, [cnot(0, 1), t(1)])).gates == (u(0, 1), cnot(0, 1))


def test_push_diagonal_left_shape_and_semantics():
    rng = random.Random(13)
    for _ in range(100):
        mode = rng.choice(list(Mode))
        c = random_circuit(rng, rng.randint(1, 4), rng.randint(0, 8), mode)
        out = push_diagonal_left(c, mode)
        kinds = [g.is_diagonal for g in out.gates]
        assert kinds == sorted(kinds, reverse=True)
        assert evaluate(out) == evaluate(c)


def test_push_diagonal_left_trace_replays():
    rng = random.Random(14)
    for _ in range(30):
        c = random_circuit(rng, 3, 6)
        trace = []
        out = push_diagonal_left(c, trace=trace)
        cur = c
        for rid, pos, direction in trace:
            cur = apply_step(cur, rid, pos, direction)
        assert cur == out


def test_push_diagonal_left_fuel():
    c = Circuit(3, [cnot(0, 1), cnot(1, 2), cnot(2, 0)] * 4 + [v(0, 1, 2)])
    with pytest.raises(FuelExhausted):
        push_diagonal_left(c, fuel=10)


def test_reduce_degrees_examples():
    out = reduce_degrees([v(0, 1, 2)] * 2)
    assert out == [t(q) for q in range(3) for _ in range(6)] + [u(a, b) for a, b in [(0, 1), (0, 2), (1, 2)] for _ in range(2)]
    assert reduce_degrees([omega(5), omega(5)]) == [omega(2)]
    assert reduce_degrees([u(0, 1)] * 4) == [t(0)] * 4 + [t(1)] * 4
    assert reduce_degrees([omega(4), omega(4)]) == []
    assert reduce_degrees([t(1), u(0, 1), t(0)] + [t(0)] * 8) == [t(0), t(1), u(0, 1)]


def test_reduce_degrees_rejects_affine():
    with pytest.raises(ValueError):
        reduce_degrees([t(0), x(0)])
    with pytest.raises(ValueError):
        reduce_degrees([swap(0, 1)])


def test_reduce_degrees_trace_replays():
    rng = random.Random(15)
    for _ in range(30):
        gates = [rng.choice([t(0), t(1), t(2), u(0, 1), u(1, 2), v(0, 1, 2), omega(rng.randrange(8))])
                 for _ in range(rng.randint(0, 25))]
        trace = []
        out = reduce_degrees(gates, trace)
        cur = Circuit(3, gates)
        for rid, pos, direction in trace:
            cur = apply_step(cur, rid, pos, direction)
        assert list(cur.gates) == out


def test_rewrite_to_da_split():
    c = Circuit(2, [x(0), t(0), cnot(0, 1), t(1)])
    diag, aff = rewrite_to_da(c)
    assert all(g.is_diagonal for g in diag) and aff == [x(0), cnot(0, 1)]
    assert evaluate(Circuit(2, diag + aff)) == evaluate(c)


def test_normalize_by_rewriting_examples():
    lhs = Circuit(4, [cnot(3, 2), v(0, 1, 2), cnot(3, 2)])
    rhs = Circuit(4, R13_RHS)
    assert normalize_by_rewriting(lhs) == normalize_by_rewriting(rhs)
    assert normalize_by_rewriting(Circuit(2, [])) == Circuit(2, [])


def test_normalize_by_rewriting_matches_normalize():
    rng = random.Random(16)
    for _ in range(500):
        mode = rng.choice(list(Mode))
        c = random_circuit(rng, rng.randint(1, 4), rng.randint(0, 40), mode)
        assert normalize_by_rewriting(c, mode) == normalize(c, mode)


def test_normalize_by_rewriting_trace_replays():
    rng = random.Random(17)
    for _ in range(40):
        c = random_circuit(rng, rng.randint(1, 4), rng.randint(0, 15))
        trace = []
        out = normalize_by_rewriting(c, trace=trace)
        assert trace[-1][0] == "AFFINE-NF"
        cur = c
        for rid, pos, direction in trace[:-1]:
            cur = apply_step(cur, rid, pos, direction)
        diag_len = trace[-1][1]
        assert cur.gates[:diag_len] == out.gates[:diag_len]
        assert all(g.is_affine for g in cur.gates[diag_len:])
        assert evaluate(cur) == evaluate(c)


def test_normalize_by_rewriting_validates_mode():
    with pytest.raises(InvalidCircuit):
        normalize_by_rewriting(Circuit(1, [x(0)]), "cnott")
