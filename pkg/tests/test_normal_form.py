import random
from itertools import product

import pytest

from cdihedral.circuit import Circuit, Mode, cnot, omega, swap, t, u, v, x
from cdihedral.normal_form import (
    ModeViolation,
    equivalent,
    is_affine_normal_form,
    is_diagonal_normal_form,
    is_normal_form,
    normalize,
    synth_affine,
    synth_diagonal,
)
from cdihedral.phasepoly import CanonicalDiagonal, canonical_to_table, canonicalize
from cdihedral.randomized import random_circuit
from cdihedral.semantics import AffineMap, evaluate, gf2_inverse


def all_affine_maps(n):
    for rows in product(range(1 << n), repeat=n):
        if gf2_inverse(rows, n) is not None:
            for offset in range(1 << n):
                yield AffineMap(n, rows, offset)


def test_synth_diagonal_examples():
    assert synth_diagonal(CanonicalDiagonal(2)) == []
    ccz = canonicalize([0] * 7 + [4])
    gates = synth_diagonal(ccz)
    assert gates == [t(0), t(1), t(2)] + [u(0, 1)] * 3 + [u(0, 2)] * 3 + [u(1, 2)] * 3 + [v(0, 1, 2)]
    assert evaluate(Circuit(3, gates)).phase.tolist() == [0] * 7 + [4]
    assert synth_diagonal(CanonicalDiagonal(1, 2, (1,))) == [omega(2), t(0)]


def test_synth_diagonal_round_trip():
    rng = random.Random(2)
    for _ in range(200):
        n = rng.randint(1, 4)
        d = CanonicalDiagonal(n, rng.randrange(8), [rng.randrange(8) for _ in range(n)],
                              [rng.randrange(4) for _ in range(n * (n - 1) // 2)],
                              [rng.randrange(2) for _ in range(n * (n - 1) * (n - 2) // 6)])
        gates = synth_diagonal(d)
        assert is_diagonal_normal_form(gates)
        assert (evaluate(Circuit(n, gates)).phase == canonical_to_table(d)).all()


def test_synth_diagonal_cnott_rejects_scalar():
    with pytest.raises(ModeViolation):
        synth_diagonal(CanonicalDiagonal(1, 3), Mode.CNOTT)


def test_synth_affine_examples():
    assert synth_affine(AffineMap.identity(3)) == []
    assert synth_affine(AffineMap(1, (1,), 1)) == [x(0)]


def test_synth_affine_worked_example():
    # |x0 x1 x2> -> |(not (x1 ^ x2)) x0 (x0 ^ x1)>
    f = AffineMap.from_matrix([[0, 1, 1], [1, 0, 0], [1, 1, 0]], [1, 0, 0])
    gates = synth_affine(f)
    assert evaluate(Circuit(3, gates)).affine == f
    assert is_affine_normal_form(gates, 3)


@pytest.mark.parametrize("n, expected", [(1, 2), (2, 24), (3, 1344)])
def test_synth_affine_exhaustive(n, expected):
    outputs = set()
    for f in all_affine_maps(n):
        gates = synth_affine(f)
        assert evaluate(Circuit(n, gates)).affine == f
        assert is_affine_normal_form(gates, n)
        outputs.add(tuple(gates))
    assert len(outputs) == expected


def test_affine_normal_forms_are_exactly_the_checked_shapes_n2():
    # every CNOT/X word of length <= 4 on two wires that passes the checker is a synth output
    gates = [cnot(0, 1), cnot(1, 0), x(0), x(1)]
    outputs = {tuple(synth_affine(f)) for f in all_affine_maps(2)}
    for k in range(5):
        for word in product(gates, repeat=k):
            if is_affine_normal_form(list(word), 2):
                assert tuple(word) in outputs


def test_synth_affine_cnott_rejects_offset():
    with pytest.raises(ModeViolation):
        synth_affine(AffineMap(1, (1,), 1), "cnott")


def test_normalize_examples():
    assert normalize(Circuit(1, [t(0)] * 9)) == Circuit(1, [t(0)])
    assert normalize(Circuit(2, [cnot(0, 1), cnot(0, 1)])) == Circuit(2, [])
    # X T X = omega T^7 with a trivial affine part
    assert normalize(Circuit(1, [x(0), t(0), x(0)])) == Circuit(1, [omega(1)] + [t(0)] * 7)


def test_normalize_is_sound_and_canonical():
    rng = random.Random(4)
    for _ in range(300):
        mode = rng.choice(list(Mode))
        c = random_circuit(rng, rng.randint(1, 4), rng.randint(0, 30), mode)
        nf = normalize(c, mode)
        assert evaluate(nf) == evaluate(c)
        assert is_normal_form(nf, mode)
        assert normalize(nf, mode) == nf


def test_equivalent_examples():
    lhs = Circuit(4, [cnot(3, 2), v(0, 1, 2), cnot(3, 2)])
    rhs = Circuit(4, [t(q) for q in range(4) for _ in range(5)]
                  + [u(a, b) for a, b in [(2, 3), (1, 3), (0, 3), (1, 2), (0, 2), (0, 1)] for _ in range(3)]
                  + [v(1, 2, 3), v(0, 2, 3), v(0, 1, 3), v(0, 1, 2)])
    assert equivalent(lhs, rhs)
    assert not equivalent(Circuit(2, [t(0)]), Circuit(2, [t(1)]))
    with pytest.raises(ValueError):
        equivalent(Circuit(1, []), Circuit(2, []))


def test_checkers_reject_non_normal_forms():
    assert not is_diagonal_normal_form([t(1), t(0)])
    assert not is_diagonal_normal_form([t(0)] * 8)
    assert not is_diagonal_normal_form([u(0, 1)] * 4)
    assert not is_diagonal_normal_form([v(0, 1, 2)] * 2)
    assert not is_diagonal_normal_form([omega(1), omega(1)])
    assert not is_diagonal_normal_form([omega(1)], "cnott")
    assert not is_affine_normal_form([x(1), x(0)], 2)
    assert not is_affine_normal_form([cnot(0, 1), cnot(0, 1)], 2)
    assert not is_affine_normal_form([swap(0, 1)], 2)
    assert not is_normal_form(Circuit(1, [x(0), t(0)]))
