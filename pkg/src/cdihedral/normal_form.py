"""Normal forms: a diagonal block followed by an affine block.

The diagonal block is ``omega**a0``, then ``T`` powers per qubit, ``U`` powers
per pair and ``V`` powers per triple, all in lexicographic order.  The affine
block is a sequence of ladders on the wire sets ``{0..n-1}``, ``{0..n-2}``,
..., ``{0, 1}`` followed by a layer of at most one ``X`` per qubit.

A ladder on ``{0..b}`` is two stairs of CNOTs, each CNOT used at most once:

* the ascending stair rises from the bottom wire ``b`` to some wire ``p``:
  an optional ``CNOT(p, b)`` followed by ``CNOT(b, j)`` for the rising wires
  ``j`` in ascending order (always including ``p`` when ``p < b``);
* the descending stair spans the whole ladder: ``CNOT(j, b)`` for a subset of
  wires ``j < b`` in ascending order.

On ``k`` wires there are ``2**k - 1`` ascending stairs and ``2**(k-1)``
descending ones, one ladder per coset of the maps that fix wire ``b``.
"""

from __future__ import annotations

from .circuit import Circuit, Gate, Mode, check, cnot, omega, t, u, v, x
from .phasepoly import CanonicalDiagonal, canonicalize
from .semantics import AffineMap, _bit, evaluate, gf2_inverse


class ModeViolation(ValueError):
    pass


def synth_diagonal(d: CanonicalDiagonal, mode: Mode | str = Mode.DIHEDRAL) -> list[Gate]:
    mode = Mode.parse(mode)
    if mode is Mode.CNOTT and d.a0:
        raise ModeViolation("CNOT+T normal forms are scalar-free (a0 must be 0)")
    gates: list[Gate] = []
    if d.a0:
        gates.append(omega(d.a0))
    for q, k in enumerate(d.a):
        gates += [t(q)] * k
    for (i, j), k in d.pair_items():
        gates += [u(i, j)] * k
    for (i, j, l), k in d.triple_items():
        gates += [v(i, j, l)] * k
    return gates


def _linear_of(gates: list[Gate], n: int) -> AffineMap:
    rows = [_bit(n, q) for q in range(n)]
    for g in gates:
        ctl, tgt = g.qubits
        rows[tgt] ^= rows[ctl]
    return AffineMap(n, tuple(rows))


def _has(vec: int, n: int, j: int) -> bool:
    return bool(vec & _bit(n, j))


def ladder(m: AffineMap, b: int) -> list[Gate]:
    """The ladder on ``{0..b}`` whose removal leaves ``m`` acting trivially on wire ``b``.

    ``m`` must be linear and act trivially on wires ``> b``.
    """
    n = m.n
    inv = gf2_inverse(m.rows, n)
    # col = m^-1 e_b is the input that m sends to e_b; row = output bit b of m
    col = sum(_bit(n, j) for j in range(n) if _has(inv[j], n, b))
    row = m.rows[b]
    support = [j for j in range(b) if _has(col, n, j)]
    rising: list[Gate] = []
    if not _has(col, n, b):
        rising.append(cnot(support[0], b))
    rising += [cnot(b, j) for j in support]
    # choose the descending stair so that output bit b equals `row`
    p_inv = gf2_inverse(_linear_of(rising, n).rows, n)
    s = 0
    for i in range(n):
        if _has(row, n, i):
            s ^= p_inv[i]
    assert _has(s, n, b)
    falling = [cnot(j, b) for j in range(b) if _has(s, n, j)]
    return rising + falling


def synth_affine(f: AffineMap, mode: Mode | str = Mode.DIHEDRAL) -> list[Gate]:
    mode = Mode.parse(mode)
    if mode is Mode.CNOTT and f.offset:
        raise ModeViolation("CNOT+T normal forms are linear (offset must be 0)")
    n = f.n
    residual = AffineMap(n, f.rows)
    gates: list[Gate] = []
    for b in range(n - 1, 0, -1):
        step = ladder(residual, b)
        gates += step
        # residual = m . L^-1, i.e. undo the ladder first
        residual = _linear_of(step[::-1], n).then(residual)
        assert residual.rows[b] == _bit(n, b)
    assert residual.is_identity()
    gates += [x(q) for q in range(n) if _has(f.offset, n, q)]
    return gates


def normalize(c: Circuit, mode: Mode | str = Mode.DIHEDRAL) -> Circuit:
    """The unique normal form of ``c``; equal operators give identical gate lists."""
    mode = Mode.parse(mode)
    op = evaluate(c, mode)
    d = canonicalize(op.phase)
    return Circuit(c.n, synth_diagonal(d, mode) + synth_affine(op.affine, mode))


def equivalent(c1: Circuit, c2: Circuit, mode: Mode | str = Mode.DIHEDRAL) -> bool:
    if c1.n != c2.n:
        raise ValueError(f"dimension mismatch: {c1.n} vs {c2.n}")
    return evaluate(c1, mode) == evaluate(c2, mode)


# structural checks

def _diag_key(g: Gate):
    return ("omega", "t", "u", "v").index(g.name), g.qubits


def split_normal_form(c: Circuit) -> tuple[list[Gate], list[Gate]]:
    gates = list(c.gates)
    k = 0
    while k < len(gates) and gates[k].is_diagonal:
        k += 1
    return gates[:k], gates[k:]


def is_diagonal_normal_form(gates: list[Gate], mode: Mode | str = Mode.DIHEDRAL) -> bool:
    mode = Mode.parse(mode)
    if any(not g.is_diagonal for g in gates):
        return False
    if [_diag_key(g) for g in gates] != sorted(_diag_key(g) for g in gates):
        return False
    omegas = [g for g in gates if g.name == "omega"]
    if len(omegas) > 1 or any(g.k == 0 for g in omegas) or (mode is Mode.CNOTT and omegas):
        return False
    bound = {"t": 8, "u": 4, "v": 2}
    counts: dict[Gate, int] = {}
    for g in gates:
        counts[g] = counts.get(g, 0) + 1
    return all(cnt < bound[g.name] for g, cnt in counts.items() if g.name != "omega")


def is_affine_normal_form(gates: list[Gate], n: int, mode: Mode | str = Mode.DIHEDRAL) -> bool:
    """Check the ladder/X-layer shape described in the module docstring."""
    mode = Mode.parse(mode)
    pos = 0

    def peek():
        return gates[pos] if pos < len(gates) else None

    for b in range(n - 1, 0, -1):
        g = peek()
        jump = None
        if g is not None and g.name == "cnot" and g.qubits[1] == b and (
            pos + 1 < len(gates) and gates[pos + 1] == cnot(b, g.qubits[0])
        ):
            jump = g.qubits[0]
            pos += 1
        rising = []
        while (g := peek()) is not None and g.name == "cnot" and g.qubits[0] == b and g.qubits[1] < b:
            rising.append(g.qubits[1])
            pos += 1
        if rising != sorted(set(rising)):
            return False
        if jump is not None and (not rising or rising[0] != jump):
            return False
        falling = []
        while (g := peek()) is not None and g.name == "cnot" and g.qubits[1] == b and g.qubits[0] < b:
            falling.append(g.qubits[0])
            pos += 1
        if falling != sorted(set(falling)):
            return False
    xs = []
    while (g := peek()) is not None and g.name == "x":
        xs.append(g.qubits[0])
        pos += 1
    if xs != sorted(set(xs)) or (mode is Mode.CNOTT and xs):
        return False
    return pos == len(gates)


def is_normal_form(c: Circuit, mode: Mode | str = Mode.DIHEDRAL) -> bool:
    diag, aff = split_normal_form(c)
    return is_diagonal_normal_form(diag, mode) and is_affine_normal_form(aff, c.n, mode)

