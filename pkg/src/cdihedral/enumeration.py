"""Group orders by formula and by brute force.

The brute-force side never consults the formulas: the group closure is a
breadth-first search from the identity, the diagonal count takes distinct
phase tables over the whole coefficient space, and the affine count tests
every bit matrix for invertibility.

For comparison, the number of ancilla-free diagonal Clifford+T operators on
``n`` qubits is known to be ``8**(2**n - 1)``; it is not computed here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from math import comb, prod

import numpy as np

from .circuit import Mode, cnot, omega, swap, t, x
from .phasepoly import term_basis
from .semantics import gate_semantics, gf2_inverse

DEFAULT_CAP = 10**8
KINDS = ("group", "diagonal", "affine")


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CountReport:
    n: int
    mode: str
    what: str
    formula_value: int
    enumerated_value: int | None = None

    @property
    def match(self) -> bool | None:
        if self.enumerated_value is None:
            return None
        return self.formula_value == self.enumerated_value

    def to_json(self) -> dict:
        out = {"n": self.n, "mode": self.mode, "what": self.what, "formula_value": self.formula_value,
               "enumerated_value": self.enumerated_value}
        if self.enumerated_value is not None:
            out["match"] = self.match
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _gl_order(n: int) -> int:
    return prod((1 << n) - (1 << (i - 1)) for i in range(1, n + 1))


def order_formula(n: int, mode: Mode | str = Mode.DIHEDRAL, what: str = "group") -> int:
    """Exact size of the selected group.  CNOT+T drops the scalars and the X offsets."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if what not in KINDS:
        raise ValueError(f"unknown count {what!r}; expected one of {KINDS}")
    cnott = Mode.parse(mode) is Mode.CNOTT
    diagonal = 8 ** n * 4 ** comb(n, 2) * 2 ** comb(n, 3) * (1 if cnott else 8)
    affine = _gl_order(n) * (1 if cnott else 2 ** n)
    if what == "diagonal":
        return diagonal
    if what == "affine":
        return affine
    return diagonal * affine


def _generators(n: int, mode: Mode) -> list:
    gates = [t(q) for q in range(n)]
    gates += [cnot(a, b) for a in range(n) for b in range(n) if a != b]
    gates += [swap(a, b) for a in range(n) for b in range(a + 1, n)]
    if mode is Mode.DIHEDRAL:
        gates += [omega(1)] + [x(q) for q in range(n)]
    return [gate_semantics(g, n) for g in gates]


def enumerate_closure(n: int, mode: Mode | str = Mode.DIHEDRAL, cap: int = DEFAULT_CAP) -> int:
    """Size of the group generated by the gates of ``mode`` on ``n`` wires, by breadth-first search.

    An operator is keyed by its basis-image table together with its phase
    table, which determine it exactly.  The frontier is advanced with numpy,
    one generator at a time.
    """
    mode = Mode.parse(mode)
    if n < 1:
        raise ValueError("n must be at least 1")
    if order_formula(n, mode) > cap:
        raise CapExceeded(f"group on {n} qubits exceeds the cap of {cap} elements")
    size = 1 << n
    ident = np.concatenate([np.arange(size), np.zeros(size, dtype=np.int64)])[None, :]
    gens = [(np.asarray(g.affine.table), g.phase.astype(np.int64)) for g in _generators(n, mode)]

    def keys(rows: np.ndarray) -> list[bytes]:
        packed = np.ascontiguousarray(rows.astype(np.uint32))
        return [r.tobytes() for r in packed]

    seen = set(keys(ident))
    frontier = ident
    while len(frontier):
        images, phases = frontier[:, :size], frontier[:, size:]
        fresh = []
        for g_img, g_phase in gens:
            # apply the generator after each frontier element
            cand = np.concatenate([g_img[images], (phases + g_phase[images]) % 8], axis=1)
            for k, row in zip(keys(cand), cand):
                if k not in seen:
                    seen.add(k)
                    fresh.append(row)
            if len(seen) > cap:
                raise CapExceeded(f"closure exceeded {cap} elements")
        frontier = np.array(fresh, dtype=np.int64).reshape(-1, 2 * size)
    return len(seen)


def enumerate_diagonal(n: int, mode: Mode | str = Mode.DIHEDRAL, cap: int = DEFAULT_CAP) -> int:
    """Distinct phase tables over the full space of canonical coefficient tuples."""
    if n < 1:
        raise ValueError("n must be at least 1")
    cnott = Mode.parse(mode) is Mode.CNOTT
    ranges = [1 if cnott else 8] + [8] * n + [4] * comb(n, 2) + [2] * comb(n, 3)
    space = prod(ranges)
    if space > cap:
        raise CapExceeded(f"coefficient space of {space} tuples exceeds the cap of {cap}")
    grids = np.meshgrid(*[np.arange(r, dtype=np.int64) for r in ranges], indexing="ij")
    coeffs = np.stack([g.ravel() for g in grids], axis=1)
    tables = coeffs @ term_basis(n) % 8
    return len(np.unique(tables, axis=0))


def enumerate_affine(n: int, mode: Mode | str = Mode.DIHEDRAL) -> int:
    """Invertible ``(matrix, offset)`` pairs over Z_2, counted by testing every matrix."""
    if not 1 <= n <= 4:
        raise ValueError("affine enumeration supports 1 <= n <= 4")
    full = range(1 << n)
    invertible = sum(gf2_inverse(rows, n) is not None for rows in product(full, repeat=n))
    return invertible * (1 if Mode.parse(mode) is Mode.CNOTT else 1 << n)


def count(n: int, mode: Mode | str = Mode.DIHEDRAL, what: str = "group", enumerate_: bool = False,
          cap: int = DEFAULT_CAP) -> CountReport:
    mode = Mode.parse(mode)
    formula = order_formula(n, mode, what)
    found = None
    if enumerate_:
        if what == "group":
            found = enumerate_closure(n, mode, cap)
        elif what == "diagonal":
            found = enumerate_diagonal(n, mode, cap)
        else:
            found = enumerate_affine(n, mode)
    return CountReport(n, mode.value, what, formula, found)
