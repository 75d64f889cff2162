"""Phase polynomials: symbolic extraction, the multilinear transform over Z_8,
and the canonical coefficient tuple of a diagonal operator.

A diagonal operator is ``|x> -> omega**p(x) |x>``.  Its canonical form is

    p(x) = a0 + sum_i a_i x_i + sum_{i<j} b_ij (x_i ^ x_j) + sum_{i<j<k} c_ijk (x_i ^ x_j ^ x_k)

with ``a`` in Z_8, ``b`` in Z_4 and ``c`` in Z_2.  Each tuple gives a distinct
table, and the tables reached by circuits are exactly the images of tuples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .circuit import Circuit, Mode, check
from .semantics import AffineMap, _bit, _guard

Subset = tuple[int, ...]


class NotDihedral(ValueError):
    """The phase table cannot come from a CNOT-dihedral circuit."""


@dataclass(frozen=True)
class XorPoly:
    """``constant + sum coeff * XOR(x_j for j in S)``, computed mod 8."""

    n: int
    constant: int = 0
    terms: dict[Subset, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        terms = {}
        for s, a in self.terms.items():
            s = tuple(sorted(s))
            if not s:
                raise ValueError("XOR terms must be nonempty; fold constants into `constant`")
            if a % 8:
                terms[s] = a % 8
        object.__setattr__(self, "terms", dict(sorted(terms.items())))
        object.__setattr__(self, "constant", self.constant % 8)

    def __str__(self) -> str:
        parts = [str(self.constant)] if self.constant or not self.terms else []
        for s, a in self.terms.items():
            parts.append(f"{a}*(" + " ^ ".join(f"x{j}" for j in s) + ")")
        return " + ".join(parts)


@dataclass(frozen=True)
class MultilinearPoly:
    """Coefficients over Z_8 of the monomials ``prod(x_j for j in S)``; zero coefficients omitted."""

    n: int
    coeffs: dict[Subset, int]

    def __getitem__(self, s: Subset) -> int:
        return self.coeffs.get(tuple(sorted(s)), 0)

    def degree(self) -> int:
        return max((len(s) for s in self.coeffs), default=-1)


def _pairs(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


def _triples(n: int) -> list[tuple[int, int, int]]:
    return list(combinations(range(n), 3))


@dataclass(frozen=True)
class CanonicalDiagonal:
    """Normal-form coefficients; ``b`` and ``c`` are listed in lexicographic pair/triple order."""

    n: int
    a0: int = 0
    a: tuple[int, ...] = ()
    b: tuple[int, ...] = ()
    c: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        n = self.n
        a = tuple(self.a) or (0,) * n
        b = tuple(self.b) or (0,) * (n * (n - 1) // 2)
        c = tuple(self.c) or (0,) * (n * (n - 1) * (n - 2) // 6)
        if len(a) != n or len(b) != len(_pairs(n)) or len(c) != len(_triples(n)):
            raise ValueError("coefficient vector lengths do not match n")
        if not 0 <= self.a0 < 8 or any(not 0 <= e < 8 for e in a):
            raise ValueError("a0 and a_i must lie in Z_8")
        if any(not 0 <= e < 4 for e in b):
            raise ValueError("b_ij must lie in Z_4")
        if any(not 0 <= e < 2 for e in c):
            raise ValueError("c_ijk must lie in Z_2")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_dicts(cls, n: int, a0: int = 0, a=None, b=None, c=None) -> "CanonicalDiagonal":
        """Build from sparse maps, e.g. ``b={(0, 1): 3}``."""
        a_vec = [0] * n
        for i, e in (a or {}).items():
            a_vec[i] = e
        b = {tuple(sorted(k)): e for k, e in (b or {}).items()}
        c = {tuple(sorted(k)): e for k, e in (c or {}).items()}
        return cls(n, a0, tuple(a_vec), tuple(b.get(p, 0) for p in _pairs(n)),
                   tuple(c.get(tr, 0) for tr in _triples(n)))

    def pair_items(self):
        return zip(_pairs(self.n), self.b)

    def triple_items(self):
        return zip(_triples(self.n), self.c)

    def vector(self) -> tuple[int, ...]:
        return (self.a0, *self.a, *self.b, *self.c)

    def to_json(self) -> dict:
        return {
            "a0": self.a0,
            "a": list(self.a),
            "b": {f"{i},{j}": e for (i, j), e in self.pair_items()},
            "c": {f"{i},{j},{k}": e for (i, j, k), e in self.triple_items()},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def extract(c: Circuit, mode: Mode | str = Mode.DIHEDRAL) -> tuple[XorPoly, AffineMap]:
    """Symbolic execution: track each wire as a parity of inputs plus a complement bit."""
    check(c, mode)
    n = c.n
    masks = [_bit(n, q) for q in range(n)]
    flips = [0] * n
    constant = 0
    terms: dict[Subset, int] = {}

    def add(wires, coeff=1):
        nonlocal constant
        mask, flip = 0, 0
        for q in wires:
            mask ^= masks[q]
            flip ^= flips[q]
        s = tuple(j for j in range(n) if mask & _bit(n, j))
        # coeff * (1 ^ s) == coeff + (-coeff) * s on 0/1 values
        if flip:
            constant += coeff
            coeff = -coeff
        terms[s] = (terms.get(s, 0) + coeff) % 8

    for g in c.gates:
        name, qs = g.name, g.qubits
        if name == "omega":
            constant += g.k
        elif name == "x":
            flips[qs[0]] ^= 1
        elif name == "cnot":
            ctl, tgt = qs
            masks[tgt] ^= masks[ctl]
            flips[tgt] ^= flips[ctl]
        elif name == "swap":
            a, b = qs
            masks[a], masks[b] = masks[b], masks[a]
            flips[a], flips[b] = flips[b], flips[a]
        else:
            add(qs)
    offset = sum(_bit(n, q) for q in range(n) if flips[q])
    return XorPoly(n, constant, terms), AffineMap(n, tuple(masks), offset)


def _parity_table(n: int, s: Subset) -> np.ndarray:
    xs = np.arange(1 << n, dtype=np.int64)
    mask = sum(_bit(n, j) for j in s)
    return np.bitwise_count(xs & mask).astype(np.int64) & 1


def to_phase_table(p: XorPoly) -> np.ndarray:
    _guard(p.n)
    table = np.full(1 << p.n, p.constant, dtype=np.int64)
    for s, a in p.terms.items():
        table += a * _parity_table(p.n, s)
    return (table % 8).astype(np.uint8)


def _index_to_subset(n: int, idx: int) -> Subset:
    return tuple(j for j in range(n) if idx & _bit(n, j))


def mobius(table) -> np.ndarray:
    """Coefficient array of the multilinear interpolant, indexed like the table.

    Entry ``idx`` is the coefficient of the monomial over the qubits set in ``idx``.
    """
    q = np.asarray(table, dtype=np.int64).copy()
    size = q.shape[0]
    n = size.bit_length() - 1
    if size != 1 << n:
        raise ValueError("table length must be a power of two")
    for j in range(n):
        step = 1 << j
        view = q.reshape(-1, 2, step)
        view[:, 1, :] -= view[:, 0, :]
    return q % 8


def multilinear(table) -> MultilinearPoly:
    q = mobius(table)
    n = q.shape[0].bit_length() - 1
    coeffs = {_index_to_subset(n, int(i)): int(q[i]) for i in np.flatnonzero(q)}
    return MultilinearPoly(n, dict(sorted(coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))))


def _index(n: int, s) -> int:
    return sum(_bit(n, j) for j in s)


def canonicalize(table) -> CanonicalDiagonal:
    """Triangular solve for the canonical coefficients, highest degree first.

    Raises :class:`NotDihedral` if the table has a monomial of degree >= 4, a
    cubic coefficient not divisible by 4, or an odd quadratic residual.
    """
    q = mobius(table)
    n = q.shape[0].bit_length() - 1
    high = [int(i) for i in np.flatnonzero(q) if bin(int(i)).count("1") >= 4]
    if high:
        raise NotDihedral(f"nonzero coefficient on monomial {_index_to_subset(n, high[0])}")
    c = []
    for tr in _triples(n):
        coeff = int(q[_index(n, tr)])
        if coeff % 4:
            raise NotDihedral(f"cubic coefficient {coeff} on {tr} not divisible by 4")
        cc = coeff // 4
        c.append(cc)
        if cc:
            # x^y^z = x + y + z - 2(xy + xz + yz) + 4xyz
            for i in tr:
                q[_index(n, (i,))] -= 1
            for pr in combinations(tr, 2):
                q[_index(n, pr)] += 2
            q[_index(n, tr)] -= 4
    q %= 8
    b = []
    for pr in _pairs(n):
        coeff = int(q[_index(n, pr)])
        if coeff % 2:
            raise NotDihedral(f"quadratic residual {coeff} on {pr} is odd")
        bb = (-(coeff // 2)) % 4
        b.append(bb)
        # b (x ^ y) = b x + b y - 2b xy
        for i in pr:
            q[_index(n, (i,))] -= bb
        q[_index(n, pr)] += 2 * bb
    q %= 8
    a = tuple(int(q[_index(n, (i,))]) for i in range(n))
    return CanonicalDiagonal(n, int(q[0]), a, tuple(b), tuple(c))


@lru_cache(maxsize=32)
def term_basis(n: int) -> np.ndarray:
    """Rows are the 0/1 tables of ``1, x_i, x_i^x_j, x_i^x_j^x_k`` in coefficient-vector order."""
    _guard(n)
    rows = [np.ones(1 << n, dtype=np.int64)]
    rows += [_parity_table(n, (i,)) for i in range(n)]
    rows += [_parity_table(n, p) for p in _pairs(n)]
    rows += [_parity_table(n, tr) for tr in _triples(n)]
    basis = np.array(rows, dtype=np.int64).reshape(len(rows), 1 << n)
    basis.flags.writeable = False
    return basis


def canonical_to_table(d: CanonicalDiagonal) -> np.ndarray:
    vec = np.array(d.vector(), dtype=np.int64)
    return ((vec @ term_basis(d.n)) % 8).astype(np.uint8)
