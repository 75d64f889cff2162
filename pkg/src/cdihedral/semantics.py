"""Exact monomial-matrix semantics.

Every circuit over the gate set acts on a basis state as
``|x> -> omega**p(x) |f(x)>`` with ``p(x)`` in Z_8 and ``f`` an invertible
affine map over Z_2.  An :class:`ExactOperator` stores ``p`` as a table over
all ``2**n`` basis states and ``f`` as a bit matrix plus offset.

Bit vectors are ints laid out like basis indices: qubit ``q`` is bit
``n - 1 - q``, so qubit 0 is the most significant bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .circuit import Circuit, Gate, Mode, check

MAX_QUBITS = 24


def _bit(n: int, q: int) -> int:
    return 1 << (n - 1 - q)


def _parity(v: int) -> int:
    return bin(v).count("1") & 1


def _guard(n: int) -> None:
    if not 0 <= n <= MAX_QUBITS:
        raise ValueError(f"n={n} outside supported range 0..{MAX_QUBITS}")


def gf2_inverse(rows: tuple[int, ...], n: int) -> tuple[int, ...] | None:
    """Inverse of a square bit matrix by Gauss-Jordan elimination, or None if singular.

    Row ``q`` of the matrix is an int whose bit ``n-1-j`` is entry ``(q, j)``.
    """
    a = list(rows)
    inv = [_bit(n, q) for q in range(n)]
    for col in range(n):
        mask = _bit(n, col)
        pivot = next((r for r in range(col, n) if a[r] & mask), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        for r in range(n):
            if r != col and a[r] & mask:
                a[r] ^= a[col]
                inv[r] ^= inv[col]
    return tuple(inv)


@dataclass(frozen=True)
class AffineMap:
    """``x -> M x + b`` over Z_2; ``rows[q]`` gives output bit ``q`` as a parity of input bits."""

    n: int
    rows: tuple[int, ...]
    offset: int = 0

    def __post_init__(self) -> None:
        _guard(self.n)
        object.__setattr__(self, "rows", tuple(self.rows))
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        if any(r & ~full for r in self.rows) or self.offset & ~full:
            raise ValueError("matrix or offset has bits beyond n")
        if gf2_inverse(self.rows, self.n) is None:
            raise ValueError("affine map is not invertible over Z_2")

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(n, tuple(_bit(n, q) for q in range(n)), 0)

    @classmethod
    def from_matrix(cls, matrix, offset=None) -> "AffineMap":
        """Build from a 0/1 nested sequence ``matrix[row][col]`` and optional offset bits."""
        n = len(matrix)
        rows = tuple(sum(_bit(n, j) for j, e in enumerate(row) if int(e) & 1) for row in matrix)
        off = 0 if offset is None else sum(_bit(n, j) for j, e in enumerate(offset) if int(e) & 1)
        return cls(n, rows, off)

    def matrix(self) -> list[list[int]]:
        return [[(r >> (self.n - 1 - j)) & 1 for j in range(self.n)] for r in self.rows]

    def offset_bits(self) -> list[int]:
        return [(self.offset >> (self.n - 1 - j)) & 1 for j in range(self.n)]

    @property
    def is_linear(self) -> bool:
        return self.offset == 0

    def __call__(self, x: int) -> int:
        y = self.offset
        for q, r in enumerate(self.rows):
            y ^= _parity(r & x) << (self.n - 1 - q)
        return y

    @cached_property
    def table(self) -> np.ndarray:
        """Image of every basis index, as an int64 array of length ``2**n``."""
        xs = np.arange(1 << self.n, dtype=np.int64)
        ys = np.full_like(xs, self.offset)
        for q, r in enumerate(self.rows):
            ys ^= (np.bitwise_count(xs & r).astype(np.int64) & 1) << (self.n - 1 - q)
        ys.flags.writeable = False
        return ys

    def then(self, second: "AffineMap") -> "AffineMap":
        """``second`` applied after ``self``."""
        if second.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {second.n}")
        # row q of (M2 M1) is the xor of the rows of M1 selected by row q of M2
        rows = []
        for r2 in second.rows:
            acc = 0
            for j in range(self.n):
                if r2 & _bit(self.n, j):
                    acc ^= self.rows[j]
            rows.append(acc)
        off = 0
        # M2 b1 + b2
        for q, r2 in enumerate(second.rows):
            off ^= _parity(r2 & self.offset) << (self.n - 1 - q)
        return AffineMap(self.n, tuple(rows), off ^ second.offset)

    def inverse(self) -> "AffineMap":
        inv = gf2_inverse(self.rows, self.n)
        assert inv is not None
        # x = M^-1 (y + b) = M^-1 y + M^-1 b
        off = 0
        for q, r in enumerate(inv):
            off ^= _parity(r & self.offset) << (self.n - 1 - q)
        return AffineMap(self.n, inv, off)

    def is_identity(self) -> bool:
        return self == AffineMap.identity(self.n)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "matrix": ["".join(map(str, row)) for row in self.matrix()],
            "offset": "".join(map(str, self.offset_bits())),
        }


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.uint8)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class ExactOperator:
    n: int
    phase: np.ndarray
    affine: AffineMap

    def __post_init__(self) -> None:
        _guard(self.n)
        phase = np.asarray(self.phase)
        if phase.shape != (1 << self.n,):
            raise ValueError(f"phase table must have length {1 << self.n}")
        if phase.size and (phase.min() < 0 or phase.max() > 7):
            raise ValueError("phase entries must lie in 0..7")
        object.__setattr__(self, "phase", _frozen(phase))
        if self.affine.n != self.n:
            raise ValueError("affine map dimension mismatch")

    @classmethod
    def identity(cls, n: int) -> "ExactOperator":
        return cls(n, np.zeros(1 << n, dtype=np.uint8), AffineMap.identity(n))

    def encode(self) -> bytes:
        """Canonical byte encoding; equal operators have equal encodings."""
        head = self.n.to_bytes(1, "little")
        width = (self.n + 7) // 8 or 1
        aff = b"".join(r.to_bytes(width, "little") for r in self.affine.rows)
        return head + aff + self.affine.offset.to_bytes(width, "little") + self.phase.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactOperator):
            return NotImplemented
        return self.n == other.n and self.affine == other.affine and np.array_equal(self.phase, other.phase)

    def __hash__(self) -> int:
        return hash(self.encode())

    def __repr__(self) -> str:
        return f"ExactOperator(n={self.n}, phase={self.phase.tolist()}, affine={self.affine.to_json()})"

    def to_json(self) -> dict:
        aff = self.affine.to_json()
        return {"n": self.n, "phase": self.phase.tolist(), "matrix": aff["matrix"], "offset": aff["offset"]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _diagonal_op(n: int, phase: np.ndarray) -> ExactOperator:
    return ExactOperator(n, phase % 8, AffineMap.identity(n))


def _wire_values(n: int, q: int) -> np.ndarray:
    return (np.arange(1 << n, dtype=np.int64) >> (n - 1 - q)) & 1


@lru_cache(maxsize=4096)
def gate_semantics(g: Gate, n: int) -> ExactOperator:
    """Operator of a single gate on ``n`` wires."""
    check(Circuit(n, (g,)))
    ident = AffineMap.identity(n)
    if g.name == "omega":
        return _diagonal_op(n, np.full(1 << n, g.k))
    if g.name in ("t", "u", "v"):
        parity = np.zeros(1 << n, dtype=np.int64)
        for q in g.qubits:
            parity ^= _wire_values(n, q)
        return _diagonal_op(n, parity)
    zero = np.zeros(1 << n, dtype=np.uint8)
    rows = list(ident.rows)
    offset = 0
    if g.name == "x":
        offset = _bit(n, g.qubits[0])
    elif g.name == "cnot":
        c, tq = g.qubits
        rows[tq] ^= _bit(n, c)
    elif g.name == "swap":
        a, b = g.qubits
        rows[a], rows[b] = rows[b], rows[a]
    return ExactOperator(n, zero, AffineMap(n, tuple(rows), offset))


def compose(second: ExactOperator, first: ExactOperator) -> ExactOperator:
    """The operator applying ``first`` and then ``second``."""
    if second.n != first.n:
        raise ValueError(f"dimension mismatch: {second.n} vs {first.n}")
    phase = (first.phase + second.phase[first.affine.table]) % 8
    return ExactOperator(first.n, phase, first.affine.then(second.affine))


def evaluate(c: Circuit, mode: Mode | str = Mode.DIHEDRAL) -> ExactOperator:
    check(c, mode)
    op = ExactOperator.identity(c.n)
    for g in c.gates:
        op = compose(gate_semantics(g, c.n), op)
    return op


def apply(op: ExactOperator, x: int) -> tuple[int, int]:
    """``(phase exponent, output basis index)`` for basis input ``x``."""
    if not 0 <= x < (1 << op.n):
        raise ValueError(f"basis index {x} out of range for n={op.n}")
    return int(op.phase[x]), op.affine(x)


def dagger(op: ExactOperator) -> ExactOperator:
    inv = op.affine.inverse()
    phase = (-op.phase[inv.table].astype(np.int64)) % 8
    return ExactOperator(op.n, phase, inv)


def equal(a: ExactOperator, b: ExactOperator) -> bool:
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    return a == b


def is_diagonal(op: ExactOperator) -> bool:
    return op.affine.is_identity()


def is_affine(op: ExactOperator) -> bool:
    return not op.phase.any()


def bits_to_index(bits: str) -> int:
    """``'101'`` -> 5 (qubit 0 first)."""
    if bits and set(bits) - {"0", "1"}:
        raise ValueError(f"not a bitstring: {bits!r}")
    return int(bits, 2) if bits else 0


def index_to_bits(i: int, n: int) -> str:
    return format(i, f"0{n}b") if n else ""
