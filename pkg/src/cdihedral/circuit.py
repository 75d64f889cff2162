"""Gate-list circuits over {omega, X, T, CNOT, SWAP, U, V} and the ``.cdq`` text format.

Qubit 0 is the top wire and the most significant bit of a basis index.
Gates are listed in application order: the leftmost gate acts first.

    qubits 3
    # a doubly-controlled Z, written in normal form
    t 0
    t 1
    ...
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Sequence

GATE_ARITY = {"omega": 0, "x": 1, "t": 1, "cnot": 2, "swap": 2, "u": 2, "v": 3}
AFFINE_GATES = frozenset({"x", "cnot", "swap"})
DIAGONAL_GATES = frozenset({"omega", "t", "u", "v"})
# gates whose wire list is a set, stored sorted
SYMMETRIC_GATES = frozenset({"swap", "u", "v"})


class Mode(enum.Enum):
    DIHEDRAL = "dihedral"
    CNOTT = "cnott"

    @classmethod
    def parse(cls, value: "str | Mode") -> "Mode":
        if isinstance(value, Mode):
            return value
        return cls(value.lower())


@dataclass(frozen=True, order=True)
class Gate:
    """A single gate. ``k`` is only meaningful for ``omega`` (the exponent of the scalar)."""

    name: str
    qubits: tuple[int, ...] = ()
    k: int = 0

    def __post_init__(self) -> None:
        if self.name not in GATE_ARITY:
            raise ValueError(f"unknown gate {self.name!r}")
        qubits = tuple(int(q) for q in self.qubits)
        if self.name in SYMMETRIC_GATES:
            qubits = tuple(sorted(qubits))
        object.__setattr__(self, "qubits", qubits)

    @property
    def is_affine(self) -> bool:
        return self.name in AFFINE_GATES

    @property
    def is_diagonal(self) -> bool:
        return self.name in DIAGONAL_GATES

    def inverse(self) -> list["Gate"]:
        """Gates implementing the inverse, in application order."""
        if self.name == "omega":
            return [] if self.k % 8 == 0 else [omega(8 - self.k % 8)]
        if self.name in ("t", "u", "v"):
            return [self] * 7
        return [self]

    def __str__(self) -> str:
        if self.name == "omega":
            return f"omega {self.k}"
        return " ".join([self.name, *map(str, self.qubits)])


def omega(k: int = 1) -> Gate:
    return Gate("omega", (), k)


def x(q: int) -> Gate:
    return Gate("x", (q,))


def t(q: int) -> Gate:
    return Gate("t", (q,))


def cnot(control: int, target: int) -> Gate:
    return Gate("cnot", (control, target))


def swap(a: int, b: int) -> Gate:
    return Gate("swap", (a, b))


def u(a: int, b: int) -> Gate:
    return Gate("u", (a, b))


def v(a: int, b: int, c: int) -> Gate:
    return Gate("v", (a, b, c))


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n != self.n:
            raise ValueError(f"wire count mismatch: {self.n} vs {other.n}")
        return Circuit(self.n, self.gates + other.gates)

    def inverse(self) -> "Circuit":
        out: list[Gate] = []
        for g in reversed(self.gates):
            out.extend(g.inverse())
        return Circuit(self.n, out)


@dataclass(frozen=True)
class Violation:
    position: int
    message: str

    def __str__(self) -> str:
        return f"gate {self.position}: {self.message}"


def validate(c: Circuit, mode: Mode | str = Mode.DIHEDRAL) -> list[Violation]:
    """Return every invariant violation of ``c`` (an empty list means valid)."""
    mode = Mode.parse(mode)
    out = []
    if c.n < 0:
        out.append(Violation(-1, f"negative wire count {c.n}"))
    for pos, g in enumerate(c.gates):
        if len(g.qubits) != GATE_ARITY[g.name]:
            out.append(Violation(pos, f"{g.name} takes {GATE_ARITY[g.name]} qubits, got {len(g.qubits)}"))
        for q in g.qubits:
            if not 0 <= q < c.n:
                out.append(Violation(pos, f"qubit index {q} out of range for n={c.n}"))
        if len(set(g.qubits)) != len(g.qubits):
            out.append(Violation(pos, f"repeated qubit in {g}"))
        if g.name == "omega" and not 0 <= g.k <= 7:
            out.append(Violation(pos, f"omega exponent {g.k} not in 0..7"))
        if mode is Mode.CNOTT and g.name in ("x", "omega"):
            out.append(Violation(pos, f"{g.name} gate not allowed in CNOT+T mode"))
    return out


class InvalidCircuit(ValueError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(map(str, self.violations)))


def check(c: Circuit, mode: Mode | str = Mode.DIHEDRAL) -> Circuit:
    """Raise :class:`InvalidCircuit` unless ``c`` is valid in ``mode``."""
    problems = validate(c, mode)
    if problems:
        raise InvalidCircuit(problems)
    return c


class CircuitSyntaxError(ValueError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


_INT = re.compile(r"^[0-9]+$")


def parse(text: str) -> Circuit:
    """Parse ``.cdq`` text. Raises :class:`CircuitSyntaxError` on malformed input."""
    n = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0].lower()
        args = words[1:]
        for a in args:
            if not _INT.match(a):
                raise CircuitSyntaxError(lineno, f"expected a non-negative integer, got {a!r}")
        nums = [int(a) for a in args]
        if head == "qubits":
            if n is not None:
                raise CircuitSyntaxError(lineno, "duplicate 'qubits' header")
            if len(nums) != 1:
                raise CircuitSyntaxError(lineno, "'qubits' takes one argument")
            n = nums[0]
            continue
        if n is None:
            raise CircuitSyntaxError(lineno, "expected 'qubits <n>' before the first gate")
        if head not in GATE_ARITY:
            raise CircuitSyntaxError(lineno, f"unknown gate {words[0]!r}")
        if head == "omega":
            if len(nums) != 1:
                raise CircuitSyntaxError(lineno, "'omega' takes one exponent")
            if nums[0] > 7:
                raise CircuitSyntaxError(lineno, f"omega exponent {nums[0]} not in 0..7")
            gates.append(omega(nums[0]))
            continue
        if len(nums) != GATE_ARITY[head]:
            raise CircuitSyntaxError(lineno, f"'{head}' takes {GATE_ARITY[head]} qubit indices")
        for q in nums:
            if q >= n:
                raise CircuitSyntaxError(lineno, f"qubit index {q} overflows n={n}")
        if len(set(nums)) != len(nums):
            raise CircuitSyntaxError(lineno, f"repeated qubit index in '{line}'")
        gates.append(Gate(head, tuple(nums)))
    if n is None:
        raise CircuitSyntaxError(0, "missing 'qubits <n>' header")
    return Circuit(n, gates)


def dumps(c: Circuit) -> str:
    """Canonical text for ``c``; ``parse(dumps(c)) == c``."""
    lines = [f"qubits {c.n}"]
    lines.extend(str(g) for g in c.gates)
    return "\n".join(lines) + "\n"

