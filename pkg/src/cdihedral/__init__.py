"""Exact semantics, normal forms and rewriting for CNOT-dihedral circuits."""

from .circuit import (
    Circuit,
    CircuitSyntaxError,
    Gate,
    InvalidCircuit,
    Mode,
    check,
    cnot,
    dumps,
    omega,
    parse,
    swap,
    t,
    u,
    v,
    validate,
    x,
)
from .normal_form import equivalent, is_normal_form, normalize, synth_affine, synth_diagonal
from .phasepoly import CanonicalDiagonal, NotDihedral, canonicalize, extract, multilinear
from .semantics import AffineMap, ExactOperator, compose, dagger, evaluate, gate_semantics

__all__ = [
    "AffineMap", "CanonicalDiagonal", "Circuit", "CircuitSyntaxError", "ExactOperator", "Gate",
    "InvalidCircuit", "Mode", "NotDihedral", "canonicalize", "check", "cnot", "compose", "dagger",
    "dumps", "equivalent", "evaluate", "extract", "gate_semantics", "is_normal_form", "multilinear",
    "normalize", "omega", "parse", "swap", "synth_affine", "synth_diagonal", "t", "u", "v",
    "validate", "x",
]
