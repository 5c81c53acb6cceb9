"""Group law of the step-3 shear group G, its Lie algebra and the Heisenberg embedding.

Canonical coordinates ``(x1, x2, x3, x4)`` stand for
``exp(x4 X4) exp(x3 X3) exp(x2 X2) exp(x1 X1)``. The only non-zero brackets
are ``[X1, X2] = X3`` and ``[X1, X3] = X4``; ``X4`` spans the centre.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GroupElement:
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0
    x4: float = 0.0

    def __post_init__(self):
        if not np.all(np.isfinite(self.as_array())):
            raise ValueError(f"non-finite coordinates: {self}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3, self.x4], dtype=float)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)


@dataclass(frozen=True)
class HeisenbergElement:
    x: float = 0.0
    y: float = 0.0
    s: float = 0.0

    def __mul__(self, other: "HeisenbergElement") -> "HeisenbergElement":
        return HeisenbergElement(self.x + other.x, self.y + other.y,
                                 self.s + other.s + self.x * other.y)


@dataclass(frozen=True)
class AlgebraVector:
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    c4: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3, self.c4])

    def __add__(self, other: "AlgebraVector") -> "AlgebraVector":
        return AlgebraVector(*(self.as_array() + other.as_array()))

    def __sub__(self, other: "AlgebraVector") -> "AlgebraVector":
        return AlgebraVector(*(self.as_array() - other.as_array()))

    def __rmul__(self, scalar) -> "AlgebraVector":
        return AlgebraVector(*(scalar * self.as_array()))

    def __iter__(self):
        return iter((self.c1, self.c2, self.c3, self.c4))


IDENTITY = GroupElement()
X1 = AlgebraVector(1.0, 0.0, 0.0, 0.0)
X2 = AlgebraVector(0.0, 1.0, 0.0, 0.0)
X3 = AlgebraVector(0.0, 0.0, 1.0, 0.0)
X4 = AlgebraVector(0.0, 0.0, 0.0, 1.0)
BASIS = (X1, X2, X3, X4)


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    return GroupElement(
        g.x1 + h.x1,
        g.x2 + h.x2,
        g.x3 + h.x3 + g.x1 * h.x2,
        g.x4 + h.x4 + g.x1 * h.x3 + 0.5 * g.x1 ** 2 * h.x2,
    )


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(
        -g.x1,
        -g.x2,
        -g.x3 + g.x1 * g.x2,
        -g.x4 + g.x1 * g.x3 - 0.5 * g.x1 ** 2 * g.x2,
    )


def embed_heisenberg(h: HeisenbergElement) -> GroupElement:
    """Map ``(x, y, s)`` onto the subgroup ``{(x1, 0, x3, x4)}``."""
    return GroupElement(h.x, 0.0, h.y, h.s)


def bracket(u: AlgebraVector, v: AlgebraVector) -> AlgebraVector:
    # [X1,X2] = X3, [X1,X3] = X4, extended bilinearly
    return AlgebraVector(
        0.0,
        0.0,
        u.c1 * v.c2 - u.c2 * v.c1,
        u.c1 * v.c3 - u.c3 * v.c1,
    )


def casimir_coefficients() -> dict[tuple[str, str], float]:
    """Monomials of the quadratic Casimir in the universal enveloping algebra.

    The central quadratic element is ``X3^2 - 2 X2 X4``; it is this combination
    whose left and right actions give the structural condition.
    """
    return {("X3", "X3"): 1.0, ("X2", "X4"): -2.0}


def casimir_value(h2: float, hbar4: float) -> float:
    """Scalar by which the Casimir acts in the irreducible representation."""
    return 8.0 * np.pi ** 2 * h2 * hbar4
