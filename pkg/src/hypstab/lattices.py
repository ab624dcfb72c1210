"""Finite-index subgroups of Z x Z in Hermite normal form.

A rank-2 subgroup is stored by the unique basis

    (a, b), (0, d)      with a > 0, d > 0, 0 <= b < d,

whose index is a*d.  The x-characteristic subgroup is x(Z x Z), the one
generated by (x, 0) and (0, x); it has index x^2 and is contained in
every subgroup of index x, which is what makes characteristic coverings
gluable.  Subgroups of index m are enumerated by divisor: the count is
sigma_1(m), the sum of divisors.
"""

from __future__ import annotations

from dataclasses import dataclass


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class LatticeSubgroup:
    """Subgroup of Z^2 with Hermite-reduced row basis ((a, b), (0, d))."""

    a: int
    b: int
    d: int

    def __post_init__(self):
        if self.a <= 0 or self.d <= 0:
            raise LatticeError("zero determinant: not a finite-index subgroup")
        if not 0 <= self.b < self.d:
            raise LatticeError(f"basis not Hermite-reduced: b={self.b}, d={self.d}")

    @property
    def basis(self):
        return ((self.a, self.b), (0, self.d))


def hermite_reduce(u: tuple, v: tuple) -> LatticeSubgroup:
    """Hermite normal form of the subgroup generated by two integer vectors."""
    (u1, u2), (v1, v2) = u, v
    if u1 * v2 - u2 * v1 == 0:
        raise LatticeError("generators are linearly dependent")
    # Euclidean elimination on the first column
    while v1 != 0:
        q = u1 // v1
        u1, u2, v1, v2 = v1, v2, u1 - q * v1, u2 - q * v2
    if u1 < 0:
        u1, u2 = -u1, -u2
    if v2 < 0:
        v2 = -v2
    u2 %= v2
    return LatticeSubgroup(u1, u2, v2)


def x_characteristic(x: int) -> LatticeSubgroup:
    """The subgroup x(Z x Z) generated by (x, 0) and (0, x)."""
    if x < 1:
        raise LatticeError("need x >= 1")
    return LatticeSubgroup(x, 0, x)


def index(s: LatticeSubgroup) -> int:
    """|det| of the basis: the index in Z^2."""
    return s.a * s.d


def contains(s: LatticeSubgroup, other: LatticeSubgroup) -> bool:
    """Whether every element of `other` lies in `s`."""

    def member(w1, w2):
        if w1 % s.a:
            return False
        t = w2 - (w1 // s.a) * s.b
        return t % s.d == 0

    return all(member(w1, w2) for w1, w2 in other.basis)


def is_characteristic(s: LatticeSubgroup) -> bool:
    """True iff s = x(Z x Z) for some x (invariance under all automorphisms)."""
    return s.b == 0 and s.a == s.d


def subgroups_of_index(m: int) -> list[LatticeSubgroup]:
    """All subgroups of Z^2 of index m; there are sigma_1(m) of them."""
    if m < 1:
        raise LatticeError("index must be positive")
    out = []
    for d in range(1, m + 1):
        if m % d:
            continue
        a = m // d
        out.extend(LatticeSubgroup(a, b, d) for b in range(d))
    return out


def sigma_1(m: int) -> int:
    """Sum of divisors, the subgroup-count oracle."""
    return sum(d for d in range(1, m + 1) if m % d == 0)
