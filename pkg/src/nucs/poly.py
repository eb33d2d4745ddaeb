"""Real polynomials of degree at most two.

Coefficients are stored constant-first, ``p(s) = c0 + c1*s + c2*s**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegreeError, NotPerfectSquare

ZERO_TOL = 1e-12


@dataclass(frozen=True)
class Poly:
    c0: float = 0.0
    c1: float = 0.0
    c2: float = 0.0

    @property
    def coeffs(self) -> tuple[float, float, float]:
        return (self.c0, self.c1, self.c2)

    def norm(self) -> float:
        return max(abs(c) for c in self.coeffs)

    def degree(self) -> int:
        """Highest index whose coefficient exceeds ``ZERO_TOL`` times the largest one."""
        scale = self.norm()
        if scale == 0.0:
            return 0
        for d in (2, 1):
            if abs(self.coeffs[d]) > ZERO_TOL * scale:
                return d
        return 0

    def __call__(self, s):
        return self.c0 + self.c1 * s + self.c2 * s * s

    def __add__(self, other: Poly) -> Poly:
        return Poly(self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2)

    def __sub__(self, other: Poly) -> Poly:
        return Poly(self.c0 - other.c0, self.c1 - other.c1, self.c2 - other.c2)

    def __neg__(self) -> Poly:
        return Poly(-self.c0, -self.c1, -self.c2)

    def scale(self, a: float) -> Poly:
        return Poly(a * self.c0, a * self.c1, a * self.c2)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return self.scale(float(other))
        if self.degree() + other.degree() > 2:
            raise DegreeError("product would exceed degree 2")
        a, b = self.coeffs, other.coeffs
        return Poly(a[0] * b[0], a[0] * b[1] + a[1] * b[0], a[0] * b[2] + a[1] * b[1] + a[2] * b[0])

    __rmul__ = __mul__

    def isclose(self, other: Poly, tol: float = 1e-9) -> bool:
        return all(abs(x - y) <= tol for x, y in zip(self.coeffs, other.coeffs))

    def __repr__(self) -> str:
        return f"Poly({self.c0!r}, {self.c1!r}, {self.c2!r})"


def derivative(p: Poly) -> Poly:
    return Poly(p.c1, 2.0 * p.c2, 0.0)


def discriminant(p: Poly) -> float:
    if p.degree() < 2:
        raise DegreeError(f"discriminant needs a quadratic, got degree {p.degree()}")
    return p.c1 * p.c1 - 4.0 * p.c2 * p.c0


def perfect_square_root(p: Poly, tol: float = 1e-9) -> Poly:
    """Return the linear ``q`` with ``q*q == p`` and non-negative coefficient of ``s``.

    ``p`` must have non-negative end coefficients and a discriminant that
    vanishes within ``tol * max(1, |p|)``; otherwise :class:`NotPerfectSquare`
    is raised.  A constant ``p`` yields the constant ``sqrt(c0)``.  The root
    is built from whichever of ``c0`` and ``c2`` is larger, so squares whose
    leading coefficient is lost to rounding are still recognised.
    """
    scale = max(1.0, p.norm())
    if p.c0 < -tol * scale or p.c2 < -tol * scale:
        raise NotPerfectSquare(f"{p!r} is not the square of a real polynomial")
    disc = p.c1 * p.c1 - 4.0 * p.c2 * p.c0
    if abs(disc) > tol * scale:
        raise NotPerfectSquare(f"{p!r} has discriminant {disc!r}")
    c0, c2 = max(p.c0, 0.0), max(p.c2, 0.0)
    if c0 == 0.0 and c2 == 0.0:
        if abs(p.c1) > tol * scale:
            raise NotPerfectSquare(f"{p!r} is linear, not a square")
        return Poly()
    if c2 >= c0:
        r = math.sqrt(c2)
        return Poly(p.c1 / (2.0 * r), r)
    r = math.sqrt(c0)
    return Poly(math.copysign(r, p.c1) if p.c1 != 0.0 else r, abs(p.c1) / (2.0 * r))
