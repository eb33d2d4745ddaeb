"""Generalized Laguerre and Jacobi polynomials, Gauss-Legendre quadrature."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi

from .errors import DomainError


def laguerre(n: int, alpha: float, x):
    """Generalized Laguerre polynomial ``L_n^(alpha)(x)`` by upward recurrence.

    ``alpha`` may be any real ``> -1``; ``x`` may be a scalar or an array.
    """
    if alpha <= -1.0:
        raise DomainError(f"Laguerre order alpha={alpha!r} must exceed -1")
    if n < 0:
        raise DomainError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def jacobi(n: int, a: float, b: float, x, strict: bool = True):
    """Jacobi polynomial ``P_n^(a,b)(x)`` by the standard three-term recurrence.

    ``strict=False`` admits parameters at or below -1, where the polynomial
    still exists but is no longer orthogonal on (-1, 1).
    """
    if strict and (a <= -1.0 or b <= -1.0):
        raise DomainError(f"Jacobi parameters ({a!r}, {b!r}) must both exceed -1")
    if n < 0:
        raise DomainError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x
    ab = a + b
    for k in range(2, n + 1):
        c = 2 * k + ab
        a1 = 2 * k * (k + ab) * (c - 2)
        a2 = (c - 1) * (a * a - b * b)
        a3 = (c - 2) * (c - 1) * c
        a4 = 2 * (k + a - 1) * (k + b - 1) * c
        prev, cur = cur, ((a2 + a3 * x) * cur - a4 * prev) / a1
    return cur if cur.ndim else float(cur)


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.nodes)

    def integrate(self, f: Callable) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def _legendre_pair(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(P_{n-1}(x), P_n(x))``."""
    p0, p1 = np.ones_like(x), x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    return p0, p1


@lru_cache(maxsize=32)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(100):
        p0, p1 = _legendre_pair(n, x)
        dx = p1 / (n * (x * p1 - p0) / (x * x - 1.0))
        x = x - dx
        if np.max(np.abs(dx)) < 1e-14:
            break
    p0, p1 = _legendre_pair(n, x)
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    return x[order], w[order]


def gauss_legendre(n: int) -> QuadratureRule:
    """``n``-point Gauss-Legendre rule on (-1, 1), nodes from Newton iteration."""
    if n < 1:
        raise DomainError("quadrature needs at least one node")
    x, w = _gauss_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(x, w)


def gauss_jacobi(n: int, a: float, b: float) -> QuadratureRule:
    """``n``-point rule for ``int_{-1}^{1} (1-x)^a (1+x)^b f(x) dx``, exact for degree ``2n-1``."""
    if n < 1:
        raise DomainError("quadrature needs at least one node")
    if a <= -1.0 or b <= -1.0:
        raise DomainError(f"Jacobi weight exponents ({a!r}, {b!r}) must both exceed -1")
    x, w = roots_jacobi(n, a, b)
    return QuadratureRule(np.asarray(x, dtype=float), np.asarray(w, dtype=float))


def _adaptive(integrate_with: Callable[[QuadratureRule], float], n: int, rtol: float, max_n: int) -> float:
    prev = integrate_with(gauss_legendre(n))
    while n < max_n:
        n *= 2
        cur = integrate_with(gauss_legendre(n))
        if abs(cur - prev) <= rtol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    return prev


def integrate_interval(f: Callable, a: float, b: float, n: int = 128, rtol: float = 1e-10, max_n: int = 8192) -> float:
    """Integrate ``f`` over ``(a, b)``, doubling the rule until it settles."""
    half, mid = 0.5 * (b - a), 0.5 * (b + a)

    def run(rule):
        return half * rule.integrate(lambda x: f(mid + half * x))

    return _adaptive(run, n, rtol, max_n)


def integrate_semi_infinite(f: Callable, scale: float, n: int = 128, rtol: float = 1e-10, max_n: int = 8192) -> float:
    """Integrate ``f`` over ``(0, inf)`` using ``r = scale (1+x)/(1-x)``."""

    def run(rule):
        x = rule.nodes
        r = scale * (1.0 + x) / (1.0 - x)
        jac = 2.0 * scale / (1.0 - x) ** 2
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            vals = np.nan_to_num(f(r) * jac, nan=0.0, posinf=0.0, neginf=0.0)
        return float(np.dot(rule.weights, vals))

    return _adaptive(run, n, rtol, max_n)
