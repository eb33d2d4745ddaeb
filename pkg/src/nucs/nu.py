"""Nikiforov-Uvarov reduction of hypergeometric-type equations.

The input is an equation

    psi'' + (tau_tilde / sigma) psi' + (sigma_tilde / sigma**2) psi = 0

given by three low-degree polynomials.  Writing ``psi = phi * y`` with
``phi'/phi = pi/sigma`` turns it into ``sigma y'' + tau y' + lam y = 0`` with
``tau = tau_tilde + 2 pi``.  ``pi`` is fixed by demanding that the quadratic

    ((sigma' - tau_tilde)/2)**2 - sigma_tilde + k sigma

be a perfect square, which quantises ``k`` (two roots) and leaves a sign
choice for each root.  Polynomial solutions ``y_n`` exist when
``lam = k + pi'`` equals ``lam_n = -n tau' - n(n-1) sigma''/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    BranchFlip,
    NoPhysicalBranch,
    NoRealK,
    NoSignChange,
    UnsupportedSigmaShape,
)
from .poly import ZERO_TOL, Poly, derivative, perfect_square_root

LAGUERRE = "laguerre"
JACOBI = "jacobi"


@dataclass(frozen=True)
class HypergeometricForm:
    sigma: Poly
    sigma_tilde: Poly
    tau_tilde: Poly
    domain: tuple[float, float]

    def half_gap(self) -> Poly:
        """``(sigma' - tau_tilde) / 2``, the fixed part of ``pi``."""
        return (derivative(self.sigma) - self.tau_tilde).scale(0.5)

    def under_root(self, k: float) -> Poly:
        h = self.half_gap()
        return h * h - self.sigma_tilde + self.sigma.scale(k)


@dataclass(frozen=True)
class NUBranch:
    k: float
    pi: Poly
    tau: Poly
    k_index: int  # 1-based position of k among the descending roots
    sign: int  # +1 or -1 in front of the square root
    lam: float

    @property
    def tau_slope(self) -> float:
        return self.tau.c1

    @property
    def kind(self) -> tuple[int, int]:
        return (self.k_index, self.sign)


@dataclass(frozen=True)
class NUSolution:
    """Selected branch together with the closed forms of rho and phi.

    For the Laguerre shape ``sigma = c s`` the weight is
    ``rho = exp(a s) s**b`` and ``phi = exp(a' s) s**b'``; for the Jacobi
    shape ``sigma = d (1 - s**2)`` they are ``(1 - s)**a (1 + s)**b``.  The
    exponent pairs are stored as ``weight_exponents`` and ``phi_exponents``.
    """

    branch: NUBranch
    sigma: Poly
    shape: str
    weight_exponents: tuple[float, float]
    phi_exponents: tuple[float, float]

    @property
    def lambda_n_coeffs(self) -> tuple[float, float]:
        return (-self.branch.tau_slope, -self.sigma.c2)

    def lambda_n(self, n: int) -> float:
        return lambda_n(self, n)

    def weight(self, s):
        return _shape_eval(self.shape, self.weight_exponents, s)

    def weight_log_derivative(self, s):
        return _shape_log_derivative(self.shape, self.weight_exponents, s)

    def phi(self, s):
        return _shape_eval(self.shape, self.phi_exponents, s)

    def polynomial(self, n: int) -> np.polynomial.Polynomial:
        return polynomial_solution(self, n)


def _shape_eval(shape, exps, s):
    a, b = exps
    s = np.asarray(s, dtype=float)
    if shape == LAGUERRE:
        return np.exp(a * s) * s**b
    return (1.0 - s) ** a * (1.0 + s) ** b


def _shape_log_derivative(shape, exps, s):
    a, b = exps
    s = np.asarray(s, dtype=float)
    if shape == LAGUERRE:
        return a + b / s
    return -a / (1.0 - s) + b / (1.0 + s)


def k_candidates(eq: HypergeometricForm, rtol: float = 1e-12) -> list[float]:
    """Values of ``k`` making the under-root quadratic a perfect square, descending."""
    p = eq.under_root(0.0)
    sg = eq.sigma
    # disc(k) = (p1 + k s1)^2 - 4 (p2 + k s2)(p0 + k s0)
    a = sg.c1 * sg.c1 - 4.0 * sg.c2 * sg.c0
    b = 2.0 * p.c1 * sg.c1 - 4.0 * (p.c2 * sg.c0 + p.c0 * sg.c2)
    c = p.c1 * p.c1 - 4.0 * p.c2 * p.c0
    scale = max(abs(a), abs(b), abs(c), 1.0)
    if abs(a) <= ZERO_TOL * scale:
        if abs(b) <= ZERO_TOL * scale:
            raise NoRealK("the k-equation is degenerate")
        return [-c / b]
    d = b * b - 4.0 * a * c
    if d < -rtol * max(b * b, abs(4.0 * a * c), 1.0):
        raise NoRealK(f"k-equation discriminant {d!r} is negative")
    root = math.sqrt(max(d, 0.0))
    # numerically stable pair
    q = -0.5 * (b + math.copysign(root, b)) if b != 0.0 else -0.5 * root
    roots = [q / a, c / q] if q != 0.0 else [0.0, 0.0]
    roots.sort(reverse=True)
    if abs(roots[0] - roots[1]) <= rtol * max(1.0, abs(roots[0])):
        return [0.5 * (roots[0] + roots[1])]
    return roots


def branches(eq: HypergeometricForm, k: float, k_index: int = 1, tol: float = 1e-9) -> list[NUBranch]:
    """Both sign choices of ``pi`` for one root ``k``, ``+`` first."""
    q = perfect_square_root(eq.under_root(k), tol)
    h = eq.half_gap()
    out = []
    for sign in (1, -1):
        pi = h + q.scale(sign)
        tau = eq.tau_tilde + pi.scale(2.0)
        out.append(NUBranch(k=k, pi=pi, tau=tau, k_index=k_index, sign=sign, lam=k + pi.c1))
    return out


def all_branches(eq: HypergeometricForm, tol: float = 1e-9) -> list[NUBranch]:
    out = []
    for i, k in enumerate(k_candidates(eq), start=1):
        out.extend(branches(eq, k, i, tol))
    return out


def sigma_shape(sigma: Poly) -> tuple[str, float]:
    """Classify ``sigma`` as ``c*s`` (Laguerre) or ``d*(1 - s**2)`` (Jacobi)."""
    scale = sigma.norm()
    small = ZERO_TOL * max(scale, 1.0)
    if abs(sigma.c0) <= small and abs(sigma.c2) <= small and sigma.c1 > small:
        return LAGUERRE, sigma.c1
    if abs(sigma.c1) <= small and sigma.c0 > small and abs(sigma.c0 + sigma.c2) <= small:
        return JACOBI, sigma.c0
    raise UnsupportedSigmaShape(f"sigma = {sigma!r} is neither c*s nor d*(1 - s^2)")


def _exponents(shape: str, scale: float, lin: Poly, offset: float) -> tuple[float, float]:
    """Exponents of ``f`` with ``f'/f = (lin + shift) / sigma``.

    ``offset`` is the ``-sigma'`` contribution: added to the constant term
    for the Laguerre shape, to the slope for the Jacobi shape.
    """
    if shape == LAGUERRE:
        return (lin.c1 / scale, (lin.c0 + offset) / scale)
    c1 = (lin.c1 + offset) / scale
    c0 = lin.c0 / scale
    return (-(c1 + c0) / 2.0, (c0 - c1) / 2.0)


def _weight_exponents(eq: HypergeometricForm, tau: Poly) -> tuple[str, tuple[float, float]]:
    shape, scale = sigma_shape(eq.sigma)
    # rho'/rho = (tau - sigma') / sigma
    if shape == LAGUERRE:
        return shape, _exponents(shape, scale, tau, -scale)
    return shape, _exponents(shape, scale, tau, 2.0 * scale)


def _integrable(shape: str, exps: tuple[float, float]) -> bool:
    a, b = exps
    if shape == LAGUERRE:
        return a < 0.0 and b > -1.0
    return a > -1.0 and b > -1.0


def select_physical(all_branches: list[NUBranch], eq: HypergeometricForm) -> NUBranch:
    """Pick the branch with ``tau' < 0`` and an integrable weight.

    Ties go to a ``pi`` with negative slope, then to the smallest ``lam``.
    """
    falling = [b for b in all_branches if b.tau_slope < -ZERO_TOL]
    if not falling:
        raise NoPhysicalBranch("no branch has tau' < 0")
    good = [b for b in falling if _integrable(*_weight_exponents(eq, b.tau))]
    if not good:
        raise NoPhysicalBranch("no branch with tau' < 0 has an integrable weight")
    return min(good, key=lambda b: (b.pi.c1 >= 0.0, b.lam))


def weight_and_phi(eq: HypergeometricForm, branch: NUBranch) -> NUSolution:
    shape, wexp = _weight_exponents(eq, branch.tau)
    _, scale = sigma_shape(eq.sigma)
    pexp = _exponents(shape, scale, branch.pi, 0.0)
    sol = NUSolution(branch=branch, sigma=eq.sigma, shape=shape, weight_exponents=wexp, phi_exponents=pexp)
    _check_weight(sol, eq)
    return sol


def _sample_points(domain: tuple[float, float], count: int = 64) -> np.ndarray:
    lo, hi = domain
    if math.isinf(hi):
        return lo + np.geomspace(1e-3, 50.0, count)
    t = (np.arange(count) + 0.5) / count
    return lo + (hi - lo) * t


def _check_weight(sol: NUSolution, eq: HypergeometricForm, rtol: float = 1e-8) -> None:
    s = _sample_points(eq.domain)
    sigma, dsigma, tau = eq.sigma(s), derivative(eq.sigma)(s), sol.branch.tau(s)
    # (sigma rho)' = tau rho, divided through by rho
    lhs = dsigma + sigma * sol.weight_log_derivative(s)
    err = np.abs(lhs - tau)
    if np.any(err > rtol * np.maximum(1.0, np.abs(tau))):
        raise AssertionError(f"weight fails (sigma rho)' = tau rho; max error {err.max():.3e}")


def lambda_n(sol: NUSolution, n: int) -> float:
    if n < 0:
        raise ValueError("n must be non-negative")
    slope, half_curv = sol.lambda_n_coeffs
    return n * slope + n * (n - 1) * half_curv


def solve(eq: HypergeometricForm, selector=select_physical) -> NUSolution:
    """Run the full pipeline: k roots, branches, selection, weight and phi."""
    return weight_and_phi(eq, selector(all_branches(eq), eq))


def polynomial_solution(sol: NUSolution, n: int) -> np.polynomial.Polynomial:
    """Monic degree-``n`` polynomial solving ``sigma y'' + tau y' + lam_n y = 0``.

    Coefficients follow from the power-series recursion, solved from the
    top coefficient down.
    """
    s0, s1, s2 = sol.sigma.coeffs
    t0, t1 = sol.branch.tau.c0, sol.branch.tau.c1
    lam = lambda_n(sol, n)
    a = np.zeros(n + 3)
    a[n] = 1.0
    for j in range(n - 1, -1, -1):
        diag = s2 * j * (j - 1) + t1 * j + lam
        rhs = -(s1 * (j + 1) * j + t0 * (j + 1)) * a[j + 1] - s0 * (j + 2) * (j + 1) * a[j + 2]
        a[j] = rhs / diag
    return np.polynomial.Polynomial(a[: n + 1])


def find_bracket(
    eq_family: Callable[[float], HypergeometricForm],
    n: int,
    grid,
    selector=select_physical,
) -> tuple[float, float]:
    """Scan ``grid`` (increasing) for the first sign change of the mismatch."""
    prev_e, prev_m = None, None
    for e in grid:
        try:
            m = _mismatch(eq_family(e), n, selector)[0]
        except Exception:
            prev_e = prev_m = None
            continue
        if prev_m is not None and (m == 0.0 or (m > 0) != (prev_m > 0)):
            return (prev_e, e)
        prev_e, prev_m = e, m
    raise NoSignChange("no sign change of lam - lam_n on the scanned grid")


def _mismatch(eq: HypergeometricForm, n: int, selector) -> tuple[float, tuple[int, int]]:
    sol = solve(eq, selector)
    return sol.branch.lam - lambda_n(sol, n), sol.branch.kind


def mismatch(eq: HypergeometricForm, n: int, selector=select_physical) -> float:
    """``lam - lam_n`` of the selected branch; zero exactly at an eigenvalue."""
    return _mismatch(eq, n, selector)[0]


def quantize(
    eq_family: Callable[[float], HypergeometricForm],
    n: int,
    bracket: tuple[float, float],
    tol: float = 1e-12,
    rtol: float = 1e-10,
    selector=select_physical,
    max_iter: int = 400,
) -> float:
    """Bisect ``lam(E) - lam_n(E)`` to zero inside ``bracket``.

    Stops once the bracket is narrower than ``max(tol, rtol*|E|)``.  The
    selected branch must keep the same ``(k_index, sign)`` throughout,
    otherwise :class:`BranchFlip` is raised.
    """
    lo, hi = sorted(float(b) for b in bracket)
    m_lo, kind = _mismatch(eq_family(lo), n, selector)
    m_hi, kind_hi = _mismatch(eq_family(hi), n, selector)
    if kind_hi != kind:
        raise BranchFlip(f"branch changes from {kind} to {kind_hi} across the bracket")
    if m_lo == 0.0:
        return lo
    if m_hi == 0.0:
        return hi
    if (m_lo > 0) == (m_hi > 0):
        raise NoSignChange(f"mismatch has the same sign at {lo!r} and {hi!r}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= max(tol, rtol * abs(mid)):
            return mid
        m_mid, kind_mid = _mismatch(eq_family(mid), n, selector)
        if kind_mid != kind:
            raise BranchFlip(f"branch changes from {kind} to {kind_mid} at {mid!r}")
        if m_mid == 0.0:
            return mid
        if (m_mid > 0) == (m_lo > 0):
            lo, m_lo = mid, m_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
