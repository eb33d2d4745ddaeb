"""Finite-difference eigensolvers used as an independent check of the closed forms.

Radial problem: ``-(hbar^2/2mu) g'' + [hbar^2 l(l+1)/(2 mu r^2) + V(r)] g = E g``
for ``g = r R`` on a uniform grid with ``g(0) = g(r_max) = 0``.

Polar problem: ``-d/ds[(1-s^2) dT/ds] + W(s)/(1-s^2) T = Lambda T``.  When
both pole couplings ``W(+-1)`` are at least 1/4 it is solved in the
Liouville form ``u = sqrt(sin theta) T``,

    -u'' + [(W(cos theta) - 1/4)/sin^2 theta - 1/4] u = Lambda u,

on a uniform theta grid, which keeps second-order convergence despite the
``(1 -+ s)^(nu/2)`` behaviour at the poles.  Otherwise a cell-centred
finite-volume stencil in ``s`` with zero flux through the poles is used; it
reproduces the constant Legendre mode exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal, eigvalsh_tridiagonal

from .errors import GridTooSmall
from .specfun import gauss_legendre
from .systems import (
    ATOMIC,
    BoundState,
    QuantumNumbers,
    RingOscillator,
    SpectrumEntry,
    SystemParams,
    UnitSystem,
    _canonical,
    _radial_scale,
    angular_polynomial,
    angular_reduction,
    bound_state,
    closed_form_energy,
    polar_quadrature,
)

RICHARDSON_BELOW = 1e-4
# half-width of the logistic coordinate used for the polar residual
POLAR_X = 16.0
# lower end of the softplus coordinate used for the radial residual
RADIAL_Y_MIN = -16.0


@dataclass(frozen=True)
class GridSpec:
    n_points: int = 16000
    r_max: Optional[float] = None

    def __post_init__(self):
        if self.n_points < 16:
            raise ValueError("a grid needs at least 16 points")
        if self.r_max is not None and not self.r_max > 0.0:
            raise ValueError("r_max must be positive")


@dataclass(frozen=True)
class OracleResult:
    eigenvalues: np.ndarray
    grid: GridSpec
    richardson_estimate: Optional[np.ndarray] = None

    @property
    def best(self) -> np.ndarray:
        return self.eigenvalues if self.richardson_estimate is None else self.richardson_estimate


def radial_potential(params: SystemParams, units: UnitSystem = ATOMIC):
    params = _canonical(params)
    if isinstance(params, RingOscillator):
        a2 = params.A**2
        return lambda r: a2 * r * r
    ze2 = params.Z * units.e_charge**2
    return lambda r: -ze2 / r


def default_r_max(params: SystemParams, l_eff: float, count: int, units: UnitSystem = ATOMIC) -> float:
    n = count - 1
    params = _canonical(params)
    if isinstance(params, RingOscillator):
        alpha = math.sqrt(2.0 * units.mu) * params.A / units.hbar
        e_est = closed_form_energy(params, n, l_eff, units)
        return math.sqrt((2.0 * e_est + 10.0) / alpha) + 5.0
    return 40.0 * (n + l_eff + 2.0) ** 2 * units.bohr_radius / params.Z


def _radial_matrix(params, l_eff, n_points, r_max, units):
    h = r_max / (n_points + 1)
    r = h * np.arange(1, n_points + 1)
    kin = units.kinetic
    diag = 2.0 * kin / h**2 + kin * l_eff * (l_eff + 1.0) / r**2 + radial_potential(params, units)(r)
    off = np.full(n_points - 1, -kin / h**2)
    return diag, off


def _lowest(diag, off, count):
    return eigvalsh_tridiagonal(diag, off, select="i", select_range=(0, count - 1), lapack_driver="stebz")


def radial_eigen(
    params: SystemParams,
    l_eff: float,
    count: int,
    grid: Optional[GridSpec] = None,
    units: UnitSystem = ATOMIC,
    tol: Optional[float] = None,
) -> OracleResult:
    """Lowest ``count`` radial eigenvalues at angular number ``l_eff``.

    A ``tol`` below 1e-4 adds a Richardson estimate from the grid with half
    the spacing.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    grid = grid or GridSpec()
    r_max = grid.r_max or default_r_max(params, l_eff, count, units)
    grid = GridSpec(grid.n_points, r_max)
    diag, off = _radial_matrix(params, l_eff, grid.n_points, r_max, units)
    vals = _lowest(diag, off, count)
    _, vec = eigh_tridiagonal(diag, off, select="i", select_range=(count - 1, count - 1))
    vec = np.abs(vec[:, 0])
    if vec[-1] > 1e-8 * vec.max():
        raise GridTooSmall(f"state {count - 1} has not decayed by r_max={r_max!r}")
    extra = None
    if tol is not None and tol < RICHARDSON_BELOW:
        fine = _lowest(*_radial_matrix(params, l_eff, 2 * grid.n_points + 1, r_max, units), count)
        extra = (4.0 * fine - vals) / 3.0
    return OracleResult(vals, grid, extra)


def _liouville_theta(coupling, n_points):
    w0, w1, w2 = coupling
    h = math.pi / (n_points + 1)
    t = h * np.arange(1, n_points + 1)
    c = np.cos(t)
    diag = 2.0 / h**2 + (w0 + w1 * c + w2 * c * c - 0.25) / np.sin(t) ** 2 - 0.25
    return diag, np.full(n_points - 1, -1.0 / h**2)


def _finite_volume_s(coupling, n_points):
    w0, w1, w2 = coupling
    h = 2.0 / n_points
    s = -1.0 + (np.arange(n_points) + 0.5) * h
    faces = -1.0 + np.arange(1, n_points) * h
    p = 1.0 - faces**2
    diag = np.zeros(n_points)
    diag[:-1] += p
    diag[1:] += p
    diag = diag / h**2 + (w0 + w1 * s + w2 * s * s) / (1.0 - s * s)
    return diag, -p / h**2


def angular_eigen(
    params: SystemParams,
    m: int,
    count: int,
    grid: Optional[GridSpec] = None,
    units: UnitSystem = ATOMIC,
) -> OracleResult:
    """Lowest ``count`` polar eigenvalues ``Lambda``, to compare with ``l(l+1)``."""
    if count < 1:
        raise ValueError("count must be at least 1")
    grid = grid or GridSpec(4000)
    red = angular_reduction(params, m, units)
    if min(red.pole_couplings()) >= 0.25:
        diag, off = _liouville_theta(red.coupling, grid.n_points)
    else:
        diag, off = _finite_volume_s(red.coupling, grid.n_points)
    return OracleResult(_lowest(diag, off, count), grid)


def _residual_r_max(params, n, l_eff, units) -> float:
    if isinstance(_canonical(params), RingOscillator):
        return default_r_max(params, l_eff, n + 1, units)
    k = n + l_eff + 1.0
    return k * (2.0 * k + 25.0) * _radial_scale(params, 0, 0.0, units)


def residual_norm(
    params: SystemParams,
    qn: QuantumNumbers,
    entry: SpectrumEntry,
    grid: Optional[GridSpec] = None,
    units: UnitSystem = ATOMIC,
) -> float:
    """Relative L2 norm of ``(H - E) Psi`` for the closed-form state of ``entry``.

    ``Psi`` is rebuilt from ``entry.l_eff`` and ``entry.energy``, so a wrong
    energy shows up as a large residual.  Both the radial second derivative
    and the polar operator use three-point differences.
    """
    grid = grid or GridSpec(8000)
    state = bound_state(params, qn, units, energy=entry.energy, l_eff=entry.l_eff)
    energy = entry.energy
    r_max = grid.r_max or _residual_r_max(params, qn.n, entry.l_eff, units)

    r, r_w, radial_part, centrifugal, gi = _radial_operator(state, params, energy, r_max, grid.n_points, units)

    angular_part, theta_w, big_t = _polar_operator(state, params, qn.m, grid.n_points, units)

    # |res|^2 = sum_ij (a_i T_j + b_i K_j)^2 w_j  with separable pieces
    tt = np.sum(big_t * big_t * theta_w)
    tk = np.sum(big_t * angular_part * theta_w)
    kk = np.sum(angular_part * angular_part * theta_w)
    res2 = np.sum(r_w * radial_part**2) * tt + 2.0 * np.sum(r_w * radial_part * centrifugal) * tk + np.sum(r_w * centrifugal**2) * kk
    norm2 = np.sum(r_w * gi * gi) * tt
    return math.sqrt(res2 / norm2) / abs(energy)


def _radial_operator(state: BoundState, params, energy, r_max, n_points, units):
    """Radial pieces of ``(H - E) Psi`` for ``g = r R`` on interior nodes.

    Nodes are uniform in ``y`` with ``r = c log(1 + exp(y))``: geometric near
    the origin, where ``g ~ r^(l+1)`` with non-integer ``l`` would spoil a
    uniform stencil, and uniform in the tail.
    """
    c = _radial_scale(params, 0, 0.0, units)
    y = np.linspace(RADIAL_Y_MIN, r_max / c, n_points + 2)
    dy = y[1] - y[0]
    r = c * np.logaddexp(0.0, y)
    jac = c / (1.0 + np.exp(-y))
    jac_h = c / (1.0 + np.exp(-0.5 * (y[1:] + y[:-1])))
    g = state.g(r)
    flux = np.diff(g) / jac_h
    inner = slice(1, -1)
    ri, gi = r[inner], g[inner]
    g_rr = (flux[1:] - flux[:-1]) / (dy * dy * jac[inner])
    kin = units.kinetic
    radial_part = -kin * g_rr + radial_potential(params, units)(ri) * gi - energy * gi
    centrifugal = kin * gi / ri**2
    return ri, dy * jac[inner], radial_part, centrifugal, gi


def _polar_operator(state: BoundState, params, m, n_points, units):
    """``-(1/sin)(sin T')' + W/sin^2 T`` on interior nodes, plus quadrature weights.

    The nodes are uniform in ``x`` with ``theta = pi / (1 + exp(-x))``, which
    is geometric near both poles.  Fractional powers of ``theta`` and
    ``pi - theta`` are smooth in ``x``, so the three-point stencil stays
    second order where a uniform ``theta`` grid would not.
    """
    x = np.linspace(-POLAR_X, POLAR_X, n_points + 2)
    dx = x[1] - x[0]

    def geometry(xs):
        lo = 1.0 / (1.0 + np.exp(-xs))  # theta / pi
        hi = 1.0 / (1.0 + np.exp(xs))  # 1 - theta / pi
        sin_t = np.sin(math.pi * np.minimum(lo, hi))
        return lo, hi, sin_t, math.pi * lo * hi

    lo, hi, sin_t, jac = geometry(x)
    one_minus = 2.0 * np.sin(0.5 * math.pi * lo) ** 2
    one_plus = 2.0 * np.sin(0.5 * math.pi * hi) ** 2
    vals = state.angular_halves(one_minus, one_plus)
    _, _, sin_h, jac_h = geometry(0.5 * (x[1:] + x[:-1]))
    flux = sin_h / jac_h * np.diff(vals)
    inner = slice(1, -1)
    lap = (flux[1:] - flux[:-1]) / (dx * dx * sin_t[inner] * jac[inner])
    w0, w1, w2 = angular_reduction(params, m, units).coupling
    c = 0.5 * (one_plus[inner] - one_minus[inner])
    op = -lap + (w0 + w1 * c + w2 * c * c) / sin_t[inner] ** 2 * vals[inner]
    return op, dx * sin_t[inner] * jac[inner], vals[inner]


def orthonormality_check(
    params: SystemParams,
    entries: list[SpectrumEntry],
    quad_points: int = 512,
    part: str = "radial",
    units: UnitSystem = ATOMIC,
) -> np.ndarray:
    """Gram matrix of the normalised radial (``r^2 dr``) or polar (``ds``) factors.

    Polar factors of one ``(m, case)`` tower share their pole behaviour and
    are integrated with the matching Gauss-Jacobi rule; anything else uses
    Gauss-Legendre in ``s``.
    """
    states = [bound_state(params, e.qn, units, energy=e.energy, l_eff=e.l_eff) for e in entries]
    rule = gauss_legendre(quad_points)
    x, w = rule.nodes, rule.weights
    if part == "radial":
        scale = max(_radial_scale(params, s.qn.n, s.l_eff, units) for s in states)
        r = scale * (1.0 + x) / (1.0 - x)
        jac = w * 2.0 * scale / (1.0 - x) ** 2 * r * r
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            funcs = np.nan_to_num(np.array([s.radial(r) for s in states]))
    elif part == "angular":
        tower = {(s.qn.m, s.qn.angular_case) for s in states}
        polar = None
        if len(tower) == 1:
            m, case = tower.pop()
            polar = polar_quadrature(params, m, case, quad_points, units)
        if polar is not None:
            # shared pole factors live in the weight; only the polynomials remain
            jac = polar.weights
            funcs = np.array([s.angular_norm * angular_polynomial(params, s.qn, polar.nodes, units) for s in states])
        else:
            jac = w
            funcs = np.array([s.angular_in_s(x) for s in states])
    else:
        raise ValueError("part must be 'radial' or 'angular'")
    return (funcs * jac) @ funcs.T

