"""The four separable non-central systems and their closed-form spectra.

Every system separates as ``Psi = R(r) Theta(theta) exp(i a phi)``.  The ring
constants ``B`` and ``C`` are the ones entering the polar equation

    Theta'' + cot(theta) Theta' + [l(l+1) - (m^2 + B + C cos theta)/sin^2 theta] Theta = 0,

i.e. the potential term is ``hbar^2/(2 mu) (B + C cos theta)/(r^2 sin^2 theta)``.
With that convention the Hartmann potential maps to ``Z = eta sigma^2``,
``B = eta^2 sigma^2``, ``C = 0`` in any unit system.

The polar problem is reduced to a single shape for every family: the
operator ``-d/ds[(1-s^2) d/ds] + W(s)/(1-s^2)`` with a quadratic pole
coupling ``W`` and eigenvalue ``l(l+1)``.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Union

import numpy as np

from . import nu
from .errors import AmbiguousCase, EnergySignError, NucsError, UnsolvableAngular
from .nu import HypergeometricForm
from .poly import Poly
from .errors import DomainError
from .specfun import gauss_jacobi, integrate_interval, integrate_semi_infinite, jacobi, laguerre

CASE_I = "i"
CASE_II = "ii"

CLOSED_FORM = "closed_form"
NU_ROOTFIND = "nu_rootfind"
FD_ORACLE = "fd_oracle"


@dataclass(frozen=True)
class UnitSystem:
    hbar: float = 1.0
    mu: float = 1.0
    e_charge: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mu", "e_charge"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")

    @property
    def bohr_radius(self) -> float:
        return self.hbar**2 / (self.mu * self.e_charge**2)

    @property
    def hartree(self) -> float:
        return self.mu * self.e_charge**4 / self.hbar**2

    @property
    def kinetic(self) -> float:
        """``hbar^2 / (2 mu)``."""
        return self.hbar**2 / (2.0 * self.mu)


ATOMIC = UnitSystem()


@dataclass(frozen=True)
class CoulombRing:
    """``-Z e^2/r`` plus the ``(B + C cos theta)/(r^2 sin^2 theta)`` ring terms."""

    Z: float
    B: float = 0.0
    C: float = 0.0
    kind = "coulomb-ring"

    def __post_init__(self):
        if not self.Z > 0.0:
            raise ValueError("Z must be positive")
        if self.B < 0.0:
            raise ValueError("B must be non-negative")


@dataclass(frozen=True)
class Hartmann:
    eta: float
    sigma: float
    kind = "hartmann"

    def __post_init__(self):
        if not (self.eta > 0.0 and self.sigma > 0.0):
            raise ValueError("eta and sigma must be positive")

    def as_coulomb_ring(self) -> CoulombRing:
        return CoulombRing(Z=self.eta * self.sigma**2, B=(self.eta * self.sigma) ** 2, C=0.0)


@dataclass(frozen=True)
class ABMonopole:
    """Coulomb field with an Aharonov-Bohm flux line and a Dirac monopole.

    The polar equation only sees ``q = -g e`` and
    ``m_tilde = e Phi / (2 pi) - q - m``.
    """

    Z: float
    flux: float
    g: float
    kind = "ab-monopole"

    def __post_init__(self):
        if not self.Z > 0.0:
            raise ValueError("Z must be positive")

    def q(self, units: UnitSystem = ATOMIC) -> float:
        return -self.g * units.e_charge

    def m_tilde(self, m: int, units: UnitSystem = ATOMIC) -> float:
        return units.e_charge * self.flux / (2.0 * math.pi) - self.q(units) - m

    @classmethod
    def from_effective(cls, Z: float, q: float, m_tilde: float, m: int = 0, units: UnitSystem = ATOMIC) -> "ABMonopole":
        """Build the system whose ``(q, m_tilde)`` at azimuthal number ``m`` are given."""
        e = units.e_charge
        return cls(Z=Z, flux=2.0 * math.pi * (m_tilde + q + m) / e, g=-q / e)


@dataclass(frozen=True)
class RingOscillator:
    A: float
    B: float = 0.0
    kind = "oscillator"

    def __post_init__(self):
        if not self.A > 0.0:
            raise ValueError("A must be positive")
        if self.B < 0.0:
            raise ValueError("B must be non-negative")


SystemParams = Union[CoulombRing, Hartmann, ABMonopole, RingOscillator]
SYSTEM_KINDS = {cls.kind: cls for cls in (CoulombRing, Hartmann, ABMonopole, RingOscillator)}


def params_to_dict(params: SystemParams) -> dict:
    return {"kind": params.kind, **asdict(params)}


def params_from_dict(data: dict) -> SystemParams:
    data = dict(data)
    return SYSTEM_KINDS[data.pop("kind")](**data)


def is_coulomb_family(params: SystemParams) -> bool:
    return not isinstance(params, RingOscillator)


def _canonical(params: SystemParams) -> SystemParams:
    return params.as_coulomb_ring() if isinstance(params, Hartmann) else params


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    ntilde: int
    m: int
    angular_case: str = CASE_II

    def __post_init__(self):
        if self.n < 0 or self.ntilde < 0:
            raise ValueError("n and ntilde must be non-negative")
        if self.angular_case not in (CASE_I, CASE_II):
            raise ValueError(f"angular_case must be {CASE_I!r} or {CASE_II!r}")


@dataclass
class SpectrumEntry:
    qn: QuantumNumbers
    l_eff: float
    energy: float
    method: str = CLOSED_FORM
    single_valued: bool = True
    system: str = ""
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "n": self.qn.n,
            "ntilde": self.qn.ntilde,
            "m": self.qn.m,
            "angular_case": self.qn.angular_case,
            "l_eff": self.l_eff,
            "energy": self.energy,
            "method": self.method,
            "single_valued": self.single_valued,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SpectrumEntry":
        qn = QuantumNumbers(d["n"], d["ntilde"], d["m"], d.get("angular_case", CASE_II))
        return cls(qn, d["l_eff"], d["energy"], d["method"], d["single_valued"], d["system"], d.get("error"))


@dataclass(frozen=True)
class AngularReduction:
    """Constants of the reduced polar problem.

    ``A1 <= A2`` are the roots of ``x^2 - M x + C^2/4`` (``M = m^2 + B``).
    ``sign`` is the sign of the linear pole coupling and fixes which pole
    carries the larger exponent.  ``coupling`` holds ``W(s) = w0 + w1 s + w2 s^2``.
    """

    A1: float
    A2: float
    sign: float
    coupling: tuple[float, float, float]
    q: Optional[float] = None
    m_tilde: Optional[float] = None

    @property
    def shift(self) -> float:
        return self.coupling[2]

    def pole_couplings(self) -> tuple[float, float]:
        w0, w1, w2 = self.coupling
        return (w0 + w1 + w2, w0 - w1 + w2)


@dataclass(frozen=True)
class RadialReduction:
    kappa: Optional[float] = None
    beta_sq: Optional[float] = None
    alpha: Optional[float] = None
    eps_sq: Optional[float] = None


def _roots_a1_a2(M: float, C: float) -> tuple[float, float]:
    if M * M < C * C:
        raise UnsolvableAngular(f"(m^2 + B)^2 = {M * M!r} is smaller than C^2 = {C * C!r}")
    A2 = 0.5 * (M + math.sqrt(M * M - C * C))
    A1 = C * C / (4.0 * A2) if A2 > 0.0 else 0.0
    return A1, A2


def angular_reduction(params: SystemParams, m: int, units: UnitSystem = ATOMIC) -> AngularReduction:
    params = _canonical(params)
    if isinstance(params, ABMonopole):
        q, mt = params.q(units), params.m_tilde(m, units)
        A1, A2 = sorted((q * q, mt * mt))
        sign = 1.0 if q * mt > 0.0 else -1.0
        return AngularReduction(A1, A2, sign, (mt * mt, 2.0 * q * mt, q * q), q=q, m_tilde=mt)
    C = params.C if isinstance(params, CoulombRing) else 0.0
    M = m * m + params.B
    A1, A2 = _roots_a1_a2(M, C)
    return AngularReduction(A1, A2, 1.0 if C > 0.0 else -1.0, (M, C, 0.0))


def radial_reduction(params: SystemParams, E: float, units: UnitSystem = ATOMIC) -> RadialReduction:
    params = _canonical(params)
    h2 = units.hbar**2
    if isinstance(params, RingOscillator):
        if not E > 0.0:
            raise EnergySignError(f"oscillator bound states need E > 0, got {E!r}")
        return RadialReduction(alpha=math.sqrt(2.0 * units.mu) * params.A / units.hbar, eps_sq=2.0 * units.mu * E / h2)
    if not E < 0.0:
        raise EnergySignError(f"Coulomb bound states need E < 0, got {E!r}")
    coupling = -params.Z * units.e_charge**2
    return RadialReduction(kappa=math.sqrt(-2.0 * units.mu * E) / units.hbar, beta_sq=2.0 * units.mu * coupling / h2)


def radial_form(params: SystemParams, l_eff: float, E: float, units: UnitSystem = ATOMIC) -> HypergeometricForm:
    """Radial equation in hypergeometric form.

    Coulomb family: ``s = r`` for ``R(r)``.  Oscillator: ``s = r^2`` for
    ``g = r R``.
    """
    red = radial_reduction(params, E, units)
    L = l_eff * (l_eff + 1.0)
    if red.alpha is not None:
        st = Poly(-L, red.eps_sq, -red.alpha**2)
        return HypergeometricForm(Poly(0.0, 2.0), st, Poly(1.0), (0.0, math.inf))
    st = Poly(-L, -red.beta_sq, -red.kappa**2)
    return HypergeometricForm(Poly(0.0, 1.0), st, Poly(2.0), (0.0, math.inf))


def angular_form(params: SystemParams, l_eff: float, m: int, units: UnitSystem = ATOMIC) -> HypergeometricForm:
    """Polar equation in ``s = cos(theta)``."""
    w0, w1, w2 = angular_reduction(params, m, units).coupling
    L = l_eff * (l_eff + 1.0)
    st = Poly(L - w0, -w1, -(L + w2))
    return HypergeometricForm(Poly(1.0, 0.0, -1.0), st, Poly(0.0, -2.0), (-1.0, 1.0))


def _ab_l_flux_dominated(ntilde: int, m_tilde: float, q: float) -> float:
    return -0.5 + math.sqrt((ntilde + abs(m_tilde) + 0.5) ** 2 - q * q)


def _ab_l_monopole_dominated(ntilde: int, q: float) -> float:
    return -0.5 + math.sqrt((ntilde + abs(q) + 0.5) ** 2 - q * q)


def effective_l(params: SystemParams, ntilde: int, m: int, angular_case: str = CASE_II, units: UnitSystem = ATOMIC) -> float:
    red = angular_reduction(params, m, units)
    if isinstance(params, ABMonopole):
        q, mt = red.q, red.m_tilde
        if abs(q) < abs(mt):
            return _ab_l_flux_dominated(ntilde, mt, q)
        if abs(q) == abs(mt):
            warnings.warn("|q| == |m_tilde|: flux- and monopole-dominated levels coincide", AmbiguousCase, stacklevel=2)
        return _ab_l_monopole_dominated(ntilde, q)
    root = math.sqrt(red.A2 if angular_case == CASE_II else red.A1)
    return ntilde + root


def azimuthal_exponent(params: SystemParams, m: int, angular_case: str = CASE_II, units: UnitSystem = ATOMIC) -> float:
    """Exponent ``a`` of the azimuthal factor ``exp(+- i a phi)``."""
    if isinstance(params, ABMonopole):
        return float(m)
    red = angular_reduction(params, m, units)
    return math.sqrt(red.A2 if angular_case == CASE_II else red.A1)


def _is_integer(x: float, tol: float = 1e-12) -> bool:
    return abs(x - round(x)) <= tol


def closed_form_energy(params: SystemParams, n: int, l_eff: float, units: UnitSystem = ATOMIC) -> float:
    params = _canonical(params)
    if isinstance(params, RingOscillator):
        return math.sqrt(units.kinetic) * (4 * n + 2.0 * l_eff + 3.0) * params.A
    ze2 = params.Z * units.e_charge**2
    return -units.mu * ze2**2 / (2.0 * units.hbar**2 * (n + l_eff + 1.0) ** 2)


def energy_closed_form(params: SystemParams, qn: QuantumNumbers, units: UnitSystem = ATOMIC) -> SpectrumEntry:
    l_eff = effective_l(params, qn.ntilde, qn.m, qn.angular_case, units)
    return SpectrumEntry(
        qn=qn,
        l_eff=l_eff,
        energy=closed_form_energy(params, qn.n, l_eff, units),
        method=CLOSED_FORM,
        single_valued=_is_integer(azimuthal_exponent(params, qn.m, qn.angular_case, units)),
        system=params.kind,
    )


def energy_bracket_grid(params: SystemParams, l_eff: float, units: UnitSystem = ATOMIC, count: int = 400) -> np.ndarray:
    """Increasing trial energies spanning many decades, for bracket scans."""
    params = _canonical(params)
    if isinstance(params, RingOscillator):
        unit = math.sqrt(units.kinetic) * params.A
        return unit * np.geomspace(1e-3, 1e4 * (l_eff + 1.0), count)
    unit = units.mu * (params.Z * units.e_charge**2) ** 2 / units.hbar**2
    return -unit * np.geomspace(1e2, 1e-8, count)


def energy_nu_rootfind(params: SystemParams, qn: QuantumNumbers, units: UnitSystem = ATOMIC) -> SpectrumEntry:
    """Energy from bisecting the NU quantisation condition of the radial equation."""
    entry = energy_closed_form(params, qn, units)
    family = lambda E: radial_form(params, entry.l_eff, E, units)  # noqa: E731
    bracket = nu.find_bracket(family, qn.n, energy_bracket_grid(params, entry.l_eff, units))
    entry.energy = nu.quantize(family, qn.n, bracket)
    entry.method = NU_ROOTFIND
    return entry


def _radial_scale(params: SystemParams, n: int, l_eff: float, units: UnitSystem) -> float:
    params = _canonical(params)
    if isinstance(params, RingOscillator):
        alpha = math.sqrt(2.0 * units.mu) * params.A / units.hbar
        return 2.0 / math.sqrt(alpha)
    return (n + l_eff + 1.0) * units.bohr_radius / params.Z


def radial_wavefunction(params: SystemParams, qn: QuantumNumbers, l_eff: float, E: float, r, units: UnitSystem = ATOMIC):
    """Unnormalised ``R(r)``."""
    red = radial_reduction(params, E, units)
    r = np.asarray(r, dtype=float)
    if red.alpha is not None:
        x = red.alpha * r * r
        return r**l_eff * np.exp(-0.5 * x) * laguerre(qn.n, l_eff + 0.5, x)
    x = 2.0 * red.kappa * r
    return r**l_eff * np.exp(-0.5 * x) * laguerre(qn.n, 2.0 * l_eff + 1.0, x)


def angular_exponents(params: SystemParams, m: int, angular_case: str = CASE_II, units: UnitSystem = ATOMIC) -> tuple[float, float]:
    """Exponents ``(e_plus, e_minus)`` of ``(1 - cos)^e_plus (1 + cos)^e_minus``."""
    red = angular_reduction(params, m, units)
    big, small = math.sqrt(red.A2), math.sqrt(red.A1)
    if angular_case == CASE_I:
        big, small = small, big
    return (0.5 * (big + red.sign * small), 0.5 * (big - red.sign * small))


def angular_profile(params: SystemParams, qn: QuantumNumbers, one_minus, one_plus, units: UnitSystem = ATOMIC):
    """Unnormalised ``Theta`` given ``1 - cos(theta)`` and ``1 + cos(theta)``.

    Passing both factors separately keeps full relative precision at either
    pole, where ``1 -+ cos(theta)`` would otherwise cancel.
    """
    e_plus, e_minus = angular_exponents(params, qn.m, qn.angular_case, units)
    one_minus = np.asarray(one_minus, dtype=float)
    one_plus = np.asarray(one_plus, dtype=float)
    s = 0.5 * (one_plus - one_minus)
    poly = jacobi(qn.ntilde, 2.0 * e_plus, 2.0 * e_minus, s, strict=qn.angular_case == CASE_II)
    with np.errstate(divide="ignore"):
        return _pow0(one_minus, e_plus) * _pow0(one_plus, e_minus) * poly


def polar_quadrature(params: SystemParams, m: int, angular_case: str, n_nodes: int, units: UnitSystem = ATOMIC):
    """Gauss-Jacobi rule carrying the pole factors ``(1 - s)^(2 e_plus) (1 + s)^(2 e_minus)``.

    Products of polar functions sharing ``(m, case)`` reduce to polynomials
    against this weight, so the rule integrates them exactly.  Returns
    ``None`` when the weight is not integrable.
    """
    e_plus, e_minus = angular_exponents(params, m, angular_case, units)
    try:
        return gauss_jacobi(n_nodes, 2.0 * e_plus, 2.0 * e_minus)
    except DomainError:
        return None


def angular_polynomial(params: SystemParams, qn: QuantumNumbers, s, units: UnitSystem = ATOMIC):
    """The Jacobi factor of ``Theta`` at ``s = cos(theta)``."""
    e_plus, e_minus = angular_exponents(params, qn.m, qn.angular_case, units)
    return jacobi(qn.ntilde, 2.0 * e_plus, 2.0 * e_minus, s, strict=qn.angular_case == CASE_II)


def angular_wavefunction(params: SystemParams, qn: QuantumNumbers, l_eff: float, theta, units: UnitSystem = ATOMIC):
    """Unnormalised ``Theta(theta)``; the Jacobi polynomial is taken at ``cos(theta)``."""
    half = 0.5 * np.asarray(theta, dtype=float)
    return angular_profile(params, qn, 2.0 * np.sin(half) ** 2, 2.0 * np.cos(half) ** 2, units)


def _pow0(base, exponent: float):
    # 0**0 is taken as 1
    if exponent == 0.0:
        return np.ones_like(base)
    return base**exponent


@dataclass(frozen=True)
class WavefunctionSample:
    r: float
    theta: float
    phi: float
    radial_value: float
    angular_value: float
    modulus: float
    phase: float
    normalization: tuple[float, float]

    @property
    def total_value(self) -> complex:
        return self.modulus * complex(math.cos(self.phase), math.sin(self.phase))


@dataclass(frozen=True)
class BoundState:
    """A closed-form eigenstate with numerically fixed normalisation.

    ``radial_norm`` makes ``int R^2 r^2 dr = 1``; ``angular_norm`` makes
    ``int Theta^2 sin(theta) dtheta = 1``.  The azimuthal factor is left as a
    bare phase.
    """

    params: SystemParams
    qn: QuantumNumbers
    l_eff: float
    energy: float
    units: UnitSystem = ATOMIC
    radial_norm: float = field(default=1.0, compare=False)
    angular_norm: float = field(default=1.0, compare=False)

    def radial(self, r):
        return self.radial_norm * radial_wavefunction(self.params, self.qn, self.l_eff, self.energy, r, self.units)

    def g(self, r):
        """``r R(r)``."""
        return np.asarray(r) * self.radial(r)

    def angular(self, theta):
        return self.angular_norm * angular_wavefunction(self.params, self.qn, self.l_eff, theta, self.units)

    def angular_halves(self, one_minus, one_plus):
        """``Theta`` from ``1 - cos(theta)`` and ``1 + cos(theta)``."""
        return self.angular_norm * angular_profile(self.params, self.qn, one_minus, one_plus, self.units)

    def angular_in_s(self, s):
        return self.angular(np.arccos(np.clip(s, -1.0, 1.0)))

    def sample(self, r: float, theta: float, phi: float = 0.0) -> WavefunctionSample:
        rv, av = float(self.radial(r)), float(self.angular(theta))
        a = azimuthal_exponent(self.params, self.qn.m, self.qn.angular_case, self.units)
        return WavefunctionSample(r, theta, phi, rv, av, abs(rv * av), a * phi, (self.radial_norm, self.angular_norm))


def bound_state(
    params: SystemParams,
    qn: QuantumNumbers,
    units: UnitSystem = ATOMIC,
    energy: Optional[float] = None,
    l_eff: Optional[float] = None,
) -> BoundState:
    """Normalised closed-form state; ``energy``/``l_eff`` override the exact values."""
    if l_eff is None:
        l_eff = effective_l(params, qn.ntilde, qn.m, qn.angular_case, units)
    if energy is None:
        energy = closed_form_energy(params, qn.n, l_eff, units)
    raw = BoundState(params, qn, l_eff, energy, units)
    scale = _radial_scale(params, qn.n, l_eff, units)
    rad = integrate_semi_infinite(lambda r: raw.radial(r) ** 2 * r * r, scale)
    rule = polar_quadrature(params, qn.m, qn.angular_case, qn.ntilde + 4, units)
    if rule is not None:
        ang = rule.integrate(lambda s: angular_polynomial(params, qn, s, units) ** 2)
    else:
        ang = integrate_interval(lambda s: raw.angular_in_s(s) ** 2, -1.0, 1.0)
    return BoundState(params, qn, l_eff, energy, units, 1.0 / math.sqrt(rad), 1.0 / math.sqrt(ang))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("NUCS_THREADS", "1")))
    except ValueError:
        return 1


def spectrum_table(
    params: SystemParams,
    n_max: int,
    ntilde_max: int,
    m_list,
    units: UnitSystem = ATOMIC,
    angular_case: str = CASE_II,
) -> list[SpectrumEntry]:
    """Closed-form entries for every ``(n, ntilde, m)``, sorted by energy.

    A failing entry is kept with ``energy = nan`` and its error message.
    """
    m_list = list(m_list)
    if n_max < 0 or ntilde_max < 0 or not m_list:
        raise ValueError("quantum-number grid is empty")
    qns = [
        QuantumNumbers(n, nt, m, angular_case)
        for n in range(n_max + 1)
        for nt in range(ntilde_max + 1)
        for m in m_list
    ]

    def one(qn):
        try:
            return energy_closed_form(params, qn, units)
        except NucsError as exc:
            return SpectrumEntry(qn, math.nan, math.nan, CLOSED_FORM, False, params.kind, str(exc))

    workers = _threads()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            entries = list(pool.map(one, qns))
    else:
        entries = [one(qn) for qn in qns]
    return sorted(entries, key=_order_key)


def _order_key(entry: SpectrumEntry):
    e = entry.energy
    # degenerate levels reached through different sums may differ in the last ulp
    rounded = float(f"{e:.12e}") if not math.isnan(e) else 0.0
    return (math.isnan(e), rounded, entry.qn.n, entry.qn.ntilde, entry.qn.m)
