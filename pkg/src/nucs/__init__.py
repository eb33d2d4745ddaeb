"""Bound states of separable non-central potentials by the Nikiforov-Uvarov method.

Submodules:

* :mod:`nucs.poly` - quadratic polynomials and perfect-square roots
* :mod:`nucs.nu` - the Nikiforov-Uvarov reduction, branch selection and quantisation
* :mod:`nucs.specfun` - Laguerre and Jacobi polynomials, Gauss-Legendre quadrature
* :mod:`nucs.systems` - the Coulomb ring, Hartmann, AB+monopole and ring oscillator systems
* :mod:`nucs.oracle` - finite-difference eigensolvers and residual checks
* :mod:`nucs.cli` - the ``nucs`` command
"""

from .errors import (
    AmbiguousCase,
    BranchFlip,
    DegreeError,
    DomainError,
    EnergySignError,
    GridTooSmall,
    NoPhysicalBranch,
    NoRealK,
    NoSignChange,
    NotPerfectSquare,
    NucsError,
    UnsolvableAngular,
    UnsupportedSigmaShape,
)
from .nu import HypergeometricForm, NUBranch, NUSolution
from .poly import Poly
from .systems import (
    ATOMIC,
    ABMonopole,
    CoulombRing,
    Hartmann,
    QuantumNumbers,
    RingOscillator,
    SpectrumEntry,
    UnitSystem,
    bound_state,
    effective_l,
    energy_closed_form,
    energy_nu_rootfind,
    spectrum_table,
)

__version__ = "0.1.0"

__all__ = [
    "ATOMIC",
    "ABMonopole",
    "AmbiguousCase",
    "BranchFlip",
    "CoulombRing",
    "DegreeError",
    "DomainError",
    "EnergySignError",
    "GridTooSmall",
    "Hartmann",
    "HypergeometricForm",
    "NUBranch",
    "NUSolution",
    "NoPhysicalBranch",
    "NoRealK",
    "NoSignChange",
    "NotPerfectSquare",
    "NucsError",
    "Poly",
    "QuantumNumbers",
    "RingOscillator",
    "SpectrumEntry",
    "UnitSystem",
    "UnsolvableAngular",
    "UnsupportedSigmaShape",
    "bound_state",
    "effective_l",
    "energy_closed_form",
    "energy_nu_rootfind",
    "spectrum_table",
]
