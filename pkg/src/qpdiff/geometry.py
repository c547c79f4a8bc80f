"""Incidence geometry and observation-point bookkeeping.

Conventions
-----------
A plane wave exp(i(k1*x1 + k2*x2 + k3*x3)) hits a rigid (Dirichlet)
quarter-plane occupying {x1 >= 0, x2 >= 0, x3 = 0}. The wavenumber is
k = k0 + i*kappa with k0 > 0 and absorption kappa >= 0 (most results are
stated in the limit kappa -> 0). Incidence is parameterized by spherical
angles (theta0, phi0), in radians:

    k1 = -k * sin(theta0) * cos(phi0)
    k2 = -k * sin(theta0) * sin(phi0)
    k3 = -k * cos(theta0)          (so Re k3 <= 0, wave travels downward)

with theta0 in (0, pi/2) and phi0 in [0, 2*pi). Two derived transverse
wavenumbers appear throughout:

    k1p = sqrt(k^2 - k2^2),   k2p = sqrt(k^2 - k1^2)

taken on the branch with positive real part as kappa -> 0.

The sign pattern of (Re k1, Re k2) classifies the incidence:

* both positive  (phi0 in (pi, 3*pi/2))  -> "simple": the wave hits the
  plate face-on and only primary diffraction occurs;
* both negative  (phi0 in (0, pi/2))     -> "complicated": the wave
  arrives from the opposite quadrant and secondary (edge-to-edge)
  diffraction appears;
* mixed signs -> intermediate cases, classified but not evaluated here.

The auxiliary angle vartheta1, defined by k2 = -k*cos(vartheta1) and
k1p = k*sin(vartheta1) at kappa = 0, fixes the geometry of the
triple-crossing analysis in the complicated case.

Time convention exp(-i*omega*t); all angles radians; no degree support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ConfigError, GrazingIncidence

__all__ = [
    "CaseKind",
    "IncidenceConfig",
    "ObservationPoint",
    "make_incidence",
    "classify_case",
    "swap_incidence",
    "TOL_GRAZING_FACTOR",
]

# Guard factor for grazing incidence: |Re k1| or |Re k2| below
# TOL_GRAZING_FACTOR * k0 means the case classification (and most shadow
# boundaries) are numerically meaningless.
TOL_GRAZING_FACTOR = 1e-9


class CaseKind(Enum):
    """Sign pattern of the transverse incidence wavenumbers."""

    SIMPLE = "simple"                    # Re k1 > 0 and Re k2 > 0
    COMPLICATED = "complicated"          # Re k1 < 0 and Re k2 < 0
    INTERMEDIATE_12 = "intermediate-12"  # Re k1 > 0,  Re k2 < 0
    INTERMEDIATE_21 = "intermediate-21"  # Re k1 < 0,  Re k2 > 0


@dataclass(frozen=True)
class IncidenceConfig:
    """Frozen bundle of incidence parameters and derived wavenumbers.

    Attributes
    ----------
    k0, kappa : float
        Real part and absorption part of the wavenumber k = k0 + i*kappa.
    theta0, phi0 : float
        Incidence angles in radians, theta0 in (0, pi/2), phi0 in [0, 2pi).
    k1, k2, k3 : complex
        Cartesian incidence wavenumbers (see module docstring).
    k1p, k2p : complex
        sqrt(k^2 - k2^2) and sqrt(k^2 - k1^2), positive real part.
    vartheta1 : float
        Auxiliary angle with k2 = -k cos(vartheta1), k1p = k sin(vartheta1)
        at kappa = 0; lies in (0, pi/2) exactly in the complicated case.
    """

    k0: float
    kappa: float
    theta0: float
    phi0: float
    k1: complex
    k2: complex
    k3: complex
    k1p: complex
    k2p: complex
    vartheta1: float

    @property
    def k(self) -> complex:
        """Complex wavenumber k0 + i*kappa."""
        return complex(self.k0, self.kappa)


def make_incidence(k0: float, kappa: float, theta0: float, phi0: float) -> IncidenceConfig:
    """Build an IncidenceConfig from physical parameters.

    Parameters
    ----------
    k0 : float
        Real wavenumber, must be > 0.
    kappa : float
        Absorption, must be >= 0. Closed forms assume the limit kappa -> 0;
        a small positive kappa is accepted for continuation experiments.
    theta0, phi0 : float
        Incidence angles in radians. theta0 must lie strictly inside
        (0, pi/2); phi0 is reduced modulo 2*pi.

    Returns
    -------
    IncidenceConfig

    Raises
    ------
    ConfigError
        If k0 <= 0, kappa < 0 or theta0 is outside (0, pi/2).
    """
    if not (k0 > 0.0) or not math.isfinite(k0):
        raise ConfigError(f"k0 must be a positive finite number, got {k0!r}")
    if kappa < 0.0 or not math.isfinite(kappa):
        raise ConfigError(f"kappa must be >= 0, got {kappa!r}")
    if not (0.0 < theta0 < math.pi / 2):
        raise ConfigError(
            f"theta0 must lie strictly inside (0, pi/2), got {theta0!r}"
        )
    if not math.isfinite(phi0):
        raise ConfigError(f"phi0 must be finite, got {phi0!r}")
    phi0 = phi0 % (2.0 * math.pi)

    k = complex(k0, kappa)
    st, ct = math.sin(theta0), math.cos(theta0)
    cp, sp = math.cos(phi0), math.sin(phi0)
    k1 = -k * st * cp
    k2 = -k * st * sp
    k3 = -k * ct

    # Transverse roots on the branch with positive real part. The arguments
    # k^2 - k2^2 = k^2 (1 - sin^2 th0 sin^2 ph0) are positive real multiples
    # of k^2, so the principal square root is already the physical one.
    k1p = complex(_principal_sqrt(k * k - k2 * k2))
    k2p = complex(_principal_sqrt(k * k - k1 * k1))

    vartheta1 = math.atan2(k1p.real, -k2.real)

    return IncidenceConfig(
        k0=k0, kappa=kappa, theta0=theta0, phi0=phi0,
        k1=k1, k2=k2, k3=k3, k1p=k1p, k2p=k2p, vartheta1=vartheta1,
    )


def _principal_sqrt(z: complex) -> complex:
    """Principal complex square root (cut on the negative real axis)."""
    return complex(z) ** 0.5


def classify_case(cfg: IncidenceConfig) -> CaseKind:
    """Classify the incidence by the signs of Re k1 and Re k2.

    Raises
    ------
    GrazingIncidence
        If |Re k1| or |Re k2| is below TOL_GRAZING_FACTOR * k0: the
        incidence grazes a plate edge and the classification is undefined.
    """
    tol = TOL_GRAZING_FACTOR * cfg.k0
    re1, re2 = cfg.k1.real, cfg.k2.real
    if abs(re1) < tol or abs(re2) < tol:
        raise GrazingIncidence(
            f"incidence grazes an edge: Re k1 = {re1:.3e}, Re k2 = {re2:.3e}, "
            f"guard = {tol:.3e}"
        )
    if re1 > 0 and re2 > 0:
        return CaseKind.SIMPLE
    if re1 < 0 and re2 < 0:
        return CaseKind.COMPLICATED
    if re1 > 0:
        return CaseKind.INTERMEDIATE_12
    return CaseKind.INTERMEDIATE_21


def swap_incidence(cfg: IncidenceConfig) -> IncidenceConfig:
    """Return the incidence with the roles of axes 1 and 2 exchanged.

    The swapped configuration has k1' = k2, k2' = k1 (realized by
    phi0 -> pi/2 - phi0), which together with (x1, x2) -> (x2, x1) is the
    symmetry that maps every "...1" quantity to its "...2" partner.
    """
    phi_swapped = (math.pi / 2 - cfg.phi0) % (2.0 * math.pi)
    return make_incidence(cfg.k0, cfg.kappa, cfg.theta0, phi_swapped)


@dataclass(frozen=True)
class ObservationPoint:
    """Observation point in the half-space x3 >= 0.

    Attributes
    ----------
    x1, x2, x3 : float
        Cartesian coordinates, x3 >= 0.
    r : float
        Distance from the plate corner, r > 0.
    xt1, xt2, xt3 : float
        Unit direction (x1, x2, x3)/r.
    """

    x1: float
    x2: float
    x3: float
    r: float
    xt1: float
    xt2: float
    xt3: float

    @classmethod
    def from_cartesian(cls, x1: float, x2: float, x3: float) -> "ObservationPoint":
        """Construct from Cartesian coordinates; rejects r = 0 and x3 < 0."""
        if x3 < 0.0:
            raise ConfigError(f"observation requires x3 >= 0, got x3 = {x3!r}")
        r = math.sqrt(x1 * x1 + x2 * x2 + x3 * x3)
        if r == 0.0 or not math.isfinite(r):
            raise ConfigError("observation point must be finite and nonzero")
        return cls(x1=x1, x2=x2, x3=x3, r=r,
                   xt1=x1 / r, xt2=x2 / r, xt3=x3 / r)

    @classmethod
    def from_spherical(cls, r: float, theta: float, phi: float) -> "ObservationPoint":
        """Construct from spherical coordinates (theta from the x3-axis)."""
        if r <= 0.0:
            raise ConfigError(f"r must be > 0, got {r!r}")
        st = math.sin(theta)
        return cls.from_cartesian(r * st * math.cos(phi),
                                  r * st * math.sin(phi),
                                  r * math.cos(theta))

    def swapped(self) -> "ObservationPoint":
        """The point with x1 and x2 exchanged."""
        return ObservationPoint(
            x1=self.x2, x2=self.x1, x3=self.x3, r=self.r,
            xt1=self.xt2, xt2=self.xt1, xt3=self.xt3,
        )
