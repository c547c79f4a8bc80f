"""Oracle for the plane-level secondary diffracted wave (triple crossing).

In the complicated incidence case the secondary edge wave observed on the
scatterer plane comes from a point where three singular traces meet.  After
reducing the local double integral to polar form, its angular factor is

    I(vartheta1, phi) = Int_Upsilon  cos^{1/2}(psi) dpsi
                        -----------------------------------------
                        sin^{1/2}(vartheta1 - psi) sin(psi) cos(psi - phi)

taken along the indented contour built in :mod:`qpdiff.contours`, and the
closed form of that contour integral is

    4*pi*sqrt(-sin phi) * H(-sin phi) * H(cos(vartheta1 - phi))
    ------------------------------------------------------------
    cos(phi) * sqrt(cos(vartheta1 - phi))

which vanishes identically outside one angular sector.  This module
evaluates both sides and assembles the full plane-level wave from the
angular integral, giving an oracle that is independent of the closed-form
wave component it validates.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .contours import upsilon_pieces
from .errors import CaseBoundary, NonConvergent, SimpleCaseRequest
from .geometry import CaseKind, IncidenceConfig, classify_case
from .quadrature import ContourPath, LineSegment, QuadResult, adaptive_path_quad

__all__ = [
    "upsilon_integral_closed",
    "upsilon_integral_numeric",
    "triple_crossing_field",
    "radial_ray_integral",
    "radial_ray_closed",
]

# Margin (radians) below which the direction counts as sitting on a case
# boundary: the closed form has a zero denominator / Heaviside jump there.
_BOUNDARY_EPS = 1e-6


def upsilon_integral_closed(vartheta1: float, phi: float) -> complex:
    """Closed form of the angular integral.

    Nonzero only where sin(phi) < 0 and cos(vartheta1 - phi) > 0 -- the
    angular sector of the secondary edge wave.

    Raises
    ------
    CaseBoundary
        Within ``_BOUNDARY_EPS`` of a sector boundary or of the cos(phi)
        zero, where the closed form is discontinuous or divergent.
    """
    s, c = math.sin(phi), math.cos(phi)
    cv = math.cos(vartheta1 - phi)
    if min(abs(s), abs(cv), abs(c)) < _BOUNDARY_EPS:
        raise CaseBoundary(
            f"direction phi={phi:.6f} within {_BOUNDARY_EPS} of a sector boundary"
        )
    if s > 0.0 or cv < 0.0:
        return 0.0 + 0.0j
    return 4.0 * math.pi * math.sqrt(-s) / (c * math.sqrt(cv)) + 0.0j


def _piece_integrand(vartheta1: float, phi: float, sign_cos: int, sign_sin: int):
    def f(psi: np.ndarray) -> np.ndarray:
        num = sign_cos * np.sqrt(np.cos(psi))
        den = (sign_sin * np.sqrt(np.sin(vartheta1 - psi))
               * np.sin(psi) * np.cos(psi - phi))
        return num / den
    return f


def upsilon_integral_numeric(vartheta1: float, phi: float,
                             rel_tol: float = 1e-12,
                             d: float | None = None,
                             max_evals: int = 600_000) -> QuadResult:
    """Adaptive quadrature of the angular integral along its contour.

    The contour is split into pieces on which both square roots keep a
    constant branch; each piece is integrated adaptively.  On stall the
    indentation height is halved (up to 4 times) -- the integral is a
    homotopy invariant, so any admissible height gives the same value.
    """
    last: NonConvergent | None = None
    for attempt in range(5):
        d_try = d if d is None or attempt == 0 else None
        if attempt > 0:
            base = d if d is not None else 0.15
            d_try = base * 0.5 ** attempt
        try:
            pieces = upsilon_pieces(vartheta1, phi, d_try)
            total = 0.0 + 0.0j
            err = 0.0
            evals = 0
            for piece in pieces:
                f = _piece_integrand(vartheta1, phi, piece.sign_cos, piece.sign_sin)
                res = adaptive_path_quad(
                    f, ContourPath(segments=(piece.seg,)),
                    rel_tol=0.1 * rel_tol, abs_floor=1.0,
                    max_evals=max_evals // max(len(pieces), 1),
                )
                total += res.value
                err += res.est_error
                evals += res.evaluations
            return QuadResult(value=total, est_error=err, evaluations=evals)
        except NonConvergent as exc:  # retry with a tighter indentation
            last = exc
    raise NonConvergent(
        f"angular integral did not converge after indentation halving: {last}"
    )


def _secondary_amplitude(cfg: IncidenceConfig) -> complex:
    """Scale constant of the plane-level secondary wave assembly."""
    k1, k1p, k = cfg.k1, cfg.k1p, cfg.k
    return (cmath.sqrt(k1p + k1)
            / (4.0 * math.pi ** 2 * cmath.sqrt(2.0 * k) * (k1 - k1p)))


def triple_crossing_field(x1: float, x2: float, cfg: IncidenceConfig,
                          rel_tol: float = 1e-12,
                          numeric: bool = True) -> complex:
    """Plane-level secondary edge wave at (x1, x2, 0) from the angular integral.

    This is the independent oracle for the closed-form secondary component:
    the angular integral is evaluated numerically (or by its own closed
    form when ``numeric=False``) and multiplied by the assembly constant,
    radial decay and carrier phase; no part of the closed-form wave
    component is reused.
    """
    if classify_case(cfg) is not CaseKind.COMPLICATED:
        raise SimpleCaseRequest(
            "secondary edge waves exist only for complicated incidence"
        )
    r = math.hypot(x1, x2)
    if r <= 0.0:
        raise ValueError("observation point must be off the edge vertex")
    phi = math.atan2(x2, x1)
    if numeric:
        angular = upsilon_integral_numeric(cfg.vartheta1, phi, rel_tol=rel_tol).value
    else:
        angular = upsilon_integral_closed(cfg.vartheta1, phi)
    xi1_star = -cfg.k1p
    xi2_star = -cfg.k2
    carrier = cmath.exp(-1j * (x1 * xi1_star + x2 * xi2_star))
    return -1j * _secondary_amplitude(cfg) / r * carrier * angular


def radial_ray_closed(psi: complex, phi: float, r: float) -> complex:
    """Closed form of the radial factor integral: -i / (r cos(psi - phi))."""
    return -1j / (r * cmath.cos(psi - phi))


def radial_ray_integral(psi: complex, phi: float, r: float,
                        rel_tol: float = 1e-12) -> QuadResult:
    """Radial factor of the polar-form double integral, done numerically.

    Integrates exp(-i*rho*r*cos(psi-phi)) over rho from 0 along the ray
    rotated so the exponent is a pure decay; the ray is truncated where
    the envelope reaches exp(-45).
    """
    c = cmath.cos(psi - phi)
    if c == 0:
        raise CaseBoundary("radial integral direction sits on the pole")
    direction = -1j * c.conjugate() / abs(c)  # exponent becomes -r*|c|*t
    t_max = 45.0 / (r * abs(c))
    path = ContourPath(segments=(LineSegment(0.0 + 0.0j, direction * t_max),))

    def f(z: np.ndarray) -> np.ndarray:
        return np.exp(-1j * r * c * z)

    return adaptive_path_quad(f, path, rel_tol=rel_tol, abs_floor=abs(radial_ray_closed(psi, phi, r)))
