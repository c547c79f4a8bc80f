"""Singular traces on the real spectral plane and their special points.

In the vanishing-absorption limit the integrand of the field's double
Fourier integral is singular on a finite union of curves ("traces") in the
real (xi1, xi2) plane:

* p1, p2   - polar lines xi1 = -Re k1, xi2 = -Re k2 of the spectral function;
* b1, b2   - branch lines xi1 = -k0, xi2 = -k0 of its one-variable roots;
* c        - the propagation circle xi1^2 + xi2^2 = k0^2 (kernel branch set);
* cc       - the arc of c with xi1 < 0 and xi2 < 0, across which the
             spectral function flips sign in both variables at once; the
             *product* kernel x spectral function is regular on cc and
             singular on the rest of c;
* sb1, sb2 - secondary branch lines xi1 = -Re k1p, xi2 = -Re k2p, present
             only for complicated incidence.

All line traces inherit the same indentation from the absorbing problem:
the integration plane passes on the upper (Im > 0) side of the singular
point in the corresponding variable.

Far-field contributions come from "special points" where the stationary
phase of exp(-i*r*G) interacts with the traces: transverse crossings
(geometrical wave), stationary points on a trace (edge waves and
secondary edge waves), the full two-dimensional saddle (spherical vertex
wave), and the inert configurations (additive crossings of branch lines,
tangential touches, crossings lying on the regular arc cc) that are
enumerated but contribute nothing.

For observation directions in the plane x3 = 0 the phase is linear and a
special point is "active" exactly when its closed-form gate functions are
positive; for x3 > 0 stationarity conditions take over. Gate arguments
within EPS_PENUMBRA of zero set penumbra = True.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import OutsideCircle, PenumbralDirection, UnsupportedCase
from .geometry import CaseKind, IncidenceConfig, ObservationPoint

__all__ = [
    "Trace",
    "SpecialPointKind",
    "SpecialPoint",
    "PhaseModel",
    "real_traces",
    "special_points_plane",
    "special_points_space",
    "activity",
    "phase_model",
    "gate",
    "EPS_PENUMBRA",
]

# Relative half-width of the penumbral band around every activity boundary.
EPS_PENUMBRA = 1e-6


@dataclass(frozen=True)
class Trace:
    """One singular trace of the integrand on the real spectral plane.

    Attributes
    ----------
    trace_id : str
        One of 'p1', 'p2', 'b1', 'b2', 'c', 'cc', 'sb1', 'sb2'.
    kind : str
        'pole-line', 'branch-line', 'circle' or 'arc'.
    axis : int | None
        For lines: which spectral coordinate is fixed (1 or 2).
    position : float | None
        For lines: the fixed coordinate value.
    radius : float | None
        For 'circle'/'arc': the radius (= k0).
    side : int
        Indentation flag: +1 means the integration plane passes on the
        Im > 0 side of the trace in its own variable (all line traces);
        for the circle it records the physical kernel root (Im > 0).
    """

    trace_id: str
    kind: str
    axis: int | None = None
    position: float | None = None
    radius: float | None = None
    side: int = +1


class SpecialPointKind(Enum):
    """Local geometry of a special point."""

    TRANSVERSE_CROSSING = "transverse-crossing"
    TANGENTIAL_TOUCH = "tangential-touch"
    ADDITIVE_CROSSING = "additive-crossing"
    TRIPLE_CROSSING = "triple-crossing"
    SADDLE_ON_SINGULARITY = "saddle-on-singularity"
    SADDLE_2D = "saddle-2d"


@dataclass(frozen=True)
class SpecialPoint:
    """A candidate far-field contribution point on the real spectral plane.

    Attributes
    ----------
    xi1, xi2 : float
        Coordinates (kappa -> 0 limit).
    kind : SpecialPointKind
    label : str
        Which wave it feeds: 'RW', 'PD1', 'PD2', 'SW', 'SD1', 'SD2', or
        'Inert' for configurations that never contribute to the field.
    traces : tuple[str, ...]
        Ids of the traces meeting at the point.
    active : bool
        Whether the point contributes for the given observation direction.
    penumbra : bool
        True when an activity gate is within EPS_PENUMBRA of zero.
    """

    xi1: float
    xi2: float
    kind: SpecialPointKind
    label: str
    traces: tuple[str, ...]
    active: bool
    penumbra: bool


@dataclass(frozen=True)
class PhaseModel:
    """Quadratic model of the phase G at a spectral point.

    G(xi; x) = xt1*xi1 + xt2*xi2 - xt3*sqrt(k0^2 - xi1^2 - xi2^2), per unit
    distance r (the full phase is r*G of the unit direction xt).
    """

    value: float
    grad: np.ndarray      # shape (2,)
    hessian: np.ndarray   # shape (2, 2)


# ---------------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------------

def _require_evaluable_case(case: CaseKind) -> None:
    if case not in (CaseKind.SIMPLE, CaseKind.COMPLICATED):
        raise UnsupportedCase(
            f"trace/special-point enumeration implemented for the simple and "
            f"complicated cases only, got {case.value}"
        )


def real_traces(cfg: IncidenceConfig, case: CaseKind) -> list[Trace]:
    """Enumerate the singular traces for the given incidence case.

    Positions are the kappa -> 0 limits (real parts of the wavenumbers).
    """
    _require_evaluable_case(case)
    k0 = cfg.k0
    traces = [
        Trace("p1", "pole-line", axis=1, position=-cfg.k1.real),
        Trace("p2", "pole-line", axis=2, position=-cfg.k2.real),
        Trace("b1", "branch-line", axis=1, position=-k0),
        Trace("b2", "branch-line", axis=2, position=-k0),
        Trace("c", "circle", radius=k0),
        Trace("cc", "arc", radius=k0),
    ]
    if case is CaseKind.COMPLICATED:
        traces.append(Trace("sb1", "branch-line", axis=1, position=-cfg.k1p.real))
        traces.append(Trace("sb2", "branch-line", axis=2, position=-cfg.k2p.real))
    return traces


# ---------------------------------------------------------------------------
# activity gates
# ---------------------------------------------------------------------------

def gate(arg: float, scale: float) -> tuple[float, bool]:
    """Unit-step gate with a penumbral band.

    Returns (value, penumbra): value is 1.0 / 0.0 by the sign of ``arg``
    (0.5 exactly at zero); penumbra is True when |arg| <= EPS_PENUMBRA*scale.
    """
    eps = EPS_PENUMBRA * abs(scale)
    pen = abs(arg) <= eps
    if arg > 0.0:
        return 1.0, pen
    if arg < 0.0:
        return 0.0, pen
    return 0.5, True


def _gates_plane(label: str, xt1: float, xt2: float, cfg: IncidenceConfig
                 ) -> tuple[bool, bool]:
    """(active, penumbra) for a labeled point, plane observation (x3 = 0)."""
    k1, k2 = cfg.k1.real, cfg.k2.real
    k1p, k2p = cfg.k1p.real, cfg.k2p.real
    if label == "RW":
        g1, p1 = gate(xt1, 1.0)
        g2, p2 = gate(xt2, 1.0)
        return (g1 > 0.5 and g2 > 0.5), (p1 or p2)
    if label == "PD1":
        g1, p1 = gate(-xt2, 1.0)
        g2, p2 = gate(k2p * xt1 + k1 * xt2, abs(k2p * xt1) + abs(k1 * xt2) + cfg.k0)
        return (g1 > 0.5 and g2 > 0.5), (p1 or p2)
    if label == "PD2":
        g1, p1 = gate(-xt1, 1.0)
        g2, p2 = gate(k1p * xt2 + k2 * xt1, abs(k1p * xt2) + abs(k2 * xt1) + cfg.k0)
        return (g1 > 0.5 and g2 > 0.5), (p1 or p2)
    if label == "SW":
        g1, p1 = gate(xt1, 1.0)
        g2, p2 = gate(xt2, 1.0)
        return not (g1 > 0.5 and g2 > 0.5), (p1 or p2)
    if label == "SD1":
        g1, p1 = gate(-xt2, 1.0)
        g2, p2 = gate(k1p * xt2 - k2 * xt1, abs(k1p * xt2) + abs(k2 * xt1) + cfg.k0)
        return (g1 > 0.5 and g2 > 0.5), (p1 or p2)
    if label == "SD2":
        g1, p1 = gate(-xt1, 1.0)
        g2, p2 = gate(k2p * xt1 - k1 * xt2, abs(k2p * xt1) + abs(k1 * xt2) + cfg.k0)
        return (g1 > 0.5 and g2 > 0.5), (p1 or p2)
    return False, False  # Inert


def _gates_space(label: str, xt: ObservationPoint, cfg: IncidenceConfig
                 ) -> tuple[bool, bool]:
    """(active, penumbra) for a labeled point, x3 > 0 observation."""
    k1, k2, k3 = cfg.k1.real, cfg.k2.real, cfg.k3.real
    k1p, k2p = cfg.k1p.real, cfg.k2p.real
    xt1, xt2, xt3 = xt.xt1, xt.xt2, xt.xt3
    if label == "RW":
        a1 = xt1 + xt3 * k1 / k3
        a2 = xt2 + xt3 * k2 / k3
        g1, p1 = gate(a1, abs(xt1) + abs(xt3 * k1 / k3) + 1e-30)
        g2, p2 = gate(a2, abs(xt2) + abs(xt3 * k2 / k3) + 1e-30)
        return (g1 > 0.5 and g2 > 0.5), (p1 or p2)
    if label == "SW":
        return True, False
    rho_t = math.hypot(xt2, xt3)
    rho_t_sw = math.hypot(xt1, xt3)
    if label == "PD1":
        a = xt1 - (k1 / k2p) * rho_t
        g1, p1 = gate(a, abs(xt1) + abs(k1 / k2p) * rho_t)
        return g1 > 0.5, p1
    if label == "PD2":
        a = xt2 - (k2 / k1p) * rho_t_sw
        g1, p1 = gate(a, abs(xt2) + abs(k2 / k1p) * rho_t_sw)
        return g1 > 0.5, p1
    if label == "SD1":
        a = -k2 * xt1 - k1p * rho_t
        g1, p1 = gate(a, abs(k2 * xt1) + abs(k1p) * rho_t)
        return g1 > 0.5, p1
    if label == "SD2":
        a = -k1 * xt2 - k2p * rho_t_sw
        g1, p1 = gate(a, abs(k1 * xt2) + abs(k2p) * rho_t_sw)
        return g1 > 0.5, p1
    return False, False  # Inert


def activity(sp: SpecialPoint, xt: ObservationPoint, cfg: IncidenceConfig
             ) -> tuple[bool, bool]:
    """Re-evaluate (active, penumbra) of a special point for a direction."""
    if sp.label == "Inert":
        return False, False
    if xt.x3 == 0.0:
        return _gates_plane(sp.label, xt.xt1, xt.xt2, cfg)
    return _gates_space(sp.label, xt, cfg)


# ---------------------------------------------------------------------------
# special points
# ---------------------------------------------------------------------------

def _mk(xi1: float, xi2: float, kind: SpecialPointKind, label: str,
        traces: tuple[str, ...], act: tuple[bool, bool]) -> SpecialPoint:
    return SpecialPoint(xi1=float(xi1), xi2=float(xi2), kind=kind, label=label,
                        traces=traces, active=act[0], penumbra=act[1])


def _inert_common(cfg: IncidenceConfig) -> list[SpecialPoint]:
    """Additive branch-line crossings and tangential touches (never active)."""
    k0 = cfg.k0
    k1, k2 = cfg.k1.real, cfg.k2.real
    off = (False, False)
    return [
        _mk(-k0, -k0, SpecialPointKind.ADDITIVE_CROSSING, "Inert", ("b1", "b2"), off),
        _mk(-k1, -k0, SpecialPointKind.ADDITIVE_CROSSING, "Inert", ("p1", "b2"), off),
        _mk(-k0, -k2, SpecialPointKind.ADDITIVE_CROSSING, "Inert", ("p2", "b1"), off),
        _mk(-k0, 0.0, SpecialPointKind.TANGENTIAL_TOUCH, "Inert", ("b1", "c"), off),
        _mk(0.0, -k0, SpecialPointKind.TANGENTIAL_TOUCH, "Inert", ("b2", "c"), off),
    ]


def special_points_plane(cfg: IncidenceConfig, case: CaseKind,
                         xt: ObservationPoint) -> list[SpecialPoint]:
    """Enumerate special points for observation in the plane x3 = 0.

    Parameters
    ----------
    xt : ObservationPoint
        Observation point with x3 = 0; only its direction matters.

    Raises
    ------
    UnsupportedCase
        For the intermediate incidence cases.
    PenumbralDirection
        If the direction lies along a plate edge (the saddle positions of
        the edge waves are undefined there).
    """
    _require_evaluable_case(case)
    if xt.x3 != 0.0:
        raise ValueError("special_points_plane requires x3 = 0")
    k0 = cfg.k0
    k1, k2 = cfg.k1.real, cfg.k2.real
    k1p, k2p = cfg.k1p.real, cfg.k2p.real
    xt1, xt2 = xt.xt1, xt.xt2
    if abs(xt1) < EPS_PENUMBRA or abs(xt2) < EPS_PENUMBRA:
        raise PenumbralDirection(
            f"direction ({xt1:.3e}, {xt2:.3e}) lies along a plate edge"
        )

    pts: list[SpecialPoint] = []
    pts.append(_mk(-k1, -k2, SpecialPointKind.TRANSVERSE_CROSSING, "RW",
                   ("p1", "p2"), _gates_plane("RW", xt1, xt2, cfg)))
    pts.append(_mk(-k1, k2p, SpecialPointKind.TRANSVERSE_CROSSING, "PD1",
                   ("p1", "c"), _gates_plane("PD1", xt1, xt2, cfg)))
    pts.append(_mk(k1p, -k2, SpecialPointKind.TRANSVERSE_CROSSING, "PD2",
                   ("p2", "c"), _gates_plane("PD2", xt1, xt2, cfg)))
    # Antipodal stationary direction on the circle.
    sw = (-k0 * xt1, -k0 * xt2)
    sw_traces = ("c", "cc") if (sw[0] < 0.0 and sw[1] < 0.0) else ("c",)
    pts.append(_mk(sw[0], sw[1], SpecialPointKind.SADDLE_ON_SINGULARITY, "SW",
                   sw_traces, _gates_plane("SW", xt1, xt2, cfg)))

    if case is CaseKind.SIMPLE:
        off = (False, False)
        # Crossings feeding only the spectral function's own panel; they sit
        # on the regular arc cc, so the field integrand ignores them.
        pts.append(_mk(-k1, -k2p, SpecialPointKind.TRANSVERSE_CROSSING, "Inert",
                       ("p1", "c", "cc"), off))
        pts.append(_mk(-k1p, -k2, SpecialPointKind.TRANSVERSE_CROSSING, "Inert",
                       ("p2", "c", "cc"), off))
    else:
        pts.append(_mk(-k1p, -k2, SpecialPointKind.TRIPLE_CROSSING, "SD1",
                       ("sb1", "c", "p2"), _gates_plane("SD1", xt1, xt2, cfg)))
        pts.append(_mk(-k1, -k2p, SpecialPointKind.TRIPLE_CROSSING, "SD2",
                       ("p1", "sb2", "c"), _gates_plane("SD2", xt1, xt2, cfg)))
        off = (False, False)
        pts.append(_mk(-k1p, k2, SpecialPointKind.TRANSVERSE_CROSSING, "Inert",
                       ("sb1", "c", "cc"), off))
        pts.append(_mk(k1, -k2p, SpecialPointKind.TRANSVERSE_CROSSING, "Inert",
                       ("sb2", "c", "cc"), off))

    pts.extend(_inert_common(cfg))
    return pts


def special_points_space(cfg: IncidenceConfig, case: CaseKind,
                         xt: ObservationPoint) -> list[SpecialPoint]:
    """Enumerate special points for observation with x3 > 0.

    The geometrical-wave crossing keeps its position; the edge waves turn
    into stationary points *on* their trace whose second coordinate depends
    on the observation direction; the vertex wave becomes the interior 2-D
    saddle at -k0*(xt1, xt2), always active.
    """
    _require_evaluable_case(case)
    if not (xt.x3 > 0.0):
        raise ValueError("special_points_space requires x3 > 0")
    k0 = cfg.k0
    k1, k2 = cfg.k1.real, cfg.k2.real
    k1p, k2p = cfg.k1p.real, cfg.k2p.real
    xt1, xt2, xt3 = xt.xt1, xt.xt2, xt.xt3
    rho_t = math.hypot(xt2, xt3)
    rho_s = math.hypot(xt1, xt3)
    if rho_t < EPS_PENUMBRA or rho_s < EPS_PENUMBRA:
        raise PenumbralDirection("direction lies along a plate edge")

    pts: list[SpecialPoint] = []
    pts.append(_mk(-k1, -k2, SpecialPointKind.TRANSVERSE_CROSSING, "RW",
                   ("p1", "p2"), _gates_space("RW", xt, cfg)))
    pts.append(_mk(-k0 * xt1, -k0 * xt2, SpecialPointKind.SADDLE_2D, "SW",
                   ("c",) if math.hypot(xt1, xt2) > 1.0 - 1e-12 else (),
                   _gates_space("SW", xt, cfg)))
    pts.append(_mk(-k1, -xt2 * k2p / rho_t, SpecialPointKind.SADDLE_ON_SINGULARITY,
                   "PD1", ("p1",), _gates_space("PD1", xt, cfg)))
    pts.append(_mk(-xt1 * k1p / rho_s, -k2, SpecialPointKind.SADDLE_ON_SINGULARITY,
                   "PD2", ("p2",), _gates_space("PD2", xt, cfg)))
    if case is CaseKind.COMPLICATED:
        pts.append(_mk(-k1p, k2 * xt2 / rho_t, SpecialPointKind.SADDLE_ON_SINGULARITY,
                       "SD1", ("sb1",), _gates_space("SD1", xt, cfg)))
        pts.append(_mk(k1 * xt1 / rho_s, -k2p, SpecialPointKind.SADDLE_ON_SINGULARITY,
                       "SD2", ("sb2",), _gates_space("SD2", xt, cfg)))
    pts.extend(_inert_common(cfg))
    return pts


# ---------------------------------------------------------------------------
# phase model
# ---------------------------------------------------------------------------

def phase_model(p: tuple[float, float], xt: ObservationPoint,
                cfg: IncidenceConfig) -> PhaseModel:
    """Value, gradient and Hessian of the phase G at a real spectral point.

    G(xi) = xt1*xi1 + xt2*xi2 - xt3*sqrt(k0^2 - xi1^2 - xi2^2); the phase of
    the field integrand is r*G with r = |x|. For xt3 = 0 the phase is linear
    (zero Hessian). For xt3 > 0 the point must lie strictly inside the
    propagation circle.

    Raises
    ------
    OutsideCircle
        If xt3 > 0 and the point is not strictly inside the circle.
    """
    xi1, xi2 = float(p[0]), float(p[1])
    k0 = cfg.k0
    xt1, xt2, xt3 = xt.xt1, xt.xt2, xt.xt3
    if xt3 == 0.0:
        return PhaseModel(value=xt1 * xi1 + xt2 * xi2,
                          grad=np.array([xt1, xt2]),
                          hessian=np.zeros((2, 2)))
    s2 = k0 * k0 - xi1 * xi1 - xi2 * xi2
    if s2 <= (1e-12 * k0) ** 2:
        raise OutsideCircle(
            f"spectral point ({xi1}, {xi2}) not strictly inside the circle"
        )
    s = math.sqrt(s2)
    g = xt1 * xi1 + xt2 * xi2 - xt3 * s
    grad = np.array([xt1 + xt3 * xi1 / s, xt2 + xt3 * xi2 / s])
    hess = xt3 * (np.eye(2) / s + np.outer([xi1, xi2], [xi1, xi2]) / s ** 3)
    return PhaseModel(value=g, grad=grad, hessian=hess)
