"""Closed-form far-field wave components and their assembly.

Every component is the leading far-field contribution of one special
point of the spectral double integral (see `singularities`):

* RW  - the geometrical (reflected) plane wave from the transverse
        crossing of the two polar lines;
* PD1 - the primary edge wave of the edge x2 = 0 (conical/cylindrical
        wave from the stationary point on the polar line p1), PD2 its
        mirror for the edge x1 = 0;
* SW  - the spherical wave emitted by the plate corner (2-D saddle),
        carrying the vertex diffraction coefficient;
* SD1 - the secondary edge wave (complicated incidence only): the wave
        diffracted by edge 2 and then by edge 1; SD2 its mirror.

Components return a `WaveComponent` carrying the complex value, activity
and penumbra flags, and quality flags for zones where a closed form is
non-uniform (coalescence of PD with RW; the secondary-wave blow-up sector
near the plane). Formulas are the vanishing-absorption limits; gates use
the real parts of the wavenumbers.

Unit-step convention: gates within EPS_PENUMBRA (relative) of zero keep
the one-sided value (1/2 exactly at zero) and set penumbra = True.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DivergentAtPlate, SimpleCaseRequest, UnsupportedCase
from .geometry import (CaseKind, IncidenceConfig, ObservationPoint,
                       classify_case, swap_incidence)
from .singularities import EPS_PENUMBRA, gate

__all__ = [
    "VertexCoefficient",
    "WaveComponent",
    "TotalField",
    "u_incident",
    "u_rw",
    "u_pd1",
    "u_pd2",
    "u_sw",
    "u_sd1",
    "u_sd2",
    "total_field",
    "phase_gradient",
    "COMPONENT_LABELS",
]

COMPONENT_LABELS = ("RW", "PD1", "PD2", "SW", "SD1", "SD2")


@dataclass(frozen=True)
class VertexCoefficient:
    """Vertex (corner) diffraction coefficient source.

    The true coefficient solves a spectral problem on the unit sphere that
    is outside this engine's scope. Two sources are supported:

    * the placeholder unit coefficient (value 1 for every direction) --
      spherical-wave amplitudes are then *relative*, which downstream
      results flag;
    * a direction -> value lookup table (nearest neighbour in (theta, phi)),
      loadable from a JSON file of entries
      ``{"theta": .., "phi": .., "re": .., "im": ..}``.
    """

    kind: str = "placeholder-unit"
    entries: tuple[tuple[float, float, complex], ...] = field(default=())

    @classmethod
    def unit(cls) -> "VertexCoefficient":
        return cls(kind="placeholder-unit")

    @classmethod
    def from_json_file(cls, path: str) -> "VertexCoefficient":
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        rows = doc["entries"] if isinstance(doc, dict) else doc
        entries = []
        try:
            for row in rows:
                entries.append((float(row["theta"]), float(row["phi"]),
                                complex(float(row["re"]), float(row.get("im", 0.0)))))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad vertex-coefficient table {path}: {exc}") from exc
        if not entries:
            raise ConfigError(f"vertex-coefficient table {path} is empty")
        return cls(kind="table", entries=tuple(entries))

    def value_for(self, xt: ObservationPoint) -> tuple[complex, bool]:
        """Coefficient for a direction; second element: is it only relative?"""
        if self.kind == "placeholder-unit":
            return 1.0 + 0.0j, True
        theta = math.acos(max(-1.0, min(1.0, xt.xt3)))
        phi = math.atan2(xt.xt2, xt.xt1)
        best, best_d = self.entries[0][2], math.inf
        for th, ph, val in self.entries:
            dphi = math.atan2(math.sin(phi - ph), math.cos(phi - ph))
            d = (theta - th) ** 2 + dphi ** 2
            if d < best_d:
                best, best_d = val, d
        return best, False


@dataclass(frozen=True)
class WaveComponent:
    """One evaluated far-field component.

    Attributes
    ----------
    label : str
        'RW', 'PD1', 'PD2', 'SW', 'SD1' or 'SD2'.
    value : complex
        Component value (zero when inactive).
    active : bool
        Whether the observation point lies in the component's lit region.
    penumbra : bool
        True within the relative EPS_PENUMBRA band of an activity boundary.
    needs_vertex_coeff : bool
        True for the spherical wave (its absolute amplitude requires the
        vertex coefficient).
    flags : tuple[str, ...]
        Quality flags ('relative-amplitude', 'coalescence-zone',
        'blowup-sector').
    """

    label: str
    value: complex
    active: bool
    penumbra: bool
    needs_vertex_coeff: bool = False
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class TotalField:
    """Assembled field at one observation point."""

    incident: complex
    scattered: complex
    total: complex
    components: tuple[WaveComponent, ...]
    flags: tuple[str, ...]


def _evaluable_case(cfg: IncidenceConfig) -> CaseKind:
    case = classify_case(cfg)
    if case not in (CaseKind.SIMPLE, CaseKind.COMPLICATED):
        raise UnsupportedCase(
            f"component evaluation supports the simple and complicated cases "
            f"only, got {case.value}"
        )
    return case


def u_incident(x: ObservationPoint, cfg: IncidenceConfig) -> complex:
    """Incident plane wave exp(i*(k1*x1 + k2*x2 + k3*x3))."""
    return cmath.exp(1j * (cfg.k1 * x.x1 + cfg.k2 * x.x2 + cfg.k3 * x.x3))


# ---------------------------------------------------------------------------
# geometrical (reflected) wave
# ---------------------------------------------------------------------------

def u_rw(x: ObservationPoint, cfg: IncidenceConfig) -> WaveComponent:
    """Reflected plane wave -exp(i*(k1*x1 + k2*x2 - k3*x3)), gated by the
    geometric shadows of the two edges."""
    _evaluable_case(cfg)
    k1, k2, k3 = cfg.k1.real, cfg.k2.real, cfg.k3.real
    a1 = x.x1 + x.x3 * k1 / k3
    a2 = x.x2 + x.x3 * k2 / k3
    h1, p1 = gate(a1, abs(x.x1) + abs(x.x3 * k1 / k3) + x.r * 1e-30)
    h2, p2 = gate(a2, abs(x.x2) + abs(x.x3 * k2 / k3) + x.r * 1e-30)
    h = h1 * h2
    val = -cmath.exp(1j * (cfg.k1 * x.x1 + cfg.k2 * x.x2 - cfg.k3 * x.x3)) * h
    return WaveComponent(label="RW", value=val, active=h > 0.0,
                         penumbra=p1 or p2)


# ---------------------------------------------------------------------------
# primary edge waves
# ---------------------------------------------------------------------------

def _pd1_impl(x: ObservationPoint, cfg: IncidenceConfig, label: str) -> WaveComponent:
    k1, k2, k2p = cfg.k1.real, cfg.k2.real, cfg.k2p.real
    flags: tuple[str, ...] = ()
    if x.x3 > 0.0:
        rho = math.hypot(x.x2, x.x3)
        garg = x.x1 - (k1 / k2p) * rho
        h, pen = gate(garg, abs(x.x1) + abs(k1 / k2p) * rho)
        if h == 0.0:
            return WaveComponent(label=label, value=0.0j, active=False, penumbra=pen)
        denom_c = k2 * rho - x.x2 * k2p
        scale_c = abs(k2 * rho) + abs(x.x2 * k2p)
        if abs(denom_c) <= EPS_PENUMBRA * scale_c:
            pen = True
            flags = ("coalescence-zone",)
        amp = (cmath.exp(-0.75j * math.pi) * x.x3 * cmath.sqrt(cfg.k2p + cfg.k2)
               / (math.sqrt(2.0 * math.pi) * denom_c * math.sqrt(rho + x.x2)))
        val = amp * cmath.exp(1j * (cfg.k1 * x.x1 + cfg.k2p * rho)) * h
        return WaveComponent(label=label, value=val, active=True, penumbra=pen,
                             flags=flags)
    # plane x3 = 0: cylindrical wave of the lit half-plane x2 < 0
    eps = EPS_PENUMBRA * math.hypot(x.x1, x.x2)
    garg2 = k2p * x.x1 + k1 * x.x2
    h2, p2 = gate(garg2, abs(k2p * x.x1) + abs(k1 * x.x2))
    if -eps <= x.x2 <= 0.0 and h2 > 0.0:
        raise DivergentAtPlate(
            f"{label} diverges at the plate edge (x2 = {x.x2:.3e}, x3 = 0)"
        )
    h1, p1 = gate(-x.x2, abs(x.x2) + eps)
    h = h1 * h2
    if h == 0.0:
        return WaveComponent(label=label, value=0.0j, active=False,
                             penumbra=p1 or p2)
    val = (cmath.exp(-0.75j * math.pi)
           * cmath.exp(1j * (cfg.k1 * x.x1 - cfg.k2p * x.x2))
           / (cmath.sqrt(cfg.k2p + cfg.k2) * math.sqrt(-math.pi * x.x2))) * h
    return WaveComponent(label=label, value=val, active=True, penumbra=p1 or p2)


def u_pd1(x: ObservationPoint, cfg: IncidenceConfig) -> WaveComponent:
    """Primary edge wave of the edge x2 = 0 (conical wave for x3 > 0,
    cylindrical on the plane).

    Raises DivergentAtPlate inside the relative EPS_PENUMBRA band of the
    plate edge x2 -> 0- at x3 = 0, where the plane formula blows up.
    """
    _evaluable_case(cfg)
    return _pd1_impl(x, cfg, "PD1")


def u_pd2(x: ObservationPoint, cfg: IncidenceConfig) -> WaveComponent:
    """Primary edge wave of the edge x1 = 0 (mirror of `u_pd1`)."""
    _evaluable_case(cfg)
    return _pd1_impl(x.swapped(), swap_incidence(cfg), "PD2")


# ---------------------------------------------------------------------------
# spherical vertex wave
# ---------------------------------------------------------------------------

def u_sw(x: ObservationPoint, cfg: IncidenceConfig,
         vc: VertexCoefficient | None = None) -> WaveComponent:
    """Spherical wave -(k*Wstar/2pi) * exp(i*k*r)/(k*r) from the plate
    corner; on the plane x3 = 0 it is shadowed inside the quarter-plane
    cone. Requires a vertex coefficient (placeholder unit by default)."""
    _evaluable_case(cfg)
    vc = vc or VertexCoefficient.unit()
    wstar, relative = vc.value_for(x)
    flags = ("relative-amplitude",) if relative else ()
    if x.x3 == 0.0:
        h1, p1 = gate(x.x1, x.r)
        h2, p2 = gate(x.x2, x.r)
        h = 1.0 - h1 * h2
        pen = p1 or p2
    else:
        h, pen = 1.0, False
    if h == 0.0:
        return WaveComponent(label="SW", value=0.0j, active=False, penumbra=pen,
                             needs_vertex_coeff=True, flags=flags)
    k = cfg.k
    val = -(k * wstar / (2.0 * math.pi)) * cmath.exp(1j * k * x.r) / (k * x.r) * h
    return WaveComponent(label="SW", value=val, active=True, penumbra=pen,
                         needs_vertex_coeff=True, flags=flags)


# ---------------------------------------------------------------------------
# secondary edge waves (complicated incidence only)
# ---------------------------------------------------------------------------

def _require_complicated(cfg: IncidenceConfig) -> None:
    case = _evaluable_case(cfg)
    if case is CaseKind.SIMPLE:
        raise SimpleCaseRequest(
            "secondary edge waves do not exist for simple incidence"
        )


def _sd1_impl(x: ObservationPoint, cfg: IncidenceConfig, label: str) -> WaveComponent:
    k1, k2, k1p = cfg.k1.real, cfg.k2.real, cfg.k1p.real
    if x.x3 > 0.0:
        rho = math.hypot(x.x2, x.x3)
        garg = -k2 * x.x1 - k1p * rho
        h, pen = gate(garg, abs(k2 * x.x1) + k1p * rho)
        if h == 0.0:
            return WaveComponent(label=label, value=0.0j, active=False, penumbra=pen)
        flags: tuple[str, ...] = ()
        if x.x2 < 0.0 and x.x3 < 0.1 * abs(x.x2):
            # approaching the plane inside x2 < 0: (x2 + rho)^{3/2} -> 0 and
            # the conical formula loses uniformity
            flags = ("blowup-sector",)
        val = (-x.x3 * cmath.sqrt(cfg.k1p + cfg.k1)
               * cmath.exp(1j * (cfg.k1p * x.x1 - cfg.k2 * rho)) * h
               / (4.0 * math.pi * (cfg.k1p - cfg.k1)
                  * (x.x2 + rho) ** 1.5 * complex(garg) ** 1.5))
        return WaveComponent(label=label, value=val, active=True, penumbra=pen,
                             flags=flags)
    # plane x3 = 0
    cone = k1p * x.x2 - k2 * x.x1
    cone_scale = abs(k1p * x.x2) + abs(k2 * x.x1)
    h1, p1 = gate(-x.x2, math.hypot(x.x1, x.x2))
    h2, p2 = gate(cone, cone_scale)
    if h1 > 0.0 and 0.0 <= cone <= EPS_PENUMBRA * cone_scale:
        raise DivergentAtPlate(
            f"{label} diverges at its cone edge on the plane (gate = {cone:.3e})"
        )
    h = h1 * h2
    if h == 0.0:
        return WaveComponent(label=label, value=0.0j, active=False,
                             penumbra=p1 or p2)
    val = (-1j * cmath.sqrt(cfg.k1p + cfg.k1) * math.sqrt(-x.x2)
           * cmath.exp(1j * (cfg.k1p * x.x1 + cfg.k2 * x.x2)) * h
           / (math.sqrt(2.0) * math.pi * (cfg.k1 - cfg.k1p) * x.x1
              * math.sqrt(cone)))
    return WaveComponent(label=label, value=val, active=True, penumbra=p1 or p2)


def u_sd1(x: ObservationPoint, cfg: IncidenceConfig) -> WaveComponent:
    """Secondary edge wave: diffracted by the edge x1 = 0, re-diffracted by
    the edge x2 = 0. Complicated incidence only.

    Raises
    ------
    SimpleCaseRequest
        For simple incidence (no secondary diffraction exists).
    DivergentAtPlate
        On the plane within the EPS_PENUMBRA band of the activity cone
        edge, where the plane formula blows up.
    """
    _require_complicated(cfg)
    return _sd1_impl(x, cfg, "SD1")


def u_sd2(x: ObservationPoint, cfg: IncidenceConfig) -> WaveComponent:
    """Mirror of `u_sd1` (diffracted by x2 = 0, then by x1 = 0)."""
    _require_complicated(cfg)
    return _sd1_impl(x.swapped(), swap_incidence(cfg), "SD2")


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------

def total_field(x: ObservationPoint, cfg: IncidenceConfig,
                vc: VertexCoefficient | None = None) -> TotalField:
    """Incident + scattered field with a per-component breakdown.

    The scattered field is the sum of all active closed-form components for
    the incidence case. On the quarter-plane itself the total vanishes
    (Dirichlet condition), which is exact for these closed forms.
    """
    case = _evaluable_case(cfg)
    comps = [u_rw(x, cfg), u_pd1(x, cfg), u_pd2(x, cfg), u_sw(x, cfg, vc)]
    if case is CaseKind.COMPLICATED:
        comps.append(u_sd1(x, cfg))
        comps.append(u_sd2(x, cfg))
    scattered = sum(c.value for c in comps)
    inc = u_incident(x, cfg)
    flags = tuple(sorted({f for c in comps for f in c.flags}))
    return TotalField(incident=inc, scattered=scattered, total=inc + scattered,
                      components=tuple(comps), flags=flags)


def phase_gradient(label: str, x: ObservationPoint, cfg: IncidenceConfig
                   ) -> np.ndarray:
    """Gradient of the component's phase S (value = A * exp(i*S)) at x.

    Every component's phase satisfies the eikonal identity
    |grad S|^2 = k0^2 exactly; used by the verification suites.
    """
    k1, k2, k3 = cfg.k1.real, cfg.k2.real, cfg.k3.real
    k1p, k2p = cfg.k1p.real, cfg.k2p.real
    k0 = cfg.k0
    if label == "RW":
        return np.array([k1, k2, -k3])
    if label == "SW":
        return k0 * np.array([x.xt1, x.xt2, x.xt3])
    if label == "PD1":
        if x.x3 == 0.0:
            return np.array([k1, -k2p, 0.0])
        rho = math.hypot(x.x2, x.x3)
        return np.array([k1, k2p * x.x2 / rho, k2p * x.x3 / rho])
    if label == "PD2":
        g = phase_gradient("PD1", x.swapped(), swap_incidence(cfg))
        return np.array([g[1], g[0], g[2]])
    if label == "SD1":
        if x.x3 == 0.0:
            return np.array([k1p, k2, 0.0])
        rho = math.hypot(x.x2, x.x3)
        return np.array([k1p, -k2 * x.x2 / rho, -k2 * x.x3 / rho])
    if label == "SD2":
        g = phase_gradient("SD1", x.swapped(), swap_incidence(cfg))
        return np.array([g[1], g[0], g[2]])
    raise ValueError(f"unknown component label {label!r}")
