"""Contour construction for the oracle integrals.

Three families of contours are built here:

* steepest-descent pole windows -- a short real run through a real pole,
  bypassed by a semicircle on a prescribed side, with both ends diving
  along the direction where the phase factor exp(-i*r*g*(xi-center))
  decays, deep enough to suppress the truncated tails exponentially;
* rotated descent rays through a stationary point, at -pi/4 to the real
  axis, so a quadratic phase turns into a real Gaussian;
* the angular contour of the triple-crossing integral: a polyline close to
  the real segment [0, 2*pi] that passes each pole / branch point of the
  integrand on a prescribed side.  The sides are data (see
  data/upsilon_sides.json), not code logic.

The triple-crossing integrand contains two square roots whose arguments
wander around the complex plane along the polyline, so a plain principal
branch would jump.  ``marched_pieces`` splits the polyline at every point
where either root's argument crosses the negative real axis and tags each
piece with the sign correction that makes the roots continuous along the
whole contour (starting from the principal branch at the left endpoint).
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import CaseBoundary
from .quadrature import ArcSegment, ContourPath, LineSegment

__all__ = [
    "decay_direction",
    "bend_leg",
    "vee_window_path",
    "descent_ray_path",
    "UpsilonPiece",
    "upsilon_polyline",
    "upsilon_pieces",
    "MIN_ANGULAR_GAP",
]

# Contour is rejected when two singular points of the angular integrand are
# closer than this (radians): the direction is too close to a case boundary
# for any indentation height to separate them cleanly.
MIN_ANGULAR_GAP = 0.02

# Depth of an end bend is capped so the leg cannot wander into far-away
# singularities; the residual truncation error after a capped bend still
# carries the exp(-r*|g|*depth) suppression.
_BEND_DEPTH_CAP = 0.12
_BEND_STRENGTH = 45.0


# ---------------------------------------------------------------------------
# pole windows and descent rays
# ---------------------------------------------------------------------------

def decay_direction(g: complex) -> complex:
    """Unit direction d with exp(-i*r*g*d*t) decaying as t grows.

    Along xi = end + d*t the phase term is -i*r*g*d*t = -r*|g|*t when
    d = -i*conj(g)/|g|: steepest descent for a locally linear phase.
    """
    a = abs(g)
    if a == 0.0:
        raise ValueError("zero phase slope has no decay direction")
    return -1j * g.conjugate() / a


def bend_leg(end: complex, g: complex, r: float,
             cap: float = _BEND_DEPTH_CAP) -> LineSegment:
    """Outgoing end leg from ``end`` into the decay half-plane of g."""
    depth = min(_BEND_STRENGTH / (r * abs(g)), cap)
    return LineSegment(end, end + decay_direction(g) * depth)


def _reverse(seg: LineSegment) -> LineSegment:
    return LineSegment(seg.b, seg.a)


def vee_window_path(pole: complex, side: int, g_left: complex,
                    g_right: complex, r: float, inner_half: float = 0.03,
                    bypass_radius: float | None = None,
                    strength: float = _BEND_STRENGTH) -> ContourPath:
    """Steepest-descent window through a (near-)real pole.

    A short real run of half-width ``inner_half`` carries a semicircular
    bypass of radius ``bypass_radius`` passing the pole on ``side`` (+1
    above, -1 below); from both ends of the run, straight legs dive along
    the local decay direction of the phase (slopes ``g_left``/``g_right``)
    until the phase factor is suppressed by exp(-strength).  Closing the
    legs at their far ends reproduces the one-sided residue rule exactly,
    so truncation error is at the exp(-strength) level rather than the
    algebraic 1/(r g) of a hard cutoff.
    """
    if side not in (-1, +1):
        raise ValueError("side must be +1 or -1")
    c = complex(pole).real  # the window is anchored on the real axis
    rho = 0.3 * inner_half if bypass_radius is None else bypass_radius
    off = abs(complex(pole).imag)

    def leg(end: complex, g: complex) -> LineSegment:
        return LineSegment(end, end + decay_direction(g) * strength / (r * abs(g)))

    if off >= rho:
        # pole already clear of the axis: straight run, no arc
        segs = [
            _reverse(leg(c - inner_half, g_left)),
            LineSegment(c - inner_half, c + inner_half),
            leg(c + inner_half, g_right),
        ]
        return ContourPath(segments=tuple(segs))
    if off > 0.5 * rho:
        rho = 2.0 * off  # keep clearance >= rho/2 from the true pole
    if rho >= inner_half:
        raise ValueError("bypass radius must be smaller than the inner run")
    if side > 0:
        arc = ArcSegment(center=c, radius=rho, angle0=math.pi, angle1=0.0)
    else:
        arc = ArcSegment(center=c, radius=rho, angle0=math.pi, angle1=2 * math.pi)
    segs = [
        _reverse(leg(c - inner_half, g_left)),
        LineSegment(c - inner_half, c - rho),
        arc,
        LineSegment(c + rho, c + inner_half),
        leg(c + inner_half, g_right),
    ]
    return ContourPath(segments=tuple(segs))


def descent_ray_path(center: complex, sigma: float, r: float,
                     g_fn=None, decay_target: float = 70.0) -> ContourPath:
    """Rotated ray through a stationary point with quadratic phase.

    The ray xi = center + t*exp(-i*pi/4*sgn(sigma)) turns the quadratic
    term sigma*t^2/2 of the phase into a real Gaussian decay; the
    half-length is sized so that the Gaussian envelope at the ends is
    exp(-decay_target/2).  If ``g_fn`` is given (true phase derivative at
    the ray ends), short decay legs absorb the residual cubic-term
    oscillation at the truncation points.
    """
    if sigma == 0.0:
        raise ValueError("degenerate quadratic phase")
    direction = cmath.exp(-1j * math.copysign(math.pi / 4.0, sigma))
    half = math.sqrt(decay_target / (r * abs(sigma)))
    a = center - half * direction
    b = center + half * direction
    segs = [LineSegment(a, b)]
    if g_fn is not None:
        ga = g_fn(a)
        gb = g_fn(b)
        segs = [_reverse(bend_leg(a, ga, r))] + segs + [bend_leg(b, gb, r)]
    return ContourPath(segments=tuple(segs))


# ---------------------------------------------------------------------------
# the angular contour of the triple-crossing integral
# ---------------------------------------------------------------------------

_TWO_PI = 2.0 * math.pi


def _load_side_table() -> list[dict]:
    text = resources.files("qpdiff").joinpath("data/upsilon_sides.json").read_text()
    return json.loads(text)["points"]


def _resolve(symbol: str, vartheta1: float, phi: float) -> float:
    table = {
        "zero": 0.0,
        "vartheta1": vartheta1,
        "half_pi": 0.5 * math.pi,
        "pi": math.pi,
        "vartheta1_plus_pi": vartheta1 + math.pi,
        "three_half_pi": 1.5 * math.pi,
        "two_pi": _TWO_PI,
        "phi_plus_half_pi": (phi + 0.5 * math.pi) % _TWO_PI,
        "phi_plus_three_half_pi": (phi + 1.5 * math.pi) % _TWO_PI,
    }
    return table[symbol]


def upsilon_polyline(vartheta1: float, phi: float,
                     d: float | None = None) -> tuple[list[complex], float]:
    """Vertex list of the angular contour, and the indentation height used.

    The contour starts at i*d above 0, ends at i*d above 2*pi, and runs at
    height +/-d so that every singular point of the integrand is passed on
    the side given by the data table; the height switches by a vertical
    jog halfway between neighbouring points of opposite side.

    Raises
    ------
    CaseBoundary
        If two singular points are closer than MIN_ANGULAR_GAP -- the
        direction is too close to a boundary between the activity cases.
    """
    if not 0.0 < vartheta1 < 0.5 * math.pi:
        raise CaseBoundary(f"incidence half-angle {vartheta1!r} outside (0, pi/2)")
    entries = [(_resolve(p["at"], vartheta1, phi), int(p["side"]))
               for p in _load_side_table()]
    interior = sorted(e for e in entries if 0.0 < e[0] < _TWO_PI)
    chain = [(0.0, +1)] + interior + [(_TWO_PI, +1)]
    gaps = [b[0] - a[0] for a, b in zip(chain[:-1], chain[1:])]
    min_gap = min(gaps)
    if min_gap < MIN_ANGULAR_GAP:
        raise CaseBoundary(
            f"angular singular points only {min_gap:.4f} rad apart "
            f"(vartheta1={vartheta1:.4f}, phi={phi:.4f})"
        )
    if d is None:
        d = min(0.15, 0.3 * min_gap)
    elif d <= 0:
        raise ValueError("indentation height must be positive")
    verts: list[complex] = [complex(0.0, d * chain[0][1])]
    for (a, sa), (b, sb) in zip(chain[:-1], chain[1:]):
        if sb != sa:
            m = 0.5 * (a + b)
            verts.append(complex(m, d * sa))
            verts.append(complex(m, d * sb))
    verts.append(complex(_TWO_PI, d * chain[-1][1]))
    return verts, d


@dataclass(frozen=True)
class UpsilonPiece:
    """One straight piece of the angular contour with constant root sheets.

    sign_cos / sign_sin multiply the principal square roots of cos(psi)
    and sin(vartheta1 - psi) to give the branches that are continuous
    along the whole contour.
    """

    seg: LineSegment
    sign_cos: int
    sign_sin: int


def _cut_crossings(fvals: np.ndarray, ts: np.ndarray, f, tol: float = 1e-13
                   ) -> list[float]:
    """Parameters where the sampled curve f(t) crosses the negative real axis.

    Between consecutive samples a strict sign change of Im f brackets a
    potential crossing; the bracket is bisected until narrow, then the
    interpolated real part decides whether the crossing happened on the
    cut (Re < 0).  Tangencies (no sign change) never flip a branch.
    """
    out: list[float] = []
    ts = np.array(ts, dtype=float)
    fvals = np.array(fvals, dtype=complex)
    # a sample landing exactly on the real axis would blind the strict
    # sign-change bracket below; nudge such samples off their parameter
    for i in np.nonzero(fvals.imag == 0.0)[0]:
        if 0 < i < len(ts) - 1:
            ts[i] += 1e-9 * (ts[i + 1] - ts[i])
            fvals[i] = f(ts[i])
    im = fvals.imag
    for i in range(len(ts) - 1):
        if im[i] * im[i + 1] < 0.0:
            ta, tb = ts[i], ts[i + 1]
            va, vb = fvals[i], fvals[i + 1]
            while tb - ta > 1e-12:
                tm = 0.5 * (ta + tb)
                vm = f(tm)
                if abs(vm.imag) < tol and vm.real < 0.0:
                    break
                if (va.imag > 0) != (vm.imag > 0):
                    tb, vb = tm, vm
                else:
                    ta, va = tm, vm
            w = va.imag / (va.imag - vb.imag) if va.imag != vb.imag else 0.5
            if (va + (vb - va) * w).real < 0.0:
                out.append(ta + (tb - ta) * w)
    return out


def marched_pieces(verts: list[complex], arg_fns) -> list[tuple[LineSegment, tuple[int, ...]]]:
    """Split a polyline so each root argument stays off its cut per piece.

    ``arg_fns`` maps psi -> argument of each square root.  Starting signs
    are +1 (principal) at the first vertex; every cut crossing toggles the
    corresponding sign.  Returns (segment, signs) pieces in order.
    """
    edges = [(a, b) for a, b in zip(verts[:-1], verts[1:]) if a != b]

    # one global parameter over the polyline: edge index + local t, so a
    # crossing sitting exactly on a vertex is still bracketed by samples
    def at_param(u: float) -> complex:
        i = min(int(u), len(edges) - 1)
        a, b = edges[i]
        return a + (b - a) * (u - i)

    ts_list = []
    for i, (a, b) in enumerate(edges):
        n = max(64, int(abs(b - a) / 0.002) + 1)
        ts_list.append(i + np.linspace(0.0, 1.0, n, endpoint=False))
    ts = np.concatenate(ts_list + [np.array([float(len(edges))])])

    flips: list[tuple[float, int]] = []
    for j, fn in enumerate(arg_fns):
        def along(u, fn=fn):
            return fn(at_param(u))
        vals = np.asarray([along(u) for u in ts])
        for u in _cut_crossings(vals, ts, along):
            flips.append((u, j))
    flips.sort()
    pieces: list[tuple[LineSegment, tuple[int, ...]]] = []
    signs = [+1 for _ in arg_fns]
    cursor = 0.0
    for pos, root_idx in flips + [(float(len(edges)), -1)]:
        while cursor < pos - 1e-14:
            i = int(cursor)
            if i >= len(edges):
                break
            a, b = edges[i]
            t0 = cursor - i
            t1 = min(pos - i, 1.0)
            if t1 - t0 > 1e-14:
                pieces.append((LineSegment(a + (b - a) * t0, a + (b - a) * t1),
                               tuple(signs)))
            cursor = i + t1
            if cursor >= i + 1.0 - 1e-14:
                cursor = float(i + 1)
        if root_idx >= 0:
            signs[root_idx] = -signs[root_idx]
    return pieces


def upsilon_pieces(vartheta1: float, phi: float,
                   d: float | None = None) -> list[UpsilonPiece]:
    """Constant-sheet pieces of the angular contour for given direction."""
    verts, _ = upsilon_polyline(vartheta1, phi, d)
    arg_fns = (
        lambda psi: cmath.cos(psi),
        lambda psi: cmath.sin(vartheta1 - psi),
    )
    return [UpsilonPiece(seg=seg, sign_cos=s[0], sign_sin=s[1])
            for seg, s in marched_pieces(verts, arg_fns)]
