"""Spectral kernel, its factorization, and sheet-tracked continuation.

The diffracted field is synthesized from a double Fourier-type integral
with kernel

    K(xi1, xi2) = 1 / sqrt(k^2 - xi1^2 - xi2^2),

the square root taken with positive imaginary part for absorbing k (the
"physical" root). K factorizes in two ways through the one-variable
building block

    gamma(a, b) = sqrt(sqrt(k^2 - a^2) + b),

namely 1/K = gamma(xi1, xi2)*gamma(xi1, -xi2) = gamma(xi2, xi1)*gamma(xi2, -xi1),
valid on consistently matched sheets. The spectral function W of the
half-order problem enters the engine only through closed-form data:
its residues on the polar lines xi1 = -k1 / xi2 = -k2,

    res_W_p1(xi2) = i * gamma(k1, xi2) * gamma(k1, k2) / (xi2 + k2),

and the explicit "free" terms that carry the whole polar part of W:

    w_free_term_1 = i * gamma(xi1, xi2) * gamma(xi1, k2) * gamma(k2, k1)
                    / ((xi1 + k1) * (xi2 + k2) * gamma(k2, -xi1)),

with w_free_term_2 its mirror under the 1 <-> 2 swap.

Branch policy
-------------
Sheets are explicit, never inferred from principal values alone:

* the *inner* root sqrt(k^2 - a^2) is selected by a vanishing-absorption
  predicate: the candidate that matches the principal root at wavenumber
  k0 + i*(kappa + kappa_eff) is physical (kappa_eff = 1e-10*k0 enters
  only this predicate, never a returned amplitude);
* the *outer* root of gamma is taken on its principal branch;
* off-axis excursions (quadrature contours, monodromy loops) track
  branches by continuity with `continue_along` or the grid marchers, with
  StepTooCoarse raised when a step cannot be matched unambiguously.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Protocol, Sequence, runtime_checkable

import numpy as np

from .errors import BranchPointHit, OnCircle, PoleHit, StepTooCoarse
from .geometry import IncidenceConfig

__all__ = [
    "ComplexPoint2",
    "BranchPath",
    "gamma",
    "kernel_K",
    "factorization_defect",
    "res_W_p1",
    "res_W_p2",
    "w_free_term_1",
    "w_free_term_2",
    "continue_along",
    "GammaAlongXi1",
    "FreeTermContinuation",
    "physical_sqrt",
    "inner_root",
    "kernel_root",
    "marched_sqrt_line",
    "marched_sqrt_grid",
    "BRANCH_TOL_FACTOR",
    "KAPPA_EFF_FACTOR",
    "CONTINUITY_TOL",
]

BRANCH_TOL_FACTOR = 1e-8   # guard distance around branch points, in units of k0
KAPPA_EFF_FACTOR = 1e-10   # absorption used *only* in branch-selection predicates
CONTINUITY_TOL = 1e-6      # ambiguity margin for branch matching along paths

_MAX_HALVINGS = 48


@dataclass(frozen=True)
class ComplexPoint2:
    """A point of the two-variable spectral space with explicit sheets.

    Attributes
    ----------
    xi1, xi2 : complex
        Spectral coordinates.
    sheet1, sheet2 : int
        Signs (+1/-1) of the inner roots sqrt(k^2 - xi1^2), sqrt(k^2 - xi2^2)
        relative to their physical values.
    """

    xi1: complex
    xi2: complex
    sheet1: int = +1
    sheet2: int = +1

    def __post_init__(self) -> None:
        if self.sheet1 not in (+1, -1) or self.sheet2 not in (+1, -1):
            raise ValueError("sheet flags must be +1 or -1")


# ---------------------------------------------------------------------------
# square-root primitives
# ---------------------------------------------------------------------------

def physical_sqrt(z, z_pert):
    """Square root of ``z`` whose sign matches the principal root of the
    absorption-perturbed argument ``z_pert``.

    Works for scalars and numpy arrays. This is the single place where the
    vanishing-absorption limit picks a side of a cut; the returned value is
    always computed from the *exact* argument ``z``.
    """
    z = np.asarray(z, dtype=complex)
    v = np.sqrt(z)
    vp = np.sqrt(np.asarray(z_pert, dtype=complex))
    flip = np.abs(v - vp) > np.abs(v + vp)
    out = np.where(flip, -v, v)
    if out.ndim == 0:
        return complex(out)
    return out


def _k_pert(cfg: IncidenceConfig) -> complex:
    return complex(cfg.k0, cfg.kappa + KAPPA_EFF_FACTOR * cfg.k0)


def inner_root(xi, cfg: IncidenceConfig, sheet: int = +1):
    """Physical inner root sqrt(k^2 - xi^2), optionally on the flipped sheet.

    At kappa = 0 this is positive real for |xi| < k0 on the real axis and
    positive imaginary for |xi| > k0.
    """
    k, kp = cfg.k, _k_pert(cfg)
    val = physical_sqrt(k * k - np.asarray(xi, dtype=complex) ** 2,
                        kp * kp - np.asarray(xi, dtype=complex) ** 2)
    return sheet * val


def kernel_root(xi1, xi2, cfg: IncidenceConfig):
    """Physical root sqrt(k^2 - xi1^2 - xi2^2) (positive imaginary part
    for absorbing k). Scalar or arrays (broadcast)."""
    k, kp = cfg.k, _k_pert(cfg)
    s1 = np.asarray(xi1, dtype=complex) ** 2
    s2 = np.asarray(xi2, dtype=complex) ** 2
    return physical_sqrt(k * k - s1 - s2, kp * kp - s1 - s2)


def marched_sqrt_line(arg: np.ndarray, anchor: int = 0) -> np.ndarray:
    """Continuous square root along an ordered 1-D array of arguments.

    Takes principal roots and flips signs cumulatively wherever consecutive
    principal values jump across a cut, anchored so index ``anchor`` keeps
    its principal value. The path is assumed fine enough that consecutive
    arguments never straddle a branch *point*.
    """
    v = np.sqrt(np.asarray(arg, dtype=complex))
    jump = np.abs(np.diff(v)) > np.abs(v[1:] + v[:-1])
    sign = np.ones(len(v))
    sign[1:] = np.cumprod(np.where(jump, -1.0, 1.0))
    if sign[anchor] < 0:
        sign = -sign
    return sign * v


def marched_sqrt_grid(arg: np.ndarray, anchor: tuple[int, int] = (0, 0)) -> np.ndarray:
    """Continuous square root on a 2-D grid of arguments.

    Marches along row ``anchor[0]`` first, then down each column, so the
    result is continuous along that comb of paths and takes the principal
    value at the anchor node.
    """
    arg = np.asarray(arg, dtype=complex)
    v = np.sqrt(arg)
    sign = np.ones(arg.shape)
    i0, j0 = anchor
    row = v[i0]
    jump = np.abs(np.diff(row)) > np.abs(row[1:] + row[:-1])
    srow = np.ones(len(row))
    srow[1:] = np.cumprod(np.where(jump, -1.0, 1.0))
    srow *= srow[j0]  # anchor keeps +1 (srow[j0]^2 = 1 -> entry at j0 is +1)
    jump_cols = np.abs(np.diff(v, axis=0)) > np.abs(v[1:, :] + v[:-1, :])
    steps = np.where(jump_cols, -1.0, 1.0)
    below = np.cumprod(steps[i0:, :], axis=0) if i0 < arg.shape[0] - 1 else None
    if below is not None:
        sign[i0 + 1:, :] = below
    if i0 > 0:
        above = np.cumprod(steps[:i0, :][::-1, :], axis=0)[::-1, :]
        sign[:i0, :] = above
    sign *= srow[np.newaxis, :]
    return sign * v


# ---------------------------------------------------------------------------
# kernel, factorization, residues, free terms
# ---------------------------------------------------------------------------

def _branch_tol(cfg: IncidenceConfig) -> float:
    return BRANCH_TOL_FACTOR * cfg.k0


def gamma(xi1: complex, xi2: complex, cfg: IncidenceConfig, sheet: int = +1) -> complex:
    """One-variable factor gamma(xi1, xi2) = sqrt(inner(xi1) + xi2).

    The inner root sqrt(k^2 - xi1^2) is physical (flipped if sheet = -1);
    the outer root is principal.

    Raises
    ------
    BranchPointHit
        Within the guard distance of xi1 = +-k or of the outer branch set
        inner(xi1) + xi2 = 0.
    """
    tol = _branch_tol(cfg)
    k = cfg.k
    if min(abs(xi1 - k), abs(xi1 + k)) < tol:
        raise BranchPointHit(f"xi1 = {xi1} within guard of the inner branch points +-k")
    a = inner_root(xi1, cfg, sheet)
    if abs(a + xi2) < tol:
        raise BranchPointHit(
            f"(xi1, xi2) = ({xi1}, {xi2}) within guard of the outer branch set"
        )
    return cmath.sqrt(a + xi2)


def kernel_K(p: ComplexPoint2, cfg: IncidenceConfig) -> complex:
    """Kernel K = 1/sqrt(k^2 - xi1^2 - xi2^2) on the sheet implied by ``p``.

    The effective kernel sheet is sheet1 * sheet2: flipping exactly one
    inner root flips the factorized product, hence the kernel root.

    Raises
    ------
    OnCircle
        Within the guard distance of the propagation circle.
    """
    s2 = cfg.k * cfg.k - p.xi1 * p.xi1 - p.xi2 * p.xi2
    if abs(s2) < _branch_tol(cfg) * cfg.k0 ** 2:
        raise OnCircle(f"point ({p.xi1}, {p.xi2}) lies on the propagation circle")
    s = kernel_root(p.xi1, p.xi2, cfg)
    return 1.0 / (p.sheet1 * p.sheet2 * s)


def factorization_defect(p: ComplexPoint2, cfg: IncidenceConfig, order: int = 1) -> float:
    """|K * gamma * gamma - 1| for one of the two factorization orders.

    order = 1 tests 1/K = gamma(xi1, xi2)*gamma(xi1, -xi2) (sheet1 on both
    factors); order = 2 the swapped pairing (sheet2). Exactly zero in exact
    arithmetic on matched sheets; < 1e-12 in floating point away from the
    guard zones.
    """
    K = kernel_K(p, cfg)
    if order == 1:
        g = gamma(p.xi1, p.xi2, cfg, p.sheet1) * gamma(p.xi1, -p.xi2, cfg, p.sheet1)
    elif order == 2:
        g = gamma(p.xi2, p.xi1, cfg, p.sheet2) * gamma(p.xi2, -p.xi1, cfg, p.sheet2)
    else:
        raise ValueError(f"order must be 1 or 2, got {order!r}")
    return abs(K * g - 1.0)


def res_W_p1(xi2: complex, cfg: IncidenceConfig) -> complex:
    """Residue of the spectral function on the polar line xi1 = -k1:
    i * gamma(k1, xi2) * gamma(k1, k2) / (xi2 + k2).

    Raises PoleHit near xi2 = -k2 and BranchPointHit near xi2 = -k2p.
    """
    tol = _branch_tol(cfg)
    if abs(xi2 + cfg.k2) < tol:
        raise PoleHit(f"xi2 = {xi2} within guard of the pole -k2")
    if abs(xi2 + cfg.k2p) < tol:
        raise BranchPointHit(f"xi2 = {xi2} within guard of the branch point -k2p")
    return 1j * gamma(cfg.k1, xi2, cfg) * gamma(cfg.k1, cfg.k2, cfg) / (xi2 + cfg.k2)


def res_W_p2(xi1: complex, cfg: IncidenceConfig) -> complex:
    """Residue on the polar line xi2 = -k2 (mirror of `res_W_p1`)."""
    tol = _branch_tol(cfg)
    if abs(xi1 + cfg.k1) < tol:
        raise PoleHit(f"xi1 = {xi1} within guard of the pole -k1")
    if abs(xi1 + cfg.k1p) < tol:
        raise BranchPointHit(f"xi1 = {xi1} within guard of the branch point -k1p")
    return 1j * gamma(cfg.k2, xi1, cfg) * gamma(cfg.k2, cfg.k1, cfg) / (xi1 + cfg.k1)


def w_free_term_1(p: ComplexPoint2, cfg: IncidenceConfig) -> complex:
    """Explicit polar part of the spectral function, first form:

        i * gamma(xi1, xi2) * gamma(xi1, k2) * gamma(k2, k1)
        / ((xi1 + k1) * (xi2 + k2) * gamma(k2, -xi1)).

    Carries *both* polar lines of W with the correct residues; the
    remainder of W is regular there.
    """
    tol = _branch_tol(cfg)
    if abs(p.xi1 + cfg.k1) < tol:
        raise PoleHit(f"xi1 = {p.xi1} within guard of the pole -k1")
    if abs(p.xi2 + cfg.k2) < tol:
        raise PoleHit(f"xi2 = {p.xi2} within guard of the pole -k2")
    if abs(cfg.k1p - p.xi1) < tol:
        raise BranchPointHit(f"xi1 = {p.xi1} within guard of the branch point +k1p")
    g_a = gamma(p.xi1, p.xi2, cfg, p.sheet1)
    g_b = gamma(p.xi1, cfg.k2, cfg, p.sheet1)
    g_c = gamma(cfg.k2, cfg.k1, cfg)
    g_d = cmath.sqrt(inner_root(cfg.k2, cfg) - p.xi1)  # gamma(k2, -xi1) = sqrt(k1p - xi1)
    return 1j * g_a * g_b * g_c / ((p.xi1 + cfg.k1) * (p.xi2 + cfg.k2) * g_d)


def w_free_term_2(p: ComplexPoint2, cfg: IncidenceConfig) -> complex:
    """Second form of the polar part (1 <-> 2 swap of `w_free_term_1`)."""
    tol = _branch_tol(cfg)
    if abs(p.xi1 + cfg.k1) < tol:
        raise PoleHit(f"xi1 = {p.xi1} within guard of the pole -k1")
    if abs(p.xi2 + cfg.k2) < tol:
        raise PoleHit(f"xi2 = {p.xi2} within guard of the pole -k2")
    if abs(cfg.k2p - p.xi2) < tol:
        raise BranchPointHit(f"xi2 = {p.xi2} within guard of the branch point +k2p")
    g_a = gamma(p.xi2, p.xi1, cfg, p.sheet2)
    g_b = gamma(p.xi2, cfg.k1, cfg, p.sheet2)
    g_c = gamma(cfg.k1, cfg.k2, cfg)
    g_d = cmath.sqrt(inner_root(cfg.k1, cfg) - p.xi2)  # gamma(k1, -xi2) = sqrt(k2p - xi2)
    return 1j * g_a * g_b * g_c / ((p.xi1 + cfg.k1) * (p.xi2 + cfg.k2) * g_d)


# ---------------------------------------------------------------------------
# analytic continuation along explicit paths
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BranchPath:
    """Piecewise-linear path in one complex spectral variable.

    Waypoints are interpolated linearly; `continue_along` subdivides
    adaptively between them. A path whose first and last waypoints agree
    is a loop.
    """

    waypoints: tuple[complex, ...]

    def __post_init__(self) -> None:
        if len(self.waypoints) < 2:
            raise ValueError("a path needs at least two waypoints")

    @property
    def is_loop(self) -> bool:
        return abs(self.waypoints[0] - self.waypoints[-1]) < 1e-14

    @classmethod
    def line(cls, a: complex, b: complex) -> "BranchPath":
        return cls(waypoints=(complex(a), complex(b)))

    @classmethod
    def circle_loop(cls, center: complex, radius: float, n: int = 24,
                    ccw: bool = True, start_angle: float = 0.0) -> "BranchPath":
        """Closed circular loop around ``center`` (counterclockwise by default)."""
        sgn = 1.0 if ccw else -1.0
        angles = start_angle + sgn * 2.0 * math.pi * np.arange(n + 1) / n
        pts = center + radius * np.exp(1j * angles)
        pts[-1] = pts[0]
        return cls(waypoints=tuple(complex(z) for z in pts))

    @classmethod
    def lasso(cls, base: complex, center: complex, radius: float, n: int = 24,
              ccw: bool = True) -> "BranchPath":
        """Path from ``base`` to a circle around ``center``, once around,
        and back to ``base`` (the standard monodromy probe)."""
        direction = (base - center) / abs(base - center)
        entry = center + radius * direction
        start_angle = cmath.phase(direction)
        loop = cls.circle_loop(center, radius, n=n, ccw=ccw, start_angle=start_angle)
        return cls(waypoints=(complex(base),) + loop.waypoints + (complex(base),))

    def min_clearance(self, points: Sequence[complex]) -> float:
        """Minimum distance from any waypoint to any of ``points``."""
        if not points:
            return math.inf
        w = np.asarray(self.waypoints)[:, None]
        q = np.asarray(list(points))[None, :]
        return float(np.min(np.abs(w - q)))


@runtime_checkable
class MultiValued(Protocol):
    """Functions exposing their full set of branch candidates at a point."""

    def __call__(self, z: complex) -> complex: ...

    def branch_values(self, z: complex) -> np.ndarray: ...


def continue_along(f, path: BranchPath, start_value: complex | None = None) -> complex:
    """Analytically continue ``f`` along ``path`` and return the end value.

    ``f`` is either a plain callable (candidates are +-f(z), enough for a
    single square-root ambiguity) or a `MultiValued` object exposing all
    branch candidates. Steps between waypoints are halved until the branch
    selection is unambiguous: the chosen candidate must move by at most a
    quarter of the local scale and beat the runner-up by a clear margin
    (CONTINUITY_TOL of the local scale below the safety fraction).

    Raises
    ------
    StepTooCoarse
        If unambiguous selection fails at the maximum subdivision depth
        (the path passes too close to a branch point of ``f``).
    """
    if isinstance(f, MultiValued):
        candidates: Callable[[complex], np.ndarray] = f.branch_values
    else:
        def candidates(z: complex) -> np.ndarray:
            v = f(z)
            return np.array([v, -v])

    value = complex(f(path.waypoints[0])) if start_value is None else complex(start_value)

    def step(za: complex, va: complex, zb: complex, depth: int) -> complex:
        cand = candidates(zb)
        dist = np.abs(cand - va)
        order = np.argsort(dist)
        best = cand[order[0]]
        scale = max(abs(best), abs(va))
        gap = dist[order[1]] - dist[order[0]] if len(cand) > 1 else math.inf
        safe = (dist[order[0]] <= 0.25 * scale + 1e-300
                and gap >= CONTINUITY_TOL * scale)
        if safe:
            return complex(best)
        if depth >= _MAX_HALVINGS:
            raise StepTooCoarse(
                f"cannot select a branch near z = {zb} (distance "
                f"{dist[order[0]]:.3e} vs runner-up {dist[order[1]]:.3e})"
            )
        zm = 0.5 * (za + zb)
        vm = step(za, va, zm, depth + 1)
        return step(zm, vm, zb, depth + 1)

    for za, zb in zip(path.waypoints[:-1], path.waypoints[1:]):
        if za == zb:
            continue
        value = step(za, value, zb, 0)
    return value


class GammaAlongXi1:
    """gamma(xi1, c) as a four-sheeted function of xi1, for continuation.

    Calling it returns the default physical-sheet value; `branch_values`
    exposes all four (inner sign) x (outer sign) combinations so that
    `continue_along` can follow loops around the inner branch points +-k.
    """

    def __init__(self, cfg: IncidenceConfig, xi2: complex):
        self.cfg = cfg
        self.xi2 = complex(xi2)

    def __call__(self, z: complex) -> complex:
        return cmath.sqrt(inner_root(z, self.cfg) + self.xi2)

    def branch_values(self, z: complex) -> np.ndarray:
        k = self.cfg.k
        a = cmath.sqrt(k * k - z * z)  # principal; sign combinations cover both sheets
        outs = []
        for si in (+1, -1):
            w = cmath.sqrt(si * a + self.xi2)
            outs.extend([w, -w])
        return np.array(outs)


class FreeTermContinuation:
    """Sheet-tracked evaluation of `w_free_term_1` under monodromy loops.

    Tracks the four square roots of the first free term individually
    (inner root r_in = sqrt(k^2 - xi1^2), outer roots r_a = sqrt(r_in + xi2),
    r_b = sqrt(r_in + k2), and r_c = sqrt(k1p - xi1)), so that loops in
    either variable update exactly the roots that depend on it. Collisions
    are only possible at a root's own branch point, which loop construction
    keeps clear of.
    """

    def __init__(self, cfg: IncidenceConfig, xi1: complex, xi2: complex):
        self.cfg = cfg
        self.xi1 = complex(xi1)
        self.xi2 = complex(xi2)
        self.r_in = complex(inner_root(xi1, cfg))
        self.r_a = cmath.sqrt(self.r_in + self.xi2)
        self.r_b = cmath.sqrt(self.r_in + cfg.k2)
        self.r_c = cmath.sqrt(cfg.k1p - self.xi1)
        self._g_const = gamma(cfg.k2, cfg.k1, cfg)

    def copy(self) -> "FreeTermContinuation":
        out = object.__new__(FreeTermContinuation)
        out.__dict__.update(self.__dict__)
        return out

    def value(self) -> complex:
        cfg = self.cfg
        return (1j * self.r_a * self.r_b * self._g_const
                / ((self.xi1 + cfg.k1) * (self.xi2 + cfg.k2) * self.r_c))

    # -- marching ----------------------------------------------------------

    @staticmethod
    def _match(principal: complex, prev: complex, where: str) -> complex:
        d_plus, d_minus = abs(principal - prev), abs(principal + prev)
        scale = max(abs(principal), abs(prev), 1e-300)
        if abs(d_plus - d_minus) < CONTINUITY_TOL * scale:
            raise StepTooCoarse(f"ambiguous branch match for {where}")
        return principal if d_plus < d_minus else -principal

    def _step_xi1(self, z: complex) -> None:
        cfg = self.cfg
        r_in_p = cmath.sqrt(cfg.k * cfg.k - z * z)
        self.r_in = self._match(r_in_p, self.r_in, "inner root")
        self.r_a = self._match(cmath.sqrt(self.r_in + self.xi2), self.r_a, "outer root a")
        self.r_b = self._match(cmath.sqrt(self.r_in + cfg.k2), self.r_b, "outer root b")
        self.r_c = self._match(cmath.sqrt(cfg.k1p - z), self.r_c, "root c")
        self.xi1 = z

    def _step_xi2(self, z: complex) -> None:
        self.r_a = self._match(cmath.sqrt(self.r_in + z), self.r_a, "outer root a")
        self.xi2 = z

    def _march(self, path: BranchPath, axis: int) -> None:
        step = self._step_xi1 if axis == 1 else self._step_xi2
        pos = self.xi1 if axis == 1 else self.xi2
        if abs(path.waypoints[0] - pos) > 1e-12:
            raise ValueError("path must start at the current point")
        for za, zb in zip(path.waypoints[:-1], path.waypoints[1:]):
            if za == zb:
                continue
            stack = [(za, zb, 0)]
            while stack:
                a, b, depth = stack.pop()
                saved = (self.r_in, self.r_a, self.r_b, self.r_c, self.xi1, self.xi2)
                try:
                    step(b)
                except StepTooCoarse:
                    (self.r_in, self.r_a, self.r_b, self.r_c, self.xi1, self.xi2) = saved
                    if depth >= _MAX_HALVINGS:
                        raise
                    m = 0.5 * (a + b)
                    stack.append((m, b, depth + 1))
                    stack.append((a, m, depth + 1))
                    continue
                # guard against silent large jumps of any root as well
                jumped = any(
                    abs(new - old) > 0.5 * max(abs(new), abs(old), 1e-300)
                    for new, old in zip(
                        (self.r_in, self.r_a, self.r_b, self.r_c), saved[:4])
                )
                if jumped:
                    (self.r_in, self.r_a, self.r_b, self.r_c, self.xi1, self.xi2) = saved
                    if depth >= _MAX_HALVINGS:
                        raise StepTooCoarse("root moved too fast along the path")
                    m = 0.5 * (a + b)
                    stack.append((m, b, depth + 1))
                    stack.append((a, m, depth + 1))

    def loop_xi1(self, path: BranchPath) -> "FreeTermContinuation":
        """Continue along a loop in xi1, returning the continued copy."""
        out = self.copy()
        out._march(path, axis=1)
        return out

    def loop_xi2(self, path: BranchPath) -> "FreeTermContinuation":
        """Continue along a loop in xi2, returning the continued copy."""
        out = self.copy()
        out._march(path, axis=2)
        return out
