"""Exception taxonomy for the quarter-plane diffraction engine.

Every guard rail in the engine raises one of these instead of returning
garbage: geometry degeneracies, proximity to spectral singularities,
quadrature non-convergence, and observation points where a closed form
genuinely blows up. The CLI maps them to exit codes (config errors -> 2,
verification failure -> 3, non-convergence -> 4).
"""

from __future__ import annotations

__all__ = [
    "EngineError",
    "ConfigError",
    "GrazingIncidence",
    "UnsupportedCase",
    "SimpleCaseRequest",
    "BranchPointHit",
    "PoleHit",
    "OnCircle",
    "OutsideCircle",
    "PenumbralDirection",
    "StepTooCoarse",
    "NonConvergent",
    "DegenerateHessian",
    "CaseBoundary",
    "DivergentAtPlate",
    "StencilCrossesDiscontinuity",
]


class EngineError(Exception):
    """Base class for all engine-specific errors."""


class ConfigError(EngineError):
    """Malformed run configuration (bad key, missing field, bad value)."""


class GrazingIncidence(EngineError):
    """Incidence direction too close to a coordinate plane of the spectral
    wavenumbers (|Re k1| or |Re k2| below the grazing guard), where the
    case classification and several closed forms degenerate."""


class UnsupportedCase(EngineError):
    """Operation requested for an incidence case it does not support
    (e.g. component evaluation in the mixed-sign intermediate cases)."""


class SimpleCaseRequest(EngineError):
    """A secondary-diffraction quantity was requested for an incidence in
    which no secondary diffraction exists."""


class BranchPointHit(EngineError):
    """Spectral point within the guard distance of a square-root branch
    point of the integrand."""


class PoleHit(EngineError):
    """Spectral point within the guard distance of a polar set of the
    integrand."""


class OnCircle(EngineError):
    """Spectral point within the guard distance of the propagation circle
    xi1^2 + xi2^2 = k^2 (the kernel's branch set)."""


class OutsideCircle(EngineError):
    """Stationary-phase data requested at a spectral point outside the
    propagation circle, where the vertical wavenumber is not real."""


class PenumbralDirection(EngineError):
    """Observation direction so close to a shadow/activity boundary that
    the requested classification is ill-conditioned."""


class StepTooCoarse(EngineError):
    """Analytic continuation along a path could not select a branch
    unambiguously even at the maximum subdivision depth."""


class NonConvergent(EngineError):
    """Adaptive quadrature failed to reach its tolerance within the
    evaluation budget."""


class DegenerateHessian(EngineError):
    """Stationary-point Hessian is (numerically) singular; the quadratic
    local model is invalid."""


class CaseBoundary(EngineError):
    """Angular parameters of the triple-crossing integral too close to a
    boundary between its qualitative cases (contour marks collide)."""


class DivergentAtPlate(EngineError):
    """Closed-form component evaluated where its own formula diverges
    (edge of the plate / edge of an activity cone on the plane x3=0)."""


class StencilCrossesDiscontinuity(EngineError):
    """A finite-difference stencil straddles an activity boundary, so the
    residual would measure the jump, not the PDE defect."""
