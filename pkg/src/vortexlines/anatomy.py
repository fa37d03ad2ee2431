"""Local vortex geometry: flow velocity, circulation, winding, line velocity.

All operations accept either a catalog solution spec or a bare callable
`field(points) -> complex array` (for constructed test fields); only the
projective content of the wave function enters any result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalog import (
    SolutionSpec,
    amplitude,
    gradient,
    laplacian,
    time_derivative,
)
from .constants import PhysicalConstants
from .errors import (
    AmbiguousWindingError,
    DegenerateVortexError,
    NotOnLineError,
    SpecValidationError,
    VortexCoreError,
)

#: Hard cap on adaptive contour refinement (doublings of the sample count).
REFINEMENT_CAP = 6

#: |psi| below this fraction of the local gradient scale counts as "on a zero".
CORE_FLOOR = 1e-9


@dataclass(frozen=True)
class Contour:
    """A circle along which phase and velocity are integrated."""

    center: tuple[float, float, float]
    normal: tuple[float, float, float]
    radius: float
    samples: int = 64

    def __post_init__(self):
        if not (self.radius > 0):
            raise SpecValidationError("contour radius must be > 0")
        if self.samples < 16 or self.samples % 2:
            raise SpecValidationError("contour samples must be even and >= 16")
        n = np.asarray(self.normal, dtype=float)
        norm = np.linalg.norm(n)
        if not norm > 0:
            raise SpecValidationError("contour normal must be nonzero")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        object.__setattr__(self, "normal", tuple(n / norm))

    def points(self, samples: int | None = None) -> np.ndarray:
        """samples+1 positions around the circle; last point repeats the first.

        Traversal is right-handed about the normal.
        """
        n = np.asarray(self.normal)
        seed = np.array([1.0, 0.0, 0.0])
        if abs(n @ seed) > 0.9:
            seed = np.array([0.0, 1.0, 0.0])
        e1 = seed - (seed @ n) * n
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(n, e1)
        theta = np.linspace(0.0, 2.0 * math.pi, (samples or self.samples) + 1)
        circle = (
            np.asarray(self.center)
            + self.radius * np.outer(np.cos(theta), e1)
            + self.radius * np.outer(np.sin(theta), e2)
        )
        circle[-1] = circle[0]
        return circle


@dataclass(frozen=True)
class LocalVortexData:
    """Geometry of the flow in the plane normal to a vortex line point."""

    w: tuple[complex, complex, complex]
    tangent: tuple[float, float, float]
    chi: float
    winding_sign: int


def _field_of(spec_or_field, consts, t):
    if isinstance(spec_or_field, SolutionSpec):
        return lambda pts: amplitude(spec_or_field, consts, pts, t)
    if callable(spec_or_field):
        return spec_or_field
    raise SpecValidationError("expected a solution spec or a callable field")


def _default_potential(spec_or_field, consts, vector_potential):
    if vector_potential is not None:
        return vector_potential
    if isinstance(spec_or_field, SolutionSpec) and spec_or_field.equation == "magnetic":
        half_B = 0.5 * spec_or_field.B

        def symmetric_gauge(points):
            points = np.asarray(points, dtype=float)
            out = np.zeros(points.shape)
            out[..., 0] = -half_B * points[..., 1]
            out[..., 1] = half_B * points[..., 0]
            return out

        return symmetric_gauge
    return None


def flow_velocity(
    spec: SolutionSpec,
    consts: PhysicalConstants,
    r,
    t: float,
    vector_potential=None,
) -> np.ndarray:
    """Hydrodynamic velocity v = (hbar/m) Im(psi* grad psi)/|psi|^2 - (e/m) A."""
    r = np.asarray(r, dtype=float)
    psi = amplitude(spec, consts, r, t)
    grad = gradient(spec, consts, r, t)
    scale = np.linalg.norm(grad, axis=-1) * spec.length_scale(consts)
    density = np.abs(psi) ** 2
    if np.any(np.abs(psi) <= CORE_FLOOR * scale):
        raise VortexCoreError("flow velocity requested at a wave-function zero")
    v = (consts.hbar / consts.mass) * np.imag(np.conj(psi)[..., None] * grad)
    v /= density[..., None]
    vector_potential = _default_potential(spec, consts, vector_potential)
    if vector_potential is not None:
        v = v - (consts.charge / consts.mass) * np.asarray(vector_potential(r))
    return v


def _unwrapped_increments(field, contour: Contour) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-branch phase increments around the contour, adaptively refined."""
    samples = contour.samples
    for _ in range(REFINEMENT_CAP + 1):
        pts = contour.points(samples)
        vals = np.asarray(field(pts), dtype=complex)
        if np.any(vals == 0):
            raise AmbiguousWindingError("contour passes through a zero")
        inc = np.diff(np.angle(vals))
        inc = np.mod(inc + math.pi, 2.0 * math.pi) - math.pi
        if np.all(np.abs(inc) < 0.5 * math.pi):
            return inc, pts
        samples *= 2
    raise AmbiguousWindingError(
        f"phase increments still >= pi/2 after {REFINEMENT_CAP} refinements"
    )


def winding_number(spec_or_field, consts: PhysicalConstants, contour: Contour, t: float = 0.0) -> int:
    """Total phase change around the contour divided by 2*pi."""
    field = _field_of(spec_or_field, consts, t)
    inc, _ = _unwrapped_increments(field, contour)
    total = float(np.sum(inc))
    n = round(total / (2.0 * math.pi))
    if abs(total - 2.0 * math.pi * n) > 0.25 * math.pi:
        raise AmbiguousWindingError(f"unwrapped phase {total} is not near a multiple of 2*pi")
    return int(n)


def circulation(
    spec_or_field,
    consts: PhysicalConstants,
    contour: Contour,
    t: float = 0.0,
    vector_potential=None,
) -> float:
    """Line integral of the flow velocity around the contour.

    The gradient-of-phase part is accumulated exactly from unwrapped phase
    increments; the vector-potential part is a Richardson-extrapolated
    polygonal integral (the plain chord rule is only second order).
    """
    field = _field_of(spec_or_field, consts, t)
    inc, pts = _unwrapped_increments(field, contour)
    gamma = (consts.hbar / consts.mass) * float(np.sum(inc))
    vector_potential = _default_potential(spec_or_field, consts, vector_potential)
    if vector_potential is not None:
        gamma -= (consts.charge / consts.mass) * _extrapolated_line_integral(
            lambda p: np.asarray(vector_potential(p), dtype=float),
            contour,
            contour.samples,
        )
    return gamma


def _extrapolated_line_integral(vector_field, contour: Contour, samples: int) -> float:
    """Richardson-extrapolated polygonal line integral of a vector field."""

    def polygonal(n: int) -> float:
        pts = contour.points(n)
        vals = vector_field(pts)
        seg = np.diff(pts, axis=0)
        return float(np.sum(0.5 * (vals[:-1] + vals[1:]) * seg))

    coarse = polygonal(samples)
    extrapolated = None
    for _ in range(REFINEMENT_CAP):
        samples *= 2
        fine = polygonal(samples)
        new_extrapolated = (4.0 * fine - coarse) / 3.0
        if extrapolated is not None and abs(new_extrapolated - extrapolated) <= (
            1e-12 * max(abs(new_extrapolated), 1.0)
        ):
            return new_extrapolated
        extrapolated = new_extrapolated
        coarse = fine
    return extrapolated


def circulation_from_velocity(
    spec: SolutionSpec,
    consts: PhysicalConstants,
    contour: Contour,
    t: float = 0.0,
    vector_potential=None,
) -> float:
    """Trapezoid-rule line integral of flow_velocity around the contour.

    Independent route to the circulation: no phase unwrapping is involved,
    only pointwise velocities.  The polygonal chord geometry makes the plain
    rule second order in the sample count (even an ideal centered vortex has
    relative error (2*pi/N)^2/6), so the estimate is Richardson-extrapolated
    across doublings until two extrapolations agree.
    """
    return _extrapolated_line_integral(
        lambda pts: flow_velocity(
            spec, consts, pts, t, vector_potential=vector_potential
        ),
        contour,
        contour.samples,
    )


def linearized_field(w, center):
    """The first-order model psi(r) = w . (r - center) of a vortex zero."""
    w = np.asarray(w, dtype=complex)
    center = np.asarray(center, dtype=float)
    return lambda pts: (np.asarray(pts, dtype=float) - center) @ w


def _on_line_scale(spec, consts, grad):
    return float(np.linalg.norm(grad)) * spec.length_scale(consts)


def w_vector(
    spec: SolutionSpec, consts: PhysicalConstants, point_on_line, t: float
) -> LocalVortexData:
    """Amplitude gradient and derived local geometry at a certified line point."""
    point = np.asarray(point_on_line, dtype=float)
    psi = complex(amplitude(spec, consts, point, t))
    w = np.asarray(gradient(spec, consts, point, t), dtype=complex)
    scale = _on_line_scale(spec, consts, w)
    if abs(psi) > CORE_FLOOR * scale:
        raise NotOnLineError(
            f"|psi| = {abs(psi):.3e} exceeds the on-line tolerance {CORE_FLOOR * scale:.3e}"
        )
    re_w, im_w = np.real(w), np.imag(w)
    vorticity = np.cross(re_w, im_w)  # = i (w x w*) / 2
    norm = np.linalg.norm(vorticity)
    if norm <= 1e-12 * max(np.linalg.norm(w) ** 2, 1e-300):
        raise DegenerateVortexError("Re w and Im w are parallel: node sheet, not a vortex")
    tangent = vorticity / norm
    # Singular values of [Re w, Im w]; both columns lie in the normal plane.
    sing = np.linalg.svd(np.stack([re_w, im_w], axis=1), compute_uv=False)
    chi = math.atan2(sing[1], sing[0])
    winding_sign = 1 if np.dot(np.cross(re_w, im_w), tangent) > 0 else -1
    return LocalVortexData(
        w=tuple(w), tangent=tuple(tangent), chi=chi, winding_sign=winding_sign
    )


def _solve_line_velocity(w: np.ndarray, tangent: np.ndarray, dpsi_dt: complex) -> np.ndarray:
    """The unique u with u.w = -dpsi/dt and u.tangent = 0."""
    matrix = np.stack([np.real(w), np.imag(w), tangent])
    rhs = np.array([-dpsi_dt.real, -dpsi_dt.imag, 0.0])
    return np.linalg.solve(matrix, rhs)


def line_velocity(
    spec: SolutionSpec, consts: PhysicalConstants, point_on_line, t: float
) -> np.ndarray:
    """Velocity of the vortex line itself, from u . w + dpsi/dt = 0.

    The returned representative is orthogonal to the local tangent.
    """
    data = w_vector(spec, consts, point_on_line, t)
    dpsi_dt = complex(time_derivative(spec, consts, np.asarray(point_on_line, float), t))
    return _solve_line_velocity(
        np.asarray(data.w), np.asarray(data.tangent), dpsi_dt
    )


def line_velocity_from_laplacian(
    spec: SolutionSpec, consts: PhysicalConstants, point_on_line, t: float
) -> np.ndarray:
    """Cross-check of line_velocity with dpsi/dt eliminated via the equation
    of motion on the line (where psi = 0, so potential terms drop out)."""
    if spec.equation == "relativistic":
        raise SpecValidationError(
            "Laplacian form of the line velocity applies to first-order-in-time equations"
        )
    point = np.asarray(point_on_line, dtype=float)
    data = w_vector(spec, consts, point, t)
    lap = complex(laplacian(spec, consts, point, t))
    dpsi_dt = 1j * consts.hbar / (2.0 * consts.mass) * lap
    if spec.equation == "magnetic":
        w = np.asarray(data.w)
        eB = consts.charge * spec.B
        angular = point[0] * w[1] - point[1] * w[0]
        dpsi_dt += -(eB / (2.0 * consts.mass)) * angular
    return _solve_line_velocity(np.asarray(data.w), np.asarray(data.tangent), dpsi_dt)
