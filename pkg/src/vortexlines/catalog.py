"""The catalog of exact vortex-carrying wave functions.

Each solution is a tagged spec (one dataclass per family) evaluating to
prefactor(r, t) * carrier(r, t).  Amplitude, gradient, Laplacian and time
derivatives are analytic; `pde_residual` certifies each family against its
governing equation using those analytic derivatives only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .carriers import (
    Carrier,
    free_plane_wave,
    gaussian_packet,
    magnetic_generator,
    rel_dispersion,
    rel_plane_wave,
    trap_generator,
)
from .constants import PhysicalConstants
from .errors import NoPrefactorError, SpecValidationError
from .polynomials import Jet, JetPoly, Monomial, PolynomialPrefactor


@dataclass(frozen=True)
class WaveVector:
    kx: float = 0.0
    ky: float = 0.0
    kz: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.kx, self.ky, self.kz)):
            raise SpecValidationError("wave vector components must be finite")

    @staticmethod
    def of(value) -> "WaveVector":
        if isinstance(value, WaveVector):
            return value
        kx, ky, kz = value
        return WaveVector(float(kx), float(ky), float(kz))

    def as_array(self) -> np.ndarray:
        return np.array([self.kx, self.ky, self.kz], dtype=float)

    @property
    def norm(self) -> float:
        return math.hypot(self.kx, self.ky, self.kz)


ZERO_K = WaveVector()


def _require(condition: bool, message: str):
    if not condition:
        raise SpecValidationError(message)


def _free_velocity(consts: PhysicalConstants, k: WaveVector) -> np.ndarray:
    return consts.hbar * k.as_array() / consts.mass


def _rel_velocity(consts: PhysicalConstants, k: WaveVector) -> np.ndarray:
    karr = k.as_array()
    omega = rel_dispersion(consts, karr)
    return consts.light_speed**2 * karr / omega


def _shifted(velocity: np.ndarray, t: float) -> list[JetPoly]:
    """x_a(t) = x_a - v_a t as jet polynomials."""
    coords = []
    for a in range(3):
        va = float(velocity[a])
        coords.append(
            JetPoly.coordinate(a) + JetPoly.constant(Jet(-va * t, -va, 0.0))
        )
    return coords


class SolutionSpec:
    """Base class for the tagged union of analytic families."""

    equation = "free"  # one of free / trap / magnetic / relativistic
    is_bare = False    # bare carriers have no vortex prefactor

    def carrier(self, consts: PhysicalConstants, t: float) -> Carrier:
        raise NotImplementedError

    def prefactor_jets(self, consts: PhysicalConstants, t: float) -> JetPoly | None:
        return None

    def classical_velocity(self, consts: PhysicalConstants) -> np.ndarray:
        return np.zeros(3)

    def length_scale(self, consts: PhysicalConstants) -> float:
        return 1.0


def _k_length(k: WaveVector) -> float:
    return 1.0 / k.norm if k.norm > 0 else 1.0


@dataclass(frozen=True)
class FreePlaneWave(SolutionSpec):
    k: WaveVector = ZERO_K
    is_bare = True

    def __post_init__(self):
        object.__setattr__(self, "k", WaveVector.of(self.k))

    def carrier(self, consts, t):
        return free_plane_wave(consts, self.k.as_array(), t)

    def classical_velocity(self, consts):
        return _free_velocity(consts, self.k)

    def length_scale(self, consts):
        return _k_length(self.k)


@dataclass(frozen=True)
class FreeLineVortex(SolutionSpec):
    chi: float = math.pi / 4
    k: WaveVector = ZERO_K

    def __post_init__(self):
        object.__setattr__(self, "k", WaveVector.of(self.k))
        _require(math.isfinite(self.chi), "chi must be finite")

    def carrier(self, consts, t):
        return free_plane_wave(consts, self.k.as_array(), t)

    def prefactor_jets(self, consts, t):
        x, y, _ = _shifted(self.classical_velocity(consts), t)
        return math.cos(self.chi) * x + (1j * math.sin(self.chi)) * y

    def classical_velocity(self, consts):
        return _free_velocity(consts, self.k)

    def length_scale(self, consts):
        return _k_length(self.k)


@dataclass(frozen=True)
class FreeRingCylinder(SolutionSpec):
    R: float
    a: float
    k: WaveVector = ZERO_K

    def __post_init__(self):
        object.__setattr__(self, "k", WaveVector.of(self.k))
        _require(self.R > 0, "R must be > 0")
        _require(self.a != 0, "a must be nonzero")

    def carrier(self, consts, t):
        return free_plane_wave(consts, self.k.as_array(), t)

    def prefactor_jets(self, consts, t):
        x, y, z = _shifted(self.classical_velocity(consts), t)
        quantum = Jet(2j * consts.hbar * t / consts.mass, 2j * consts.hbar / consts.mass, 0.0)
        return x * x + y * y - self.R**2 + (1j * self.a) * z + JetPoly.constant(quantum)

    def classical_velocity(self, consts):
        return _free_velocity(consts, self.k)

    def length_scale(self, consts):
        return self.R


@dataclass(frozen=True)
class FreeRingSphere(SolutionSpec):
    R: float
    a: float
    k: WaveVector = ZERO_K

    def __post_init__(self):
        object.__setattr__(self, "k", WaveVector.of(self.k))
        _require(self.R > 0, "R must be > 0")
        _require(self.a != 0, "a must be nonzero")

    def carrier(self, consts, t):
        return free_plane_wave(consts, self.k.as_array(), t)

    def prefactor_jets(self, consts, t):
        x, y, z = _shifted(self.classical_velocity(consts), t)
        quantum = Jet(3j * consts.hbar * t / consts.mass, 3j * consts.hbar / consts.mass, 0.0)
        return (
            x * x + y * y + z * z - self.R**2
            + (1j * self.a) * z
            + JetPoly.constant(quantum)
        )

    def classical_velocity(self, consts):
        return _free_velocity(consts, self.k)

    def length_scale(self, consts):
        return self.R

    def annihilation_time(self, consts) -> float:
        """The ring contracts to a point at +t_a and was born at -t_a."""
        return consts.mass * abs(self.a) * self.R / (3.0 * consts.hbar)


def _complex_vec(value) -> tuple[complex, complex, complex]:
    vx, vy, vz = value
    return (complex(vx), complex(vy), complex(vz))


def _real_vec(value) -> tuple[float, float, float]:
    vx, vy, vz = value
    return (float(vx), float(vy), float(vz))


def _is_degenerate_w(w) -> bool:
    w = np.asarray(w, dtype=complex)
    cross = np.cross(w, np.conj(w))
    return np.linalg.norm(cross) <= 1e-12 * max(np.linalg.norm(w) ** 2, 1e-300)


@dataclass(frozen=True)
class FreeTwoLines(SolutionSpec):
    w1: tuple[complex, complex, complex]
    r1: tuple[float, float, float]
    w2: tuple[complex, complex, complex]
    r2: tuple[float, float, float]
    k: WaveVector = ZERO_K

    def __post_init__(self):
        object.__setattr__(self, "k", WaveVector.of(self.k))
        object.__setattr__(self, "w1", _complex_vec(self.w1))
        object.__setattr__(self, "w2", _complex_vec(self.w2))
        object.__setattr__(self, "r1", _real_vec(self.r1))
        object.__setattr__(self, "r2", _real_vec(self.r2))
        for name in ("w1", "w2"):
            _require(
                not _is_degenerate_w(getattr(self, name)),
                f"{name} x conj({name}) vanishes: degenerate node sheet",
            )

    def carrier(self, consts, t):
        return free_plane_wave(consts, self.k.as_array(), t)

    def prefactor_jets(self, consts, t):
        coords = _shifted(self.classical_velocity(consts), t)
        lin1 = sum(
            (self.w1[a] * coords[a] for a in range(3)),
            JetPoly.constant(-np.dot(self.w1, self.r1)),
        )
        lin2 = sum(
            (self.w2[a] * coords[a] for a in range(3)),
            JetPoly.constant(-np.dot(self.w2, self.r2)),
        )
        dot12 = complex(np.dot(self.w1, self.w2))
        quantum = Jet(1j * consts.hbar * t / consts.mass * dot12,
                      1j * consts.hbar / consts.mass * dot12, 0.0)
        return lin1 * lin2 + JetPoly.constant(quantum)

    def classical_velocity(self, consts):
        return _free_velocity(consts, self.k)

    def length_scale(self, consts):
        sep = np.linalg.norm(np.subtract(self.r1, self.r2))
        return sep if sep > 0 else 1.0


@dataclass(frozen=True)
class FreeTwoLinesSymmetric(SolutionSpec):
    a: float
    varphi: float
    k: WaveVector = ZERO_K

    def __post_init__(self):
        object.__setattr__(self, "k", WaveVector.of(self.k))
        _require(self.a != 0, "a must be nonzero")
        _require(math.isfinite(self.varphi), "varphi must be finite")

    def carrier(self, consts, t):
        return free_plane_wave(consts, self.k.as_array(), t)

    def prefactor_jets(self, consts, t):
        x, y, z = _shifted(self.classical_velocity(consts), t)
        c, s = math.cos(self.varphi), math.sin(self.varphi)
        w_upper = c * x + s * y + 1j * (z + JetPoly.constant(self.a))
        w_lower = c * x - s * y + 1j * (z - JetPoly.constant(self.a))
        rate = -2j * consts.hbar * s * s / consts.mass
        return w_upper * w_lower + JetPoly.constant(Jet(rate * t, rate, 0.0))

    def classical_velocity(self, consts):
        return _free_velocity(consts, self.k)

    def length_scale(self, consts):
        return abs(self.a)

    def annihilation_time(self, consts) -> float:
        """For the antiparallel pair (varphi = pi/2) the lines collide at +t_a."""
        return consts.mass * self.a**2 / consts.hbar


@dataclass(frozen=True)
class GaussianPacket(SolutionSpec):
    l: float
    k: WaveVector = ZERO_K
    is_bare = True

    def __post_init__(self):
        object.__setattr__(self, "k", WaveVector.of(self.k))
        _require(self.l > 0, "l must be > 0")

    def carrier(self, consts, t):
        return gaussian_packet(consts, self.k.as_array(), self.l, t)

    def classical_velocity(self, consts):
        return _free_velocity(consts, self.k)

    def length_scale(self, consts):
        return self.l


def _beta_jet(consts: PhysicalConstants, width: float, t: float) -> Jet:
    rate = 1j * consts.hbar / (consts.mass * width * width)
    return Jet(1.0 + rate * t, rate, 0.0)


@dataclass(frozen=True)
class GaussianLineVortex(SolutionSpec):
    l: float
    x0: float
    k: WaveVector = ZERO_K

    def __post_init__(self):
        object.__setattr__(self, "k", WaveVector.of(self.k))
        _require(self.l > 0, "l must be > 0")
        _require(math.isfinite(self.x0), "x0 must be finite")

    def carrier(self, consts, t):
        return gaussian_packet(consts, self.k.as_array(), self.l, t)

    def prefactor_jets(self, consts, t):
        x, y, _ = _shifted(self.classical_velocity(consts), t)
        drift = consts.hbar * self.x0 / (consts.mass * self.l**2)
        linear = (
            x - JetPoly.constant(self.x0)
            + 1j * (y - JetPoly.constant(Jet(drift * t, drift, 0.0)))
        )
        return linear * _beta_jet(consts, self.l, t).inv()

    def classical_velocity(self, consts):
        return _free_velocity(consts, self.k)

    def length_scale(self, consts):
        return self.l


@dataclass(frozen=True)
class MagneticGenerator(SolutionSpec):
    B: float
    k: WaveVector = ZERO_K
    equation = "magnetic"
    is_bare = True

    def __post_init__(self):
        object.__setattr__(self, "k", WaveVector.of(self.k))
        _require(self.B != 0, "B must be nonzero")

    def carrier(self, consts, t):
        return magnetic_generator(consts, self.k.as_array(), self.B, t)

    def length_scale(self, consts):
        return math.sqrt(2.0 * consts.hbar / abs(consts.charge * self.B))


@dataclass(frozen=True)
class MagneticLine(SolutionSpec):
    B: float
    a: float
    varphi: float
    equation = "magnetic"

    def __post_init__(self):
        _require(self.B != 0, "B must be nonzero")
        _require(self.a != 0, "a must be nonzero")
        _require(abs(math.cos(self.varphi)) > 1e-12, "varphi too close to pi/2")

    def carrier(self, consts, t):
        return magnetic_generator(consts, np.zeros(3), self.B, t)

    def prefactor_jets(self, consts, t):
        omega_c = consts.cyclotron_frequency(self.B)
        E = Jet.exp_i(-1j * omega_c, t)
        half = Jet.const(0.5)
        x_img = JetPoly.linear(half * (E + 1.0), (0.5j) * (E - 1.0), 0.0)
        y_img = JetPoly.linear((-0.5j) * (E - 1.0), half * (E + 1.0), 0.0)
        s, c = math.sin(self.varphi), math.cos(self.varphi)
        return (
            y_img - JetPoly.constant(self.a)
            + 1j * ((-s) * x_img + c * JetPoly.coordinate(2))
        )

    def length_scale(self, consts):
        return abs(self.a)

    def parametric_locus(self, consts, t: float, x: np.ndarray) -> np.ndarray:
        """Points (x, y(x), z(x)) on the precessing straight vortex line.

        Derived directly from the zero set of the generating-function
        solution; every returned point satisfies psi = 0 exactly.
        """
        x = np.asarray(x, dtype=float)
        theta = consts.cyclotron_frequency(self.B) * t
        s = math.sin(self.varphi)
        cth, sth = math.cos(theta), math.sin(theta)
        denom = (1.0 - s) + (1.0 + s) * cth
        y = (2.0 * self.a + x * sth * (1.0 + s)) / denom
        z = (2.0 * s * x + self.a * sth * (1.0 + s)) / (math.cos(self.varphi) * denom)
        return np.stack([x, y, z], axis=-1)


@dataclass(frozen=True)
class TrapGenerator(SolutionSpec):
    omega: float
    k: WaveVector = ZERO_K
    equation = "trap"
    is_bare = True

    def __post_init__(self):
        object.__setattr__(self, "k", WaveVector.of(self.k))
        _require(self.omega > 0, "omega must be > 0")

    def carrier(self, consts, t):
        return trap_generator(consts, self.k.as_array(), self.omega, t)

    def length_scale(self, consts):
        return math.sqrt(consts.hbar / (consts.mass * self.omega))


@dataclass(frozen=True)
class TrapRing(SolutionSpec):
    omega: float
    R: float
    equation = "trap"

    def __post_init__(self):
        _require(self.omega > 0, "omega must be > 0")
        _require(self.R > 0, "R must be > 0")

    def carrier(self, consts, t):
        return trap_generator(consts, np.zeros(3), self.omega, t)

    def prefactor_jets(self, consts, t):
        osc_len2 = consts.hbar / (consts.mass * self.omega)
        E = Jet.exp_i(-1j * self.omega, t)
        E2 = E * E
        x, y, z = (JetPoly.coordinate(a) for a in range(3))
        return (
            E2 * (x * x + y * y - JetPoly.constant(osc_len2))
            + JetPoly.constant(osc_len2)
            - E * (2.0 * self.R) * x
            + (1j * self.R) * E * z
        )

    def length_scale(self, consts):
        return self.R


@dataclass(frozen=True)
class RelPlaneWave(SolutionSpec):
    k: WaveVector = ZERO_K
    equation = "relativistic"
    is_bare = True

    def __post_init__(self):
        object.__setattr__(self, "k", WaveVector.of(self.k))

    def carrier(self, consts, t):
        return rel_plane_wave(consts, self.k.as_array(), t)

    def classical_velocity(self, consts):
        return _rel_velocity(consts, self.k)

    def length_scale(self, consts):
        return _k_length(self.k)


@dataclass(frozen=True)
class RelLineVortex(SolutionSpec):
    chi: float = math.pi / 4
    k: WaveVector = ZERO_K
    equation = "relativistic"

    def __post_init__(self):
        object.__setattr__(self, "k", WaveVector.of(self.k))
        _require(math.isfinite(self.chi), "chi must be finite")

    def carrier(self, consts, t):
        return rel_plane_wave(consts, self.k.as_array(), t)

    def prefactor_jets(self, consts, t):
        x, y, _ = _shifted(self.classical_velocity(consts), t)
        return math.cos(self.chi) * x + (1j * math.sin(self.chi)) * y

    def classical_velocity(self, consts):
        return _rel_velocity(consts, self.k)

    def length_scale(self, consts):
        return _k_length(self.k)


@dataclass(frozen=True)
class RelRingCylinder(SolutionSpec):
    R: float
    a: float
    k: WaveVector = ZERO_K
    equation = "relativistic"

    def __post_init__(self):
        object.__setattr__(self, "k", WaveVector.of(self.k))
        _require(self.R > 0, "R must be > 0")
        _require(self.a != 0, "a must be nonzero")

    def carrier(self, consts, t):
        return rel_plane_wave(consts, self.k.as_array(), t)

    def axial_drift_speed(self, consts) -> float:
        """Quantum axial speed of the node ring (can exceed light_speed)."""
        karr = self.k.as_array()
        omega = rel_dispersion(consts, karr)
        c2 = consts.light_speed**2
        perp = c2 * (self.k.kx**2 + self.k.ky**2) / omega**2
        return (c2 / omega) * (2.0 - perp) / abs(self.a)

    def prefactor_jets(self, consts, t):
        # Exact image of x^2 + y^2 - R^2 + i a z under the relativistic
        # generating function; its k=0 limit agrees with the cylinder ring.
        x, y, z = _shifted(self.classical_velocity(consts), t)
        rate = 1j * abs(self.a) * self.axial_drift_speed(consts)
        return (
            x * x + y * y - self.R**2
            + (1j * self.a) * z
            + JetPoly.constant(Jet(rate * t, rate, 0.0))
        )

    def classical_velocity(self, consts):
        return _rel_velocity(consts, self.k)

    def length_scale(self, consts):
        return self.R


@dataclass(frozen=True)
class WindowedRingCylinder(SolutionSpec):
    """Cylinder-plane vortex ring riding on a normalizable Gaussian envelope.

    This is the square-integrable variant used for split-step validation:
    at t = 0 it equals the plane-wave cylinder ring times exp(-r^2/2l^2).
    """

    R: float
    a: float
    l: float
    k: WaveVector = ZERO_K

    def __post_init__(self):
        object.__setattr__(self, "k", WaveVector.of(self.k))
        _require(self.R > 0, "R must be > 0")
        _require(self.a != 0, "a must be nonzero")
        _require(self.l > 0, "l must be > 0")

    def carrier(self, consts, t):
        return gaussian_packet(consts, self.k.as_array(), self.l, t)

    def prefactor_jets(self, consts, t):
        inv_beta = _beta_jet(consts, self.l, t).inv()
        x, y, z = (
            coord * inv_beta
            for coord in _shifted(self.classical_velocity(consts), t)
        )
        quantum = Jet(2j * consts.hbar * t / consts.mass,
                      2j * consts.hbar / consts.mass, 0.0) * inv_beta
        return x * x + y * y - self.R**2 + (1j * self.a) * z + JetPoly.constant(quantum)

    def classical_velocity(self, consts):
        return _free_velocity(consts, self.k)

    def length_scale(self, consts):
        return self.R


@dataclass(frozen=True)
class WindowedTwoLinesSymmetric(SolutionSpec):
    """Symmetric vortex pair riding on a normalizable Gaussian envelope."""

    a: float
    varphi: float
    l: float
    k: WaveVector = ZERO_K

    def __post_init__(self):
        object.__setattr__(self, "k", WaveVector.of(self.k))
        _require(self.a != 0, "a must be nonzero")
        _require(self.l > 0, "l must be > 0")

    def carrier(self, consts, t):
        return gaussian_packet(consts, self.k.as_array(), self.l, t)

    def prefactor_jets(self, consts, t):
        inv_beta = _beta_jet(consts, self.l, t).inv()
        x, y, z = (
            coord * inv_beta
            for coord in _shifted(self.classical_velocity(consts), t)
        )
        c, s = math.cos(self.varphi), math.sin(self.varphi)
        w_upper = c * x + s * y + 1j * (z + JetPoly.constant(self.a))
        w_lower = c * x - s * y + 1j * (z - JetPoly.constant(self.a))
        rate = -2j * consts.hbar * s * s / consts.mass
        return w_upper * w_lower + JetPoly.constant(Jet(rate * t, rate, 0.0) * inv_beta)

    def classical_velocity(self, consts):
        return _free_velocity(consts, self.k)

    def length_scale(self, consts):
        return abs(self.a)


FAMILIES = (
    FreePlaneWave,
    FreeLineVortex,
    FreeRingCylinder,
    FreeRingSphere,
    FreeTwoLines,
    FreeTwoLinesSymmetric,
    GaussianPacket,
    GaussianLineVortex,
    MagneticGenerator,
    MagneticLine,
    TrapGenerator,
    TrapRing,
    RelPlaneWave,
    RelLineVortex,
    RelRingCylinder,
    WindowedRingCylinder,
    WindowedTwoLinesSymmetric,
)

FAMILY_BY_NAME = {cls.__name__: cls for cls in FAMILIES}

CARRIER_FAMILIES = (
    FreePlaneWave,
    GaussianPacket,
    MagneticGenerator,
    TrapGenerator,
    RelPlaneWave,
)


def _check_inputs(r: np.ndarray, t: float) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if r.shape[-1] != 3:
        raise SpecValidationError(f"positions must have trailing length 3, got {r.shape}")
    if not np.all(np.isfinite(r)) or not math.isfinite(t):
        raise SpecValidationError("non-finite position or time")
    return r


def amplitude(spec: SolutionSpec, consts: PhysicalConstants, r, t: float) -> np.ndarray:
    """Evaluate psi(r, t); r has shape (..., 3)."""
    r = _check_inputs(r, t)
    carrier = spec.carrier(consts, t)
    value = carrier.value(r)
    pre = spec.prefactor_jets(consts, t)
    if pre is not None:
        value = pre.order(0).evaluate(r) * value
    return value


def gradient(spec: SolutionSpec, consts: PhysicalConstants, r, t: float) -> np.ndarray:
    """Analytic grad psi, shape (..., 3)."""
    r = _check_inputs(r, t)
    carrier = spec.carrier(consts, t)
    cval = carrier.value(r)
    gfac = carrier.gradient_factor(r)
    pre = spec.prefactor_jets(consts, t)
    if pre is None:
        return gfac * cval[..., None]
    p0 = pre.order(0)
    pval = p0.evaluate(r)
    out = np.empty(r.shape[:-1] + (3,), dtype=complex)
    for a in range(3):
        out[..., a] = (p0.diff(a).evaluate(r) + pval * gfac[..., a]) * cval
    return out


def laplacian(spec: SolutionSpec, consts: PhysicalConstants, r, t: float) -> np.ndarray:
    r = _check_inputs(r, t)
    carrier = spec.carrier(consts, t)
    cval = carrier.value(r)
    lfac = carrier.laplacian_factor(r)
    pre = spec.prefactor_jets(consts, t)
    if pre is None:
        return lfac * cval
    p0 = pre.order(0)
    gfac = carrier.gradient_factor(r)
    cross = sum(p0.diff(a).evaluate(r) * gfac[..., a] for a in range(3))
    return (p0.laplacian().evaluate(r) + 2.0 * cross + p0.evaluate(r) * lfac) * cval


def time_derivative(spec: SolutionSpec, consts: PhysicalConstants, r, t: float) -> np.ndarray:
    r = _check_inputs(r, t)
    carrier = spec.carrier(consts, t)
    cval = carrier.value(r)
    dfac = carrier.dt_factor(r)
    pre = spec.prefactor_jets(consts, t)
    if pre is None:
        return dfac * cval
    return (pre.order(1).evaluate(r) + pre.order(0).evaluate(r) * dfac) * cval


def second_time_derivative(
    spec: SolutionSpec, consts: PhysicalConstants, r, t: float
) -> np.ndarray:
    r = _check_inputs(r, t)
    carrier = spec.carrier(consts, t)
    cval = carrier.value(r)
    dfac = carrier.dt_factor(r)
    d2fac = carrier.d2t_factor(r)
    pre = spec.prefactor_jets(consts, t)
    if pre is None:
        return d2fac * cval
    return (
        pre.order(2).evaluate(r)
        + 2.0 * pre.order(1).evaluate(r) * dfac
        + pre.order(0).evaluate(r) * d2fac
    ) * cval


def prefactor(spec: SolutionSpec, consts: PhysicalConstants, t: float) -> PolynomialPrefactor:
    """The complex polynomial multiplying the carrier at time t."""
    if not math.isfinite(t):
        raise SpecValidationError("non-finite time")
    jets = spec.prefactor_jets(consts, t)
    if jets is None:
        raise NoPrefactorError(
            f"{type(spec).__name__} is a bare carrier and has no vortex prefactor"
        )
    poly = jets.order(0)
    return PolynomialPrefactor(
        [Monomial(c, *exps) for exps, c in poly.coeffs.items()]
    )


def _trap_potential(spec, consts, r):
    r2 = np.sum(r * r, axis=-1)
    return 0.5 * consts.mass * spec.omega**2 * r2


def pde_residual(spec: SolutionSpec, consts: PhysicalConstants, r, t: float) -> np.ndarray:
    """Normalized residual of the governing equation, from analytic derivatives."""
    r = _check_inputs(r, t)
    hbar, mass = consts.hbar, consts.mass
    if spec.equation == "relativistic":
        c2 = consts.light_speed**2
        terms = [
            second_time_derivative(spec, consts, r, t) / c2,
            -laplacian(spec, consts, r, t),
            (mass * consts.light_speed / hbar) ** 2 * amplitude(spec, consts, r, t),
        ]
    else:
        terms = [
            1j * hbar * time_derivative(spec, consts, r, t),
            hbar**2 / (2.0 * mass) * laplacian(spec, consts, r, t),
        ]
        if spec.equation == "trap":
            terms.append(-_trap_potential(spec, consts, r) * amplitude(spec, consts, r, t))
        elif spec.equation == "magnetic":
            grad = gradient(spec, consts, r, t)
            eB = consts.charge * spec.B
            angular = r[..., 0] * grad[..., 1] - r[..., 1] * grad[..., 0]
            # The generating function satisfies the symmetric-gauge equation
            # with angular coefficient -i*hbar*e*B/(2m).
            terms.append((1j * hbar * eB / (2.0 * mass)) * angular)
            psi = amplitude(spec, consts, r, t)
            terms.append(
                -(eB**2 / (8.0 * mass)) * (r[..., 0] ** 2 + r[..., 1] ** 2) * psi
            )
    total = sum(terms)
    scale = np.maximum.reduce([np.abs(term) for term in terms])
    residual = np.zeros_like(scale)
    mask = scale > 0
    residual[mask] = np.abs(total[mask]) / scale[mask]
    return residual
