"""Carrier (generating) wave functions.

Every carrier in the catalog is the exponential of a quadratic form,

    C(r, t) = exp( sum_a m_a(t) x_a^2 + b(t).r + c(t) ),

with diagonal quadratic part.  Holding m, b, c as time-jets gives exact
analytic gradients, Laplacians and first/second time derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import PhysicalConstants
from .polynomials import Jet


@dataclass(frozen=True)
class Carrier:
    m_diag: tuple[Jet, Jet, Jet]
    b: tuple[Jet, Jet, Jet]
    c: Jet

    def _exponent(self, points: np.ndarray) -> np.ndarray:
        g = np.full(points.shape[:-1], self.c.f, dtype=complex)
        for a in range(3):
            xa = points[..., a]
            g += self.m_diag[a].f * xa * xa + self.b[a].f * xa
        return g

    def value(self, points: np.ndarray) -> np.ndarray:
        return np.exp(self._exponent(points))

    def gradient_factor(self, points: np.ndarray) -> np.ndarray:
        """grad C / C, shape (..., 3)."""
        out = np.empty(points.shape[:-1] + (3,), dtype=complex)
        for a in range(3):
            out[..., a] = 2.0 * self.m_diag[a].f * points[..., a] + self.b[a].f
        return out

    def laplacian_factor(self, points: np.ndarray) -> np.ndarray:
        """lap C / C."""
        grad = self.gradient_factor(points)
        trace = 2.0 * sum(m.f for m in self.m_diag)
        return trace + np.sum(grad * grad, axis=-1)

    def dt_factor(self, points: np.ndarray) -> np.ndarray:
        """(dC/dt) / C."""
        g = np.full(points.shape[:-1], self.c.df, dtype=complex)
        for a in range(3):
            xa = points[..., a]
            g += self.m_diag[a].df * xa * xa + self.b[a].df * xa
        return g

    def d2t_factor(self, points: np.ndarray) -> np.ndarray:
        """(d2C/dt2) / C."""
        gt = self.dt_factor(points)
        gtt = np.full(points.shape[:-1], self.c.d2f, dtype=complex)
        for a in range(3):
            xa = points[..., a]
            gtt += self.m_diag[a].d2f * xa * xa + self.b[a].d2f * xa
        return gtt + gt * gt


_ZERO = Jet.const(0.0)


def free_plane_wave(consts: PhysicalConstants, k: np.ndarray, t: float) -> Carrier:
    """exp(i k.r - i hbar k^2 t / 2m)."""
    k2 = float(k @ k)
    rate = -1j * consts.hbar * k2 / (2.0 * consts.mass)
    return Carrier(
        m_diag=(_ZERO, _ZERO, _ZERO),
        b=tuple(Jet.const(1j * ka) for ka in k),
        c=Jet(rate * t, rate, 0.0),
    )


def gaussian_packet(
    consts: PhysicalConstants, k: np.ndarray, width: float, t: float
) -> Carrier:
    """Spreading Gaussian envelope exp(-k^2 l^2/2) beta^{-3/2} exp(-(r - i k l^2)^2 / (2 l^2 beta))."""
    l2 = width * width
    beta = Jet(1.0 + 1j * consts.hbar * t / (consts.mass * l2),
               1j * consts.hbar / (consts.mass * l2), 0.0)
    inv_beta = beta.inv()
    k2 = float(k @ k)
    m_jet = (-0.5 / l2) * inv_beta
    b = tuple((1j * ka) * inv_beta for ka in k)
    c = (0.5 * k2 * l2) * inv_beta - 1.5 * beta.log() - Jet.const(0.5 * k2 * l2)
    return Carrier(m_diag=(m_jet, m_jet, m_jet), b=b, c=c)


def magnetic_generator(
    consts: PhysicalConstants, k: np.ndarray, field_strength: float, t: float
) -> Carrier:
    """Landau ground-state Gaussian times the uniform-field generating phase.

    The z phase -i hbar kz^2/(2 e B) is constant in (r, t), so it only
    shifts the overall phase of the solution.
    """
    eB = consts.charge * field_strength
    hbar = consts.hbar
    omega_c = eB / consts.mass
    E = Jet.exp_i(-1j * omega_c, t)
    kx, ky, kz = (float(ka) for ka in k)
    m_perp = Jet.const(-eB / (4.0 * hbar))
    b = (
        (0.5j * kx) * (E + 1.0) + (0.5 * ky) * (E - 1.0),
        (0.5j * ky) * (E + 1.0) - (0.5 * kx) * (E - 1.0),
        Jet.const(1j * kz),
    )
    c = (
        Jet(-0.5j * omega_c * t, -0.5j * omega_c, 0.0)
        + (hbar * (kx * kx + ky * ky) / (2.0 * eB)) * (E - 1.0)
        + Jet.const(-1j * hbar * kz * kz / (2.0 * eB))
    )
    return Carrier(m_diag=(m_perp, m_perp, _ZERO), b=b, c=c)


def trap_generator(
    consts: PhysicalConstants, k: np.ndarray, omega: float, t: float
) -> Carrier:
    """Harmonic-trap ground state times exp(i e^{-i w t}(k.r - hbar k^2 sin(w t)/(2 m w)))."""
    hbar, mass = consts.hbar, consts.mass
    F = Jet.exp_i(-1j * omega, t)
    sin_jet = Jet(np.sin(omega * t), omega * np.cos(omega * t),
                  -omega * omega * np.sin(omega * t))
    k2 = float(k @ k)
    m_jet = Jet.const(-mass * omega / (2.0 * hbar))
    b = tuple((1j * float(ka)) * F for ka in k)
    c = (
        Jet(-1.5j * omega * t, -1.5j * omega, 0.0)
        + (-1j * hbar * k2 / (2.0 * mass * omega)) * (F * sin_jet)
    )
    return Carrier(m_diag=(m_jet, m_jet, m_jet), b=b, c=c)


def rel_plane_wave(consts: PhysicalConstants, k: np.ndarray, t: float) -> Carrier:
    """exp(i k.r - i omega_k t) with the Klein-Gordon dispersion."""
    omega_k = rel_dispersion(consts, k)
    return Carrier(
        m_diag=(_ZERO, _ZERO, _ZERO),
        b=tuple(Jet.const(1j * float(ka)) for ka in k),
        c=Jet(-1j * omega_k * t, -1j * omega_k, 0.0),
    )


def rel_dispersion(consts: PhysicalConstants, k: np.ndarray) -> float:
    c = consts.light_speed
    mu = consts.mass * c / consts.hbar
    return c * float(np.sqrt(k @ k + mu * mu))
