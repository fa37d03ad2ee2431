"""Construct vortex solutions by differentiating a carrier with respect to k.

A polynomial P(x, y, z) applied as P(-i d/dk) to a carrier wave function
exp(i k.r + ...) brings down one position factor per differentiation, so the
result is P times the carrier plus the quantum corrections that make it an
exact solution.  Here the k-derivatives are taken numerically with high-order
central finite differences; this gives an oracle for the closed-form families
that shares no algebra with them.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .catalog import CARRIER_FAMILIES, SolutionSpec, WaveVector, amplitude
from .constants import PhysicalConstants
from .errors import SpecValidationError
from .polynomials import PolynomialPrefactor

K_STEP_FACTOR = 1e-2


def fd_weights(offsets: np.ndarray, order: int) -> np.ndarray:
    """Finite-difference weights for the order-th derivative at 0.

    Solves the moment conditions sum_j w_j o_j^q = q! [q == order] for the
    given stencil offsets (in units of the step; divide by h**order on use).
    """
    offsets = np.asarray(offsets, dtype=float)
    n = offsets.size
    if order >= n:
        raise SpecValidationError("stencil too small for requested derivative")
    moments = np.vander(offsets, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(moments, rhs)


def _stencil(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric central stencil with at least 4th-order accuracy."""
    half = (order + 5) // 2
    offsets = np.arange(-half, half + 1, dtype=float)
    return offsets, fd_weights(offsets, order)


def generate_from_polynomial(
    carrier: SolutionSpec,
    poly: PolynomialPrefactor,
    consts: PhysicalConstants,
    r,
    t: float,
    k_step: float | None = None,
) -> np.ndarray:
    """Apply P(-i d/dk) to the carrier numerically and evaluate at (r, t)."""
    if not isinstance(carrier, CARRIER_FAMILIES):
        raise SpecValidationError(
            f"{type(carrier).__name__} is not a supported generating carrier"
        )
    r = np.asarray(r, dtype=float)
    if k_step is None:
        k_step = K_STEP_FACTOR / carrier.length_scale(consts)
    base_k = carrier.k.as_array()

    result = np.zeros(r.shape[:-1], dtype=complex)
    for mono in poly:
        exps = (mono.px, mono.py, mono.pz)
        axes = [a for a in range(3) if exps[a] > 0]
        stencils = {a: _stencil(exps[a]) for a in axes}
        term = np.zeros(r.shape[:-1], dtype=complex)
        for combo, weight in _tensor_weights(axes, stencils):
            k = base_k.copy()
            for a, offset in combo:
                k[a] += offset * k_step
            shifted = dataclasses.replace(carrier, k=WaveVector(*k))
            term += weight * amplitude(shifted, consts, r, t)
        total_order = sum(exps)
        result += mono.cx * (-1j) ** total_order * term / k_step**total_order
    return result


def _tensor_weights(axes, stencils):
    """Iterate the tensor product of per-axis stencils as (shifts, weight)."""
    if not axes:
        yield (), 1.0
        return
    first, rest = axes[0], axes[1:]
    offsets, weights = stencils[first]
    for combo, w in _tensor_weights(rest, stencils):
        for o, wj in zip(offsets, weights):
            yield ((first, o),) + combo, w * wj
