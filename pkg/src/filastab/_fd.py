"""Finite-difference stencils on uniform grids.

Closed curves store their first sample again as the last one; periodic
differences act on the unique nodes and copy the wrap value back.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def fd_weights(offsets: tuple[int, ...], deriv: int) -> np.ndarray:
    """Weights ``w`` with ``sum(w[j] * f(x + offsets[j] h)) ~ h**deriv f^(deriv)(x)``."""
    offs = np.asarray(offsets, dtype=float)
    m = len(offs)
    if m <= deriv:
        raise ValueError("stencil too small for derivative order")
    vander = np.vander(offs, m, increasing=True).T
    rhs = np.zeros(m)
    rhs[deriv] = float(np.prod(np.arange(1, deriv + 1)))
    return np.linalg.solve(vander, rhs)


def derivative(
    values: np.ndarray,
    h: float,
    deriv: int = 1,
    accuracy: int = 2,
    periodic: bool = False,
) -> np.ndarray:
    """Differentiate ``values`` (shape ``(N, ...)``) along axis 0.

    Interior nodes use centered stencils; open ends use one-sided stencils of
    the same formal accuracy, shrunk if the grid is too short.
    """
    f = np.asarray(values, dtype=float)
    n = f.shape[0]
    half = (deriv + accuracy - 1) // 2
    if periodic:
        core = f[:-1]
        m = core.shape[0]
        w = fd_weights(tuple(range(-half, half + 1)), deriv)
        out = np.zeros_like(core)
        for off, wj in zip(range(-half, half + 1), w):
            out += wj * np.roll(core, -off, axis=0)
        out /= h**deriv
        return np.concatenate([out, out[:1]], axis=0) if m else out

    out = np.empty_like(f)
    centered = 2 * half + 1
    width = min(deriv + accuracy, n)
    if centered > n:
        centered = width = n
        boundary = range(n)
    else:
        w = fd_weights(tuple(range(-half, half + 1)), deriv)
        interior = np.zeros_like(f[half:n - half])
        for off, wj in zip(range(-half, half + 1), w):
            interior += wj * f[half + off:n - half + off]
        out[half:n - half] = interior
        boundary = [*range(half), *range(n - half, n)]
    for i in boundary:
        start = 0 if i < n / 2 else n - width
        offsets = tuple(range(start - i, start - i + width))
        out[i] = np.tensordot(fd_weights(offsets, deriv), f[start:start + width], axes=(0, 0))
    return out / h**deriv
