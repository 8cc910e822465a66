"""Central finite-difference stencils, second-order accurate, derivative orders 0..6.

Each entry maps a derivative order k to (offsets, weights); the estimate of
f^(k)(0) on a uniform grid of step h is sum(w * f(o * h)) / h**k.
"""

from __future__ import annotations

import numpy as np

MAX_ORDER = 6

STENCILS: dict[int, tuple[np.ndarray, np.ndarray]] = {
    0: (np.array([0]), np.array([1.0])),
    1: (np.array([-1, 1]), np.array([-0.5, 0.5])),
    2: (np.array([-1, 0, 1]), np.array([1.0, -2.0, 1.0])),
    3: (np.array([-2, -1, 1, 2]), np.array([-0.5, 1.0, -1.0, 0.5])),
    4: (np.array([-2, -1, 0, 1, 2]), np.array([1.0, -4.0, 6.0, -4.0, 1.0])),
    5: (np.array([-3, -2, -1, 1, 2, 3]), np.array([-0.5, 2.0, -2.5, 2.5, -2.0, 0.5])),
    6: (np.array([-3, -2, -1, 0, 1, 2, 3]), np.array([1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0])),
}


def stencil(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Return (offsets, weights) for the central stencil of the given order."""
    if order < 0 or order > MAX_ORDER:
        raise ValueError(f"no stencil tabulated for derivative order {order} (max {MAX_ORDER})")
    return STENCILS[order]


def reach(order: int) -> int:
    """Largest grid offset used by the order-k stencil."""
    off, _ = stencil(order)
    return int(np.max(np.abs(off)))
