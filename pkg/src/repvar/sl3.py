"""Coordinates on sl(3, C) in the basis (D1, D2, E12, E13, E21, E23, E31, E32).

D1 = E22 - 2 E11 + E33 and D2 = E11 - 2 E33 + E22.
"""

from __future__ import annotations

import numpy as np

NAMES = ("D1", "D2", "E12", "E13", "E21", "E23", "E31", "E32")
_OFFDIAG = {"E12": (0, 1), "E13": (0, 2), "E21": (1, 0), "E23": (1, 2), "E31": (2, 0), "E32": (2, 1)}

# indices of the invariant pieces used in the cohomology tables
UPPER_NILPOTENT = (2, 3, 5)        # C_+(3) = <E12, E13, E23>
BOREL = (0, 1, 2, 3, 5)            # b_+
LOWER = (4, 6, 7)                  # representatives of C_-(3) = sl(3)/b_+: E21, E31, E32
INDEX = {name: k for k, name in enumerate(NAMES)}


def _basis() -> np.ndarray:
    mats = [np.diag([-2.0, 1.0, 1.0]), np.diag([1.0, 1.0, -2.0])]
    for name in NAMES[2:]:
        e = np.zeros((3, 3))
        e[_OFFDIAG[name]] = 1.0
        mats.append(e)
    return np.array(mats, dtype=complex)


BASIS = _basis()
BASIS.setflags(write=False)
_VEC = BASIS.reshape(8, 9).T           # 9 x 8: coordinates -> vec(X)


def to_matrix(c: np.ndarray) -> np.ndarray:
    return np.tensordot(np.asarray(c, dtype=complex), BASIS, axes=(0, 0))


def coords(x: np.ndarray) -> np.ndarray:
    """Coordinates of a traceless 3x3 matrix (the trace part is discarded)."""
    x = np.asarray(x, dtype=complex)
    d1 = (x[1, 1] - x[0, 0]) / 3
    d2 = (x[1, 1] - x[2, 2]) / 3
    return np.array([d1, d2] + [x[_OFFDIAG[n]] for n in NAMES[2:]])


def vec_matrix() -> np.ndarray:
    return _VEC


def adjoint(a: np.ndarray) -> np.ndarray:
    """8x8 matrix of X -> a X a^-1 in these coordinates."""
    a = np.asarray(a, dtype=complex)
    ainv = np.linalg.inv(a)
    return np.column_stack([coords(a @ BASIS[k] @ ainv) for k in range(8)])
