"""Numerical linear algebra policy shared by every module.

Ranks are decided from singular values: ``s <= RANK_RTOL * s_max`` counts as
zero.  If some singular value falls within a factor ``AMBIGUITY`` of that
threshold the rank is declared indeterminate.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import RankIndeterminateError

RANK_RTOL = 1e-8
AMBIGUITY = 100.0


def singular_values(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def numerical_rank(a: np.ndarray, rtol: float = RANK_RTOL, strict: bool = True) -> int:
    s = singular_values(a)
    if s.size == 0 or s[0] == 0.0:
        return 0
    thr = rtol * s[0]
    if strict:
        grey = (s > thr / AMBIGUITY) & (s < thr * AMBIGUITY)
        if np.any(grey):
            raise RankIndeterminateError(
                f"singular values {s[grey]} lie within x{AMBIGUITY:g} of threshold {thr:.3g}"
            )
    return int(np.sum(s > thr))


def null_space(a: np.ndarray, rtol: float = RANK_RTOL, rank: int | None = None) -> np.ndarray:
    """Orthonormal basis of ker(a) as columns."""
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    m, n = a.shape
    if m == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(a)
    r = numerical_rank(a, rtol) if rank is None else rank
    return vh[r:].conj().T


def lstsq_min_norm(a: np.ndarray, b: np.ndarray, rank: int | None = None, rtol: float = RANK_RTOL):
    """Minimal-norm least-squares solution via a truncated SVD.

    Returns ``(x, residual_norm)``.
    """
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    b = np.asarray(b, dtype=complex)
    if a.shape[0] == 0:
        return np.zeros(a.shape[1], dtype=complex), 0.0
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    r = numerical_rank(a, rtol, strict=False) if rank is None else rank
    coef = (u[:, :r].conj().T @ b) / s[:r]
    x = vh[:r].conj().T @ coef
    return x, float(np.linalg.norm(a @ x - b))


def expm(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a Taylor core.

    The series is summed until the next term is below unit roundoff relative
    to the partial sum, after scaling so that ``||a / 2^s|| <= 1/2``; the
    remainder is then bounded by twice the first omitted term.
    """
    a = np.asarray(a, dtype=complex)
    norm = np.linalg.norm(a, 1)
    s = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    b = a / (2.0**s)
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, 40):
        term = term @ b / k
        out = out + term
        if np.linalg.norm(term, 1) <= 1e-17 * np.linalg.norm(out, 1):
            break
    for _ in range(s):
        out = out @ out
    return out
