"""Twisted cohomology of a knot group computed on its presentation 2-complex.

A 1-cochain is free data on the generators; it is a cocycle iff its Fox
extension vanishes on every relator, so ``Z^1 = ker(cocycle_matrix)``.  The
Wirtinger complex of a knot is aspherical, hence ``H^2`` is the cokernel of
the same matrix and no 3-cells are needed.

Group 2-cochains (cup products and their combinations) are represented by
their *relator vectors*: if ``f`` is a cochain on the free group with
``f(S_i) = 0`` and ``delta f = c``, the vector ``-f(R_j)`` (one module value
per relator) lies in the image of the cocycle matrix iff ``c`` is a
coboundary on the group.
"""

from __future__ import annotations

import functools
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .groupring import FreeRingElement, Word, WordEvaluator, fox_derivative
from .knotio import Presentation
from .linalg import RANK_RTOL, lstsq_min_norm, numerical_rank

MEMBERSHIP_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class TwistedModule:
    """Finite-dimensional pi-module: one invertible d x d matrix per generator."""

    name: str
    action: tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = tuple(np.array(np.atleast_2d(m), dtype=complex) for m in self.action)
        for m in mats:
            m.setflags(write=False)
        object.__setattr__(self, "action", mats)

    @property
    def dim(self) -> int:
        return self.action[0].shape[0]

    @property
    def num_generators(self) -> int:
        return len(self.action)

    @cached_property
    def evaluator(self) -> WordEvaluator:
        return WordEvaluator(self.action)

    def act(self, w: Sequence[int]) -> np.ndarray:
        return self.evaluator(w)

    def relator_residual(self, p: Presentation) -> float:
        eye = np.eye(self.dim)
        return max((float(np.linalg.norm(self.act(r) - eye)) for r in p.relators), default=0.0)


def trivial_module(n: int) -> TwistedModule:
    return TwistedModule("C", tuple(np.eye(1) for _ in range(n)))


def character_module(n: int, alpha: complex, name: str | None = None) -> TwistedModule:
    """C_alpha: every Wirtinger generator acts by alpha."""
    return TwistedModule(name or f"C_alpha({alpha:.6g})", tuple(np.array([[alpha]]) for _ in range(n)))


def submodule(m: TwistedModule, idx: Sequence[int], name: str, tol: float = 1e-9) -> TwistedModule:
    """Restriction to the span of the basis vectors ``idx`` (must be invariant)."""
    idx = list(idx)
    rest = [k for k in range(m.dim) if k not in idx]
    for a in m.action:
        if rest and np.max(np.abs(a[np.ix_(rest, idx)])) > tol * max(1.0, np.max(np.abs(a))):
            raise ValueError(f"span of {idx} is not invariant")
    return TwistedModule(name, tuple(a[np.ix_(idx, idx)] for a in m.action))


def quotient(m: TwistedModule, idx: Sequence[int], name: str, tol: float = 1e-9) -> TwistedModule:
    """Quotient by the invariant span of basis vectors ``idx``."""
    submodule(m, idx, "check", tol)
    rest = [k for k in range(m.dim) if k not in idx]
    return TwistedModule(name, tuple(a[np.ix_(rest, rest)] for a in m.action))


# --- the two matrices --------------------------------------------------------


@functools.lru_cache(maxsize=64)
def fox_table(p: Presentation) -> tuple[tuple[FreeRingElement, ...], ...]:
    return tuple(tuple(fox_derivative(r, i) for i in range(1, p.num_generators + 1)) for r in p.relators)


def coboundary_matrix(p: Presentation, m: TwistedModule) -> np.ndarray:
    """Stacked blocks M(S_i) - I; its image is B^1 and its kernel H^0."""
    eye = np.eye(m.dim)
    if not m.action:
        return np.zeros((0, m.dim), dtype=complex)
    return np.vstack([a - eye for a in m.action])


def fox_blocks(relator: Word, ev: WordEvaluator, n: int) -> list[np.ndarray]:
    """Blocks of evaluate(dR/dS_i) for i = 1..n in one pass over the relator."""
    d = ev.dim
    blocks = [np.zeros((d, d), dtype=complex) for _ in range(n)]
    pre = np.eye(d, dtype=complex)
    for x in relator:
        if x > 0:
            blocks[x - 1] += pre
            pre = pre @ ev.letter(x)
        else:
            pre = pre @ ev.letter(x)
            blocks[-x - 1] -= pre
    return blocks


def cocycle_matrix(p: Presentation, m: TwistedModule) -> np.ndarray:
    """((n-1)d x nd) matrix whose kernel is Z^1; block (j, i) = evaluate(dR_j/dS_i)."""
    d, n = m.dim, p.num_generators
    if not p.relators:
        return np.zeros((0, n * d), dtype=complex)
    rows = [np.hstack(fox_blocks(r, m.evaluator, n)) for r in p.relators]
    return np.vstack(rows)


@dataclass(frozen=True)
class CohomologyTable:
    h0: int
    h1: int
    h2: int
    z1: int
    b1: int
    module: str = ""

    def to_dict(self) -> dict:
        return {"module": self.module, "h0": self.h0, "h1": self.h1, "h2": self.h2,
                "z1": self.z1, "b1": self.b1}

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.h0, self.h1, self.h2


def cohomology_dims(p: Presentation, m: TwistedModule, rtol: float = RANK_RTOL) -> CohomologyTable:
    d, n = m.dim, p.num_generators
    rank_b = numerical_rank(coboundary_matrix(p, m), rtol)
    rank_z = numerical_rank(cocycle_matrix(p, m), rtol) if p.relators else 0
    z1 = n * d - rank_z
    return CohomologyTable(h0=d - rank_b, h1=z1 - rank_b, h2=len(p.relators) * d - rank_z,
                           z1=z1, b1=rank_b, module=m.name)


def cocycle_basis(p: Presentation, m: TwistedModule) -> np.ndarray:
    """Orthonormal basis of Z^1 as columns (generator-major layout, n*d rows)."""
    from .linalg import null_space

    return null_space(cocycle_matrix(p, m))


# --- cochains, cup products, relator vectors ----------------------------------


class TwoCochain:
    """A 2-cochain on the free group, evaluated on pairs (word, letter)."""

    module: TwistedModule

    def __call__(self, w: Word, x: int) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    def __add__(self, other: TwoCochain) -> TwoCochain:
        return _Combination([(1, self), (1, other)])

    def __neg__(self) -> TwoCochain:
        return _Combination([(-1, self)])

    def __sub__(self, other: TwoCochain) -> TwoCochain:
        return self + (-other)

    def __rmul__(self, s: complex) -> TwoCochain:
        return _Combination([(s, self)])


class _Combination(TwoCochain):
    def __init__(self, terms):
        self.terms = terms
        self.module = terms[0][1].module

    def __call__(self, w, x):
        return sum(s * c(w, x) for s, c in self.terms)


class Cochain1:
    """A 1-cochain given on generators, extended to words by its coboundary.

    ``defect`` is the 2-cochain ``delta f`` (``None`` for cocycles); values on
    arbitrary words follow from ``f(w x) = f(w) + w.f(x) - defect(w, x)``.
    """

    def __init__(self, module: TwistedModule, values: np.ndarray, defect: TwoCochain | None = None,
                 name: str = ""):
        vals = np.asarray(values, dtype=complex).reshape(module.num_generators, module.dim)
        self.module = module
        self.values = vals
        self.defect = defect
        self.name = name
        self._cache: dict[Word, np.ndarray] = {(): np.zeros(module.dim, dtype=complex)}

    def letter(self, x: int) -> np.ndarray:
        if x > 0:
            return self.values[x - 1]
        base = -self.values[-x - 1]
        if self.defect is not None:
            base = base + self.defect((-x,), x)
        return self.module.evaluator.letter(x) @ base

    def __call__(self, w: Sequence[int]) -> np.ndarray:
        w = tuple(w)
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        head, x = w[:-1], w[-1]
        val = self(head) + self.module.act(head) @ self.letter(x)
        if self.defect is not None:
            val = val - self.defect(head, x)
        self._cache[w] = val
        return val

    def scalar_values(self) -> np.ndarray:
        return self.values[:, 0] if self.module.dim == 1 else self.values

    def __add__(self, other: Cochain1) -> Cochain1:
        defect = _sum_defects(self.defect, other.defect)
        return Cochain1(self.module, self.values + other.values, defect, self.name)

    def scaled(self, s: complex) -> Cochain1:
        defect = None if self.defect is None else s * self.defect
        return Cochain1(self.module, s * self.values, defect, self.name)


def _sum_defects(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a + b


Pairing = Callable[[np.ndarray, np.ndarray], np.ndarray]


def scalar_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a * b


class CupProduct(TwoCochain):
    """(u cup v)(w, x) = pairing(u(w), w . v(x))."""

    def __init__(self, u: Cochain1, v: Cochain1, pairing: Pairing, module: TwistedModule):
        self.u, self.v, self.pairing, self.module = u, v, pairing, module

    def __call__(self, w, x):
        return self.pairing(self.u(w), self.v.module.act(w) @ self.v.letter(x))


def cup(u: Cochain1, v: Cochain1, module: TwistedModule, pairing: Pairing = scalar_product) -> CupProduct:
    return CupProduct(u, v, pairing, module)


def relator_vector(c: TwoCochain, p: Presentation) -> np.ndarray:
    """Value of the 2-cochain on each relator cell.

    For ``R = x_1 ... x_m`` this is ``sum_k c(x_1..x_{k-1}, x_k)`` minus, for
    each inverse letter ``S^-1``, the correction ``(x_1..x_k) . c(S, S^-1)``
    that fixes the value of a cochain on ``S^-1``.  With this normalization
    ``relator_vector(delta g) == cocycle_matrix @ g`` for every cochain ``g``.
    """
    m = c.module
    out = []
    for r in p.relators:
        acc = np.zeros(m.dim, dtype=complex)
        for k, x in enumerate(r):
            acc = acc + c(r[:k], x)
            if x < 0:
                acc = acc - m.act(r[: k + 1]) @ c((-x,), x)
        out.append(acc)
    return np.concatenate(out) if out else np.zeros(0, dtype=complex)


def cup_product_on_relators(u: Cochain1, v: Cochain1, pairing: Pairing, p: Presentation,
                            module: TwistedModule) -> np.ndarray:
    return relator_vector(cup(u, v, module, pairing), p)


@dataclass(frozen=True)
class Membership:
    is_coboundary: bool
    witness: np.ndarray          # generator values, shape (n, d)
    residual: float
    relative_residual: float
    norm: float


def coboundary_membership(c2: np.ndarray, m: TwistedModule, p: Presentation,
                          rtol: float = MEMBERSHIP_RTOL) -> Membership:
    """Least-squares solve of cocycle_matrix . g = c2.

    ``c2`` is a coboundary class iff the relative residual is below ``rtol``;
    the minimal-norm ``g`` is returned as the witness.
    """
    c2 = np.asarray(c2, dtype=complex)
    a = cocycle_matrix(p, m)
    norm = float(np.linalg.norm(c2))
    if norm == 0.0:
        return Membership(True, np.zeros((p.num_generators, m.dim), dtype=complex), 0.0, 0.0, 0.0)
    rank = numerical_rank(a) if a.size else 0
    g, res = lstsq_min_norm(a, c2, rank=rank)
    rel = res / norm
    return Membership(rel < rtol, g.reshape(p.num_generators, m.dim), res, rel, norm)


def solve_coboundary(c: TwoCochain, p: Presentation, name: str = "",
                     rtol: float = MEMBERSHIP_RTOL) -> tuple[Cochain1 | None, Membership]:
    """Find ``g`` with ``delta g = c``; returns ``(None, membership)`` if the class is nonzero."""
    mem = coboundary_membership(relator_vector(c, p), c.module, p, rtol)
    if not mem.is_coboundary:
        return None, mem
    return Cochain1(c.module, mem.witness, defect=c, name=name), mem


def homomorphism_cochain(p: Presentation, m: TwistedModule | None = None, scale: complex = 1.0) -> Cochain1:
    """The exponent-sum homomorphism h(gamma) = scale * |gamma| into the trivial module."""
    m = m or trivial_module(p.num_generators)
    return Cochain1(m, np.full((p.num_generators, 1), scale, dtype=complex), name="h")
