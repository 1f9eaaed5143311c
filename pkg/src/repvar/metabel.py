"""The Burde-de Rham representation and the reducible metabelian SL(3) representation.

For a root alpha of the Alexander polynomial with cyclic (t - alpha)-torsion
of order r >= 2::

            | alpha^|g|  z(g)  g(g) |
  rho0(g) = |     0       1    h(g) |      delta g + z cup h = 0,
            |     0       0     1   |

and ``rho~(g) = xi^|g| rho0(g)`` with ``xi^3 = 1/alpha`` lies in SL(3, C).

Conventions (not forced by the mathematics, fixed for determinism):
``h`` is the exponent sum; ``z(S1) = g(S1) = 0``; ``S2`` is the first
generator with ``z(S2) != 0`` and ``z(S2) = 1``; ``xi`` is the principal
cube root.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from . import sl3
from .alexander import TorsionReport, require_sl3_hypothesis, torsion_report
from .cohomology import (
    Cochain1,
    TwistedModule,
    character_module,
    cocycle_matrix,
    cup,
    homomorphism_cochain,
    solve_coboundary,
)
from .errors import HypothesisError, InconsistencyError
from .groupring import WordEvaluator, commutator, multiply
from .knotio import Presentation
from .linalg import null_space

NONZERO_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Rep:
    dim: int
    matrices: tuple[np.ndarray, ...]
    alpha: complex
    ingredients: dict = field(default_factory=dict)
    precision: int = 15
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        mats = tuple(np.array(m, dtype=complex) for m in self.matrices)
        for m in mats:
            m.setflags(write=False)
        object.__setattr__(self, "matrices", mats)

    @property
    def evaluator(self) -> WordEvaluator:
        return WordEvaluator(self.matrices)

    def __call__(self, w) -> np.ndarray:
        return self.evaluator(w)

    def replace(self, matrices, **kw) -> Rep:
        return Rep(self.dim, tuple(matrices), self.alpha, kw.get("ingredients", self.ingredients),
                   self.precision, kw.get("flags", self.flags))

    def to_dict(self) -> dict:
        def cpx(a):
            return [[float(x.real), float(x.imag)] for x in np.ravel(a)]

        return {
            "dim": self.dim,
            "alpha": {"re": self.alpha.real, "im": self.alpha.imag},
            "generators": [[[[float(x.real), float(x.imag)] for x in row] for row in m] for m in self.matrices],
            "ingredients": {k: cpx(v) for k, v in self.ingredients.items()},
            "precision": self.precision,
            "flags": dict(self.flags),
        }

    @classmethod
    def from_dict(cls, d: dict) -> Rep:
        mats = [np.array([[complex(*x) for x in row] for row in m]) for m in d["generators"]]
        ingr = {k: np.array([complex(*x) for x in v]) for k, v in d.get("ingredients", {}).items()}
        return cls(d["dim"], tuple(mats), complex(d["alpha"]["re"], d["alpha"]["im"]), ingr,
                   d.get("precision", 15), d.get("flags", {}))


def root_character(alpha: complex, n: int) -> complex:
    """Principal n-th root of 1/alpha: the value on a meridian of a homomorphism
    eta with eta^n = alpha^-|.| (exists since |.| factors through Z)."""
    return cmath.exp(-cmath.log(alpha) / n)


def _normalized_cocycle(p: Presentation, m: TwistedModule) -> np.ndarray:
    """A cocycle in Z^1(C_a) that is not a coboundary, with z(S1) = 0.

    For Wirtinger generators coboundaries are constant vectors, so removing the
    S1 entry from a kernel vector kills the coboundary part.
    """
    ker = null_space(cocycle_matrix(p, m)) if p.relators else np.eye(p.num_generators, dtype=complex)
    best, best_norm = None, 0.0
    for v in ker.T:
        w = v - v[0]
        nrm = float(np.linalg.norm(w))
        if nrm > best_norm:
            best, best_norm = w, nrm
    if best is None or best_norm < NONZERO_TOL:
        raise HypothesisError("H^1(pi; C_alpha) = 0: alpha is not a root of the Alexander polynomial")
    return best / best_norm


def second_generator(z: np.ndarray) -> int:
    """0-based index of the first generator with z != 0."""
    scale = float(np.max(np.abs(z)))
    for i, v in enumerate(z):
        if abs(v) > NONZERO_TOL * scale:
            return i
    raise InconsistencyError("cocycle vanishes on every generator")


def burde_derham_rep(p: Presentation, alpha: complex, z: np.ndarray | None = None) -> Rep:
    """phi(g) = [[alpha^|g|, z(g)], [0, 1]] normalized into SL(2, C)."""
    ca = character_module(p.num_generators, alpha)
    if z is None:
        z = _normalized_cocycle(p, ca)
        z = z / z[second_generator(z)]
    z = np.asarray(z, dtype=complex)
    abelian = bool(np.max(np.abs(z - z[0])) < NONZERO_TOL * max(1.0, float(np.max(np.abs(z)))))
    xi = root_character(alpha, 2)
    mats = [xi * np.array([[alpha, zi], [0, 1]]) for zi in z]
    return Rep(2, tuple(mats), complex(alpha), {"z": z}, flags={"abelian": abelian})


@dataclass
class MetabelianData:
    """Cochains behind rho0, kept for the cohomology and deformation stages."""

    presentation: Presentation
    alpha: complex
    torsion: TorsionReport
    module_alpha: TwistedModule
    z: Cochain1
    h: Cochain1
    g: Cochain1
    s2: int                     # 0-based index of S2
    cup_residual: float
    rho0: Rep


def build_metabelian_sl3(p: Presentation, alpha: complex, h_scale: complex = 1.0,
                         report: TorsionReport | None = None) -> MetabelianData:
    """Construct rho0 after checking that alpha is a multiple root with cyclic torsion."""
    report = report or torsion_report(p, alpha)
    require_sl3_hypothesis(report)
    n = p.num_generators
    ca = character_module(n, alpha, "C_alpha")
    zv = _normalized_cocycle(p, ca)
    s2 = second_generator(zv)
    zv = zv / zv[s2]
    z = Cochain1(ca, zv, name="z")
    h = homomorphism_cochain(p, scale=h_scale)
    g, mem = solve_coboundary(-cup(z, h, ca), p, name="g")
    if g is None:
        raise InconsistencyError(
            f"{{z cup h}} != 0 (relative residual {mem.relative_residual:.3g}) although alpha is a multiple root")
    # shift by a coboundary of C_alpha (constant on Wirtinger generators) so that g(S1) = 0
    shift = -g.values[0, 0]
    g = Cochain1(ca, g.values + shift, g.defect, name="g")
    zs, hs, gs = z.scalar_values(), h.scalar_values(), g.scalar_values()
    mats = [np.array([[alpha, zs[i], gs[i]], [0, 1, hs[i]], [0, 0, 1]], dtype=complex) for i in range(n)]
    rho0 = Rep(3, tuple(mats), complex(alpha), {"z": zs, "h": hs, "g": gs},
               flags={"normalized": False, "S2": s2 + 1})
    res = verify_representation(p, rho0, check_det=False)
    if res.relator > 1e-8:
        raise InconsistencyError(f"rho0 fails its relators (residual {res.relator:.3g})")
    return MetabelianData(p, complex(alpha), report, ca, z, h, g, s2, mem.residual, rho0)


def normalize_to_sl3(rho0: Rep) -> Rep:
    """rho~(g) = xi^|g| rho0(g) with xi^3 = 1/alpha; every Wirtinger generator has |S_i| = 1."""
    xi = root_character(rho0.alpha, 3)
    flags = dict(rho0.flags, normalized=True)
    return rho0.replace([xi * m for m in rho0.matrices], flags=flags)


def metabelian_sl3(p: Presentation, alpha: complex, **kw) -> tuple[Rep, MetabelianData]:
    data = build_metabelian_sl3(p, alpha, **kw)
    return normalize_to_sl3(data.rho0), data


@dataclass(frozen=True)
class Verification:
    relator: float
    det: float
    commutator: float

    def ok(self, tol: float = 1e-10, det_tol: float = 1e-12) -> bool:
        return self.relator < tol and self.det < det_tol and self.commutator < tol

    def to_dict(self) -> dict:
        return {"relator": self.relator, "det": self.det, "commutator": self.commutator}


def verify_representation(p: Presentation, r: Rep, check_det: bool = True) -> Verification:
    """Max Frobenius residual over relators, det deviation, and [r(mu), r(lambda)]."""
    ev = r.evaluator
    eye = np.eye(r.dim)
    rel = max((float(np.linalg.norm(ev(w) - eye)) for w in p.relators), default=0.0)
    det = max(abs(np.linalg.det(m) - 1) for m in r.matrices) if check_det else 0.0
    comm = 0.0
    if p.longitude:
        mu, lam = ev((p.meridian,)), ev(p.longitude)
        comm = float(np.linalg.norm(mu @ lam - lam @ mu))
    return Verification(rel, float(det), comm)


def metabelian_defect(p: Presentation, r: Rep) -> float:
    """max ||r(c) - I|| over commutators of elements of pi' (elements of pi'').

    pi' is normally generated by S_i S_1^-1; we test commutators of those and of
    their conjugates by S_1.
    """
    ev = r.evaluator
    n = p.num_generators
    derived = [multiply((i,), (-1,)) for i in range(2, n + 1)]
    derived += [multiply((1,), w, (-1,)) for w in derived]
    eye = np.eye(r.dim)
    worst = 0.0
    for a in range(len(derived)):
        for b in range(a + 1, len(derived)):
            worst = max(worst, float(np.linalg.norm(ev(commutator(derived[a], derived[b])) - eye)))
    return worst


def diagonal_limit(r: Rep, s: float = 1e-8) -> Rep:
    """Conjugate by diag(s, 1, 1/s); as s -> 0 this tends to the diagonal rho_alpha."""
    lam = np.diag([s, 1.0, 1.0 / s])
    lam_inv = np.diag([1.0 / s, 1.0, s])
    return r.replace([lam @ m @ lam_inv for m in r.matrices], flags=dict(r.flags, diagonal_limit=s))


def diagonal_rep(rtilde: Rep) -> Rep:
    """rho_alpha: the diagonal part of rho~ (the closed orbit in its closure)."""
    return rtilde.replace([np.diag(np.diag(m)) for m in rtilde.matrices], flags={"diagonal": True})


def adjoint_module(r: Rep, name: str = "sl3") -> TwistedModule:
    """sl(3, C) with gamma acting by Ad(r(gamma)), in the (D1, D2, E_ij) basis."""
    return TwistedModule(name, tuple(sl3.adjoint(m) for m in r.matrices))


def regular_element_check(a: np.ndarray) -> tuple[int, bool]:
    """(dim of the centralizer of ``a`` in sl(3), whether that centralizer is abelian)."""
    ad = sl3.adjoint(a) - np.eye(8)
    cent = null_space(ad)
    mats = [sl3.to_matrix(c) for c in cent.T]
    abelian = all(np.linalg.norm(x @ y - y @ x) < 1e-9 for x in mats for y in mats)
    return cent.shape[1], abelian
