"""Deformations of the metabelian representation rho~ in SL(3, C).

Cocycles live in Z^1(pi; sl(3)) with sl(3) in the (D1, D2, E_ij) basis and are
stored generator-major as an (n, 8) array.  A curve is written
``rho_t(S_i) = exp(U_i(t)) rho~(S_i)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import sl3
from .cohomology import (
    Cochain1,
    TwistedModule,
    character_module,
    cocycle_matrix,
    coboundary_matrix,
    cohomology_dims,
    cup,
    quotient,
    solve_coboundary,
    trivial_module,
)
from .errors import InconsistencyError, NumericalError
from .groupring import WordEvaluator
from .knotio import Presentation
from .laurent import LaurentPoly
from .linalg import RANK_RTOL, expm, lstsq_min_norm, null_space, numerical_rank
from .metabel import (
    MetabelianData,
    Rep,
    _normalized_cocycle,
    adjoint_module,
    metabelian_defect,
    root_character,
    verify_representation,
)

OBSTRUCTION_TOL = 1e-8
TRACE_TOL = 1e-6
EIGEN_GAP_TOL = 1e-6
CUP_TOL = 1e-10

E21, E31, E32 = sl3.INDEX["E21"], sl3.INDEX["E31"], sl3.INDEX["E32"]


@dataclass
class AdjointCocycle:
    values: np.ndarray                      # (n, 8) sl(3) coordinates
    coordinates: tuple | None = None        # (t1, t2, t3)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex).reshape(-1, 8)

    @property
    def matrices(self) -> np.ndarray:
        return np.array([sl3.to_matrix(v) for v in self.values])

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def scaled(self, s: complex) -> AdjointCocycle:
        coords = None if self.coordinates is None else tuple(s * c for c in self.coordinates)
        return AdjointCocycle(s * self.values, coords)


# --- cocycle space and the lower-triangular coordinates ---------------------------


@dataclass
class GaloisData:
    """z_- in Z^1(C_{1/alpha}) and the cochains g_-, g_0 with
    delta g_- + h cup z_- = 0 and delta g_0 + z cup z_- = 0."""

    z_minus: Cochain1
    g_minus: Cochain1
    g_zero: Cochain1
    kernel_dims: tuple[int, int]
    residuals: dict


def galois_partner_data(p: Presentation, alpha: complex, data: MetabelianData) -> GaloisData:
    n = p.num_generators
    c_inv = character_module(n, 1 / alpha, "C_alpha^-1")
    k_plus = n - numerical_rank(cocycle_matrix(p, data.module_alpha))
    k_minus = n - numerical_rank(cocycle_matrix(p, c_inv))
    if k_plus != k_minus:
        raise InconsistencyError(f"dim ker J(alpha) = {k_plus} but dim ker J(1/alpha) = {k_minus}")
    zm = _normalized_cocycle(p, c_inv)
    s2 = data.s2
    if abs(zm[s2]) < 1e-8 * np.max(np.abs(zm)):
        raise InconsistencyError(f"z_-(S{s2 + 1}) = 0 although z(S{s2 + 1}) != 0")
    z_minus = Cochain1(c_inv, zm / zm[s2], name="z_-")
    g_minus, mem_m = solve_coboundary(-cup(data.h, z_minus, c_inv), p, name="g_-")
    if g_minus is None:
        raise InconsistencyError(f"{{h cup z_-}} != 0 (relative residual {mem_m.relative_residual:.3g})")
    triv = trivial_module(n)
    g_zero, mem_0 = solve_coboundary(-cup(data.z, z_minus, triv), p, name="g_0")
    if g_zero is None:
        raise InconsistencyError(f"{{z cup z_-}} != 0 (relative residual {mem_0.relative_residual:.3g})")
    return GaloisData(z_minus, g_minus, g_zero, (k_plus, k_minus),
                      {"h_cup_zminus": mem_m.residual, "z_cup_zminus": mem_0.residual})


def lower_module(adjoint: TwistedModule) -> TwistedModule:
    """C_-(3) = sl(3)/b_+ with basis the images of (E21, E31, E32)."""
    return quotient(adjoint, sl3.BOREL, "C_-(3)")


def lower_class_basis(gd: GaloisData) -> np.ndarray:
    """(n*3, 3) columns z1 = z_- E21, z2 = h E32, z3 = z_- E31 - g_0 E32 + g_- E21."""
    zm = gd.z_minus.scalar_values()
    gm = gd.g_minus.scalar_values()
    g0 = gd.g_zero.scalar_values()
    n = len(zm)
    cols = np.zeros((n, 3, 3), dtype=complex)          # generator, slot (E21, E31, E32), column
    cols[:, 0, 0] = zm
    cols[:, 2, 1] = 1.0
    cols[:, 1, 2] = zm
    cols[:, 2, 2] = -g0
    cols[:, 0, 2] = gm
    return cols.reshape(n * 3, 3)


@dataclass
class CoordinateSystem:
    """Linear map from adjoint cocycles to (t1, t2, t3), via one least-squares solve
    against the class basis plus coboundaries of C_-(3)."""

    design: np.ndarray
    rank: int

    def __call__(self, u: AdjointCocycle | np.ndarray) -> tuple[np.ndarray, float]:
        vals = u.values if isinstance(u, AdjointCocycle) else np.asarray(u).reshape(-1, 8)
        rhs = vals[:, [E21, E31, E32]].reshape(-1)
        x, res = lstsq_min_norm(self.design, rhs, rank=self.rank)
        scale = max(1.0, float(np.linalg.norm(rhs)))
        return x[:3], res / scale

    def matrix(self) -> np.ndarray:
        """3 x (8n) matrix of the (linear) coordinate map."""
        n = self.design.shape[0] // 3
        out = np.zeros((3, 8 * n), dtype=complex)
        eye = np.eye(8 * n)
        for k in range(8 * n):
            out[:, k] = self(eye[k])[0]
        return out


def coordinate_system(p: Presentation, adjoint: TwistedModule, gd: GaloisData) -> CoordinateSystem:
    lower = lower_module(adjoint)
    design = np.hstack([lower_class_basis(gd), coboundary_matrix(p, lower)])
    return CoordinateSystem(design, numerical_rank(design))


def cocycle_coordinates(u: AdjointCocycle, system: CoordinateSystem, tol: float = 1e-8) -> tuple:
    """(t1, t2, t3) of the class of u in H^1(C_-(3))."""
    t, rel = system(u)
    if rel > tol:
        raise NumericalError(f"lower-triangular part of u is not in the class span (residual {rel:.3g})")
    return tuple(complex(x) for x in t)


def select_direction(p: Presentation, rtilde: Rep, system: CoordinateSystem) -> AdjointCocycle:
    """The minimal-norm cocycle with t3 = 1."""
    adj = adjoint_module(rtilde)
    basis = null_space(cocycle_matrix(p, adj))
    coord_map = system.matrix() @ basis                 # 3 x dim Z^1
    row = coord_map[2]
    norm2 = float(np.vdot(row, row).real)
    if norm2 < 1e-16:
        raise InconsistencyError("every cocycle has t3 = 0")
    c = row.conj() / norm2
    u = AdjointCocycle(basis @ c)
    u.coordinates = cocycle_coordinates(u, system)
    return u


# --- truncated power series of 3x3 matrices ----------------------------------------


def series_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    order = a.shape[0]
    out = np.zeros_like(a)
    for k in range(order):
        for i in range(k + 1):
            out[k] += a[i] @ b[k - i]
    return out


def series_exp(x: np.ndarray) -> np.ndarray:
    """exp of a series with zero constant term; exact modulo t^(K+1)."""
    order = x.shape[0]
    out = np.zeros_like(x)
    out[0] = np.eye(x.shape[1])
    term = out.copy()
    for m in range(1, order):
        term = series_mul(term, x) / m
        out = out + term
    return out


def series_log(w: np.ndarray) -> np.ndarray:
    """log of a series with constant term I."""
    order = w.shape[0]
    nil = w.copy()
    nil[0] = 0
    out = np.zeros_like(w)
    power = nil.copy()
    for m in range(1, order):
        out = out + ((-1) ** (m + 1) / m) * power
        power = series_mul(power, nil)
    return out


def constant_series(a: np.ndarray, order: int) -> np.ndarray:
    out = np.zeros((order,) + a.shape, dtype=complex)
    out[0] = a
    return out


def relator_series(p: Presentation, gens: list[np.ndarray], invs: list[np.ndarray]) -> list[np.ndarray]:
    order, d = gens[0].shape[0], gens[0].shape[1]
    out = []
    for r in p.relators:
        acc = constant_series(np.eye(d, dtype=complex), order)
        for x in r:
            acc = series_mul(acc, gens[x - 1] if x > 0 else invs[-x - 1])
        out.append(acc)
    return out


@dataclass
class FormalCurve:
    """rho_t(S_i) = exp(sum_k t^k u_k(S_i)) rho~(S_i) modulo t^(K+1).

    Equivalently exp(-t x) exp(sum_k t^k v_k(S_i)) rho~(S_i) exp(t x), with x the
    conjugator and v_k the slice terms; ``rep_at`` evaluates this closed form, so
    a coboundary direction gives the conjugation curve with no truncation error.
    """

    base: Rep
    order: int
    cocycles: list[np.ndarray]              # u_1..u_K, each (n, 8)
    obstruction_residuals: list[float]      # orders 2..K
    relator_defects: list[float]            # max norm of t^k coefficient of rho(R), k = 1..K
    conjugator: np.ndarray = field(default_factory=lambda: np.zeros(8))
    slice_terms: list[np.ndarray] | None = None     # v_1..v_K; None means use the cocycles

    def exponent(self, i: int, t: float) -> np.ndarray:
        return sum(t ** (k + 1) * sl3.to_matrix(u[i]) for k, u in enumerate(self.cocycles))

    def rep_at(self, t: float) -> Rep:
        if self.slice_terms is None:
            mats = [expm(self.exponent(i, t)) @ m for i, m in enumerate(self.base.matrices)]
        else:
            x = sl3.to_matrix(self.conjugator)
            left, right = expm(-t * x), expm(t * x)
            mats = []
            for i, m in enumerate(self.base.matrices):
                v = sum(t ** (k + 1) * sl3.to_matrix(vk[i]) for k, vk in enumerate(self.slice_terms))
                mats.append(left @ expm(v) @ m @ right)
        return self.base.replace(mats, ingredients={}, flags={"t": t, "formal_order": self.order})

    def polynomial_at(self, t: float) -> list[np.ndarray]:
        """Degree-K truncation of the Taylor series of rho_t(S_i)."""
        out = []
        for i, m in enumerate(self.base.matrices):
            x = np.array([np.zeros((3, 3))] + [sl3.to_matrix(u[i]) for u in self.cocycles], dtype=complex)
            s = series_exp(x)
            out.append(sum(t**k * s[k] for k in range(self.order + 1)) @ m)
        return out

    def is_unobstructed(self, tol: float = OBSTRUCTION_TOL) -> bool:
        return all(r < tol for r in self.obstruction_residuals)


def _slice_series(p: Presentation, rtilde: Rep, vs: list[np.ndarray], order: int):
    gens, invs = [], []
    for i, m in enumerate(rtilde.matrices):
        x = np.zeros((order + 1, 3, 3), dtype=complex)
        for k, v in enumerate(vs):
            x[k + 1] = sl3.to_matrix(v[i])
        e = series_exp(x)
        minus = series_exp(-x)
        gens.append(series_mul(e, constant_series(m, order + 1)))
        invs.append(series_mul(constant_series(np.linalg.inv(m), order + 1), minus))
    return gens, invs


def formal_deformation(p: Presentation, rtilde: Rep, u1: AdjointCocycle, order: int,
                       tol: float = OBSTRUCTION_TOL) -> FormalCurve:
    """Solve the obstruction equations order by order.

    u1 is split as (Ad - I)x + w with w orthogonal to the coboundaries.  The slice
    curve exp(sum t^k v_k) rho~ with v_1 = w is extended with minimal-norm
    corrections, then conjugated by exp(-t x); a coboundary direction therefore
    yields exactly the conjugation curve.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    adj = adjoint_module(rtilde)
    jac = cocycle_matrix(p, adj)
    rank = numerical_rank(jac) if jac.size else 0
    bmat = coboundary_matrix(p, adj)
    brank = numerical_rank(bmat)
    x, _ = lstsq_min_norm(bmat, u1.flat, rank=brank)
    w = (u1.flat - bmat @ x).reshape(-1, 8)
    first = float(np.linalg.norm(jac @ u1.flat)) if jac.size else 0.0
    if first > tol * max(1.0, float(np.linalg.norm(u1.flat))):
        raise NumericalError(f"u1 is not a cocycle (residual {first:.3g})")

    vs = [w]
    residuals = []
    for k in range(2, order + 1):
        gens, invs = _slice_series(p, rtilde, vs + [np.zeros_like(w)], k)
        coef = [rel[k] for rel in relator_series(p, gens, invs)]
        rhs = -np.concatenate([sl3.coords(c) for c in coef])
        trace_defect = max(abs(np.trace(c)) for c in coef) if coef else 0.0
        if jac.size:
            v, res = lstsq_min_norm(jac, rhs, rank=rank)
        else:
            v, res = np.zeros(jac.shape[1], dtype=complex), 0.0
        residuals.append(float(res + trace_defect))
        if residuals[-1] > tol:
            raise InconsistencyError(f"obstruction at order {k} does not vanish (residual {residuals[-1]:.3g})")
        vs.append(v.reshape(-1, 8))

    # conjugate the slice curve by exp(-t x): U(t) = log(exp(-tx) S(t) exp(tx) rho~^-1)
    xmat = sl3.to_matrix(x)
    gens, _ = _slice_series(p, rtilde, vs, order)
    left = np.zeros((order + 1, 3, 3), dtype=complex)
    left[1] = -xmat
    right = left.copy()
    right[1] = xmat
    el, er = series_exp(left), series_exp(right)
    cocycles = [np.zeros((len(rtilde.matrices), 8), dtype=complex) for _ in range(order)]
    for i, m in enumerate(rtilde.matrices):
        wser = series_mul(series_mul(series_mul(el, gens[i]), er), constant_series(np.linalg.inv(m), order + 1))
        logser = series_log(wser)
        for k in range(1, order + 1):
            cocycles[k - 1][i] = sl3.coords(logser[k])
    curve = FormalCurve(rtilde, order, cocycles, residuals, [], conjugator=x, slice_terms=vs)
    curve.relator_defects = formal_relator_defects(p, curve)
    return curve


def formal_relator_defects(p: Presentation, curve: FormalCurve) -> list[float]:
    """Max over relators of the t^k coefficient of rho_t(R), for k = 1..K."""
    gens, invs = [], []
    order = curve.order
    for i, m in enumerate(curve.base.matrices):
        x = np.zeros((order + 1, 3, 3), dtype=complex)
        for k, u in enumerate(curve.cocycles):
            x[k + 1] = sl3.to_matrix(u[i])
        gens.append(series_mul(series_exp(x), constant_series(m, order + 1)))
        invs.append(series_mul(constant_series(np.linalg.inv(m), order + 1), series_exp(-x)))
    rels = relator_series(p, gens, invs)
    return [max((float(np.linalg.norm(r[k])) for r in rels), default=0.0) for k in range(1, order + 1)]


# --- Newton integration ------------------------------------------------------------


def relator_residual_vector(p: Presentation, mats) -> np.ndarray:
    ev = WordEvaluator(mats)
    eye = np.eye(3)
    return np.concatenate([(ev(r) - eye).reshape(-1) for r in p.relators]) if p.relators else np.zeros(0)


def _newton_jacobian(p: Presentation, mats) -> np.ndarray:
    adj = TwistedModule("ad", tuple(sl3.adjoint(m) for m in mats))
    fox = cocycle_matrix(p, adj)
    ev = WordEvaluator(mats)
    vec = sl3.vec_matrix()
    blocks = []
    for j, r in enumerate(p.relators):
        rel = ev(r)
        blocks.append(np.kron(np.eye(3), rel.T) @ vec @ fox[8 * j: 8 * j + 8])
    return np.vstack(blocks)


@dataclass
class NewtonResult:
    matrices: list
    residual: float
    iterations: int
    history: list


def newton_solve(p: Presentation, mats, rank: int, tol: float = 1e-13, maxiter: int = 40) -> NewtonResult:
    """Gauss-Newton with truncated-pseudoinverse (minimal-norm) steps and backtracking."""
    mats = [np.array(m, dtype=complex) for m in mats]
    res = relator_residual_vector(p, mats)
    norm = float(np.linalg.norm(res))
    history = [norm]
    it = 0
    while norm > tol and it < maxiter:
        it += 1
        jac = _newton_jacobian(p, mats)
        step, _ = lstsq_min_norm(jac, -res, rank=rank)
        step = step.reshape(-1, 8)
        lam = 1.0
        for _ in range(30):
            trial = [expm(lam * sl3.to_matrix(step[i])) @ m for i, m in enumerate(mats)]
            tres = relator_residual_vector(p, trial)
            tnorm = float(np.linalg.norm(tres))
            if tnorm < norm:
                break
            lam /= 2
        else:
            break
        if tnorm > 0.999 * norm:
            mats, res, norm = trial, tres, tnorm
            history.append(norm)
            break
        mats, res, norm = trial, tres, tnorm
        history.append(norm)
    return NewtonResult(mats, norm, it, history)


# --- normal form, irreducibility, classification ------------------------------------


def eigen_normal_form(r: Rep, target: complex) -> tuple[Rep, np.ndarray]:
    """Conjugate so that r(S1) has zeros at (1,2), (1,3), (2,1), (3,1).

    ``target`` locates the simple eigenvalue (alpha^(2/3) for rho~).
    Returns the conjugated representation and the conjugator C (det C = 1).
    """
    a = r.matrices[0]
    vals, vecs = np.linalg.eig(a)
    k = int(np.argmin(np.abs(vals - target)))
    others = np.delete(vals, k)
    if np.min(np.abs(others - vals[k])) < EIGEN_GAP_TOL:
        raise NumericalError("simple eigenvalue collides with the others")
    v = vecs[:, k]
    if abs(v[0]) < 1e-12:
        raise NumericalError("eigenvector has no e1 component")
    v = v / v[0]
    q = np.column_stack([v, [0, 1, 0], [0, 0, 1]]).astype(complex)
    a1 = np.linalg.solve(q, a @ q)
    a11 = a1[0, 0]
    block = a1[1:, 1:] - a11 * np.eye(2)
    xy = -np.linalg.solve(block.T, a1[0, 1:])
    pm = np.eye(3, dtype=complex)
    pm[0, 1:] = xy
    conj = pm @ np.linalg.inv(q)
    cinv = np.linalg.inv(conj)
    return r.replace([conj @ m @ cinv for m in r.matrices]), conj


def irreducibility_check(r: Rep, max_length: int = 6, rtol: float = RANK_RTOL) -> tuple[bool, int]:
    """Dimension of the algebra spanned by words in the generators (Burnside)."""
    mats = [m / np.linalg.norm(m) for m in r.matrices]
    d = r.dim
    span = np.eye(d, dtype=complex).reshape(1, -1).T / math.sqrt(d)
    dims = [1]
    for _ in range(max_length):
        cand = [span] + [np.column_stack([(m @ col.reshape(d, d)).reshape(-1) for col in span.T]) for m in mats]
        stack = np.hstack(cand)
        u, s, _ = np.linalg.svd(stack, full_matrices=False)
        rank = int(np.sum(s > rtol * s[0]))
        span = u[:, :rank]
        dims.append(rank)
        if rank == d * d or (len(dims) >= 3 and dims[-1] == dims[-2] == dims[-3]):
            break
    return dims[-1] == d * d, dims[-1]


@dataclass
class Classification:
    irreducible: bool
    algebra_dim: int
    h0: int
    stable: bool
    trace_mu: complex
    nonmetabelian: bool
    metabelian_defect: float

    def to_dict(self) -> dict:
        return {"irreducible": self.irreducible, "algebra_dim": self.algebra_dim, "h0": self.h0,
                "stable": self.stable, "trace_mu": {"re": self.trace_mu.real, "im": self.trace_mu.imag},
                "nonmetabelian": self.nonmetabelian, "metabelian_defect": self.metabelian_defect}


def classify(p: Presentation, r: Rep, trace_tol: float = TRACE_TOL) -> Classification:
    irreducible, dim = irreducibility_check(r)
    h0 = cohomology_dims(p, adjoint_module(r)).h0
    tr = complex(np.trace(r((p.meridian,))))
    return Classification(irreducible, dim, h0, irreducible and h0 == 0, tr,
                          irreducible and abs(tr) > trace_tol, metabelian_defect(p, r))


def minus_two_is_not_a_root(delta: LaurentPoly) -> bool:
    """tr rho~(mu) = alpha^(-1/3)(alpha + 2) cannot vanish: Delta(-2) != 0."""
    return delta(Fraction(-2)) != 0


def centralizer_dim(mats, rtol: float = RANK_RTOL) -> int:
    """dim of the common centralizer in sl(3) of the given matrices."""
    stack = np.vstack([sl3.adjoint(m) - np.eye(8) for m in mats])
    return 8 - numerical_rank(stack, rtol)


def orbit_dim(r: Rep) -> int:
    return 8 - centralizer_dim(r.matrices)


# --- certificates -------------------------------------------------------------------


@dataclass
class Sample:
    t: float
    rep: Rep
    residual: float
    iterations: int
    commutator: float
    classification: Classification

    def to_dict(self) -> dict:
        c = self.classification
        return {"t": self.t, "residual": self.residual, "iterations": self.iterations,
                "commutator": self.commutator, "algebra_dim": c.algebra_dim,
                "irreducible": c.irreducible, "h0": c.h0,
                "trace_mu": {"re": c.trace_mu.real, "im": c.trace_mu.imag},
                "stable": c.stable, "nonmetabelian": c.nonmetabelian,
                "metabelian_defect": c.metabelian_defect,
                "generators": self.rep.to_dict()["generators"]}


@dataclass
class DeformCertificate:
    alpha: complex
    direction: tuple
    order: int
    obstruction_residuals: list
    samples: list[Sample]

    @property
    def t_values(self) -> list[float]:
        return [s.t for s in self.samples]

    @property
    def reps(self) -> list[Rep]:
        return [s.rep for s in self.samples]

    @property
    def irreducible(self) -> list[bool]:
        return [s.classification.irreducible for s in self.samples]

    @property
    def algebra_dim(self) -> list[int]:
        return [s.classification.algebra_dim for s in self.samples]

    @property
    def meridian_trace(self) -> list[complex]:
        return [s.classification.trace_mu for s in self.samples]

    @property
    def stable(self) -> bool:
        return bool(self.samples) and all(s.classification.stable for s in self.samples if s.t != 0)

    @property
    def nonmetabelian(self) -> bool:
        return bool(self.samples) and all(s.classification.nonmetabelian for s in self.samples if s.t != 0)

    def to_dict(self) -> dict:
        return {"alpha": {"re": self.alpha.real, "im": self.alpha.imag},
                "direction": {f"t{k + 1}": {"re": c.real, "im": c.imag} for k, c in enumerate(self.direction)},
                "orders": self.order, "obstruction_residuals": list(self.obstruction_residuals),
                "stable": self.stable, "nonmetabelian": self.nonmetabelian,
                "samples": [s.to_dict() for s in self.samples]}


def integrate_deformation(p: Presentation, rtilde: Rep, u1: AdjointCocycle, t_values,
                          curve: FormalCurve | None = None, tol: float = 1e-10,
                          workers: int = 1) -> DeformCertificate:
    """Newton-correct a starting guess at each t.

    The start is ``curve.rep_at(t)`` when a formal curve is given, otherwise
    ``exp(t u1(S_i)) rho~(S_i)``.  Steps are minimal-norm with the truncation
    rank of the cocycle matrix at rho~, which fixes the conjugation gauge.
    """
    rank = numerical_rank(cocycle_matrix(p, adjoint_module(rtilde)))

    def one(t: float) -> Sample:
        if curve is not None:
            start = list(curve.rep_at(t).matrices)
        else:
            start = [expm(t * sl3.to_matrix(u1.values[i])) @ m for i, m in enumerate(rtilde.matrices)]
        result = newton_solve(p, start, rank)
        if result.residual > tol:
            raise NumericalError(f"Newton did not converge at t = {t}: residual {result.residual:.3g}")
        rep = rtilde.replace(result.matrices, ingredients={}, flags={"t": t})
        ver = verify_representation(p, rep)
        return Sample(float(t), rep, ver.relator, result.iterations, ver.commutator, classify(p, rep))

    ts = list(t_values)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(one, ts))
    else:
        samples = [one(t) for t in ts]
    direction = u1.coordinates or (0j, 0j, 0j)
    residuals = curve.obstruction_residuals if curve is not None else []
    return DeformCertificate(rtilde.alpha, direction, curve.order if curve else 1, residuals, samples)


# --- derivative tests along a curve -------------------------------------------------


def normal_form_entries(r: Rep, alpha: complex, s2: int) -> dict:
    """b21, b31 of B = rho(S2) and the entries of A = rho(S1) after the normal form."""
    target = alpha * root_character(alpha, 3)
    nf, _ = eigen_normal_form(r, target)
    a, b = nf.matrices[0], nf.matrices[s2]
    g = np.linalg.det(np.array([[b[1, 0], a[1, 1] * b[1, 0] + a[1, 2] * b[2, 0]],
                                [b[2, 0], a[2, 1] * b[1, 0] + a[2, 2] * b[2, 0]]]))
    return {"a": a, "b": b, "b21": b[1, 0], "b31": b[2, 0], "g": g}


def richardson(f, h: float) -> float:
    """Combine central differences at h and h/2: error O(h^4)."""
    return (4 * f(h / 2) - f(h)) / 3


@dataclass
class DerivativeReport:
    b31_prime: complex
    g_second: complex
    g0: complex
    g_prime: complex
    a23: complex
    predicted_b31_prime: complex

    def to_dict(self) -> dict:
        def c(x):
            return {"re": x.real, "im": x.imag}

        return {k: c(v) for k, v in self.__dict__.items()}


def derivative_report(p: Presentation, rtilde: Rep, curve: FormalCurve, s2: int, t3: complex,
                      zminus_s2: complex, h: float = 1e-3) -> DerivativeReport:
    """b31'(0) and g''(0) by Richardson-extrapolated central differences on Newton reps."""
    alpha = rtilde.alpha
    rank = numerical_rank(cocycle_matrix(p, adjoint_module(rtilde)))
    cache = {}

    def entries(t):
        if t not in cache:
            if t == 0:
                rep = rtilde
            else:
                res = newton_solve(p, curve.rep_at(t).matrices, rank)
                rep = rtilde.replace(res.matrices)
            cache[t] = normal_form_entries(rep, alpha, s2)
        return cache[t]

    def d1(key):
        return lambda step: (entries(step)[key] - entries(-step)[key]) / (2 * step)

    def d2(key):
        return lambda step: (entries(step)[key] - 2 * entries(0)[key] + entries(-step)[key]) / step**2

    b31p = richardson(d1("b31"), h)
    gpp = richardson(d2("g"), h)
    gp = richardson(d1("g"), h)
    a23 = entries(0)["a"][1, 2]
    predicted = alpha * root_character(alpha, 3) * t3 * zminus_s2
    return DerivativeReport(complex(b31p), complex(gpp), complex(entries(0)["g"]), complex(gp),
                            complex(a23), complex(predicted))
