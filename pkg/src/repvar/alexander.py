"""Alexander matrix and polynomial, root location and the (t - alpha)-torsion gate."""

from __future__ import annotations

import cmath
import os
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import HypothesisError, InputError, NumericalError
from .groupring import WordEvaluator, abelianize, evaluate, fox_derivative
from .knotio import Presentation
from .laurent import LaurentPoly, squarefree_decomposition
from .linalg import numerical_rank

ROOT_CLUSTER_RADIUS = 1e-6
DEFAULT_DIGITS = 15


def default_precision() -> int:
    return int(os.environ.get("REPVAR_PRECISION", DEFAULT_DIGITS))


def alexander_matrix(p: Presentation) -> list[list[LaurentPoly]]:
    """Abelianized Fox Jacobian; entry (j, i) is the image of dR_j/dS_i."""
    return [
        [LaurentPoly(abelianize(fox_derivative(r, i))) for i in range(1, p.num_generators + 1)]
        for r in p.relators
    ]


def laurent_det(m: list[list[LaurentPoly]]) -> LaurentPoly:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return LaurentPoly.const(1)
    a = [row[:] for row in m]
    sign = 1
    prev = LaurentPoly.const(1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return LaurentPoly()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num if num.is_zero() else num.exact_div(prev)
        prev = a[k][k]
    return a[n - 1][n - 1] if sign == 1 else -a[n - 1][n - 1]


def alexander_polynomial(p: Presentation) -> LaurentPoly:
    """Normalized Alexander polynomial from the minor deleting the meridian column.

    For a Wirtinger presentation every generator abelianizes to t, so Fox's
    correction factor (t - 1)/(t^{|S_m|} - 1) is the unit 1.
    """
    m = alexander_matrix(p)
    col = p.meridian - 1
    minor = [[e for i, e in enumerate(row) if i != col] for row in m]
    if len(minor) != p.num_generators - 1:
        raise InputError("presentation does not have deficiency one")
    d = laurent_det(minor)
    if d.is_zero():
        raise InputError("zero Alexander minor: not a knot presentation")
    return d.normalized()


def jacobian_at(p: Presentation, alpha: complex) -> np.ndarray:
    """J(alpha): Fox Jacobian evaluated at the character S_i -> alpha."""
    ev = WordEvaluator([alpha] * p.num_generators)
    out = np.zeros((len(p.relators), p.num_generators), dtype=complex)
    for j, r in enumerate(p.relators):
        for i in range(p.num_generators):
            out[j, i] = evaluate(fox_derivative(r, i + 1), ev)[0, 0]
    return out


# --- roots -------------------------------------------------------------------


def _aberth(coeffs: list, digits: int, maxiter: int = 500) -> list:
    """Aberth-Ehrlich simultaneous iteration; ``coeffs`` from highest degree down."""
    with mpmath.workdps(digits + 10):
        c = [mpmath.mpf(x.numerator) / x.denominator for x in coeffs]
        lead = c[0]
        c = [x / lead for x in c]
        n = len(c) - 1
        dc = [(n - k) * c[k] for k in range(n)]
        radius = 1 + max(abs(x) for x in c[1:])
        z = [radius * 0.5 * mpmath.expj(2 * mpmath.pi * k / n + 0.4) for k in range(n)]
        eps = mpmath.mpf(10) ** (-(digits + 5))
        for _ in range(maxiter):
            worst = 0
            new = list(z)
            for k in range(n):
                fz = mpmath.polyval(c, z[k])
                dz = mpmath.polyval(dc, z[k])
                if fz == 0:
                    continue
                ratio = fz / dz
                s = sum(1 / (z[k] - z[j]) for j in range(n) if j != k)
                w = ratio / (1 - ratio * s)
                new[k] = z[k] - w
                worst = max(worst, abs(w) / max(1, abs(z[k])))
            z = new
            if worst < eps:
                return z
    raise NumericalError("root finder did not converge")


def polynomial_roots(f: LaurentPoly, precision: int | None = None) -> list[tuple[complex, int]]:
    """Roots of ``f`` with multiplicities, via a squarefree decomposition.

    Sorted by multiplicity (descending) then argument (ascending).
    """
    digits = precision or default_precision()
    out = []
    for factor, mult in squarefree_decomposition(f):
        coeffs = list(reversed(factor.to_list()))
        roots = _aberth(coeffs, digits)
        for r in roots:
            val = mpmath.polyval([mpmath.mpf(x.numerator) / x.denominator for x in coeffs], r)
            scale = sum(abs(float(x)) for x in coeffs) * max(1.0, float(abs(r))) ** factor.degree()
            if float(abs(val)) > 1e-10 * scale:
                raise NumericalError(f"root residual {float(abs(val)):.3g} too large")
            out.append((complex(r), mult))
    _check_clusters(out)
    out.sort(key=lambda rm: (-rm[1], cmath.phase(rm[0]), abs(rm[0])))
    return out


def _check_clusters(roots: list[tuple[complex, int]]) -> None:
    # squarefree factors are coprime, so distinct entries must not coincide
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i][0] - roots[j][0]) < ROOT_CLUSTER_RADIUS:
                raise NumericalError(f"roots {roots[i][0]} and {roots[j][0]} cluster")


def root_multiplicity(f: LaurentPoly, alpha: complex, tol: float = 1e-8) -> tuple[int, LaurentPoly | None]:
    """Multiplicity of ``alpha`` as a root of ``f`` and the squarefree factor containing it."""
    for factor, mult in squarefree_decomposition(f):
        scale = sum(abs(float(c)) for c in factor.to_list()) * max(1.0, abs(alpha)) ** factor.degree()
        if abs(factor.eval_complex(alpha)) <= tol * scale:
            return mult, factor
    return 0, None


# --- torsion gate ------------------------------------------------------------


@dataclass(frozen=True)
class TorsionReport:
    alpha: complex
    factor: LaurentPoly
    r: int
    dim_H1: int
    cyclic: bool

    def to_dict(self) -> dict:
        return {"r": self.r, "dimH1": self.dim_H1, "cyclic": self.cyclic,
                "alpha": {"re": self.alpha.real, "im": self.alpha.imag},
                "factor": [int(c) if c.denominator == 1 else str(c) for c in self.factor.to_list()]}


def torsion_report(p: Presentation, alpha: complex, delta: LaurentPoly | None = None) -> TorsionReport:
    """Multiplicity of alpha and dim H^1(pi; C_alpha) = dim ker J(alpha) - 1."""
    if abs(alpha - 1) < 1e-8:
        raise HypothesisError("alpha = 1 is never a root of the Alexander polynomial")
    delta = delta or alexander_polynomial(p)
    r, factor = root_multiplicity(delta, alpha)
    if r == 0:
        raise HypothesisError(f"alpha = {alpha} is not a root of the Alexander polynomial")
    j = jacobian_at(p, alpha)
    kernel = p.num_generators - numerical_rank(j)
    dim_h1 = kernel - 1
    return TorsionReport(complex(alpha), factor, r, dim_h1, dim_h1 == 1)


def require_sl3_hypothesis(report: TorsionReport) -> None:
    """Refuse unless alpha is a multiple root with cyclic torsion."""
    if report.r < 2:
        raise HypothesisError(f"alpha is a simple root (r = {report.r}); the SL(3) construction needs r >= 2")
    if not report.cyclic:
        raise HypothesisError(f"(t - alpha)-torsion is not cyclic (dim H^1 = {report.dim_H1})")


def analysis_report(p: Presentation, precision: int | None = None) -> dict:
    delta = alexander_polynomial(p)
    roots = polynomial_roots(delta, precision) if delta.degree() > 0 else []
    return {
        "delta": delta.int_coeffs(),
        "roots": [{"re": z.real, "im": z.imag, "mult": m} for z, m in roots],
    }
