"""Exact Laurent polynomials over Q in one variable t."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from fractions import Fraction
from numbers import Rational


class LaurentPoly:
    """Sparse Laurent polynomial ``sum c_k t^k`` with rational coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, Rational | int] | None = None):
        self._c = {int(k): Fraction(v) for k, v in (coeffs or {}).items() if v != 0}

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_list(cls, coeffs: Sequence[Rational | int], low: int = 0) -> LaurentPoly:
        """Coefficients listed from t^low upwards."""
        return cls({low + i: c for i, c in enumerate(coeffs)})

    @classmethod
    def monomial(cls, k: int, c: Rational | int = 1) -> LaurentPoly:
        return cls({k: c})

    @classmethod
    def const(cls, c: Rational | int) -> LaurentPoly:
        return cls({0: c})

    # -- inspection -----------------------------------------------------------

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def low(self) -> int:
        return min(self._c) if self._c else 0

    def high(self) -> int:
        return max(self._c) if self._c else 0

    def degree(self) -> int:
        """Span high - low (the degree of the normalized polynomial)."""
        return self.high() - self.low() if self._c else -1

    def leading(self) -> Fraction:
        return self._c[self.high()] if self._c else Fraction(0)

    def to_list(self) -> list[Fraction]:
        """Dense coefficients from t^low to t^high."""
        if not self._c:
            return []
        lo = self.low()
        return [self._c.get(k, Fraction(0)) for k in range(lo, self.high() + 1)]

    def int_coeffs(self) -> list[int]:
        out = []
        for c in self.to_list():
            if c.denominator != 1:
                raise ValueError(f"coefficient {c} is not an integer")
            out.append(int(c))
        return out

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            return sum((c * Fraction(x) ** k for k, c in self._c.items()), Fraction(0))
        return self.eval_complex(x)

    def eval_complex(self, x: complex) -> complex:
        return complex(sum(float(c) * complex(x) ** k for k, c in self._c.items()))

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        acc = dict(self._c)
        for k, v in other._c.items():
            acc[k] = acc.get(k, 0) + v
        return LaurentPoly(acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        acc: dict[int, Fraction] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                acc[i + j] = acc.get(i + j, 0) + a * b
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = LaurentPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def shift(self, k: int) -> LaurentPoly:
        return LaurentPoly({e + k: v for e, v in self._c.items()})

    def derivative(self) -> LaurentPoly:
        return LaurentPoly({k - 1: k * v for k, v in self._c.items() if k != 0})

    def substitute_inverse(self) -> LaurentPoly:
        """f(1/t)."""
        return LaurentPoly({-k: v for k, v in self._c.items()})

    def normalized(self) -> LaurentPoly:
        """Lowest exponent 0 and positive leading coefficient (fixes the unit ambiguity)."""
        if not self._c:
            return self
        p = self.shift(-self.low())
        return -p if p.leading() < 0 else p

    def monic(self) -> LaurentPoly:
        p = self.shift(-self.low()) if self._c else self
        lead = p.leading()
        return LaurentPoly({k: v / lead for k, v in p._c.items()}) if self._c else p

    def divmod(self, other: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
        """Polynomial long division; both operands must have nonnegative exponents."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.low() < 0 or other.low() < 0:
            raise ValueError("divmod needs ordinary polynomials")
        rem = LaurentPoly(self._c)
        quo: dict[int, Fraction] = {}
        dh, dl = other.high(), other.leading()
        while not rem.is_zero() and rem.high() >= dh:
            k = rem.high() - dh
            c = rem.leading() / dl
            quo[k] = c
            rem = rem - LaurentPoly({k: c}) * other
        return LaurentPoly(quo), rem

    def exact_div(self, other: LaurentPoly) -> LaurentPoly:
        """Exact quotient of Laurent polynomials (raises if not divisible)."""
        a, b = self.shift(-self.low()), other.shift(-other.low())
        q, r = a.divmod(b)
        if not r.is_zero():
            raise ValueError("not exactly divisible")
        return q.shift(self.low() - other.low())

    def __repr__(self):
        if not self._c:
            return "0"
        terms = []
        for k in sorted(self._c, reverse=True):
            c = self._c[k]
            cs = str(c)
            if k == 0:
                terms.append(cs)
            elif k == 1:
                terms.append(("" if c == 1 else "-" if c == -1 else cs + "*") + "t")
            else:
                terms.append(("" if c == 1 else "-" if c == -1 else cs + "*") + f"t^{k}")
        return " + ".join(terms).replace("+ -", "- ")


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")


def poly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Monic gcd in Q[t] (Laurent units are stripped first)."""
    a = a.shift(-a.low()) if not a.is_zero() else a
    b = b.shift(-b.low()) if not b.is_zero() else b
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, (r.shift(-r.low()) if not r.is_zero() else r)
    return a.monic() if not a.is_zero() else a


def squarefree_decomposition(f: LaurentPoly) -> list[tuple[LaurentPoly, int]]:
    """Yun's algorithm over Q.

    Returns monic squarefree pairwise coprime factors with multiplicities so
    that ``prod(factor**m)`` equals ``f`` up to a unit ``c t^k``.
    """
    if f.is_zero():
        raise ValueError("squarefree decomposition of zero")
    f = f.shift(-f.low()).monic()
    if f.degree() == 0:
        return []
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f.exact_div(a)
    c = df.exact_div(a)
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree() > 0:
        a = poly_gcd(b, d)
        if a.degree() > 0:
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out
