"""Free group words, the integral group ring and Fox calculus.

Words are tuples of nonzero ints: ``k`` stands for generator ``S_k`` and
``-k`` for its inverse (generators are 1-based).  Group ring elements keep
exact integer coefficients; floating point only enters in :func:`evaluate`.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence

import numpy as np

Word = tuple[int, ...]


def reduce_word(letters: Iterable[int]) -> Word:
    """Freely reduce a sequence of letters."""
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(*words: Sequence[int]) -> Word:
    return reduce_word(x for w in words for x in w)


def power(w: Sequence[int], k: int) -> Word:
    if k < 0:
        return power(inverse(w), -k)
    return reduce_word(tuple(w) * k)


def commutator(a: Sequence[int], b: Sequence[int]) -> Word:
    """a b a^-1 b^-1."""
    return multiply(a, b, inverse(a), inverse(b))


def exponent_sum(w: Sequence[int]) -> int:
    """Image of ``w`` under the abelianization pi -> Z (every generator maps to 1)."""
    return sum(1 if x > 0 else -1 for x in w)


class FreeRingElement:
    """Finite integer combination of reduced words (an element of Z[F])."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Sequence[int], int] | None = None):
        acc: dict[Word, int] = {}
        for w, c in (terms or {}).items():
            w = reduce_word(w)
            acc[w] = acc.get(w, 0) + int(c)
        self._terms = {w: c for w, c in acc.items() if c != 0}

    @classmethod
    def word(cls, w: Sequence[int], coeff: int = 1) -> FreeRingElement:
        return cls({tuple(w): coeff})

    @property
    def terms(self) -> dict[Word, int]:
        return dict(self._terms)

    def __add__(self, other: FreeRingElement) -> FreeRingElement:
        acc = dict(self._terms)
        for w, c in other._terms.items():
            acc[w] = acc.get(w, 0) + c
        return FreeRingElement(acc)

    def __neg__(self) -> FreeRingElement:
        return FreeRingElement({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: FreeRingElement) -> FreeRingElement:
        return self + (-other)

    def __mul__(self, other: FreeRingElement) -> FreeRingElement:
        acc: dict[Word, int] = {}
        for u, a in self._terms.items():
            for v, b in other._terms.items():
                w = multiply(u, v)
                acc[w] = acc.get(w, 0) + a * b
        return FreeRingElement(acc)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = FreeRingElement({(): other})
        if not isinstance(other, FreeRingElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "FreeRingElement(0)"
        parts = [f"{c}*{list(w)}" for w, c in sorted(self._terms.items())]
        return "FreeRingElement(" + " + ".join(parts) + ")"

    def augmentation(self) -> int:
        return sum(self._terms.values())


def fox_derivative(w: Sequence[int], i: int) -> FreeRingElement:
    """Fox derivative d w / d S_i, in one left-to-right pass.

    Each occurrence of ``S_i`` at position k contributes ``+prefix``; each
    occurrence of ``S_i^-1`` contributes ``-prefix * S_i^-1``.
    """
    acc: dict[Word, int] = {}
    prefix: list[int] = []
    for x in w:
        if x == i:
            key = reduce_word(prefix)
            acc[key] = acc.get(key, 0) + 1
        prefix.append(x)
        if x == -i:
            key = reduce_word(prefix)
            acc[key] = acc.get(key, 0) - 1
    return FreeRingElement(acc)


class WordEvaluator:
    """Evaluates words under an assignment of invertible matrices to generators.

    Scalars are accepted and treated as 1x1 matrices.
    """

    def __init__(self, generators: Sequence[np.ndarray | complex]):
        mats = [np.atleast_2d(np.asarray(g, dtype=complex)) for g in generators]
        if not mats:
            raise ValueError("need at least one generator")
        d = mats[0].shape
        for m in mats:
            if m.shape != d or d[0] != d[1]:
                raise ValueError(f"generator matrices must all be square of shape {d}, got {m.shape}")
        self.dim = d[0]
        self.mats = mats
        self.invs = [np.linalg.inv(m) for m in mats]

    def letter(self, x: int) -> np.ndarray:
        return self.mats[x - 1] if x > 0 else self.invs[-x - 1]

    def __call__(self, w: Sequence[int]) -> np.ndarray:
        out = np.eye(self.dim, dtype=complex)
        for x in w:
            out = out @ self.letter(x)
        return out

    def prefixes(self, w: Sequence[int]) -> list[np.ndarray]:
        """Images of all prefixes w[:0], w[:1], ..., w[:len(w)]."""
        out = [np.eye(self.dim, dtype=complex)]
        for x in w:
            out.append(out[-1] @ self.letter(x))
        return out


def evaluate(e: FreeRingElement, rep: Sequence[np.ndarray | complex] | WordEvaluator) -> np.ndarray:
    """Extend a generator assignment to a ring homomorphism Z[F] -> M_d(C)."""
    ev = rep if isinstance(rep, WordEvaluator) else WordEvaluator(rep)
    out = np.zeros((ev.dim, ev.dim), dtype=complex)
    for w, c in e.terms.items():
        out += c * ev(w)
    return out


def abelianize(e: FreeRingElement) -> dict[int, int]:
    """Image in Z[t, t^-1] under S_k -> t, as {exponent: coefficient}."""
    acc: dict[int, int] = {}
    for w, c in e.terms.items():
        k = exponent_sum(w)
        acc[k] = acc.get(k, 0) + c
    return {k: c for k, c in acc.items() if c != 0}
