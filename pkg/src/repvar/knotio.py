"""Knot diagrams: PD codes, braid closures, Wirtinger presentations.

PD convention: each crossing ``(a, b, c, d)`` lists the four edge labels
counterclockwise starting from the incoming under-strand, so ``a -> c`` is
the under-strand and ``{b, d}`` the over-strand.  For the standard trefoil
diagram ``PD[(1,4,2,5),(3,6,4,1),(5,2,6,3)]``::

        4   2              under-strand 1 -> 2 enters from below,
         \\ /               the over-strand runs 5 -> 4 (right to left),
          /                so this crossing is negative.
         / \\
        1   5

Orientation is recovered by walking the diagram (not from label order), so
any consistent labelling is accepted.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import InputError
from .groupring import Word, exponent_sum, reduce_word

Crossing = tuple[int, int, int, int]


@dataclass(frozen=True)
class PDCode:
    crossings: tuple[Crossing, ...]
    arc_count: int

    def __post_init__(self):
        counts: dict[int, int] = {}
        for x in self.crossings:
            if len(x) != 4:
                raise InputError(f"crossing {x} does not have 4 labels")
            for a in x:
                if not isinstance(a, int) or a < 1:
                    raise InputError(f"arc label {a!r} is not a positive integer")
                counts[a] = counts.get(a, 0) + 1
        bad = sorted(a for a, c in counts.items() if c != 2)
        if bad:
            raise InputError(f"arc labels must appear exactly twice; offending labels {bad}")
        if set(counts) != set(range(1, self.arc_count + 1)):
            raise InputError("arc labels must be exactly 1..arc_count")

    @classmethod
    def from_crossings(cls, crossings) -> PDCode:
        xs = tuple(tuple(int(a) for a in x) for x in crossings)
        labels = {a for x in xs for a in x}
        return cls(xs, len(labels))

    def __len__(self) -> int:
        return len(self.crossings)

    def to_text(self) -> str:
        return "PD[" + ",".join("(" + ",".join(map(str, x)) + ")" for x in self.crossings) + "]"


@dataclass(frozen=True)
class Presentation:
    """Finite presentation of a knot group.

    ``meridian`` is a generator index; ``longitude`` a word commuting with it.
    """

    num_generators: int
    relators: tuple[Word, ...]
    meridian: int = 1
    longitude: Word | None = None
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.num_generators < 1:
            raise InputError("a presentation needs at least one generator")
        for r in self.relators:
            if reduce_word(r) != tuple(r):
                raise InputError(f"relator {r} is not freely reduced")
            if any(abs(x) > self.num_generators for x in r):
                raise InputError(f"relator {r} uses an unknown generator")

    def generator_word(self, i: int) -> Word:
        return (i,)


# --- parsing -----------------------------------------------------------------

_PD_RE = re.compile(r"^\s*PD\s*\[(.*)\]\s*$", re.S)
_BR_RE = re.compile(r"^\s*BR\s*\[\s*(\d+)\s*(?:;(.*))?\]\s*$", re.S)
_TUPLE_RE = re.compile(r"[\(\[]\s*([^\(\)\[\]]*?)\s*[\)\]]")


def parse_knot_input(text: str) -> PDCode:
    """Parse ``PD[(a,b,c,d),...]`` or ``BR[strands; i,-j,...]``."""
    if text is None or not text.strip():
        raise InputError("empty knot input")
    m = _PD_RE.match(text)
    if m:
        body = m.group(1).strip()
        if not body:
            return PDCode((), 0)
        tuples = _TUPLE_RE.findall(body)
        leftover = _TUPLE_RE.sub("", body).replace(",", "").strip()
        if leftover or not tuples:
            raise InputError(f"malformed PD code: {text!r}")
        crossings = []
        for t in tuples:
            try:
                crossings.append(tuple(int(a) for a in t.split(",")))
            except ValueError:
                raise InputError(f"malformed crossing ({t})") from None
        return PDCode.from_crossings(crossings)
    m = _BR_RE.match(text)
    if m:
        strands = int(m.group(1))
        body = (m.group(2) or "").strip()
        try:
            word = [int(a) for a in body.split(",")] if body else []
        except ValueError:
            raise InputError(f"malformed braid word: {text!r}") from None
        return braid_closure(strands, word)
    raise InputError(f"unrecognised knot input: {text!r}")


def braid_closure(strands: int, word: list[int]) -> PDCode:
    """PD code of the closure of a braid; ``i`` is sigma_i (left strand over), ``-i`` its inverse."""
    if strands < 1:
        raise InputError("a braid needs at least one strand")
    for g in word:
        if g == 0 or abs(g) >= strands:
            raise InputError(f"braid generator {g} out of range for {strands} strands")
    if not word:
        if strands == 1:
            return PDCode((), 0)
        raise InputError("closure of the trivial braid on several strands is a link")
    counter = iter(range(1, 10**9))
    bottom = [next(counter) for _ in range(strands)]
    pos = list(bottom)
    raw: list[Crossing] = []
    succ: dict[int, int] = {}
    for g in word:
        i = abs(g) - 1
        left_in, right_in = pos[i], pos[i + 1]
        left_out, right_out = next(counter), next(counter)
        if g > 0:
            # left strand passes over; under-strand runs right_in -> left_out
            raw.append((right_in, right_out, left_out, left_in))
            succ[right_in], succ[left_in] = left_out, right_out
        else:
            # right strand passes over; under-strand runs left_in -> right_out
            raw.append((left_in, right_in, right_out, left_out))
            succ[left_in], succ[right_in] = right_out, left_out
        pos[i], pos[i + 1] = left_out, right_out
    # close up: identify each top label with the bottom label below it
    ident = dict(zip(pos, bottom))
    for top, bot in ident.items():
        if top == bot:
            raise InputError("closure has a strand without crossings (split link)")

    def canon(a: int) -> int:
        return ident.get(a, a)

    xs = [tuple(canon(a) for a in x) for x in raw]
    nxt = {canon(a): canon(b) for a, b in succ.items()}
    start = xs[0][0]
    order = [start]
    while True:
        b = nxt[order[-1]]
        if b == start:
            break
        order.append(b)
    if len(order) != len(nxt):
        raise InputError("braid closure has more than one component")
    relabel = {a: k + 1 for k, a in enumerate(order)}
    return PDCode.from_crossings([tuple(relabel[a] for a in x) for x in xs])


# --- diagram combinatorics ---------------------------------------------------


@dataclass(frozen=True)
class _Diagram:
    order: tuple[int, ...]              # edge labels in traversal order, starting at label 1
    succ: dict[int, int] = field(hash=False)
    arc_of: dict[int, int] = field(hash=False)   # edge label -> Wirtinger generator (1-based)
    num_arcs: int = 0


def _walk(pd: PDCode) -> _Diagram:
    if not pd.crossings:
        return _Diagram((), {}, {}, 1)
    slots: dict[int, list[tuple[int, int]]] = {}
    for ci, x in enumerate(pd.crossings):
        for p, a in enumerate(x):
            slots.setdefault(a, []).append((ci, p))
    # edge e leaves the crossing slot listed first in `exit_slot` and enters the other
    succ: dict[int, int] = {}
    ci, p = 0, 0
    entered = set()
    while (ci, p) not in entered:
        entered.add((ci, p))
        x = pd.crossings[ci]
        out_p = (p + 2) % 4
        e = x[out_p]
        succ[x[p]] = e
        a, b = slots[e]
        ci, p = b if a == (ci, out_p) else a
        if ci == 0 and p == 0:
            break
    if len(succ) != pd.arc_count:
        raise InputError("diagram has more than one component (links are not supported)")
    for ci, x in enumerate(pd.crossings):
        if succ.get(x[0]) != x[2]:
            raise InputError(f"crossing {ci + 1} {x}: under-strand orientation is inconsistent with the diagram")
    order = [1]
    while len(order) < pd.arc_count:
        order.append(succ[order[-1]])

    # Wirtinger arcs: over-strand edges b, d belong to the same arc
    parent = {a: a for a in order}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in pd.crossings:
        ra, rb = find(x[1]), find(x[3])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = sorted({find(a) for a in order})
    index = {r: k + 1 for k, r in enumerate(roots)}
    arc_of = {a: index[find(a)] for a in order}
    return _Diagram(tuple(order), succ, arc_of, len(roots))


def crossing_sign(pd: PDCode, k: int, succ: dict[int, int] | None = None) -> int:
    """+1 for a right-handed crossing: the over-strand runs d -> b."""
    succ = succ if succ is not None else _walk(pd).succ
    a, b, c, d = pd.crossings[k]
    if succ[d] == b and succ[b] != d:
        return 1
    if succ[b] == d and succ[d] != b:
        return -1
    # a one-crossing kink: both readings agree, pick by label order
    return 1 if (b - d) % pd.arc_count == 1 else -1


def writhe(pd: PDCode) -> int:
    dg = _walk(pd)
    return sum(crossing_sign(pd, k, dg.succ) for k in range(len(pd.crossings)))


def _crossing_relations(pd: PDCode, dg: _Diagram):
    """(over, in, out, sign) per crossing, in Wirtinger generator indices."""
    rels = []
    for k, (a, b, c, d) in enumerate(pd.crossings):
        rels.append((dg.arc_of[b], dg.arc_of[a], dg.arc_of[c], crossing_sign(pd, k, dg.succ)))
    return rels


def wirtinger_presentation(pd: PDCode, drop: int | None = None) -> Presentation:
    """Wirtinger presentation with relators S_over^e S_in S_over^-e S_out^-1.

    One relator is redundant; by default the last crossing's is dropped,
    ``drop`` selects another (0-based crossing index).  Generator 1 is the arc
    containing edge label 1 and serves as the meridian.
    """
    dg = _walk(pd)
    if not pd.crossings:
        return Presentation(1, (), meridian=1, longitude=(), labels=("S1",))
    n = len(pd.crossings)
    drop = n - 1 if drop is None else drop
    if not 0 <= drop < n:
        raise InputError(f"drop index {drop} out of range")
    relators = []
    for k, (over, a, c, eps) in enumerate(_crossing_relations(pd, dg)):
        if k == drop:
            continue
        relators.append(reduce_word([eps * over, a, -eps * over, -c]))
    relators = [r for r in relators if r]
    lon = longitude_word(pd)
    labels = tuple(f"S{i}" for i in range(1, dg.num_arcs + 1))
    return Presentation(dg.num_arcs, tuple(relators), meridian=1, longitude=lon, labels=labels)


def longitude_word(pd: PDCode) -> Word:
    """Preferred longitude based at the arc through edge 1.

    Walking the knot, passing under over-arc ``x`` with sign ``e`` gives the
    relation ``S_out = x^e S_in x^-e``; composing them around the knot shows
    ``x_m^e_m ... x_1^e_1`` commutes with the meridian.  Multiplying by
    ``meridian^-writhe`` makes the exponent sum zero.
    """
    dg = _walk(pd)
    if not pd.crossings:
        return ()
    under_at = {x[0]: k for k, x in enumerate(pd.crossings)}
    rels = _crossing_relations(pd, dg)
    letters: list[int] = []
    for e in dg.order:
        k = under_at.get(e)
        if k is not None:
            over, _, _, eps = rels[k]
            letters.append(eps * over)
    w = list(reversed(letters))
    w += [-1 if exponent_sum(w) > 0 else 1] * abs(exponent_sum(w))
    out = reduce_word(w)
    assert exponent_sum(out) == 0
    return out


# --- catalog -----------------------------------------------------------------


def _load_catalog() -> dict[str, str]:
    with resources.files("repvar").joinpath("data/catalog.json").open(encoding="utf-8") as fh:
        return json.load(fh)["knots"]


def catalog_names() -> list[str]:
    return sorted(_load_catalog())


def catalog_lookup(name: str) -> PDCode:
    cat = _load_catalog()
    if name not in cat:
        raise InputError(f"unknown knot {name!r}; catalog has {sorted(cat)}")
    return parse_knot_input(cat[name])


def resolve_knot(text: str) -> tuple[str, PDCode]:
    """Catalog name, path to a file holding PD/BR text, or literal PD/BR text."""
    text = text.strip()
    if text.startswith(("PD", "BR")):
        return text, parse_knot_input(text)
    if text in _load_catalog():
        return text, catalog_lookup(text)
    path = Path(text)
    if path.is_file():
        return path.stem, parse_knot_input(path.read_text(encoding="utf-8"))
    raise InputError(f"{text!r} is neither a catalog name, a file, nor PD/BR text")
