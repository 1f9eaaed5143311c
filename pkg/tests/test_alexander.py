import cmath
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from repvar.alexander import (
    alexander_matrix,
    alexander_polynomial,
    jacobian_at,
    laurent_det,
    polynomial_roots,
    require_sl3_hypothesis,
    root_multiplicity,
    torsion_report,
)
from repvar.errors import HypothesisError
from repvar.groupring import exponent_sum
from repvar.knotio import catalog_lookup, wirtinger_presentation
from repvar.laurent import LaurentPoly, poly_gcd, squarefree_decomposition
from repvar.linalg import numerical_rank

from .conftest import ALPHA
from .test_groupring import fox_bruteforce

T = sympy.symbols("t")


def sympy_alexander(p):
    """Independent oracle: product-rule Fox derivatives, sympy determinant, sympy normalization."""
    rows = []
    for r in p.relators:
        row = []
        for i in range(1, p.num_generators + 1):
            e = fox_bruteforce(r, i)
            row.append(sum(c * T ** exponent_sum(w) for w, c in e.terms.items()))
        rows.append(row)
    m = sympy.Matrix(rows)
    m.col_del(p.meridian - 1)
    det = sympy.factor(sympy.simplify(m.det()))
    num = sympy.Poly(sympy.numer(sympy.together(det)), T)
    coeffs = num.all_coeffs()[::-1]
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if coeffs[-1] < 0:
        coeffs = [-c for c in coeffs]
    return [int(c) for c in coeffs]


@pytest.mark.parametrize("name", ["trefoil", "figure8", "5_1", "8_20", "granny", "square"])
def test_alexander_matches_sympy_oracle(name, presentations):
    p = presentations[name]
    assert alexander_polynomial(p).int_coeffs() == sympy_alexander(p)


@pytest.mark.parametrize("name,delta", [("unknot", [1]), ("trefoil", [1, -1, 1]), ("figure8", [1, -3, 1]),
                                        ("8_20", [1, -2, 3, -2, 1])])
def test_alexander_values(name, delta, presentations):
    assert alexander_polynomial(presentations[name]).int_coeffs() == delta


def test_alexander_matrix_shapes(presentations):
    assert alexander_matrix(presentations["unknot"]) == []
    m = alexander_matrix(presentations["8_20"])
    assert len(m) == 7 and all(len(row) == 8 for row in m)


def test_symmetry_and_unit_at_one(presentations):
    for p in presentations.values():
        d = alexander_polynomial(p)
        assert d(1) in (1, -1)
        assert d.substitute_inverse().shift(d.degree()) in (d, -d)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=2, max_size=4), min_size=1, max_size=3),
       st.lists(st.integers(1, 3), min_size=3, max_size=3))
def test_squarefree_matches_sympy(factors, mults):
    f = LaurentPoly.const(1)
    expr = sympy.Integer(1)
    for k, cs in enumerate(factors):
        if all(c == 0 for c in cs):
            continue
        g = LaurentPoly.from_list(cs)
        f = f * g ** mults[k]
        expr *= sympy.Poly(cs[::-1], T).as_expr() ** mults[k]
    if f.degree() <= 0:
        return
    ours = squarefree_decomposition(f)
    prod = LaurentPoly.const(1)
    for g, m in ours:
        prod = prod * g**m
    lead = f.shift(-f.low()).monic()
    assert prod == lead
    poly = sympy.Poly(expr, T)
    low = min(m[0] for m in poly.monoms())
    _, sq = sympy.sqf_list(sympy.Poly(sympy.cancel(expr / T**low), T))  # t is a unit
    expected = {}
    for g, m in sq:
        g = sympy.Poly(g, T)
        if g.degree() > 0:
            expected[m] = expected.get(m, 0) + g.degree()
    got = {}
    for g, m in ours:
        got[m] = got.get(m, 0) + g.degree()
    assert got == expected


def test_squarefree_examples():
    tt = LaurentPoly.from_list([1, -1, 1])
    assert squarefree_decomposition(tt) == [(tt, 1)]
    assert squarefree_decomposition(tt * tt) == [(tt, 2)]
    lin = LaurentPoly.from_list([-2, 1])
    out = squarefree_decomposition(lin * lin * tt)
    assert sorted(out, key=lambda x: -x[1]) == [(lin, 2), (tt, 1)]


def test_laurent_arithmetic():
    a = LaurentPoly({-1: 1, 2: Fraction(1, 2)})
    b = LaurentPoly.from_list([1, 1])
    assert (a * b - b * a).is_zero()
    assert (a * b).exact_div(b) == a
    assert poly_gcd(b * b, b * LaurentPoly.from_list([3, 1])) == b
    assert laurent_det([[b, a], [a, b]]) == b * b - a * a


def test_roots_match_numpy():
    for name in ["trefoil", "figure8", "5_1", "8_20"]:
        p = wirtinger_presentation(catalog_lookup(name))
        d = alexander_polynomial(p)
        ours = [z for z, m in polynomial_roots(d) for _ in range(m)]
        ref = np.roots([float(c) for c in d.to_list()[::-1]])
        assert len(ref) == len(ours)
        # numpy.roots splits double roots by ~sqrt(eps)
        assert all(min(abs(r - z) for z in ours) < 1e-6 for r in ref)
        assert all(min(abs(r - z) for r in ref) < 1e-6 for z in ours)


def test_root_order_and_values():
    d = alexander_polynomial(wirtinger_presentation(catalog_lookup("8_20")))
    roots = polynomial_roots(d)
    assert [m for _, m in roots] == [2, 2]
    assert abs(roots[0][0] - ALPHA.conjugate()) < 1e-14 and abs(roots[1][0] - ALPHA) < 1e-14
    lin = LaurentPoly.from_list([-1, 1])
    assert polynomial_roots(lin) == [(1 + 0j, 1)]


def test_high_precision_roots():
    d = LaurentPoly.from_list([1, -3, 1])
    (z1, _), (z2, _) = polynomial_roots(d, precision=40)
    golden = (3 + 5 ** 0.5) / 2
    assert min(abs(z1 - golden), abs(z2 - golden)) < 1e-14


def test_torsion_reports(presentations):
    rep = torsion_report(presentations["8_20"], ALPHA)
    assert (rep.r, rep.dim_H1, rep.cyclic) == (2, 1, True)
    require_sl3_hypothesis(rep)
    tref = torsion_report(presentations["trefoil"], ALPHA)
    assert (tref.r, tref.dim_H1, tref.cyclic) == (1, 1, True)
    with pytest.raises(HypothesisError):
        require_sl3_hypothesis(tref)
    fig8 = torsion_report(presentations["figure8"], (3 + 5 ** 0.5) / 2)
    assert fig8.r == 1
    with pytest.raises(HypothesisError):
        torsion_report(presentations["trefoil"], 1.0)
    with pytest.raises(HypothesisError):
        torsion_report(presentations["trefoil"], 2.0)


@pytest.mark.parametrize("name", ["granny", "square"])
def test_noncyclic_torsion_is_refused(name, presentations):
    rep = torsion_report(presentations[name], ALPHA)
    assert rep.r == 2 and rep.dim_H1 == 2 and not rep.cyclic
    with pytest.raises(HypothesisError):
        require_sl3_hypothesis(rep)


def test_conjugate_roots_have_equal_kernel(presentations):
    p = presentations["8_20"]
    assert numerical_rank(jacobian_at(p, ALPHA)) == numerical_rank(jacobian_at(p, ALPHA.conjugate()))
    assert numerical_rank(jacobian_at(p, ALPHA)) == numerical_rank(jacobian_at(p, 1 / ALPHA))


def test_torsion_invariant_under_diagram_change():
    a = wirtinger_presentation(catalog_lookup("trefoil"))
    from repvar.knotio import parse_knot_input

    b = wirtinger_presentation(parse_knot_input("BR[2; 1,1,1]"))
    c = wirtinger_presentation(catalog_lookup("trefoil"), drop=0)
    reports = [torsion_report(p, cmath.exp(1j * cmath.pi / 3)) for p in (a, b, c)]
    assert len({(r.r, r.dim_H1) for r in reports}) == 1
    assert root_multiplicity(alexander_polynomial(a), ALPHA)[0] == 1
