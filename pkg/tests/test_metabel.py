import cmath

import numpy as np
import pytest

from repvar.errors import HypothesisError
from repvar.groupring import WordEvaluator
from repvar.metabel import (
    Rep,
    adjoint_module,
    build_metabelian_sl3,
    burde_derham_rep,
    diagonal_limit,
    diagonal_rep,
    metabelian_defect,
    metabelian_sl3,
    regular_element_check,
    root_character,
    verify_representation,
)
from repvar.cohomology import cohomology_dims

from .conftest import ALPHA

TREF_ROOT = cmath.exp(1j * cmath.pi / 3)


def relator_residual(p, mats):
    ev = WordEvaluator(mats)
    return max(np.linalg.norm(ev(r) - np.eye(mats[0].shape[0])) for r in p.relators)


@pytest.mark.parametrize("name", ["trefoil", "8_20", "figure8"])
def test_burde_derham(name, presentations):
    p = presentations[name]
    alpha = TREF_ROOT if name != "figure8" else (3 - 5 ** 0.5) / 2
    r = burde_derham_rep(p, alpha)
    assert relator_residual(p, r.matrices) < 1e-12
    assert not r.flags["abelian"]
    assert all(abs(np.linalg.det(m) - 1) < 1e-12 for m in r.matrices)


def test_burde_derham_coboundary_is_abelian(presentations):
    p = presentations["8_20"]
    r = burde_derham_rep(p, ALPHA, z=np.full(8, 0.7))
    assert r.flags["abelian"]
    assert relator_residual(p, r.matrices) < 1e-12
    a, b = r.matrices[0], r.matrices[3]
    assert np.allclose(a @ b, b @ a)


def test_rho0_normalization(knot820):
    d = knot820.data
    assert abs(d.z.scalar_values()[0]) < 1e-14 and abs(d.g.scalar_values()[0]) < 1e-14
    assert d.s2 == 1 and abs(d.z.scalar_values()[1] - 1) < 1e-14
    assert np.allclose(d.h.scalar_values(), 1)


def test_meridian_image(knot820):
    mu = knot820.rtilde((knot820.p.meridian,))
    expected = ALPHA ** (-1 / 3) * np.array([[ALPHA, 0, 0], [0, 1, 1], [0, 0, 1]])
    assert np.allclose(mu, expected, atol=1e-14)


def test_rtilde_is_an_sl3_rep(knot820):
    v = verify_representation(knot820.p, knot820.rtilde)
    assert v.ok(tol=1e-10, det_tol=1e-12)
    xi = root_character(ALPHA, 3)
    for m in knot820.rtilde.matrices:
        assert abs(np.trace(m) - xi * (ALPHA + 2)) < 1e-13


def test_regular_meridian(knot820):
    dim, abelian = regular_element_check(knot820.rtilde((1,)))
    assert (dim, abelian) == (2, True)
    dim, _ = regular_element_check(np.eye(3))
    assert dim == 8


def test_metabelian(knot820):
    assert metabelian_defect(knot820.p, knot820.rtilde) < 1e-12


def test_diagonal_limit(knot820):
    rt = knot820.rtilde
    target = diagonal_rep(rt)
    prev = np.inf
    for s in (1e-2, 1e-4, 1e-6):
        lim = diagonal_limit(rt, s)
        gap = max(np.linalg.norm(a - b) for a, b in zip(lim.matrices, target.matrices))
        assert gap < prev
        prev = gap
        assert verify_representation(knot820.p, lim).relator < 1e-8
    assert prev < 1e-5
    xi = root_character(ALPHA, 3)
    assert np.allclose(target.matrices[0], xi * np.diag([ALPHA, 1, 1]))


def test_h_scale_leaves_tables_unchanged(knot820):
    p = knot820.p
    base = cohomology_dims(p, adjoint_module(knot820.rtilde)).dims
    rt2, data2 = metabelian_sl3(p, ALPHA, h_scale=2.0)
    assert verify_representation(p, rt2).ok()
    assert cohomology_dims(p, adjoint_module(rt2)).dims == base
    assert np.allclose(data2.g.scalar_values(), 2 * knot820.data.g.scalar_values())


def test_perturbation_is_detected(knot820):
    rt = knot820.rtilde
    mats = [m.copy() for m in rt.matrices]
    mats[2][0, 2] += 1e-3
    res = verify_representation(knot820.p, rt.replace(mats)).relator
    assert 1e-4 < res < 1e-2


def test_abelian_rep_is_exact(knot820):
    rt = diagonal_rep(knot820.rtilde)
    assert verify_representation(knot820.p, rt).relator < 1e-14


def test_trefoil_is_refused(presentations):
    with pytest.raises(HypothesisError):
        build_metabelian_sl3(presentations["trefoil"], TREF_ROOT)


def test_rep_round_trip(knot820):
    rt = knot820.rtilde
    back = Rep.from_dict(rt.to_dict())
    assert all(np.array_equal(a, b) for a, b in zip(rt.matrices, back.matrices))
    assert back.alpha == rt.alpha and back.flags == rt.flags
    assert np.array_equal(back.ingredients["z"], rt.ingredients["z"])


def test_both_conjugate_roots_work(presentations):
    p = presentations["8_20"]
    for alpha in (ALPHA, ALPHA.conjugate()):
        rt, _ = metabelian_sl3(p, alpha)
        assert verify_representation(p, rt).ok()
