import pytest
from hypothesis import given, settings, strategies as st

from qthclosure.gb import RingPresentation, UnsupportedPresentation
from qthclosure.oracle import (ExponentCone, certify_integral, np_closure, np_member,
                               separated)
from qthclosure.poly import FlatRing
from qthclosure.qthpower import Ideal, Setting, make_setting

THREE = ExponentCone.of([(5, 4, 0), (0, 5, 4), (4, 0, 5)])


def test_cone_minimalizes():
    C = ExponentCone.of([(2, 0), (0, 2), (3, 1), (2, 0)])
    assert C.generators == ((0, 2), (2, 0))
    with pytest.raises(ValueError):
        ExponentCone.of([(1, -1)])
    with pytest.raises(ValueError):
        ExponentCone.of([])


def test_cube_root_of_product():
    r = np_member((3, 3, 3), THREE)
    assert r.status == "true" and r.k == 3
    assert sorted(r.multiset) == sorted(THREE.generators)


@pytest.mark.parametrize("a,k", [
    ((4, 1, 4), 21), ((4, 4, 1), 21), ((1, 4, 4), 21),
    ((4, 2, 3), 21), ((3, 4, 2), 21), ((2, 3, 4), 21),
    ((4, 3, 2), 7), ((2, 4, 3), 7), ((3, 2, 4), 7),
])
def test_degrees_of_the_nine(a, k):
    r = np_member(a, THREE)
    assert r.status == "true" and r.k == k
    assert all(sum(col) <= k * x for col, x in zip(zip(*r.multiset), a))


def test_definite_no():
    C = ExponentCone.of([(9, 0), (0, 9)])
    assert np_member((1, 7), C).status == "false"
    assert separated((1, 7), C)


def test_unknown_is_not_false():
    # (4,1,4) needs k = 21, but sits on the polyhedron: no separation
    r = np_member((4, 1, 4), THREE, kbound=20)
    assert r.status == "unknown" and not r


def test_closure_examples():
    assert np_closure(ExponentCone.of([(2, 0), (0, 2)])).generators == ((0, 2), (1, 1), (2, 0))
    assert np_closure(ExponentCone.of([(1,)])).generators == ((1,),)
    N = np_closure(THREE)
    nine = {(4, 1, 4), (4, 4, 1), (1, 4, 4), (4, 2, 3), (3, 4, 2), (2, 3, 4),
            (4, 3, 2), (2, 4, 3), (3, 2, 4)}
    # frozen from the box enumeration
    assert set(N.generators) == nine | {(3, 3, 3)} | set(THREE.generators)
    assert not N.unknown


def test_kbound_validated():
    with pytest.raises(ValueError):
        np_member((1, 1), ExponentCone.of([(1, 1)]), kbound=0)
    with pytest.raises(ValueError):
        np_member((1,), ExponentCone.of([(1, 1)]))


cones = st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), min_size=1, max_size=3)


@settings(max_examples=40, deadline=None)
@given(cones, st.tuples(st.integers(0, 6), st.integers(0, 6)))
def test_scaling(vecs, a):
    C = ExponentCone.of(vecs)
    r = np_member(a, C)
    if r.status == "true":
        r2 = np_member(tuple(2 * x for x in a), C)
        assert r2.status == "true" and r2.k <= r.k


@settings(max_examples=25, deadline=None)
@given(cones)
def test_closure_idempotent(vecs):
    N = np_closure(ExponentCone.of(vecs))
    assert np_closure(N).generators == N.generators


# --- certificates --------------------------------------------------------------

@pytest.fixture
def xy():
    R = FlatRing(2, (), ("x", "y"))
    return R, Setting(RingPresentation(R))


def test_certificate_xy(xy):
    R, S = xy
    I = Ideal(S, [R("x^2"), R("y^2")])
    cert = certify_integral(R("x*y"), I, 3)
    assert cert.k == 2
    assert cert.coefficients[0].is_zero()
    assert cert.coefficients[1] == R("x^2*y^2")
    assert cert.replay(S.presentation)


def test_certificate_of_one_is_none(xy):
    R, S = xy
    I = Ideal(S, [R("x^2"), R("y^2")])
    assert certify_integral(R.constant(1), I, 3) is None


def test_certificate_cube(mono3):
    R = mono3.setting.presentation.ring
    cert = certify_integral(R("a^3*b^3*c^3"), mono3, 3)
    assert cert.k == 3
    assert cert.coefficients[2] == R("a^9*b^9*c^9")
    assert cert.replay(mono3.setting.presentation)


def test_certificate_with_relations():
    # y^2 = x^3: y lies in the closure of <x> since y^2 - x^3 = 0
    R = FlatRing(3, ("y",), ("x",), rows=((3, 2),))
    pr = RingPresentation(R, [R("y^2 - x^3")])
    S = make_setting(pr, [R("x")], 3)
    cert = certify_integral(R("y"), Ideal(S, [R("x")]), 2)
    assert cert is not None and cert.k == 2
    assert cert.replay(pr)


def test_certificate_needs_exact_setting():
    R = FlatRing(2, ("u",), ("x11", "x10"), rows=((0, 1, 1), (0, 1, 0)),
                 local_rows=(True, True))
    pr = RingPresentation(R, [R("1 + u + u^2*x11^3")])
    gens = [R("x11^3*x10*u"), R("x10^3*u^2")]
    S = make_setting(pr, gens, 2)
    assert S.bound is not None
    with pytest.raises(UnsupportedPresentation):
        certify_integral(R("x11*x10"), Ideal(S, gens), 1)


def test_tampered_certificate_fails_replay(xy):
    R, S = xy
    cert = certify_integral(R("x*y"), Ideal(S, [R("x^2"), R("y^2")]), 2)
    cert.coefficients[1] = R("x^2*y^2 + x^4")
    assert not cert.replay(S.presentation)
