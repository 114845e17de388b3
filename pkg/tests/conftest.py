from pathlib import Path

import pytest

from qthclosure.gb import RingPresentation
from qthclosure.poly import FlatRing
from qthclosure.qthpower import Ideal, Setting

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def check_trace(trace):
    """Chain nesting inside every round and monotone rounds."""
    for mods in trace.modules:
        for big, small in zip(mods, mods[1:]):
            assert big.contains_module(small)
    for a, b in zip(trace.rounds, trace.rounds[1:]):
        assert b.contains_ideal(a)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def abc():
    R = FlatRing(2, (), ("a", "b", "c"))
    return R, Setting(RingPresentation(R))


@pytest.fixture
def mono3(abc):
    R, S = abc
    return Ideal(S, [R("a^5*b^4"), R("b^5*c^4"), R("c^5*a^4")])


@pytest.fixture
def cover_ring():
    R = FlatRing(2, ("y",), ("x31", "x20"), rows=((9, 3, 2), (0, 1, 0)),
                 local_rows=(True, True), naming_rows=2)
    return R, RingPresentation(R, [R("y^2 + x20^9 + y*x31^3")])
