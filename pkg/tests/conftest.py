import pytest

from pplab import BevertonHolt, PeriodicSystem, Pielou, RationalSaturating


@pytest.fixture
def pielou_k1():
    return PeriodicSystem([Pielou(2.0)])


@pytest.fixture
def pielou_k2():
    # the canonical alternating system: P0 = 1.5, limit product 0
    return PeriodicSystem([Pielou(0.5), Pielou(3.0)])


@pytest.fixture
def pielou_k2_boundary():
    # P0 = 1 exactly: zero-attractive by the tie rule
    return PeriodicSystem([Pielou(0.5), Pielou(2.0)])


@pytest.fixture
def beverton_k1():
    return PeriodicSystem([BevertonHolt(lam=3.0, capacity=5.0)])


@pytest.fixture
def rational_out_of_theory():
    # P0 = 2, limit product 2 / (1 + 0.5) = 4/3 >= 1
    return PeriodicSystem([RationalSaturating(beta=2.0, alpha1=1.0, alpha2=2.0)])
